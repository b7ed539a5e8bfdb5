#include <cmath>

#include <gtest/gtest.h>

#include <projektor/appendix.hpp>
#include <projektor/error.hpp>
#include <projektor/random.hpp>

using namespace projektor;

TEST(PerturbedIso, IdentityFamily) {
  Mat f = Mat::Identity(4, 3);
  auto r = perturbed_iso_bounds(f, f, {0.01, 0.01, 0.01}, 0.2);
  EXPECT_NEAR(r.norm_T, 1.0, 1e-14);
  EXPECT_NEAR(r.norm_Tinv, 1.0, 1e-14);
  EXPECT_NEAR(r.max_deviation, 0.0, 1e-15);
  EXPECT_TRUE(r.ok());
}

TEST(PerturbedIso, OneDimensionalClosedForm) {
  const double beta = 0.2;
  Mat f = Mat::Identity(1, 1);
  Mat w = f * (1 + beta / 2);
  auto r = perturbed_iso_bounds(f, w, {beta / 2}, beta + 1e-12);
  EXPECT_NEAR(r.norm_T, 1 + beta / 2, 1e-14);
  EXPECT_LE(r.norm_T, 1 + beta);
  EXPECT_THROW(perturbed_iso_bounds(f, w, {beta / 4}, beta), Error);
}

TEST(PerturbedIso, HypothesisChecked) {
  Mat f = Mat::Identity(3, 2);
  EXPECT_THROW(perturbed_iso_bounds(f, f, {0.1, 0.1}, 0.3), Error);  // beta >= 1/4
  EXPECT_THROW(perturbed_iso_bounds(f, f, {0.1, 0.1}, 0.15), Error); // sum alpha >= beta
}

TEST(PerturbedIso, RandomTrials) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, 51);
    const int n = 2 + static_cast<int>(rng.below(49));
    const int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
    Mat f = random_subspace(n, m, rng).basis();
    std::vector<double> alphas;
    Mat w = f;
    for (int i = 0; i < m; ++i) {
      alphas.push_back(0.02 * std::pow(0.8, i));
      Vec d = random_unit(n, rng) * alphas.back() * rng.uniform();
      w.col(i) += d;
    }
    auto r = perturbed_iso_bounds(f, w, alphas, 0.2);
    EXPECT_TRUE(r.ok()) << seed;
  }
}

TEST(Extract, OrthonormalPerpendicularInput) {
  const int n = 6;
  Subspace V = make_subspace(n, {Vec::Unit(n, 0)});
  std::vector<Vec> w{Vec::Unit(n, 1), Vec::Unit(n, 2), Vec::Unit(n, 3)};
  auto ex = extract_almost_orthonormal(w, {0.1, 0.1, 0.1}, V);
  EXPECT_EQ(ex.indices, (std::vector<std::size_t>{0, 1, 2}));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_LT((ex.e[i] - w[i]).norm(), 1e-15);
  EXPECT_FALSE(ex.exhausted);
}

TEST(Extract, RepeatedVectorExhausts) {
  const int n = 4;
  std::vector<Vec> w(5, Vec::Unit(n, 1));
  auto ex = extract_almost_orthonormal(w, {0.1, 0.1}, Subspace(n));
  EXPECT_LE(ex.indices.size(), 1u);
  EXPECT_TRUE(ex.exhausted);
}

TEST(Extract, PerturbedTowardV) {
  const int N = 40;
  Subspace V = make_subspace(N, {Vec::Unit(N, 0)});
  std::vector<Vec> w;
  for (int k = 1; k < N; ++k) {
    Vec x = Vec::Unit(N, k) + Vec::Unit(N, 0) / (k * k);
    w.push_back(x / x.norm());
  }
  std::vector<double> a{0.05, 0.02, 0.01, 0.005};
  auto ex = extract_almost_orthonormal(w, a, V);
  ASSERT_EQ(ex.indices.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE((w[ex.indices[i]] - ex.e[i]).norm(), a[i]);
    if (i) EXPECT_GT(ex.indices[i], ex.indices[i - 1]);
    EXPECT_LT(std::abs(ex.e[i].dot(Vec::Unit(N, 0))), 1e-14);
  }
  EXPECT_GT(ex.indices.front(), 0u);
}

TEST(AlmostOrth, OrthogonalPair) {
  auto F = make_subspace(4, {Vec::Unit(4, 0), Vec::Unit(4, 1)});
  auto G = make_subspace(4, {Vec::Unit(4, 2)});
  auto r = almost_orthogonality_bounds(F, G);
  EXPECT_NEAR(r.alpha, 0, 1e-15);
  EXPECT_NEAR(r.sum_norm, 0, 1e-14);
  EXPECT_NEAR(r.prod_norm, 0, 1e-15);
  EXPECT_TRUE(r.ok);
}

TEST(AlmostOrth, SixtyDegreesRejected) {
  auto F = make_subspace(2, {(Vec(2) << 1, 0).finished()});
  auto G = make_subspace(2, {(Vec(2) << 0.5, std::sqrt(0.75)).finished()});
  try {
    almost_orthogonality_bounds(F, G);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
  }
}

TEST(AlmostOrth, AlphaIsMaxInnerProduct) {
  CounterRng rng(77);
  auto F = random_subspace(12, 3, rng);
  auto G = random_subspace(12, 2, rng);
  const double alpha = (F.basis().transpose() * G.basis()).jacobiSvd().singularValues()(0);
  double sampled = 0;
  for (int i = 0; i < 100000; ++i) {
    Vec f = F.basis() * random_unit(3, rng);
    Vec g = G.basis() * random_unit(2, rng);
    sampled = std::max(sampled, std::abs(f.dot(g)));
  }
  EXPECT_LE(sampled, alpha + 1e-12);
  EXPECT_GT(sampled, 0.9 * alpha);
}

TEST(AlmostOrth, RandomPairsDimensionsAdd) {
  int accepted = 0;
  for (std::uint64_t seed = 0; accepted < 200; ++seed) {
    CounterRng rng(seed, 5);
    const int n = 20 + static_cast<int>(rng.below(31));
    auto F = random_subspace(n, 1 + static_cast<int>(rng.below(3)), rng);
    auto G = random_subspace(n, 1 + static_cast<int>(rng.below(3)), rng);
    if ((F.basis().transpose() * G.basis()).jacobiSvd().singularValues()(0) >= 1.0 / 3) continue;
    ++accepted;
    auto r = almost_orthogonality_bounds(F, G, seed);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(join(F, G).dim(), F.dim() + G.dim());
  }
}
