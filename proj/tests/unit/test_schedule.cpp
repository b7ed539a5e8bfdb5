#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <projektor/error.hpp>
#include <projektor/gallery.hpp>
#include <projektor/random.hpp>
#include <projektor/schedule.hpp>

using namespace projektor;

namespace {

Subspace line(double angle) {
  return make_subspace(2, {(Vec(2) << std::cos(angle), std::sin(angle)).finished()});
}

std::vector<Subspace> two_lines(double angle) { return {line(0.0), line(angle)}; }

}  // namespace

TEST(ScheduleGen, Cyclic) {
  auto s = Schedule::cyclic(3);
  EXPECT_EQ(s.take(7), (std::vector<int>{1, 2, 3, 1, 2, 3, 1}));
}

TEST(ScheduleGen, SeededRandomReplays) {
  auto a = Schedule::seeded_random(5, 42).take(1000);
  auto b = Schedule::seeded_random(5, 42).take(1000);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, Schedule::seeded_random(5, 43).take(1000));
  for (int k : a) {
    EXPECT_GE(k, 1);
    EXPECT_LE(k, 5);
  }
  EXPECT_TRUE(is_fair(Schedule::seeded_random(5, 42), 1000));
}

TEST(ScheduleGen, ExplicitValidated) {
  EXPECT_THROW(Schedule::explicit_list(2, {1, 3}), Error);
  auto s = Schedule::explicit_list(2, {2, 1});
  EXPECT_EQ(s.at(1), 2);
  EXPECT_THROW(s.at(3), Error);
}

TEST(Fairness, MissingIndexIsUnfair) {
  EXPECT_FALSE(is_fair(Schedule::explicit_list(3, std::vector<int>(100, 1)), 100));
  EXPECT_TRUE(is_fair(Schedule::cyclic(3), 100));
}

TEST(Trajectory, TwoLinesFourSteps) {
  // closed form: each step multiplies the norm by cos(pi/3)
  auto L = two_lines(std::numbers::pi / 3);
  Vec z0 = L[0].basis().col(0);
  auto t = run_trajectory(L, Schedule::cyclic(2), z0, 4);
  ASSERT_EQ(t.norms.size(), 5u);
  // z0 lies on L1, so step 1 is the identity and three effective projections remain
  EXPECT_NEAR(t.norms[4], std::pow(0.5, 3), 1e-15);
  auto u = run_trajectory({L[1], L[0]}, Schedule::cyclic(2), z0, 4);
  EXPECT_NEAR(u.norms[4], 0.0625, 1e-15);
}

TEST(Trajectory, SingleSubspaceConstant) {
  CounterRng rng(1);
  auto S = random_subspace(6, 3, rng);
  Vec z0 = random_unit(6, rng);
  auto t = run_trajectory({S}, Schedule::cyclic(1), z0, 5);
  for (std::size_t i = 2; i < t.points.size(); ++i) EXPECT_LT((t.points[i] - t.points[1]).norm(), 1e-15);
}

TEST(Trajectory, StartInIntersectionConstant) {
  auto a = make_subspace(3, {Vec::Unit(3, 0), Vec::Unit(3, 1)});
  auto b = make_subspace(3, {Vec::Unit(3, 0), Vec::Unit(3, 2)});
  Vec z0 = Vec::Unit(3, 0);
  auto t = run_trajectory({a, b}, Schedule::cyclic(2), z0, 6);
  for (const auto& p : t.points) EXPECT_LT((p - z0).norm(), 1e-15);
  EXPECT_EQ(oscillation(t, 0), 0.0);
}

TEST(ActiveSet, Examples) {
  auto L = build_slownono(10);
  CounterRng rng(5);
  Vec z0 = random_unit(20, rng);
  auto t = run_trajectory(L, Schedule::cyclic(3), z0, 30);
  // z_m after a step with index k lies in L_k
  const auto tight = active_set(t, L, 4, 1e-12);
  EXPECT_NE(std::find(tight.begin(), tight.end(), t.schedule_used[3]), tight.end());
  auto all = active_set(t, L, 10, t.norms[10] + 1e-9);
  EXPECT_EQ(all, (std::vector<int>{1, 2, 3}));
  // oracle: direct dist evaluation
  for (std::size_t m : {7u, 13u, 29u}) {
    std::vector<int> want;
    for (int k = 0; k < 3; ++k) {
      if (dist(t.points[m], L[static_cast<std::size_t>(k)]) < 0.05) want.push_back(k + 1);
    }
    EXPECT_EQ(active_set(t, L, m, 0.05), want);
  }
}

TEST(Oscillation, TwoPointsAtDistanceOne) {
  Trajectory t;
  t.points = {Vec::Unit(2, 0), Vec::Unit(2, 0), Vec::Zero(2)};
  t.norms = {1, 1, 0};
  t.schedule_used = {1, 1};
  EXPECT_NEAR(oscillation(t, 0), 1.0, 1e-15);
}

TEST(Rate, TwoLinesPiOverThree) {
  auto L = two_lines(std::numbers::pi / 3);
  CounterRng rng(2);
  auto t = run_trajectory(L, Schedule::cyclic(2), random_unit(2, rng), 40);
  EXPECT_NEAR(fit_rate(t), 0.25, 1e-6);
}

TEST(Rate, OrthogonalLinesZeroNorm) {
  std::vector<Subspace> L{make_subspace(2, {Vec::Unit(2, 0)}), make_subspace(2, {Vec::Unit(2, 1)})};
  auto t = run_trajectory(L, Schedule::cyclic(2), (Vec(2) << 0.6, 0.8).finished(), 10);
  EXPECT_EQ(t.norms[2], 0.0);
  try {
    fit_rate(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroNorm);
  }
}

TEST(Rate, EqualSubspacesRateOne) {
  auto L = two_lines(0.0);
  auto t = run_trajectory(L, Schedule::cyclic(2), (Vec(2) << 0.6, 0.8).finished(), 10);
  EXPECT_NEAR(fit_rate(t), 1.0, 1e-12);
}

TEST(TwoSpaceDrop, TrivialSegments) {
  auto L = build_slownono(4);
  CounterRng rng(9);
  auto t = run_trajectory(L, Schedule::cyclic(3), random_unit(8, rng), 12);
  EXPECT_TRUE(check_two_space_drop(t, L, 5, 5));
  EXPECT_THROW(check_two_space_drop(t, L, 0, 6), Error);
}

TEST(TwoSpaceDrop, RandomTwoLineSegments) {
  // oracle: 100 random two-line configurations in R^2 and R^5
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    CounterRng rng(seed, 7);
    const int n = seed % 2 ? 5 : 2;
    std::vector<Subspace> L{random_subspace(n, 1, rng), random_subspace(n, 1, rng)};
    Vec z0 = random_unit(n, rng);
    auto t = run_trajectory(L, Schedule::cyclic(2), z0, 9);
    for (std::size_t m = 1; m <= 9; ++m) {
      for (std::size_t k = m; k <= 9; ++k) EXPECT_TRUE(check_two_space_drop(t, L, m, k)) << seed << " " << m << " " << k;
    }
  }
}

class TrajectoryProperty : public ::testing::TestWithParam<int> {};

TEST_P(TrajectoryProperty, NormsMonotoneAndPythagoras) {
  CounterRng rng(static_cast<std::uint64_t>(GetParam()), 11);
  const int n = 3 + static_cast<int>(rng.below(12));
  const int K = 2 + static_cast<int>(rng.below(4));
  std::vector<Subspace> L;
  for (int k = 0; k < K; ++k) L.push_back(random_subspace(n, 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n))), rng));
  auto t = run_trajectory(L, Schedule::seeded_random(K, rng.next_u64()), random_unit(n, rng), 200);
  for (std::size_t i = 1; i < t.norms.size(); ++i) {
    EXPECT_LE(t.norms[i], t.norms[i - 1] + 1e-15);
    const double lhs = t.norms[i - 1] * t.norms[i - 1];
    const double rhs = t.norms[i] * t.norms[i] + (t.points[i - 1] - t.points[i]).squaredNorm();
    EXPECT_NEAR(lhs, rhs, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, TrajectoryProperty, ::testing::Range(0, 50));
