#include "projektor/appendix.hpp"

#include <cmath>
#include <numeric>

#include "projektor/error.hpp"
#include "projektor/random.hpp"

namespace projektor {

namespace {

Eigen::VectorXd singular_values(const Mat& a) {
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues();
}

}  // namespace

PerturbationReport perturbed_iso_bounds(const Mat& f, const Mat& w, const std::vector<double>& alphas,
                                        double beta) {
  if (f.rows() != w.rows() || f.cols() != w.cols() ||
      static_cast<std::size_t>(f.cols()) != alphas.size() || f.cols() == 0) {
    throw Error(ErrorCode::InputError, "perturbed_iso_bounds: shape mismatch");
  }
  const double asum = std::accumulate(alphas.begin(), alphas.end(), 0.0);
  if (!(asum < beta && beta < 0.25)) {
    throw Error(ErrorCode::PreconditionViolated, "perturbed_iso_bounds: need sum(alpha) < beta < 1/4");
  }
  if ((f.transpose() * f - Mat::Identity(f.cols(), f.cols())).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InputError, "perturbed_iso_bounds: f is not orthonormal");
  }
  for (Eigen::Index n = 0; n < f.cols(); ++n) {
    if ((w.col(n) - f.col(n)).norm() > alphas[static_cast<std::size_t>(n)] * (1.0 + 1e-12)) {
      throw Error(ErrorCode::PreconditionViolated, "perturbed_iso_bounds: |w_n - f_n| > alpha_n");
    }
  }
  PerturbationReport r;
  r.beta = beta;
  // T in the coordinates of span{f_n}: coefficients a map to W a.
  const Eigen::VectorXd s = singular_values(w);
  r.norm_T = s(0);
  r.norm_Tinv = 1.0 / s(s.size() - 1);
  r.max_deviation = singular_values(w - f)(0);
  r.bound_T = r.norm_T <= 1.0 + beta + 1e-12;
  r.bound_Tinv = r.norm_Tinv <= 1.0 / (1.0 - beta) + 1e-12;
  r.bound_deviation = r.max_deviation <= beta + 1e-12;
  return r;
}

Extraction extract_almost_orthonormal(const std::vector<Vec>& w, const std::vector<double>& a,
                                      const Subspace& V) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0 && a[i] <= 0.5) || (i && a[i] > a[i - 1])) {
      throw Error(ErrorCode::InputError, "extract_almost_orthonormal: a must be positive, <= 1/2, decreasing");
    }
  }
  Extraction out;
  Mat q = V.basis();
  std::size_t next = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool picked = false;
    for (; next < w.size(); ++next) {
      if (static_cast<int>(w[next].size()) != V.ambient_dim()) {
        throw Error(ErrorCode::InputError, "extract_almost_orthonormal: dimension mismatch");
      }
      Vec r = w[next];
      for (int pass = 0; pass < 2; ++pass) {
        if (q.cols()) r -= q * (q.transpose() * r);
      }
      const double rn = r.norm();
      if (rn == 0.0) continue;
      Vec e = r / rn;
      if ((w[next] - e).norm() <= a[i]) {
        out.indices.push_back(next);
        out.e.push_back(e);
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = e;
        ++next;
        picked = true;
        break;
      }
    }
    if (!picked) {
      out.exhausted = true;
      break;
    }
  }
  return out;
}

AlmostOrthogonality almost_orthogonality_bounds(const Subspace& F, const Subspace& G,
                                                std::uint64_t sample_seed, int samples) {
  if (F.ambient_dim() != G.ambient_dim()) {
    throw Error(ErrorCode::InputError, "almost_orthogonality_bounds: dimension mismatch");
  }
  AlmostOrthogonality r;
  if (!F.is_zero() && !G.is_zero()) r.alpha = singular_values(F.basis().transpose() * G.basis())(0);
  if (r.alpha >= 1.0 / 3.0) {
    throw Error(ErrorCode::PreconditionViolated, "almost_orthogonality_bounds: alpha >= 1/3");
  }
  const Mat pf = F.projector();
  const Mat pg = G.projector();
  const Subspace fg = join(F, G);
  r.sum_norm = singular_values(pf + pg - fg.projector())(0);
  r.prod_norm = singular_values(pf * pg)(0);
  r.bound_sum = 4.0 * std::sqrt(r.alpha);
  r.bound_prod = std::sqrt(r.alpha);

  // x in F v G with |x| <= 1/2 splits as f + g with |f|, |g| <= 1.
  r.decomposition_ok = true;
  if (!fg.is_zero()) {
    Mat fgb(F.ambient_dim(), F.dim() + G.dim());
    fgb << F.basis(), G.basis();
    CounterRng rng(sample_seed, 0x6a09e667ULL);
    Eigen::ColPivHouseholderQR<Mat> solver(fgb);
    for (int s = 0; s < samples; ++s) {
      Vec x = fg.basis() * random_unit(fg.dim(), rng) * 0.5;
      Vec c = solver.solve(x);
      const double nf = c.head(F.dim()).norm();
      const double ng = c.tail(G.dim()).norm();
      if (nf > 1.0 + 1e-9 || ng > 1.0 + 1e-9) r.decomposition_ok = false;
    }
  }
  r.ok = r.sum_norm <= r.bound_sum + 1e-9 && r.prod_norm <= r.bound_prod + 1e-9 && r.decomposition_ok;
  return r;
}

}  // namespace projektor
