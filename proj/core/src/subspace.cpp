#include "projektor/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <string>

#include "projektor/error.hpp"

namespace projektor {

namespace {

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::InputError, std::string(what) + ": ambient dimension mismatch (" +
                                           std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Subspace::Subspace(int ambient_dim) : n_(ambient_dim), basis_(ambient_dim, 0) {
  if (ambient_dim < 0) throw Error(ErrorCode::InputError, "negative ambient dimension");
}

Subspace Subspace::from_orthonormal(Mat basis) {
  Subspace s;
  s.n_ = static_cast<int>(basis.rows());
  if (basis.cols() > basis.rows()) {
    throw Error(ErrorCode::InputError, "basis has more columns than rows");
  }
  s.basis_ = std::move(basis);
  return s;
}

Subspace Subspace::full(int ambient_dim) {
  return from_orthonormal(Mat::Identity(ambient_dim, ambient_dim));
}

Mat Subspace::projector() const { return basis_ * basis_.transpose(); }

double Subspace::orthonormality_error() const {
  if (basis_.cols() == 0) return 0.0;
  Mat g = basis_.transpose() * basis_;
  g -= Mat::Identity(g.rows(), g.cols());
  return g.cwiseAbs().maxCoeff();
}

Subspace make_subspace(const Mat& columns, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InputError, "make_subspace: tol must be positive");
  const int n = static_cast<int>(columns.rows());
  double scale = 0.0;
  for (Eigen::Index j = 0; j < columns.cols(); ++j) scale = std::max(scale, columns.col(j).norm());
  Mat q(n, std::min<Eigen::Index>(n, columns.cols()));
  int d = 0;
  if (scale == 0.0) return Subspace(n);
  for (Eigen::Index j = 0; j < columns.cols() && d < n; ++j) {
    Vec v = columns.col(j);
    // modified Gram-Schmidt, two passes
    for (int pass = 0; pass < 2; ++pass) {
      for (int k = 0; k < d; ++k) v -= q.col(k).dot(v) * q.col(k);
    }
    const double r = v.norm();
    if (r <= tol * scale) continue;
    q.col(d++) = v / r;
  }
  return Subspace::from_orthonormal(q.leftCols(d));
}

Subspace make_subspace(int ambient_dim, const std::vector<Vec>& vectors, double tol) {
  Mat cols(ambient_dim, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    require_same_dim(ambient_dim, static_cast<int>(vectors[j].size()), "make_subspace");
    cols.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return make_subspace(cols, tol);
}

Vec project(const Subspace& s, const Vec& x) {
  require_same_dim(s.ambient_dim(), static_cast<int>(x.size()), "project");
  if (s.is_zero()) return Vec::Zero(x.size());
  const Mat& b = s.basis();
  return b * (b.transpose() * x);
}

double dist(const Vec& x, const Subspace& s) { return (x - project(s, x)).norm(); }

Subspace join(const Subspace& a, const Subspace& b) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "join");
  Mat cols(a.ambient_dim(), a.dim() + b.dim());
  cols << a.basis(), b.basis();
  return make_subspace(cols);
}

Subspace complement(const Subspace& s) {
  const int n = s.ambient_dim();
  const int d = s.dim();
  if (d == 0) return Subspace::full(n);
  if (d == n) return Subspace(n);
  Eigen::HouseholderQR<Mat> qr(s.basis());
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return Subspace::from_orthonormal(q.rightCols(n - d));
}

namespace {

struct PrincipalPairs {
  Mat u;  // principal vectors in a, one per column
  Mat v;  // matching principal vectors in b
  std::vector<double> angles;
};

PrincipalPairs principal_pairs(const Subspace& a, const Subspace& b) {
  PrincipalPairs out;
  Mat m = a.basis().transpose() * b.basis();
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index r = std::min(m.rows(), m.cols());
  out.u = a.basis() * svd.matrixU().leftCols(r);
  out.v = b.basis() * svd.matrixV().leftCols(r);
  out.angles.resize(static_cast<std::size_t>(r));
  for (Eigen::Index i = 0; i < r; ++i) {
    // |u - v| = 2 sin(theta / 2) stays accurate for tiny angles where acos(sigma) does not.
    const double chord = (out.u.col(i) - out.v.col(i)).norm();
    out.angles[static_cast<std::size_t>(i)] = 2.0 * std::asin(std::min(1.0, chord / 2.0));
  }
  return out;
}

}  // namespace

Subspace intersect(const Subspace& a, const Subspace& b, double tol) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "intersect");
  if (!(tol > 0.0)) throw Error(ErrorCode::InputError, "intersect: tol must be positive");
  if (a.is_zero() || b.is_zero()) return Subspace(a.ambient_dim());
  PrincipalPairs p = principal_pairs(a, b);
  std::vector<Vec> keep;
  for (std::size_t i = 0; i < p.angles.size(); ++i) {
    if (p.angles[i] <= tol) keep.push_back(p.u.col(static_cast<Eigen::Index>(i)));
  }
  return make_subspace(a.ambient_dim(), keep);
}

AngleProfile principal_angles(const Subspace& a, const Subspace& b, double tol) {
  require_same_dim(a.ambient_dim(), b.ambient_dim(), "principal_angles");
  if (a.is_zero() || b.is_zero()) {
    throw Error(ErrorCode::EmptySubspace, "principal_angles: zero subspace");
  }
  PrincipalPairs p = principal_pairs(a, b);
  AngleProfile prof;
  prof.principal_angles = p.angles;
  std::sort(prof.principal_angles.begin(), prof.principal_angles.end());
  for (double t : prof.principal_angles) {
    if (t <= tol) {
      ++prof.dim_intersection;
    } else {
      prof.friedrichs_cos = std::cos(t);
      break;
    }
  }
  return prof;
}

void write_subspace(std::ostream& out, const Subspace& s) {
  out << s.ambient_dim() << ' ' << s.dim() << '\n';
  const auto old = out.precision(17);
  for (int i = 0; i < s.ambient_dim(); ++i) {
    for (int j = 0; j < s.dim(); ++j) {
      if (j) out << ' ';
      out << s.basis()(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

Subspace read_subspace(std::istream& in) {
  long long n = -1, d = -1;
  if (!(in >> n >> d) || n < 0 || d < 0 || d > n) {
    throw Error(ErrorCode::InputError, "subspace file: bad header");
  }
  Mat b(n, d);
  for (long long i = 0; i < n; ++i) {
    for (long long j = 0; j < d; ++j) {
      if (!(in >> b(i, j)) || !std::isfinite(b(i, j))) {
        throw Error(ErrorCode::InputError, "subspace file: bad entry");
      }
    }
  }
  Subspace s = Subspace::from_orthonormal(std::move(b));
  if (s.orthonormality_error() > 1e-10) {
    throw Error(ErrorCode::InputError, "subspace file: basis is not orthonormal");
  }
  return s;
}

}  // namespace projektor
