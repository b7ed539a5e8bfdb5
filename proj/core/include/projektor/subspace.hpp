#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

namespace projektor {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Relative drop tolerance for orthogonalization and the angle threshold for intersections.
inline constexpr double kRankTol = 1e-10;

// A subspace of R^N held as an N x d matrix with orthonormal columns. d = 0 is the zero subspace.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int ambient_dim);

  // Takes ownership of a basis that is already orthonormal; only the shape is checked.
  static Subspace from_orthonormal(Mat basis);
  static Subspace full(int ambient_dim);

  int ambient_dim() const { return n_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  bool is_zero() const { return basis_.cols() == 0; }
  const Mat& basis() const { return basis_; }

  Mat projector() const;
  double orthonormality_error() const;

 private:
  int n_ = 0;
  Mat basis_;
};

struct AngleProfile {
  std::vector<double> principal_angles;
  double friedrichs_cos = 0.0;
  int dim_intersection = 0;
};

Subspace make_subspace(const Mat& columns, double tol = kRankTol);
Subspace make_subspace(int ambient_dim, const std::vector<Vec>& vectors, double tol = kRankTol);

Vec project(const Subspace& s, const Vec& x);
double dist(const Vec& x, const Subspace& s);

Subspace join(const Subspace& a, const Subspace& b);
Subspace complement(const Subspace& s);
Subspace intersect(const Subspace& a, const Subspace& b, double tol = kRankTol);

AngleProfile principal_angles(const Subspace& a, const Subspace& b, double tol = kRankTol);

// Text format: header "N d", then N rows of d values.
void write_subspace(std::ostream& out, const Subspace& s);
Subspace read_subspace(std::istream& in);

}  // namespace projektor
