#pragma once

#include <cstdint>
#include <vector>

#include "projektor/subspace.hpp"

namespace projektor {

struct PerturbationReport {
  double beta = 0.0;
  double norm_T = 0.0;
  double norm_Tinv = 0.0;
  double max_deviation = 0.0;  // ||T - I|| on span{f_n}
  bool bound_T = false;        // ||T|| <= 1 + beta
  bool bound_Tinv = false;     // ||T^-1|| <= 1 / (1 - beta)
  bool bound_deviation = false;  // |Tx - x| <= beta |x|
  bool ok() const { return bound_T && bound_Tinv && bound_deviation; }
};

// f: orthonormal columns; w: column n is the image of f_n.
PerturbationReport perturbed_iso_bounds(const Mat& f, const Mat& w, const std::vector<double>& alphas,
                                        double beta);

struct Extraction {
  std::vector<std::size_t> indices;
  std::vector<Vec> e;
  bool exhausted = false;  // fewer picks than tolerances supplied
};

// Greedy finite analogue: picks w_{n_1}, w_{n_2}, ... (n increasing) whose normalized residual
// against V and earlier picks is within a_i.
Extraction extract_almost_orthonormal(const std::vector<Vec>& w, const std::vector<double>& a,
                                      const Subspace& V);

struct AlmostOrthogonality {
  double alpha = 0.0;      // largest |<f, g>| over unit f in F, g in G
  double sum_norm = 0.0;   // ||P(F) + P(G) - P(F v G)||
  double prod_norm = 0.0;  // ||P(F) P(G)||
  double bound_sum = 0.0;  // 4 sqrt(alpha)
  double bound_prod = 0.0; // sqrt(alpha)
  bool decomposition_ok = false;
  bool ok = false;
};

AlmostOrthogonality almost_orthogonality_bounds(const Subspace& F, const Subspace& G,
                                                std::uint64_t sample_seed = 0, int samples = 64);

}  // namespace projektor
