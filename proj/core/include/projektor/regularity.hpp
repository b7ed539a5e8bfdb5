#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "projektor/subspace.hpp"

namespace projektor {

struct RegularityOptions {
  bool compute_rate = true;
  std::size_t rate_cycles = 200;
  bool compute_pairs = true;
  double tol = kRankTol;
};

struct RegularityReport {
  int truncation_dim = 0;
  int intersection_dim = 0;
  // Smallest eigenvalue of sum_k (I - P_k) on the orthogonal complement of the intersection L.
  double witness_gap = 0.0;
  Vec witness;
  std::vector<double> dists;  // dist(witness, L_k)
  double max_dist = 0.0;
  double rate = 0.0;  // per-cycle rate of the cyclic product started at the witness
  bool rate_zero_norm = false;
  Mat friedrichs_pairs;
};

Subspace common_intersection(const std::vector<Subspace>& subspaces, double tol = kRankTol);

// Throws EMPTY when L is the whole space.
RegularityReport witness_search(const std::vector<Subspace>& subspaces,
                                const RegularityOptions& options = {});

using Constructor = std::function<std::vector<Subspace>(int truncation)>;

struct ScanFlags {
  bool gap_vanishing = false;
  bool rate_to_one = false;
};

struct ScanResult {
  std::vector<int> truncations;
  std::vector<RegularityReport> reports;
  ScanFlags flags;
};

ScanFlags scan_flags(const std::vector<RegularityReport>& reports, double decay = 10.0);

ScanResult dichotomy_scan(const Constructor& constructor, const std::vector<int>& truncations,
                          const RegularityOptions& options = {}, double decay = 10.0);

struct WitnessPoint {
  int truncation_dim = 0;
  Vec witness;
  double max_dist = 0.0;
};
std::vector<WitnessPoint> extract_witness_sequence(const std::vector<RegularityReport>& reports);

// CSV columns N,witness_gap,max_dist,rate,flag_gap,flag_rate.
void write_scan_csv(std::ostream& out, const ScanResult& scan);

}  // namespace projektor
