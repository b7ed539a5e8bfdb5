#include "projektor/regularity.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "projektor/error.hpp"
#include "projektor/parallel.hpp"
#include "projektor/schedule.hpp"

namespace projektor {

Subspace common_intersection(const std::vector<Subspace>& subspaces, double tol) {
  if (subspaces.empty()) throw Error(ErrorCode::InputError, "empty subspace list");
  Subspace acc = subspaces.front();
  for (std::size_t k = 1; k < subspaces.size() && !acc.is_zero(); ++k) {
    acc = intersect(acc, subspaces[k], tol);
  }
  return acc;
}

namespace {

// Coordinates coupled by a common basis column end up in one block. Every projector is block
// diagonal in this partition, so the eigenproblem splits exactly.
struct Blocks {
  std::vector<std::vector<int>> coords;
  std::vector<int> block_of;
};

Blocks coordinate_blocks(const std::vector<Subspace>& subspaces, int n) {
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (const auto& s : subspaces) {
    const Mat& b = s.basis();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      int first = -1;
      for (int i = 0; i < n; ++i) {
        if (b(i, j) == 0.0) continue;
        if (first < 0) {
          first = find(i);
        } else {
          const int r = find(i);
          if (r != first) parent[static_cast<std::size_t>(std::max(r, first))] = std::min(r, first);
          first = find(first);
        }
      }
    }
  }
  Blocks out;
  out.block_of.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> root_block(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    const int r = find(i);
    int& id = root_block[static_cast<std::size_t>(r)];
    if (id < 0) {
      id = static_cast<int>(out.coords.size());
      out.coords.emplace_back();
    }
    out.coords[static_cast<std::size_t>(id)].push_back(i);
    out.block_of[static_cast<std::size_t>(i)] = id;
  }
  return out;
}

struct LocalResult {
  bool has_complement = false;
  int intersection_dim = 0;
  double gap = 0.0;
  Vec witness;  // local coordinates
};

LocalResult solve_block(const std::vector<Subspace>& subspaces, const Blocks& blocks, int block,
                        double tol) {
  const auto& idx = blocks.coords[static_cast<std::size_t>(block)];
  const int m = static_cast<int>(idx.size());
  std::vector<Subspace> local;
  local.reserve(subspaces.size());
  for (const auto& s : subspaces) {
    const Mat& b = s.basis();
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      for (int i : idx) {
        if (b(i, j) != 0.0) {
          cols.push_back(j);
          break;
        }
      }
    }
    Mat lb(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      for (int r = 0; r < m; ++r) lb(r, static_cast<Eigen::Index>(c)) = b(idx[static_cast<std::size_t>(r)], cols[c]);
    }
    local.push_back(Subspace::from_orthonormal(std::move(lb)));
  }
  LocalResult res;
  Subspace l = common_intersection(local, tol);
  res.intersection_dim = l.dim();
  Subspace lperp = complement(l);
  if (lperp.is_zero()) return res;
  res.has_complement = true;
  Mat op = Mat::Identity(m, m) * static_cast<double>(local.size());
  for (const auto& s : local) {
    if (!s.is_zero()) op.noalias() -= s.basis() * s.basis().transpose();
  }
  const Mat& q = lperp.basis();
  Mat restricted = q.transpose() * op * q;
  Eigen::SelfAdjointEigenSolver<Mat> eig(restricted);
  res.gap = std::max(0.0, eig.eigenvalues()(0));
  Vec w = q * eig.eigenvectors().col(0);
  res.witness = w / w.norm();
  return res;
}

double cyclic_rate(const std::vector<Subspace>& subspaces, const Vec& z0, std::size_t cycles,
                   bool& zero_norm) {
  Trajectory t;
  const std::size_t K = subspaces.size();
  t.cycle_length = static_cast<int>(K);
  Vec z = z0;
  t.norms.push_back(z.norm());
  Vec tmp;
  for (std::size_t c = 0; c < cycles; ++c) {
    for (std::size_t k = 0; k < K; ++k) {
      const Mat& b = subspaces[k].basis();
      tmp.noalias() = b.transpose() * z;
      z.noalias() = b * tmp;
      t.schedule_used.push_back(static_cast<int>(k) + 1);
      t.norms.push_back(z.norm());
    }
  }
  zero_norm = false;
  try {
    return fit_rate(t);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroNorm) throw;
    zero_norm = true;
    return 0.0;
  }
}

}  // namespace

RegularityReport witness_search(const std::vector<Subspace>& subspaces,
                                const RegularityOptions& options) {
  if (subspaces.empty()) throw Error(ErrorCode::InputError, "witness_search: no subspaces");
  const int n = subspaces.front().ambient_dim();
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != n) throw Error(ErrorCode::InputError, "witness_search: dimension mismatch");
  }
  Blocks blocks = coordinate_blocks(subspaces, n);
  RegularityReport rep;
  rep.truncation_dim = n;
  rep.witness_gap = std::numeric_limits<double>::infinity();
  int best_block = -1;
  Vec best_local;
  for (int b = 0; b < static_cast<int>(blocks.coords.size()); ++b) {
    LocalResult lr = solve_block(subspaces, blocks, b, options.tol);
    rep.intersection_dim += lr.intersection_dim;
    if (lr.has_complement && lr.gap < rep.witness_gap) {
      rep.witness_gap = lr.gap;
      best_block = b;
      best_local = lr.witness;
    }
  }
  if (best_block < 0) throw Error(ErrorCode::Empty, "witness_search: intersection is the whole space");
  rep.witness = Vec::Zero(n);
  const auto& idx = blocks.coords[static_cast<std::size_t>(best_block)];
  for (std::size_t r = 0; r < idx.size(); ++r) rep.witness(idx[r]) = best_local(static_cast<Eigen::Index>(r));
  for (const auto& s : subspaces) rep.dists.push_back(dist(rep.witness, s));
  rep.max_dist = *std::max_element(rep.dists.begin(), rep.dists.end());
  if (options.compute_rate) {
    rep.rate = cyclic_rate(subspaces, rep.witness, options.rate_cycles, rep.rate_zero_norm);
  }
  if (options.compute_pairs) {
    const std::size_t K = subspaces.size();
    rep.friedrichs_pairs = Mat::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = i + 1; j < K; ++j) {
        double c = 0.0;
        if (!subspaces[i].is_zero() && !subspaces[j].is_zero()) {
          c = principal_angles(subspaces[i], subspaces[j], options.tol).friedrichs_cos;
        }
        rep.friedrichs_pairs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
        rep.friedrichs_pairs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
      }
    }
  }
  return rep;
}

ScanFlags scan_flags(const std::vector<RegularityReport>& reports, double decay) {
  ScanFlags f;
  if (reports.size() < 2) return f;
  const auto& a = reports.front();
  const auto& b = reports.back();
  f.gap_vanishing = a.witness_gap >= decay * b.witness_gap && a.witness_gap > 0.0;
  const double ga = 1.0 - a.rate;
  const double gb = 1.0 - b.rate;
  f.rate_to_one = ga > 0.0 && ga >= decay * gb;
  return f;
}

ScanResult dichotomy_scan(const Constructor& constructor, const std::vector<int>& truncations,
                          const RegularityOptions& options, double decay) {
  if (truncations.empty()) throw Error(ErrorCode::InputError, "dichotomy_scan: no truncations");
  for (std::size_t i = 1; i < truncations.size(); ++i) {
    if (truncations[i] <= truncations[i - 1]) {
      throw Error(ErrorCode::InputError, "dichotomy_scan: truncations must be strictly increasing");
    }
  }
  ScanResult out;
  out.truncations = truncations;
  out.reports.resize(truncations.size());
  parallel_for(truncations.size(), [&](std::size_t i) {
    out.reports[i] = witness_search(constructor(truncations[i]), options);
  });
  out.flags = scan_flags(out.reports, decay);
  return out;
}

std::vector<WitnessPoint> extract_witness_sequence(const std::vector<RegularityReport>& reports) {
  if (reports.size() < 2) throw Error(ErrorCode::InputError, "need at least two reports");
  std::vector<WitnessPoint> out;
  for (const auto& r : reports) out.push_back({r.truncation_dim, r.witness, r.max_dist});
  return out;
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << "N,witness_gap,max_dist,rate,flag_gap,flag_rate\n";
  char buf[256];
  for (const auto& r : scan.reports) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%d,%d\n", r.truncation_dim, r.witness_gap,
                  r.max_dist, r.rate, scan.flags.gap_vanishing ? 1 : 0,
                  scan.flags.rate_to_one ? 1 : 0);
    out << buf;
  }
}

}  // namespace projektor
