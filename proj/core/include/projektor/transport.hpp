#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "projektor/subspace.hpp"

namespace projektor {

// Word over the letters 1..m. Letters are stored in written order; the rightmost acts first.
struct Word {
  int m = 3;
  std::vector<int> letters;

  std::size_t length() const { return letters.size(); }
  std::vector<std::size_t> counts() const;  // |w_i|, i = 1..m
  std::string to_string() const;
  static Word parse(const std::string& text, int m);
};

// left acts after right
Word concat(const Word& left, const Word& right);

Vec eval_word(const Word& word, const std::vector<Mat>& ops, const Vec& x);
Vec eval_word(const Word& word, const std::vector<Subspace>& ops, const Vec& x);
Mat word_matrix(const Word& word, const std::vector<Mat>& ops);

double ladder_residual(int M);       // 1 - cos^M(pi / 2M)
int ladder_size_for(double epsilon);  // least M with ladder_residual(M) < epsilon

struct Ladder {
  std::vector<Subspace> lines;
  Vec result;
  double residual = 0.0;
};
Ladder ladder_transport(const Vec& u, const Vec& v, int M);

struct BlockPlan {
  Subspace E;
  Vec e_in;
  Vec e_out;
  Subspace X;
  Subspace Y;
  Word word;  // over (Z, X, Y) = letters (1, 2, 3); block-local words use 2 and 3
  int ladder_size = 0;
  double epsilon = 0.0;
  double loss = 0.0;  // measured with the block's own X, Y
  bool verified = false;
};

// Throws CONSTRUCTION_FAILED when the measured loss is not below epsilon, unless
// throw_on_failure is false, in which case the unverified block is returned for diagnostics.
BlockPlan build_block(const Subspace& E, const Vec& e_in, const Vec& e_out, double epsilon,
                      bool throw_on_failure = true);

enum class PlanStatus { Ok, ConstructionFailed, ChainDegraded };
const char* to_string(PlanStatus s) noexcept;

struct TransportPlan {
  std::vector<BlockPlan> blocks;
  std::vector<double> epsilons;
  std::vector<Vec> designated;  // e_1 .. e_{n+1}
  Subspace X;
  Subspace Y;  // odd blocks
  Subspace Z;  // even blocks
  Word composite;
  std::vector<std::size_t> boundaries;  // composite prefix length after each block
  std::vector<double> global_block_losses;
  double total_loss = 0.0;
  double telescoping_sum = 0.0;
  bool telescoping_ok = false;
  PlanStatus status = PlanStatus::Ok;
  std::string diagnostics;

  int ambient_dim() const { return X.ambient_dim(); }
  std::vector<Subspace> operators() const { return {Z, X, Y}; }
  // explicit schedule over (X, Y, Z) = (1, 2, 3), in application order
  std::vector<int> schedule_xyz() const;
};

TransportPlan chain_blocks(const std::vector<BlockPlan>& blocks, const std::vector<double>& epsilons);

// Lays out e_1..e_{n+1} and per-block spaces E_i of dimension M_i + 2, builds every block
// without throwing, then chains them. The status records any failure.
TransportPlan build_divergence_plan(const std::vector<double>& epsilons);

std::vector<double> geometric_epsilons(int blocks, int offset);  // 2^{-i-offset}, i = 1..blocks

std::optional<Word> search_word(const std::vector<Subspace>& ops, const Vec& u, const Vec& v,
                                std::size_t max_len, std::size_t beam, double target);

struct WordcontResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};
WordcontResult wordcont_check(const Word& psi, const std::vector<Mat>& A, const std::vector<Mat>& B,
                              const Subspace& E);

// Trajectory of the composite word over (X, Y, Z) from e_1, with the prefix points at block
// boundaries and the located start M of the |I(m, delta)| >= 3 regime.
struct DivergenceDiagnostics {
  std::size_t steps = 0;
  std::vector<Vec> boundary_points;  // e_1 and the prefix images after each block
  double min_boundary_distance = 0.0;
  double delta = 0.1;
  std::vector<std::size_t> sampled;
  std::vector<int> active_sizes;
  std::optional<std::size_t> located_M;  // first sample from which every later sample has |I| >= 3
  bool three_step_ok = false;            // located_M exists and lies in the first half
};
DivergenceDiagnostics analyze_divergence(const TransportPlan& plan, double delta = 0.1,
                                         std::size_t samples = 200);

std::string plan_to_json(const TransportPlan& plan, int indent = 2);

}  // namespace projektor
