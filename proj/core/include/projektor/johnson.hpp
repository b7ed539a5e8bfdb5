#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace projektor {

// Sorted 4-element subset of 1..K.
using FourSet = std::array<int, 4>;

FourSet make_fourset(int a, int b, int c, int d);
int intersection_size(const FourSet& a, const FourSet& b);
bool contains(const FourSet& s, int k);

struct JohnsonGraph {
  int K = 0;
  std::vector<FourSet> vertices;
  std::vector<std::pair<int, int>> edges;  // vertex indices, i < j

  std::vector<std::vector<int>> adjacency() const;
};

// Full J(K,4), lexicographic vertex order.
JohnsonGraph build_johnson(int K);
JohnsonGraph induced(const std::vector<FourSet>& vertices, int K);

// All m-subsets of 1..K (lexicographic), adjacency when they share `shared` elements.
struct SetGraph {
  std::vector<std::vector<int>> vertices;
  std::vector<std::pair<int, int>> edges;
};
SetGraph build_set_graph(int K, int m, int shared);
bool set_graph_connected(const SetGraph& g);

struct CoverResult {
  bool cover = false;
  bool connected = false;
};
CoverResult is_connected_cover(const std::vector<FourSet>& V, int K);

enum class Label { InfIntersection, NonclosedSum, Regular };
const char* to_string(Label l) noexcept;       // INF, NONCLOSED, REGULAR
Label parse_label(const std::string& s);

using Labels = std::map<FourSet, Label>;

struct ConditionD {
  bool holds = false;
  std::vector<FourSet> certificate;
};
ConditionD condition_d(const Labels& labels, int K);

// Walk of length n in J(K,4) restricted to V, built by repeating a closed spanning walk whose
// neighbour order is shuffled by seed.
std::vector<FourSet> generate_walk(const std::vector<FourSet>& V, int K, std::size_t n,
                                   std::uint64_t seed);
// Consecutive entries intersect in exactly three elements.
bool is_valid_walk(const std::vector<FourSet>& walk);
// Every window of `window` consecutive entries covers 1..K (0 checks the whole walk).
bool walk_covers_windows(const std::vector<FourSet>& walk, int K, std::size_t window);

enum class Symbol : char { Zero = '0', X = 'X', Y = 'Y', Z = 'Z' };

struct SymbolSequences {
  int K = 0;
  std::vector<std::vector<Symbol>> seq;  // seq[k-1][i-1] = s^k_i, i = 1..walk.size()-1
};

SymbolSequences symbol_sequences(const std::vector<FourSet>& walk, int K);
bool validate_block_structure(const std::vector<int>& indicator);
std::vector<int> indicator(const std::vector<Symbol>& seq);

void write_labels_csv(std::ostream& out, const Labels& labels);
Labels read_labels_csv(std::istream& in);
void write_walk(std::ostream& out, const std::vector<FourSet>& walk);

}  // namespace projektor
