#include "projektor/johnson.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <set>
#include <sstream>
#include <string>

#include "projektor/error.hpp"
#include "projektor/rng.hpp"

namespace projektor {

FourSet make_fourset(int a, int b, int c, int d) {
  FourSet s{a, b, c, d};
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
    throw Error(ErrorCode::InputError, "four-set members must be distinct");
  }
  return s;
}

int intersection_size(const FourSet& a, const FourSet& b) {
  int n = 0;
  for (int x : a) n += contains(b, x) ? 1 : 0;
  return n;
}

bool contains(const FourSet& s, int k) { return std::find(s.begin(), s.end(), k) != s.end(); }

std::vector<std::vector<int>> JohnsonGraph::adjacency() const {
  std::vector<std::vector<int>> adj(vertices.size());
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  return adj;
}

JohnsonGraph induced(const std::vector<FourSet>& vertices, int K) {
  JohnsonGraph g;
  g.K = K;
  g.vertices = vertices;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (intersection_size(vertices[i], vertices[j]) == 3) {
        g.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
      }
    }
  }
  return g;
}

JohnsonGraph build_johnson(int K) {
  if (K < 4) throw Error(ErrorCode::InputError, "build_johnson: K must be >= 4");
  std::vector<FourSet> v;
  for (int a = 1; a <= K; ++a)
    for (int b = a + 1; b <= K; ++b)
      for (int c = b + 1; c <= K; ++c)
        for (int d = c + 1; d <= K; ++d) v.push_back({a, b, c, d});
  return induced(v, K);
}

SetGraph build_set_graph(int K, int m, int shared) {
  if (m < 1 || m > K) throw Error(ErrorCode::InputError, "build_set_graph: need 1 <= m <= K");
  SetGraph g;
  std::vector<int> sel(static_cast<std::size_t>(K), 0);
  std::fill(sel.begin(), sel.begin() + m, 1);
  do {
    std::vector<int> s;
    for (int i = 0; i < K; ++i) {
      if (sel[static_cast<std::size_t>(i)]) s.push_back(i + 1);
    }
    g.vertices.push_back(s);
  } while (std::prev_permutation(sel.begin(), sel.end()));
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < g.vertices.size(); ++j) {
      std::vector<int> common;
      std::set_intersection(g.vertices[i].begin(), g.vertices[i].end(), g.vertices[j].begin(),
                            g.vertices[j].end(), std::back_inserter(common));
      if (static_cast<int>(common.size()) == shared) g.edges.emplace_back(i, j);
    }
  }
  return g;
}

namespace {

std::vector<int> components(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  std::vector<std::vector<int>> adj(n);
  for (auto [a, b] : edges) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  }
  std::vector<int> comp(n, -1);
  int next = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    std::queue<int> q;
    q.push(static_cast<int>(s));
    comp[s] = next;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int w : adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(w)] < 0) {
          comp[static_cast<std::size_t>(w)] = next;
          q.push(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

bool covers(const std::vector<FourSet>& V, int K) {
  std::vector<bool> seen(static_cast<std::size_t>(K) + 1, false);
  for (const auto& s : V) {
    for (int x : s) {
      if (x < 1 || x > K) throw Error(ErrorCode::InputError, "four-set member out of range");
      seen[static_cast<std::size_t>(x)] = true;
    }
  }
  return std::all_of(seen.begin() + 1, seen.end(), [](bool b) { return b; });
}

}  // namespace

bool set_graph_connected(const SetGraph& g) {
  if (g.vertices.empty()) return false;
  auto comp = components(g.vertices.size(), g.edges);
  return *std::max_element(comp.begin(), comp.end()) == 0;
}

CoverResult is_connected_cover(const std::vector<FourSet>& V, int K) {
  CoverResult r;
  if (V.empty()) return r;
  r.cover = covers(V, K);
  JohnsonGraph g = induced(V, K);
  auto comp = components(V.size(), g.edges);
  r.connected = *std::max_element(comp.begin(), comp.end()) == 0;
  return r;
}

const char* to_string(Label l) noexcept {
  switch (l) {
    case Label::InfIntersection: return "INF";
    case Label::NonclosedSum: return "NONCLOSED";
    case Label::Regular: return "REGULAR";
  }
  return "REGULAR";
}

Label parse_label(const std::string& s) {
  if (s == "INF") return Label::InfIntersection;
  if (s == "NONCLOSED") return Label::NonclosedSum;
  if (s == "REGULAR") return Label::Regular;
  throw Error(ErrorCode::InputError, "unknown label '" + s + "'");
}

ConditionD condition_d(const Labels& labels, int K) {
  std::vector<FourSet> bad;
  for (const auto& [s, l] : labels) {
    if (l != Label::Regular) bad.push_back(s);
  }
  ConditionD out;
  if (bad.empty()) return out;
  JohnsonGraph g = induced(bad, K);
  auto comp = components(bad.size(), g.edges);
  const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  // components are numbered in order of their lexicographically first vertex
  for (int c = 0; c < ncomp; ++c) {
    std::vector<FourSet> members;
    for (std::size_t i = 0; i < bad.size(); ++i) {
      if (comp[i] == c) members.push_back(bad[i]);
    }
    if (covers(members, K)) {
      out.holds = true;
      out.certificate = std::move(members);
      return out;
    }
  }
  return out;
}

bool is_valid_walk(const std::vector<FourSet>& walk) {
  for (std::size_t i = 1; i < walk.size(); ++i) {
    if (intersection_size(walk[i - 1], walk[i]) != 3) return false;
  }
  return true;
}

bool walk_covers_windows(const std::vector<FourSet>& walk, int K, std::size_t window) {
  if (window == 0 || walk.size() < window) return covers(walk, K);
  for (std::size_t s = 0; s + window <= walk.size(); ++s) {
    std::vector<FourSet> part(walk.begin() + static_cast<std::ptrdiff_t>(s),
                              walk.begin() + static_cast<std::ptrdiff_t>(s + window));
    if (!covers(part, K)) return false;
  }
  return true;
}

std::vector<FourSet> generate_walk(const std::vector<FourSet>& V, int K, std::size_t n,
                                   std::uint64_t seed) {
  if (V.empty()) throw Error(ErrorCode::PreconditionViolated, "generate_walk: empty vertex set");
  CoverResult cr = is_connected_cover(V, K);
  if (!cr.cover) throw Error(ErrorCode::PreconditionViolated, "generate_walk: V does not cover [K]");
  if (!cr.connected) throw Error(ErrorCode::PreconditionViolated, "generate_walk: G is not connected");
  if (V.size() == 1) return std::vector<FourSet>(n, V.front());

  JohnsonGraph g = induced(V, K);
  auto adj = g.adjacency();
  CounterRng rng(seed);
  for (auto& nb : adj) {
    for (std::size_t i = nb.size(); i > 1; --i) std::swap(nb[i - 1], nb[rng.below(i)]);
  }
  // closed depth-first traversal from vertex 0, returning along tree edges
  std::vector<int> tour;
  std::vector<bool> seen(V.size(), false);
  std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
  seen[0] = true;
  tour.push_back(0);
  while (!stack.empty()) {
    auto& [u, next] = stack.back();
    const auto& nb = adj[static_cast<std::size_t>(u)];
    while (next < nb.size() && seen[static_cast<std::size_t>(nb[next])]) ++next;
    if (next < nb.size()) {
      const int w = nb[next++];
      seen[static_cast<std::size_t>(w)] = true;
      tour.push_back(w);
      stack.emplace_back(w, 0);
    } else {
      stack.pop_back();
      if (!stack.empty()) tour.push_back(stack.back().first);
    }
  }
  tour.pop_back();  // back at vertex 0; the repetition supplies it
  std::vector<FourSet> walk;
  walk.reserve(n);
  for (std::size_t i = 0; i < n; ++i) walk.push_back(V[static_cast<std::size_t>(tour[i % tour.size()])]);
  return walk;
}

SymbolSequences symbol_sequences(const std::vector<FourSet>& walk, int K) {
  if (walk.size() < 2 || !is_valid_walk(walk)) {
    throw Error(ErrorCode::InputError, "symbol_sequences: walk must have consecutive intersections of size 3");
  }
  for (const auto& s : walk) {
    for (int x : s) {
      if (x < 1 || x > K) throw Error(ErrorCode::InputError, "symbol_sequences: member out of range");
    }
  }
  const std::size_t cols = walk.size() - 1;
  SymbolSequences out;
  out.K = K;
  out.seq.assign(static_cast<std::size_t>(K), std::vector<Symbol>(cols, Symbol::Zero));
  auto edge = [&](std::size_t i) {
    std::vector<int> e;
    for (int x : walk[i]) {
      if (contains(walk[i + 1], x)) e.push_back(x);
    }
    return e;
  };
  auto at = [&](int k, std::size_t i) -> Symbol& {
    return out.seq[static_cast<std::size_t>(k - 1)][i];
  };
  std::vector<int> prev = edge(0);
  at(prev[0], 0) = Symbol::X;
  at(prev[1], 0) = Symbol::Y;
  at(prev[2], 0) = Symbol::Z;
  for (std::size_t i = 1; i < cols; ++i) {
    std::vector<int> cur = edge(i);
    for (int k : cur) {
      if (std::find(prev.begin(), prev.end(), k) != prev.end()) at(k, i) = at(k, i - 1);
    }
    std::vector<int> gone, fresh;
    for (int k : prev) {
      if (std::find(cur.begin(), cur.end(), k) == cur.end()) gone.push_back(k);
    }
    for (int k : cur) {
      if (std::find(prev.begin(), prev.end(), k) == prev.end()) fresh.push_back(k);
    }
    if (gone.size() == 1 && fresh.size() == 1) at(fresh[0], i) = at(gone[0], i - 1);
    prev = std::move(cur);
  }
  return out;
}

std::vector<int> indicator(const std::vector<Symbol>& seq) {
  std::vector<int> out(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) out[i] = seq[i] == Symbol::Zero ? 0 : 1;
  return out;
}

bool validate_block_structure(const std::vector<int>& ind) {
  std::size_t i = 0;
  while (i < ind.size() && ind[i] == 0) ++i;  // leading zeros are unconstrained
  while (i < ind.size()) {
    while (i < ind.size() && ind[i] != 0) ++i;
    std::size_t run = 0;
    while (i < ind.size() && ind[i] == 0) {
      ++i;
      ++run;
    }
    if (i < ind.size() && run < 2) return false;
  }
  return true;
}

void write_labels_csv(std::ostream& out, const Labels& labels) {
  out << "a,b,c,d,label\n";
  for (const auto& [s, l] : labels) {
    out << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << ',' << to_string(l) << '\n';
  }
}

Labels read_labels_csv(std::istream& in) {
  Labels labels;
  std::string line;
  if (!std::getline(in, line) || line.rfind("a,b,c,d,label", 0) != 0) {
    throw Error(ErrorCode::InputError, "labels file: missing header a,b,c,d,label");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string f[5];
    for (auto& x : f) {
      if (!std::getline(ss, x, ',')) throw Error(ErrorCode::InputError, "labels file: short row");
    }
    try {
      labels[make_fourset(std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]), std::stoi(f[3]))] =
          parse_label(f[4]);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::InputError, "labels file: bad integer");
    }
  }
  return labels;
}

void write_walk(std::ostream& out, const std::vector<FourSet>& walk) {
  for (const auto& s : walk) out << s[0] << ',' << s[1] << ',' << s[2] << ',' << s[3] << '\n';
}

}  // namespace projektor
