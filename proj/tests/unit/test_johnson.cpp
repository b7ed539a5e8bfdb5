#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include <projektor/error.hpp>
#include <projektor/johnson.hpp>
#include <projektor/rng.hpp>

using namespace projektor;

namespace {

std::vector<FourSet> all_foursets(int K) {
  std::vector<FourSet> v;
  for (int a = 1; a <= K; ++a)
    for (int b = a + 1; b <= K; ++b)
      for (int c = b + 1; c <= K; ++c)
        for (int d = c + 1; d <= K; ++d) v.push_back({a, b, c, d});
  return v;
}

// uniform random walk in J(K,4): swap one member for one non-member
std::vector<FourSet> random_walk(int K, std::size_t len, CounterRng& rng) {
  auto verts = all_foursets(K);
  std::vector<FourSet> w{verts[rng.below(verts.size())]};
  while (w.size() < len) {
    FourSet s = w.back();
    std::vector<int> out;
    for (int x = 1; x <= K; ++x)
      if (!contains(s, x)) out.push_back(x);
    s[rng.below(4)] = out[rng.below(out.size())];
    std::sort(s.begin(), s.end());
    w.push_back(s);
  }
  return w;
}

}  // namespace

TEST(JohnsonGraph, SmallCases) {
  auto g4 = build_johnson(4);
  EXPECT_EQ(g4.vertices.size(), 1u);
  EXPECT_EQ(g4.edges.size(), 0u);
  auto g5 = build_johnson(5);
  EXPECT_EQ(g5.vertices.size(), 5u);
  EXPECT_EQ(g5.edges.size(), 10u);
  EXPECT_THROW(build_johnson(3), Error);
}

TEST(JohnsonGraph, DegreeAndEdgesAgainstBruteForce) {
  // brute-force pair counts from the numpy oracle: 10, 60, 210, 560, 1260
  const std::size_t want[] = {10, 60, 210, 560, 1260};
  for (int K = 5; K <= 9; ++K) {
    auto g = build_johnson(K);
    auto verts = all_foursets(K);
    ASSERT_EQ(g.vertices, verts);
    std::size_t brute = 0;
    for (std::size_t i = 0; i < verts.size(); ++i)
      for (std::size_t j = i + 1; j < verts.size(); ++j) brute += intersection_size(verts[i], verts[j]) == 3;
    EXPECT_EQ(g.edges.size(), brute);
    EXPECT_EQ(g.edges.size(), want[K - 5]);
    for (const auto& nb : g.adjacency()) EXPECT_EQ(nb.size(), static_cast<std::size_t>(4 * (K - 4)));
  }
}

TEST(JohnsonGraph, J6Connected) {
  auto cr = is_connected_cover(all_foursets(6), 6);
  EXPECT_TRUE(cr.cover);
  EXPECT_TRUE(cr.connected);
}

TEST(Cover, Examples) {
  auto a = is_connected_cover({{1, 2, 3, 4}}, 4);
  EXPECT_TRUE(a.cover && a.connected);
  auto b = is_connected_cover({{1, 2, 3, 4}, {5, 6, 7, 8}}, 8);
  EXPECT_TRUE(b.cover);
  EXPECT_FALSE(b.connected);
  auto c = is_connected_cover({{1, 2, 3, 4}, {2, 3, 4, 5}}, 5);
  EXPECT_TRUE(c.cover && c.connected);
  EXPECT_FALSE(is_connected_cover({{1, 2, 3, 4}}, 5).cover);
}

TEST(ConditionD, Examples) {
  Labels all_bad, all_ok;
  for (const auto& s : all_foursets(5)) {
    all_bad[s] = Label::NonclosedSum;
    all_ok[s] = Label::Regular;
  }
  auto d = condition_d(all_bad, 5);
  EXPECT_TRUE(d.holds);
  EXPECT_EQ(d.certificate.size(), 5u);
  EXPECT_FALSE(condition_d(all_ok, 5).holds);

  Labels two = all_ok;
  two[{1, 2, 3, 4}] = Label::NonclosedSum;
  two[{1, 2, 3, 5}] = Label::InfIntersection;
  auto t = condition_d(two, 5);
  EXPECT_TRUE(t.holds);
  EXPECT_EQ(t.certificate, (std::vector<FourSet>{{1, 2, 3, 4}, {1, 2, 3, 5}}));
}

TEST(ConditionD, Monotone) {
  CounterRng rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const int K = 5 + static_cast<int>(rng.below(3));
    Labels labels;
    for (const auto& s : all_foursets(K)) labels[s] = rng.below(4) == 0 ? Label::NonclosedSum : Label::Regular;
    bool before = condition_d(labels, K).holds;
    for (auto& [s, l] : labels) {
      if (l == Label::Regular && rng.below(3) == 0) {
        l = Label::InfIntersection;
        bool after = condition_d(labels, K).holds;
        EXPECT_TRUE(!before || after);
        before = after;
      }
    }
  }
}

TEST(Walk, GeneratedWalksValid) {
  auto V = all_foursets(5);
  auto w = generate_walk(V, 5, 10, 0);
  ASSERT_EQ(w.size(), 10u);
  for (std::size_t i = 1; i < w.size(); ++i) EXPECT_EQ(intersection_size(w[i - 1], w[i]), 3);
  EXPECT_TRUE(is_valid_walk(w));
  EXPECT_TRUE(walk_covers_windows(w, 5, 0));
  EXPECT_EQ(generate_walk(V, 5, 10, 0), w);
}

TEST(Walk, SingleVertexConstant) {
  auto w = generate_walk({{1, 2, 3, 4}}, 4, 5, 0);
  EXPECT_EQ(w, std::vector<FourSet>(5, FourSet{1, 2, 3, 4}));
}

TEST(Walk, Preconditions) {
  auto expect_pre = [](auto f) {
    try {
      f();
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::PreconditionViolated);
    }
  };
  expect_pre([] { generate_walk({{1, 2, 3, 4}}, 5, 4, 0); });
  expect_pre([] { generate_walk({{1, 2, 3, 4}, {5, 6, 7, 8}}, 8, 4, 0); });
  expect_pre([] { generate_walk({}, 5, 4, 0); });
}

TEST(Walk, CertificateWalkCoversEveryWindow) {
  std::vector<FourSet> V{{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 5, 6}};
  auto w = generate_walk(V, 6, 200, 3);
  EXPECT_TRUE(is_valid_walk(w));
  EXPECT_TRUE(walk_covers_windows(w, 6, 2 * V.size()));
}

TEST(Symbols, FirstStepRule) {
  auto s = symbol_sequences({{1, 2, 3, 4}, {1, 2, 3, 5}}, 5);
  EXPECT_EQ(s.seq[0][0], Symbol::X);
  EXPECT_EQ(s.seq[1][0], Symbol::Y);
  EXPECT_EQ(s.seq[2][0], Symbol::Z);
  EXPECT_EQ(s.seq[3][0], Symbol::Zero);
  EXPECT_EQ(s.seq[4][0], Symbol::Zero);
}

TEST(Symbols, RepeatedEdgeKeepsSymbols) {
  auto s = symbol_sequences({{1, 2, 3, 4}, {1, 2, 3, 5}, {1, 2, 3, 4}}, 5);
  for (int k = 0; k < 5; ++k) EXPECT_EQ(s.seq[static_cast<std::size_t>(k)][1], s.seq[static_cast<std::size_t>(k)][0]);
}

TEST(Symbols, TransferRule) {
  // E1 = {1,2,3}, E2 = {2,3,5}: 1 leaves, 5 inherits its symbol
  auto s = symbol_sequences({{1, 2, 3, 4}, {1, 2, 3, 5}, {2, 3, 5, 6}}, 6);
  EXPECT_EQ(s.seq[4][1], Symbol::X);
  EXPECT_EQ(s.seq[0][1], Symbol::Zero);
  EXPECT_EQ(s.seq[1][1], Symbol::Y);
  EXPECT_EQ(s.seq[2][1], Symbol::Z);
}

TEST(Symbols, RejectsInvalidWalk) {
  EXPECT_THROW(symbol_sequences({{1, 2, 3, 4}, {1, 2, 5, 6}}, 6), Error);
  EXPECT_THROW(symbol_sequences({{1, 2, 3, 4}}, 6), Error);
}

TEST(BlockStructure, Examples) {
  EXPECT_TRUE(validate_block_structure({1, 1, 1, 0, 0, 1, 1}));
  EXPECT_FALSE(validate_block_structure({1, 0, 1}));
  EXPECT_TRUE(validate_block_structure({0, 0, 0}));
  EXPECT_TRUE(validate_block_structure({0, 1, 1, 0}));
}

TEST(Symbols, RandomWalkProperties) {
  CounterRng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int K = 5 + trial % 4;
    auto walk = random_walk(K, 2 + rng.below(60), rng);
    auto s = symbol_sequences(walk, K);
    for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
      std::multiset<Symbol> col;
      std::set<int> support;
      for (int k = 1; k <= K; ++k) {
        Symbol x = s.seq[static_cast<std::size_t>(k - 1)][i];
        if (x != Symbol::Zero) {
          col.insert(x);
          support.insert(k);
        }
      }
      EXPECT_EQ(col, (std::multiset<Symbol>{Symbol::X, Symbol::Y, Symbol::Z}));
      std::set<int> cap;
      for (int x : walk[i])
        if (contains(walk[i + 1], x)) cap.insert(x);
      EXPECT_EQ(support, cap);
    }
    for (const auto& q : s.seq) EXPECT_TRUE(validate_block_structure(indicator(q)));
  }
}

TEST(SetGraph, J53IsNotEnoughForRegularity) {
  // J(K,3) is connected as well; the distinction is in the gallery, not the graph
  EXPECT_TRUE(set_graph_connected(build_set_graph(5, 3, 2)));
}

TEST(LabelsCsv, RoundTrip) {
  Labels labels;
  labels[{1, 2, 3, 4}] = Label::InfIntersection;
  labels[{1, 2, 3, 5}] = Label::NonclosedSum;
  labels[{2, 3, 4, 5}] = Label::Regular;
  std::stringstream ss;
  write_labels_csv(ss, labels);
  EXPECT_EQ(read_labels_csv(ss), labels);
  std::stringstream bad("x\n");
  EXPECT_THROW(read_labels_csv(bad), Error);
  EXPECT_EQ(parse_label(to_string(Label::NonclosedSum)), Label::NonclosedSum);
}
