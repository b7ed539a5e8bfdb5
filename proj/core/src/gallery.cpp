#include "projektor/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

#include "projektor/error.hpp"
#include "projektor/parallel.hpp"
#include "projektor/regularity.hpp"

namespace projektor {

const char* to_string(Family f) noexcept {
  switch (f) {
    case Family::Bk: return "BK";
    case Family::Slownono: return "SLOWNONO";
    case Family::Example5: return "EXAMPLE5";
    case Family::Not3: return "NOT3";
    case Family::Johnbio: return "JOHNBIO";
  }
  return "UNKNOWN";
}

Family parse_family(const std::string& s) {
  for (Family f : {Family::Bk, Family::Slownono, Family::Example5, Family::Not3, Family::Johnbio}) {
    if (s == to_string(f)) return f;
  }
  throw Error(ErrorCode::InputError, "unknown gallery family '" + s + "'");
}

int GalleryConfig::subspace_count() const {
  switch (family) {
    case Family::Bk:
    case Family::Slownono: return 3;
    default: return K;
  }
}

void validate(const GalleryConfig& cfg) {
  switch (cfg.family) {
    case Family::Bk:
    case Family::Slownono:
      if (cfg.J < 1) throw Error(ErrorCode::InputError, "J must be >= 1");
      break;
    case Family::Not3:
      if (cfg.K < 4) throw Error(ErrorCode::InputError, "NOT3 needs K >= 4");
      if (cfg.J < cfg.K - 2) throw Error(ErrorCode::InputError, "NOT3 needs J >= K - 2");
      break;
    case Family::Example5:
      if (cfg.K < 5) throw Error(ErrorCode::InputError, "EXAMPLE5 needs K >= 5");
      for (double e : cfg.epsilons) {
        if (!(e > 0.0 && e < 1.0)) throw Error(ErrorCode::InputError, "EXAMPLE5 epsilons must lie in (0,1)");
      }
      break;
    case Family::Johnbio: {
      if (cfg.K < 4) throw Error(ErrorCode::InputError, "JOHNBIO needs K >= 4");
      if (cfg.n_max < 1) throw Error(ErrorCode::InputError, "JOHNBIO needs n_max >= 1");
      if (cfg.V.empty() || cfg.alpha.size() != cfg.V.size()) {
        throw Error(ErrorCode::InputError, "JOHNBIO needs nonempty V and one alpha per member");
      }
      std::set<int> seen;
      std::set<FourSet> distinct;
      for (const auto& A : cfg.V) {
        for (int x : A) {
          if (x < 1 || x > cfg.K) throw Error(ErrorCode::InputError, "JOHNBIO: member out of range");
          seen.insert(x);
        }
        if (!std::is_sorted(A.begin(), A.end()) || std::adjacent_find(A.begin(), A.end()) != A.end()) {
          throw Error(ErrorCode::InputError, "JOHNBIO: V members must be sorted and distinct");
        }
        distinct.insert(A);
      }
      if (distinct.size() != cfg.V.size()) throw Error(ErrorCode::InputError, "JOHNBIO: repeated V member");
      if (static_cast<int>(seen.size()) != cfg.K) throw Error(ErrorCode::InputError, "JOHNBIO: V does not cover [K]");
      for (int a : cfg.alpha) {
        if (a != 0 && a != 1) throw Error(ErrorCode::InputError, "JOHNBIO: alpha must be 0 or 1");
      }
      break;
    }
  }
}

namespace {

Subspace span_of(int n, const std::vector<Vec>& v) { return make_subspace(n, v); }

}  // namespace

std::vector<Subspace> build_bk(int J) {
  if (J < 1) throw Error(ErrorCode::InputError, "build_bk: J must be >= 1");
  const int n = 3 * J;
  std::vector<Vec> l1, l2, l3;
  for (int j = 1; j <= J; ++j) {
    const int b = 3 * (j - 1);
    l1.push_back(Vec::Unit(n, b + 1));
    l2.push_back(Vec::Unit(n, b + 1) + Vec::Unit(n, b + 2) / j);
    l3.push_back(Vec::Unit(n, b));
  }
  return {span_of(n, l1), span_of(n, l2), span_of(n, l3)};
}

std::vector<Subspace> build_slownono(int J) {
  if (J < 1) throw Error(ErrorCode::InputError, "build_slownono: J must be >= 1");
  const int n = 2 * J;
  std::vector<Vec> l1, l2, l3;
  for (int j = 1; j <= J; ++j) {
    const int b = 2 * (j - 1);
    l1.push_back(Vec::Unit(n, b));
    l2.push_back(Vec::Unit(n, b) + Vec::Unit(n, b + 1) / j);
    l3.push_back(Vec::Unit(n, b) + 2.0 * Vec::Unit(n, b + 1) / j);
  }
  return {span_of(n, l1), span_of(n, l2), span_of(n, l3)};
}

std::vector<Subspace> build_not3(int K, int J) {
  if (K < 4 || J < K - 2) throw Error(ErrorCode::InputError, "build_not3: need K >= 4 and J >= K - 2");
  const int n = 2 * J;
  std::vector<std::vector<Vec>> gens(static_cast<std::size_t>(K));
  for (int j = 1; j <= J; ++j) {
    const int b = 2 * (j - 1);
    gens[0].push_back(Vec::Unit(n, b));
    gens[1].push_back(Vec::Unit(n, b) + Vec::Unit(n, b + 1) / j);
    for (int i = 3; i <= K; ++i) {
      if (j % (K - 2) == i % (K - 2)) {
        gens[static_cast<std::size_t>(i - 1)].push_back(Vec::Unit(n, b) + 2.0 * Vec::Unit(n, b + 1) / j);
      }
    }
  }
  std::vector<Subspace> out;
  for (const auto& g : gens) out.push_back(span_of(n, g));
  return out;
}

std::vector<Subspace> build_johnbio(int K, const std::vector<FourSet>& V, const std::vector<int>& alpha,
                                    int n_max) {
  GalleryConfig cfg;
  cfg.family = Family::Johnbio;
  cfg.K = K;
  cfg.V = V;
  cfg.alpha = alpha;
  cfg.n_max = n_max;
  validate(cfg);
  std::vector<std::size_t> order(V.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return V[a] < V[b]; });
  const int n = static_cast<int>(V.size()) * 5 * n_max;
  std::vector<std::vector<Vec>> gens(static_cast<std::size_t>(K));
  for (std::size_t blk = 0; blk < order.size(); ++blk) {
    const FourSet& A = V[order[blk]];
    const double a = alpha[order[blk]];
    for (int nn = 1; nn <= n_max; ++nn) {
      const int base = 5 * (static_cast<int>(blk) * n_max + nn - 1);
      for (int slot = 0; slot < 4; ++slot) {
        const int k = A[static_cast<std::size_t>(slot)];
        Vec g = Vec::Unit(n, base);
        if (a != 0.0) g += a * Vec::Unit(n, base + 1 + slot) / nn;
        gens[static_cast<std::size_t>(k - 1)].push_back(g);
      }
    }
  }
  std::vector<Subspace> out;
  for (const auto& g : gens) out.push_back(span_of(n, g));
  return out;
}

Example5Build build_example5(int K, const std::vector<double>& epsilons, bool strict) {
  if (K < 5) throw Error(ErrorCode::InputError, "build_example5: K must be >= 5");
  Example5Build out;
  out.plan = build_divergence_plan(epsilons);
  if (strict && out.plan.status != PlanStatus::Ok) {
    throw Error(ErrorCode::ConstructionFailed,
                std::string("build_example5: transport plan ") + to_string(out.plan.status) + ": " +
                    out.plan.diagnostics);
  }
  const int n = out.plan.ambient_dim();
  out.e = out.plan.designated;
  out.subspaces = {out.plan.X, out.plan.Y, out.plan.Z};
  const int mod = K - 3;
  for (int k = 4; k <= K; ++k) {
    std::vector<Vec> g;
    for (std::size_t i = 1; i <= out.e.size(); ++i) {
      if (static_cast<int>(i) % mod == k % mod) g.push_back(out.e[i - 1]);
    }
    out.subspaces.push_back(make_subspace(n, g));
  }
  // A_i = Psi_i(Z, X, Y) P(L_k), i = k mod (K - 3)
  static constexpr int kMap[4] = {0, 3, 1, 2};
  for (std::size_t i = 0; i < out.plan.blocks.size(); ++i) {
    const int idx = static_cast<int>(i) + 1;
    int k = 4;
    while (k % mod != idx % mod) ++k;
    out.schedule.push_back(k);
    const auto& letters = out.plan.blocks[i].word.letters;
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
      int l = *it;
      if (i % 2 == 1 && l == 3) l = 1;
      out.schedule.push_back(kMap[l]);
    }
    out.boundaries.push_back(out.schedule.size());
  }
  Vec z = out.e.front();
  for (int s : out.schedule) z = project(out.subspaces[static_cast<std::size_t>(s - 1)], z);
  out.composite_loss = (z - out.e.back()).norm();
  return out;
}

std::vector<Subspace> build_config(const GalleryConfig& cfg, int truncation) {
  validate(cfg);
  switch (cfg.family) {
    case Family::Bk: return build_bk(truncation);
    case Family::Slownono: return build_slownono(truncation);
    case Family::Not3: return build_not3(cfg.K, truncation);
    case Family::Johnbio: return build_johnbio(cfg.K, cfg.V, cfg.alpha, truncation);
    case Family::Example5: {
      auto eps = cfg.epsilons.empty() ? geometric_epsilons(6, 2) : cfg.epsilons;
      return build_example5(cfg.K, eps, false).subspaces;
    }
  }
  return {};
}

int default_truncation(const GalleryConfig& cfg) {
  return cfg.family == Family::Johnbio ? cfg.n_max : cfg.J;
}

std::string layout_description(const GalleryConfig& cfg) {
  switch (cfg.family) {
    case Family::Bk: return "block j=1..J at coordinates 3(j-1)+{0,1,2} for e_{3j}, e_{3j+1}, e_{3j+2}";
    case Family::Slownono:
    case Family::Not3: return "block j=1..J at coordinates 2(j-1)+{0,1} for e_{2j-1}, e_{2j}";
    case Family::Johnbio:
      return "blocks in sorted V order; block b, index n at coordinates 5(b*n_max+n-1)+{0..4} "
             "for e^A_n then e^A_{i,n} with i in A ascending";
    case Family::Example5:
      return "e_1..e_{n+1} at coordinates 0..n, then M_i fresh coordinates per transport block";
  }
  return "";
}

Labels classify_fourtuples(const std::function<std::vector<Subspace>(int)>& constructor, int K,
                           const std::vector<int>& ladder, const ClassifyOptions& options) {
  if (ladder.size() < 2) throw Error(ErrorCode::InputError, "classify_fourtuples: need >= 2 truncation levels");
  JohnsonGraph g = build_johnson(K);
  std::vector<std::vector<Subspace>> levels;
  for (int t : ladder) {
    levels.push_back(constructor(t));
    if (static_cast<int>(levels.back().size()) != K) {
      throw Error(ErrorCode::InputError, "classify_fourtuples: constructor returned wrong subspace count");
    }
  }
  const std::size_t nv = g.vertices.size();
  const std::size_t nl = ladder.size();
  std::vector<double> gap(nv * nl);
  std::vector<int> idim(nv * nl);
  RegularityOptions ro;
  ro.compute_rate = false;
  ro.compute_pairs = false;
  parallel_for(nv * nl, [&](std::size_t job) {
    const std::size_t v = job / nl;
    const std::size_t l = job % nl;
    std::vector<Subspace> sub;
    for (int k : g.vertices[v]) sub.push_back(levels[l][static_cast<std::size_t>(k - 1)]);
    try {
      RegularityReport r = witness_search(sub, ro);
      gap[job] = r.witness_gap;
      idim[job] = r.intersection_dim;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Empty) throw;
      gap[job] = std::numeric_limits<double>::infinity();
      idim[job] = sub.front().ambient_dim();
    }
  });
  Labels labels;
  for (std::size_t v = 0; v < nv; ++v) {
    bool grows = true;
    for (std::size_t l = 1; l < nl; ++l) grows = grows && idim[v * nl + l] > idim[v * nl + l - 1];
    const double first = gap[v * nl];
    const double last = gap[v * nl + nl - 1];
    Label lab = Label::Regular;
    if (grows) {
      lab = Label::InfIntersection;
    } else if (first > 0.0 && std::isfinite(first) && first >= options.decay * last) {
      lab = Label::NonclosedSum;
    }
    labels[g.vertices[v]] = lab;
  }
  return labels;
}

std::string config_to_json(const GalleryConfig& cfg) {
  nlohmann::json j;
  j["family"] = to_string(cfg.family);
  j["K"] = cfg.K;
  j["J"] = cfg.J;
  if (cfg.family == Family::Johnbio) {
    j["V"] = cfg.V;
    j["alpha"] = cfg.alpha;
    j["n_max"] = cfg.n_max;
  }
  if (cfg.family == Family::Example5) j["epsilons"] = cfg.epsilons;
  j["layout"] = layout_description(cfg);
  return j.dump(2);
}

GalleryConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("gallery config: ") + e.what());
  }
  GalleryConfig c;
  try {
    c.family = parse_family(j.at("family").get<std::string>());
    c.K = j.value("K", c.family == Family::Bk || c.family == Family::Slownono ? 3 : 5);
    c.J = j.value("J", 10);
    c.n_max = j.value("n_max", 20);
    if (j.contains("V")) {
      for (const auto& s : j.at("V")) {
        auto v = s.get<std::vector<int>>();
        if (v.size() != 4) throw Error(ErrorCode::InputError, "gallery config: V members need 4 entries");
        c.V.push_back(make_fourset(v[0], v[1], v[2], v[3]));
      }
    }
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<std::vector<int>>();
    if (j.contains("epsilons")) c.epsilons = j.at("epsilons").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("gallery config: ") + e.what());
  }
  validate(c);
  return c;
}

}  // namespace projektor
