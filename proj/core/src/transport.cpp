#include "projektor/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "projektor/error.hpp"
#include "projektor/parallel.hpp"
#include "projektor/schedule.hpp"

namespace projektor {

std::vector<std::size_t> Word::counts() const {
  std::vector<std::size_t> c(static_cast<std::size_t>(m), 0);
  for (int l : letters) ++c[static_cast<std::size_t>(l - 1)];
  return c;
}

std::string Word::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (m > 9 && i) s += ',';
    s += std::to_string(letters[i]);
  }
  return s;
}

Word Word::parse(const std::string& text, int m) {
  Word w;
  w.m = m;
  if (m > 9) {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) w.letters.push_back(std::stoi(tok));
    }
  } else {
    for (char c : text) {
      if (c < '1' || c > '9') throw Error(ErrorCode::InputError, "word: bad letter");
      w.letters.push_back(c - '0');
    }
  }
  for (int l : w.letters) {
    if (l < 1 || l > m) throw Error(ErrorCode::InputError, "word: letter out of range");
  }
  return w;
}

Word concat(const Word& left, const Word& right) {
  if (left.m != right.m) throw Error(ErrorCode::InputError, "concat: alphabet mismatch");
  Word w = left;
  w.letters.insert(w.letters.end(), right.letters.begin(), right.letters.end());
  return w;
}

namespace {

void check_alphabet(const Word& word, std::size_t n_ops) {
  if (static_cast<std::size_t>(word.m) != n_ops) {
    throw Error(ErrorCode::InputError, "eval_word: operator count differs from alphabet size");
  }
}

}  // namespace

Vec eval_word(const Word& word, const std::vector<Mat>& ops, const Vec& x) {
  check_alphabet(word, ops.size());
  Vec z = x;
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    z = ops[static_cast<std::size_t>(*it - 1)] * z;
  }
  return z;
}

Vec eval_word(const Word& word, const std::vector<Subspace>& ops, const Vec& x) {
  check_alphabet(word, ops.size());
  Vec z = x;
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    z = project(ops[static_cast<std::size_t>(*it - 1)], z);
  }
  return z;
}

Mat word_matrix(const Word& word, const std::vector<Mat>& ops) {
  check_alphabet(word, ops.size());
  if (ops.empty()) throw Error(ErrorCode::InputError, "word_matrix: no operators");
  Mat acc = Mat::Identity(ops.front().rows(), ops.front().cols());
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it) {
    acc = ops[static_cast<std::size_t>(*it - 1)] * acc;
  }
  return acc;
}

double ladder_residual(int M) {
  if (M < 1) throw Error(ErrorCode::InputError, "ladder: M must be >= 1");
  // 1 - cos^M(x) as -expm1(M log1p(-2 sin^2(x/2))); the direct pow loses ~M ulps
  const double h = std::sin(std::numbers::pi / (4.0 * M));
  return -std::expm1(M * std::log1p(-2.0 * h * h));
}

int ladder_size_for(double epsilon) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InputError, "ladder: epsilon must be positive");
  int M = 1;
  while (!(ladder_residual(M) < epsilon)) {
    if (M > (1 << 28)) throw Error(ErrorCode::InputError, "ladder: epsilon too small");
    ++M;
  }
  return M;
}

namespace {

void check_orthonormal_pair(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) throw Error(ErrorCode::InputError, "vectors differ in dimension");
  if (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(v.norm() - 1.0) > 1e-10 ||
      std::abs(u.dot(v)) > 1e-10) {
    throw Error(ErrorCode::InputError, "u and v must be orthonormal");
  }
}

Vec ladder_direction(const Vec& u, const Vec& v, int t, int M) {
  const double a = t * std::numbers::pi / (2.0 * M);
  return std::cos(a) * u + std::sin(a) * v;
}

}  // namespace

Ladder ladder_transport(const Vec& u, const Vec& v, int M) {
  check_orthonormal_pair(u, v);
  if (M < 1) throw Error(ErrorCode::InputError, "ladder: M must be >= 1");
  Ladder out;
  const int n = static_cast<int>(u.size());
  out.lines.reserve(static_cast<std::size_t>(M));
  Vec z = u;
  for (int t = 1; t <= M; ++t) {
    out.lines.push_back(make_subspace(n, {ladder_direction(u, v, t, M)}));
    z = project(out.lines.back(), z);
  }
  out.result = z;
  out.residual = (z - v).norm();
  return out;
}

BlockPlan build_block(const Subspace& E, const Vec& e_in, const Vec& e_out, double epsilon,
                      bool throw_on_failure) {
  check_orthonormal_pair(e_in, e_out);
  if (E.ambient_dim() != static_cast<int>(e_in.size())) {
    throw Error(ErrorCode::InputError, "build_block: dimension mismatch");
  }
  if (dist(e_in, E) > 1e-10 || dist(e_out, E) > 1e-10) {
    throw Error(ErrorCode::InputError, "build_block: e_i and e_{i+1} must lie in E_i");
  }
  BlockPlan b;
  b.E = E;
  b.e_in = e_in;
  b.e_out = e_out;
  b.epsilon = epsilon;
  b.ladder_size = ladder_size_for(epsilon);
  const int M = b.ladder_size;
  if (E.dim() < M + 2) {
    throw Error(ErrorCode::ConstructionFailed,
                "build_block: dim E_i = " + std::to_string(E.dim()) + " < ladder size + 2 = " +
                    std::to_string(M + 2));
  }
  const int n = E.ambient_dim();
  std::vector<Vec> xs{e_in, e_out};
  std::vector<Vec> ys;
  for (int t = 1; t <= M; ++t) {
    (t % 2 == 1 ? xs : ys).push_back(ladder_direction(e_in, e_out, t, M));
  }
  b.X = make_subspace(n, xs);
  b.Y = make_subspace(n, ys);
  b.word.m = 3;
  b.word.letters.resize(static_cast<std::size_t>(M));
  for (int t = 1; t <= M; ++t) b.word.letters[static_cast<std::size_t>(M - t)] = t % 2 == 1 ? 2 : 3;
  Vec r = eval_word(b.word, std::vector<Subspace>{Subspace(n), b.X, b.Y}, e_in);
  b.loss = (r - e_out).norm();
  b.verified = b.loss < epsilon;
  if (!b.verified && throw_on_failure) {
    throw Error(ErrorCode::ConstructionFailed,
                "build_block: measured loss " + std::to_string(b.loss) + " >= epsilon " +
                    std::to_string(epsilon));
  }
  return b;
}

const char* to_string(PlanStatus s) noexcept {
  switch (s) {
    case PlanStatus::Ok: return "OK";
    case PlanStatus::ConstructionFailed: return "CONSTRUCTION_FAILED";
    case PlanStatus::ChainDegraded: return "CHAIN_DEGRADED";
  }
  return "UNKNOWN";
}

std::vector<int> TransportPlan::schedule_xyz() const {
  // letters (Z, X, Y) = (1, 2, 3) map to subspace indices (X, Y, Z) = (1, 2, 3)
  static constexpr int kMap[4] = {0, 3, 1, 2};
  std::vector<int> out;
  out.reserve(composite.length());
  for (auto it = composite.letters.rbegin(); it != composite.letters.rend(); ++it) out.push_back(kMap[*it]);
  return out;
}

namespace {

double overlap_norm(const Subspace& a, const Subspace& b) {
  if (a.is_zero() || b.is_zero()) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a.basis().transpose() * b.basis());
  return svd.singularValues()(0);
}

Subspace join_all(int n, const std::vector<const Subspace*>& parts) {
  int total = 0;
  for (const auto* p : parts) total += p->dim();
  Mat cols(n, total);
  int c = 0;
  for (const auto* p : parts) {
    cols.middleCols(c, p->dim()) = p->basis();
    c += p->dim();
  }
  return make_subspace(cols);
}

}  // namespace

TransportPlan chain_blocks(const std::vector<BlockPlan>& blocks, const std::vector<double>& epsilons) {
  if (blocks.empty()) throw Error(ErrorCode::InputError, "chain_blocks: no blocks");
  if (epsilons.size() != blocks.size()) throw Error(ErrorCode::InputError, "chain_blocks: epsilon count");
  const int n = blocks.front().E.ambient_dim();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].E.ambient_dim() != n) throw Error(ErrorCode::InputError, "chain_blocks: dimension mismatch");
    if (i + 1 < blocks.size()) {
      if ((blocks[i].e_out - blocks[i + 1].e_in).norm() > 1e-12) {
        throw Error(ErrorCode::PreconditionViolated, "chain_blocks: e_{i+1} differs between blocks");
      }
      Subspace common = intersect(blocks[i].E, blocks[i + 1].E);
      if (common.dim() != 1 || dist(blocks[i].e_out, common) > 1e-10) {
        throw Error(ErrorCode::PreconditionViolated, "chain_blocks: consecutive blocks must overlap in span{e_{i+1}}");
      }
    }
    for (std::size_t j = i + 2; j < blocks.size(); ++j) {
      if (overlap_norm(blocks[i].E, blocks[j].E) > 1e-10) {
        throw Error(ErrorCode::PreconditionViolated, "chain_blocks: non-adjacent blocks must be orthogonal");
      }
    }
  }
  TransportPlan p;
  p.blocks = blocks;
  p.epsilons = epsilons;
  for (const auto& b : blocks) p.designated.push_back(b.e_in);
  p.designated.push_back(blocks.back().e_out);
  for (std::size_t i = 0; i < p.designated.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(p.designated[i].dot(p.designated[j]) - want) > 1e-10) {
        throw Error(ErrorCode::PreconditionViolated, "chain_blocks: e_i are not orthonormal");
      }
    }
  }

  std::vector<const Subspace*> xs, ys, zs;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    xs.push_back(&blocks[i].X);
    (i % 2 == 0 ? ys : zs).push_back(&blocks[i].Y);  // block i+1 odd -> Y
  }
  p.X = join_all(n, xs);
  p.Y = join_all(n, ys);
  p.Z = join_all(n, zs);

  std::vector<Word> local;
  p.composite.m = 3;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Word w = blocks[i].word;
    if (i % 2 == 1) {
      for (int& l : w.letters) {
        if (l == 3) l = 1;
      }
    }
    local.push_back(w);
    p.composite = concat(w, p.composite);
    p.boundaries.push_back(p.composite.length());
  }

  const auto ops = p.operators();
  bool all_verified = true;
  std::ostringstream diag;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    Vec r = eval_word(local[i], ops, blocks[i].e_in);
    const double g = (r - blocks[i].e_out).norm();
    p.global_block_losses.push_back(g);
    p.telescoping_sum += g;
    if (!blocks[i].verified) {
      all_verified = false;
      diag << "block " << i + 1 << ": local loss " << blocks[i].loss << " >= epsilon "
           << blocks[i].epsilon << "; ";
    }
  }
  Vec end = eval_word(p.composite, ops, p.designated.front());
  p.total_loss = (end - p.designated.back()).norm();
  p.telescoping_ok = p.total_loss <= p.telescoping_sum + 1e-12;
  double eps_sum = 0.0;
  for (double e : epsilons) eps_sum += e;
  if (!all_verified) {
    p.status = PlanStatus::ConstructionFailed;
  } else if (p.total_loss > 2.0 * eps_sum) {
    p.status = PlanStatus::ChainDegraded;
    diag << "total loss " << p.total_loss << " > 2 * sum(epsilon) = " << 2.0 * eps_sum << "; ";
  }
  p.diagnostics = diag.str();
  return p;
}

std::vector<double> geometric_epsilons(int blocks, int offset) {
  std::vector<double> e;
  for (int i = 1; i <= blocks; ++i) e.push_back(std::ldexp(1.0, -(i + offset)));
  return e;
}

TransportPlan build_divergence_plan(const std::vector<double>& epsilons) {
  const int nb = static_cast<int>(epsilons.size());
  if (nb < 1) throw Error(ErrorCode::InputError, "build_divergence_plan: no blocks");
  std::vector<int> ms;
  int n = nb + 1;
  for (double e : epsilons) {
    ms.push_back(ladder_size_for(e));
    n += ms.back();
  }
  std::vector<Vec> es;
  for (int i = 0; i <= nb; ++i) es.push_back(Vec::Unit(n, i));
  std::vector<BlockPlan> blocks;
  int offset = nb + 1;
  for (int i = 0; i < nb; ++i) {
    std::vector<Vec> span{es[static_cast<std::size_t>(i)], es[static_cast<std::size_t>(i + 1)]};
    for (int f = 0; f < ms[static_cast<std::size_t>(i)]; ++f) span.push_back(Vec::Unit(n, offset + f));
    offset += ms[static_cast<std::size_t>(i)];
    blocks.push_back(build_block(make_subspace(n, span), es[static_cast<std::size_t>(i)],
                                 es[static_cast<std::size_t>(i + 1)], epsilons[static_cast<std::size_t>(i)],
                                 false));
  }
  return chain_blocks(blocks, epsilons);
}

std::optional<Word> search_word(const std::vector<Subspace>& ops, const Vec& u, const Vec& v,
                                std::size_t max_len, std::size_t beam, double target) {
  if (std::abs(u.norm() - 1.0) > 1e-10 || std::abs(v.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InputError, "search_word: u and v must be unit vectors");
  }
  if (max_len < 1 || beam < 1) throw Error(ErrorCode::InputError, "search_word: max_len and beam must be >= 1");
  const int m = static_cast<int>(ops.size());
  struct Cand {
    std::vector<int> written;
    Vec x;
    double score;
  };
  if ((u - v).norm() < target) return Word{m, {}};
  std::vector<Cand> frontier{{{}, u, u.dot(v)}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Cand> next(frontier.size() * static_cast<std::size_t>(m));
    std::vector<char> used(next.size(), 0);
    parallel_for(next.size(), [&](std::size_t idx) {
      const auto& c = frontier[idx / static_cast<std::size_t>(m)];
      const int letter = static_cast<int>(idx % static_cast<std::size_t>(m)) + 1;
      if (!c.written.empty() && c.written.front() == letter) return;  // P^2 = P
      Cand n;
      n.written.reserve(c.written.size() + 1);
      n.written.push_back(letter);
      n.written.insert(n.written.end(), c.written.begin(), c.written.end());
      n.x = project(ops[static_cast<std::size_t>(letter - 1)], c.x);
      n.score = n.x.dot(v);
      next[idx] = std::move(n);
      used[idx] = 1;
    });
    std::vector<Cand> pool;
    for (std::size_t i = 0; i < next.size(); ++i) {
      if (used[i]) pool.push_back(std::move(next[i]));
    }
    std::stable_sort(pool.begin(), pool.end(), [](const Cand& a, const Cand& b) {
      if (a.score != b.score) return a.score > b.score;
      return a.written < b.written;
    });
    if (pool.size() > beam) pool.resize(beam);
    for (const auto& c : pool) {
      if ((c.x - v).norm() < target) return Word{m, c.written};
    }
    frontier = std::move(pool);
    if (frontier.empty()) break;
  }
  return std::nullopt;
}

namespace {

double opnorm(const Mat& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

WordcontResult wordcont_check(const Word& psi, const std::vector<Mat>& A, const std::vector<Mat>& B,
                              const Subspace& E) {
  if (A.size() != B.size() || static_cast<std::size_t>(psi.m) != A.size()) {
    throw Error(ErrorCode::InputError, "wordcont_check: operator count differs from alphabet size");
  }
  const Mat pe = E.projector();
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (opnorm(A[i]) > 1.0 + 1e-12 || opnorm(B[i]) > 1.0 + 1e-12) {
      throw Error(ErrorCode::PreconditionViolated, "wordcont_check: operators must be contractions");
    }
    if ((A[i] * pe - pe * A[i]).cwiseAbs().maxCoeff() > 1e-10) {
      throw Error(ErrorCode::PreconditionViolated, "wordcont_check: A_i must commute with P(E)");
    }
  }
  const Mat& q = E.basis();
  WordcontResult r;
  r.lhs = opnorm((word_matrix(psi, A) - word_matrix(psi, B)) * q);
  const auto c = psi.counts();
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (c[i]) r.rhs += static_cast<double>(c[i]) * opnorm((A[i] - B[i]) * q);
  }
  r.ok = r.lhs <= r.rhs + 1e-9;
  return r;
}

DivergenceDiagnostics analyze_divergence(const TransportPlan& plan, double delta,
                                         std::size_t samples) {
  DivergenceDiagnostics d;
  d.delta = delta;
  const std::vector<Subspace> spaces{plan.X, plan.Y, plan.Z};
  const std::vector<int> sched = plan.schedule_xyz();
  d.steps = sched.size();
  d.boundary_points.push_back(plan.designated.front());
  if (sched.empty()) return d;
  Trajectory t = run_trajectory(spaces, Schedule::explicit_list(3, sched), plan.designated.front(),
                                sched.size());
  for (std::size_t b : plan.boundaries) d.boundary_points.push_back(t.points[b]);
  d.min_boundary_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < d.boundary_points.size(); ++i) {
    for (std::size_t j = i + 1; j < d.boundary_points.size(); ++j) {
      d.min_boundary_distance =
          std::min(d.min_boundary_distance, (d.boundary_points[i] - d.boundary_points[j]).norm());
    }
  }
  const std::size_t stride = std::max<std::size_t>(1, d.steps / std::max<std::size_t>(1, samples));
  for (std::size_t m = 0; m <= d.steps; m += stride) {
    d.sampled.push_back(m);
    d.active_sizes.push_back(static_cast<int>(active_set(t, spaces, m, delta).size()));
  }
  std::size_t first_good = d.sampled.size();
  for (std::size_t i = d.sampled.size(); i-- > 0;) {
    if (d.active_sizes[i] < 3) break;
    first_good = i;
  }
  if (first_good < d.sampled.size()) {
    d.located_M = d.sampled[first_good];
    d.three_step_ok = *d.located_M <= d.steps / 2;
  }
  return d;
}

std::string plan_to_json(const TransportPlan& plan, int indent) {
  using nlohmann::json;
  json j;
  j["ambient_dim"] = plan.ambient_dim();
  j["word_convention"] = "letters 1,2,3 act as Z,X,Y; rightmost letter acts first";
  j["status"] = to_string(plan.status);
  j["total_loss"] = plan.total_loss;
  j["telescoping_sum"] = plan.telescoping_sum;
  j["telescoping_ok"] = plan.telescoping_ok;
  j["composite_length"] = plan.composite.length();
  j["dims"] = {{"X", plan.X.dim()}, {"Y", plan.Y.dim()}, {"Z", plan.Z.dim()}};
  j["diagnostics"] = plan.diagnostics;
  json blocks = json::array();
  for (std::size_t i = 0; i < plan.blocks.size(); ++i) {
    const auto& b = plan.blocks[i];
    blocks.push_back({{"index", i + 1},
                      {"dim_E", b.E.dim()},
                      {"ladder_size", b.ladder_size},
                      {"epsilon", plan.epsilons[i]},
                      {"loss", b.loss},
                      {"global_loss", plan.global_block_losses[i]},
                      {"verified", b.verified},
                      {"word", b.word.to_string()}});
  }
  j["blocks"] = blocks;
  return j.dump(indent);
}

}  // namespace projektor
