#include "projektor/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <string>

#include "projektor/error.hpp"
#include "projektor/rng.hpp"

namespace projektor {

const char* to_string(ScheduleKind kind) noexcept {
  switch (kind) {
    case ScheduleKind::Cyclic: return "CYCLIC";
    case ScheduleKind::SeededRandom: return "SEEDED_RANDOM";
    case ScheduleKind::Explicit: return "EXPLICIT";
  }
  return "UNKNOWN";
}

Schedule Schedule::cyclic(int K) {
  if (K < 1) throw Error(ErrorCode::InputError, "schedule: K must be >= 1");
  Schedule s;
  s.kind = ScheduleKind::Cyclic;
  s.K = K;
  return s;
}

Schedule Schedule::seeded_random(int K, std::uint64_t seed) {
  Schedule s = cyclic(K);
  s.kind = ScheduleKind::SeededRandom;
  s.seed = seed;
  return s;
}

Schedule Schedule::explicit_list(int K, std::vector<int> indices) {
  Schedule s = cyclic(K);
  s.kind = ScheduleKind::Explicit;
  for (int k : indices) {
    if (k < 1 || k > K) throw Error(ErrorCode::InputError, "schedule: index out of range");
  }
  s.indices = std::move(indices);
  return s;
}

int Schedule::at(std::size_t step) const {
  if (step == 0) throw Error(ErrorCode::InputError, "schedule steps start at 1");
  switch (kind) {
    case ScheduleKind::Cyclic:
      return static_cast<int>((step - 1) % static_cast<std::size_t>(K)) + 1;
    case ScheduleKind::SeededRandom:
      return static_cast<int>(bounded(counter_draw(seed, step), static_cast<std::uint64_t>(K))) + 1;
    case ScheduleKind::Explicit:
      if (step > indices.size()) {
        throw Error(ErrorCode::InputError, "explicit schedule shorter than requested steps");
      }
      return indices[step - 1];
  }
  return 1;
}

std::vector<int> Schedule::take(std::size_t steps) const {
  std::vector<int> out(steps);
  for (std::size_t i = 0; i < steps; ++i) out[i] = at(i + 1);
  return out;
}

bool is_fair(const Schedule& schedule, std::size_t steps, std::size_t window) {
  if (window == 0) window = 10 * static_cast<std::size_t>(schedule.K);
  if (steps < window) return false;
  std::vector<int> seq = schedule.take(steps);
  std::vector<std::size_t> count(static_cast<std::size_t>(schedule.K) + 1, 0);
  std::size_t present = 0;
  auto add = [&](int k, int delta) {
    std::size_t& c = count[static_cast<std::size_t>(k)];
    if (delta > 0 && c++ == 0) ++present;
    if (delta < 0 && --c == 0) --present;
  };
  for (std::size_t i = 0; i < steps; ++i) {
    add(seq[i], 1);
    if (i >= window) add(seq[i - window], -1);
    if (i + 1 >= window && present != static_cast<std::size_t>(schedule.K)) return false;
  }
  return true;
}

namespace {

void check_inputs(const std::vector<Subspace>& subspaces, const Schedule& schedule, const Vec& z0) {
  if (subspaces.empty()) throw Error(ErrorCode::InputError, "empty subspace list");
  if (schedule.K != static_cast<int>(subspaces.size())) {
    throw Error(ErrorCode::InputError, "schedule K does not match subspace count");
  }
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != static_cast<int>(z0.size())) {
      throw Error(ErrorCode::InputError, "trajectory: ambient dimension mismatch");
    }
  }
}

}  // namespace

Trajectory run_trajectory(const std::vector<Subspace>& subspaces, const Schedule& schedule,
                          const Vec& z0, std::size_t steps) {
  check_inputs(subspaces, schedule, z0);
  if (steps < 1) throw Error(ErrorCode::InputError, "trajectory: steps must be >= 1");
  Trajectory t;
  t.cycle_length = schedule.K;
  t.points.reserve(steps + 1);
  t.norms.reserve(steps + 1);
  t.points.push_back(z0);
  t.norms.push_back(z0.norm());
  for (std::size_t n = 1; n <= steps; ++n) {
    const int k = schedule.at(n);
    Vec z = project(subspaces[static_cast<std::size_t>(k - 1)], t.points.back());
    const double prev = t.norms.back();
    const double cur = z.norm();
    t.schedule_used.push_back(k);
    t.per_step_drop.push_back(prev * prev - cur * cur);
    t.norms.push_back(cur);
    t.points.push_back(std::move(z));
  }
  return t;
}

RunSummary run_until(const std::vector<Subspace>& subspaces, const Schedule& schedule,
                     const Vec& z0, std::size_t max_steps, double norm_target) {
  check_inputs(subspaces, schedule, z0);
  RunSummary r;
  Vec z = z0;
  r.final_norm = z.norm();
  if (r.final_norm < norm_target) {
    r.reached = true;
    return r;
  }
  Vec tmp;
  for (std::size_t n = 1; n <= max_steps; ++n) {
    const Mat& b = subspaces[static_cast<std::size_t>(schedule.at(n) - 1)].basis();
    tmp.noalias() = b.transpose() * z;
    z.noalias() = b * tmp;
    r.steps = n;
    r.final_norm = z.norm();
    if (r.final_norm < norm_target) {
      r.reached = true;
      break;
    }
  }
  return r;
}

std::vector<int> active_set(const Trajectory& traj, const std::vector<Subspace>& subspaces,
                            std::size_t m, double delta) {
  if (m >= traj.points.size()) throw Error(ErrorCode::InputError, "active_set: m out of range");
  if (!(delta > 0.0)) throw Error(ErrorCode::InputError, "active_set: delta must be positive");
  std::vector<int> out;
  for (std::size_t k = 0; k < subspaces.size(); ++k) {
    if (dist(traj.points[m], subspaces[k]) < delta) out.push_back(static_cast<int>(k) + 1);
  }
  return out;
}

double oscillation(const Trajectory& traj, std::size_t start) {
  if (start >= traj.points.size()) throw Error(ErrorCode::InputError, "oscillation: start out of range");
  double best = 0.0;
  for (std::size_t m = start; m < traj.points.size(); ++m) {
    for (std::size_t n = m + 1; n < traj.points.size(); ++n) {
      best = std::max(best, (traj.points[n] - traj.points[m]).norm());
    }
  }
  return best;
}

double fit_rate(const Trajectory& traj, std::optional<CycleWindow> window) {
  const std::size_t K = static_cast<std::size_t>(traj.cycle_length);
  const std::size_t cycles = traj.steps() / K;
  CycleWindow w;
  if (window) {
    w = *window;
  } else {
    w.first = cycles / 2;
    w.last = cycles;
  }
  if (w.last > cycles || w.first >= w.last) {
    throw Error(ErrorCode::InputError, "fit_rate: window needs at least two complete cycles");
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t c = w.first; c <= w.last; ++c) {
    const double nrm = traj.norms[c * K];
    if (!(nrm > std::numeric_limits<double>::min())) {
      throw Error(ErrorCode::ZeroNorm, "fit_rate: norm vanished at cycle " + std::to_string(c));
    }
    const double x = static_cast<double>(c);
    const double y = std::log(nrm);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return std::clamp(std::exp(slope), 0.0, 1.0);
}

bool check_two_space_drop(const Trajectory& traj, const std::vector<Subspace>& subspaces,
                          std::size_t m, std::size_t n) {
  (void)subspaces;
  if (m > n || n > traj.steps()) {
    throw Error(ErrorCode::InputError, "check_two_space_drop: need m <= n <= steps");
  }
  std::set<int> used;
  for (std::size_t i = m + 1; i <= n; ++i) used.insert(traj.schedule_used[i - 1]);
  if (used.size() > 2) {
    throw Error(ErrorCode::PreconditionViolated, "segment uses more than two subspaces");
  }
  const double lhs = (traj.points[n] - traj.points[m]).squaredNorm();
  const double rhs = traj.norms[m] * traj.norms[m] - traj.norms[n] * traj.norms[n];
  return lhs <= rhs + 1e-9;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "step,index,norm,drop\n";
  char buf[128];
  for (std::size_t i = 0; i < traj.steps(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g\n", i + 1, traj.schedule_used[i],
                  traj.norms[i + 1], traj.per_step_drop[i]);
    out << buf;
  }
}

}  // namespace projektor
