#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "projektor/subspace.hpp"

namespace projektor {

enum class ScheduleKind { Cyclic, SeededRandom, Explicit };

const char* to_string(ScheduleKind kind) noexcept;

// Index generator over 1..K. Steps are numbered from 1.
struct Schedule {
  ScheduleKind kind = ScheduleKind::Cyclic;
  int K = 1;
  std::uint64_t seed = 0;
  std::vector<int> indices;

  static Schedule cyclic(int K);
  static Schedule seeded_random(int K, std::uint64_t seed);
  static Schedule explicit_list(int K, std::vector<int> indices);

  int at(std::size_t step) const;
  std::vector<int> take(std::size_t steps) const;
};

// Every index of 1..K occurs in each window of `window` consecutive steps (0 means 10 K).
bool is_fair(const Schedule& schedule, std::size_t steps, std::size_t window = 0);

struct Trajectory {
  std::vector<Vec> points;  // z_0 .. z_n
  std::vector<double> norms;
  std::vector<int> schedule_used;      // k_1 .. k_n
  std::vector<double> per_step_drop;   // |z_{i-1}|^2 - |z_i|^2, i = 1..n
  int cycle_length = 1;

  std::size_t steps() const { return schedule_used.size(); }
};

Trajectory run_trajectory(const std::vector<Subspace>& subspaces, const Schedule& schedule,
                          const Vec& z0, std::size_t steps);

// Norm-only run without storing points; stops once |z| < target.
struct RunSummary {
  std::size_t steps = 0;
  double final_norm = 0.0;
  bool reached = false;
};
RunSummary run_until(const std::vector<Subspace>& subspaces, const Schedule& schedule,
                     const Vec& z0, std::size_t max_steps, double norm_target);

// I(m, delta) = {k : dist(z_m, L_k) < delta}, 1-based indices.
std::vector<int> active_set(const Trajectory& traj, const std::vector<Subspace>& subspaces,
                            std::size_t m, double delta);

// max |z_n - z_m| over start <= m <= n <= steps.
double oscillation(const Trajectory& traj, std::size_t start);

// Cycle index range [first, last] for fit_rate; default is the last half of complete cycles.
struct CycleWindow {
  std::size_t first = 0;
  std::size_t last = 0;
};
double fit_rate(const Trajectory& traj, std::optional<CycleWindow> window = std::nullopt);

bool check_two_space_drop(const Trajectory& traj, const std::vector<Subspace>& subspaces,
                          std::size_t m, std::size_t n);

// CSV columns step,index,norm,drop.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace projektor
