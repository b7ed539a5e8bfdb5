#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <projektor/gallery.hpp>
#include <projektor/schedule.hpp>

namespace projektor::harness {

enum ExitCode : int { kOk = 0, kInputError = 1, kConstructionFailed = 2, kMismatch = 3 };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::Cyclic;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<int> indices;
};

struct Diagnostics {
  bool witness = false;
  bool rate = false;
  bool johnson = false;
  bool trajectory = false;
  bool transport = false;
  bool any() const { return witness || rate || johnson || trajectory || transport; }
};

struct ExperimentSpec {
  GalleryConfig gallery;
  std::vector<int> truncations;
  std::vector<ScheduleSpec> schedules;
  Diagnostics diagnostics;
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t trajectory_steps = 1000;
  std::vector<int> classify_ladder;  // empty: the truncations
  std::size_t walk_length = 64;
};

// Parses an ExperimentSpec document. A bare gallery document (no "gallery" key) is accepted
// with default settings. Throws Error(INPUT_ERROR).
ExperimentSpec parse_spec(const std::string& json_text);
std::string spec_to_json(const ExperimentSpec& spec);
void validate(const ExperimentSpec& spec);

int run_experiment(const ExperimentSpec& spec, std::ostream& log);
int replay(const std::filesystem::path& report_path, std::ostream& log);

// First difference between two files, or empty when identical.
std::string first_difference(const std::filesystem::path& a, const std::filesystem::path& b);

}  // namespace projektor::harness
