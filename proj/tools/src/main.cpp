#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <projektor/error.hpp>

#include "experiment.hpp"

namespace fs = std::filesystem;
using namespace projektor;
using namespace projektor::harness;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::vector<int> truncations;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "experiment or gallery JSON")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory");
  sub->add_option("--seed", c.seed, "master seed")->each([&c](const std::string&) { c.has_seed = true; });
  sub->add_option("--truncations", c.truncations, "comma separated truncation levels")->delimiter(',');
}

ExperimentSpec load(const Common& c) {
  std::ifstream in(c.config);
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentSpec spec = parse_spec(ss.str());
  if (!c.out.empty()) spec.output_dir = c.out;
  if (c.has_seed) spec.seed = c.seed;
  if (!c.truncations.empty()) spec.truncations = c.truncations;
  return spec;
}

int write_build(const ExperimentSpec& spec) {
  projektor::validate(spec.gallery);
  const int t = spec.truncations.empty() ? default_truncation(spec.gallery) : spec.truncations.back();
  auto subs = build_config(spec.gallery, t);
  fs::path out(spec.output_dir);
  fs::create_directories(out);
  for (std::size_t k = 0; k < subs.size(); ++k) {
    std::ofstream f(out / ("L_" + std::to_string(k + 1) + ".txt"));
    write_subspace(f, subs[k]);
  }
  auto g = nlohmann::json::parse(config_to_json(spec.gallery));
  g["truncation"] = t;
  g["ambient_dim"] = subs.front().ambient_dim();
  std::ofstream(out / "gallery.json") << g.dump(2) << "\n";
  std::cerr << "build: wrote " << subs.size() << " subspaces of R^" << subs.front().ambient_dim() << " to "
            << out.string() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"projektor: products of orthogonal projections, experiment runner"};
  app.require_subcommand(1);

  Common c;
  auto* build = app.add_subcommand("build", "build a gallery configuration and write L_k.txt files");
  auto* scan = app.add_subcommand("scan", "witness and rate scan over truncations");
  auto* traj = app.add_subcommand("trajectory", "run projection trajectories");
  auto* john = app.add_subcommand("johnson", "classify 4-tuples and test condition (d)");
  auto* trans = app.add_subcommand("transport", "chained transport plan and divergence diagnostics");
  auto* run = app.add_subcommand("run", "run the diagnostics enabled in the config");
  for (auto* s : {build, scan, traj, john, trans, run}) add_common(s, c);

  std::string report;
  auto* rep = app.add_subcommand("replay", "re-run a report and compare its CSV outputs");
  rep->add_option("report", report, "path to report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kInputError;
  }

  if (rep->parsed()) return replay(report, std::cerr);

  try {
    ExperimentSpec spec = load(c);
    if (build->parsed()) return write_build(spec);
    if (!run->parsed()) spec.diagnostics = Diagnostics{};
    if (scan->parsed()) spec.diagnostics.witness = spec.diagnostics.rate = true;
    if (john->parsed()) spec.diagnostics.johnson = true;
    if (trans->parsed()) spec.diagnostics.transport = true;
    if (traj->parsed()) {
      spec.diagnostics.trajectory = true;
      if (spec.schedules.empty()) {
        spec.schedules.push_back({ScheduleKind::Cyclic, 0, false, {}});
        spec.schedules.push_back({ScheduleKind::SeededRandom, 0, false, {}});
      }
    }
    return run_experiment(spec, std::cerr);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}
