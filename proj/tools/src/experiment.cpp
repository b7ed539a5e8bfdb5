#include "experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include <projektor/error.hpp>
#include <projektor/johnson.hpp>
#include <projektor/random.hpp>
#include <projektor/regularity.hpp>
#include <projektor/transport.hpp>

namespace projektor::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

ScheduleKind parse_kind(const std::string& s) {
  if (s == "CYCLIC") return ScheduleKind::Cyclic;
  if (s == "SEEDED_RANDOM") return ScheduleKind::SeededRandom;
  if (s == "EXPLICIT") return ScheduleKind::Explicit;
  throw Error(ErrorCode::InputError, "unknown schedule kind '" + s + "'");
}

json gallery_json(const GalleryConfig& g) { return json::parse(config_to_json(g)); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::InputError, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::InputError, "cannot write " + p.string());
  out << text;
}

std::vector<double> example_epsilons(const GalleryConfig& g) {
  return g.epsilons.empty() ? geometric_epsilons(6, 2) : g.epsilons;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("spec: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::InputError, "spec: expected a JSON object");
  ExperimentSpec s;
  try {
    if (!j.contains("gallery")) {
      s.gallery = config_from_json(j.dump());
      return s;
    }
    s.gallery = config_from_json(j.at("gallery").dump());
    if (j.contains("truncations")) s.truncations = j.at("truncations").get<std::vector<int>>();
    if (j.contains("classify_ladder")) s.classify_ladder = j.at("classify_ladder").get<std::vector<int>>();
    if (j.contains("schedules")) {
      for (const auto& sj : j.at("schedules")) {
        ScheduleSpec ss;
        ss.kind = parse_kind(sj.at("kind").get<std::string>());
        if (sj.contains("seed")) {
          ss.seed = sj.at("seed").get<std::uint64_t>();
          ss.has_seed = true;
        }
        if (sj.contains("indices")) ss.indices = sj.at("indices").get<std::vector<int>>();
        s.schedules.push_back(ss);
      }
    }
    if (j.contains("diagnostics")) {
      const auto& d = j.at("diagnostics");
      s.diagnostics.witness = d.value("witness", false);
      s.diagnostics.rate = d.value("rate", false);
      s.diagnostics.johnson = d.value("johnson", false);
      s.diagnostics.trajectory = d.value("trajectory", false);
      s.diagnostics.transport = d.value("transport", false);
    }
    s.output_dir = j.value("output_dir", s.output_dir);
    s.seed = j.value("seed", s.seed);
    s.trajectory_steps = j.value("trajectory_steps", s.trajectory_steps);
    s.walk_length = j.value("walk_length", s.walk_length);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InputError, std::string("spec: ") + e.what());
  }
  return s;
}

std::string spec_to_json(const ExperimentSpec& s) {
  json j;
  j["gallery"] = gallery_json(s.gallery);
  j["gallery"].erase("layout");
  j["truncations"] = s.truncations;
  j["classify_ladder"] = s.classify_ladder;
  j["schedules"] = json::array();
  for (const auto& ss : s.schedules) {
    json sj{{"kind", to_string(ss.kind)}};
    if (ss.has_seed) sj["seed"] = ss.seed;
    if (!ss.indices.empty()) sj["indices"] = ss.indices;
    j["schedules"].push_back(sj);
  }
  j["diagnostics"] = {{"witness", s.diagnostics.witness},       {"rate", s.diagnostics.rate},
                      {"johnson", s.diagnostics.johnson},       {"trajectory", s.diagnostics.trajectory},
                      {"transport", s.diagnostics.transport}};
  j["output_dir"] = s.output_dir;
  j["seed"] = s.seed;
  j["trajectory_steps"] = s.trajectory_steps;
  j["walk_length"] = s.walk_length;
  return j.dump(2);
}

void validate(const ExperimentSpec& s) {
  projektor::validate(s.gallery);
  if (!s.diagnostics.any()) throw Error(ErrorCode::InputError, "spec: no diagnostic enabled");
  if ((s.diagnostics.witness || s.diagnostics.rate) && s.truncations.empty()) {
    throw Error(ErrorCode::InputError, "spec: witness/rate diagnostics need truncations");
  }
  for (std::size_t i = 1; i < s.truncations.size(); ++i) {
    if (s.truncations[i] <= s.truncations[i - 1]) {
      throw Error(ErrorCode::InputError, "spec: truncations must be strictly increasing");
    }
  }
  for (int t : s.truncations) {
    if (t < 1) throw Error(ErrorCode::InputError, "spec: truncations must be positive");
    if (s.gallery.family == Family::Not3 && t < s.gallery.K - 2) {
      throw Error(ErrorCode::InputError, "spec: NOT3 truncations must be >= K - 2");
    }
  }
  if (s.diagnostics.johnson) {
    const auto& ladder = s.classify_ladder.empty() ? s.truncations : s.classify_ladder;
    if (ladder.size() < 2) throw Error(ErrorCode::InputError, "spec: johnson needs >= 2 classification levels");
    if (s.gallery.subspace_count() < 4) throw Error(ErrorCode::InputError, "spec: johnson needs K >= 4");
  }
  if (s.diagnostics.trajectory) {
    if (s.schedules.empty()) throw Error(ErrorCode::InputError, "spec: trajectory diagnostic needs schedules");
    if (s.trajectory_steps < 1) throw Error(ErrorCode::InputError, "spec: trajectory_steps must be >= 1");
    const int K = s.gallery.subspace_count();
    for (const auto& ss : s.schedules) {
      if (ss.kind == ScheduleKind::Explicit) {
        if (ss.indices.size() < s.trajectory_steps) {
          throw Error(ErrorCode::InputError, "spec: explicit schedule shorter than trajectory_steps");
        }
        for (int k : ss.indices) {
          if (k < 1 || k > K) throw Error(ErrorCode::InputError, "spec: explicit index out of range");
        }
      }
    }
  }
  if (s.output_dir.empty()) throw Error(ErrorCode::InputError, "spec: empty output_dir");
}

namespace {

struct Run {
  const ExperimentSpec& spec;
  std::ostream& log;
  fs::path out;
  json report;
  std::vector<std::string> outputs;
  int exit = kOk;

  void emit(const std::string& rel, const std::string& text) {
    write_file(out / rel, text);
    outputs.push_back(rel);
  }

  std::vector<Subspace> build(int truncation) const { return build_config(spec.gallery, truncation); }

  void stage_build() {
    const int t = default_truncation(spec.gallery);
    auto subs = build(t);
    json g = gallery_json(spec.gallery);
    g["truncation"] = t;
    g["ambient_dim"] = subs.front().ambient_dim();
    json dims = json::array();
    for (const auto& s : subs) dims.push_back(s.dim());
    g["subspace_dims"] = dims;
    report["gallery"] = g;
    log << "build: " << to_string(spec.gallery.family) << " ambient " << subs.front().ambient_dim() << "\n";
  }

  void stage_johnson() {
    const auto& ladder = spec.classify_ladder.empty() ? spec.truncations : spec.classify_ladder;
    const int K = spec.gallery.subspace_count();
    Labels labels = classify_fourtuples([&](int t) { return build(t); }, K, ladder);
    std::ostringstream csv;
    write_labels_csv(csv, labels);
    emit("labels.csv", csv.str());
    ConditionD cd = condition_d(labels, K);
    json jj;
    jj["ladder"] = ladder;
    std::map<std::string, int> counts;
    for (const auto& [s, l] : labels) ++counts[to_string(l)];
    jj["label_counts"] = counts;
    jj["condition_d"] = cd.holds;
    jj["certificate"] = cd.certificate;
    if (cd.holds) {
      auto walk = generate_walk(cd.certificate, K, spec.walk_length, spec.seed);
      std::ostringstream w;
      write_walk(w, walk);
      emit("walk.csv", w.str());
      jj["walk_length"] = walk.size();
      jj["walk_valid"] = is_valid_walk(walk);
      bool blocks_ok = true;
      if (walk.size() >= 2 && is_valid_walk(walk)) {
        auto seqs = symbol_sequences(walk, K);
        for (const auto& s : seqs.seq) blocks_ok = blocks_ok && validate_block_structure(indicator(s));
      }
      jj["block_structure_ok"] = blocks_ok;
    }
    report["johnson"] = jj;
    log << "johnson: condition (d) " << (cd.holds ? "holds" : "fails") << "\n";
  }

  void stage_scan() {
    RegularityOptions ro;
    ro.compute_rate = spec.diagnostics.rate;
    ScanResult scan = dichotomy_scan([&](int t) { return build(t); }, spec.truncations, ro);
    std::ostringstream csv;
    write_scan_csv(csv, scan);
    emit("scan.csv", csv.str());
    json sj;
    json flags = json::array();
    if (scan.flags.gap_vanishing) flags.push_back("GAP_VANISHING");
    if (scan.flags.rate_to_one) flags.push_back("RATE_TO_ONE");
    sj["flags"] = flags;
    sj["reports"] = json::array();
    for (const auto& r : scan.reports) {
      sj["reports"].push_back({{"N", r.truncation_dim},
                               {"witness_gap", r.witness_gap},
                               {"max_dist", r.max_dist},
                               {"rate", r.rate},
                               {"rate_zero_norm", r.rate_zero_norm},
                               {"intersection_dim", r.intersection_dim},
                               {"dists", r.dists},
                               {"witness", vec_json(r.witness)}});
    }
    report["scan"] = sj;
    log << "scan: " << scan.reports.size() << " truncations, flags " << flags.dump() << "\n";
  }

  void stage_trajectories() {
    std::vector<Subspace> subs = build(default_truncation(spec.gallery));
    const int K = static_cast<int>(subs.size());
    const int n = subs.front().ambient_dim();
    json arr = json::array();
    for (std::size_t i = 0; i < spec.schedules.size(); ++i) {
      const auto& ss = spec.schedules[i];
      Schedule sched = Schedule::cyclic(K);
      if (ss.kind == ScheduleKind::SeededRandom) {
        sched = Schedule::seeded_random(K, ss.has_seed ? ss.seed : splitmix64(spec.seed + i));
      } else if (ss.kind == ScheduleKind::Explicit) {
        sched = Schedule::explicit_list(K, ss.indices);
      }
      CounterRng rng(spec.seed, 1000 + i);
      Vec z0 = random_unit(n, rng);
      Trajectory t = run_trajectory(subs, sched, z0, spec.trajectory_steps);
      const std::string rel = "trajectories/traj_" + std::to_string(i + 1) + ".csv";
      std::ostringstream csv;
      write_trajectory_csv(csv, t);
      emit(rel, csv.str());
      json tj{{"file", rel},
              {"kind", to_string(sched.kind)},
              {"seed", sched.seed},
              {"steps", t.steps()},
              {"initial_norm", t.norms.front()},
              {"final_norm", t.norms.back()},
              {"active_set_final", active_set(t, subs, t.steps(), 0.1)}};
      if (sched.kind != ScheduleKind::Explicit) tj["fair"] = is_fair(sched, t.steps());
      if (sched.kind == ScheduleKind::Cyclic) {
        try {
          tj["rate"] = fit_rate(t);
        } catch (const Error& e) {
          tj["rate_error"] = to_string(e.code());
        }
      }
      arr.push_back(tj);
    }
    report["trajectories"] = arr;
    log << "trajectories: " << arr.size() << " written\n";
  }

  void stage_transport() {
    const auto eps = example_epsilons(spec.gallery);
    TransportPlan plan = build_divergence_plan(eps);
    json tj = json::parse(plan_to_json(plan));
    DivergenceDiagnostics dd = analyze_divergence(plan);
    tj["epsilons"] = eps;
    double es = 0;
    for (double e : eps) es += e;
    tj["epsilon_sum"] = es;
    tj["min_boundary_distance"] = dd.min_boundary_distance;
    tj["three_step"] = {{"delta", dd.delta},
                        {"samples", dd.sampled.size()},
                        {"located_M", dd.located_M ? json(*dd.located_M) : json(nullptr)},
                        {"ok", dd.three_step_ok}};
    {
      Trajectory t = run_trajectory({plan.X, plan.Y, plan.Z}, Schedule::explicit_list(3, plan.schedule_xyz()),
                                    plan.designated.front(), std::max<std::size_t>(1, plan.schedule_xyz().size()));
      std::ostringstream csv;
      write_trajectory_csv(csv, t);
      emit("trajectories/transport.csv", csv.str());
    }
    if (spec.gallery.family == Family::Example5) {
      Example5Build ex = build_example5(spec.gallery.K, eps, false);
      bool orth = true;
      for (std::size_t a = 3; a < ex.subspaces.size(); ++a) {
        for (std::size_t b = a + 1; b < ex.subspaces.size(); ++b) {
          orth = orth && (ex.subspaces[a].basis().transpose() * ex.subspaces[b].basis()).cwiseAbs().maxCoeff() < 1e-12;
        }
      }
      tj["example5"] = {{"K", spec.gallery.K},
                        {"composite_loss", ex.composite_loss},
                        {"tail_pairwise_orthogonal", orth}};
    }
    report["transport"] = tj;
    if (plan.status != PlanStatus::Ok) {
      exit = kConstructionFailed;
      report["errors"].push_back({{"code", to_string(plan.status)}, {"message", plan.diagnostics}});
    }
    log << "transport: " << to_string(plan.status) << ", total loss " << plan.total_loss << "\n";
  }
};

}  // namespace

int run_experiment(const ExperimentSpec& spec, std::ostream& log) {
  try {
    validate(spec);
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kInputError;
  }
  Run run{spec, log, fs::path(spec.output_dir), json::object(), {}, kOk};
  run.report["format"] = "projektor-report";
  run.report["version"] = 1;
  run.report["seed"] = spec.seed;
  run.report["spec"] = json::parse(spec_to_json(spec));
  run.report["errors"] = json::array();
  try {
    fs::create_directories(run.out);
    run.stage_build();
    if (spec.diagnostics.johnson) run.stage_johnson();
    if (spec.diagnostics.witness || spec.diagnostics.rate) run.stage_scan();
    if (spec.diagnostics.trajectory) run.stage_trajectories();
    if (spec.diagnostics.transport) run.stage_transport();
  } catch (const Error& e) {
    run.report["errors"].push_back({{"code", to_string(e.code())}, {"message", e.what()}});
    run.exit = (e.code() == ErrorCode::ConstructionFailed || e.code() == ErrorCode::ChainDegraded)
                   ? kConstructionFailed
                   : kInputError;
    log << e.what() << "\n";
  } catch (const fs::filesystem_error& e) {
    log << e.what() << "\n";
    return kInputError;
  }
  std::sort(run.outputs.begin(), run.outputs.end());
  run.report["outputs"] = run.outputs;
  run.report["status"] = run.exit == kOk ? "OK" : run.exit == kConstructionFailed ? "CONSTRUCTION_FAILED" : "INPUT_ERROR";
  if (run.exit == kConstructionFailed && run.report.contains("transport")) {
    run.report["status"] = run.report["transport"]["status"];
  }
  run.report["exit_code"] = run.exit;
  write_file(run.out / "report.json", run.report.dump(2) + "\n");
  return run.exit;
}

std::string first_difference(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa) return "missing " + a.string();
  if (!fb) return "missing " + b.string();
  std::string la, lb;
  std::size_t row = 0;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(fa, la));
    const bool gb = static_cast<bool>(std::getline(fb, lb));
    ++row;
    if (!ga && !gb) return {};
    if (ga != gb || la != lb) {
      return "row " + std::to_string(row) + ": '" + (ga ? la : std::string("<eof>")) + "' vs '" +
             (gb ? lb : std::string("<eof>")) + "'";
    }
  }
}

int replay(const fs::path& report_path, std::ostream& log) {
  json rep;
  try {
    rep = json::parse(read_file(report_path));
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    log << "replay: " << e.what() << "\n";
    return kInputError;
  }
  if (!rep.contains("spec") || !rep.contains("outputs")) {
    log << "replay: report lacks spec or outputs\n";
    return kInputError;
  }
  ExperimentSpec spec;
  try {
    spec = parse_spec(rep.at("spec").dump());
  } catch (const Error& e) {
    log << e.what() << "\n";
    return kInputError;
  }
  const fs::path original = report_path.parent_path().empty() ? fs::path(".") : report_path.parent_path();
  fs::path scratch = fs::temp_directory_path() /
                     ("projektor-replay-" + std::to_string(std::hash<std::string>{}(fs::absolute(report_path).string())) +
                      "-" + std::to_string(reinterpret_cast<std::uintptr_t>(&spec)));
  fs::remove_all(scratch);
  spec.output_dir = scratch.string();
  std::ostringstream sink;
  const int code = run_experiment(spec, sink);
  int result = kOk;
  if (code == kInputError) {
    log << "replay: re-run failed: " << sink.str();
    result = kInputError;
  } else {
    for (const auto& o : rep.at("outputs")) {
      const std::string rel = o.get<std::string>();
      if (rel.size() < 4 || rel.substr(rel.size() - 4) != ".csv") continue;
      std::string diff = first_difference(original / rel, scratch / rel);
      if (!diff.empty()) {
        log << "replay: MISMATCH in " << rel << " at " << diff << "\n";
        result = kMismatch;
        break;
      }
    }
  }
  std::error_code ec;
  fs::remove_all(scratch, ec);
  if (result == kOk) log << "replay: identical\n";
  return result;
}

}  // namespace projektor::harness
