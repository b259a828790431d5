#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include <fmt/format.h>

namespace mecgame::experiment {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string trace_csv(const GameTrace& trace) {
  std::string out = "round,potential,offloaders,changes";
  const std::size_t n_users =
      trace.rounds.empty() ? 0 : trace.rounds.front().profile.size();
  for (std::size_t n = 0; n < n_users; ++n) {
    out += fmt::format(",lambda_{0},power_{0},freq_{0},overhead_{0},utility_{0}", n);
  }
  out += '\n';
  for (const auto& r : trace.rounds) {
    out += fmt::format("{},{},{},{}", r.round, format_double(r.potential),
                       r.offloaders, r.changes);
    for (std::size_t n = 0; n < r.profile.size(); ++n) {
      const Strategy& s = r.profile[n];
      out += fmt::format(",{},{},{},{},{}", format_double(s.lambda),
                         format_double(s.power_w), format_double(s.freq_hz),
                         format_double(r.overheads[n]),
                         format_double(r.utilities[n]));
    }
    out += '\n';
  }
  return out;
}

json summary_json(const GameTrace& trace, std::uint64_t seed, Schedule schedule) {
  const IterationRecord& last = trace.rounds.back();
  return json{{"converged", trace.converged},
              {"cycle_detected", trace.cycle_detected},
              {"rounds", trace.rounds_to_converge},
              {"rounds_executed", static_cast<int>(trace.rounds.size()) - 1},
              {"final_potential", last.potential},
              {"offloaders", last.offloaders},
              {"num_users", last.profile.size()},
              {"schedule", to_string(schedule)},
              {"seed", seed}};
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config,
                                const std::string& axis,
                                const std::vector<double>& values,
                                std::size_t seeds) {
  struct Point {
    ExperimentConfig config;
    double value;
    std::uint64_t seed;
  };
  std::vector<Point> points;
  for (double v : values) {
    ExperimentConfig c = apply_axis(config, axis, v);
    for (std::size_t k = 0; k < seeds; ++k) points.push_back({c, v, config.seed + k});
  }

  auto solve = [](const Point& p) {
    const Network net = build_network(p.config.generator, p.seed);
    const GameTrace trace = run_dynamics(net, p.config.engine);
    return SweepRow{p.value,
                    p.seed,
                    net.num_users(),
                    trace.converged,
                    trace.rounds_to_converge,
                    trace.final_potential(),
                    trace.rounds.back().offloaders};
  };

  std::vector<SweepRow> rows(points.size());
  const std::size_t workers =
      std::max<std::size_t>(1, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < points.size(); start += workers) {
    std::vector<std::future<SweepRow>> batch;
    const std::size_t end = std::min(points.size(), start + workers);
    for (std::size_t i = start; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, solve, std::cref(points[i])));
    }
    for (std::size_t i = start; i < end; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

std::string sweep_csv(const std::string& axis, const std::vector<SweepRow>& rows) {
  std::string out = fmt::format(
      "{},seed,users,converged,rounds,final_potential,offloaders\n", axis);
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", format_double(r.value), r.seed,
                       r.num_users, r.converged ? 1 : 0, r.rounds,
                       format_double(r.final_potential), r.offloaders);
  }
  return out;
}

std::string sweep_summary_csv(const std::string& axis,
                              const std::vector<SweepRow>& rows) {
  std::string out = fmt::format(
      "{},runs,converged_fraction,median_potential,median_offloaders,"
      "median_rounds\n",
      axis);
  std::size_t i = 0;
  while (i < rows.size()) {
    std::size_t j = i;
    std::vector<double> phi, off, rounds;
    std::size_t converged = 0;
    while (j < rows.size() && rows[j].value == rows[i].value) {
      phi.push_back(rows[j].final_potential);
      off.push_back(static_cast<double>(rows[j].offloaders));
      rounds.push_back(rows[j].rounds);
      converged += rows[j].converged ? 1 : 0;
      ++j;
    }
    out += fmt::format("{},{},{},{},{},{}\n", format_double(rows[i].value),
                       j - i,
                       format_double(static_cast<double>(converged) / (j - i)),
                       format_double(median(phi)), format_double(median(off)),
                       format_double(median(rounds)));
    i = j;
  }
  return out;
}

PoaStudy study_poa(const Network& net, const ExperimentConfig& config) {
  PoaStudy s;
  s.trace = run_dynamics(net, config.engine);
  const StrategyProfile& ne = s.trace.final_profile();
  const CentralizedOptions options{config.poa.grid_points,
                                   config.poa.exhaustive_limit};
  s.optimum = centralized_optimum(net, options, ne);
  s.report = make_poa_report(net, ne, s.optimum, config.poa.grid_points);
  s.global = check_global_optimality(
      net, ne, candidate_strategies(net, config.poa.grid_points, ne),
      s.optimum.profile, 1e-9, config.engine.best_response);
  return s;
}

std::vector<PoaSweepRow> run_poa_sweep(const Network& net,
                                       const ExperimentConfig& config) {
  std::vector<PoaSweepRow> rows;
  for (double m : config.poa.multipliers) {
    const Network scaled = with_interference_scale(net, m);
    const PoaStudy s = study_poa(scaled, config);
    rows.push_back({m, s.report.inverse_sinr, s.report.ne_total,
                    s.report.opt_total, s.report.poa, s.report.bound_upper,
                    s.trace.converged});
  }
  return rows;
}

std::string poa_sweep_csv(const std::vector<PoaSweepRow>& rows) {
  std::string out =
      "multiplier,inverse_sinr,ne_potential,opt_potential,poa,bound,converged\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", format_double(r.multiplier),
                       format_double(r.inverse_sinr),
                       format_double(r.ne_potential),
                       format_double(r.opt_potential), format_double(r.poa),
                       format_double(r.bound), r.converged ? 1 : 0);
  }
  return out;
}

namespace {

json profile_json(const StrategyProfile& p) {
  json arr = json::array();
  for (const auto& s : p) arr.push_back({s.lambda, s.power_w, s.freq_hz});
  return arr;
}

}  // namespace

json poa_json(const PoaStudy& s) {
  const PoaReport& r = s.report;
  const GlobalOptimalityReport& g = s.global;
  json doc{{"ne_total", r.ne_total},
           {"opt_total", r.opt_total},
           {"poa", r.poa},
           {"bound_upper", r.bound_upper},
           {"ne_utility_total", r.ne_utility_total},
           {"opt_utility_total", r.opt_utility_total},
           {"inverse_sinr", r.inverse_sinr},
           {"grid_points", r.grid_points},
           {"candidates_evaluated", r.candidates_evaluated},
           {"converged", s.trace.converged},
           {"rounds", s.trace.rounds_to_converge},
           {"ne_profile", profile_json(r.ne_profile)},
           {"opt_profile", profile_json(r.opt_profile)},
           {"global_optimality",
            {{"ne_potential", g.ne_potential},
             {"opt_potential", g.opt_potential},
             {"ne_is_global_min", g.ne_is_global_min},
             {"opt_is_nash", g.opt_is_nash},
             {"opt_restricted_gap", g.opt_restricted_gap},
             {"opt_continuous_gap", g.opt_continuous_gap},
             {"ne_is_pareto_efficient", g.ne_is_pareto_efficient}}}};
  if (g.pareto_dominator) {
    doc["global_optimality"]["pareto_dominator"] = profile_json(*g.pareto_dominator);
  }
  return doc;
}

int cmd_run(const ExperimentConfig& config, const fs::path& out_dir,
            std::ostream& log) {
  const Network net = build_network(config.generator, config.seed);
  const GameTrace trace = run_dynamics(net, config.engine);
  write_file_atomic(out_dir / "trace.csv", trace_csv(trace));
  write_file_atomic(out_dir / "summary.json",
                    summary_json(trace, config.seed, config.engine.schedule)
                            .dump(2) +
                        "\n");
  log << fmt::format("{} after {} rounds, potential {}, {} of {} offloading\n",
                     trace.converged ? "converged" : "did not converge",
                     trace.rounds_to_converge,
                     format_double(trace.final_potential()),
                     trace.rounds.back().offloaders, net.num_users());
  return trace.converged ? exit_code::kOk : exit_code::kNoConvergence;
}

int cmd_sweep(const ExperimentConfig& config, const std::string& axis,
              const std::vector<double>& values, std::size_t seeds,
              const fs::path& out_dir, std::ostream& log) {
  if (values.empty()) throw ConfigError("sweep.values", "needs at least one value");
  if (seeds < 1) throw ConfigError("sweep.seeds", "must be >= 1");
  // Validate every point before spending time on any of them.
  for (double v : values) apply_axis(config, axis, v);
  const std::vector<SweepRow> rows = run_sweep(config, axis, values, seeds);
  write_file_atomic(out_dir / "sweep.csv", sweep_csv(axis, rows));
  write_file_atomic(out_dir / "sweep_summary.csv", sweep_summary_csv(axis, rows));
  const auto stuck = std::count_if(rows.begin(), rows.end(),
                                   [](const SweepRow& r) { return !r.converged; });
  log << fmt::format("{} runs over {} values of {}, {} did not converge\n",
                     rows.size(), values.size(), axis, stuck);
  return stuck == 0 ? exit_code::kOk : exit_code::kNoConvergence;
}

int cmd_poa(const ExperimentConfig& config, const fs::path& out_dir,
            std::ostream& log) {
  if (config.generator.num_users > config.poa.exhaustive_limit) {
    throw ConfigError("generator.num_users",
                      fmt::format("{} users exceed the exhaustive-search limit "
                                  "of {}; lower num_users for poa studies",
                                  config.generator.num_users,
                                  config.poa.exhaustive_limit));
  }
  const Network net = build_network(config.generator, config.seed);
  const PoaStudy study = study_poa(net, config);
  write_file_atomic(out_dir / "poa.json", poa_json(study).dump(2) + "\n");
  const std::vector<PoaSweepRow> rows = run_poa_sweep(net, config);
  write_file_atomic(out_dir / "poa_sweep.csv", poa_sweep_csv(rows));
  log << fmt::format("PoA {} (bound {}), {} sweep points\n",
                     format_double(study.report.poa),
                     format_double(study.report.bound_upper), rows.size());
  const bool all_converged =
      study.trace.converged &&
      std::all_of(rows.begin(), rows.end(),
                  [](const PoaSweepRow& r) { return r.converged; });
  return all_converged ? exit_code::kOk : exit_code::kNoConvergence;
}

namespace {

StrategyProfile load_profile(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open profile file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("profile is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw ConfigError("profile", "expected an array");
  StrategyProfile p;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& e = doc[i];
    const std::string where = "profile[" + std::to_string(i) + "]";
    if (!e.is_array() || e.size() != 3 ||
        !std::all_of(e.begin(), e.end(), [](const json& x) { return x.is_number(); })) {
      throw ConfigError(where, "expected [lambda, power_w, freq_hz]");
    }
    p.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
  }
  return p;
}

}  // namespace

int cmd_validate(const ExperimentConfig& config, std::size_t trials,
                 std::uint64_t seed, const std::optional<fs::path>& profile_path,
                 const std::optional<fs::path>& out_dir, std::ostream& out) {
  if (trials < 1) throw ConfigError("trials", "must be >= 1");
  const Network net = build_network(config.generator, config.seed);
  bool ok = true;
  json report;

  const PotentialReport pot = verify_exact_potential(net, trials, seed);
  report["exact_potential"] = {{"passed", pot.passed()},
                               {"trials", pot.trials},
                               {"max_residual", pot.max_residual},
                               {"tolerance", 1e-9},
                               {"replay_seed", seed}};
  if (!pot.passed()) {
    ok = false;
    report["exact_potential"]["first_violation"] =
        json::parse(pot.violations.front().to_json());
  }

  const GameTrace trace = run_dynamics(net, config.engine);
  const double gap = nash_gap(net, trace.final_profile(), config.engine.best_response);
  const bool nash = trace.converged && gap <= 1e-9;
  report["converged_run_is_nash"] = {{"passed", nash},
                                     {"converged", trace.converged},
                                     {"nash_gap", gap},
                                     {"tolerance", 1e-9}};
  ok = ok && nash;

  if (profile_path) {
    const StrategyProfile p = load_profile(*profile_path);
    json entry;
    std::optional<std::string> violation;
    if (p.size() != net.num_users()) {
      violation = fmt::format("profile has {} strategies for {} users", p.size(),
                              net.num_users());
    }
    for (std::size_t n = 0; n < p.size() && !violation; ++n) {
      if (auto why = feasibility_violation(p[n], net.profile(n))) {
        violation = fmt::format("user {}: {}", n, *why);
      }
    }
    entry["feasible"] = !violation.has_value();
    if (violation) {
      entry["violation"] = *violation;
      entry["passed"] = false;
    } else {
      const double pg = nash_gap(net, p, config.engine.best_response);
      entry["nash_gap"] = pg;
      entry["is_nash"] = pg <= 1e-9;
      entry["passed"] = pg <= 1e-9;
    }
    ok = ok && entry["passed"].get<bool>();
    report["profile"] = entry;
  }

  report["passed"] = ok;
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (out_dir) write_file_atomic(*out_dir / "validate.json", text);
  if (!ok) {
    out << fmt::format("property violation; replay with --seed {} --trials {}\n",
                       seed, trials);
  }
  return ok ? exit_code::kOk : exit_code::kPropertyViolation;
}

void cmd_preset(std::ostream& out) {
  out << to_json(preset_config()).dump(2) << "\n";
}

}  // namespace mecgame::experiment
