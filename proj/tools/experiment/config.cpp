#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mecgame::experiment {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Section {
 public:
  Section(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) throw ConfigError(path_, "expected an object");
  }

  void number(const char* key, double& out) {
    if (const json* v = take(key)) {
      if (!v->is_number()) throw ConfigError(at(key), "expected a number");
      out = v->get<double>();
      if (!std::isfinite(out)) throw ConfigError(at(key), "must be finite");
    }
  }

  void count(const char* key, std::size_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(at(key), "expected a non-negative integer");
      }
      out = v->get<std::size_t>();
    }
  }

  void integer(const char* key, int& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_integer()) throw ConfigError(at(key), "expected an integer");
      out = v->get<int>();
    }
  }

  void seed(const char* key, std::uint64_t& out) {
    if (const json* v = take(key)) {
      if (!v->is_number_unsigned()) {
        throw ConfigError(at(key), "expected a non-negative integer");
      }
      out = v->get<std::uint64_t>();
    }
  }

  void text(const char* key, std::string& out) {
    if (const json* v = take(key)) {
      if (!v->is_string()) throw ConfigError(at(key), "expected a string");
      out = v->get<std::string>();
    }
  }

  void numbers(const char* key, std::vector<double>& out) {
    if (const json* v = take(key)) {
      if (!v->is_array()) throw ConfigError(at(key), "expected an array of numbers");
      out.clear();
      for (std::size_t i = 0; i < v->size(); ++i) {
        const json& e = (*v)[i];
        if (!e.is_number()) {
          throw ConfigError(at(key) + "[" + std::to_string(i) + "]",
                            "expected a number");
        }
        out.push_back(e.get<double>());
      }
    }
  }

  const json* child(const char* key) { return take(key); }

  std::string at(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.count(key)) throw ConfigError(at(key), "unknown key");
    }
  }

 private:
  const json* take(const char* key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json& obj_;
  std::string path_;
  std::set<std::string> seen_;
};

template <typename Fn>
void with_section(Section& parent, const char* key, Fn&& fn) {
  if (const json* v = parent.child(key)) {
    Section s(*v, parent.at(key));
    fn(s);
    s.finish();
  }
}

// Re-raise core validation failures under the section they came from.
template <typename Fn>
void validated(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ValidationError& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

ExperimentConfig preset_config() { return ExperimentConfig{}; }

ExperimentConfig parse_config(const json& doc) {
  ExperimentConfig c = preset_config();
  Section root(doc, "");
  root.seed("seed", c.seed);
  root.text("output_dir", c.output_dir);

  GeneratorConfig& g = c.generator;
  with_section(root, "generator", [&](Section& s) {
    s.count("num_bs", g.num_bs);
    s.count("num_users", g.num_users);
    s.number("cell_radius_m", g.cell_radius_m);
    s.number("bs_spacing_m", g.bs_spacing_m);
    s.number("min_user_distance_m", g.min_user_distance_m);
    s.count("num_channels", g.num_channels);
    s.number("channel_bandwidth_hz", g.channel_bandwidth_hz);
    s.number("noise_power_w", g.noise_power_w);
    s.number("path_loss_exponent", g.path_loss_exponent);
    s.number("interference_scale", g.interference_scale);
  });
  with_section(root, "user", [&](Section& s) {
    s.number("kappa", g.user.kappa);
    s.number("f_max_hz", g.user.f_max_hz);
    s.number("f_min_positive_hz", g.user.f_min_positive_hz);
    s.number("p_min_w", g.user.p_min_w);
    s.number("p_max_w", g.user.p_max_w);
    s.number("alpha_t", g.user.alpha_t);
    s.number("alpha_e", g.user.alpha_e);
    s.number("tx_range_m", g.user.tx_range_m);
  });
  with_section(root, "task", [&](Section& s) {
    s.number("input_bits", g.input_bits);
    s.number("workload_cycles", g.workload_cycles);
  });
  with_section(root, "cloud", [&](Section& s) {
    s.number("frequency_hz", g.cloud_frequency_hz);
    s.number("kappa", g.cloud_kappa);
  });
  with_section(root, "engine", [&](Section& s) {
    std::string schedule = to_string(c.engine.schedule);
    s.text("schedule", schedule);
    validated(s.at("schedule"),
              [&] { c.engine.schedule = parse_schedule(schedule); });
    s.integer("max_rounds", c.engine.max_rounds);
    s.number("eps_power_w", c.engine.eps_power_w);
    s.integer("cycle_window", c.engine.cycle_window);
    s.number("tie_tolerance", c.engine.best_response.tie_tolerance);
  });
  with_section(root, "power_search", [&](Section& s) {
    PowerSearchConfig& p = c.engine.best_response.power;
    s.integer("newton_max_iter", p.newton_max_iter);
    s.number("newton_tol", p.newton_tol);
    s.integer("multistart_count", p.multistart_count);
    s.integer("fallback_grid", p.fallback_grid);
  });
  with_section(root, "poa", [&](Section& s) {
    s.count("grid_points", c.poa.grid_points);
    s.count("exhaustive_limit", c.poa.exhaustive_limit);
    s.numbers("multipliers", c.poa.multipliers);
  });
  with_section(root, "sweep", [&](Section& s) {
    s.text("axis", c.sweep.axis);
    s.numbers("values", c.sweep.values);
    s.count("seeds", c.sweep.seeds);
  });
  root.finish();

  validated("generator", [&] { c.generator.validate(); });
  validated("engine", [&] { c.engine.validate(); });
  if (c.poa.grid_points < 1) throw ConfigError("poa.grid_points", "must be >= 1");
  for (std::size_t i = 0; i < c.poa.multipliers.size(); ++i) {
    if (!(c.poa.multipliers[i] >= 0.0)) {
      throw ConfigError("poa.multipliers[" + std::to_string(i) + "]",
                        "must be non-negative");
    }
  }
  if (c.sweep.seeds < 1) throw ConfigError("sweep.seeds", "must be >= 1");
  return c;
}

ExperimentConfig parse_config_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

json to_json(const ExperimentConfig& c) {
  const GeneratorConfig& g = c.generator;
  const PowerSearchConfig& p = c.engine.best_response.power;
  return json{
      {"seed", c.seed},
      {"output_dir", c.output_dir},
      {"generator",
       {{"num_bs", g.num_bs},
        {"num_users", g.num_users},
        {"cell_radius_m", g.cell_radius_m},
        {"bs_spacing_m", g.bs_spacing_m},
        {"min_user_distance_m", g.min_user_distance_m},
        {"num_channels", g.num_channels},
        {"channel_bandwidth_hz", g.channel_bandwidth_hz},
        {"noise_power_w", g.noise_power_w},
        {"path_loss_exponent", g.path_loss_exponent},
        {"interference_scale", g.interference_scale}}},
      {"user",
       {{"kappa", g.user.kappa},
        {"f_max_hz", g.user.f_max_hz},
        {"f_min_positive_hz", g.user.f_min_positive_hz},
        {"p_min_w", g.user.p_min_w},
        {"p_max_w", g.user.p_max_w},
        {"alpha_t", g.user.alpha_t},
        {"alpha_e", g.user.alpha_e},
        {"tx_range_m", g.user.tx_range_m}}},
      {"task",
       {{"input_bits", g.input_bits}, {"workload_cycles", g.workload_cycles}}},
      {"cloud",
       {{"frequency_hz", g.cloud_frequency_hz}, {"kappa", g.cloud_kappa}}},
      {"engine",
       {{"schedule", to_string(c.engine.schedule)},
        {"max_rounds", c.engine.max_rounds},
        {"eps_power_w", c.engine.eps_power_w},
        {"cycle_window", c.engine.cycle_window},
        {"tie_tolerance", c.engine.best_response.tie_tolerance}}},
      {"power_search",
       {{"newton_max_iter", p.newton_max_iter},
        {"newton_tol", p.newton_tol},
        {"multistart_count", p.multistart_count},
        {"fallback_grid", p.fallback_grid}}},
      {"poa",
       {{"grid_points", c.poa.grid_points},
        {"exhaustive_limit", c.poa.exhaustive_limit},
        {"multipliers", c.poa.multipliers}}},
      {"sweep",
       {{"axis", c.sweep.axis},
        {"values", c.sweep.values},
        {"seeds", c.sweep.seeds}}},
  };
}

const std::vector<std::string>& sweep_axes() {
  static const std::vector<std::string> axes{
      "num_users", "input_bits", "workload_cycles", "alpha_t",
      "interference_scale"};
  return axes;
}

ExperimentConfig apply_axis(ExperimentConfig c, const std::string& axis,
                            double value) {
  GeneratorConfig& g = c.generator;
  if (axis == "num_users") {
    if (!(value >= 1.0) || value != std::floor(value)) {
      throw ConfigError("sweep.values", "num_users needs positive integers");
    }
    g.num_users = static_cast<std::size_t>(value);
  } else if (axis == "input_bits") {
    const double cycles_per_bit = g.workload_cycles / g.input_bits;
    g.input_bits = value;
    g.workload_cycles = cycles_per_bit * value;
  } else if (axis == "workload_cycles") {
    g.workload_cycles = value;
  } else if (axis == "alpha_t") {
    g.user.alpha_t = value;
    g.user.alpha_e = 1.0 - value;
  } else if (axis == "interference_scale") {
    g.interference_scale = value;
  } else {
    std::string known;
    for (const auto& a : sweep_axes()) known += (known.empty() ? "" : ", ") + a;
    throw ConfigError("sweep.axis",
                      "unknown axis '" + axis + "' (expected one of " + known + ")");
  }
  validated("sweep", [&] { g.validate(); });
  return c;
}

Network build_network(const GeneratorConfig& generator, std::uint64_t seed) {
  Scenario scenario = generate_scenario(generator, seed);
  ChannelPlan plan = assign_channels_in_order(scenario);
  return Network(std::move(scenario), std::move(plan));
}

}  // namespace mecgame::experiment
