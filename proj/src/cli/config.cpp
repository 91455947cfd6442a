#include "cogniopt/cli/config.h"

#include <cmath>
#include <fstream>

namespace cogniopt::cli {

namespace {

using nlohmann::json;

std::string join(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

// Reads `key` or `key_db` from `obj`; returns nullopt when neither is present.
std::optional<double> linear_field(const json& obj, const std::string& section, const std::string& key) {
  const bool has_lin = obj.contains(key);
  const bool has_db = obj.contains(key + "_db");
  if (has_lin && has_db) {
    throw ConfigError(join(section, key), "give either the linear or the _db form, not both");
  }
  if (has_lin) return as_number(obj.at(key), join(section, key));
  if (has_db) return db_to_linear(as_number(obj.at(key + "_db"), join(section, key + "_db")));
  return std::nullopt;
}

// Scalar or array variant of linear_field.
std::optional<std::vector<double>> linear_list(const json& obj, const std::string& section,
                                               const std::string& key) {
  for (const bool db : {false, true}) {
    const std::string name = db ? key + "_db" : key;
    if (!obj.contains(name)) continue;
    if (obj.contains(key) && obj.contains(key + "_db")) {
      throw ConfigError(join(section, key), "give either the linear or the _db form, not both");
    }
    const auto& v = obj.at(name);
    std::vector<double> out;
    if (v.is_array()) {
      if (v.empty()) throw ConfigError(join(section, name), "must not be empty");
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(as_number(v[i], join(section, name) + "[" + std::to_string(i) + "]"));
      }
    } else {
      out.push_back(as_number(v, join(section, name)));
    }
    if (db) {
      for (auto& x : out) x = db_to_linear(x);
    }
    return out;
  }
  return std::nullopt;
}

const json& section_of(const json& doc, const std::string& name) {
  static const json empty = json::object();
  if (!doc.contains(name)) return empty;
  const auto& s = doc.at(name);
  if (!s.is_object()) throw ConfigError(name, "expected an object");
  return s;
}

FadingModel parse_fading(const json& obj, const std::string& field) {
  if (!obj.is_object()) throw ConfigError(field, "expected an object");
  FadingModel m;
  if (obj.contains("kind")) {
    const auto& k = obj.at("kind");
    if (!k.is_string()) throw ConfigError(field + ".kind", "expected a string");
    const auto kind = k.get<std::string>();
    if (kind == "rayleigh") {
      m.kind = FadingKind::rayleigh;
    } else if (kind == "deterministic" || kind == "awgn") {
      m.kind = FadingKind::deterministic;
    } else {
      throw ConfigError(field + ".kind", "unknown fading kind '" + kind + "'");
    }
  }
  if (auto v = linear_field(obj, field, "mean_snr")) m.mean_snr = *v;
  if (!(m.mean_snr > 0.0)) throw ConfigError(field + ".mean_snr", "must be > 0");
  return m;
}

std::vector<double> parse_eta_grid(const json& v, const std::string& field, double sigma2) {
  std::vector<double> grid;
  if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      grid.push_back(as_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
  } else if (v.is_object()) {
    for (const char* k : {"start", "stop", "points"}) {
      if (!v.contains(k)) throw ConfigError(field + "." + k, "missing");
    }
    const double start = as_number(v.at("start"), field + ".start");
    const double stop = as_number(v.at("stop"), field + ".stop");
    const auto& pts = v.at("points");
    if (!pts.is_number_integer() || pts.get<long long>() < 1) {
      throw ConfigError(field + ".points", "expected a positive integer");
    }
    const bool relative = v.value("relative_to_noise", false);
    grid = linspace(start, stop, static_cast<int>(pts.get<long long>()));
    if (relative) {
      for (auto& x : grid) x *= sigma2;
    }
  } else {
    throw ConfigError(field, "expected an array or {start, stop, points}");
  }
  if (grid.empty()) throw ConfigError(field, "threshold grid is empty");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < 0.0) throw ConfigError(field, "thresholds must be >= 0");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw ConfigError(field, "thresholds must be strictly increasing");
  }
  return grid;
}

}  // namespace

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

CapacityLaw parse_capacity_law(const std::string& text) {
  if (text == "shannon" || text == "shannon_1plus") return CapacityLaw::shannon_1plus;
  if (text == "paper" || text == "paper_literal") return CapacityLaw::paper_literal;
  throw ConfigError("scenario.capacity_law", "expected 'shannon' or 'paper', got '" + text + "'");
}

std::string to_string(CapacityLaw law) {
  return law == CapacityLaw::shannon_1plus ? "shannon" : "paper";
}

SensingParams RunConfig::sensing(std::size_t index) const {
  SensingParams p;
  p.sensed_snr = sensed_snrs.at(index);
  p.num_samples = num_samples;
  p.noise_variance = noise_variance;
  p.sampling_freq = sampling_freq;
  p.sensing_time = sensing_time;
  p.frame_duration = frame_duration;
  return p;
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("<root>", "expected a JSON object");
  RunConfig c;

  const auto& s = section_of(doc, "sensing");
  c.sensed_snrs = linear_list(s, "sensing", "sensed_snr").value_or(std::vector<double>{db_to_linear(-15.0)});
  if (auto v = linear_field(s, "sensing", "noise_variance")) c.noise_variance = *v;
  if (auto v = linear_field(s, "sensing", "sampling_freq")) c.sampling_freq = *v;
  if (auto v = linear_field(s, "sensing", "sensing_time")) c.sensing_time = *v;
  if (auto v = linear_field(s, "sensing", "frame_duration")) c.frame_duration = *v;
  if (s.contains("num_samples")) {
    const auto& n = s.at("num_samples");
    if (!n.is_number_integer()) throw ConfigError("sensing.num_samples", "expected an integer");
    c.num_samples = n.get<std::int64_t>();
  } else if (c.sampling_freq && c.sensing_time) {
    c.num_samples = std::llround(*c.sampling_freq * *c.sensing_time);
  }
  if (c.sampling_freq.has_value() != c.sensing_time.has_value()) {
    throw ConfigError("sensing.sampling_freq", "sampling_freq and sensing_time must be given together");
  }
  for (std::size_t i = 0; i < c.sensed_snrs.size(); ++i) {
    try {
      c.sensing(i).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("sensing", e.what());
    }
  }
  c.eta_grid = s.contains("eta_grid")
                   ? parse_eta_grid(s.at("eta_grid"), "sensing.eta_grid", c.noise_variance)
                   : linspace(0.9 * c.noise_variance, 1.1 * c.noise_variance, 201);

  const auto& ch = section_of(doc, "channel");
  if (auto v = linear_field(ch, "channel", "noise_power")) c.channel.noise_power = *v;
  if (auto v = linear_field(ch, "channel", "gain_sp")) c.channel.gain_sp = *v;
  if (ch.contains("su_fading")) c.channel.su_fading = parse_fading(ch.at("su_fading"), "channel.su_fading");
  if (ch.contains("pu_fading")) c.channel.pu_fading = parse_fading(ch.at("pu_fading"), "channel.pu_fading");
  try {
    c.channel.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("channel", e.what());
  }

  const auto& sc = section_of(doc, "scenario");
  c.scenario.prior_active = 0.4;
  if (sc.contains("prior_active")) c.scenario.prior_active = as_number(sc.at("prior_active"), "scenario.prior_active");
  c.scenario.prior_idle = 1.0 - c.scenario.prior_active;
  if (sc.contains("prior_idle")) {
    c.scenario.prior_idle = as_number(sc.at("prior_idle"), "scenario.prior_idle");
    if (!sc.contains("prior_active")) c.scenario.prior_active = 1.0 - c.scenario.prior_idle;
  }
  c.avg_power_budgets =
      linear_list(sc, "scenario", "avg_power_budget").value_or(std::vector<double>{db_to_linear(15.0)});
  c.scenario.avg_power_budget = c.avg_power_budgets.front();
  c.scenario.peak_interference = linear_field(sc, "scenario", "peak_interference").value_or(1.0);
  if (sc.contains("loss_fraction")) c.scenario.loss_fraction = as_number(sc.at("loss_fraction"), "scenario.loss_fraction");
  if (sc.contains("capacity_law")) {
    const auto& law = sc.at("capacity_law");
    if (!law.is_string()) throw ConfigError("scenario.capacity_law", "expected a string");
    c.scenario.capacity_law = parse_capacity_law(law.get<std::string>());
  }
  for (double pav : c.avg_power_budgets) {
    ScenarioConfig probe = c.scenario;
    probe.avg_power_budget = pav;
    try {
      probe.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("scenario", e.what());
    }
  }

  const auto& so = section_of(doc, "solver");
  if (so.contains("initial_lambda")) c.solver.lambda = as_number(so.at("initial_lambda"), "solver.initial_lambda");
  if (so.contains("step_size")) c.solver.step_size = as_number(so.at("step_size"), "solver.step_size");
  if (so.contains("tolerance")) c.solver.tolerance = as_number(so.at("tolerance"), "solver.tolerance");
  if (so.contains("max_iterations")) {
    const auto& v = so.at("max_iterations");
    if (!v.is_number_integer()) throw ConfigError("solver.max_iterations", "expected an integer");
    c.solver.max_iterations = v.get<std::int64_t>();
  }
  if (so.contains("step_rule")) {
    const auto& v = so.at("step_rule");
    const std::string rule = v.is_string() ? v.get<std::string>() : "";
    if (rule == "constant") {
      c.solver.step_rule = StepRule::constant;
    } else if (rule == "diminishing") {
      c.solver.step_rule = StepRule::diminishing;
    } else {
      throw ConfigError("solver.step_rule", "expected 'constant' or 'diminishing'");
    }
  }
  try {
    c.solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }
  c.eta_search.lower = so.contains("eta_min") ? as_number(so.at("eta_min"), "solver.eta_min") : 0.9 * c.noise_variance;
  c.eta_search.upper = so.contains("eta_max") ? as_number(so.at("eta_max"), "solver.eta_max") : 1.1 * c.noise_variance;
  if (so.contains("eta_points")) {
    const auto& v = so.at("eta_points");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError("solver.eta_points", "expected a positive integer");
    }
    c.eta_search.grid_points = static_cast<int>(v.get<long long>());
  }
  if (!(c.eta_search.lower >= 0.0) || !(c.eta_search.upper >= c.eta_search.lower)) {
    throw ConfigError("solver.eta_min", "need 0 <= eta_min <= eta_max");
  }

  const auto& out = section_of(doc, "output");
  if (out.contains("dir")) {
    if (!out.at("dir").is_string()) throw ConfigError("output.dir", "expected a string");
    c.output_dir = out.at("dir").get<std::string>();
  }

  const auto& val = section_of(doc, "validation");
  if (val.contains("mc_trials")) {
    const auto& v = val.at("mc_trials");
    if (!v.is_number_integer() || v.get<long long>() < 1) {
      throw ConfigError("validation.mc_trials", "expected a positive integer");
    }
    c.validation.mc_trials = v.get<std::uint64_t>();
  }
  if (val.contains("tolerances")) {
    const auto& t = val.at("tolerances");
    if (!t.is_object()) throw ConfigError("validation.tolerances", "expected an object");
    for (const auto& [name, v] : t.items()) {
      c.validation.tolerance_overrides[name] = as_number(v, "validation.tolerances." + name);
    }
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("--config", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

nlohmann::ordered_json RunConfig::resolved() const {
  nlohmann::ordered_json j;
  auto& s = j["sensing"];
  s["sensed_snr"] = sensed_snrs;
  std::vector<double> snr_db;
  for (double x : sensed_snrs) snr_db.push_back(linear_to_db(x));
  s["sensed_snr_db"] = snr_db;
  s["num_samples"] = num_samples;
  s["noise_variance"] = noise_variance;
  if (sampling_freq) s["sampling_freq"] = *sampling_freq;
  if (sensing_time) s["sensing_time"] = *sensing_time;
  if (frame_duration) s["frame_duration"] = *frame_duration;
  s["eta_grid"] = {{"first", eta_grid.front()}, {"last", eta_grid.back()}, {"points", eta_grid.size()}};

  auto fading = [](const FadingModel& m) {
    return nlohmann::ordered_json{{"kind", m.kind == FadingKind::rayleigh ? "rayleigh" : "deterministic"},
                                  {"mean_snr", m.mean_snr}};
  };
  auto& ch = j["channel"];
  ch["noise_power"] = channel.noise_power;
  ch["gain_sp"] = channel.gain_sp;
  ch["su_fading"] = fading(channel.su_fading);
  ch["pu_fading"] = fading(channel.pu_fading);

  auto& sc = j["scenario"];
  sc["prior_idle"] = scenario.prior_idle;
  sc["prior_active"] = scenario.prior_active;
  sc["avg_power_budget"] = avg_power_budgets;
  sc["peak_interference"] = scenario.peak_interference;
  sc["loss_fraction"] = scenario.loss_fraction;
  sc["capacity_law"] = to_string(scenario.capacity_law);

  auto& so = j["solver"];
  so["initial_lambda"] = solver.lambda;
  so["step_size"] = solver.step_size;
  so["tolerance"] = solver.tolerance;
  so["max_iterations"] = solver.max_iterations;
  so["step_rule"] = solver.step_rule == StepRule::constant ? "constant" : "diminishing";
  so["eta_min"] = eta_search.lower;
  so["eta_max"] = eta_search.upper;
  so["eta_points"] = eta_search.grid_points;

  j["validation"]["mc_trials"] = validation.mc_trials;
  j["validation"]["tolerances"] = validation.tolerance_overrides;
  j["output"]["dir"] = output_dir;
  return j;
}

}  // namespace cogniopt::cli
