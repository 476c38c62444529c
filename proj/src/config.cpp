#include "stirap/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

#include "stirap/errors.hpp"

namespace stirap {

namespace {

// Reference defaults for ingesting interaction strengths via density.
constexpr double kDefaultDensity = 4.3e14;  // cm^-3
constexpr double kDefaultUaa = 4.96e-17;    // MHz cm^3
constexpr double kDefaultUag = -6.44e-17;
constexpr double kDefaultUgg = 2.48e-17;
constexpr double kOmegaTau = 5.0e3;

const std::set<std::string> kDelta1Forms = {"delta1", "delta1_gamma_b"};
const std::set<std::string> kLambdaForm = {"lambda_aa", "lambda_ag", "lambda_gg"};
const std::set<std::string> kDensityForm = {"density", "u_aa", "u_ag", "u_gg"};

const std::set<std::string> kKnownKeys = {
    "omega0", "tau", "t1", "t2", "delta1", "delta1_gamma_b", "gamma_b",
    "lambda_aa", "lambda_ag", "lambda_gg", "density", "u_aa", "u_ag", "u_gg",
    "t_start", "t_end", "reltol", "abstol", "samples", "threads", "out",
    "cpt.ratio_min", "cpt.ratio_max", "cpt.points",
    "map.ratio_min", "map.ratio_max", "map.ratio_points",
    "map.detuning_min", "map.detuning_max", "map.detuning_points", "map.include_loss",
    "sweep.delta1_gamma_min", "sweep.delta1_gamma_max", "sweep.delta1_points", "sweep.t1",
    "optimize.delta1_gamma_min", "optimize.delta1_gamma_max", "optimize.delay_min",
    "optimize.delay_max", "optimize.budget", "evolve.compare_gamma_scales"};

bool ignored_key(const std::string& key) {
  return key.rfind("meta.", 0) == 0 || key.rfind("result.", 0) == 0;
}

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& field, const std::string& why) {
  throw ConfigError("config field '" + field + "': " + why);
}

// Splits "<number><space?><unit>" into its parts.
std::pair<double, std::string> split_quantity(const std::string& field, const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) bad(field, "empty value");
  const char* begin = s.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) bad(field, "expected a number, got '" + s + "'");
  if (!std::isfinite(v)) bad(field, "value is not finite");
  std::string unit;
  for (const char* p = end; *p; ++p) {
    if (!std::isspace(static_cast<unsigned char>(*p)) && *p != '*' && *p != '^') unit += *p;
  }
  return {v, unit};
}

double parse_number(const std::string& field, const std::string& text) {
  auto [v, unit] = split_quantity(field, text);
  if (!unit.empty()) bad(field, "unexpected unit '" + unit + "'");
  return v;
}

std::size_t parse_count(const std::string& field, const std::string& text) {
  const double v = parse_number(field, text);
  if (v < 0 || v != std::floor(v)) bad(field, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& field, const std::string& text) {
  std::string s = trim(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  bad(field, "expected true or false");
}

// Time in us; "tau" multiples need the resolved width.
double parse_time(const std::string& field, const std::string& text, double tau) {
  auto [v, unit] = split_quantity(field, text);
  if (unit == "us") return v * units::us;
  if (unit == "ms") return v * units::ms;
  if (unit == "tau") return v * tau;
  if (unit.empty()) bad(field, "time needs a unit (us, ms or tau)");
  bad(field, "unknown time unit '" + unit + "'");
}

double parse_interaction(const std::string& field, const std::string& text) {
  auto [v, unit] = split_quantity(field, text);
  if (unit == "MHzcm3") return v * units::MHz;
  if (unit == "kHzcm3") return v * units::kHz;
  if (unit.empty()) bad(field, "interaction strength needs a unit (MHz cm^3 or kHz cm^3)");
  bad(field, "unknown interaction unit '" + unit + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

using Layer = std::map<std::string, std::string>;

Layer to_layer(const KeyValues& kv, const char* origin) {
  Layer layer;
  for (const auto& [key, value] : kv) {
    if (ignored_key(key)) continue;
    if (!kKnownKeys.count(key)) {
      throw ConfigError(std::string("unknown config field '") + key + "' (" + origin + ")");
    }
    layer[key] = value;
  }
  auto has_any = [&](const std::set<std::string>& keys) {
    return std::any_of(keys.begin(), keys.end(), [&](const auto& k) { return layer.count(k) > 0; });
  };
  if (layer.count("delta1") && layer.count("delta1_gamma_b")) {
    throw ConfigError(std::string("config field 'delta1': conflicting units, given both as an "
                                  "absolute frequency and as a multiple of gamma_b (") +
                      origin + ")");
  }
  if (has_any(kLambdaForm) && has_any(kDensityForm)) {
    throw ConfigError(std::string("config field 'lambda_*': conflicting units, collision rates "
                                  "given both directly and via density/u_* (") +
                      origin + ")");
  }
  return layer;
}

void overlay(Layer& base, const Layer& top) {
  auto replaces = [&](const std::set<std::string>& mine, const std::set<std::string>& other) {
    const bool touches = std::any_of(mine.begin(), mine.end(),
                                     [&](const auto& k) { return top.count(k) > 0; });
    if (touches) {
      for (const auto& k : other) base.erase(k);
    }
  };
  replaces(kDelta1Forms, kDelta1Forms);
  replaces(kLambdaForm, kDensityForm);
  replaces(kDensityForm, kLambdaForm);
  for (const auto& [k, v] : top) base[k] = v;
}

}  // namespace

double parse_frequency(const std::string& field, const std::string& text) {
  auto [v, unit] = split_quantity(field, text);
  if (unit == "MHz") return v * units::MHz;
  if (unit == "kHz") return v * units::kHz;
  if (unit.empty()) bad(field, "frequency needs a unit suffix (MHz or kHz)");
  bad(field, "unknown frequency unit '" + unit + "'");
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("invalid physical parameters: ") + e.what());
  }
  if (!(evolve.reltol > 0.0)) bad("reltol", "must be positive");
  if (!(evolve.abstol > 0.0)) bad("abstol", "must be positive");
  if (evolve.samples < 2) bad("samples", "need at least 2");
  if (t_end && !(*t_end > t_start)) bad("t_end", "must exceed t_start");
  if (!(cpt.ratio_min >= 0.0) || !(cpt.ratio_max >= cpt.ratio_min)) bad("cpt.ratio_min", "bad range");
  if (cpt.points < 1) bad("cpt.points", "need at least 1");
  if (!(map.ratio_min > 0.0) || !(map.ratio_max >= map.ratio_min)) bad("map.ratio_min", "bad range");
  if (!(map.detuning_max >= map.detuning_min)) bad("map.detuning_min", "bad range");
  if (map.ratio_points < 1 || map.detuning_points < 1) bad("map.ratio_points", "need at least 1");
  if ((map.ratio_points > 1 && !(map.ratio_max > map.ratio_min)) ||
      (map.detuning_points > 1 && !(map.detuning_max > map.detuning_min))) {
    bad("map.ratio_max", "axis with several points needs max > min");
  }
  if (!(sweep.delta1_gamma_max >= sweep.delta1_gamma_min)) bad("sweep.delta1_gamma_min", "bad range");
  if (sweep.delta1_points < 1) bad("sweep.delta1_points", "need at least 1");
  if (!(optimize.delta1_gamma_max >= optimize.delta1_gamma_min)) {
    bad("optimize.delta1_gamma_min", "bad range");
  }
  if (!(optimize.delay_max >= optimize.delay_min)) bad("optimize.delay_min", "bad range");
  if (optimize.budget < 9) bad("optimize.budget", "must be at least 9");
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  KeyValues out;

  if (path.extension() == ".json") {
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("config file '" + path.string() + "': " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config file '" + path.string() + "': expected an object");
    for (const auto& [key, value] : j.items()) {
      if (value.is_string()) {
        out.emplace_back(key, value.get<std::string>());
      } else if (value.is_boolean()) {
        out.emplace_back(key, value.get<bool>() ? "true" : "false");
      } else if (value.is_number_integer() || value.is_number_unsigned()) {
        out.emplace_back(key, value.dump());
      } else if (value.is_number()) {
        out.emplace_back(key, fmt17(value.get<double>()));
      } else if (!ignored_key(key)) {
        throw ConfigError("config field '" + key + "': unsupported JSON value");
      }
    }
    return out;
  }

  std::string section;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    // '#' starts a comment unless inside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (!section.empty()) key = section + "." + key;
    out.emplace_back(key, unquote(line.substr(eq + 1)));
  }
  return out;
}

RunConfig parse_config(const std::optional<std::filesystem::path>& file, const KeyValues& flags) {
  Layer merged;
  if (file) overlay(merged, to_layer(read_config_file(*file), "config file"));
  overlay(merged, to_layer(flags, "command line"));

  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  SystemParams& p = cfg.params;

  if (auto v = get("omega0")) p.omega0 = parse_frequency("omega0", *v);
  if (auto v = get("gamma_b")) p.gamma_b = parse_frequency("gamma_b", *v);
  p.delta1 = -1.4 * p.gamma_b;
  if (auto v = get("delta1")) {
    auto [num, unit] = split_quantity("delta1", *v);
    p.delta1 = unit == "gamma_b" ? num * p.gamma_b : parse_frequency("delta1", *v);
  }
  if (auto v = get("delta1_gamma_b")) p.delta1 = parse_number("delta1_gamma_b", *v) * p.gamma_b;

  if (get("density") || get("u_aa") || get("u_ag") || get("u_gg")) {
    const double rho = get("density") ? parse_number("density", *get("density")) : kDefaultDensity;
    const double uaa = get("u_aa") ? parse_interaction("u_aa", *get("u_aa")) : kDefaultUaa;
    const double uag = get("u_ag") ? parse_interaction("u_ag", *get("u_ag")) : kDefaultUag;
    const double ugg = get("u_gg") ? parse_interaction("u_gg", *get("u_gg")) : kDefaultUgg;
    CollisionRates rates;
    try {
      rates = collision_rates_from_density(rho, uaa, uag, ugg);
    } catch (const DomainError& e) {
      bad("density", e.what());
    }
    p.lambda_aa = rates.lambda_aa;
    p.lambda_ag = rates.lambda_ag;
    p.lambda_gg = rates.lambda_gg;
  }
  if (auto v = get("lambda_aa")) p.lambda_aa = parse_frequency("lambda_aa", *v);
  if (auto v = get("lambda_ag")) p.lambda_ag = parse_frequency("lambda_ag", *v);
  if (auto v = get("lambda_gg")) p.lambda_gg = parse_frequency("lambda_gg", *v);

  if (!(p.omega0 > 0.0)) bad("omega0", "must be positive");
  p.tau = kOmegaTau / p.omega0;
  if (auto v = get("tau")) {
    auto [num, unit] = split_quantity("tau", *v);
    if (unit == "tau") bad("tau", "cannot be given in units of itself");
    p.tau = parse_time("tau", *v, 0.0);
  }
  if (!(p.tau > 0.0)) bad("tau", "must be positive");
  p.t1 = 3.77 * p.tau;
  p.t2 = 2.5 * p.tau;
  if (auto v = get("t1")) p.t1 = parse_time("t1", *v, p.tau);
  if (auto v = get("t2")) p.t2 = parse_time("t2", *v, p.tau);

  if (auto v = get("t_start")) cfg.t_start = parse_time("t_start", *v, p.tau);
  if (auto v = get("t_end")) cfg.t_end = parse_time("t_end", *v, p.tau);
  if (auto v = get("reltol")) cfg.evolve.reltol = parse_number("reltol", *v);
  if (auto v = get("abstol")) cfg.evolve.abstol = parse_number("abstol", *v);
  if (auto v = get("samples")) cfg.evolve.samples = parse_count("samples", *v);
  if (auto v = get("threads")) cfg.threads = static_cast<unsigned>(parse_count("threads", *v));
  if (auto v = get("out")) cfg.out_dir = trim(*v);

  if (auto v = get("cpt.ratio_min")) cfg.cpt.ratio_min = parse_number("cpt.ratio_min", *v);
  if (auto v = get("cpt.ratio_max")) cfg.cpt.ratio_max = parse_number("cpt.ratio_max", *v);
  if (auto v = get("cpt.points")) cfg.cpt.points = parse_count("cpt.points", *v);

  if (auto v = get("map.ratio_min")) cfg.map.ratio_min = parse_number("map.ratio_min", *v);
  if (auto v = get("map.ratio_max")) cfg.map.ratio_max = parse_number("map.ratio_max", *v);
  if (auto v = get("map.ratio_points")) cfg.map.ratio_points = parse_count("map.ratio_points", *v);
  if (auto v = get("map.detuning_min")) cfg.map.detuning_min = parse_number("map.detuning_min", *v);
  if (auto v = get("map.detuning_max")) cfg.map.detuning_max = parse_number("map.detuning_max", *v);
  if (auto v = get("map.detuning_points")) {
    cfg.map.detuning_points = parse_count("map.detuning_points", *v);
  }
  if (auto v = get("map.include_loss")) cfg.map.include_loss = parse_bool("map.include_loss", *v);

  if (auto v = get("sweep.delta1_gamma_min")) {
    cfg.sweep.delta1_gamma_min = parse_number("sweep.delta1_gamma_min", *v);
  }
  if (auto v = get("sweep.delta1_gamma_max")) {
    cfg.sweep.delta1_gamma_max = parse_number("sweep.delta1_gamma_max", *v);
  }
  if (auto v = get("sweep.delta1_points")) {
    cfg.sweep.delta1_points = parse_count("sweep.delta1_points", *v);
  }
  cfg.sweep.t1_values = {3.0 * p.tau, 3.77 * p.tau, 4.5 * p.tau};
  if (auto v = get("sweep.t1")) {
    cfg.sweep.t1_values.clear();
    for (const auto& item : split_list(*v)) {
      cfg.sweep.t1_values.push_back(parse_time("sweep.t1", item, p.tau));
    }
    if (cfg.sweep.t1_values.empty()) bad("sweep.t1", "empty list");
  }

  if (auto v = get("optimize.delta1_gamma_min")) {
    cfg.optimize.delta1_gamma_min = parse_number("optimize.delta1_gamma_min", *v);
  }
  if (auto v = get("optimize.delta1_gamma_max")) {
    cfg.optimize.delta1_gamma_max = parse_number("optimize.delta1_gamma_max", *v);
  }
  cfg.optimize.delay_min = 0.5 * p.tau;
  cfg.optimize.delay_max = 2.0 * p.tau;
  if (auto v = get("optimize.delay_min")) {
    cfg.optimize.delay_min = parse_time("optimize.delay_min", *v, p.tau);
  }
  if (auto v = get("optimize.delay_max")) {
    cfg.optimize.delay_max = parse_time("optimize.delay_max", *v, p.tau);
  }
  if (auto v = get("optimize.budget")) cfg.optimize.budget = parse_count("optimize.budget", *v);
  if (auto v = get("evolve.compare_gamma_scales")) {
    cfg.compare_gamma_scales = parse_bool("evolve.compare_gamma_scales", *v);
  }

  cfg.validate();
  return cfg;
}

std::map<std::string, std::string> resolved_parameters(const RunConfig& c) {
  const SystemParams& p = c.params;
  auto mhz = [](double v) { return fmt17(v) + " MHz"; };
  auto us = [](double v) { return fmt17(v) + " us"; };
  std::map<std::string, std::string> out{
      {"omega0", mhz(p.omega0)},
      {"tau", us(p.tau)},
      {"t1", us(p.t1)},
      {"t2", us(p.t2)},
      {"delta1", mhz(p.delta1)},
      {"gamma_b", mhz(p.gamma_b)},
      {"lambda_aa", mhz(p.lambda_aa)},
      {"lambda_ag", mhz(p.lambda_ag)},
      {"lambda_gg", mhz(p.lambda_gg)},
      {"t_start", us(c.t_start)},
      {"reltol", fmt17(c.evolve.reltol)},
      {"abstol", fmt17(c.evolve.abstol)},
      {"samples", std::to_string(c.evolve.samples)},
      {"threads", std::to_string(c.threads)},
      {"out", c.out_dir.string()},
      {"cpt.ratio_min", fmt17(c.cpt.ratio_min)},
      {"cpt.ratio_max", fmt17(c.cpt.ratio_max)},
      {"cpt.points", std::to_string(c.cpt.points)},
      {"map.ratio_min", fmt17(c.map.ratio_min)},
      {"map.ratio_max", fmt17(c.map.ratio_max)},
      {"map.ratio_points", std::to_string(c.map.ratio_points)},
      {"map.detuning_min", fmt17(c.map.detuning_min)},
      {"map.detuning_max", fmt17(c.map.detuning_max)},
      {"map.detuning_points", std::to_string(c.map.detuning_points)},
      {"map.include_loss", c.map.include_loss ? "true" : "false"},
      {"sweep.delta1_gamma_min", fmt17(c.sweep.delta1_gamma_min)},
      {"sweep.delta1_gamma_max", fmt17(c.sweep.delta1_gamma_max)},
      {"sweep.delta1_points", std::to_string(c.sweep.delta1_points)},
      {"optimize.delta1_gamma_min", fmt17(c.optimize.delta1_gamma_min)},
      {"optimize.delta1_gamma_max", fmt17(c.optimize.delta1_gamma_max)},
      {"optimize.delay_min", us(c.optimize.delay_min)},
      {"optimize.delay_max", us(c.optimize.delay_max)},
      {"optimize.budget", std::to_string(c.optimize.budget)},
      {"evolve.compare_gamma_scales", c.compare_gamma_scales ? "true" : "false"},
  };
  if (c.t_end) out["t_end"] = us(*c.t_end);
  std::string t1s;
  for (double t : c.sweep.t1_values) t1s += (t1s.empty() ? "" : ", ") + us(t);
  if (!t1s.empty()) out["sweep.t1"] = t1s;
  return out;
}

}  // namespace stirap
