#include "frem/bench/config.hpp"

#include "frem/error.hpp"

#include <algorithm>
#include <initializer_list>
#include <nlohmann/json.hpp>

namespace frem::bench {

using nlohmann::json;

namespace {

void
require_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed)
{
  if (!j.is_object())
    raise(ErrorCode::SchemaError, std::string(where) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      raise(ErrorCode::SchemaError, "unknown key '" + key + "' in " + std::string(where));
  }
}

template<class T>
void
read(const json& j, const char* key, T& out)
{
  if (!j.contains(key))
    return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    raise(ErrorCode::SchemaError, std::string("field '") + key + "' has the wrong type");
  }
}

template<class T>
void
read_optional(const json& j, const char* key, std::optional<T>& out)
{
  if (!j.contains(key))
    return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(j, key, v);
  out = v;
}

json
parse_json(std::string_view text)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
}

template<class T>
json
opt(const std::optional<T>& v)
{
  return v ? json(*v) : json(nullptr);
}

void
read_tuning(const json& j, TuningGrids& t)
{
  require_keys(j,
               "tuning",
               { "bandwidth_count", "quantile_low", "quantile_high", "frem_folds", "fnw_folds",
                 "flr_folds", "flr_p", "dim_k1", "dim_k2", "dim_base_points", "dim_delta" });
  read(j, "bandwidth_count", t.bandwidth_count);
  read(j, "quantile_low", t.quantile_low);
  read(j, "quantile_high", t.quantile_high);
  read(j, "frem_folds", t.frem_folds);
  read(j, "fnw_folds", t.fnw_folds);
  read(j, "flr_folds", t.flr_folds);
  read(j, "flr_p", t.flr_p);
  read(j, "dim_k1", t.dim_k1);
  read(j, "dim_k2", t.dim_k2);
  read_optional(j, "dim_base_points", t.dim_base_points);
  read_optional(j, "dim_delta", t.dim_delta);
}

json
tuning_json(const TuningGrids& t)
{
  return { { "bandwidth_count", t.bandwidth_count },
           { "quantile_low", t.quantile_low },
           { "quantile_high", t.quantile_high },
           { "frem_folds", t.frem_folds },
           { "fnw_folds", t.fnw_folds },
           { "flr_folds", t.flr_folds },
           { "flr_p", t.flr_p },
           { "dim_k1", t.dim_k1 },
           { "dim_k2", t.dim_k2 },
           { "dim_base_points", opt(t.dim_base_points) },
           { "dim_delta", opt(t.dim_delta) } };
}

void
read_recovery(const json& j, RecoveryOptions& r)
{
  require_keys(j, "recovery", { "nu", "candidate_count", "candidate_spread", "fixed_bandwidth", "ridge" });
  read(j, "nu", r.nu);
  read(j, "candidate_count", r.candidate_count);
  read(j, "candidate_spread", r.candidate_spread);
  read_optional(j, "fixed_bandwidth", r.fixed_bandwidth);
  read_optional(j, "ridge", r.ridge);
}

json
recovery_json(const RecoveryOptions& r)
{
  return { { "nu", r.nu },
           { "candidate_count", r.candidate_count },
           { "candidate_spread", r.candidate_spread },
           { "fixed_bandwidth", opt(r.fixed_bandwidth) },
           { "ridge", opt(r.ridge) } };
}


void
read_simulation(const json& j, SimulationConfig& c)
{
  require_keys(j,
               "simulation config",
               { "setting", "n", "m", "snr_x", "snr_y", "replicates", "test_size", "master_seed",
                 "methods", "tuning", "recovery", "design", "normalize", "grid_points", "circle_c",
                 "circle_terms" });
  if (j.contains("setting")) {
    std::string s;
    read(j, "setting", s);
    c.setting = parse_setting(s);
  }
  if (j.contains("n")) {
    if (j.at("n").is_array()) {
      read(j, "n", c.n);
    } else {
      std::size_t one = 0;
      read(j, "n", one);
      c.n = { one };
    }
  }
  read(j, "m", c.m);
  read(j, "snr_x", c.snr_x);
  read(j, "snr_y", c.snr_y);
  read(j, "replicates", c.replicates);
  read(j, "test_size", c.test_size);
  read(j, "master_seed", c.master_seed);
  if (j.contains("methods")) {
    std::vector<std::string> names;
    read(j, "methods", names);
    c.methods.clear();
    for (const auto& name : names)
      c.methods.push_back(parse_method(name));
  }
  if (j.contains("tuning"))
    read_tuning(j.at("tuning"), c.tuning);
  if (j.contains("recovery"))
    read_recovery(j.at("recovery"), c.recovery);
  if (j.contains("design")) {
    std::string d;
    read(j, "design", d);
    if (d == "fixed")
      c.design = Design::Fixed;
    else if (d == "random")
      c.design = Design::Random;
    else
      raise(ErrorCode::SchemaError, "design must be 'fixed' or 'random'");
  }
  read(j, "normalize", c.normalize);
  read(j, "grid_points", c.grid_points);
  read(j, "circle_c", c.circle_c);
  read(j, "circle_terms", c.circle_terms);
}

json
simulation_json(const SimulationConfig& c)
{
  json methods = json::array();
  for (Method m : c.methods)
    methods.push_back(to_string(m));
  return { { "setting", to_string(c.setting) },
           { "n", c.n },
           { "m", c.m },
           { "snr_x", c.snr_x },
           { "snr_y", c.snr_y },
           { "replicates", c.replicates },
           { "test_size", c.test_size },
           { "master_seed", c.master_seed },
           { "methods", methods },
           { "tuning", tuning_json(c.tuning) },
           { "recovery", recovery_json(c.recovery) },
           { "design", c.design == Design::Fixed ? "fixed" : "random" },
           { "normalize", c.normalize },
           { "grid_points", c.grid_points },
           { "circle_c", c.circle_c },
           { "circle_terms", c.circle_terms } };
}

void
schema_check(bool ok, const std::string& what)
{
  if (!ok)
    raise(ErrorCode::SchemaError, what);
}

} // namespace

std::string
to_string(Method m)
{
  switch (m) {
    case Method::Frem:
      return "frem";
    case Method::Fnw:
      return "fnw";
    case Method::Flr:
      return "flr";
  }
  return "unknown";
}

Method
parse_method(std::string_view name)
{
  if (name == "frem")
    return Method::Frem;
  if (name == "fnw")
    return Method::Fnw;
  if (name == "flr")
    return Method::Flr;
  raise(ErrorCode::SchemaError, "unknown method '" + std::string(name) + "'");
}

void
SimulationConfig::validate() const
{
  schema_check(!n.empty(), "n must list at least one sample size");
  for (std::size_t v : n)
    schema_check(v >= 50, "every n must be at least 50");
  schema_check(m == 0 || m >= 4, "m must be 0 (clean curves) or at least 4");
  schema_check(snr_x > 0.0 && snr_y > 0.0, "snr values must be positive");
  schema_check(replicates >= 1, "replicates must be at least 1");
  schema_check(test_size >= 1, "test_size must be at least 1");
  schema_check(!methods.empty(), "methods must not be empty");
  schema_check(tuning.bandwidth_count >= 1, "bandwidth_count must be positive");
  schema_check(tuning.quantile_low > 0.0 && tuning.quantile_low <= tuning.quantile_high &&
                 tuning.quantile_high <= 1.0,
               "need 0 < quantile_low <= quantile_high <= 1");
  schema_check(tuning.frem_folds >= 2 && tuning.fnw_folds >= 2 && tuning.flr_folds >= 2,
               "fold counts must be at least 2");
  schema_check(!tuning.flr_p.empty(), "flr_p must not be empty");
  schema_check(tuning.dim_k1 >= 2 && tuning.dim_k1 <= tuning.dim_k2, "need 2 <= dim_k1 <= dim_k2");
  schema_check(grid_points >= 2, "grid_points must be at least 2");
  schema_check(setting != Setting::Circle || (circle_c > 1.5 && circle_terms >= 1),
               "circle needs circle_c > 1.5 and circle_terms >= 1");
}

SimulationConfig
parse_simulation_config(std::string_view text)
{
  SimulationConfig c;
  read_simulation(parse_json(text), c);
  c.validate();
  return c;
}

std::string
to_json(const SimulationConfig& c)
{
  return simulation_json(c).dump(1);
}

void
RateStudyConfig::validate() const
{
  schema_check(abscissae.size() >= 3, "a rate study needs at least three abscissae");
  schema_check(target == "rmse" || target == "rmse_signal", "target must be 'rmse' or 'rmse_signal'");
  schema_check(bootstrap >= 1, "bootstrap must be at least 1");
  if (mode == RateMode::Recovery) {
    for (std::size_t m : abscissae)
      schema_check(m >= 4, "every m must be at least 4");
    schema_check(replicates >= 2, "replicates must be at least 2");
    schema_check(snr_x > 0.0 && nu > 0.0, "snr_x and nu must be positive");
    schema_check(grid_points >= 2, "grid_points must be at least 2");
  } else {
    for (std::size_t n : abscissae)
      schema_check(n >= 50, "every n must be at least 50");
    SimulationConfig copy = simulation;
    copy.n = abscissae;
    copy.validate();
  }
}

RateStudyConfig
parse_rate_study_config(std::string_view text)
{
  const json j = parse_json(text);
  require_keys(j,
               "rate-study config",
               { "mode", "abscissae", "simulation", "method", "target", "bootstrap", "nu", "snr_x",
                 "replicates", "master_seed", "grid_points" });
  RateStudyConfig c;
  if (j.contains("mode")) {
    std::string mode;
    read(j, "mode", mode);
    if (mode == "regression")
      c.mode = RateMode::Regression;
    else if (mode == "recovery")
      c.mode = RateMode::Recovery;
    else
      raise(ErrorCode::SchemaError, "mode must be 'regression' or 'recovery'");
  }
  read(j, "abscissae", c.abscissae);
  if (j.contains("simulation"))
    read_simulation(j.at("simulation"), c.simulation);
  if (j.contains("method")) {
    std::string m;
    read(j, "method", m);
    c.method = parse_method(m);
  }
  read(j, "target", c.target);
  read(j, "bootstrap", c.bootstrap);
  read(j, "nu", c.nu);
  read(j, "snr_x", c.snr_x);
  read(j, "replicates", c.replicates);
  read(j, "master_seed", c.master_seed);
  read(j, "grid_points", c.grid_points);
  c.validate();
  return c;
}

std::string
to_json(const RateStudyConfig& c)
{
  const json j = { { "mode", c.mode == RateMode::Regression ? "regression" : "recovery" },
                   { "abscissae", c.abscissae },
                   { "simulation", simulation_json(c.simulation) },
                   { "method", to_string(c.method) },
                   { "target", c.target },
                   { "bootstrap", c.bootstrap },
                   { "nu", c.nu },
                   { "snr_x", c.snr_x },
                   { "replicates", c.replicates },
                   { "master_seed", c.master_seed },
                   { "grid_points", c.grid_points } };
  return j.dump(1);
}

std::uint64_t
fnv1a(std::string_view text) noexcept
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

} // namespace frem::bench
