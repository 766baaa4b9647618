// SPDX-License-Identifier: Apache-2.0

#include "gomp/bench.hpp"

#include <json.hpp>

#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace gomp {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_key(const std::string& key, const std::string& what)
{
  fail_arg("config key '" + key + "': " + what);
}

int as_int(const json& v, const std::string& key)
{
  if (!v.is_number_integer())
    bad_key(key, "expected an integer");
  const auto x = v.get<long long>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    bad_key(key, "out of range");
  return static_cast<int>(x);
}

// Numbers, or the strings "inf" / "-inf".
double as_real(const json& v, const std::string& key)
{
  if (v.is_number())
    return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity")
      return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-Infinity")
      return -std::numeric_limits<double>::infinity();
  }
  bad_key(key, "expected a number");
}

std::string as_string(const json& v, const std::string& key)
{
  if (!v.is_string())
    bad_key(key, "expected a string");
  return v.get<std::string>();
}

template<class T, class F>
std::vector<T> as_list(const json& v, const std::string& key, F&& elem)
{
  if (!v.is_array())
    bad_key(key, "expected an array");
  std::vector<T> out;
  for (const auto& e : v)
    out.push_back(elem(e, key));
  return out;
}

using Setter = std::function<void(SweepConfig&, const json&, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
  static const std::map<std::string, Setter> table = {
    {"N", [](SweepConfig& c, const json& v, const std::string& k) { c.N = as_int(v, k); }},
    {"M", [](SweepConfig& c, const json& v, const std::string& k) { c.M = as_int(v, k); }},
    {"P", [](SweepConfig& c, const json& v, const std::string& k) { c.P = as_int(v, k); }},
    {"K", [](SweepConfig& c, const json& v, const std::string& k) { c.K = as_int(v, k); }},
    {"L", [](SweepConfig& c, const json& v, const std::string& k) { c.L = as_int(v, k); }},
    {"trials", [](SweepConfig& c, const json& v, const std::string& k) { c.trials = as_int(v, k); }},
    {"seed",
     [](SweepConfig& c, const json& v, const std::string& k) {
       if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
         bad_key(k, "expected a non-negative integer");
       c.seed = v.get<std::uint64_t>();
     }},
    {"snr_grid_db",
     [](SweepConfig& c, const json& v, const std::string& k) {
       c.snr_grid_db = as_list<double>(v, k, as_real);
     }},
    {"projection_kind",
     [](SweepConfig& c, const json& v, const std::string& k) {
       auto one = [](const json& e, const std::string& key) {
         try {
           return projection_kind_from_string(as_string(e, key));
         } catch (const std::invalid_argument& ex) {
           bad_key(key, ex.what());
         }
       };
       if (v.is_array())
         c.projection_kinds = as_list<ProjectionKind>(v, k, one);
       else
         c.projection_kinds = {one(v, k)};
     }},
    {"nu_max", [](SweepConfig& c, const json& v, const std::string& k) { c.nu_max = as_real(v, k); }},
    {"min_separation_cells",
     [](SweepConfig& c, const json& v, const std::string& k) { c.min_separation_cells = as_real(v, k); }},
    {"spacing_ratio",
     [](SweepConfig& c, const json& v, const std::string& k) { c.spacing_ratio = as_real(v, k); }},
    {"P_list",
     [](SweepConfig& c, const json& v, const std::string& k) { c.P_list = as_list<int>(v, k, as_int); }},
    {"include_timing",
     [](SweepConfig& c, const json& v, const std::string& k) {
       if (!v.is_boolean())
         bad_key(k, "expected true or false");
       c.include_timing = v.get<bool>();
     }},
    {"i_max", [](SweepConfig& c, const json& v, const std::string& k) { c.gomp.i_max = as_int(v, k); }},
    {"j_max", [](SweepConfig& c, const json& v, const std::string& k) { c.gomp.j_max = as_int(v, k); }},
    {"t_max", [](SweepConfig& c, const json& v, const std::string& k) { c.design.t_max = as_int(v, k); }},
    {"step_size",
     [](SweepConfig& c, const json& v, const std::string& k) { c.design.step_size = as_real(v, k); }},
    {"alpha", [](SweepConfig& c, const json& v, const std::string& k) { c.design.alpha = as_real(v, k); }},
    {"alpha_candidates",
     [](SweepConfig& c, const json& v, const std::string& k) {
       c.design.alpha_candidates = as_list<double>(v, k, as_real);
     }},
    {"max_halvings",
     [](SweepConfig& c, const json& v, const std::string& k) { c.design.max_halvings = as_int(v, k); }},
    {"init",
     [](SweepConfig& c, const json& v, const std::string& k) {
       try {
         c.design.init = init_kind_from_string(as_string(v, k));
       } catch (const std::invalid_argument& ex) {
         bad_key(k, ex.what());
       }
     }},
    {"design_rule",
     [](SweepConfig& c, const json& v, const std::string& k) {
       try {
         c.design.rule = design_rule_from_string(as_string(v, k));
       } catch (const std::invalid_argument& ex) {
         bad_key(k, ex.what());
       }
     }},
  };
  return table;
}

} // namespace

SweepConfig sweep_config_from_json_text(const std::string& text)
{
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail_arg(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object())
    fail_arg("config must be a JSON object");

  SweepConfig cfg;
  const auto& table = setters();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const auto found = table.find(it.key());
    if (found == table.end())
      fail_arg("unknown config key '" + it.key() + "'");
    found->second(cfg, it.value(), it.key());
  }
  cfg.validate();
  return cfg;
}

SweepConfig load_sweep_config(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return sweep_config_from_json_text(ss.str());
}

} // namespace gomp
