#pragma once

#include "config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimo_ee {

//! Ordered key -> value pairs from a `key = value` text file.
using KeyValues = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

} // namespace detail

//! Blank lines and `#` comments are ignored; duplicate keys are an error.
inline KeyValues parse_key_values(std::istream& in)
{
  KeyValues out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("line " + std::to_string(lineno) + ": empty key");
    if (!out.emplace(key, value).second)
      throw std::invalid_argument("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
  }
  return out;
}

inline KeyValues load_key_values(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  return parse_key_values(in);
}

//! Plain floating-point literal, or `base^exponent` (e.g. 10^-3.53).
inline double parse_number(const std::string& text)
{
  const std::string s = detail::trim(text);
  auto strict = [&](const std::string& part) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (used != part.size())
      throw std::invalid_argument("not a number: '" + text + "'");
    return v;
  };
  if (const auto caret = s.find('^'); caret != std::string::npos)
    return std::pow(strict(detail::trim(s.substr(0, caret))), strict(detail::trim(s.substr(caret + 1))));
  return strict(s);
}

inline std::size_t parse_count(const std::string& text)
{
  const double v = parse_number(text);
  if (!(v >= 0.0) || v != std::floor(v))
    throw std::invalid_argument("not a non-negative integer: '" + text + "'");
  return static_cast<std::size_t>(v);
}

//! Comma-separated values; `a:b` or `a:b:step` expands to an inclusive integer range.
inline std::vector<double> parse_list(const std::string& text)
{
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = detail::trim(item);
    if (item.empty())
      continue;
    if (item.find(':') != std::string::npos) {
      std::vector<double> parts;
      std::stringstream rs(item);
      std::string p;
      while (std::getline(rs, p, ':'))
        parts.push_back(parse_number(p));
      if (parts.size() < 2 || parts.size() > 3)
        throw std::invalid_argument("bad range '" + item + "'");
      const double step = parts.size() == 3 ? parts[2] : 1.0;
      if (!(step > 0.0))
        throw std::invalid_argument("range step must be positive in '" + item + "'");
      for (double v = parts[0]; v <= parts[1] + 1e-9 * std::abs(parts[1]); v += step)
        out.push_back(v);
    } else {
      out.push_back(parse_number(item));
    }
  }
  if (out.empty())
    throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

inline RateBase parse_rate_base(const std::string& text)
{
  const std::string s = detail::trim(text);
  if (s == "2")
    return RateBase::two;
  if (s == "e")
    return RateBase::e;
  throw std::invalid_argument("rate_base must be '2' or 'e', got '" + text + "'");
}

inline const char* to_string(RateBase b) { return b == RateBase::e ? "e" : "2"; }

inline const char* to_string(CoefficientSet c) { return c == CoefficientSet::printed ? "printed" : "regrouped"; }

//! Applies every recognized SystemConfig key and erases it from `kv`.
//! Unrecognized keys are left in place for the caller.
inline void apply_config(KeyValues& kv, SystemConfig& cfg)
{
  auto take = [&](const char* key, auto&& setter) {
    if (auto it = kv.find(key); it != kv.end()) {
      try {
        setter(it->second);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(key) + ": " + e.what());
      }
      kv.erase(it);
    }
  };
  take("M", [&](const std::string& v) { cfg.total_antennas = parse_count(v); });
  take("K", [&](const std::string& v) { cfg.users = parse_count(v); });
  take("BW", [&](const std::string& v) { cfg.bandwidth = parse_number(v); });
  take("T_coh", [&](const std::string& v) { cfg.coherence_time = parse_number(v); });
  take("L", [&](const std::string& v) { cfg.ops_per_joule = parse_number(v); });
  take("sigma_n2", [&](const std::string& v) { cfg.noise_energy = parse_number(v); });
  take("sigma2", [&](const std::string& v) { cfg.fading_variance = parse_number(v); });
  take("P_cod", [&](const std::string& v) { cfg.coding_power = parse_number(v); });
  take("P_dec", [&](const std::string& v) { cfg.decoding_power = parse_number(v); });
  take("P_tx", [&](const std::string& v) { cfg.tx_chain_power = parse_number(v); });
  take("P_rx", [&](const std::string& v) { cfg.rx_chain_power = parse_number(v); });
  take("P_fix", [&](const std::string& v) { cfg.fixed_power = parse_number(v); });
  take("d_min", [&](const std::string& v) { cfg.min_distance = parse_number(v); });
  take("d_max", [&](const std::string& v) { cfg.max_distance = parse_number(v); });
  take("kappa", [&](const std::string& v) { cfg.pathloss_exponent = parse_number(v); });
  take("d_bar", [&](const std::string& v) { cfg.pathloss_reference = parse_number(v); });
  take("rate_base", [&](const std::string& v) { cfg.rate_base = parse_rate_base(v); });
  take("R_bar", [&](const std::string& v) { cfg.user_rate = parse_number(v); });
  take("process_coefficients", [&](const std::string& v) {
    const auto s = detail::trim(v);
    if (s == "printed")
      cfg.coefficient_set = CoefficientSet::printed;
    else if (s == "regrouped")
      cfg.coefficient_set = CoefficientSet::regrouped;
    else
      throw std::invalid_argument("expected 'printed' or 'regrouped'");
  });
}

//! Reads a config file; every key must be a SystemConfig key.
inline SystemConfig load_config(const std::string& path, SystemConfig base = {})
{
  KeyValues kv = load_key_values(path);
  apply_config(kv, base);
  if (!kv.empty())
    throw std::invalid_argument(path + ": unknown config key '" + kv.begin()->first + "'");
  base.validate();
  return base;
}

inline nlohmann::ordered_json config_to_json(const SystemConfig& cfg)
{
  nlohmann::ordered_json j;
  j["M"] = cfg.total_antennas;
  j["K"] = cfg.users;
  j["BW"] = cfg.bandwidth;
  j["T_coh"] = cfg.coherence_time;
  j["U"] = cfg.coherence_block();
  j["L"] = cfg.ops_per_joule;
  j["sigma_n2"] = cfg.noise_energy;
  j["sigma2"] = cfg.fading_variance;
  j["P_cod"] = cfg.coding_power;
  j["P_dec"] = cfg.decoding_power;
  j["P_tx"] = cfg.tx_chain_power;
  j["P_rx"] = cfg.rx_chain_power;
  j["P_fix"] = cfg.fixed_power;
  j["d_min"] = cfg.min_distance;
  j["d_max"] = cfg.max_distance;
  j["kappa"] = cfg.pathloss_exponent;
  j["d_bar"] = cfg.pathloss_reference;
  j["rate_base"] = to_string(cfg.rate_base);
  j["R_bar"] = cfg.user_rate;
  j["process_coefficients"] = to_string(cfg.coefficient_set);
  return j;
}

} // namespace mimo_ee
