// Flat key = value experiment configuration.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "ncsat/errors.hpp"
#include "ncsat/experiment.hpp"

namespace ncsat {
namespace {

std::string trim(std::string_view s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string{s.substr(b, e - b + 1)};
}

std::vector<std::string> split_list(const std::string& value)
{
  std::vector<std::string> out;
  std::stringstream ss{value};
  std::string item;
  while (std::getline(ss, item, ','))
    if (auto t = trim(item); !t.empty())
      out.push_back(std::move(t));
  return out;
}

double to_double(const std::string& key, const std::string& v)
{
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(x))
    throw ConfigError(key, "expected a number, got '" + v + "'");
  return x;
}

std::uint64_t to_uint(const std::string& key, const std::string& v)
{
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return x;
}

std::uint32_t to_u32(const std::string& key, const std::string& v)
{
  const auto x = to_uint(key, v);
  if (x > 0xFFFFFFFFull)
    throw ConfigError(key, "value out of range");
  return static_cast<std::uint32_t>(x);
}

bool to_bool(const std::string& key, const std::string& v)
{
  if (v == "true" || v == "1" || v == "yes")
    return true;
  if (v == "false" || v == "0" || v == "no")
    return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

Redundancy to_redundancy(const std::string& key, const std::string& v)
{
  try {
    return Redundancy::parse(v);
  } catch (const ConfigError& e) {
    throw ConfigError(key, e.what());
  }
}

std::vector<Redundancy> to_redundancies(const std::string& key, const std::string& v)
{
  std::vector<Redundancy> out;
  for (const auto& item : split_list(v))
    out.push_back(to_redundancy(key, item));
  return out;
}

std::vector<std::uint32_t> to_u32s(const std::string& key, const std::string& v)
{
  std::vector<std::uint32_t> out;
  for (const auto& item : split_list(v))
    out.push_back(to_u32(key, item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  for (const auto& item : split_list(v))
    out.push_back(to_double(key, item));
  return out;
}

bool pinned(const std::string& key)
{
  return key == "rtt_ms" || key == "slot_ms" || key == "pi_b";
}

} // namespace

std::string to_string(Preset p)
{
  switch (p) {
  case Preset::fig3: return "fig3";
  case Preset::fig4: return "fig4";
  case Preset::fig5: return "fig5";
  case Preset::fig6: return "fig6";
  case Preset::fig7: return "fig7";
  case Preset::custom: break;
  }
  return "custom";
}

Preset parse_preset(const std::string& text)
{
  for (Preset p : {Preset::custom, Preset::fig3, Preset::fig4, Preset::fig5, Preset::fig6, Preset::fig7})
    if (to_string(p) == text)
      return p;
  throw ConfigError("preset", "unknown preset '" + text + "' (fig3..fig7 or custom)");
}

ExperimentSpec preset_spec(Preset p)
{
  ExperimentSpec s;
  s.preset = p;
  s.base.rtt_ms = 200.0;
  s.base.slot_ms = 1.2;
  s.base.loss_rate = 0.05;
  if (p == Preset::custom)
    return s;

  auto& d = s.chosen_defaults;
  s.base.stream_length = 100000;
  d["stream_len"] = "100000";
  d["q"] = "8";
  d["reps"] = "20";
  d["seed"] = "1";
  s.burst_lengths = {1.0, 4.0, 8.0};
  d["mean_burst"] = "1, 4, 8 (middle value chosen here)";

  switch (p) {
  case Preset::fig3:
  case Preset::fig4:
    s.base.mode = Mode::reliable;
    s.schemes = {Scheme::generation, Scheme::sliding_window, Scheme::arq};
    s.axis = Axis::redundancy;
    for (int i = 0; i <= 8; ++i)
      s.r_values.emplace_back(110 + 5 * i, 100);
    d["values"] = "R = 1.10..1.50 step 0.05";
    s.optimize_k = true;
    d["k_grid"] = "2, 4, 8, 16, 32, 64, rounded up to multiples giving integer k(R-1)";
    d["optimize_reps"] = "5";
    break;
  case Preset::fig5:
  case Preset::fig6:
    // A multiple of every swept k, so no short tail generation.
    s.base.stream_length = 102400;
    d["stream_len"] = "102400";
    s.base.mode = Mode::unreliable;
    s.schemes = {Scheme::generation, Scheme::sliding_window};
    s.axis = Axis::generation_size;
    s.k_values = {2, 4, 8, 16, 32, 64, 128};
    d["values"] = "k = 2, 4, 8, 16, 32, 64, 128";
    s.generation_levels = {Redundancy{3, 2}, Redundancy{2, 1}};
    d["gen_levels"] = "1.5, 2";
    s.sliding_levels = {Redundancy{217, 200}, Redundancy{5, 4}};
    d["sw_levels"] = "1.085, 1.25";
    break;
  case Preset::fig7:
    s.schemes = {};
    s.tandem.packets = 10000;
    s.tandem.link_erasure = {0.1, 0.1, 0.1};
    s.burst_lengths = {1.0};
    d.erase("mean_burst");
    d["stream_len"] = "10000";
    d["eps"] = "0.1, 0.1, 0.1";
    d["block_size"] = "1024";
    break;
  case Preset::custom:
    break;
  }
  return s;
}

void apply_setting(ExperimentSpec& s, const std::string& key, const std::string& raw)
{
  const std::string v = trim(raw);
  if (s.preset != Preset::custom && pinned(key))
    throw ConfigError(key, "fixed by preset " + to_string(s.preset));
  s.chosen_defaults.erase(key);

  static const std::map<std::string, std::function<void(ExperimentSpec&, const std::string&, const std::string&)>>
    setters{
      {"preset", [](auto&, auto& k, auto&) { throw ConfigError(k, "preset must be the first setting"); }},
      {"schemes",
       [](auto& s, auto&, auto& v) {
         s.schemes.clear();
         for (const auto& item : split_list(v))
           s.schemes.push_back(parse_scheme(item));
       }},
      {"mode", [](auto& s, auto&, auto& v) { s.base.mode = parse_mode(v); }},
      {"axis",
       [](auto& s, auto& k, auto& v) {
         if (v == "R")
           s.axis = Axis::redundancy;
         else if (v == "k")
           s.axis = Axis::generation_size;
         else
           throw ConfigError(k, "axis must be R or k");
       }},
      {"values",
       [](auto& s, auto& k, auto& v) {
         if (s.axis == Axis::redundancy)
           s.r_values = to_redundancies(k, v);
         else
           s.k_values = to_u32s(k, v);
       }},
      {"R", [](auto& s, auto& k, auto& v) { s.base.redundancy = to_redundancy(k, v); }},
      {"k", [](auto& s, auto& k, auto& v) { s.base.generation_size = to_u32(k, v); }},
      {"stream_len",
       [](auto& s, auto& k, auto& v) {
         s.base.stream_length = to_uint(k, v);
         s.tandem.packets = s.base.stream_length;
       }},
      {"slot_ms", [](auto& s, auto& k, auto& v) { s.base.slot_ms = to_double(k, v); }},
      {"rtt_ms", [](auto& s, auto& k, auto& v) { s.base.rtt_ms = to_double(k, v); }},
      {"pi_b", [](auto& s, auto& k, auto& v) { s.base.loss_rate = to_double(k, v); }},
      {"mean_burst", [](auto& s, auto& k, auto& v) { s.burst_lengths = to_doubles(k, v); }},
      {"q",
       [](auto& s, auto& k, auto& v) {
         s.base.field_bits = static_cast<unsigned>(to_uint(k, v));
         s.tandem.field_bits = s.base.field_bits;
       }},
      {"payload_bytes",
       [](auto& s, auto& k, auto& v) {
         s.base.payload_bytes = to_uint(k, v);
         s.tandem.payload_bytes = s.base.payload_bytes;
       }},
      {"max_slots", [](auto& s, auto& k, auto& v) { s.base.max_slots = to_uint(k, v); }},
      {"reps", [](auto& s, auto& k, auto& v) { s.replications = to_u32(k, v); }},
      {"seed", [](auto& s, auto& k, auto& v) { s.master_seed = to_uint(k, v); }},
      {"workers", [](auto& s, auto& k, auto& v) { s.workers = to_u32(k, v); }},
      {"out", [](auto& s, auto&, auto& v) { s.out = v; }},
      {"gen_levels", [](auto& s, auto& k, auto& v) { s.generation_levels = to_redundancies(k, v); }},
      {"sw_levels", [](auto& s, auto& k, auto& v) { s.sliding_levels = to_redundancies(k, v); }},
      {"optimize_k", [](auto& s, auto& k, auto& v) { s.optimize_k = to_bool(k, v); }},
      {"k_grid", [](auto& s, auto& k, auto& v) { s.k_grid = to_u32s(k, v); }},
      {"rate_matched_k", [](auto& s, auto& k, auto& v) { s.rate_matched_k = to_bool(k, v); }},
      {"optimize_reps", [](auto& s, auto& k, auto& v) { s.optimize_reps = to_u32(k, v); }},
      {"eps",
       [](auto& s, auto& k, auto& v) {
         const auto e = to_doubles(k, v);
         if (e.size() != 3)
           throw ConfigError(k, "expected three link erasure probabilities");
         std::copy(e.begin(), e.end(), s.tandem.link_erasure.begin());
       }},
      {"block_size", [](auto& s, auto& k, auto& v) { s.tandem.block_size = to_uint(k, v); }},
    };

  const auto it = setters.find(key);
  if (it == setters.end())
    throw ConfigError(key, "unknown setting");
  it->second(s, key, v);
}

ExperimentSpec parse_spec(const Settings& entries)
{
  ExperimentSpec spec;
  bool stream_len_given = false;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& [key, value] = entries[i];
    if (key == "preset") {
      if (i != 0)
        throw ConfigError(key, "preset must be the first setting");
      spec = preset_spec(parse_preset(trim(value)));
      continue;
    }
    apply_setting(spec, key, value);
    stream_len_given = stream_len_given || key == "stream_len";
  }
  if (spec.preset == Preset::custom && !stream_len_given)
    throw ConfigError("stream_len", "required when no preset is given");
  spec.validate();
  return spec;
}

Settings read_config_file(const std::filesystem::path& path)
{
  std::ifstream in{path};
  if (!in)
    throw ConfigError("config", "cannot open " + path.string());
  Settings entries;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    if (trim(line).empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", path.string() + ":" + std::to_string(n) + ": expected key = value");
    entries.emplace_back(trim(std::string_view{line}.substr(0, eq)), trim(std::string_view{line}.substr(eq + 1)));
  }
  return entries;
}

ExperimentSpec parse_spec_file(const std::filesystem::path& path)
{
  return parse_spec(read_config_file(path));
}

} // namespace ncsat
