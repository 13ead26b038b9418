#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncsat/metrics.hpp"
#include "ncsat/multihop.hpp"
#include "ncsat/simulator.hpp"

namespace ncsat {

enum class Preset { custom, fig3, fig4, fig5, fig6, fig7 };
enum class Axis { redundancy, generation_size };

std::string to_string(Preset p);
Preset parse_preset(const std::string& text);  // ConfigError("preset")

/// A full sweep: every (scheme curve, E[L], axis point) runs `replications`
/// seeded transfers built from `base`.
struct ExperimentSpec
{
  Preset preset = Preset::custom;
  SimConfig base;
  std::vector<Scheme> schemes{Scheme::generation, Scheme::sliding_window};
  Axis axis = Axis::redundancy;
  std::vector<Redundancy> r_values;     // axis values when sweeping R
  std::vector<std::uint32_t> k_values;  // axis values when sweeping k
  std::vector<double> burst_lengths{1.0};
  // Fixed redundancy levels, one curve each, when sweeping k.
  std::vector<Redundancy> generation_levels;
  std::vector<Redundancy> sliding_levels;
  // On the R axis the generation curve uses the delay-optimal k per point.
  bool optimize_k = false;
  std::vector<std::uint32_t> k_grid{2, 4, 8, 16, 32, 64};
  // Search only sizes with an integer coded count, so the curve runs at R.
  bool rate_matched_k = true;
  std::uint32_t optimize_reps = 5;
  std::uint32_t replications = 20;
  std::uint64_t master_seed = 1;
  unsigned workers = 1;
  std::filesystem::path out;
  TandemConfig tandem;  // fig7 only
  /// Settings filled in by this tool rather than taken from the figures.
  std::map<std::string, std::string> chosen_defaults;

  bool is_tandem() const noexcept { return preset == Preset::fig7; }
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Preset with every default applied.
ExperimentSpec preset_spec(Preset p);

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Reads a flat `key = value` file; '#' starts a comment.
Settings read_config_file(const std::filesystem::path& path);

/// Builds a validated spec. A `preset` entry must come first; later entries
/// override it. Unknown keys and malformed values raise ConfigError, as does
/// a custom spec without stream_len.
ExperimentSpec parse_spec(const Settings& entries);

ExperimentSpec parse_spec_file(const std::filesystem::path& path);

/// Applies one setting to `spec`. Exposed for command-line overrides.
void apply_setting(ExperimentSpec& spec, const std::string& key, const std::string& value);

/// Seed of replication `rep` at sweep point `point`; shared by every scheme.
std::uint64_t child_seed(std::uint64_t master, std::uint64_t point, std::uint64_t rep) noexcept;

struct SweepRow
{
  std::string scheme;
  std::string mode;
  std::string axis_name;
  std::string axis_value;
  double mean_burst = 1.0;
  std::string redundancy;
  std::string generation_size;  // empty when not applicable
  SweepPoint stats;
  std::uint64_t master_seed = 0;
};

struct SweepResult
{
  std::vector<SweepRow> rows;
  std::string csv() const;
  std::string manifest_json(const ExperimentSpec& spec) const;
};

/// Runs the sweep on `spec.workers` threads. Rows come out in a fixed order
/// (curve, E[L], axis) whatever the completion order.
SweepResult run_sweep(const ExperimentSpec& spec);

/// Writes the CSV to spec.out and the manifest next to it (<out>.json).
void write_outputs(const ExperimentSpec& spec, const SweepResult& result);

struct GenerationSizePoint
{
  std::uint32_t k;
  Estimate delay;
};

struct GenerationSizeChoice
{
  std::uint32_t k_star = 0;
  std::vector<GenerationSizePoint> evaluated;  // ascending k
  /// Losses are bursty, so the minimum is only the best grid point.
  bool correlated_losses = false;
};

/// Each grid size rounded up to the next multiple of the smallest k with
/// k(R - 1) integral, duplicates removed. At those sizes ceil(k(R - 1)) adds no
/// hidden redundancy.
std::vector<std::uint32_t> rate_matched_grid(Redundancy r, const std::vector<std::uint32_t>& grid);

/// Minimizes the measured mean delay of the reliable generation scheme over
/// `grid`. Every k sees the same channel seeds. With `refine`, geometric
/// midpoints next to the grid minimum are evaluated as well. Ties go to the
/// smaller k.
GenerationSizeChoice optimize_generation_size(const SimConfig& base, Redundancy r,
                                              const std::vector<std::uint32_t>& grid, std::uint32_t replications,
                                              bool refine = false, unsigned workers = 1);

} // namespace ncsat
