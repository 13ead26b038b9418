// Command-line front end: figure sweeps, generation-size search, tandem runs.

#include <cstdio>
#include <iostream>

#include <CLI11.hpp>

#include "ncsat/errors.hpp"
#include "ncsat/experiment.hpp"
#include "ncsat/multihop.hpp"

namespace {

constexpr int exit_config = 2;
constexpr int exit_runtime = 3;

std::vector<double> parse_doubles(const std::string& list)
{
  std::vector<double> out;
  std::stringstream ss{list};
  for (std::string item; std::getline(ss, item, ',');)
    out.push_back(std::stod(item));
  return out;
}

int cmd_run(const std::string& preset, const std::string& config, const std::string& out,
            const std::optional<std::uint64_t>& seed, const std::optional<std::uint32_t>& reps,
            const std::optional<unsigned>& workers, const std::vector<std::string>& sets)
{
  using namespace ncsat;
  Settings entries;
  if (!preset.empty())
    entries.emplace_back("preset", preset);
  if (!config.empty())
    for (auto& e : read_config_file(config))
      entries.push_back(std::move(e));
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("set", "expected key=value, got '" + s + "'");
    entries.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (seed)
    entries.emplace_back("seed", std::to_string(*seed));
  if (reps)
    entries.emplace_back("reps", std::to_string(*reps));
  if (workers)
    entries.emplace_back("workers", std::to_string(*workers));
  if (!out.empty())
    entries.emplace_back("out", out);

  const ExperimentSpec spec = parse_spec(entries);
  const SweepResult result = run_sweep(spec);
  if (spec.out.empty())
    std::cout << result.csv();
  else
    write_outputs(spec, result);
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  using namespace ncsat;
  CLI::App app{"Coded transport over lossy satellite links: simulations and sweeps"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Run a figure preset or a configured sweep, writing CSV");
  std::string preset, config, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint32_t> reps;
  std::optional<unsigned> workers;
  std::vector<std::string> sets;
  run->add_option("--preset", preset, "fig3, fig4, fig5, fig6, fig7 or custom");
  run->add_option("--config", config, "key = value file");
  run->add_option("--out", out, "CSV path; a manifest is written to <out>.json");
  run->add_option("--seed", seed, "Master seed");
  run->add_option("--reps", reps, "Replications per point");
  run->add_option("--workers", workers, "Worker threads");
  run->add_option("--set", sets, "Extra key=value settings, applied after the config file");

  // optimize-k
  auto* opt = app.add_subcommand("optimize-k", "Delay-optimal generation size for a redundancy");
  std::string opt_r = "1.25";
  double opt_burst = 1.0, opt_pi = 0.05;
  std::uint64_t opt_len = 10000, opt_seed = 1;
  std::uint32_t opt_reps = 5;
  unsigned opt_workers = 1;
  std::vector<std::uint32_t> opt_grid{2, 4, 8, 16, 32, 64};
  bool opt_refine = false, opt_exact = false;
  opt->add_option("--R", opt_r, "Redundancy")->capture_default_str();
  opt->add_option("--mean-burst", opt_burst, "E[L]")->capture_default_str();
  opt->add_option("--pi-b", opt_pi, "Steady-state loss rate")->capture_default_str();
  opt->add_option("--stream-len", opt_len, "Information packets per run")->capture_default_str();
  opt->add_option("--grid", opt_grid, "Generation sizes to evaluate")->delimiter(',');
  opt->add_option("--reps", opt_reps, "Replications per k")->capture_default_str();
  opt->add_option("--seed", opt_seed)->capture_default_str();
  opt->add_option("--workers", opt_workers)->capture_default_str();
  opt->add_flag("--refine", opt_refine, "Also try geometric midpoints next to the minimum");
  opt->add_flag("--exact-grid", opt_exact, "Use the grid as given instead of rounding k to run at exactly R");

  // tandem
  auto* tan = app.add_subcommand("tandem", "Three-link relay chain: end-to-end vs hop-by-hop coding");
  std::string tan_eps = "0.1,0.1,0.1", tan_strategy = "both";
  std::uint64_t tan_len = 10000, tan_seed = 1, tan_block = 1024;
  tan->add_option("--eps", tan_eps, "Erasure probability of each link")->capture_default_str();
  tan->add_option("--stream-len", tan_len)->capture_default_str();
  tan->add_option("--block-size", tan_block, "Packets per coded block, 0 for one block")->capture_default_str();
  tan->add_option("--strategy", tan_strategy, "e2e, hop-by-hop or both")
    ->check(CLI::IsMember({"e2e", "hop-by-hop", "both"}))
    ->capture_default_str();
  tan->add_option("--seed", tan_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_config;
  }

  try {
    if (run->parsed())
      return cmd_run(preset, config, out, seed, reps, workers, sets);

    if (opt->parsed()) {
      SimConfig base;
      base.stream_length = opt_len;
      base.mean_burst = opt_burst;
      base.loss_rate = opt_pi;
      base.seed = opt_seed;
      const auto r = Redundancy::parse(opt_r);
      base.redundancy = r;
      base.validate();
      const auto grid = opt_exact ? opt_grid : rate_matched_grid(r, opt_grid);
      const auto choice = optimize_generation_size(base, r, grid, opt_reps, opt_refine, opt_workers);
      std::printf("k,E_D_ms,half_width\n");
      for (const auto& p : choice.evaluated)
        std::printf("%u,%.6f,%.6f\n", p.k, p.delay.mean, p.delay.half_width);
      std::printf("# k* = %u%s\n", choice.k_star,
                  choice.correlated_losses ? " (bursty losses: best grid point, no convexity guarantee)" : "");
      return 0;
    }

    if (tan->parsed()) {
      const auto eps = parse_doubles(tan_eps);
      if (eps.size() != 3)
        throw ConfigError("eps", "expected three comma-separated probabilities");
      std::printf("strategy,link,carried,received,useful_dof,eta,extra_packets,sink_decodes\n");
      for (auto strategy : {TandemStrategy::end_to_end, TandemStrategy::hop_by_hop}) {
        if (tan_strategy != "both" && tan_strategy != to_string(strategy))
          continue;
        TandemConfig cfg;
        std::copy(eps.begin(), eps.end(), cfg.link_erasure.begin());
        cfg.packets = tan_len;
        cfg.block_size = tan_block;
        cfg.seed = tan_seed;
        cfg.strategy = strategy;
        const auto rep = run_tandem(cfg);
        for (const auto& l : rep.links)
          std::printf("%s,%d,%llu,%llu,%llu,%.6f,%llu,%zu\n", to_string(strategy).c_str(), l.link,
                      static_cast<unsigned long long>(l.packets_carried),
                      static_cast<unsigned long long>(l.packets_received),
                      static_cast<unsigned long long>(l.useful_dof_delivered), l.efficiency,
                      static_cast<unsigned long long>(rep.extra_packets), rep.sink_decodes);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error [%s]: %s\n", e.field().c_str(), e.what());
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return exit_config;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_runtime;
  }
  return 0;
}
