#include "ncsat/experiment.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "ncsat/errors.hpp"

#ifndef NCSAT_VERSION
#define NCSAT_VERSION "unknown"
#endif

namespace ncsat {
namespace {

struct Curve
{
  Scheme scheme;
  std::optional<Redundancy> level;  // fixed R on the k axis
};

std::vector<Curve> curves_of(const ExperimentSpec& s)
{
  std::vector<Curve> out;
  for (Scheme scheme : s.schemes) {
    const std::vector<Redundancy>* levels = nullptr;
    if (s.axis == Axis::generation_size && scheme == Scheme::generation)
      levels = &s.generation_levels;
    if (s.axis == Axis::generation_size && scheme == Scheme::sliding_window)
      levels = &s.sliding_levels;
    if (levels == nullptr || levels->empty()) {
      out.push_back({scheme, std::nullopt});
      continue;
    }
    for (const auto& r : *levels)
      out.push_back({scheme, r});
  }
  return out;
}

std::size_t axis_size(const ExperimentSpec& s)
{
  return s.axis == Axis::redundancy ? s.r_values.size() : s.k_values.size();
}

std::string axis_value(const ExperimentSpec& s, std::size_t a)
{
  return s.axis == Axis::redundancy ? s.r_values[a].to_string() : std::to_string(s.k_values[a]);
}

SimConfig point_config(const ExperimentSpec& s, const Curve& c, double burst, std::size_t a)
{
  SimConfig cfg = s.base;
  cfg.scheme = c.scheme;
  cfg.mean_burst = burst;
  cfg.replications = 1;
  if (s.axis == Axis::redundancy)
    cfg.redundancy = s.r_values[a];
  else
    cfg.generation_size = s.k_values[a];
  if (c.level)
    cfg.redundancy = *c.level;
  if (c.scheme == Scheme::arq)
    cfg.redundancy = Redundancy{1, 1};
  return cfg;
}

std::string point_label(const Curve& c, double burst, const std::string& axis_name, const std::string& value)
{
  char buf[160];
  std::snprintf(buf, sizeof buf, "scheme=%s%s%s E_L=%g %s=%s", to_string(c.scheme).c_str(),
                c.level ? " R=" : "", c.level ? c.level->to_string().c_str() : "", burst, axis_name.c_str(),
                value.c_str());
  return buf;
}

template <typename T>
void require_increasing(const std::string& key, const std::vector<T>& v)
{
  if (v.empty())
    throw ConfigError(key, "list must not be empty");
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i - 1] < v[i]))
      throw ConfigError(key, "values must be strictly increasing");
}

// Runs fn(0..n-1) on up to `workers` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned workers, Fn fn)
{
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; !failed && (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock{error_mutex};
        if (!error)
          error = std::current_exception();
        failed = true;
      }
    }
  };
  const unsigned t = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, workers), n));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < t; ++i)
    pool.emplace_back(work);
  work();
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
}

std::string fmt(double x)
{
  if (!std::isfinite(x))
    return {};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

SweepResult run_tandem_sweep(const ExperimentSpec& spec)
{
  const TandemStrategy strategies[] = {TandemStrategy::end_to_end, TandemStrategy::hop_by_hop};
  const std::size_t reps = spec.replications;
  std::vector<TandemReport> reports(2 * reps);
  parallel_for(reports.size(), spec.workers, [&](std::size_t j) {
    TandemConfig cfg = spec.tandem;
    cfg.strategy = strategies[j / reps];
    cfg.seed = child_seed(spec.master_seed, 0, j % reps);
    reports[j] = run_tandem(cfg);
  });

  SweepResult result;
  for (std::size_t s = 0; s < 2; ++s)
    for (int link = 0; link < 3; ++link) {
      std::vector<double> etas, zeros(reps, 0.0);
      double carried = 0.0;
      for (std::size_t r = 0; r < reps; ++r) {
        const LinkReport& l = reports[s * reps + r].links[link];
        etas.push_back(l.efficiency);
        carried += static_cast<double>(l.packets_carried);
      }
      SweepRow row;
      row.scheme = "tandem-" + to_string(strategies[s]);
      row.mode = "reliable";
      row.axis_name = "link";
      row.axis_value = std::to_string(link + 1);
      // Load per information packet on this link.
      row.redundancy = fmt(carried / static_cast<double>(reps * spec.tandem.packets));
      row.generation_size = std::to_string(spec.tandem.block_size);
      row.stats.eta = estimate(etas);
      row.stats.per = estimate(zeros);
      row.stats.delay_variance = NAN;
      row.stats.delay_stddev = NAN;
      row.stats.replications = reps;
      row.master_seed = spec.master_seed;
      result.rows.push_back(std::move(row));
    }
  return result;
}

} // namespace

std::uint64_t child_seed(std::uint64_t master, std::uint64_t point, std::uint64_t rep) noexcept
{
  return derive_seed(derive_seed(master, point), rep);
}

void ExperimentSpec::validate() const
{
  if (replications == 0)
    throw ConfigError("reps", "must be at least 1");
  if (workers == 0)
    throw ConfigError("workers", "must be at least 1");
  if (is_tandem()) {
    tandem.validate();
    return;
  }
  if (schemes.empty())
    throw ConfigError("schemes", "at least one scheme is required");
  require_increasing("mean_burst", burst_lengths);
  if (axis == Axis::redundancy)
    require_increasing("values", r_values);
  else
    require_increasing("values", k_values);
  if (!generation_levels.empty())
    require_increasing("gen_levels", generation_levels);
  if (!sliding_levels.empty())
    require_increasing("sw_levels", sliding_levels);
  if (optimize_k) {
    require_increasing("k_grid", k_grid);
    if (optimize_reps == 0)
      throw ConfigError("optimize_reps", "must be at least 1");
  }

  // Every point is checked up front so a sweep never dies half way.
  const std::string axis_name = axis == Axis::redundancy ? "R" : "k";
  for (const Curve& c : curves_of(*this))
    for (double burst : burst_lengths)
      for (std::size_t a = 0; a < axis_size(*this); ++a) {
        SimConfig cfg = point_config(*this, c, burst, a);
        std::vector<std::uint32_t> ks{cfg.generation_size};
        if (optimize_k && axis == Axis::redundancy && c.scheme == Scheme::generation)
          ks = rate_matched_k ? rate_matched_grid(cfg.redundancy, k_grid) : k_grid;
        for (auto k : ks) {
          cfg.generation_size = k;
          try {
            cfg.validate();
          } catch (const ConfigError& e) {
            throw ConfigError(e.field(), point_label(c, burst, axis_name, axis_value(*this, a)) + ": " + e.what());
          }
        }
      }
}

std::vector<std::uint32_t> rate_matched_grid(Redundancy r, const std::vector<std::uint32_t>& grid)
{
  // R - 1 = (num - den) / den; k(R - 1) is integral iff k is a multiple of den / gcd.
  const std::uint64_t step = r.is_one() ? 1 : r.den() / std::gcd(r.num() - r.den(), r.den());
  std::vector<std::uint32_t> out;
  for (auto k : grid) {
    const auto m = static_cast<std::uint32_t>((k + step - 1) / step * step);
    if (out.empty() || out.back() != m)
      out.push_back(m);
  }
  return out;
}

GenerationSizeChoice optimize_generation_size(const SimConfig& base, Redundancy r,
                                              const std::vector<std::uint32_t>& grid, std::uint32_t replications,
                                              bool refine, unsigned workers)
{
  if (grid.empty() || replications == 0)
    throw ConfigError("k_grid", "grid and replications must be non-empty");

  GenerationSizeChoice choice;
  choice.correlated_losses = base.mean_burst != 1.0;

  auto evaluate = [&](const std::vector<std::uint32_t>& ks) {
    std::vector<double> delays(ks.size() * replications);
    parallel_for(delays.size(), workers, [&](std::size_t j) {
      SimConfig cfg = base;
      cfg.scheme = Scheme::generation;
      cfg.mode = Mode::reliable;
      cfg.redundancy = r;
      cfg.replications = 1;
      cfg.generation_size = ks[j / replications];
      // Common random numbers: the seed depends on the replication only.
      cfg.seed = derive_seed(base.seed, j % replications);
      delays[j] = run_simulation(cfg).summary().delay_mean;
    });
    for (std::size_t i = 0; i < ks.size(); ++i)
      choice.evaluated.push_back(
        {ks[i], estimate(std::span<const double>{delays}.subspan(i * replications, replications))});
  };

  auto best = [&] {
    std::size_t b = 0;
    for (std::size_t i = 1; i < choice.evaluated.size(); ++i)
      if (choice.evaluated[i].delay.mean < choice.evaluated[b].delay.mean)
        b = i;
    return b;
  };

  evaluate(grid);
  auto by_k = [](const GenerationSizePoint& a, const GenerationSizePoint& b) { return a.k < b.k; };
  std::sort(choice.evaluated.begin(), choice.evaluated.end(), by_k);

  if (refine) {
    const std::size_t b = best();
    std::vector<std::uint32_t> extra;
    auto midpoint = [&](std::size_t i, std::size_t j) {
      const auto m = static_cast<std::uint32_t>(std::lround(
        std::sqrt(static_cast<double>(choice.evaluated[i].k) * static_cast<double>(choice.evaluated[j].k))));
      if (m > choice.evaluated[i].k && m < choice.evaluated[j].k)
        extra.push_back(m);
    };
    if (b > 0)
      midpoint(b - 1, b);
    if (b + 1 < choice.evaluated.size())
      midpoint(b, b + 1);
    if (!extra.empty()) {
      evaluate(extra);
      std::sort(choice.evaluated.begin(), choice.evaluated.end(), by_k);
    }
  }

  choice.k_star = choice.evaluated[best()].k;
  return choice;
}

SweepResult run_sweep(const ExperimentSpec& spec)
{
  spec.validate();
  if (spec.is_tandem())
    return run_tandem_sweep(spec);

  const auto curves = curves_of(spec);
  const std::size_t na = axis_size(spec);
  const std::size_t ne = spec.burst_lengths.size();
  const std::string axis_name = spec.axis == Axis::redundancy ? "R" : "k";

  // Delay-optimal generation size per (E[L], R) point, when requested.
  std::vector<std::uint32_t> k_star(ne * na, spec.base.generation_size);
  const bool optimize = spec.optimize_k && spec.axis == Axis::redundancy &&
                        std::count(spec.schemes.begin(), spec.schemes.end(), Scheme::generation) > 0;
  if (optimize)
    for (std::size_t p = 0; p < ne * na; ++p) {
      SimConfig base = spec.base;
      base.mean_burst = spec.burst_lengths[p / na];
      base.seed = derive_seed(child_seed(spec.master_seed, p, 0), 0x6b);
      const Redundancy r = spec.r_values[p % na];
      const auto grid = spec.rate_matched_k ? rate_matched_grid(r, spec.k_grid) : spec.k_grid;
      k_star[p] = optimize_generation_size(base, r, grid, spec.optimize_reps, false, spec.workers).k_star;
    }

  struct Job
  {
    SimConfig cfg;
    std::size_t point;
  };
  std::vector<Job> jobs;
  std::vector<SweepRow> rows;
  for (const Curve& c : curves)
    for (std::size_t e = 0; e < ne; ++e)
      for (std::size_t a = 0; a < na; ++a) {
        const std::size_t point = e * na + a;
        Job job{point_config(spec, c, spec.burst_lengths[e], a), point};
        if (c.scheme == Scheme::generation && optimize)
          job.cfg.generation_size = k_star[point];

        SweepRow row;
        row.scheme = to_string(c.scheme);
        row.mode = to_string(spec.base.mode);
        row.axis_name = axis_name;
        row.axis_value = axis_value(spec, a);
        row.mean_burst = spec.burst_lengths[e];
        row.redundancy = job.cfg.redundancy.to_string();
        if (c.scheme == Scheme::generation)
          row.generation_size = std::to_string(job.cfg.generation_size);
        row.master_seed = spec.master_seed;
        rows.push_back(std::move(row));
        jobs.push_back(std::move(job));
      }

  const std::size_t reps = spec.replications;
  std::vector<RunSummary> summaries(jobs.size() * reps);
  parallel_for(summaries.size(), spec.workers, [&](std::size_t j) {
    const Job& job = jobs[j / reps];
    SimConfig cfg = job.cfg;
    cfg.seed = child_seed(spec.master_seed, job.point, j % reps);
    try {
      summaries[j] = run_simulation(cfg).summary();
    } catch (const std::exception& ex) {
      const SweepRow& row = rows[j / reps];
      throw std::runtime_error(row.scheme + " E_L=" + fmt(row.mean_burst) + " " + row.axis_name + "=" +
                               row.axis_value + ": " + ex.what());
    }
  });

  for (std::size_t i = 0; i < rows.size(); ++i)
    rows[i].stats = aggregate(std::span<const RunSummary>{summaries}.subspan(i * reps, reps));
  return SweepResult{std::move(rows)};
}

std::string SweepResult::csv() const
{
  std::string out = "scheme,mode,axis_name,axis_value,E_L,R,k,eta,E_D_ms,var_D,std_D,PER,reps,seed\n";
  for (const SweepRow& r : rows) {
    const bool has_delay = r.stats.delay.n > 0;
    const std::string fields[] = {
      r.scheme,
      r.mode,
      r.axis_name,
      r.axis_value,
      fmt(r.mean_burst),
      r.redundancy,
      r.generation_size,
      fmt(r.stats.eta.mean),
      has_delay ? fmt(r.stats.delay.mean) : "",
      has_delay ? fmt(r.stats.delay_variance) : "",
      has_delay ? fmt(r.stats.delay_stddev) : "",
      fmt(r.stats.per.mean),
      std::to_string(r.stats.replications),
      std::to_string(r.master_seed),
    };
    for (std::size_t i = 0; i < std::size(fields); ++i) {
      out += fields[i];
      out += i + 1 < std::size(fields) ? ',' : '\n';
    }
  }
  return out;
}

std::string SweepResult::manifest_json(const ExperimentSpec& spec) const
{
  using nlohmann::ordered_json;
  ordered_json m;
  m["software"] = {{"name", "ncsat"}, {"version", NCSAT_VERSION}};
  m["preset"] = to_string(spec.preset);
  m["master_seed"] = spec.master_seed;
  m["replications"] = spec.replications;
  m["rows"] = rows.size();
  if (spec.is_tandem()) {
    const auto& t = spec.tandem;
    m["tandem"] = {{"eps", t.link_erasure}, {"stream_len", t.packets}, {"block_size", t.block_size},
                   {"q", t.field_bits},     {"payload_bytes", t.payload_bytes}, {"strategies", {"e2e", "hop-by-hop"}}};
  } else {
    const SimConfig& b = spec.base;
    m["base"] = {{"mode", to_string(b.mode)},
                 {"R", b.redundancy.to_string()},
                 {"k", b.generation_size},
                 {"stream_len", b.stream_length},
                 {"slot_ms", b.slot_ms},
                 {"rtt_ms", b.rtt_ms},
                 {"pi_b", b.loss_rate},
                 {"q", b.field_bits},
                 {"payload_bytes", b.payload_bytes},
                 {"max_slots", b.max_slots}};
    ordered_json schemes = ordered_json::array();
    for (Scheme s : spec.schemes)
      schemes.push_back(to_string(s));
    m["schemes"] = schemes;
    m["axis"] = spec.axis == Axis::redundancy ? "R" : "k";
    ordered_json values = ordered_json::array();
    for (std::size_t a = 0; a < axis_size(spec); ++a)
      values.push_back(axis_value(spec, a));
    m["values"] = values;
    m["mean_burst"] = spec.burst_lengths;
    auto levels = [](const std::vector<Redundancy>& v) {
      ordered_json j = ordered_json::array();
      for (const auto& r : v)
        j.push_back(r.to_string());
      return j;
    };
    m["gen_levels"] = levels(spec.generation_levels);
    m["sw_levels"] = levels(spec.sliding_levels);
    m["optimize_k"] = {{"enabled", spec.optimize_k},
                       {"k_grid", spec.k_grid},
                       {"rate_matched", spec.rate_matched_k},
                       {"reps", spec.optimize_reps}};
  }
  ordered_json defaults = ordered_json::object();
  for (const auto& [key, value] : spec.chosen_defaults)
    defaults[key] = {{"value", value}, {"source", "default, not from paper"}};
  m["defaults"] = defaults;
  return m.dump(2) + "\n";
}

void write_outputs(const ExperimentSpec& spec, const SweepResult& result)
{
  if (spec.out.empty())
    throw ConfigError("out", "no output path given");
  auto write = [](const std::filesystem::path& p, const std::string& text) {
    std::ofstream f{p, std::ios::binary};
    if (!f || !(f << text))
      throw std::runtime_error("cannot write " + p.string());
  };
  write(spec.out, result.csv());
  std::filesystem::path manifest = spec.out;
  manifest += ".json";
  write(manifest, result.manifest_json(spec));
}

} // namespace ncsat
