#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/metrics.hpp"
#include "jdafc/scenario.hpp"
#include "jdafc/scheduler.hpp"
#include "jdafc/sim_engine.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace jdafc::sim {

namespace fs = std::filesystem;

struct mean_ci
{
  double mean = 0.0;
  double half_width = 0.0;  // 95% two-sided, Student t with n - 1 dof
  std::size_t n = 0;
};

inline mean_ci
confidence_interval(const std::vector<double>& xs, double level = 0.95)
{
  mean_ci out;
  out.n = xs.size();
  if (xs.empty())
  {
    return out;
  }
  double sum = 0.0;
  for (const double x : xs)
  {
    sum += x;
  }
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2)
  {
    return out;
  }
  double ss = 0.0;
  for (const double x : xs)
  {
    ss += (x - out.mean) * (x - out.mean);
  }
  const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  const boost::math::students_t dist{static_cast<double>(xs.size() - 1)};
  const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
  out.half_width = t * sd / std::sqrt(static_cast<double>(xs.size()));
  return out;
}

struct run_key
{
  std::string scenario;
  std::string scheme;
  std::uint64_t seed = 0;

  std::string
  stem()
  const
  {
    return scenario + "__" + scheme + "__seed" + std::to_string(seed);
  }
};

/// Metrics of one run as stored in the per-run JSON file.
inline nlohmann::json
run_file_json(const run_key& key, const run_result& r)
{
  auto j = to_json(r.metrics);
  j["scenario"] = key.scenario;
  j["scheme"] = key.scheme;
  j["seed"] = key.seed;
  nlohmann::json counters = nlohmann::json::object();
  for (std::size_t p = 0; p < r.path_ids.size(); ++p)
  {
    const auto& c = r.counters[p];
    counters[r.path_ids[p]] = {{"sent", c.sent},
                               {"delivered", c.delivered},
                               {"dropped", c.dropped},
                               {"in_flight_at_end", c.in_flight_at_end}};
  }
  j["paths"] = counters;
  std::size_t infeasible = 0;
  for (const auto& p : r.plans)
  {
    infeasible += p.feasible ? 0 : 1;
  }
  j["infeasible_gops"] = infeasible;
  j["payload_mismatches"] = r.payload_mismatches;
  return j;
}

inline std::string
format_double(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Metric columns of the summary table, in order.
inline const std::vector<std::string>&
summary_metrics()
{
  static const std::vector<std::string> m{"mean_psnr_db", "effective_loss_rate", "mean_delay_ms",
                                          "miss_ratio_200", "miss_ratio_250"};
  return m;
}

inline double
metric_value(const nlohmann::json& run_file, const std::string& metric)
{
  if (metric.rfind("miss_ratio_", 0) == 0)
  {
    const auto d = metric.substr(11);
    const auto& miss = run_file.at("miss_ratio");
    return miss.contains(d) ? miss.at(d).get<double>() : std::nan("");
  }
  return run_file.at(metric).get<double>();
}

/// One summary row per (scenario, scheme) from the per-run files, in deterministic order.
inline void
write_summary(std::ostream& os, const std::vector<nlohmann::json>& runs)
{
  std::map<std::pair<std::string, std::string>, std::vector<const nlohmann::json*>> cells;
  std::vector<std::pair<std::string, std::string>> order;
  for (const auto& r : runs)
  {
    const std::pair key{r.at("scenario").get<std::string>(), r.at("scheme").get<std::string>()};
    if (!cells.count(key))
    {
      order.push_back(key);
    }
    cells[key].push_back(&r);
  }
  os << "scenario,scheme,seeds";
  for (const auto& m : summary_metrics())
  {
    os << ',' << m << ',' << m << "_ci95";
  }
  os << '\n';
  for (const auto& key : order)
  {
    const auto& rs = cells[key];
    os << key.first << ',' << key.second << ',' << rs.size();
    for (const auto& m : summary_metrics())
    {
      std::vector<double> xs;
      for (const auto* r : rs)
      {
        xs.push_back(metric_value(*r, m));
      }
      const auto ci = confidence_interval(xs);
      os << ',' << format_double(ci.mean) << ',' << format_double(ci.half_width);
    }
    os << '\n';
  }
}

struct matrix_options
{
  std::vector<std::string> schemes{"jdafc", "ems", "jfss", "dmp"};
  bool write_traces = true;
  unsigned workers = 0;  // 0: JDAFC_WORKERS or hardware concurrency
  /// Overrides each scenario's seed list when non-empty.
  std::vector<std::uint64_t> seeds;
};

struct matrix_outcome
{
  std::vector<run_key> runs;
  std::vector<nlohmann::json> run_files;
  std::size_t infeasible_runs = 0;  // runs in which no GoP could be scheduled
};

inline unsigned
worker_count(unsigned requested)
{
  if (requested > 0)
  {
    return requested;
  }
  if (const char* env = std::getenv("JDAFC_WORKERS"))
  {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0)
    {
      return static_cast<unsigned>(v);
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Scenario files (*.yaml, *.yml) of a directory, sorted by file name.
inline std::vector<fs::path>
scenario_files(const fs::path& dir)
{
  if (!fs::is_directory(dir))
  {
    throw config_error{"config dir '" + dir.string() + "' is not a directory"};
  }
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator{dir})
  {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".yaml" || ext == ".yml"))
    {
      out.push_back(e.path());
    }
  }
  std::sort(out.begin(), out.end());
  if (out.empty())
  {
    throw config_error{"no scenario files in '" + dir.string() + "'"};
  }
  return out;
}

/// Writes the per-run outputs of one finished run.
inline void
write_run(const fs::path& out_dir, const run_key& key, const run_result& r, const nlohmann::json& file,
          bool traces)
{
  {
    std::ofstream os{out_dir / "runs" / (key.stem() + ".json")};
    os << file.dump(2) << '\n';
  }
  {
    std::ofstream os{out_dir / "cdf" / (key.stem() + ".csv")};
    write_cdf(os, r.metrics);
  }
  if (traces)
  {
    std::ofstream t{out_dir / "traces" / (key.stem() + ".jsonl")};
    write_trace(t, r);
    std::ofstream d{out_dir / "decisions" / (key.stem() + ".jsonl")};
    write_decisions(d, r);
  }
}

/// Pooled delay CDF per (scenario, scheme) over all seeds.
inline void
write_pooled_cdf(std::ostream& os, const std::vector<run_key>& keys,
                 const std::vector<std::vector<double>>& delays)
{
  std::map<std::pair<std::string, std::string>, std::vector<double>> pooled;
  std::vector<std::pair<std::string, std::string>> order;
  for (std::size_t i = 0; i < keys.size(); ++i)
  {
    const std::pair key{keys[i].scenario, keys[i].scheme};
    if (!pooled.count(key))
    {
      order.push_back(key);
    }
    auto& v = pooled[key];
    v.insert(v.end(), delays[i].begin(), delays[i].end());
  }
  os << "scenario,scheme,delay_ms,cdf\n";
  char buf[64];
  for (const auto& key : order)
  {
    auto v = pooled[key];
    if (v.empty())
    {
      continue;
    }
    std::sort(v.begin(), v.end());
    const double step = cdf_step_ms();
    const double top = std::ceil(v.back() / step) * step;
    std::size_t below = 0;
    for (double x = 0.0; x <= top + 1e-9; x += step)
    {
      while (below < v.size() && v[below] <= x)
      {
        ++below;
      }
      std::snprintf(buf, sizeof buf, "%.1f,%.6f\n", x, static_cast<double>(below) / static_cast<double>(v.size()));
      os << key.first << ',' << key.second << ',' << buf;
    }
  }
}

/// Runs every (scenario file, scheme, seed) of a config directory and writes
/// runs/*.json, cdf/*.csv, traces/*.jsonl, decisions/*.jsonl, summary.csv and cdf.csv under out_dir.
inline matrix_outcome
run_matrix(const fs::path& config_dir, const fs::path& out_dir, const matrix_options& opt = {})
{
  if (opt.schemes.empty())
  {
    throw config_error{"no schemes selected"};
  }
  for (const auto& s : opt.schemes)
  {
    const auto& known = sched::known_schemes();
    if (std::find(known.begin(), known.end(), s) == known.end())
    {
      throw config_error{"unknown scheme '" + s + "'"};
    }
  }
  std::vector<scenario> scenarios;
  for (const auto& f : scenario_files(config_dir))
  {
    scenarios.push_back(load_scenario(f));
  }

  matrix_outcome out;
  std::vector<const scenario*> of_run;
  for (const auto& sc : scenarios)
  {
    for (const auto& scheme : opt.schemes)
    {
      for (const auto seed : opt.seeds.empty() ? sc.seeds : opt.seeds)
      {
        out.runs.push_back({sc.name, scheme, seed});
        of_run.push_back(&sc);
      }
    }
  }

  for (const char* sub : {"runs", "cdf", "traces", "decisions"})
  {
    if (opt.write_traces || (std::string_view{sub} != "traces" && std::string_view{sub} != "decisions"))
    {
      fs::create_directories(out_dir / sub);
    }
  }

  out.run_files.resize(out.runs.size());
  std::vector<std::vector<double>> delays(out.runs.size());
  std::vector<char> infeasible(out.runs.size(), 0);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < out.runs.size(); i = next++)
    {
      try
      {
        const auto& key = out.runs[i];
        const auto r = run(*of_run[i], key.scheme, key.seed);
        out.run_files[i] = run_file_json(key, r);
        for (const auto& f : r.metrics.frames)
        {
          if (const auto d = f.delay_ms())
          {
            delays[i].push_back(*d);
          }
        }
        infeasible[i] = std::none_of(r.plans.begin(), r.plans.end(), [](const auto& p) { return p.sends(); });
        write_run(out_dir, key, r, out.run_files[i], opt.write_traces);
      }
      catch (...)
      {
        std::lock_guard lock{failure_mutex};
        if (!failure)
        {
          failure = std::current_exception();
        }
      }
    }
  };
  const unsigned n = std::min<std::size_t>(worker_count(opt.workers), std::max<std::size_t>(1, out.runs.size()));
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < n; ++w)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto& t : pool)
  {
    t.join();
  }
  if (failure)
  {
    std::rethrow_exception(failure);
  }
  for (const char f : infeasible)
  {
    out.infeasible_runs += f ? 1 : 0;
  }

  {
    std::ofstream os{out_dir / "summary.csv"};
    write_summary(os, out.run_files);
  }
  {
    std::ofstream os{out_dir / "cdf.csv"};
    write_pooled_cdf(os, out.runs, delays);
  }
  return out;
}

} // namespace jdafc::sim
