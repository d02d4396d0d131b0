#include "jdafc/experiment.hpp"
#include "jdafc/overhead_profile.hpp"
#include "jdafc/scenario.hpp"
#include "jdafc/sim_engine.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_infeasible = 3;

namespace fs = std::filesystem;

int
cmd_run(const std::string& scenario_file, const std::string& scheme, std::uint64_t seed,
        const std::string& out, bool traces)
{
  const auto sc = jdafc::sim::load_scenario(scenario_file);
  const auto& known = jdafc::sched::known_schemes();
  if (std::find(known.begin(), known.end(), scheme) == known.end())
  {
    throw jdafc::config_error{"unknown scheme '" + scheme + "'"};
  }
  const fs::path dir{out};
  for (const char* sub : {"runs", "cdf", "traces", "decisions"})
  {
    fs::create_directories(dir / sub);
  }
  const auto r = jdafc::sim::run(sc, scheme, seed);
  const jdafc::sim::run_key key{sc.name, scheme, seed};
  const auto file = jdafc::sim::run_file_json(key, r);
  jdafc::sim::write_run(dir, key, r, file, traces);
  {
    std::ofstream os{dir / "summary.csv"};
    jdafc::sim::write_summary(os, {file});
  }
  std::cout << key.stem() << ": psnr " << r.metrics.mean_psnr_db << " dB, effective loss "
            << r.metrics.effective_loss_rate << ", mean delay " << r.metrics.mean_delay_ms << " ms\n";
  const bool any_sent = std::any_of(r.plans.begin(), r.plans.end(), [](const auto& p) { return p.sends(); });
  return any_sent ? exit_ok : exit_infeasible;
}

int
cmd_matrix(const std::string& config_dir, const std::string& out, const std::vector<std::string>& schemes,
           const std::vector<std::uint64_t>& seeds, bool traces)
{
  jdafc::sim::matrix_options opt;
  opt.schemes = schemes;
  opt.seeds = seeds;
  opt.write_traces = traces;
  const auto res = jdafc::sim::run_matrix(config_dir, out, opt);
  std::cout << res.runs.size() << " runs written to " << out << '\n';
  return res.infeasible_runs > 0 ? exit_infeasible : exit_ok;
}

int
cmd_profile(const std::vector<std::size_t>& ks, std::size_t trials, double target, std::uint64_t seed,
            const std::string& decoder, double c, double delta, const std::string& out)
{
  if (decoder != "gaussian" && decoder != "peeling")
  {
    throw jdafc::config_error{"decoder must be 'gaussian' or 'peeling'"};
  }
  const auto kind = decoder == "gaussian" ? jdafc::fountain::decoder_kind::gaussian
                                          : jdafc::fountain::decoder_kind::peeling;
  const auto profile = jdafc::fountain::profile_overhead(ks, {c, delta}, trials, target, seed, kind);
  const auto text = jdafc::fountain::to_json(profile).dump(2) + "\n";
  if (out.empty())
  {
    std::cout << text;
  }
  else
  {
    std::ofstream os{out};
    if (!os)
    {
      throw jdafc::config_error{"cannot write '" + out + "'"};
    }
    os << text;
  }
  return exit_ok;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"Multipath video streaming simulator with fountain-coded scheduling"};
  app.require_subcommand(1);

  std::string scenario_file;
  std::string scheme;
  std::uint64_t seed = 1;
  std::string out;
  bool no_traces = false;
  auto* run = app.add_subcommand("run", "Run one scenario under one scheme and seed");
  run->add_option("--scenario", scenario_file, "Scenario file")->required();
  run->add_option("--scheme", scheme, "jdafc, ems, jfss or dmp")->required();
  run->add_option("--seed", seed, "Run seed");
  run->add_option("--out", out, "Output directory")->required();
  run->add_flag("--no-traces", no_traces, "Skip trace and decision logs");

  std::string config_dir;
  std::vector<std::string> schemes{"jdafc", "ems", "jfss", "dmp"};
  std::vector<std::uint64_t> seeds;
  auto* matrix = app.add_subcommand("matrix", "Run every scenario x scheme x seed of a directory");
  matrix->add_option("--config-dir", config_dir, "Directory of scenario files")->required();
  matrix->add_option("--out", out, "Output directory")->required();
  matrix->add_option("--schemes", schemes, "Schemes to run")->delimiter(',');
  matrix->add_option("--seeds", seeds, "Override the scenario seed lists")->delimiter(',');
  matrix->add_flag("--no-traces", no_traces, "Skip trace and decision logs");

  std::vector<std::size_t> ks;
  std::size_t trials = 10000;
  double target = 0.99;
  std::string decoder = "gaussian";
  double c = 0.03;
  double delta = 0.5;
  std::string profile_out;
  auto* prof = app.add_subcommand("profile-overhead", "Profile the decoding overhead of the LT code");
  prof->add_option("--k", ks, "Block sizes")->required()->delimiter(',');
  prof->add_option("--trials", trials, "Trials per block size (at least 1000)");
  prof->add_option("--target", target, "Decode success target");
  prof->add_option("--seed", seed, "Profiling seed");
  prof->add_option("--decoder", decoder, "gaussian or peeling");
  prof->add_option("--c", c, "Robust soliton c");
  prof->add_option("--delta", delta, "Robust soliton delta");
  prof->add_option("--out", profile_out, "Output JSON file (stdout if omitted)");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try
  {
    if (*run)
    {
      return cmd_run(scenario_file, scheme, seed, out, !no_traces);
    }
    if (*matrix)
    {
      std::erase(schemes, std::string{});
      if (schemes.empty())
      {
        throw jdafc::config_error{"no schemes selected"};
      }
      return cmd_matrix(config_dir, out, schemes, seeds, !no_traces);
    }
    return cmd_profile(ks, trials, target, seed, decoder, c, delta, profile_out);
  }
  catch (const jdafc::config_error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
  catch (const jdafc::parameter_error& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return exit_config;
  }
}
