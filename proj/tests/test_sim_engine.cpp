#include "jdafc/fountain_codec.hpp"
#include "jdafc/rng.hpp"
#include "jdafc/scenario.hpp"
#include "jdafc/sim_engine.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace sim = jdafc::sim;
namespace fc = jdafc::fountain;

namespace {

const std::filesystem::path data_dir{JDAFC_DATA_DIR};
const std::filesystem::path scenario_dir{JDAFC_SCENARIO_DIR};

sim::path_config
path(std::string id, double kbps, double prop, double loss = 0.0, double burst = 1.0)
{
  sim::path_config p;
  p.profile.id = std::move(id);
  p.profile.bandwidth_kbps = kbps;
  p.profile.prop_delay_ms = prop;
  p.profile.avg_loss_rate = loss;
  p.profile.avg_burst_len = burst;
  return p;
}

sim::scenario
base(std::vector<sim::path_config> paths, int frames = 240)
{
  sim::scenario sc;
  sc.name = "test";
  sc.paths = std::move(paths);
  sc.video.num_frames = frames;
  sc.profile = sim::load_overhead_profile(data_dir / "overhead_p999.json");
  return sc;
}

sim::scenario
two_lossy_paths()
{
  return base({path("lte", 8000, 50, 0.05, 3), path("wlan", 4000, 30, 0.1, 2)});
}

std::string
trace_text(const sim::run_result& r)
{
  std::ostringstream os;
  sim::write_trace(os, r);
  return os.str();
}

double
min_prop(const sim::scenario& sc)
{
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : sc.paths)
  {
    m = std::min(m, p.profile.prop_delay_ms);
  }
  return m;
}

} // namespace

TEST(simulation_test, deterministic_trace)
{
  const auto sc = two_lossy_paths();
  for (const auto* scheme : {"jdafc", "dmp"})
  {
    const auto a = sim::run(sc, scheme, 3);
    const auto b = sim::run(sc, scheme, 3);
    EXPECT_EQ(trace_text(a), trace_text(b)) << scheme;
    EXPECT_NE(trace_text(a), trace_text(sim::run(sc, scheme, 4))) << scheme;
    EXPECT_EQ(sim::to_json(a.metrics).dump(), sim::to_json(b.metrics).dump());
  }
}

TEST(simulation_test, lossless_fat_path_loses_nothing)
{
  const auto sc = base({path("fat", 100000, 20)});
  for (const auto& scheme : jdafc::sched::known_schemes())
  {
    const auto r = sim::run(sc, scheme, 1);
    EXPECT_EQ(r.metrics.effective_loss_rate, 0.0) << scheme;
    EXPECT_EQ(r.metrics.miss_ratio.at(200), 0.0) << scheme;
    EXPECT_EQ(r.metrics.failed_gops, 0u) << scheme;
  }
}

TEST(simulation_test, no_active_paths_loses_everything)
{
  auto sc = base({path("late", 8000, 20)});
  sc.paths[0].windows = {{1e9, std::numeric_limits<double>::infinity()}};
  const auto r = sim::run(sc, "jdafc", 1);
  EXPECT_EQ(r.metrics.effective_loss_rate, 1.0);
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(sim::run(base({}), "jdafc", 1).metrics.effective_loss_rate, 1.0);
}

TEST(simulation_test, packet_conservation_per_path)
{
  auto sc = two_lossy_paths();
  sc.paths[1].windows = {{0.0, 3000.0}, {5000.0, std::numeric_limits<double>::infinity()}};
  for (const auto& scheme : jdafc::sched::known_schemes())
  {
    const auto r = sim::run(sc, scheme, 2);
    std::vector<std::size_t> sends(sc.paths.size(), 0);
    for (const auto& row : r.trace)
    {
      sends[row.path] += row.event == sim::packet_event::send ? 1 : 0;
    }
    for (std::size_t p = 0; p < r.counters.size(); ++p)
    {
      const auto& c = r.counters[p];
      if (scheme != "dmp")
      {
        EXPECT_GT(c.sent, 0u) << scheme << " path " << p;
      }
      EXPECT_EQ(c.delivered + c.dropped + c.in_flight_at_end, c.sent) << scheme << " path " << p;
      EXPECT_EQ(sends[p], c.sent);
    }
    EXPECT_EQ(r.payload_mismatches, 0u);
  }
}

TEST(simulation_test, events_in_time_order)
{
  const auto r = sim::run(two_lossy_paths(), "jdafc", 5);
  ASSERT_FALSE(r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i)
  {
    ASSERT_GE(r.trace[i].time_ms, r.trace[i - 1].time_ms);
  }
  for (const auto& pk : r.packets)
  {
    EXPECT_GE(pk.arrival_ms, pk.tx_start_ms);
    EXPECT_TRUE(pk.resolved);
  }
}

TEST(simulation_test, frame_delay_at_least_propagation)
{
  const auto sc = two_lossy_paths();
  const auto r = sim::run(sc, "jdafc", 6);
  for (const auto& f : r.metrics.frames)
  {
    if (const auto d = f.delay_ms())
    {
      EXPECT_GE(*d, min_prop(sc));
    }
  }
}

TEST(simulation_test, scheduler_never_sees_undelivered_feedback)
{
  auto sc = two_lossy_paths();
  sc.paths[0].windows = {{0.0, 4000.0}};
  sc.paths[1].windows = {{1000.0, std::numeric_limits<double>::infinity()}};
  const auto r = sim::run(sc, "jdafc", 7);
  ASSERT_EQ(r.status_snapshots.size(), r.plans.size());
  for (std::size_t g = 0; g < r.plans.size(); ++g)
  {
    const double plan_time = r.gops[g].gop.ready_ms;
    for (const auto& s : r.status_snapshots[g])
    {
      EXPECT_LE(s.last_report_time_ms, plan_time - min_prop(sc) + 1e-9) << "gop " << g << " " << s.path_id;
    }
    for (const auto& [id, n] : r.plans[g].per_path_symbols)
    {
      const auto& p = sc.paths[id == "lte" ? 0 : 1];
      EXPECT_TRUE(n == 0 || p.active_at(plan_time - p.profile.prop_delay_ms) || plan_time == 0.0)
          << "gop " << g << " " << id;
    }
  }
}

TEST(simulation_test, single_symbol_block_released_on_first_arrival)
{
  auto sc = base({path("lte", 8000, 50, 0.05, 2)});
  sc.video.encoding_rate_kbps = 20.0;
  const auto r = sim::run(sc, "jdafc", 8);
  for (const auto& rec : r.gops)
  {
    ASSERT_EQ(rec.gop.total_bytes() <= 1000, true);
    std::optional<double> first;
    for (const auto& pk : r.packets)
    {
      if (pk.gop == rec.gop.gop_id && pk.delivered && pk.arrival_ms <= rec.gop.last_deadline_ms())
      {
        first = first ? std::min(*first, pk.arrival_ms) : pk.arrival_ms;
      }
    }
    EXPECT_EQ(rec.decoded_ms, first) << "gop " << rec.gop.gop_id;
  }
}

TEST(simulation_test, decode_times_match_offline_replay)
{
  const auto sc = two_lossy_paths();
  const auto r = sim::run(sc, "jdafc", 9);
  std::map<int, std::vector<const sim::packet_record*>> by_gop;
  for (const auto& pk : r.packets)
  {
    if (pk.delivered)
    {
      by_gop[pk.gop].push_back(&pk);
    }
  }
  std::size_t decoded = 0;
  for (const auto& rec : r.gops)
  {
    if (!rec.sent)
    {
      continue;
    }
    auto list = by_gop[rec.gop.gop_id];
    std::stable_sort(list.begin(), list.end(), [](const auto* a, const auto* b) {
      return a->arrival_ms != b->arrival_ms ? a->arrival_ms < b->arrival_ms : a->id < b->id;
    });
    const auto m = r.plans[static_cast<std::size_t>(rec.gop.gop_id)].fountain_m;
    const auto dist = fc::build_degree_distribution(m, sc.codec);
    fc::gf2_rank_tracker rank{m};
    std::optional<double> replay;
    for (const auto* pk : list)
    {
      if (pk->arrival_ms > rec.gop.last_deadline_ms())
      {
        break;
      }
      rank.add(fc::structure_of(rec.block_seed, pk->symbol, dist).neighbors);
      if (rank.full())
      {
        replay = pk->arrival_ms;
        break;
      }
    }
    EXPECT_EQ(rec.decoded_ms, replay) << "gop " << rec.gop.gop_id;
    decoded += replay ? 1 : 0;
  }
  EXPECT_GT(decoded, 0u);
}

TEST(simulation_test, dmp_switches_when_best_path_blocks)
{
  const auto sc = base({path("a", 3500, 10), path("b", 3000, 10)});
  const auto r = sim::run(sc, "dmp", 1);
  ASSERT_FALSE(r.plans.empty());
  EXPECT_EQ(r.plans.front().selected_paths, std::vector<std::string>{"a"});
  const bool switched = std::any_of(r.plans.begin(), r.plans.end(), [](const auto& p) {
    return p.selected_paths == std::vector<std::string>{"b"};
  });
  EXPECT_TRUE(switched);
}

TEST(simulation_test, withdrawn_path_gets_no_new_symbols)
{
  auto sc = two_lossy_paths();
  sc.paths[1].windows = {{0.0, 2000.0}};
  const auto r = sim::run(sc, "jdafc", 10);
  for (const auto& pk : r.packets)
  {
    if (pk.path == 1)
    {
      EXPECT_LT(pk.tx_start_ms, 2000.0 + 400.0);
    }
  }
}

TEST(simulation_test, combo1_golden)
{
  std::ifstream in{data_dir / "golden" / "combo1_jdafc.json"};
  ASSERT_TRUE(in);
  nlohmann::json golden;
  in >> golden;
  const auto sc = sim::load_scenario(scenario_dir / "combo1.yaml");
  double psnr = 0.0;
  for (const auto& g : golden["runs"])
  {
    const auto seed = g["seed"].get<std::uint64_t>();
    const auto r = sim::run(sc, "jdafc", seed);
    EXPECT_EQ(jdafc::hash_label(trace_text(r)), g["trace_fnv1a"].get<std::uint64_t>()) << "seed " << seed;
    psnr += r.metrics.mean_psnr_db;
  }
  EXPECT_NEAR(psnr / static_cast<double>(golden["runs"].size()), golden["mean_psnr_db"].get<double>(), 1e-9);
}
