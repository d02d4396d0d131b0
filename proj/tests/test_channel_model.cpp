#include "jdafc/channel_model.hpp"
#include "jdafc/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace ch = jdafc::channel;
using jdafc::splitmix64;

namespace {

ch::path_profile
profile(double loss, double burst, double kbps = 8000.0, double prop = 50.0)
{
  ch::path_profile p;
  p.id = "p";
  p.bandwidth_kbps = kbps;
  p.prop_delay_ms = prop;
  p.avg_loss_rate = loss;
  p.avg_burst_len = burst;
  return p;
}

struct loss_stats
{
  double loss = 0.0;
  double mean_burst = 0.0;
};

loss_stats
simulate(ch::gilbert_channel c, std::size_t packets)
{
  std::size_t lost = 0;
  std::size_t bursts = 0;
  bool in_burst = false;
  for (std::size_t i = 0; i < packets; ++i)
  {
    const bool ok = c.step();
    if (!ok)
    {
      ++lost;
      if (!in_burst)
      {
        ++bursts;
      }
    }
    in_burst = !ok;
  }
  return {static_cast<double>(lost) / static_cast<double>(packets),
          bursts > 0 ? static_cast<double>(lost) / static_cast<double>(bursts) : 0.0};
}

} // namespace

TEST(stationary_probs_test, closed_forms)
{
  const auto sym = ch::stationary_probs(0.3, 0.3);
  EXPECT_DOUBLE_EQ(sym.pi_g, 0.5);
  EXPECT_DOUBLE_EQ(sym.pi_b, 0.5);
  const auto absorbing = ch::stationary_probs(0.0, 0.4);
  EXPECT_EQ(absorbing.pi_g, 1.0);
  EXPECT_EQ(absorbing.pi_b, 0.0);
  EXPECT_THROW(ch::stationary_probs(0.0, 0.0), jdafc::parameter_error);
  EXPECT_THROW(ch::stationary_probs(-0.1, 0.5), jdafc::parameter_error);
}

TEST(stationary_probs_test, bad_state_occupancy_by_simulation)
{
  const ch::gilbert_channel c{0.1, 0.9, splitmix64{21}};
  EXPECT_NEAR(c.stationary().pi_b, 0.1, 1e-12);
  const auto s = simulate(c, 1000000);
  // 3 sigma of a correlated occupancy estimate is well under 0.002 here.
  EXPECT_NEAR(s.loss, 0.1, 0.002);
}

TEST(calibrate_test, rates_reproduce_configured_stationary_distribution)
{
  for (const auto& [loss, burst] : std::vector<std::pair<double, double>>{
           {0.01, 1}, {0.01, 2}, {0.02, 3}, {0.05, 5}, {0.2, 10}, {0.1, 1}})
  {
    const auto c = ch::calibrate(profile(loss, burst), splitmix64{1});
    EXPECT_NEAR(c.stationary().pi_b, loss, 1e-12);
    EXPECT_NEAR(c.mean_burst_length(), burst, 1e-12);
  }
}

TEST(calibrate_test, loss_point_one_burst_one)
{
  const auto c = ch::calibrate(profile(0.1, 1.0), splitmix64{22});
  EXPECT_DOUBLE_EQ(c.xi_g(), 1.0);
  EXPECT_NEAR(c.xi_b(), 1.0 / 9.0, 1e-15);
  const auto s = simulate(c, 1000000);
  EXPECT_NEAR(s.mean_burst, 1.0, 0.01);
}

TEST(calibrate_test, loss_five_percent_burst_five)
{
  const auto s = simulate(ch::calibrate(profile(0.05, 5.0), splitmix64{23}), 1000000);
  EXPECT_NEAR(s.loss, 0.05, 0.005);
  EXPECT_NEAR(s.mean_burst, 5.0, 0.25);
}

TEST(calibrate_test, lossless_never_enters_bad)
{
  auto c = ch::calibrate(profile(0.0, 1.0), splitmix64{24});
  EXPECT_EQ(c.xi_b(), 0.0);
  for (int i = 0; i < 100000; ++i)
  {
    ASSERT_TRUE(c.step());
  }
}

TEST(calibrate_test, rejects_invalid_profiles)
{
  EXPECT_THROW(ch::calibrate(profile(0.6, 1.0), splitmix64{}), jdafc::parameter_error);
  EXPECT_THROW(ch::calibrate(profile(1.0, 2.0), splitmix64{}), jdafc::parameter_error);
  EXPECT_THROW(ch::calibrate(profile(0.1, 0.5), splitmix64{}), jdafc::parameter_error);
  EXPECT_THROW(ch::calibrate(profile(0.1, 2.0, 0.0), splitmix64{}), jdafc::parameter_error);
  EXPECT_THROW(ch::calibrate(profile(0.1, 2.0, 100.0, -1.0), splitmix64{}), jdafc::parameter_error);
  EXPECT_THROW((ch::gilbert_channel{0.1, 0.0, splitmix64{}}), jdafc::parameter_error);
}

TEST(transmit_test, arrival_arithmetic)
{
  const auto p = profile(0.0, 1.0, 8000.0, 50.0);
  auto c = ch::calibrate(p, splitmix64{25});
  const auto r = ch::transmit(c, p, 1000.0, 10.0);
  EXPECT_TRUE(r.delivered);
  EXPECT_DOUBLE_EQ(r.arrival_time_ms, 10.0 + 1.0 + 50.0);
}

TEST(transmit_test, delivered_fraction)
{
  const auto p = profile(0.2, 4.0);
  auto c = ch::calibrate(p, splitmix64{26});
  std::size_t ok = 0;
  for (int i = 0; i < 100000; ++i)
  {
    ok += ch::transmit(c, p, 1000.0, 0.0).delivered ? 1 : 0;
  }
  EXPECT_NEAR(ok / 1e5, 0.8, 0.01);
}

TEST(path_link_test, fifo_drains_at_bandwidth)
{
  ch::path_link link{profile(0.0, 1.0, 8000.0, 50.0), splitmix64{27}};
  const auto a = link.send(1000.0, 0.0);
  const auto b = link.send(1000.0, 0.0);
  const auto c = link.send(1000.0, 5.0);
  EXPECT_DOUBLE_EQ(a.arrival_time_ms, 51.0);
  EXPECT_DOUBLE_EQ(b.start_ms, 1.0);
  EXPECT_DOUBLE_EQ(b.arrival_time_ms, 52.0);
  EXPECT_DOUBLE_EQ(c.start_ms, 5.0);
  EXPECT_DOUBLE_EQ(link.backlog_bytes(5.5), 500.0);
  EXPECT_EQ(link.backlog_bytes(7.0), 0.0);
}

TEST(path_link_test, arrivals_non_decreasing_in_send_order)
{
  ch::path_link link{profile(0.05, 3.0, 4000.0, 30.0), splitmix64{28}, 2.0};
  splitmix64 rng{29};
  double t = 0.0;
  double last = 0.0;
  for (int i = 0; i < 20000; ++i)
  {
    t += rng.uniform() * 3.0;
    const auto o = link.send(1000.0, t);
    ASSERT_GE(o.arrival_time_ms, last);
    last = o.arrival_time_ms;
  }
}

TEST(path_link_test, deterministic_for_a_seed)
{
  auto run = [](std::uint64_t seed) {
    ch::path_link link{profile(0.1, 3.0), splitmix64{seed}, 1.0};
    std::vector<bool> fates;
    for (int i = 0; i < 5000; ++i)
    {
      fates.push_back(link.send(1000.0, i * 0.7).delivered);
    }
    return fates;
  };
  EXPECT_EQ(run(30), run(30));
  EXPECT_NE(run(30), run(31));
}

TEST(path_link_test, time_slotted_chain_matches_configured_loss)
{
  // Sending into every other slot samples the same stationary chain.
  ch::path_link link{profile(0.05, 5.0, 8000.0, 0.0), splitmix64{32}, 1.0};
  std::size_t lost = 0;
  constexpr int n = 500000;
  for (int i = 0; i < n; ++i)
  {
    lost += link.send(1000.0, 2.0 * i).delivered ? 0 : 1;
  }
  EXPECT_NEAR(static_cast<double>(lost) / n, 0.05, 0.005);
}

TEST(path_link_test, slotted_fate_independent_of_other_traffic_pattern)
{
  // Two senders on the same seed that both transmit in slot s see the same state there.
  ch::path_link dense{profile(0.2, 4.0, 8000.0, 0.0), splitmix64{33}, 1.0};
  ch::path_link sparse{profile(0.2, 4.0, 8000.0, 0.0), splitmix64{33}, 1.0};
  std::vector<bool> dense_fate;
  for (int s = 0; s < 3000; ++s)
  {
    dense_fate.push_back(dense.send(1000.0, s).delivered);
  }
  for (int s = 0; s < 3000; s += 7)
  {
    EXPECT_EQ(sparse.send(1000.0, s).delivered, dense_fate[static_cast<std::size_t>(s)]) << "slot " << s;
  }
}

TEST(path_profile_test, modulation)
{
  auto p = profile(0.0, 1.0, 1000.0);
  EXPECT_EQ(p.bandwidth_at(123.0), 1000.0);
  p.modulation = {0.5, 400.0, 0.0};
  EXPECT_NEAR(p.bandwidth_at(100.0), 1500.0, 1e-9);
  EXPECT_NEAR(p.bandwidth_at(300.0), 500.0, 1e-9);
  p.modulation.period_ms = 0.0;
  EXPECT_THROW(p.validate(), jdafc::parameter_error);
  EXPECT_DOUBLE_EQ(profile(0.25, 2.0, 8000.0).loss_free_bandwidth_kbps(), 6000.0);
}

TEST(path_profile_test, technology_names)
{
  EXPECT_EQ(ch::technology_from_string("WiMAX"), ch::technology::wimax);
  EXPECT_EQ(ch::to_string(ch::technology::wlan), "WLAN");
  EXPECT_THROW(ch::technology_from_string("5G"), jdafc::parameter_error);
}
