#include "jdafc/rng.hpp"
#include "jdafc/video_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

namespace vm = jdafc::video;
using jdafc::splitmix64;

namespace {

const std::filesystem::path data_dir{JDAFC_DATA_DIR};

std::vector<vm::frame_params>
random_gop(int n, splitmix64& rng)
{
  std::vector<vm::frame_params> out;
  for (int k = 1; k <= n; ++k)
  {
    vm::frame_params p;
    p.n = k;
    p.theta_full = 20.0 * rng.uniform();
    p.theta_slope = 1000.0 * rng.uniform();
    p.eta = k == 1 ? 0.0 : 3.0 * rng.uniform();
    for (int i = 2; i < k; ++i)
    {
      if (rng.uniform() < 0.8)
      {
        p.mu.emplace_back(i, rng.uniform());
      }
    }
    out.push_back(p);
  }
  return out;
}

/// t_n from the definitions, evaluated recursively frame by frame.
double
brute_force_total(const std::vector<vm::frame_params>& params, const std::vector<double>& tau, int n)
{
  std::function<double(int)> h = [&](int i) {
    const auto& p = params[static_cast<std::size_t>(i - 1)];
    return p.theta_full + tau[static_cast<std::size_t>(i - 1)] * p.theta_slope;
  };
  const auto& p = params[static_cast<std::size_t>(n - 1)];
  double d = 0.0;
  if (n > 1)
  {
    d = p.eta;
    for (int i = 2; i <= n - 1; ++i)
    {
      double mu = 0.0;
      for (const auto& [idx, v] : p.mu)
      {
        if (idx == i)
        {
          mu = v;
        }
      }
      d += mu * h(i);
    }
  }
  return h(n) + d;
}

} // namespace

TEST(truncation_distortion_test, examples)
{
  vm::frame_params p;
  p.theta_full = 2.0;
  p.theta_slope = 10.0;
  EXPECT_EQ(vm::truncation_distortion(p, 0.0), 2.0);
  EXPECT_EQ(vm::truncation_distortion(p, 1.0), 12.0);
  EXPECT_THROW(vm::truncation_distortion(p, 1.5), jdafc::parameter_error);
}

TEST(drifting_distortion_test, examples)
{
  vm::frame_params one;
  one.n = 1;
  one.eta = 5.0;
  EXPECT_EQ(vm::drifting_distortion({}, one), 0.0);

  vm::frame_params two;
  two.n = 2;
  two.eta = 0.7;
  const std::vector<double> h1{100.0};
  EXPECT_EQ(vm::drifting_distortion(h1, two), 0.7);

  vm::frame_params four;
  four.n = 4;
  four.eta = 0.1;
  four.mu = {{2, 0.5}, {3, 0.25}};
  const std::vector<double> h{1.0, 2.0, 3.0};
  EXPECT_DOUBLE_EQ(vm::drifting_distortion(h, four), 1.85);
  EXPECT_THROW(vm::drifting_distortion(std::vector<double>{1.0}, four), jdafc::parameter_error);
}

TEST(total_distortion_test, lossless_closed_form)
{
  splitmix64 rng{40};
  const auto params = random_gop(8, rng);
  const std::vector<double> tau(8, 0.0);
  const auto t = vm::total_distortion(params, tau);
  for (std::size_t k = 0; k < params.size(); ++k)
  {
    double expect = params[k].theta_full + (k == 0 ? 0.0 : params[k].eta);
    for (const auto& [i, v] : params[k].mu)
    {
      expect += v * params[static_cast<std::size_t>(i - 1)].theta_full;
    }
    EXPECT_NEAR(t[k], expect, 1e-12);
  }
}

TEST(total_distortion_test, single_frame_gop)
{
  vm::frame_params p;
  p.theta_full = 3.0;
  p.theta_slope = 7.0;
  const std::vector<vm::frame_params> params{p};
  const std::vector<double> tau{0.5};
  EXPECT_DOUBLE_EQ(vm::total_distortion(params, tau)[0], 6.5);
}

TEST(total_distortion_test, matches_brute_force_recursion)
{
  splitmix64 rng{41};
  for (int trial = 0; trial < 2000; ++trial)
  {
    const int n = 1 + static_cast<int>(rng.below(16));
    const auto params = random_gop(n, rng);
    std::vector<double> tau(static_cast<std::size_t>(n));
    for (auto& x : tau)
    {
      x = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
    }
    const auto t = vm::total_distortion(params, tau);
    for (int k = 1; k <= n; ++k)
    {
      ASSERT_NEAR(t[static_cast<std::size_t>(k - 1)], brute_force_total(params, tau, k), 1e-12);
    }
  }
}

TEST(total_distortion_test, monotone_in_every_loss_rate)
{
  splitmix64 rng{42};
  constexpr double step = 1e-4;
  for (int trial = 0; trial < 500; ++trial)
  {
    const int n = 1 + static_cast<int>(rng.below(16));
    const auto params = random_gop(n, rng);
    std::vector<double> tau(static_cast<std::size_t>(n));
    for (auto& x : tau)
    {
      x = rng.uniform() * (1.0 - step);
    }
    const auto base = vm::total_distortion(params, tau);
    for (int i = 0; i < n; ++i)
    {
      auto bumped = tau;
      bumped[static_cast<std::size_t>(i)] += step;
      const auto t = vm::total_distortion(params, bumped);
      for (int k = i; k < n; ++k)
      {
        EXPECT_GE(t[static_cast<std::size_t>(k)] - base[static_cast<std::size_t>(k)], 0.0);
      }
      for (int k = 0; k < n; ++k)
      {
        EXPECT_GE(t[static_cast<std::size_t>(k)], params[static_cast<std::size_t>(k)].theta_full +
                                                      params[static_cast<std::size_t>(k)].eta - 1e-12);
      }
    }
  }
}

TEST(total_distortion_test, rejects_misordered_input)
{
  splitmix64 rng{43};
  auto params = random_gop(3, rng);
  std::swap(params[1], params[2]);
  const std::vector<double> tau(3, 0.0);
  EXPECT_THROW(vm::total_distortion(params, tau), jdafc::parameter_error);
  EXPECT_THROW(vm::total_distortion(params, std::vector<double>(2, 0.0)), jdafc::parameter_error);
}

TEST(psnr_test, examples)
{
  EXPECT_NEAR(vm::psnr_of_mse(255.0 * 255.0), 0.0, 1e-12);
  EXPECT_NEAR(vm::psnr_of_mse(65.025), 30.0, 1e-12);
  const std::vector<double> t{60.0, 70.05};
  EXPECT_NEAR(vm::gop_psnr(t), 30.0, 1e-12);
  EXPECT_THROW(vm::gop_psnr(std::vector<double>{}), jdafc::parameter_error);
  EXPECT_THROW(vm::gop_psnr(std::vector<double>{-1.0}), jdafc::parameter_error);
}

TEST(psnr_test, strictly_decreasing_in_mse)
{
  double prev = vm::psnr_of_mse(1e-3);
  for (double mse = 2e-3; mse < 1e5; mse *= 1.37)
  {
    const double p = vm::psnr_of_mse(mse);
    EXPECT_LT(p, prev);
    prev = p;
  }
}

TEST(synth_params_test, deterministic_and_valid)
{
  const auto a = vm::synth_params(8, "low_motion", 5);
  const auto b = vm::synth_params(8, "low_motion", 5);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, vm::synth_params(8, "low_motion", 6));
  for (const auto& p : a)
  {
    EXPECT_NO_THROW(p.validate());
  }
  EXPECT_TRUE(a[0].mu.empty());
  EXPECT_EQ(a[0].eta, 0.0);
  EXPECT_THROW(vm::synth_params(8, "cartoon", 5), jdafc::parameter_error);
  EXPECT_THROW(vm::synth_params(0, "low_motion", 5), jdafc::parameter_error);
}

TEST(synth_params_test, high_motion_costs_more)
{
  double low = 0.0;
  double high = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s)
  {
    for (const auto& p : vm::synth_params(8, "low_motion", s))
    {
      low += p.theta_slope;
    }
    for (const auto& p : vm::synth_params(8, "high_motion", s))
    {
      high += p.theta_slope;
    }
  }
  EXPECT_GT(high, low);
}

TEST(synth_params_test, matches_golden_fixture)
{
  std::ifstream in{data_dir / "golden" / "distortion_low_motion_seed7.json"};
  ASSERT_TRUE(in);
  nlohmann::json j;
  in >> j;
  EXPECT_EQ(vm::params_from_json(j), vm::synth_params(8, "low_motion", 7));
}

TEST(params_json_test, round_trip_and_errors)
{
  const auto p = vm::synth_params(6, "high_motion", 9);
  EXPECT_EQ(vm::params_from_json(vm::params_to_json(p)), p);
  auto j = vm::params_to_json(p);
  j["gop_size"] = 7;
  EXPECT_THROW(vm::params_from_json(j), jdafc::config_error);
  auto k = vm::params_to_json(p);
  k["frames"][3]["mu"][0]["i"] = 1;
  EXPECT_THROW(vm::params_from_json(k), jdafc::parameter_error);
}

TEST(video_config_test, cbr_frame_sizes)
{
  vm::video_config cfg;
  EXPECT_DOUBLE_EQ(cfg.frame_budget_bytes(), 4000.0 * 125.0 / 30.0);
  const auto sizes = vm::frame_sizes(cfg);
  ASSERT_EQ(sizes.size(), 8u);
  std::size_t total = 0;
  for (const auto s : sizes)
  {
    total += s;
  }
  EXPECT_NEAR(static_cast<double>(total), cfg.frame_budget_bytes() * 8, 1000.0);
  EXPECT_GT(sizes[0], sizes[1]);
}

TEST(video_config_test, gop_deadlines)
{
  vm::video_config cfg;
  const auto g = vm::make_gop(cfg, 3, vm::synth_params(8, "low_motion", 1), 250.0);
  EXPECT_DOUBLE_EQ(g.ready_ms, 800.0);
  for (std::size_t i = 0; i < g.frames.size(); ++i)
  {
    EXPECT_NEAR(g.frames[i].deadline_ms, 800.0 + 250.0 + static_cast<double>(i) * 1000.0 / 30.0, 1e-9);
    if (i > 0)
    {
      EXPECT_GT(g.frames[i].deadline_ms, g.frames[i - 1].deadline_ms);
    }
  }
  EXPECT_THROW(vm::make_gop(cfg, 0, vm::synth_params(4, "low_motion", 1), 250.0), jdafc::parameter_error);
}

TEST(video_config_test, validation)
{
  vm::video_config cfg;
  cfg.num_frames = 3001;
  EXPECT_THROW(cfg.validate(), jdafc::parameter_error);
  cfg.num_frames = 3000;
  cfg.fps = 0.0;
  EXPECT_THROW(cfg.validate(), jdafc::parameter_error);
  cfg.fps = 30.0;
  cfg.i_frame_weight = 0.5;
  EXPECT_THROW(cfg.validate(), jdafc::parameter_error);
}
