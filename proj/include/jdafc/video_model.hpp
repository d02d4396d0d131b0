#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jdafc::video {

/*------------------------------------------------------------------------------------------------*/

/// Distortion-model coefficients of one frame, all in MSE units.
/// Frame indices are 1-based; frame 1 is the GoP's I-frame.
struct frame_params
{
  int n = 1;
  double theta_full = 0.0;   // distortion with every packet of the frame received
  double theta_slope = 0.0;  // extra distortion per unit of effective loss
  double eta = 0.0;          // drift base, ignored for n = 1
  std::vector<std::pair<int, double>> mu;  // drift coefficients (i, mu_{n,i}) for 1 < i < n

  double
  mu_at(int i)
  const noexcept
  {
    for (const auto& [idx, v] : mu)
    {
      if (idx == i)
      {
        return v;
      }
    }
    return 0.0;
  }

  void
  validate()
  const
  {
    if (n < 1)
    {
      throw parameter_error{"frame index must be at least 1"};
    }
    if (theta_full < 0.0 || theta_slope < 0.0 || eta < 0.0)
    {
      throw parameter_error{"frame " + std::to_string(n) + ": negative distortion coefficient"};
    }
    for (const auto& [i, v] : mu)
    {
      if (i <= 1 || i >= n)
      {
        throw parameter_error{"frame " + std::to_string(n) + ": drift coefficient index " +
                              std::to_string(i) + " outside 1 < i < n"};
      }
      if (v < 0.0)
      {
        throw parameter_error{"frame " + std::to_string(n) + ": negative drift coefficient"};
      }
    }
  }

  friend bool operator==(const frame_params&, const frame_params&) = default;
};

/// h_n = theta'_n + tau_n * theta_n.
inline double
truncation_distortion(const frame_params& params, double tau)
{
  if (!(tau >= 0.0 && tau <= 1.0))
  {
    throw parameter_error{"effective loss rate must be in [0, 1]"};
  }
  return params.theta_full + tau * params.theta_slope;
}

/// d_n = eta_n + sum over 1 < i < n of mu_{n,i} * h_i, and d_1 = 0.
/// `h` holds the truncation distortions h_1 .. h_{n-1} (extra entries are ignored).
inline double
drifting_distortion(std::span<const double> h, const frame_params& params)
{
  if (params.n == 1)
  {
    return 0.0;
  }
  if (h.size() < static_cast<std::size_t>(params.n - 1))
  {
    throw parameter_error{"drift of frame " + std::to_string(params.n) +
                          " needs truncation distortion of every earlier frame"};
  }
  double d = params.eta;
  for (const auto& [i, v] : params.mu)
  {
    if (i > 1 && i < params.n)
    {
      d += v * h[static_cast<std::size_t>(i - 1)];
    }
  }
  return d;
}

/// t_n = h_n + d_n for every frame of a GoP, in frame order.
inline std::vector<double>
total_distortion(std::span<const frame_params> params, std::span<const double> tau)
{
  if (params.size() != tau.size())
  {
    throw parameter_error{"one effective loss rate per frame required"};
  }
  std::vector<double> h(params.size());
  std::vector<double> t(params.size());
  for (std::size_t k = 0; k < params.size(); ++k)
  {
    if (params[k].n != static_cast<int>(k) + 1)
    {
      throw parameter_error{"frame parameters must be ordered 1..N"};
    }
    h[k] = truncation_distortion(params[k], tau[k]);
    t[k] = h[k] + drifting_distortion(std::span<const double>{h}.first(k), params[k]);
  }
  return t;
}

inline constexpr double peak_signal = 255.0;
inline constexpr double mse_floor = 1e-10;

/// PSNR in dB of a mean squared error, with the MSE floored at mse_floor.
inline double
psnr_of_mse(double mse)
noexcept
{
  return 10.0 * std::log10(peak_signal * peak_signal / std::max(mse, mse_floor));
}

inline double
gop_psnr(std::span<const double> total_distortions)
{
  if (total_distortions.empty())
  {
    throw parameter_error{"PSNR of an empty GoP"};
  }
  for (const double t : total_distortions)
  {
    if (t < 0.0)
    {
      throw parameter_error{"negative distortion"};
    }
  }
  const double mean = std::accumulate(total_distortions.begin(), total_distortions.end(), 0.0) /
                      static_cast<double>(total_distortions.size());
  return psnr_of_mse(mean);
}

/*------------------------------------------------------------------------------------------------*/

/// Synthetic coefficients standing in for values estimated from real sequences.
///
/// Ranges (U = uniform):
///   low_motion:  theta' U[8,12], I slope U[600,900], P slope U[150,300], eta U[0.5,1.5],
///                mu_{n,i} = 0.6 * 0.7^(n-i-1) * U[0.9,1.1]
///   high_motion: theta' U[14,20], I slope U[1200,1800], P slope U[350,600], eta U[1,3],
///                mu_{n,i} = 0.8 * 0.85^(n-i-1) * U[0.9,1.1]
inline std::vector<frame_params>
synth_params(int gop_size, std::string_view profile_name, std::uint64_t seed)
{
  struct ranges
  {
    double full_lo, full_hi, i_lo, i_hi, p_lo, p_hi, eta_lo, eta_hi, mu_base, mu_decay;
  };
  ranges r{};
  if (profile_name == "low_motion")
  {
    r = {8.0, 12.0, 600.0, 900.0, 150.0, 300.0, 0.5, 1.5, 0.6, 0.7};
  }
  else if (profile_name == "high_motion")
  {
    r = {14.0, 20.0, 1200.0, 1800.0, 350.0, 600.0, 1.0, 3.0, 0.8, 0.85};
  }
  else
  {
    throw parameter_error{"unknown distortion profile '" + std::string{profile_name} + "'"};
  }
  if (gop_size < 1)
  {
    throw parameter_error{"gop_size must be at least 1"};
  }

  splitmix64 rng{seed};
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };

  std::vector<frame_params> out;
  out.reserve(static_cast<std::size_t>(gop_size));
  for (int n = 1; n <= gop_size; ++n)
  {
    frame_params p;
    p.n = n;
    p.theta_full = uniform(r.full_lo, r.full_hi);
    p.theta_slope = n == 1 ? uniform(r.i_lo, r.i_hi) : uniform(r.p_lo, r.p_hi);
    p.eta = n == 1 ? 0.0 : uniform(r.eta_lo, r.eta_hi);
    for (int i = 2; i < n; ++i)
    {
      p.mu.emplace_back(i, r.mu_base * std::pow(r.mu_decay, n - i - 1) * uniform(0.9, 1.1));
    }
    out.push_back(std::move(p));
  }
  return out;
}

inline nlohmann::json
params_to_json(std::span<const frame_params> params)
{
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& p : params)
  {
    nlohmann::json mu = nlohmann::json::array();
    for (const auto& [i, v] : p.mu)
    {
      mu.push_back({{"i", i}, {"value", v}});
    }
    frames.push_back({{"n", p.n},
                      {"theta_full", p.theta_full},
                      {"theta_slope", p.theta_slope},
                      {"eta", p.eta},
                      {"mu", mu}});
  }
  return {{"gop_size", params.size()}, {"frames", frames}};
}

inline std::vector<frame_params>
params_from_json(const nlohmann::json& j)
{
  std::vector<frame_params> out;
  try
  {
    const auto gop_size = j.at("gop_size").get<std::size_t>();
    for (const auto& f : j.at("frames"))
    {
      frame_params p;
      p.n = f.at("n").get<int>();
      p.theta_full = f.at("theta_full").get<double>();
      p.theta_slope = f.at("theta_slope").get<double>();
      p.eta = f.at("eta").get<double>();
      for (const auto& m : f.at("mu"))
      {
        p.mu.emplace_back(m.at("i").get<int>(), m.at("value").get<double>());
      }
      p.validate();
      out.push_back(std::move(p));
    }
    if (out.size() != gop_size)
    {
      throw config_error{"distortion fixture: gop_size disagrees with the frame list"};
    }
  }
  catch (const nlohmann::json::exception& e)
  {
    throw config_error{std::string{"distortion fixture: "} + e.what()};
  }
  return out;
}

/*------------------------------------------------------------------------------------------------*/

/// Constant-bit-rate stream with IP...P GoPs.
struct video_config
{
  double encoding_rate_kbps = 4000.0;
  double fps = 30.0;
  int gop_size = 8;
  int num_frames = 3000;
  std::string distortion_profile = "low_motion";
  /// Size of the I-frame relative to a P-frame.
  double i_frame_weight = 3.0;

  void
  validate()
  const
  {
    if (!(encoding_rate_kbps > 0.0) || !(fps > 0.0))
    {
      throw parameter_error{"video encoding rate and fps must be positive"};
    }
    if (gop_size < 1)
    {
      throw parameter_error{"gop_size must be at least 1"};
    }
    if (num_frames < gop_size || num_frames % gop_size != 0)
    {
      throw parameter_error{"num_frames must be a positive multiple of gop_size"};
    }
    if (!(i_frame_weight >= 1.0))
    {
      throw parameter_error{"i_frame_weight must be at least 1"};
    }
  }

  int num_gops() const noexcept { return num_frames / gop_size; }
  double frame_interval_ms() const noexcept { return 1000.0 / fps; }
  double gop_duration_ms() const noexcept { return gop_size * frame_interval_ms(); }

  /// Average CBR frame budget, gamma / (8 * fps) kilobytes, in bytes.
  double frame_budget_bytes() const noexcept { return encoding_rate_kbps * 125.0 / fps; }
};

struct frame_desc
{
  int index = 1;
  std::size_t size_bytes = 0;
  double deadline_ms = 0.0;
  frame_params params;
};

/// One GoP as handed to the sender at ready_ms. Frame n plays out at
/// ready_ms + delay_ms + (n - 1) / fps.
struct gop_descriptor
{
  int gop_id = 0;
  double ready_ms = 0.0;
  std::vector<frame_desc> frames;

  std::size_t
  total_bytes()
  const noexcept
  {
    std::size_t s = 0;
    for (const auto& f : frames)
    {
      s += f.size_bytes;
    }
    return s;
  }

  std::vector<frame_params>
  params()
  const
  {
    std::vector<frame_params> out;
    out.reserve(frames.size());
    for (const auto& f : frames)
    {
      out.push_back(f.params);
    }
    return out;
  }

  double last_deadline_ms() const noexcept { return frames.empty() ? ready_ms : frames.back().deadline_ms; }
};

/// Frame sizes of one GoP: I-frame weighted, the total rounded to the CBR budget.
inline std::vector<std::size_t>
frame_sizes(const video_config& cfg)
{
  const auto n = static_cast<std::size_t>(cfg.gop_size);
  const double total = std::round(cfg.frame_budget_bytes() * cfg.gop_size);
  const double unit = total / (cfg.i_frame_weight + static_cast<double>(n - 1));
  std::vector<std::size_t> sizes(n);
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double w = i == 0 ? cfg.i_frame_weight : 1.0;
    sizes[i] = static_cast<std::size_t>(std::floor(unit * w));
    assigned += sizes[i];
  }
  sizes[0] += static_cast<std::size_t>(total) - assigned;
  return sizes;
}

inline gop_descriptor
make_gop(const video_config& cfg, int gop_id, std::vector<frame_params> params, double delay_ms)
{
  if (params.size() != static_cast<std::size_t>(cfg.gop_size))
  {
    throw parameter_error{"one parameter set per frame of the GoP required"};
  }
  const auto sizes = frame_sizes(cfg);
  gop_descriptor g;
  g.gop_id = gop_id;
  g.ready_ms = gop_id * cfg.gop_duration_ms();
  for (int n = 1; n <= cfg.gop_size; ++n)
  {
    frame_desc f;
    f.index = n;
    f.size_bytes = sizes[static_cast<std::size_t>(n - 1)];
    f.deadline_ms = g.ready_ms + delay_ms + (n - 1) * cfg.frame_interval_ms();
    f.params = std::move(params[static_cast<std::size_t>(n - 1)]);
    g.frames.push_back(std::move(f));
  }
  return g;
}

} // namespace jdafc::video
