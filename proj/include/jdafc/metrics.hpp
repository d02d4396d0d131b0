#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/video_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jdafc::sim {

/// What the client observed for one GoP.
struct gop_record
{
  video::gop_descriptor gop;
  std::optional<double> decoded_ms;  // block fully recovered
  std::vector<int> dropped_frames;   // shed by the sender
  std::size_t symbols_sent = 0;
  std::size_t symbols_received = 0;
  std::uint64_t block_seed = 0;  // fountain block seed, coded GoPs only
  bool sent = false;
};

struct frame_outcome
{
  int gop_id = 0;
  int index = 1;
  double ready_ms = 0.0;
  double deadline_ms = 0.0;
  std::optional<double> released_ms;
  bool dropped = false;
  bool on_time = false;

  std::optional<double>
  delay_ms()
  const
  {
    if (!released_ms || dropped)
    {
      return std::nullopt;
    }
    return *released_ms - ready_ms;
  }
};

struct cdf_point
{
  double delay_ms;
  double fraction;
};

struct run_metrics
{
  std::vector<frame_outcome> frames;
  std::vector<double> gop_psnr_db;
  double mean_psnr_db = 0.0;
  double psnr_stddev_db = 0.0;
  double mean_delay_ms = 0.0;
  double effective_loss_rate = 0.0;
  std::map<int, double> miss_ratio;  // deadline D ms -> fraction of frames not released within D
  std::vector<cdf_point> delay_cdf;
  std::size_t failed_gops = 0;
};

/// Release times with in-order resequencing across GoPs: a GoP is handed to playback once it is
/// decoded and its predecessor has been released or abandoned (at the predecessor's last deadline).
inline std::vector<std::optional<double>>
release_times(const std::vector<gop_record>& gops)
{
  std::vector<std::optional<double>> out(gops.size());
  double blocker = 0.0;
  for (std::size_t g = 0; g < gops.size(); ++g)
  {
    const auto& rec = gops[g];
    const double give_up = rec.gop.last_deadline_ms();
    if (rec.decoded_ms)
    {
      out[g] = std::max(*rec.decoded_ms, blocker);
      blocker = std::min(*out[g], give_up);
    }
    else
    {
      blocker = std::max(blocker, give_up);
    }
  }
  return out;
}

inline double
cdf_step_ms()
noexcept
{
  return 5.0;
}

/// Frame delays, distortions, PSNR and the loss/deadline aggregates of one run.
/// A frame counts as lost (tau = 1) if it was dropped, never released, or released after its
/// playout deadline.
inline run_metrics
compute_metrics(const std::vector<gop_record>& gops, const std::vector<int>& miss_deadlines_ms)
{
  run_metrics m;
  const auto releases = release_times(gops);
  std::vector<double> delays;
  std::size_t lost = 0;
  std::vector<std::pair<double, bool>> delay_or_miss;  // (delay, released)

  for (std::size_t g = 0; g < gops.size(); ++g)
  {
    const auto& rec = gops[g];
    std::vector<double> tau;
    tau.reserve(rec.gop.frames.size());
    for (const auto& f : rec.gop.frames)
    {
      frame_outcome o;
      o.gop_id = rec.gop.gop_id;
      o.index = f.index;
      o.ready_ms = rec.gop.ready_ms;
      o.deadline_ms = f.deadline_ms;
      o.dropped = std::find(rec.dropped_frames.begin(), rec.dropped_frames.end(), f.index) !=
                  rec.dropped_frames.end();
      o.released_ms = releases[g];
      o.on_time = !o.dropped && o.released_ms && *o.released_ms <= f.deadline_ms;
      tau.push_back(o.on_time ? 0.0 : 1.0);
      if (!o.on_time)
      {
        ++lost;
      }
      if (const auto d = o.delay_ms())
      {
        delays.push_back(*d);
        delay_or_miss.emplace_back(*d, true);
      }
      else
      {
        delay_or_miss.emplace_back(0.0, false);
      }
      m.frames.push_back(o);
    }
    if (!rec.decoded_ms)
    {
      ++m.failed_gops;
    }
    const auto params = rec.gop.params();
    m.gop_psnr_db.push_back(video::gop_psnr(video::total_distortion(params, tau)));
  }

  const auto frames = static_cast<double>(m.frames.size());
  if (!m.gop_psnr_db.empty())
  {
    double sum = 0.0;
    for (const double p : m.gop_psnr_db)
    {
      sum += p;
    }
    m.mean_psnr_db = sum / static_cast<double>(m.gop_psnr_db.size());
    double var = 0.0;
    for (const double p : m.gop_psnr_db)
    {
      var += (p - m.mean_psnr_db) * (p - m.mean_psnr_db);
    }
    m.psnr_stddev_db = std::sqrt(var / static_cast<double>(m.gop_psnr_db.size()));
  }
  m.effective_loss_rate = frames > 0 ? static_cast<double>(lost) / frames : 0.0;

  for (const int d : miss_deadlines_ms)
  {
    std::size_t miss = 0;
    for (const auto& [delay, released] : delay_or_miss)
    {
      if (!released || delay > static_cast<double>(d))
      {
        ++miss;
      }
    }
    m.miss_ratio[d] = frames > 0 ? static_cast<double>(miss) / frames : 0.0;
  }

  if (!delays.empty())
  {
    double sum = 0.0;
    for (const double d : delays)
    {
      sum += d;
    }
    m.mean_delay_ms = sum / static_cast<double>(delays.size());
    std::sort(delays.begin(), delays.end());
    const double step = cdf_step_ms();
    const double top = std::ceil(delays.back() / step) * step;
    std::size_t below = 0;
    for (double x = 0.0; x <= top + 1e-9; x += step)
    {
      while (below < delays.size() && delays[below] <= x)
      {
        ++below;
      }
      m.delay_cdf.push_back({x, static_cast<double>(below) / static_cast<double>(delays.size())});
    }
  }
  return m;
}

inline nlohmann::json
to_json(const run_metrics& m)
{
  nlohmann::json miss = nlohmann::json::object();
  for (const auto& [d, r] : m.miss_ratio)
  {
    miss[std::to_string(d)] = r;
  }
  return {{"mean_psnr_db", m.mean_psnr_db},
          {"psnr_stddev_db", m.psnr_stddev_db},
          {"mean_delay_ms", m.mean_delay_ms},
          {"effective_loss_rate", m.effective_loss_rate},
          {"miss_ratio", miss},
          {"frames", m.frames.size()},
          {"gops", m.gop_psnr_db.size()},
          {"failed_gops", m.failed_gops}};
}

} // namespace jdafc::sim
