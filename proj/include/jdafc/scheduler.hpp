#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/fountain_codec.hpp"
#include "jdafc/overhead_profile.hpp"
#include "jdafc/video_model.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace jdafc::sched {

/// What the server currently believes about a path, built from client feedback.
struct path_status
{
  std::string path_id;
  double est_bandwidth_kbps = 0.0;
  double est_loss_rate = 0.0;
  double est_delay_ms = 0.0;
  double queue_backlog_bytes = 0.0;
  double last_report_time_ms = 0.0;

  double loss_free_bandwidth_kbps() const noexcept { return est_bandwidth_kbps * (1.0 - est_loss_rate); }

  /// Stale once no report has arrived for three feedback intervals.
  bool
  stale(double now_ms, double feedback_interval_ms)
  const noexcept
  {
    return now_ms - last_report_time_ms > 3.0 * feedback_interval_ms;
  }
};

struct reliability_score
{
  std::string path_id;
  double availability = 0.0;
  double imbalance = 0.0;
  bool eligible = false;
  bool stale = false;
  double loss_free_bandwidth_kbps = 0.0;
};

struct scheduler_config
{
  double deadline_ms = 250.0;
  double feedback_interval_ms = 100.0;
  double availability_floor = 0.3;
  double imbalance_ceiling = 1.0;
  std::size_t symbol_size = 1000;
  /// On-the-wire size of one symbol: payload plus the encoding-symbol header.
  std::size_t packet_bytes = 1000 + fountain::wire_header_size;
  fountain::overhead_profile profile;
  /// DMP: a path counts as blocked once its backlog exceeds this many deadlines' worth of bytes.
  double dmp_block_factor = 1.0;

  double packet_bits() const noexcept { return static_cast<double>(packet_bytes) * 8.0; }
};

/*------------------------------------------------------------------------------------------------*/

/// availability = (1 - loss) * min(1, deadline / (delay + GoP serialization time));
/// imbalance = backlog / (bandwidth * deadline / 8). Sorted by availability, best first.
inline std::vector<reliability_score>
score_paths(std::span<const path_status> statuses, double gop_bytes, double now_ms,
            const scheduler_config& cfg)
{
  std::vector<reliability_score> out;
  out.reserve(statuses.size());
  for (const auto& s : statuses)
  {
    reliability_score r;
    r.path_id = s.path_id;
    r.stale = s.stale(now_ms, cfg.feedback_interval_ms);
    r.loss_free_bandwidth_kbps = s.loss_free_bandwidth_kbps();
    if (s.est_bandwidth_kbps > 0.0)
    {
      const double serialization = gop_bytes * 8.0 / s.est_bandwidth_kbps;
      const double reach = s.est_delay_ms + serialization;
      const double feasibility = reach > 0.0 ? std::min(1.0, cfg.deadline_ms / reach) : 1.0;
      r.availability = (1.0 - s.est_loss_rate) * feasibility;
      r.imbalance = s.queue_backlog_bytes / (s.est_bandwidth_kbps * cfg.deadline_ms / 8.0);
    }
    else
    {
      r.availability = 0.0;
      r.imbalance = std::numeric_limits<double>::infinity();
    }
    r.eligible = !r.stale && r.availability >= cfg.availability_floor &&
                 r.imbalance <= cfg.imbalance_ceiling;
    out.push_back(std::move(r));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.availability != b.availability)
    {
      return a.availability > b.availability;
    }
    if (a.loss_free_bandwidth_kbps != b.loss_free_bandwidth_kbps)
    {
      return a.loss_free_bandwidth_kbps > b.loss_free_bandwidth_kbps;
    }
    return a.path_id < b.path_id;
  });
  return out;
}

/*------------------------------------------------------------------------------------------------*/

struct rate_split
{
  std::map<std::string, double> rate_kbps;
  /// Part of the requested total that did not fit under the per-path caps.
  double unplaced_kbps = 0.0;
};

/// Splits total_rate_kbps over `paths` in proportion to loss-free bandwidth, capping each path at
/// its estimated bandwidth and re-spreading the overflow (water-filling).
inline rate_split
allocate_rates(std::span<const path_status> paths, double total_rate_kbps)
{
  if (paths.empty())
  {
    throw parameter_error{"rate allocation needs at least one path"};
  }
  rate_split out;
  std::vector<std::size_t> open(paths.size());
  std::iota(open.begin(), open.end(), 0);
  double remaining = total_rate_kbps;
  for (const auto& p : paths)
  {
    out.rate_kbps[p.path_id] = 0.0;
  }

  while (!open.empty() && remaining > 0.0)
  {
    double weight_sum = 0.0;
    for (const auto i : open)
    {
      weight_sum += paths[i].loss_free_bandwidth_kbps();
    }
    if (!(weight_sum > 0.0))
    {
      break;
    }
    std::vector<std::size_t> capped;
    for (const auto i : open)
    {
      const double share = remaining * paths[i].loss_free_bandwidth_kbps() / weight_sum;
      if (share > paths[i].est_bandwidth_kbps)
      {
        capped.push_back(i);
      }
    }
    if (capped.empty())
    {
      for (const auto i : open)
      {
        out.rate_kbps[paths[i].path_id] = remaining * paths[i].loss_free_bandwidth_kbps() / weight_sum;
      }
      remaining = 0.0;
      break;
    }
    for (const auto i : capped)
    {
      out.rate_kbps[paths[i].path_id] = paths[i].est_bandwidth_kbps;
      remaining -= paths[i].est_bandwidth_kbps;
      std::erase(open, i);
    }
  }
  out.unplaced_kbps = std::max(0.0, remaining);
  return out;
}

/*------------------------------------------------------------------------------------------------*/

struct fountain_params
{
  std::size_t m = 0;         // source symbols
  std::size_t required = 0;  // m' = (1 + psi(m)) m
  std::size_t n = 0;         // encoding symbols to emit
  double r = 1.0;
};

/// m = ceil(gop_bytes / symbol_size); n = ceil(m' / (1 - loss)); r = m / n.
inline fountain_params
choose_fountain_params(std::size_t gop_bytes, std::size_t symbol_size, double aggregate_loss_rate,
                       const fountain::overhead_profile& profile)
{
  if (!(aggregate_loss_rate >= 0.0 && aggregate_loss_rate < 1.0))
  {
    throw parameter_error{"aggregate loss rate must be in [0, 1)"};
  }
  if (symbol_size == 0)
  {
    throw parameter_error{"symbol size must be positive"};
  }
  fountain_params f;
  f.m = std::max<std::size_t>(1, (gop_bytes + symbol_size - 1) / symbol_size);
  f.required = fountain::required_symbols(f.m, profile);
  f.n = static_cast<std::size_t>(
      std::ceil(static_cast<double>(f.required) / (1.0 - aggregate_loss_rate) - 1e-9));
  f.n = std::max(f.n, f.required);
  f.r = fountain::code_rate(f.m, f.n);
  return f;
}

/*------------------------------------------------------------------------------------------------*/

struct drop_result
{
  std::vector<int> dropped;  // frame indices in drop order
  std::size_t freed_bytes = 0;
  bool feasible = true;
};

/// Increase of the GoP's summed distortion when frame `index` is lost (tau = 1), all other frames
/// received. Linear in tau, so independent of which other frames are already dropped.
inline double
drop_impact(const video::gop_descriptor& gop, int index)
{
  const auto& f = gop.frames.at(static_cast<std::size_t>(index - 1));
  double impact = f.params.theta_slope;
  for (const auto& later : gop.frames)
  {
    if (later.index > index)
    {
      impact += later.params.mu_at(index) * f.params.theta_slope;
    }
  }
  return impact;
}

/// Greedily drops the P-frames whose loss adds the least distortion until deficit_bytes are freed.
/// The I-frame is never dropped; if all P-frames are not enough the result is infeasible.
inline drop_result
drop_frames(const video::gop_descriptor& gop, std::size_t deficit_bytes)
{
  drop_result out;
  if (deficit_bytes == 0)
  {
    return out;
  }
  std::vector<std::pair<double, int>> order;
  for (const auto& f : gop.frames)
  {
    if (f.index != 1)
    {
      order.emplace_back(drop_impact(gop, f.index), f.index);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first)
    {
      return a.first < b.first;
    }
    return a.second > b.second;
  });
  for (const auto& [impact, index] : order)
  {
    if (out.freed_bytes >= deficit_bytes)
    {
      break;
    }
    out.dropped.push_back(index);
    out.freed_bytes += gop.frames[static_cast<std::size_t>(index - 1)].size_bytes;
  }
  out.feasible = out.freed_bytes >= deficit_bytes;
  return out;
}

/*------------------------------------------------------------------------------------------------*/

/// Per-GoP output of a scheduler.
struct allocation_plan
{
  int gop_id = 0;
  std::string scheme;
  std::vector<std::string> selected_paths;
  std::map<std::string, double> per_path_rate_kbps;
  std::map<std::string, std::size_t> per_path_symbols;
  std::size_t fountain_m = 0;
  std::size_t fountain_required = 0;
  std::size_t fountain_n = 0;
  double code_rate = 1.0;
  std::vector<int> dropped_frames;
  std::size_t source_bytes = 0;
  double total_rate_kbps = 0.0;
  double aggregate_loss_rate = 0.0;
  bool coded = true;
  bool feasible = true;
  double deficit_kbps = 0.0;

  bool sends() const noexcept { return !selected_paths.empty() && fountain_n > 0; }
};

inline nlohmann::json
to_json(const allocation_plan& p)
{
  nlohmann::json rates = nlohmann::json::object();
  for (const auto& [id, r] : p.per_path_rate_kbps)
  {
    rates[id] = r;
  }
  nlohmann::json symbols = nlohmann::json::object();
  for (const auto& [id, s] : p.per_path_symbols)
  {
    symbols[id] = s;
  }
  return {{"gop_id", p.gop_id},
          {"scheme", p.scheme},
          {"selected_paths", p.selected_paths},
          {"rates", rates},
          {"symbols", symbols},
          {"m", p.fountain_m},
          {"n", p.fountain_n},
          {"r", p.code_rate},
          {"dropped_frames", p.dropped_frames},
          {"feasible", p.feasible}};
}

/// Symbol counts proportional to the per-path rates, largest remainder, summing to n.
inline std::map<std::string, std::size_t>
split_symbols(const std::map<std::string, double>& rates, std::size_t n)
{
  std::map<std::string, std::size_t> out;
  double total = 0.0;
  for (const auto& [id, r] : rates)
  {
    total += r;
  }
  if (!(total > 0.0))
  {
    return out;
  }
  std::vector<std::tuple<double, std::string>> remainders;
  std::size_t assigned = 0;
  for (const auto& [id, r] : rates)
  {
    const double exact = static_cast<double>(n) * r / total;
    const auto whole = static_cast<std::size_t>(std::floor(exact));
    out[id] = whole;
    assigned += whole;
    remainders.emplace_back(exact - static_cast<double>(whole), id);
  }
  std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) > std::get<0>(b);
  });
  for (std::size_t i = 0; assigned < n; ++i, ++assigned)
  {
    ++out[std::get<1>(remainders[i % remainders.size()])];
  }
  return out;
}

namespace detail {

inline std::vector<path_status>
pick(std::span<const path_status> statuses, const std::vector<std::string>& ids)
{
  std::vector<path_status> out;
  for (const auto& id : ids)
  {
    for (const auto& s : statuses)
    {
      if (s.path_id == id)
      {
        out.push_back(s);
      }
    }
  }
  return out;
}

inline double
weighted_loss(std::span<const path_status> paths, const std::map<std::string, double>& rates)
{
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : paths)
  {
    const double r = rates.at(p.path_id);
    num += r * p.est_loss_rate;
    den += r;
  }
  return den > 0.0 ? num / den : 0.0;
}

/// Largest source size (bytes) whose m' symbols fit the loss-free capacity within the deadline.
inline std::size_t
max_source_bytes(double loss_free_kbps, const scheduler_config& cfg)
{
  const auto budget = static_cast<std::size_t>(std::floor(loss_free_kbps * cfg.deadline_ms / cfg.packet_bits()));
  std::size_t m = 0;
  while (m + 1 <= budget && fountain::required_symbols(m + 1, cfg.profile) <= budget)
  {
    ++m;
  }
  return m * cfg.symbol_size;
}

} // namespace detail

/// Fountain sizing plus water-filled rate split over `selected`, knowing the code rate if fixed.
/// Iterates because the aggregate loss (rate-weighted) depends on the split when caps bind.
inline void
size_and_split(allocation_plan& plan, std::span<const path_status> selected, std::size_t source_bytes,
               const scheduler_config& cfg, std::optional<double> fixed_code_rate = std::nullopt)
{
  plan.source_bytes = source_bytes;
  std::map<std::string, double> rates;
  double total_lfb = 0.0;
  for (const auto& p : selected)
  {
    total_lfb += p.loss_free_bandwidth_kbps();
  }
  for (const auto& p : selected)
  {
    rates[p.path_id] = total_lfb > 0.0 ? p.loss_free_bandwidth_kbps() / total_lfb : 0.0;
  }

  fountain_params f;
  rate_split split;
  for (int iter = 0; iter < 8; ++iter)
  {
    const double loss = detail::weighted_loss(selected, rates);
    f = choose_fountain_params(source_bytes, cfg.symbol_size, std::min(loss, 0.99), cfg.profile);
    if (fixed_code_rate)
    {
      f.n = std::max<std::size_t>(
          f.m, static_cast<std::size_t>(std::ceil(static_cast<double>(f.m) / *fixed_code_rate - 1e-9)));
      f.r = fountain::code_rate(f.m, f.n);
    }
    const double total = static_cast<double>(f.n) * cfg.packet_bits() / cfg.deadline_ms;
    split = allocate_rates(selected, total);
    plan.aggregate_loss_rate = loss;
    if (split.rate_kbps == rates)
    {
      break;
    }
    rates = split.rate_kbps;
  }

  plan.fountain_m = f.m;
  plan.fountain_required = f.required;
  plan.fountain_n = f.n;
  plan.code_rate = f.r;
  plan.per_path_rate_kbps.clear();
  plan.selected_paths.clear();
  plan.total_rate_kbps = 0.0;
  for (const auto& p : selected)
  {
    const double r = split.rate_kbps.at(p.path_id);
    if (r > 0.0)
    {
      plan.selected_paths.push_back(p.path_id);
      plan.per_path_rate_kbps[p.path_id] = r;
      plan.total_rate_kbps += r;
    }
  }
  plan.per_path_symbols = split_symbols(plan.per_path_rate_kbps, plan.fountain_n);

  const double min_rate = static_cast<double>(f.required) * cfg.packet_bits() / cfg.deadline_ms;
  plan.deficit_kbps = std::max(min_rate - total_lfb, split.unplaced_kbps);
  plan.feasible = plan.deficit_kbps <= 0.0;
}

/*------------------------------------------------------------------------------------------------*/

/// Interface shared by JDAFC and the baselines. One instance per run; plan() is called once per GoP
/// in GoP order.
class scheduler
{
public:

  virtual ~scheduler() = default;

  virtual std::string_view name() const noexcept = 0;

  /// Uncoded schemes send source symbols and rely on retransmission.
  virtual bool retransmits() const noexcept { return false; }

  virtual allocation_plan plan(const video::gop_descriptor& gop, std::span<const path_status> statuses,
                               double now_ms) = 0;
};

/// Path selection by reliability and load imbalance, loss-free-bandwidth rate split, per-GoP
/// fountain sizing from fed-back loss, least-impact frame dropping when capacity falls short.
inline allocation_plan
plan_jdafc(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms,
           const scheduler_config& cfg, std::optional<double> fixed_code_rate = std::nullopt,
           std::string_view scheme = "jdafc")
{
  allocation_plan plan;
  plan.gop_id = gop.gop_id;
  plan.scheme = std::string{scheme};

  const auto scores = score_paths(statuses, static_cast<double>(gop.total_bytes()), now_ms, cfg);
  std::vector<std::string> eligible;
  for (const auto& s : scores)
  {
    if (s.eligible)
    {
      eligible.push_back(s.path_id);
    }
  }
  if (eligible.empty())
  {
    plan.feasible = false;
    for (const auto& f : gop.frames)
    {
      plan.dropped_frames.push_back(f.index);
    }
    return plan;
  }
  const auto selected = detail::pick(statuses, eligible);

  double capacity = 0.0;
  for (const auto& p : selected)
  {
    capacity += p.loss_free_bandwidth_kbps();
  }

  std::size_t source_bytes = gop.total_bytes();
  size_and_split(plan, selected, source_bytes, cfg, fixed_code_rate);
  // Deficit handling keeps the redundancy and sheds frames instead.
  for (std::size_t extra = 0; !plan.feasible; extra += cfg.symbol_size)
  {
    const std::size_t fit = detail::max_source_bytes(capacity, cfg);
    const std::size_t deficit = gop.total_bytes() > fit ? gop.total_bytes() - fit + extra : extra;
    const auto drops = drop_frames(gop, std::max<std::size_t>(deficit, 1));
    if (!drops.feasible || drops.freed_bytes >= gop.total_bytes())
    {
      plan.dropped_frames.clear();
      for (const auto& f : gop.frames)
      {
        plan.dropped_frames.push_back(f.index);
      }
      plan.selected_paths.clear();
      plan.per_path_rate_kbps.clear();
      plan.per_path_symbols.clear();
      plan.fountain_n = 0;
      plan.feasible = false;
      return plan;
    }
    plan.dropped_frames = drops.dropped;
    source_bytes = gop.total_bytes() - drops.freed_bytes;
    size_and_split(plan, selected, source_bytes, cfg, fixed_code_rate);
  }
  std::sort(plan.dropped_frames.begin(), plan.dropped_frames.end());
  return plan;
}

class jdafc_scheduler final : public scheduler
{
public:

  explicit jdafc_scheduler(scheduler_config cfg)
    : cfg_{std::move(cfg)}
  {}

  std::string_view name() const noexcept override { return "jdafc"; }

  allocation_plan
  plan(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms) override
  {
    return plan_jdafc(gop, statuses, now_ms, cfg_);
  }

private:

  scheduler_config cfg_;
};

/// EMS-style: every fresh path gets weight, reliable or not; no frame dropping.
inline allocation_plan
baseline_ems(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms,
             const scheduler_config& cfg)
{
  allocation_plan plan;
  plan.gop_id = gop.gop_id;
  plan.scheme = "ems";
  std::vector<path_status> fresh;
  for (const auto& s : statuses)
  {
    if (!s.stale(now_ms, cfg.feedback_interval_ms) && s.est_bandwidth_kbps > 0.0)
    {
      fresh.push_back(s);
    }
  }
  if (fresh.empty())
  {
    plan.feasible = false;
    return plan;
  }
  std::stable_sort(fresh.begin(), fresh.end(), [](const auto& a, const auto& b) {
    return a.loss_free_bandwidth_kbps() > b.loss_free_bandwidth_kbps();
  });
  size_and_split(plan, fresh, gop.total_bytes(), cfg);
  return plan;
}

class ems_scheduler final : public scheduler
{
public:

  explicit ems_scheduler(scheduler_config cfg)
    : cfg_{std::move(cfg)}
  {}

  std::string_view name() const noexcept override { return "ems"; }

  allocation_plan
  plan(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms) override
  {
    return baseline_ems(gop, statuses, now_ms, cfg_);
  }

private:

  scheduler_config cfg_;
};

/// JFSS-style: JDAFC's path choice and rate split, but the code rate is fixed by the first GoP's
/// conditions and never adapted afterwards.
inline allocation_plan
baseline_jfss(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms,
              const scheduler_config& cfg, std::optional<double>& static_code_rate)
{
  if (!static_code_rate)
  {
    auto first = plan_jdafc(gop, statuses, now_ms, cfg, std::nullopt, "jfss");
    if (first.fountain_n > 0)
    {
      static_code_rate = first.code_rate;
    }
    return first;
  }
  return plan_jdafc(gop, statuses, now_ms, cfg, static_code_rate, "jfss");
}

class jfss_scheduler final : public scheduler
{
public:

  explicit jfss_scheduler(scheduler_config cfg)
    : cfg_{std::move(cfg)}
  {}

  std::string_view name() const noexcept override { return "jfss"; }

  allocation_plan
  plan(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms) override
  {
    return baseline_jfss(gop, statuses, now_ms, cfg_, code_rate_);
  }

  std::optional<double> static_code_rate() const noexcept { return code_rate_; }

private:

  scheduler_config cfg_;
  std::optional<double> code_rate_;
};

/// DMP-style: everything on the single best fresh path by loss-free bandwidth, skipping paths whose
/// backlog marks them blocked; uncoded (r = 1) with per-packet retransmission handled by the sender.
inline allocation_plan
baseline_dmp(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms,
             const scheduler_config& cfg)
{
  allocation_plan plan;
  plan.gop_id = gop.gop_id;
  plan.scheme = "dmp";
  plan.coded = false;
  plan.source_bytes = gop.total_bytes();
  plan.fountain_m = std::max<std::size_t>(1, (gop.total_bytes() + cfg.symbol_size - 1) / cfg.symbol_size);
  plan.fountain_required = plan.fountain_m;
  plan.fountain_n = plan.fountain_m;
  plan.code_rate = 1.0;

  std::vector<const path_status*> fresh;
  for (const auto& s : statuses)
  {
    if (!s.stale(now_ms, cfg.feedback_interval_ms) && s.est_bandwidth_kbps > 0.0)
    {
      fresh.push_back(&s);
    }
  }
  if (fresh.empty())
  {
    plan.feasible = false;
    plan.fountain_n = 0;
    return plan;
  }
  std::stable_sort(fresh.begin(), fresh.end(), [](const auto* a, const auto* b) {
    return a->loss_free_bandwidth_kbps() > b->loss_free_bandwidth_kbps();
  });
  const path_status* chosen = fresh.front();
  for (const auto* s : fresh)
  {
    const double blocked_at = cfg.dmp_block_factor * s->est_bandwidth_kbps * cfg.deadline_ms / 8.0;
    if (s->queue_backlog_bytes <= blocked_at)
    {
      chosen = s;
      break;
    }
  }
  const double rate = static_cast<double>(plan.fountain_n) * cfg.packet_bits() / cfg.deadline_ms;
  plan.selected_paths = {chosen->path_id};
  plan.per_path_rate_kbps[chosen->path_id] = rate;
  plan.per_path_symbols[chosen->path_id] = plan.fountain_n;
  plan.total_rate_kbps = rate;
  plan.aggregate_loss_rate = chosen->est_loss_rate;
  plan.feasible = rate <= chosen->est_bandwidth_kbps;
  plan.deficit_kbps = std::max(0.0, rate - chosen->est_bandwidth_kbps);
  return plan;
}

class dmp_scheduler final : public scheduler
{
public:

  explicit dmp_scheduler(scheduler_config cfg)
    : cfg_{std::move(cfg)}
  {}

  std::string_view name() const noexcept override { return "dmp"; }
  bool retransmits() const noexcept override { return true; }

  allocation_plan
  plan(const video::gop_descriptor& gop, std::span<const path_status> statuses, double now_ms) override
  {
    return baseline_dmp(gop, statuses, now_ms, cfg_);
  }

private:

  scheduler_config cfg_;
};

inline const std::vector<std::string>&
known_schemes()
{
  static const std::vector<std::string> schemes{"jdafc", "ems", "jfss", "dmp"};
  return schemes;
}

inline std::unique_ptr<scheduler>
make_scheduler(std::string_view scheme, const scheduler_config& cfg)
{
  if (scheme == "jdafc") return std::make_unique<jdafc_scheduler>(cfg);
  if (scheme == "ems") return std::make_unique<ems_scheduler>(cfg);
  if (scheme == "jfss") return std::make_unique<jfss_scheduler>(cfg);
  if (scheme == "dmp") return std::make_unique<dmp_scheduler>(cfg);
  throw parameter_error{"unknown scheme '" + std::string{scheme} + "'"};
}

} // namespace jdafc::sched
