#pragma once

#include "jdafc/channel_model.hpp"
#include "jdafc/errors.hpp"
#include "jdafc/fountain_codec.hpp"
#include "jdafc/metrics.hpp"
#include "jdafc/overhead_profile.hpp"
#include "jdafc/rng.hpp"
#include "jdafc/scheduler.hpp"
#include "jdafc/video_model.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <ostream>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace jdafc::sim {

/*------------------------------------------------------------------------------------------------*/

/// [start_ms, end_ms) during which a path is reachable.
struct active_window
{
  double start_ms = 0.0;
  double end_ms = std::numeric_limits<double>::infinity();
};

struct path_config
{
  channel::path_profile profile;
  std::vector<active_window> windows{active_window{}};

  bool
  active_at(double t)
  const noexcept
  {
    for (const auto& w : windows)
    {
      if (t >= w.start_ms && t < w.end_ms)
      {
        return true;
      }
    }
    return false;
  }
};

struct scenario
{
  std::string name = "scenario";
  std::vector<path_config> paths;
  video::video_config video;
  double loss_target = 0.01;
  double delay_ms = 250.0;
  double feedback_interval_ms = 100.0;
  double ewma_alpha = 0.3;
  std::size_t symbol_size = 1000;
  /// Bytes of real payload carried per simulated symbol; the wire size stays symbol_size.
  std::size_t shadow_payload_bytes = 8;
  double availability_floor = 0.3;
  double imbalance_ceiling = 1.0;
  double dmp_block_factor = 1.0;
  fountain::codec_params codec;
  fountain::decoder_kind decoder = fountain::decoder_kind::gaussian;
  fountain::overhead_profile profile;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  std::vector<int> miss_deadlines_ms{200, 250};

  void
  validate()
  const
  {
    video.validate();
    if (!(delay_ms > 0.0) || !(feedback_interval_ms > 0.0))
    {
      throw parameter_error{"delay_ms and feedback_interval_ms must be positive"};
    }
    if (!(ewma_alpha > 0.0 && ewma_alpha <= 1.0))
    {
      throw parameter_error{"ewma_alpha must be in (0, 1]"};
    }
    if (!(loss_target >= 0.0 && loss_target < 1.0))
    {
      throw parameter_error{"loss_target must be in [0, 1)"};
    }
    if (symbol_size == 0 || shadow_payload_bytes == 0 || shadow_payload_bytes > symbol_size)
    {
      throw parameter_error{"need 0 < shadow_payload_bytes <= symbol_size"};
    }
    if (profile.psi.empty())
    {
      throw parameter_error{"scenario has no overhead profile"};
    }
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
      paths[i].profile.validate();
      for (std::size_t j = i + 1; j < paths.size(); ++j)
      {
        if (paths[i].profile.id == paths[j].profile.id)
        {
          throw parameter_error{"duplicate path id '" + paths[i].profile.id + "'"};
        }
      }
      auto w = paths[i].windows;
      std::sort(w.begin(), w.end(), [](const auto& a, const auto& b) { return a.start_ms < b.start_ms; });
      for (std::size_t k = 0; k < w.size(); ++k)
      {
        if (!(w[k].end_ms > w[k].start_ms))
        {
          throw parameter_error{"path '" + paths[i].profile.id + "': empty active window"};
        }
        if (k > 0 && w[k].start_ms < w[k - 1].end_ms)
        {
          throw parameter_error{"path '" + paths[i].profile.id + "': overlapping active windows"};
        }
      }
    }
  }

  sched::scheduler_config
  scheduler_config()
  const
  {
    sched::scheduler_config c;
    c.deadline_ms = delay_ms;
    c.feedback_interval_ms = feedback_interval_ms;
    c.availability_floor = availability_floor;
    c.imbalance_ceiling = imbalance_ceiling;
    c.symbol_size = symbol_size;
    c.packet_bytes = symbol_size + fountain::wire_header_size;
    c.profile = profile;
    c.dmp_block_factor = dmp_block_factor;
    return c;
  }
};

/*------------------------------------------------------------------------------------------------*/

enum class event_kind
{
  path_set_change,
  feedback_received,
  packet_arrival,
  retransmit_due,
  feedback_due,
  gop_ready,
  frame_deadline,
};

struct event
{
  double time_ms = 0.0;
  event_kind kind = event_kind::gop_ready;
  std::uint64_t seq = 0;
  std::size_t a = 0;  // path index / gop id / packet slot, depending on kind
  std::size_t b = 0;
};

struct event_after
{
  bool
  operator()(const event& x, const event& y)
  const noexcept
  {
    if (x.time_ms != y.time_ms)
    {
      return x.time_ms > y.time_ms;
    }
    if (x.kind != y.kind)
    {
      return static_cast<int>(x.kind) > static_cast<int>(y.kind);
    }
    return x.seq > y.seq;
  }
};

/// Per-path measurements sent from client to server.
struct feedback_report
{
  std::size_t path = 0;
  double window_start_ms = 0.0;
  double window_end_ms = 0.0;
  std::size_t delivered_packets = 0;
  std::size_t lost_packets = 0;
  double measured_delay_ms = 0.0;
  double measured_bandwidth_kbps = 0.0;
  bool initial = false;    // association: current link parameters
  bool withdrawn = false;  // association lost
};

enum class packet_event
{
  send,
  deliver,
  drop,
};

struct trace_row
{
  double time_ms;
  std::uint32_t path;
  packet_event event;
  std::uint64_t packet_id;
};

/// One encoding symbol handed to a path. `symbol` is the index within its GoP's block.
struct packet_record
{
  std::size_t path = 0;
  int gop = 0;
  std::uint32_t symbol = 0;
  double tx_start_ms = 0.0;
  double arrival_ms = 0.0;
  bool delivered = false;
  bool resolved = false;
  std::uint64_t id = 0;
};

struct path_counters
{
  std::size_t sent = 0;
  std::size_t delivered = 0;
  std::size_t dropped = 0;
  std::size_t in_flight_at_end = 0;
};

struct run_result
{
  std::string scenario;
  std::string scheme;
  std::uint64_t seed = 0;
  std::vector<std::string> path_ids;
  std::vector<trace_row> trace;
  std::vector<packet_record> packets;
  std::vector<sched::allocation_plan> plans;
  std::vector<gop_record> gops;
  std::vector<path_counters> counters;
  std::vector<std::vector<sched::path_status>> status_snapshots;  // what each plan() call saw
  std::size_t payload_mismatches = 0;
  run_metrics metrics;
};

/*------------------------------------------------------------------------------------------------*/

namespace detail {

inline std::uint64_t
shadow_word(std::uint64_t seed, int gop, std::size_t symbol)
{
  return mix64(seed ^ mix64((static_cast<std::uint64_t>(gop) << 24) ^ symbol ^ 0x5eedULL));
}

/// Interleaves symbol slots across paths so each path's share is spread over the block
/// (smooth weighted round-robin on the per-path counts).
inline std::vector<std::size_t>
interleave(const std::vector<std::size_t>& counts)
{
  std::size_t total = 0;
  for (const auto c : counts)
  {
    total += c;
  }
  std::vector<std::size_t> out;
  out.reserve(total);
  std::vector<std::size_t> used(counts.size(), 0);
  for (std::size_t s = 0; s < total; ++s)
  {
    std::size_t best = counts.size();
    double best_key = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < counts.size(); ++p)
    {
      if (used[p] >= counts[p])
      {
        continue;
      }
      const double key = (static_cast<double>(used[p]) + 0.5) / static_cast<double>(counts[p]);
      if (key < best_key)
      {
        best_key = key;
        best = p;
      }
    }
    ++used[best];
    out.push_back(best);
  }
  return out;
}

} // namespace detail

/// One seeded run of a scenario under one scheme.
class simulation
{
public:

  simulation(const scenario& sc, std::string scheme, std::uint64_t seed)
    : sc_{sc}
    , scheme_{std::move(scheme)}
    , seed_{seed}
    , cfg_{sc.scheduler_config()}
    , scheduler_{sched::make_scheduler(scheme_, cfg_)}
  {
    sc_.validate();
    for (std::size_t p = 0; p < sc_.paths.size(); ++p)
    {
      const auto& pc = sc_.paths[p];
      links_.emplace_back(pc.profile, splitmix64::keyed(seed_, hash_label("loss/" + pc.profile.id)),
                          channel::serialization_ms(static_cast<double>(cfg_.packet_bytes),
                                                    pc.profile.bandwidth_kbps));
      active_.push_back(false);
      status_.push_back(std::nullopt);
      windows_.emplace_back();
      lost_ewma_.push_back(0.0);
      seen_ewma_.push_back(0.0);
    }
  }

  run_result
  run()
  {
    result_.scenario = sc_.name;
    result_.scheme = scheme_;
    result_.seed = seed_;
    result_.counters.assign(sc_.paths.size(), {});
    for (const auto& p : sc_.paths)
    {
      result_.path_ids.push_back(p.profile.id);
    }

    for (std::size_t p = 0; p < sc_.paths.size(); ++p)
    {
      for (const auto& w : sc_.paths[p].windows)
      {
        push({w.start_ms, event_kind::path_set_change, 0, p, 1});
        if (std::isfinite(w.end_ms))
        {
          push({w.end_ms, event_kind::path_set_change, 0, p, 0});
        }
      }
    }
    const int num_gops = sc_.video.num_gops();
    const double end_ms = num_gops * sc_.video.gop_duration_ms();
    for (int g = 0; g < num_gops; ++g)
    {
      push({g * sc_.video.gop_duration_ms(), event_kind::gop_ready, 0, static_cast<std::size_t>(g), 0});
    }
    for (double t = sc_.feedback_interval_ms; t <= end_ms + sc_.delay_ms; t += sc_.feedback_interval_ms)
    {
      push({t, event_kind::feedback_due, 0, 0, 0});
    }

    while (!events_.empty())
    {
      const event e = events_.top();
      events_.pop();
      now_ = e.time_ms;
      switch (e.kind)
      {
        case event_kind::path_set_change: on_path_change(e.a, e.b != 0); break;
        case event_kind::feedback_received: on_feedback(e.a); break;
        case event_kind::packet_arrival: on_arrival(e.a); break;
        case event_kind::retransmit_due: on_retransmit(e.a); break;
        case event_kind::feedback_due: on_feedback_due(); break;
        case event_kind::gop_ready: on_gop_ready(static_cast<int>(e.a)); break;
        case event_kind::frame_deadline: on_deadline(e.a); break;
      }
    }

    for (auto& pk : packets_)
    {
      if (!pk.resolved)
      {
        ++result_.counters[pk.path].in_flight_at_end;
      }
    }
    for (auto& g : gop_state_)
    {
      result_.gops.push_back(std::move(g.record));
    }
    result_.packets = std::move(packets_);
    result_.metrics = compute_metrics(result_.gops, sc_.miss_deadlines_ms);
    return std::move(result_);
  }

private:

  struct gop_state
  {
    gop_record record;
    std::vector<fountain::bytes> source;  // shadow payloads
    std::optional<fountain::encoder> enc;
    std::unique_ptr<fountain::block_decoder> dec;
    std::vector<bool> uncoded_have;
    std::size_t uncoded_count = 0;
    std::uint32_t next_symbol = 0;
    bool open = true;
  };

  struct window_counters
  {
    double start_ms = 0.0;
    std::size_t delivered = 0;
    std::size_t lost = 0;
    double delay_sum = 0.0;
    double best_pair_kbps = 0.0;
    std::optional<double> last_arrival;
    int last_gop = -1;  // packets of one GoP leave a path back to back
  };

  /// Weight, in packets, of the nominal loss rate a path starts from.
  static constexpr double prior_packets = 20.0;

  void
  push(event e)
  {
    e.seq = seq_++;
    events_.push(e);
  }

  void
  trace(std::size_t path, packet_event ev, std::uint64_t id)
  {
    result_.trace.push_back({now_, static_cast<std::uint32_t>(path), ev, id});
  }

  void
  on_path_change(std::size_t p, bool up)
  {
    active_[p] = up;
    if (up)
    {
      feedback_report r;
      r.path = p;
      r.initial = true;
      windows_[p] = window_counters{};
      windows_[p].start_ms = now_;
      // Paths up at time zero are associated before the stream starts.
      const double prop = sc_.paths[p].profile.prop_delay_ms;
      const double lag = now_ == 0.0 ? 0.0 : prop;
      r.window_start_ms = now_ + lag - prop;
      r.window_end_ms = r.window_start_ms;
      pending_reports_.push_back(r);
      push({now_ + lag, event_kind::feedback_received, 0, pending_reports_.size() - 1, 0});
      return;
    }
    // The client notices the lost association at once and reports it over its fastest remaining
    // interface; with none left the server only finds out when the path goes stale.
    std::optional<double> lag;
    for (std::size_t q = 0; q < sc_.paths.size(); ++q)
    {
      if (active_[q])
      {
        const double d = sc_.paths[q].profile.prop_delay_ms;
        lag = lag ? std::min(*lag, d) : d;
      }
    }
    if (lag)
    {
      feedback_report r;
      r.path = p;
      r.withdrawn = true;
      r.window_start_ms = now_;
      r.window_end_ms = now_;
      pending_reports_.push_back(r);
      push({now_ + *lag, event_kind::feedback_received, 0, pending_reports_.size() - 1, 0});
    }
  }

  void
  on_feedback_due()
  {
    for (std::size_t p = 0; p < sc_.paths.size(); ++p)
    {
      auto& w = windows_[p];
      if (active_[p])
      {
        feedback_report r;
        r.path = p;
        r.window_start_ms = w.start_ms;
        r.window_end_ms = now_;
        r.delivered_packets = w.delivered;
        r.lost_packets = w.lost;
        r.measured_delay_ms = w.delivered > 0 ? w.delay_sum / static_cast<double>(w.delivered) : 0.0;
        // Without a back-to-back pair the client falls back on the rate its interface reports.
        r.measured_bandwidth_kbps =
            w.best_pair_kbps > 0.0 ? w.best_pair_kbps : sc_.paths[p].profile.bandwidth_at(now_);
        pending_reports_.push_back(r);
        push({now_ + sc_.paths[p].profile.prop_delay_ms, event_kind::feedback_received, 0,
              pending_reports_.size() - 1, 0});
      }
      const auto last = w.last_arrival;
      const auto last_gop = w.last_gop;
      w = window_counters{};
      w.start_ms = now_;
      w.last_arrival = last;
      w.last_gop = last_gop;
    }
  }

  void
  on_feedback(std::size_t report_index)
  {
    const auto r = pending_reports_[report_index];
    const auto& prof = sc_.paths[r.path].profile;
    auto& st = status_[r.path];
    if (r.withdrawn)
    {
      st.reset();
      send_repair(r.path, r.window_end_ms);
      return;
    }
    if (!r.initial && !st)
    {
      return;
    }
    if (r.initial)
    {
      sched::path_status s;
      s.path_id = prof.id;
      s.est_bandwidth_kbps = prof.bandwidth_at(r.window_end_ms);
      s.est_loss_rate = prof.avg_loss_rate;
      s.est_delay_ms = prof.prop_delay_ms;
      s.last_report_time_ms = r.window_end_ms;
      st = s;
      lost_ewma_[r.path] = prior_packets * prof.avg_loss_rate;
      seen_ewma_[r.path] = prior_packets;
      return;
    }
    const double a = sc_.ewma_alpha;
    if (r.measured_bandwidth_kbps > 0.0)
    {
      st->est_bandwidth_kbps = (1.0 - a) * st->est_bandwidth_kbps + a * r.measured_bandwidth_kbps;
    }
    // Loss is smoothed on the packet counts, so a window that saw only a handful of packets moves
    // the estimate accordingly little.
    // A window without traffic counts as the nominal prior, so an unused path drifts back
    // toward its association-time profile instead of keeping a stale bad estimate forever.
    auto seen = static_cast<double>(r.delivered_packets + r.lost_packets);
    auto lost = static_cast<double>(r.lost_packets);
    if (seen == 0.0)
    {
      seen = prior_packets;
      lost = prior_packets * prof.avg_loss_rate;
    }
    lost_ewma_[r.path] = (1.0 - a) * lost_ewma_[r.path] + a * lost;
    seen_ewma_[r.path] = (1.0 - a) * seen_ewma_[r.path] + a * seen;
    st->est_loss_rate = std::clamp(lost_ewma_[r.path] / seen_ewma_[r.path], 0.0, 0.99);
    if (r.delivered_packets > 0)
    {
      st->est_delay_ms = (1.0 - a) * st->est_delay_ms + a * r.measured_delay_ms;
    }
    st->last_report_time_ms = std::max(st->last_report_time_ms, r.window_end_ms);
  }

  std::vector<sched::path_status>
  snapshot()
  const
  {
    std::vector<sched::path_status> out;
    for (std::size_t p = 0; p < status_.size(); ++p)
    {
      if (status_[p])
      {
        auto s = *status_[p];
        s.queue_backlog_bytes = links_[p].backlog_bytes(now_);
        out.push_back(s);
      }
    }
    return out;
  }

  std::size_t
  path_index(const std::string& id)
  const
  {
    for (std::size_t p = 0; p < sc_.paths.size(); ++p)
    {
      if (sc_.paths[p].profile.id == id)
      {
        return p;
      }
    }
    throw parameter_error{"plan names unknown path '" + id + "'"};
  }

  bool
  decodes_alone(std::uint64_t seed, std::size_t m, std::size_t n, const fountain::degree_distribution& dist)
  const
  {
    if (sc_.decoder == fountain::decoder_kind::gaussian)
    {
      fountain::gf2_rank_tracker rank{m};
      for (std::uint32_t i = 0; i < n && !rank.full(); ++i)
      {
        rank.add(fountain::structure_of(seed, i, dist).neighbors);
      }
      return rank.full();
    }
    fountain::peeling_decoder dec{m, 0, sc_.codec};
    fountain::encoding_symbol sym;
    sym.seed = seed;
    sym.k = static_cast<std::uint32_t>(m);
    for (std::uint32_t i = 0; i < n; ++i)
    {
      sym.index = i;
      if (dec.add(sym))
      {
        return true;
      }
    }
    return false;
  }

  /// The sender knows the structure of its own symbols, so among a few candidate block seeds it
  /// keeps one whose full emission decodes and whose least-covered source symbol appears in the
  /// most encoding symbols.
  std::uint64_t
  choose_block_seed(int gop, std::size_t m, std::size_t n)
  const
  {
    constexpr std::uint64_t candidates = 16;
    constexpr std::size_t wanted_coverage = 4;
    const auto dist = fountain::build_degree_distribution(m, sc_.codec);
    std::uint64_t best_seed = 0;
    std::pair<bool, std::size_t> best_score{false, 0};
    for (std::uint64_t attempt = 0; attempt < candidates; ++attempt)
    {
      const auto seed = splitmix64::keyed(seed_, (static_cast<std::uint64_t>(gop) << 8) | attempt)();
      std::vector<std::size_t> coverage(m, 0);
      for (std::uint32_t i = 0; i < n; ++i)
      {
        for (const auto s : fountain::structure_of(seed, i, dist).neighbors)
        {
          ++coverage[s];
        }
      }
      const std::pair score{decodes_alone(seed, m, n, dist), *std::min_element(coverage.begin(), coverage.end())};
      if (attempt == 0 || score > best_score)
      {
        best_seed = seed;
        best_score = score;
      }
      if (best_score.first && (best_score.second >= wanted_coverage || m == 1))
      {
        break;
      }
    }
    return best_seed;
  }

  void
  on_gop_ready(int g)
  {
    auto params = video::synth_params(sc_.video.gop_size, sc_.video.distortion_profile,
                                      splitmix64::keyed(seed_, hash_label("video") + static_cast<std::uint64_t>(g))());
    gop_state gs;
    gs.record.gop = video::make_gop(sc_.video, g, std::move(params), sc_.delay_ms);

    const auto statuses = snapshot();
    result_.status_snapshots.push_back(statuses);
    auto plan = scheduler_->plan(gs.record.gop, statuses, now_);
    gs.record.dropped_frames = plan.dropped_frames;
    result_.plans.push_back(plan);

    const auto id = static_cast<std::size_t>(g);
    if (gop_state_.size() <= id)
    {
      gop_state_.resize(id + 1);
    }

    if (plan.sends())
    {
      const std::size_t m = plan.fountain_m;
      gs.source.resize(m);
      for (std::size_t i = 0; i < m; ++i)
      {
        gs.source[i].resize(sc_.shadow_payload_bytes);
        auto word = detail::shadow_word(seed_, g, i);
        for (std::size_t b = 0; b < gs.source[i].size(); ++b)
        {
          gs.source[i][b] = static_cast<std::uint8_t>(word >> (8 * (b % 8)));
          if (b % 8 == 7)
          {
            word = mix64(word);
          }
        }
      }
      gs.record.sent = true;
      if (plan.coded)
      {
        const auto seed = choose_block_seed(g, m, plan.fountain_n);
        gs.record.block_seed = seed;
        gs.enc.emplace(fountain::source_block{gs.source, sc_.shadow_payload_bytes}, seed, sc_.codec,
                       static_cast<std::uint32_t>(g));
        gs.dec = std::make_unique<fountain::block_decoder>(m, sc_.shadow_payload_bytes, sc_.decoder,
                                                           sc_.codec);
      }
      else
      {
        gs.uncoded_have.assign(m, false);
      }
    }
    gop_state_[id] = std::move(gs);

    push({gop_state_[id].record.gop.last_deadline_ms(), event_kind::frame_deadline, 0, id, 0});

    if (!plan.sends())
    {
      return;
    }
    std::vector<std::size_t> path_of_slot;
    std::vector<std::size_t> counts;
    std::vector<std::size_t> order;
    for (const auto& [pid, c] : plan.per_path_symbols)
    {
      order.push_back(path_index(pid));
      counts.push_back(c);
    }
    for (const auto slot : detail::interleave(counts))
    {
      path_of_slot.push_back(order[slot]);
    }
    for (const auto p : path_of_slot)
    {
      send_packet(p, g, gop_state_[id].next_symbol++);
    }
  }

  /// Replaces the coded symbols of open blocks that a lost path can no longer deliver with fresh
  /// ones, spread over the remaining fresh paths in proportion to their loss-free bandwidth.
  void
  send_repair(std::size_t lost_path, double down_ms)
  {
    std::vector<std::size_t> targets;
    std::vector<double> weights;
    for (const auto& s : snapshot())
    {
      if (!s.stale(now_, sc_.feedback_interval_ms) && s.loss_free_bandwidth_kbps() > 0.0)
      {
        targets.push_back(path_index(s.path_id));
        weights.push_back(s.loss_free_bandwidth_kbps());
      }
    }
    if (targets.empty())
    {
      return;
    }
    std::vector<std::size_t> missing(gop_state_.size(), 0);
    for (const auto& pk : packets_)
    {
      if (pk.path == lost_path && pk.arrival_ms > down_ms)
      {
        ++missing[static_cast<std::size_t>(pk.gop)];
      }
    }
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (std::size_t g = 0; g < gop_state_.size(); ++g)
    {
      auto& gs = gop_state_[g];
      if (missing[g] == 0 || !gs.enc || !gs.open || gs.record.decoded_ms)
      {
        continue;
      }
      std::vector<std::size_t> counts(targets.size(), 0);
      std::size_t assigned = 0;
      for (std::size_t i = 0; i < targets.size(); ++i)
      {
        counts[i] = static_cast<std::size_t>(std::floor(static_cast<double>(missing[g]) * weights[i] / total));
        assigned += counts[i];
      }
      for (std::size_t i = 0; assigned < missing[g]; i = (i + 1) % targets.size())
      {
        ++counts[i];
        ++assigned;
      }
      for (const auto slot : detail::interleave(counts))
      {
        send_packet(targets[slot], static_cast<int>(g), gs.next_symbol++);
      }
    }
  }

  void
  send_packet(std::size_t p, int g, std::uint32_t symbol)
  {
    packet_record pk;
    pk.path = p;
    pk.gop = g;
    pk.symbol = symbol;
    pk.id = next_packet_id_++;
    ++result_.counters[p].sent;
    ++gop_state_[static_cast<std::size_t>(g)].record.symbols_sent;
    trace(p, packet_event::send, pk.id);
    const auto bytes = static_cast<double>(cfg_.packet_bytes);
    if (active_[p])
    {
      const auto out = links_[p].send(bytes, now_);
      pk.tx_start_ms = out.start_ms;
      pk.arrival_ms = out.arrival_time_ms;
      pk.delivered = out.delivered;
    }
    else
    {
      pk.tx_start_ms = now_;
      pk.arrival_ms = now_ + sc_.paths[p].profile.prop_delay_ms;
      pk.delivered = false;
    }
    packets_.push_back(pk);
    push({pk.arrival_ms, event_kind::packet_arrival, 0, packets_.size() - 1, 0});
    if (scheduler_->retransmits())
    {
      // Missing ack is noticed one round trip after the packet left the interface.
      const auto& prof = sc_.paths[p].profile;
      const double rtt = (pk.arrival_ms - pk.tx_start_ms) + prof.prop_delay_ms;
      push({pk.tx_start_ms + rtt, event_kind::retransmit_due, 0, packets_.size() - 1, 0});
    }
  }

  void
  on_arrival(std::size_t slot)
  {
    auto& pk = packets_[slot];
    pk.resolved = true;
    const bool delivered = pk.delivered && active_[pk.path];
    pk.delivered = delivered;
    auto& w = windows_[pk.path];
    if (!delivered)
    {
      ++result_.counters[pk.path].dropped;
      trace(pk.path, packet_event::drop, pk.id);
      ++w.lost;
      return;
    }
    ++result_.counters[pk.path].delivered;
    trace(pk.path, packet_event::deliver, pk.id);
    ++w.delivered;
    w.delay_sum += now_ - pk.tx_start_ms;
    if (w.last_arrival && now_ > *w.last_arrival && w.last_gop == pk.gop)
    {
      const double kbps = static_cast<double>(cfg_.packet_bytes) * 8.0 / (now_ - *w.last_arrival);
      w.best_pair_kbps = std::max(w.best_pair_kbps, kbps);
    }
    w.last_arrival = now_;
    w.last_gop = pk.gop;

    auto& gs = gop_state_[static_cast<std::size_t>(pk.gop)];
    ++gs.record.symbols_received;
    if (!gs.open || gs.record.decoded_ms)
    {
      return;
    }
    if (gs.enc)
    {
      if (gs.dec->add(gs.enc->symbol(pk.symbol)))
      {
        gs.record.decoded_ms = now_;
        if (gs.dec->block().symbols() != gs.source)
        {
          ++result_.payload_mismatches;
        }
        gs.dec.reset();
      }
    }
    else
    {
      if (!gs.uncoded_have[pk.symbol])
      {
        gs.uncoded_have[pk.symbol] = true;
        ++gs.uncoded_count;
        if (gs.uncoded_count == gs.uncoded_have.size())
        {
          gs.record.decoded_ms = now_;
        }
      }
    }
  }

  void
  on_retransmit(std::size_t slot)
  {
    const auto pk = packets_[slot];
    if (pk.delivered && active_[pk.path])
    {
      return;
    }
    auto& gs = gop_state_[static_cast<std::size_t>(pk.gop)];
    if (!gs.open || gs.record.decoded_ms || now_ >= gs.record.gop.last_deadline_ms())
    {
      return;
    }
    // Resend on the currently preferred path.
    const auto statuses = snapshot();
    std::size_t target = pk.path;
    double best = -1.0;
    for (const auto& s : statuses)
    {
      if (s.stale(now_, sc_.feedback_interval_ms))
      {
        continue;
      }
      const double blocked_at = cfg_.dmp_block_factor * s.est_bandwidth_kbps * cfg_.deadline_ms / 8.0;
      if (s.queue_backlog_bytes > blocked_at)
      {
        continue;
      }
      if (s.loss_free_bandwidth_kbps() > best)
      {
        best = s.loss_free_bandwidth_kbps();
        target = path_index(s.path_id);
      }
    }
    send_packet(target, pk.gop, pk.symbol);
  }

  void
  on_deadline(std::size_t g)
  {
    auto& gs = gop_state_[g];
    gs.open = false;
    gs.dec.reset();
  }

  scenario sc_;
  std::string scheme_;
  std::uint64_t seed_;
  sched::scheduler_config cfg_;
  std::unique_ptr<sched::scheduler> scheduler_;

  std::vector<channel::path_link> links_;
  std::vector<bool> active_;
  std::vector<std::optional<sched::path_status>> status_;
  std::vector<window_counters> windows_;
  std::vector<double> lost_ewma_;
  std::vector<double> seen_ewma_;
  std::vector<feedback_report> pending_reports_;
  std::vector<packet_record> packets_;
  std::vector<gop_state> gop_state_;

  std::priority_queue<event, std::vector<event>, event_after> events_;
  std::uint64_t seq_ = 0;
  std::uint64_t next_packet_id_ = 0;
  double now_ = 0.0;
  run_result result_;
};

inline run_result
run(const scenario& sc, const std::string& scheme, std::uint64_t seed)
{
  return simulation{sc, scheme, seed}.run();
}

/*------------------------------------------------------------------------------------------------*/

inline const char*
to_string(packet_event e)
noexcept
{
  switch (e)
  {
    case packet_event::send: return "SEND";
    case packet_event::deliver: return "DELIVER";
    case packet_event::drop: return "DROP";
  }
  return "?";
}

/// Channel trace as JSON-lines {time_ms, path_id, event, packet_id}. Times use fixed 6-decimal
/// formatting so output is byte-stable.
inline void
write_trace(std::ostream& os, const run_result& r)
{
  char buf[160];
  for (const auto& row : r.trace)
  {
    std::snprintf(buf, sizeof buf, "{\"time_ms\":%.6f,\"path_id\":\"%s\",\"event\":\"%s\",\"packet_id\":%" PRIu64 "}\n",
                  row.time_ms, r.path_ids[row.path].c_str(), to_string(row.event), row.packet_id);
    os << buf;
  }
}

/// Scheduler decisions, one JSON object per GoP.
inline void
write_decisions(std::ostream& os, const run_result& r)
{
  for (const auto& p : r.plans)
  {
    os << sched::to_json(p).dump() << '\n';
  }
}

inline void
write_cdf(std::ostream& os, const run_metrics& m)
{
  os << "delay_ms,cdf\n";
  char buf[64];
  for (const auto& pt : m.delay_cdf)
  {
    std::snprintf(buf, sizeof buf, "%.1f,%.6f\n", pt.delay_ms, pt.fraction);
    os << buf;
  }
}

} // namespace jdafc::sim
