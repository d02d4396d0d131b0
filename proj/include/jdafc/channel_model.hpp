#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

namespace jdafc::channel {

enum class technology
{
  lte,
  wimax,
  wlan,
  other,
};

inline std::string_view
to_string(technology t)
noexcept
{
  switch (t)
  {
    case technology::lte: return "LTE";
    case technology::wimax: return "WiMAX";
    case technology::wlan: return "WLAN";
    case technology::other: return "other";
  }
  return "other";
}

inline technology
technology_from_string(std::string_view s)
{
  if (s == "LTE") return technology::lte;
  if (s == "WiMAX") return technology::wimax;
  if (s == "WLAN") return technology::wlan;
  if (s == "other") return technology::other;
  throw parameter_error{"unknown technology '" + std::string{s} + "'"};
}

/// Slow sinusoidal bandwidth swing standing in for client mobility.
struct bandwidth_modulation
{
  double amplitude = 0.0;   // fraction of nominal bandwidth, in [0, 1)
  double period_ms = 0.0;
  double phase = 0.0;       // radians
};

/// A wireless path: bandwidth mu_r, propagation delay t_r and a Gilbert loss process
/// given by its average loss rate and average loss-burst length (in packets).
struct path_profile
{
  std::string id;
  technology tech = technology::other;
  double bandwidth_kbps = 1000.0;
  double prop_delay_ms = 0.0;
  double avg_loss_rate = 0.0;
  double avg_burst_len = 1.0;
  bandwidth_modulation modulation;

  void
  validate()
  const
  {
    if (!(bandwidth_kbps > 0.0))
    {
      throw parameter_error{"path '" + id + "': bandwidth_kbps must be positive"};
    }
    if (!(prop_delay_ms >= 0.0))
    {
      throw parameter_error{"path '" + id + "': prop_delay_ms must be non-negative"};
    }
    if (!(avg_loss_rate >= 0.0 && avg_loss_rate < 1.0))
    {
      throw parameter_error{"path '" + id + "': avg_loss_rate must be in [0, 1)"};
    }
    if (!(avg_burst_len >= 1.0))
    {
      throw parameter_error{"path '" + id + "': avg_burst_len must be at least 1"};
    }
    if (!(modulation.amplitude >= 0.0 && modulation.amplitude < 1.0))
    {
      throw parameter_error{"path '" + id + "': modulation amplitude must be in [0, 1)"};
    }
    if (modulation.amplitude > 0.0 && !(modulation.period_ms > 0.0))
    {
      throw parameter_error{"path '" + id + "': modulation needs a positive period"};
    }
  }

  /// Loss-free bandwidth mu_r * (1 - pi_B).
  double loss_free_bandwidth_kbps() const noexcept { return bandwidth_kbps * (1.0 - avg_loss_rate); }

  double
  bandwidth_at(double time_ms)
  const noexcept
  {
    if (modulation.amplitude == 0.0)
    {
      return bandwidth_kbps;
    }
    const double angle = 2.0 * std::numbers::pi * time_ms / modulation.period_ms + modulation.phase;
    return bandwidth_kbps * (1.0 + modulation.amplitude * std::sin(angle));
  }
};

/*------------------------------------------------------------------------------------------------*/

struct stationary_distribution
{
  double pi_g;
  double pi_b;
};

/// Long-run state occupancy of the two-state chain with G->B rate xi_b and B->G rate xi_g:
/// pi_G = xi_g / (xi_b + xi_g), pi_B = xi_b / (xi_b + xi_g).
inline stationary_distribution
stationary_probs(double xi_b, double xi_g)
{
  if (!(xi_b >= 0.0) || !(xi_g >= 0.0) || xi_b + xi_g == 0.0)
  {
    throw parameter_error{"transition rates must be non-negative and not both zero"};
  }
  const double total = xi_b + xi_g;
  return {xi_g / total, xi_b / total};
}

enum class state
{
  good,
  bad,
};

/// Gilbert chain embedded at packet transmission slots. Each packet first moves the chain
/// (G->B with probability xi_b, B->G with probability xi_g), then is lost iff the chain is in B.
class gilbert_channel
{
public:

  gilbert_channel(double xi_b, double xi_g, splitmix64 rng)
    : xi_b_{xi_b}
    , xi_g_{xi_g}
    , rng_{rng}
  {
    if (!(xi_b_ >= 0.0 && xi_b_ <= 1.0) || !(xi_g_ > 0.0 && xi_g_ <= 1.0))
    {
      throw parameter_error{"per-slot transition probabilities must satisfy 0 <= xi_b <= 1, "
                            "0 < xi_g <= 1"};
    }
    state_ = rng_.uniform() < stationary().pi_b ? state::bad : state::good;
  }

  double xi_b() const noexcept { return xi_b_; }
  double xi_g() const noexcept { return xi_g_; }
  state current() const noexcept { return state_; }

  stationary_distribution stationary() const { return stationary_probs(xi_b_, xi_g_); }

  /// Mean number of consecutive lost packets, 1 / xi_g.
  double mean_burst_length() const noexcept { return 1.0 / xi_g_; }

  /// Advances one packet slot; true if that packet is delivered.
  bool
  step()
  noexcept
  {
    const double u = rng_.uniform();
    if (state_ == state::good)
    {
      if (u < xi_b_)
      {
        state_ = state::bad;
      }
    }
    else if (u < xi_g_)
    {
      state_ = state::good;
    }
    return state_ == state::good;
  }

private:

  double xi_b_;
  double xi_g_;
  splitmix64 rng_;
  state state_ = state::good;
};

/// Chooses per-slot rates so that long-run loss is avg_loss_rate and the mean loss burst is
/// avg_burst_len packets: xi_g = 1 / burst, xi_b = xi_g * pi_B / (1 - pi_B).
inline gilbert_channel
calibrate(const path_profile& profile, splitmix64 rng)
{
  profile.validate();
  const double xi_g = 1.0 / profile.avg_burst_len;
  const double xi_b = xi_g * profile.avg_loss_rate / (1.0 - profile.avg_loss_rate);
  if (xi_b > 1.0)
  {
    throw parameter_error{"path '" + profile.id + "': loss rate " +
                          std::to_string(profile.avg_loss_rate) + " is unreachable with burst length " +
                          std::to_string(profile.avg_burst_len) + " (needs loss <= burst/(burst+1))"};
  }
  return gilbert_channel{xi_b, xi_g, rng};
}

/*------------------------------------------------------------------------------------------------*/

struct transmit_result
{
  bool delivered = false;
  double arrival_time_ms = 0.0;
};

/// Serialization time of one packet at the given rate. bits / kbps = ms.
inline double
serialization_ms(double packet_size_bytes, double bandwidth_kbps)
noexcept
{
  return packet_size_bytes * 8.0 / bandwidth_kbps;
}

/// One packet on an idle path: advances the chain; arrival = send + serialization + propagation.
inline transmit_result
transmit(gilbert_channel& channel, const path_profile& profile, double packet_size_bytes,
         double send_time_ms)
{
  const bool delivered = channel.step();
  return {delivered, send_time_ms + serialization_ms(packet_size_bytes, profile.bandwidth_at(send_time_ms)) +
                         profile.prop_delay_ms};
}

/// A path with its loss chain and an unbounded FIFO drained at the path bandwidth.
///
/// With a positive slot_ms the chain is clocked by time instead of by packets: it steps once per
/// slot whether or not anything is sent, and a packet's fate is the state of the slot in which its
/// transmission starts. Any two senders on the same seed then see the same fading timeline.
class path_link
{
public:

  struct outcome
  {
    bool delivered = false;
    double start_ms = 0.0;
    double arrival_time_ms = 0.0;
  };

  path_link(path_profile profile, splitmix64 rng, double slot_ms = 0.0)
    : profile_{std::move(profile)}
    , channel_{calibrate(profile_, rng)}
    , slot_ms_{slot_ms}
  {
    if (!(slot_ms_ >= 0.0))
    {
      throw parameter_error{"slot_ms must be non-negative"};
    }
  }

  const path_profile& profile() const noexcept { return profile_; }
  const gilbert_channel& channel() const noexcept { return channel_; }
  double slot_ms() const noexcept { return slot_ms_; }

  /// Queues a packet handed to the path at enqueue_time_ms.
  outcome
  send(double packet_size_bytes, double enqueue_time_ms)
  {
    const double start = std::max(enqueue_time_ms, busy_until_ms_);
    bool delivered = true;
    if (slot_ms_ > 0.0)
    {
      const auto slot = static_cast<std::int64_t>(std::floor(start / slot_ms_ + 1e-6));
      while (slot_ < slot)
      {
        good_ = channel_.step();
        ++slot_;
      }
      delivered = good_;
    }
    else
    {
      delivered = channel_.step();
    }
    const double finish = start + serialization_ms(packet_size_bytes, profile_.bandwidth_at(start));
    busy_until_ms_ = finish;
    return {delivered, start, finish + profile_.prop_delay_ms};
  }

  double busy_until_ms() const noexcept { return busy_until_ms_; }

  /// Bytes not yet serialized at `now_ms`.
  double
  backlog_bytes(double now_ms)
  const noexcept
  {
    if (busy_until_ms_ <= now_ms)
    {
      return 0.0;
    }
    return (busy_until_ms_ - now_ms) * profile_.bandwidth_at(now_ms) / 8.0;
  }

private:

  path_profile profile_;
  gilbert_channel channel_;
  double slot_ms_;
  std::int64_t slot_ = -1;
  bool good_ = true;
  double busy_until_ms_ = 0.0;
};

} // namespace jdafc::channel
