#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/fountain_codec.hpp"
#include "jdafc/rng.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace jdafc::fountain {

/// Empirical symbol overhead psi(k): with (1 + psi(k)) * k received symbols, the receiver named by
/// `decoder` finishes the block with probability at least `target`.
struct overhead_profile
{
  double target = 0.99;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  codec_params params;
  /// Receiver the profile was measured for.
  decoder_kind decoder = decoder_kind::gaussian;
  std::map<std::size_t, double> psi;
  /// Linear interpolation between profiled k, flat beyond the largest.
  bool interpolate = true;

  double
  psi_at(std::size_t k)
  const
  {
    if (psi.empty())
    {
      throw range_error{"empty overhead profile"};
    }
    if (const auto it = psi.find(k); it != psi.end())
    {
      return it->second;
    }
    if (!interpolate || k < psi.begin()->first)
    {
      throw range_error{"k = " + std::to_string(k) + " outside the overhead profile"};
    }
    const auto hi = psi.upper_bound(k);
    if (hi == psi.end())
    {
      return psi.rbegin()->second;
    }
    const auto lo = std::prev(hi);
    const double t = static_cast<double>(k - lo->first) / static_cast<double>(hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
  }

  /// Profiled k where psi increases over its predecessor (expected to be empty).
  std::vector<std::size_t>
  monotonicity_violations()
  const
  {
    std::vector<std::size_t> out;
    for (auto it = psi.begin(); it != psi.end(); ++it)
    {
      if (it != psi.begin() && it->second > std::prev(it)->second)
      {
        out.push_back(it->first);
      }
    }
    return out;
  }
};

/// m' = ceil((1 + psi(k)) * k).
inline std::size_t
required_symbols(std::size_t k, const overhead_profile& profile)
{
  if (k < 1)
  {
    throw parameter_error{"k must be at least 1"};
  }
  const double exact = (1.0 + profile.psi_at(k)) * static_cast<double>(k);
  // psi is stored as m'/k - 1; strip the rounding noise before taking the ceiling.
  return static_cast<std::size_t>(std::ceil(exact - 1e-9));
}

/// Number of in-order symbols (indices 0, 1, ...) the receiver needs to finish the block.
/// Returns cap + 1 if it has not finished after `cap` symbols.
inline std::size_t
symbols_needed(std::size_t k, std::uint64_t seed, const codec_params& params, std::size_t cap,
               decoder_kind kind = decoder_kind::gaussian)
{
  if (kind == decoder_kind::gaussian)
  {
    const auto dist = build_degree_distribution(k, params);
    gf2_rank_tracker rank{k};
    for (std::size_t i = 0; i < cap; ++i)
    {
      rank.add(structure_of(seed, static_cast<std::uint32_t>(i), dist).neighbors);
      if (rank.full())
      {
        return i + 1;
      }
    }
    return cap + 1;
  }

  peeling_decoder dec{k, 0, params};
  encoding_symbol sym;
  sym.seed = seed;
  sym.k = static_cast<std::uint32_t>(k);
  for (std::size_t i = 0; i < cap; ++i)
  {
    sym.index = static_cast<std::uint32_t>(i);
    if (dec.add(sym))
    {
      return i + 1;
    }
  }
  return cap + 1;
}

/// Seed of profiling trial t for block size k.
inline std::uint64_t
trial_seed(std::uint64_t seed, std::size_t k, std::size_t trial)
{
  auto rng = splitmix64::keyed(seed, (static_cast<std::uint64_t>(k) << 32) ^ trial);
  return rng();
}

/// Smallest m' whose empirical decode success over `trials` runs reaches `target`.
/// Decode success is monotone in the number of received symbols (for peeling and for rank alike),
/// so the binary search can run over each trial's first-success count.
inline std::size_t
profile_required(std::size_t k, const codec_params& params, std::size_t trials, double target,
                 std::uint64_t seed, decoder_kind kind = decoder_kind::gaussian)
{
  const std::size_t cap = 20 * k + 64;
  std::vector<std::size_t> needed(trials);
  for (std::size_t t = 0; t < trials; ++t)
  {
    needed[t] = symbols_needed(k, trial_seed(seed, k, t), params, cap, kind);
  }
  std::sort(needed.begin(), needed.end());

  auto success_rate = [&](std::size_t m) {
    const auto ok = std::upper_bound(needed.begin(), needed.end(), m) - needed.begin();
    return static_cast<double>(ok) / static_cast<double>(trials);
  };
  std::size_t lo = k;
  std::size_t hi = cap;
  while (lo < hi)
  {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (success_rate(mid) >= target)
    {
      hi = mid;
    }
    else
    {
      lo = mid + 1;
    }
  }
  return lo;
}

inline overhead_profile
profile_overhead(std::span<const std::size_t> k_values, const codec_params& params,
                 std::size_t trials, double target, std::uint64_t seed,
                 decoder_kind kind = decoder_kind::gaussian)
{
  if (trials < 1000)
  {
    throw parameter_error{"overhead profiling needs at least 1000 trials"};
  }
  if (!(target > 0.0 && target <= 1.0))
  {
    throw parameter_error{"target decode probability must be in (0, 1]"};
  }
  overhead_profile out;
  out.target = target;
  out.seed = seed;
  out.trials = trials;
  out.params = params;
  out.decoder = kind;
  for (const auto k : k_values)
  {
    if (k < 1)
    {
      throw parameter_error{"k must be at least 1"};
    }
    const auto m = profile_required(k, params, trials, target, seed, kind);
    out.psi[k] = static_cast<double>(m) / static_cast<double>(k) - 1.0;
  }
  return out;
}

/*------------------------------------------------------------------------------------------------*/

inline nlohmann::json
to_json(const overhead_profile& p)
{
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& [k, psi] : p.psi)
  {
    entries.push_back({{"k", k}, {"psi", psi}});
  }
  return {{"target", p.target},
          {"seed", p.seed},
          {"trials", p.trials},
          {"c", p.params.c},
          {"delta", p.params.delta},
          {"decoder", p.decoder == decoder_kind::gaussian ? "gaussian" : "peeling"},
          {"entries", entries}};
}

inline overhead_profile
overhead_profile_from_json(const nlohmann::json& j)
{
  overhead_profile p;
  try
  {
    p.target = j.at("target").get<double>();
    p.seed = j.value("seed", std::uint64_t{0});
    p.trials = j.value("trials", std::size_t{0});
    p.params.c = j.value("c", codec_params{}.c);
    p.params.delta = j.value("delta", codec_params{}.delta);
    const auto decoder = j.value("decoder", std::string{"gaussian"});
    if (decoder == "gaussian")
    {
      p.decoder = decoder_kind::gaussian;
    }
    else if (decoder == "peeling")
    {
      p.decoder = decoder_kind::peeling;
    }
    else
    {
      throw config_error{"unknown decoder '" + decoder + "' in overhead profile"};
    }
    for (const auto& e : j.at("entries"))
    {
      const auto psi = e.at("psi").get<double>();
      if (psi < 0.0)
      {
        throw config_error{"negative psi in overhead profile"};
      }
      p.psi[e.at("k").get<std::size_t>()] = psi;
    }
  }
  catch (const nlohmann::json::exception& e)
  {
    throw config_error{std::string{"overhead profile: "} + e.what()};
  }
  return p;
}

} // namespace jdafc::fountain
