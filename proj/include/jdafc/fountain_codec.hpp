#pragma once

#include "jdafc/errors.hpp"
#include "jdafc/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace jdafc::fountain {

using bytes = std::vector<std::uint8_t>;

/*------------------------------------------------------------------------------------------------*/

/// Robust soliton tuning. Sender and receiver must agree on these along with the seed.
struct codec_params
{
  double c = 0.03;
  double delta = 0.5;
};

/// Degree distribution over {1..k} with a cumulative table for inverse-CDF sampling.
class degree_distribution
{
public:

  explicit degree_distribution(std::vector<double> probabilities)
    : probabilities_{std::move(probabilities)}
  {
    if (probabilities_.empty())
    {
      throw parameter_error{"degree distribution needs at least one degree"};
    }
    double sum = 0.0;
    cumulative_.reserve(probabilities_.size());
    for (const double p : probabilities_)
    {
      if (!(p >= 0.0))
      {
        throw parameter_error{"negative degree probability"};
      }
      sum += p;
      cumulative_.push_back(sum);
    }
    if (std::abs(sum - 1.0) > 1e-12)
    {
      throw parameter_error{"degree probabilities must sum to 1"};
    }
    cumulative_.back() = 1.0;
  }

  std::size_t k() const noexcept { return probabilities_.size(); }

  /// Probability of degree d, d in [1, k].
  double p(std::size_t d) const { return probabilities_.at(d - 1); }

  const std::vector<double>& probabilities() const noexcept { return probabilities_; }
  const std::vector<double>& cumulative() const noexcept { return cumulative_; }

  double
  mean()
  const noexcept
  {
    double m = 0.0;
    for (std::size_t i = 0; i < probabilities_.size(); ++i)
    {
      m += static_cast<double>(i + 1) * probabilities_[i];
    }
    return m;
  }

  std::size_t
  sample(splitmix64& rng)
  const noexcept
  {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto d = static_cast<std::size_t>(it - cumulative_.begin()) + 1;
    return std::min(d, probabilities_.size());
  }

private:

  std::vector<double> probabilities_;
  std::vector<double> cumulative_;
};

/// R = c * ln(k / delta) * sqrt(k).
inline double
robust_soliton_r(std::size_t k, double c, double delta)
{
  const auto kd = static_cast<double>(k);
  return c * std::log(kd / delta) * std::sqrt(kd);
}

/// Degree carrying the robust soliton spike, floor(k / R) clamped to [1, k].
inline std::size_t
robust_soliton_spike(std::size_t k, double c, double delta)
{
  const double ratio = static_cast<double>(k) / robust_soliton_r(k, c, delta);
  const auto spike = static_cast<std::size_t>(std::floor(ratio));
  return std::clamp<std::size_t>(spike, 1, k);
}

/// Robust soliton distribution (ideal soliton rho plus the tau correction, normalized).
/// The spike mass R*ln(R/delta)/k is clamped at zero for small k where R < delta.
inline degree_distribution
build_degree_distribution(std::size_t k, double c = 0.03, double delta = 0.5)
{
  if (k < 1)
  {
    throw parameter_error{"k must be at least 1"};
  }
  if (!(c > 0.0) || !(delta > 0.0 && delta < 1.0))
  {
    throw parameter_error{"robust soliton needs c > 0 and 0 < delta < 1"};
  }
  if (k == 1)
  {
    return degree_distribution{{1.0}};
  }

  const auto kd = static_cast<double>(k);
  const double r = robust_soliton_r(k, c, delta);
  const std::size_t spike = robust_soliton_spike(k, c, delta);

  std::vector<double> mass(k, 0.0);
  mass[0] = 1.0 / kd;
  for (std::size_t i = 2; i <= k; ++i)
  {
    mass[i - 1] = 1.0 / (static_cast<double>(i) * static_cast<double>(i - 1));
  }
  for (std::size_t i = 1; i < spike; ++i)
  {
    mass[i - 1] += r / (static_cast<double>(i) * kd);
  }
  mass[spike - 1] += std::max(0.0, r * std::log(r / delta) / kd);

  const double beta = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (auto& m : mass)
  {
    m /= beta;
  }
  // Re-normalize the tail so the sum hits 1 within rounding of a single addition.
  const double sum = std::accumulate(mass.begin(), mass.end(), 0.0);
  mass[0] += 1.0 - sum;
  return degree_distribution{std::move(mass)};
}

inline degree_distribution
build_degree_distribution(std::size_t k, const codec_params& params)
{
  return build_degree_distribution(k, params.c, params.delta);
}

/*------------------------------------------------------------------------------------------------*/

/// Code rate r = m / n: source symbols over emitted encoding symbols.
inline double
code_rate(std::size_t m, std::size_t n)
{
  if (m < 1 || n < m)
  {
    throw parameter_error{"code rate needs 1 <= m <= n"};
  }
  return static_cast<double>(m) / static_cast<double>(n);
}

/*------------------------------------------------------------------------------------------------*/

/// k source symbols of identical size; the last one is zero-padded.
class source_block
{
public:

  source_block(std::vector<bytes> symbols, std::size_t symbol_size, std::size_t padding = 0)
    : symbols_{std::move(symbols)}
    , symbol_size_{symbol_size}
    , padding_{padding}
  {
    if (symbols_.empty())
    {
      throw parameter_error{"source block needs at least one symbol"};
    }
    for (const auto& s : symbols_)
    {
      if (s.size() != symbol_size_)
      {
        throw parameter_error{"source symbol size mismatch"};
      }
    }
    if (padding_ > symbol_size_)
    {
      throw parameter_error{"padding longer than one symbol"};
    }
  }

  /// Splits data into symbol_size chunks; empty data yields one all-zero symbol.
  static source_block
  from_bytes(std::span<const std::uint8_t> data, std::size_t symbol_size)
  {
    if (symbol_size == 0)
    {
      throw parameter_error{"symbol size must be positive"};
    }
    const std::size_t k = std::max<std::size_t>(1, (data.size() + symbol_size - 1) / symbol_size);
    std::vector<bytes> symbols(k, bytes(symbol_size, 0));
    for (std::size_t i = 0; i < data.size(); ++i)
    {
      symbols[i / symbol_size][i % symbol_size] = data[i];
    }
    return source_block{std::move(symbols), symbol_size, k * symbol_size - data.size()};
  }

  std::size_t k() const noexcept { return symbols_.size(); }
  std::size_t symbol_size() const noexcept { return symbol_size_; }
  std::size_t padding() const noexcept { return padding_; }
  const bytes& symbol(std::size_t i) const { return symbols_.at(i); }
  const std::vector<bytes>& symbols() const noexcept { return symbols_; }

  void set_padding(std::size_t padding) { padding_ = padding; }

  bytes
  to_bytes()
  const
  {
    bytes out;
    out.reserve(symbols_.size() * symbol_size_);
    for (const auto& s : symbols_)
    {
      out.insert(out.end(), s.begin(), s.end());
    }
    out.resize(out.size() - padding_);
    return out;
  }

  friend bool operator==(const source_block&, const source_block&) = default;

private:

  std::vector<bytes> symbols_;
  std::size_t symbol_size_;
  std::size_t padding_;
};

/// One rateless output symbol. Degree and neighbors are a pure function of (seed, index, k).
struct encoding_symbol
{
  std::uint32_t block_id = 0;
  std::uint64_t seed = 0;
  std::uint32_t index = 0;
  std::uint32_t k = 0;
  std::uint32_t degree = 0;  // not carried on the wire
  bytes payload;
};

/*------------------------------------------------------------------------------------------------*/

namespace detail {

inline void
xor_into(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src)
noexcept
{
  const std::size_t n = std::min(dst.size(), src.size());
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8)
  {
    std::uint64_t a;
    std::uint64_t b;
    std::memcpy(&a, dst.data() + i, 8);
    std::memcpy(&b, src.data() + i, 8);
    a ^= b;
    std::memcpy(dst.data() + i, &a, 8);
  }
  for (; i < n; ++i)
  {
    dst[i] ^= src[i];
  }
}

} // namespace detail

/// First `count` positions of a Fisher-Yates shuffle of [0, k), drawn from rng.
/// Sparse emulation of the dense shuffle: only displaced slots are stored.
inline std::vector<std::uint32_t>
partial_fisher_yates(std::size_t k, std::size_t count, splitmix64& rng)
{
  std::vector<std::uint32_t> out;
  out.reserve(count);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> displaced;
  auto value_at = [&](std::uint32_t pos) {
    for (const auto& [p, v] : displaced)
    {
      if (p == pos)
      {
        return v;
      }
    }
    return pos;
  };
  auto assign = [&](std::uint32_t pos, std::uint32_t v) {
    for (auto& [p, old] : displaced)
    {
      if (p == pos)
      {
        old = v;
        return;
      }
    }
    displaced.emplace_back(pos, v);
  };
  for (std::size_t i = 0; i < count; ++i)
  {
    const auto j = static_cast<std::uint32_t>(i + rng.below(k - i));
    const auto at_i = value_at(static_cast<std::uint32_t>(i));
    const auto at_j = value_at(j);
    out.push_back(at_j);
    assign(j, at_i);
    assign(static_cast<std::uint32_t>(i), at_j);
  }
  return out;
}

/// Degree and neighbor set of symbol `index` under `seed`.
struct symbol_structure
{
  std::size_t degree = 0;
  std::vector<std::uint32_t> neighbors;
};

inline symbol_structure
structure_of(std::uint64_t seed, std::uint32_t index, const degree_distribution& dist)
{
  auto rng = splitmix64::keyed(seed, index);
  const std::size_t degree = std::min(dist.sample(rng), dist.k());
  return {degree, partial_fisher_yates(dist.k(), degree, rng)};
}

/// Produces encoding symbols for one block. Immutable once built.
class encoder
{
public:

  encoder(source_block block, std::uint64_t seed, const codec_params& params = {},
          std::uint32_t block_id = 0)
    : block_{std::move(block)}
    , dist_{build_degree_distribution(block_.k(), params)}
    , seed_{seed}
    , block_id_{block_id}
  {}

  const source_block& block() const noexcept { return block_; }
  const degree_distribution& distribution() const noexcept { return dist_; }
  std::uint64_t seed() const noexcept { return seed_; }

  encoding_symbol
  symbol(std::uint32_t index)
  const;

  std::vector<encoding_symbol>
  symbols(std::uint32_t first, std::uint32_t count)
  const
  {
    std::vector<encoding_symbol> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i)
    {
      out.push_back(symbol(first + i));
    }
    return out;
  }

private:

  source_block block_;
  degree_distribution dist_;
  std::uint64_t seed_;
  std::uint32_t block_id_;
};

inline encoding_symbol
encode_symbol(const source_block& block, const degree_distribution& dist, std::uint64_t seed,
              std::uint32_t index)
{
  if (dist.k() != block.k())
  {
    throw parameter_error{"degree distribution built for a different k"};
  }
  const auto st = structure_of(seed, index, dist);
  encoding_symbol out;
  out.seed = seed;
  out.index = index;
  out.k = static_cast<std::uint32_t>(block.k());
  out.degree = static_cast<std::uint32_t>(st.degree);
  out.payload.assign(block.symbol_size(), 0);
  for (const auto n : st.neighbors)
  {
    detail::xor_into(out.payload, block.symbol(n));
  }
  return out;
}

inline encoding_symbol
encoder::symbol(std::uint32_t index)
const
{
  auto out = encode_symbol(block_, dist_, seed_, index);
  out.block_id = block_id_;
  return out;
}

/*------------------------------------------------------------------------------------------------*/

/// Outcome of a decode attempt. A stall is a normal result, not an error.
struct decode_result
{
  std::optional<source_block> block;
  std::size_t unresolved = 0;

  bool ok() const noexcept { return block.has_value(); }
};

/// Incremental belief-propagation (peeling) decoder for one block.
class peeling_decoder
{
public:

  peeling_decoder(std::size_t k, std::size_t symbol_size, const codec_params& params = {})
    : dist_{build_degree_distribution(k, params)}
    , symbol_size_{symbol_size}
    , recovered_(k, false)
    , values_(k)
    , waiting_(k)
  {}

  std::size_t k() const noexcept { return dist_.k(); }
  std::size_t recovered_count() const noexcept { return recovered_count_; }
  std::size_t received_count() const noexcept { return received_; }
  bool complete() const noexcept { return recovered_count_ == dist_.k(); }

  /// Feeds one symbol; returns true once every source symbol is known.
  bool
  add(const encoding_symbol& sym)
  {
    check_metadata(sym);
    ++received_;
    if (complete())
    {
      return true;
    }

    pending p;
    p.neighbors = structure_of(sym.seed, sym.index, dist_).neighbors;
    p.payload = sym.payload;
    std::erase_if(p.neighbors, [&](std::uint32_t n) {
      if (recovered_[n])
      {
        detail::xor_into(p.payload, values_[n]);
        return true;
      }
      return false;
    });

    if (p.neighbors.empty())
    {
      return complete();
    }
    if (p.neighbors.size() == 1)
    {
      resolve(p.neighbors.front(), std::move(p.payload));
      return complete();
    }

    const auto id = pending_.size();
    for (const auto n : p.neighbors)
    {
      waiting_[n].push_back(id);
    }
    pending_.push_back(std::move(p));
    return complete();
  }

  /// The decoded block; only valid once complete().
  source_block
  block(std::size_t padding = 0)
  const
  {
    if (!complete())
    {
      throw protocol_error{"block requested before decoding completed"};
    }
    return source_block{values_, symbol_size_, padding};
  }

private:

  struct pending
  {
    std::vector<std::uint32_t> neighbors;
    bytes payload;
  };

  void
  check_metadata(const encoding_symbol& sym)
  {
    if (sym.k != dist_.k() || sym.payload.size() != symbol_size_)
    {
      throw protocol_error{"encoding symbol does not match decoder k/symbol_size"};
    }
    if (!seed_)
    {
      seed_ = sym.seed;
      block_id_ = sym.block_id;
    }
    else if (*seed_ != sym.seed || block_id_ != sym.block_id)
    {
      throw protocol_error{"encoding symbols from different blocks mixed"};
    }
  }

  void
  resolve(std::uint32_t source, bytes value)
  {
    std::vector<std::pair<std::uint32_t, bytes>> ripple;
    ripple.emplace_back(source, std::move(value));
    while (!ripple.empty())
    {
      auto [s, v] = std::move(ripple.back());
      ripple.pop_back();
      if (recovered_[s])
      {
        continue;
      }
      recovered_[s] = true;
      values_[s] = std::move(v);
      ++recovered_count_;

      for (const auto id : waiting_[s])
      {
        auto& p = pending_[id];
        const auto it = std::find(p.neighbors.begin(), p.neighbors.end(), s);
        if (it == p.neighbors.end())
        {
          continue;
        }
        p.neighbors.erase(it);
        detail::xor_into(p.payload, values_[s]);
        if (p.neighbors.size() == 1 && !recovered_[p.neighbors.front()])
        {
          ripple.emplace_back(p.neighbors.front(), std::move(p.payload));
          p.neighbors.clear();
        }
      }
      waiting_[s].clear();
    }
  }

  degree_distribution dist_;
  std::size_t symbol_size_;
  std::vector<bool> recovered_;
  std::vector<bytes> values_;
  std::vector<std::vector<std::size_t>> waiting_;
  std::vector<pending> pending_;
  std::size_t recovered_count_ = 0;
  std::size_t received_ = 0;
  std::optional<std::uint64_t> seed_;
  std::uint32_t block_id_ = 0;
};

/// Batch peeling decode of an arbitrary subset of a block's symbols, in any order.
inline decode_result
decode(std::span<const encoding_symbol> received, std::size_t k, std::size_t symbol_size,
       const codec_params& params = {})
{
  peeling_decoder dec{k, symbol_size, params};
  for (const auto& s : received)
  {
    if (dec.add(s))
    {
      // keep validating metadata of the rest of the batch
      continue;
    }
  }
  decode_result out;
  out.unresolved = k - dec.recovered_count();
  if (dec.complete())
  {
    out.block = dec.block();
  }
  return out;
}

/// Gaussian elimination over GF(2). Succeeds iff the regenerated coding matrix has rank k.
inline decode_result
decode_ge(std::span<const encoding_symbol> received, std::size_t k, std::size_t symbol_size,
          const codec_params& params = {})
{
  const auto dist = build_degree_distribution(k, params);
  const std::size_t words = (k + 63) / 64;

  struct row
  {
    std::vector<std::uint64_t> bits;
    bytes payload;
  };
  std::vector<row> rows;
  rows.reserve(received.size());
  std::optional<std::uint64_t> seed;
  std::uint32_t block_id = 0;
  for (const auto& s : received)
  {
    if (s.k != k || s.payload.size() != symbol_size)
    {
      throw protocol_error{"encoding symbol does not match decoder k/symbol_size"};
    }
    if (!seed)
    {
      seed = s.seed;
      block_id = s.block_id;
    }
    else if (*seed != s.seed || block_id != s.block_id)
    {
      throw protocol_error{"encoding symbols from different blocks mixed"};
    }
    row r{std::vector<std::uint64_t>(words, 0), s.payload};
    for (const auto n : structure_of(s.seed, s.index, dist).neighbors)
    {
      r.bits[n / 64] ^= std::uint64_t{1} << (n % 64);
    }
    rows.push_back(std::move(r));
  }

  std::vector<std::size_t> pivot_row(k, rows.size());
  std::size_t rank = 0;
  for (std::size_t col = 0; col < k && rank < rows.size(); ++col)
  {
    const std::size_t w = col / 64;
    const std::uint64_t mask = std::uint64_t{1} << (col % 64);
    std::size_t sel = rank;
    while (sel < rows.size() && !(rows[sel].bits[w] & mask))
    {
      ++sel;
    }
    if (sel == rows.size())
    {
      continue;
    }
    std::swap(rows[rank], rows[sel]);
    for (std::size_t r = 0; r < rows.size(); ++r)
    {
      if (r != rank && (rows[r].bits[w] & mask))
      {
        for (std::size_t x = 0; x < words; ++x)
        {
          rows[r].bits[x] ^= rows[rank].bits[x];
        }
        detail::xor_into(rows[r].payload, rows[rank].payload);
      }
    }
    pivot_row[col] = rank;
    ++rank;
  }

  decode_result out;
  out.unresolved = k - rank;
  if (rank == k)
  {
    std::vector<bytes> values(k);
    for (std::size_t col = 0; col < k; ++col)
    {
      values[col] = rows[pivot_row[col]].payload;
    }
    out.block = source_block{std::move(values), symbol_size};
  }
  return out;
}

/// Incremental rank of the coding matrix over GF(2), structure only (no payloads).
class gf2_rank_tracker
{
public:

  explicit gf2_rank_tracker(std::size_t k)
    : k_{k}
    , words_{(k + 63) / 64}
    , basis_(k)
  {}

  std::size_t rank() const noexcept { return rank_; }
  bool full() const noexcept { return rank_ == k_; }

  /// Adds one row given by its neighbor set; returns true if it raised the rank.
  bool
  add(std::span<const std::uint32_t> neighbors)
  {
    std::vector<std::uint64_t> row(words_, 0);
    for (const auto n : neighbors)
    {
      row[n / 64] ^= std::uint64_t{1} << (n % 64);
    }
    for (std::size_t w = 0; w < words_; ++w)
    {
      while (row[w] != 0)
      {
        const auto col = w * 64 + static_cast<std::size_t>(std::countr_zero(row[w]));
        if (basis_[col].empty())
        {
          basis_[col] = std::move(row);
          ++rank_;
          return true;
        }
        for (std::size_t x = w; x < words_; ++x)
        {
          row[x] ^= basis_[col][x];
        }
      }
    }
    return false;
  }

private:

  std::size_t k_;
  std::size_t words_;
  std::vector<std::vector<std::uint64_t>> basis_;
  std::size_t rank_ = 0;
};

/// Which algorithm a receiver runs on a block.
enum class decoder_kind
{
  peeling,   ///< belief propagation only; may stall below full rank
  gaussian,  ///< peeling first, Gaussian elimination once the matrix reaches rank k
};

/// Receiver for one block: incremental peeling, with a Gaussian-elimination completion step
/// in `decoder_kind::gaussian` mode. Succeeds in that mode exactly when decode_ge would.
class block_decoder
{
public:

  block_decoder(std::size_t k, std::size_t symbol_size, decoder_kind kind = decoder_kind::gaussian,
                const codec_params& params = {})
    : peel_{k, symbol_size, params}
    , rank_{k}
    , kind_{kind}
    , symbol_size_{symbol_size}
    , params_{params}
  {}

  bool complete() const noexcept { return solved_.has_value() || peel_.complete(); }
  std::size_t received_count() const noexcept { return peel_.received_count(); }
  std::size_t rank() const noexcept { return rank_.rank(); }
  decoder_kind kind() const noexcept { return kind_; }

  bool
  add(const encoding_symbol& sym)
  {
    if (complete())
    {
      return true;
    }
    if (peel_.add(sym))
    {
      return true;
    }
    if (kind_ == decoder_kind::gaussian)
    {
      const auto dist_k = peel_.k();
      kept_.push_back(sym);
      rank_.add(structure_of(sym.seed, sym.index, distribution(dist_k)).neighbors);
      if (rank_.full())
      {
        auto res = decode_ge(kept_, dist_k, symbol_size_, params_);
        solved_ = std::move(res.block);
      }
    }
    return complete();
  }

  source_block
  block(std::size_t padding = 0)
  const
  {
    if (solved_)
    {
      auto out = *solved_;
      out.set_padding(padding);
      return out;
    }
    return peel_.block(padding);
  }

private:

  const degree_distribution&
  distribution(std::size_t k)
  {
    if (!dist_)
    {
      dist_ = build_degree_distribution(k, params_);
    }
    return *dist_;
  }

  peeling_decoder peel_;
  gf2_rank_tracker rank_;
  decoder_kind kind_;
  std::size_t symbol_size_;
  codec_params params_;
  std::optional<degree_distribution> dist_;
  std::vector<encoding_symbol> kept_;
  std::optional<source_block> solved_;
};

/*------------------------------------------------------------------------------------------------*/

/// Wire header: block_id u32 | seed u64 | index u32 | k u32 | symbol_size u16, little-endian.
inline constexpr std::size_t wire_header_size = 4 + 8 + 4 + 4 + 2;

namespace detail {

template <typename T>
void
put_le(bytes& out, T v)
{
  for (std::size_t i = 0; i < sizeof(T); ++i)
  {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
  }
}

template <typename T>
T
get_le(std::span<const std::uint8_t> in, std::size_t offset)
{
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
  {
    v |= static_cast<std::uint64_t>(in[offset + i]) << (8 * i);
  }
  return static_cast<T>(v);
}

} // namespace detail

inline bytes
serialize(const encoding_symbol& s)
{
  if (s.payload.size() > 0xffff)
  {
    throw parameter_error{"payload does not fit the 16-bit symbol_size field"};
  }
  bytes out;
  out.reserve(wire_header_size + s.payload.size());
  detail::put_le<std::uint32_t>(out, s.block_id);
  detail::put_le<std::uint64_t>(out, s.seed);
  detail::put_le<std::uint32_t>(out, s.index);
  detail::put_le<std::uint32_t>(out, s.k);
  detail::put_le<std::uint16_t>(out, static_cast<std::uint16_t>(s.payload.size()));
  out.insert(out.end(), s.payload.begin(), s.payload.end());
  return out;
}

inline encoding_symbol
parse(std::span<const std::uint8_t> wire)
{
  if (wire.size() < wire_header_size)
  {
    throw protocol_error{"truncated encoding symbol header"};
  }
  encoding_symbol s;
  s.block_id = detail::get_le<std::uint32_t>(wire, 0);
  s.seed = detail::get_le<std::uint64_t>(wire, 4);
  s.index = detail::get_le<std::uint32_t>(wire, 12);
  s.k = detail::get_le<std::uint32_t>(wire, 16);
  const auto size = detail::get_le<std::uint16_t>(wire, 20);
  if (wire.size() != wire_header_size + size)
  {
    throw protocol_error{"encoding symbol length disagrees with header"};
  }
  if (s.k == 0)
  {
    throw protocol_error{"encoding symbol with k = 0"};
  }
  s.payload.assign(wire.begin() + wire_header_size, wire.end());
  return s;
}

} // namespace jdafc::fountain
