#pragma once

#include "jdafc/channel_model.hpp"
#include "jdafc/errors.hpp"
#include "jdafc/overhead_profile.hpp"
#include "jdafc/sim_engine.hpp"

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>

namespace jdafc::sim {

namespace detail {

inline int
line_of(const YAML::Node& n)
{
  return n.Mark().line >= 0 ? n.Mark().line + 1 : 0;
}

inline void
expect_map(const YAML::Node& n, std::string_view what)
{
  if (!n.IsMap())
  {
    throw config_error{std::string{what} + " must be a mapping", line_of(n)};
  }
}

inline void
only_keys(const YAML::Node& n, std::initializer_list<std::string_view> keys, std::string_view where)
{
  for (const auto& kv : n)
  {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const auto k : keys)
    {
      known = known || key == k;
    }
    if (!known)
    {
      throw config_error{"unknown key '" + key + "' in " + std::string{where}, line_of(kv.first)};
    }
  }
}

template <typename T>
T
get(const YAML::Node& parent, const char* key, T fallback)
{
  const auto n = parent[key];
  if (!n)
  {
    return fallback;
  }
  try
  {
    return n.as<T>();
  }
  catch (const YAML::Exception&)
  {
    throw config_error{std::string{"bad value for '"} + key + "'", line_of(n)};
  }
}

template <typename T>
T
require(const YAML::Node& parent, const char* key)
{
  const auto n = parent[key];
  if (!n)
  {
    throw config_error{std::string{"missing key '"} + key + "'", line_of(parent)};
  }
  return get<T>(parent, key, T{});
}

inline double
time_value(const YAML::Node& n)
{
  if (n.IsScalar() && (n.Scalar() == "inf" || n.Scalar() == "end"))
  {
    return std::numeric_limits<double>::infinity();
  }
  try
  {
    return n.as<double>();
  }
  catch (const YAML::Exception&)
  {
    throw config_error{"bad time value", line_of(n)};
  }
}

inline path_config
parse_path(const YAML::Node& n)
{
  expect_map(n, "path entry");
  only_keys(n, {"id", "technology", "bandwidth_kbps", "prop_delay_ms", "loss_rate", "burst_length",
                "modulation", "active"},
            "path");
  path_config pc;
  auto& p = pc.profile;
  p.id = require<std::string>(n, "id");
  try
  {
    p.tech = channel::technology_from_string(get<std::string>(n, "technology", "other"));
  }
  catch (const parameter_error& e)
  {
    throw config_error{e.what(), line_of(n["technology"])};
  }
  p.bandwidth_kbps = require<double>(n, "bandwidth_kbps");
  p.prop_delay_ms = require<double>(n, "prop_delay_ms");
  p.avg_loss_rate = get<double>(n, "loss_rate", 0.0);
  p.avg_burst_len = get<double>(n, "burst_length", 1.0);
  if (const auto m = n["modulation"])
  {
    expect_map(m, "modulation");
    only_keys(m, {"amplitude", "period_ms", "phase"}, "modulation");
    p.modulation.amplitude = get<double>(m, "amplitude", 0.0);
    p.modulation.period_ms = get<double>(m, "period_ms", 0.0);
    p.modulation.phase = get<double>(m, "phase", 0.0);
  }
  if (const auto a = n["active"])
  {
    if (!a.IsSequence())
    {
      throw config_error{"'active' must be a list of [start_ms, end_ms] pairs", line_of(a)};
    }
    pc.windows.clear();
    for (const auto& w : a)
    {
      if (!w.IsSequence() || w.size() != 2)
      {
        throw config_error{"active window must be [start_ms, end_ms]", line_of(w)};
      }
      pc.windows.push_back({time_value(w[0]), time_value(w[1])});
    }
  }
  try
  {
    p.validate();
    channel::calibrate(p, splitmix64{0});
  }
  catch (const parameter_error& e)
  {
    throw config_error{e.what(), line_of(n)};
  }
  return pc;
}

} // namespace detail

/// Reads an overhead profile fixture written by `profile-overhead`.
inline fountain::overhead_profile
load_overhead_profile(const std::filesystem::path& file)
{
  std::ifstream in{file};
  if (!in)
  {
    throw config_error{"cannot open overhead profile '" + file.string() + "'"};
  }
  nlohmann::json j;
  try
  {
    in >> j;
  }
  catch (const nlohmann::json::exception& e)
  {
    throw config_error{"overhead profile '" + file.string() + "': " + e.what()};
  }
  return fountain::overhead_profile_from_json(j);
}

/// Parses a scenario document. Relative fixture paths resolve against base_dir.
inline scenario
parse_scenario(const std::string& text, const std::filesystem::path& base_dir = ".")
{
  YAML::Node root;
  try
  {
    root = YAML::Load(text);
  }
  catch (const YAML::ParserException& e)
  {
    throw config_error{e.msg, e.mark.line >= 0 ? e.mark.line + 1 : 0};
  }
  detail::expect_map(root, "scenario");
  detail::only_keys(root, {"name", "paths", "video", "constraints", "feedback_interval_ms", "ewma_alpha",
                           "symbol_size", "shadow_payload_bytes", "seeds", "overhead_profile",
                           "scheduler", "codec", "decoder", "miss_deadlines_ms"},
                    "scenario");
  using detail::get;
  using detail::line_of;

  scenario sc;
  sc.name = detail::require<std::string>(root, "name");

  const auto paths = root["paths"];
  if (!paths || !paths.IsSequence() || paths.size() == 0)
  {
    throw config_error{"'paths' must be a non-empty list", paths ? line_of(paths) : line_of(root)};
  }
  for (const auto& p : paths)
  {
    sc.paths.push_back(detail::parse_path(p));
  }

  if (const auto v = root["video"])
  {
    detail::expect_map(v, "video");
    detail::only_keys(v, {"encoding_rate_kbps", "fps", "gop_size", "num_frames", "distortion_profile",
                          "i_frame_weight"},
                      "video");
    auto& vc = sc.video;
    vc.encoding_rate_kbps = get(v, "encoding_rate_kbps", vc.encoding_rate_kbps);
    vc.fps = get(v, "fps", vc.fps);
    vc.gop_size = get(v, "gop_size", vc.gop_size);
    vc.num_frames = get(v, "num_frames", vc.num_frames);
    vc.distortion_profile = get(v, "distortion_profile", vc.distortion_profile);
    vc.i_frame_weight = get(v, "i_frame_weight", vc.i_frame_weight);
    try
    {
      vc.validate();
      video::synth_params(vc.gop_size, vc.distortion_profile, 0);
    }
    catch (const parameter_error& e)
    {
      throw config_error{e.what(), line_of(v)};
    }
  }

  if (const auto c = root["constraints"])
  {
    detail::expect_map(c, "constraints");
    detail::only_keys(c, {"loss_target", "delay_ms"}, "constraints");
    sc.loss_target = get(c, "loss_target", sc.loss_target);
    sc.delay_ms = get(c, "delay_ms", sc.delay_ms);
  }
  sc.feedback_interval_ms = get(root, "feedback_interval_ms", sc.feedback_interval_ms);
  sc.ewma_alpha = get(root, "ewma_alpha", sc.ewma_alpha);
  sc.symbol_size = get(root, "symbol_size", sc.symbol_size);
  sc.shadow_payload_bytes = get(root, "shadow_payload_bytes", sc.shadow_payload_bytes);

  if (const auto s = root["scheduler"])
  {
    detail::expect_map(s, "scheduler");
    detail::only_keys(s, {"availability_floor", "imbalance_ceiling", "dmp_block_factor"}, "scheduler");
    sc.availability_floor = get(s, "availability_floor", sc.availability_floor);
    sc.imbalance_ceiling = get(s, "imbalance_ceiling", sc.imbalance_ceiling);
    sc.dmp_block_factor = get(s, "dmp_block_factor", sc.dmp_block_factor);
  }
  if (const auto c = root["codec"])
  {
    detail::expect_map(c, "codec");
    detail::only_keys(c, {"c", "delta"}, "codec");
    sc.codec.c = get(c, "c", sc.codec.c);
    sc.codec.delta = get(c, "delta", sc.codec.delta);
  }
  if (const auto d = root["decoder"])
  {
    const auto s = get<std::string>(root, "decoder", "gaussian");
    if (s == "gaussian")
    {
      sc.decoder = fountain::decoder_kind::gaussian;
    }
    else if (s == "peeling")
    {
      sc.decoder = fountain::decoder_kind::peeling;
    }
    else
    {
      throw config_error{"decoder must be 'gaussian' or 'peeling'", line_of(d)};
    }
  }
  if (const auto s = root["seeds"])
  {
    if (!s.IsSequence() || s.size() == 0)
    {
      throw config_error{"'seeds' must be a non-empty list", line_of(s)};
    }
    sc.seeds.clear();
    for (const auto& x : s)
    {
      try
      {
        sc.seeds.push_back(x.as<std::uint64_t>());
      }
      catch (const YAML::Exception&)
      {
        throw config_error{"seed must be a non-negative integer", line_of(x)};
      }
    }
  }
  if (const auto d = root["miss_deadlines_ms"])
  {
    try
    {
      sc.miss_deadlines_ms = d.as<std::vector<int>>();
    }
    catch (const YAML::Exception&)
    {
      throw config_error{"'miss_deadlines_ms' must be a list of integers", line_of(d)};
    }
  }

  const auto prof = root["overhead_profile"];
  if (!prof)
  {
    throw config_error{"missing key 'overhead_profile'", line_of(root)};
  }
  const std::filesystem::path prof_file = get<std::string>(root, "overhead_profile", "");
  try
  {
    sc.profile = load_overhead_profile(prof_file.is_absolute() ? prof_file : base_dir / prof_file);
  }
  catch (const config_error& e)
  {
    throw config_error{e.what(), line_of(prof)};
  }

  try
  {
    sc.validate();
  }
  catch (const parameter_error& e)
  {
    throw config_error{e.what(), line_of(root)};
  }
  return sc;
}

inline scenario
load_scenario(const std::filesystem::path& file)
{
  std::ifstream in{file};
  if (!in)
  {
    throw config_error{"cannot open scenario '" + file.string() + "'"};
  }
  const std::string text{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
  try
  {
    return parse_scenario(text, file.parent_path());
  }
  catch (const config_error& e)
  {
    throw config_error{file.filename().string() + ": " + e.what()};
  }
}

} // namespace jdafc::sim
