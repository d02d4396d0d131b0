#include "jdafc/scenario.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <string>

namespace sim = jdafc::sim;

namespace {

const std::filesystem::path data_dir{JDAFC_DATA_DIR};
const std::filesystem::path scenario_dir{JDAFC_SCENARIO_DIR};

const std::string minimal = R"(name: tiny
overhead_profile: overhead_p99.json
paths:
  - id: lte
    technology: LTE
    bandwidth_kbps: 8000
    prop_delay_ms: 50
    loss_rate: 0.01
    burst_length: 2
)";

int
error_line(const std::string& text)
{
  try
  {
    sim::parse_scenario(text, data_dir);
  }
  catch (const jdafc::config_error& e)
  {
    EXPECT_NE(std::string{e.what()}.find("line " + std::to_string(e.line())), std::string::npos) << e.what();
    return e.line();
  }
  ADD_FAILURE() << "no config_error";
  return -1;
}

} // namespace

TEST(parse_scenario_test, minimal_defaults)
{
  const auto sc = sim::parse_scenario(minimal, data_dir);
  EXPECT_EQ(sc.name, "tiny");
  ASSERT_EQ(sc.paths.size(), 1u);
  EXPECT_EQ(sc.paths[0].profile.tech, jdafc::channel::technology::lte);
  EXPECT_DOUBLE_EQ(sc.paths[0].profile.avg_loss_rate, 0.01);
  EXPECT_TRUE(sc.paths[0].active_at(1e12));
  EXPECT_EQ(sc.delay_ms, 250.0);
  EXPECT_EQ(sc.video.num_frames, 3000);
  EXPECT_FALSE(sc.profile.psi.empty());
}

TEST(parse_scenario_test, shipped_scenarios_load)
{
  for (const char* name : {"combo1.yaml", "combo2.yaml", "combo3.yaml", "combo4.yaml"})
  {
    const auto sc = sim::load_scenario(scenario_dir / name);
    EXPECT_EQ(sc.seeds.size(), 10u) << name;
    EXPECT_GE(sc.paths.size(), 2u) << name;
    EXPECT_EQ(sc.profile.target, 0.999) << name;
  }
  const auto c4 = sim::load_scenario(scenario_dir / "combo4.yaml");
  for (const auto& p : c4.paths)
  {
    EXPECT_EQ(p.windows.size(), 1u);
  }
}

TEST(parse_scenario_test, active_windows_and_infinity)
{
  const auto sc = sim::parse_scenario(minimal + "    active: [[0, 1000], [2000, inf]]\n", data_dir);
  const auto& p = sc.paths[0];
  EXPECT_TRUE(p.active_at(0.0));
  EXPECT_FALSE(p.active_at(1000.0));
  EXPECT_TRUE(p.active_at(1e9));
}

TEST(parse_scenario_test, errors_carry_line_numbers)
{
  EXPECT_EQ(error_line(minimal + "    colour: blue\n"), 10);
  EXPECT_EQ(error_line(minimal + "bogus: 1\n"), 10);
  EXPECT_EQ(error_line(minimal + "feedback_interval_ms: often\n"), 10);
  EXPECT_GE(error_line("name: x\nfeedback_interval_ms: [1, 2\n"), 2);

  std::string bad_bw = minimal;
  bad_bw.replace(bad_bw.find("8000"), 4, "fast");
  EXPECT_EQ(error_line(bad_bw), 6);
}

TEST(parse_scenario_test, rejects_invalid_content)
{
  EXPECT_THROW(sim::parse_scenario(minimal + "    active: [[0, 1000], [500, 2000]]\n", data_dir), jdafc::config_error);
  EXPECT_THROW(sim::parse_scenario(minimal + "    active: [[10, 10]]\n", data_dir), jdafc::config_error);
  std::string lossy = minimal;
  lossy.replace(lossy.find("0.01"), 4, "0.7");
  EXPECT_EQ(error_line(lossy), 4);
  EXPECT_THROW(sim::parse_scenario(minimal + "seeds: []\n", data_dir), jdafc::config_error);
  EXPECT_THROW(sim::parse_scenario(minimal + "seeds: [-1]\n", data_dir), jdafc::config_error);
  EXPECT_THROW(sim::parse_scenario(minimal + "decoder: magic\n", data_dir), jdafc::config_error);
  EXPECT_THROW(sim::parse_scenario("name: x\noverhead_profile: overhead_p99.json\npaths: []\n", data_dir),
               jdafc::config_error);

  std::string no_profile = minimal;
  no_profile.erase(no_profile.find("overhead_profile"), std::string{"overhead_profile: overhead_p99.json\n"}.size());
  EXPECT_THROW(sim::parse_scenario(no_profile, data_dir), jdafc::config_error);
  EXPECT_THROW(sim::parse_scenario(minimal, data_dir / "nowhere"), jdafc::config_error);

  const std::string twice = minimal + R"(  - id: lte
    bandwidth_kbps: 100
    prop_delay_ms: 1
)";
  EXPECT_THROW(sim::parse_scenario(twice, data_dir), jdafc::config_error);
}

TEST(parse_scenario_test, bad_technology)
{
  std::string s = minimal;
  s.replace(s.find("LTE"), 3, "5G");
  EXPECT_EQ(error_line(s), 5);
}

TEST(load_overhead_profile_test, missing_file)
{
  EXPECT_THROW(sim::load_overhead_profile(data_dir / "absent.json"), jdafc::config_error);
}
