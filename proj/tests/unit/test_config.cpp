#include <gtest/gtest.h>

#include <holomem/config.hpp>

using namespace holomem;
using namespace holomem::config;

namespace {

std::string error_of(const std::string& text)
{
    try {
        parse_config(text, "cfg.json");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST(Config, ParsesAFullDocument)
{
    const auto rc = parse_config(R"({
      "system": {"g_sqrt_n": 2.0, "delta_p": 0.1, "delta_1": 0.01},
      "schedule": {"type": "designed", "target_phi": 3.0, "omega_low": 0.05, "max_margin": 0.02},
      "command": {"sectors": [1, 2], "input": [0.6, [0.0, 0.8]], "mode": "exact", "samples": 11,
                  "grid": [{"knob": "time_scale", "values": [1, 2]}], "metrics": ["phi"], "seed": 7}
    })");
    EXPECT_EQ(rc.system.g_sqrt_n, 2.0);
    EXPECT_EQ(rc.system.delta_1, 0.01);
    EXPECT_EQ(rc.system.delta_2, 0.0);
    EXPECT_EQ(rc.schedule.type, "designed");
    EXPECT_EQ(rc.schedule.target_phi, 3.0);
    EXPECT_EQ(rc.schedule.family.omega_low, 0.05);
    EXPECT_EQ(rc.schedule.family.omega_high, 100.0);
    EXPECT_EQ(rc.command.sectors, (std::vector<int>{1, 2}));
    EXPECT_EQ(rc.command.input[1], Complex(0.0, 0.8));
    EXPECT_EQ(rc.command.mode, "exact");
    EXPECT_EQ(rc.command.samples, 11);
    ASSERT_EQ(rc.command.grid.size(), 1u);
    EXPECT_EQ(rc.command.grid[0].values, (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(*rc.command.seed, 7u);
}

TEST(Config, DefaultsWhenSectionsAreOmitted)
{
    const auto rc = parse_config(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 5}})");
    EXPECT_EQ(rc.system.g_sqrt_n, 1.0);
    EXPECT_EQ(rc.command.mode, "both");
    EXPECT_EQ(rc.command.tolerance, 1e-9);
    EXPECT_FALSE(rc.command.seed.has_value());
    const auto s = build_schedule(rc.system, rc.schedule);
    EXPECT_EQ(s.duration(), 5.0);
}

TEST(Config, UnknownKeysAreRejectedWithTheirPath)
{
    const auto e = error_of(R"({"schedule": {"type": "designed", "target_phi": 1, "omega_lo": 0.1}})");
    EXPECT_TRUE(contains(e, "schedule.omega_lo: unknown key")) << e;
    const auto top = error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 1}, "extra": 1})");
    EXPECT_TRUE(contains(top, "extra: unknown key")) << top;
}

TEST(Config, MissingFieldsAreNamed)
{
    const auto e = error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0}})");
    EXPECT_TRUE(contains(e, "schedule.duration: required field is missing")) << e;
    EXPECT_TRUE(contains(error_of("{}"), "schedule: required field is missing"));
}

TEST(Config, SyntaxErrorsCarryLineAndColumn)
{
    const auto e = error_of("{\n  \"schedule\": {\n    \"type\": \"constant\",,\n  }\n}");
    EXPECT_TRUE(contains(e, "cfg.json:3:")) << e;
    EXPECT_TRUE(contains(e, "syntax error")) << e;
}

TEST(Config, TypeAndValueErrors)
{
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "designed", "target_phi": "two pi"}})"),
                         "schedule.target_phi"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "spline"}})"), "is not one of"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 1},
                                    "command": {"mode": "fast"}})"),
                         "command.mode"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 1},
                                    "command": {"grid": [{"knob": "colour", "values": [1]}]}})"),
                         "command.grid[0].knob"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": -1}})"),
                         "must be positive"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 1},
                                    "command": {"input": [[1, 2, 3]]}})"),
                         "command.input[0]"));
    EXPECT_TRUE(contains(error_of(R"({"schedule": {"type": "constant", "omega": 1, "kappa": 0, "duration": 1},
                                    "command": {"seed": -4}})"),
                         "command.seed"));
}

TEST(Config, ScheduleTypesBuild)
{
    SystemParams p;
    auto rc = parse_config(R"({"schedule": {"type": "waypoints", "points": [[0, 2, 0], [5, 1, 0.5]]}})");
    EXPECT_EQ(build_schedule(p, rc.schedule).duration(), 5.0);
    rc = parse_config(R"({"schedule": {"type": "sampled", "times": [0, 1, 2, 3],
                          "omega_1": [1, 1, 1, 1], "omega_2": [0, 0.1, 0.2, 0.3], "time_scale": 2}})");
    EXPECT_EQ(build_schedule(p, rc.schedule).duration(), 6.0);
    rc = parse_config(R"({"schedule": {"type": "cycle", "strokes": 1, "delta_kappa": 1.5707963267948966,
                          "max_margin": 0.05}})");
    const auto s = build_schedule(p, rc.schedule);
    EXPECT_NEAR(phi_of_t(p, s, s.duration()), kPi / 2 * rc.schedule.family.gain(p), 1e-12);
}

TEST(Config, LoadReportsMissingFiles)
{
    EXPECT_THROW(load_config("/nonexistent/holomem.json"), ConfigError);
}
