/*
 * Copyright 2026 The music-sim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <music/harness/experiment.hpp>

#include <gtest/gtest.h>

#include <set>
#include <sstream>

using namespace music;

namespace {

std::string error_of(const std::string& text)
{
    try {
        (void)parse_scenario(text);
    } catch (const ScenarioError& e) {
        return e.what();
    }
    return "";
}

Scenario small(const std::string& extra = "")
{
    return parse_scenario(R"({"id": "t", "users": 4, "repetitions": 2, "seed": 3, "ltw": {"entries": 1},
        "local_clouds": {"count": 4}, "single_mix": {"OCRS": 1.0},
        "algorithms": ["music", "greedy", "rsa", "bruteforce"])" + extra + "}");
}

std::string csv(const std::vector<MetricsRow>& rows)
{
    std::ostringstream os;
    write_csv(os, rows);
    return os.str();
}

} // namespace

TEST(Scenario, MinimalFileTakesDefaults)
{
    const Scenario s = parse_scenario(R"({"users": 5})");
    EXPECT_EQ(s.users, 5);
    EXPECT_EQ(s.grid_width, 15);
    EXPECT_EQ(s.grid_height, 15);
    EXPECT_EQ(s.repetitions, 15);
    EXPECT_EQ(s.wifi_cells, 6);
    EXPECT_EQ(s.uncertainty_pct, std::vector<double>{0.0});
}

TEST(Scenario, ValidationNamesTheField)
{
    EXPECT_NE(error_of("").find("users"), std::string::npos);
    EXPECT_NE(error_of("   \n").find("users"), std::string::npos);
    EXPECT_NE(error_of("{}").find("users"), std::string::npos);
    EXPECT_NE(error_of("[1, 2]").find("object"), std::string::npos);
    EXPECT_NE(error_of("{\"users\": 3,").find("JSON"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "single_mix": {"OCRS": 0.9}})").find("single_mix"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "colour": "red"})").find("colour"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "grid": {"width": 4, "depth": 2}})").find("grid.depth"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": -1})").find("users"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "uncertainty_pct": [0, 120]})").find("uncertainty_pct"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "algorithms": ["sa"]})").find("algorithms"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "templates": {"OCRS": "seq(a,"}})").find("templates.OCRS"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "groups": {"count": 4}})").find("groups.count"), std::string::npos);
    EXPECT_NE(error_of(R"({"users": 3, "budgets": {"delay": -4}})").find("budgets"), std::string::npos);
}

TEST(Scenario, ProfileOverrides)
{
    const Scenario s = parse_scenario(R"({"users": 1, "profiles": {
        "links": [{"link": "wifi", "tier": "local", "delay_ms_per_100kb": 5, "energy_mj_per_100kb": 6}],
        "prices": {"cellular_usd_per_gb": 1.5}}})");
    EXPECT_EQ(s.profiles.link(Link::WiFi, Tier::Local).delay_per_100kb, 5.0);
    EXPECT_EQ(s.profiles.link(Link::WiFi, Tier::Local).energy_per_100kb, 6.0);
    EXPECT_EQ(s.profiles.price().cellular_rate, 1.5);
    EXPECT_EQ(s.profiles.price().public_compute_rate, 0.52);
    EXPECT_NE(error_of(R"({"users": 1, "profiles": {"links": [{"link": "lte"}]}})").find("profiles"), std::string::npos);
}

TEST(Metrics, ThroughputAndGainHandValues)
{
    EXPECT_DOUBLE_EQ(compute_throughput(0.66, 1.0), 66.0);
    EXPECT_DOUBLE_EQ(compute_throughput(0.3, 0.6), 50.0);
    EXPECT_THROW(compute_throughput(0.5, 0.0), UndefinedThroughput);
    EXPECT_NEAR(compute_two_tier_gain(8.0, 10.0), 20.0, 1e-12);
    EXPECT_NEAR(compute_two_tier_gain(12.0, 10.0), -20.0, 1e-12);
    EXPECT_THROW(compute_two_tier_gain(1.0, 0.0), UndefinedGain);
}

TEST(Metrics, GainsAveragePerUserAndSkipZeroBaselines)
{
    const std::vector<QoSTriple> two{{8, 5, 1}, {1, 10, 1}};
    const std::vector<QoSTriple> pub{{10, 10, 1}, {0, 20, 2}};
    const UserGains g = average_gains(two, pub, Dimension::Delay);
    ASSERT_TRUE(g.price && g.power);
    EXPECT_NEAR(*g.price, 20.0, 1e-12);
    EXPECT_NEAR(*g.power, 50.0, 1e-12);
    EXPECT_FALSE(g.delay);
    EXPECT_EQ(g.undefined, 1);
}

TEST(Metrics, CsvHeader)
{
    const std::string out = csv({});
    EXPECT_EQ(out, std::string(kCsvHeader) + "\n");
    MetricsRow r;
    r.scenario_id = "x";
    r.algorithm = "rsa";
    r.utility = 0.5;
    const std::string one = csv({r});
    const std::string line = one.substr(one.find('\n') + 1);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), std::count(out.begin(), out.end(), ','));
}

TEST(Experiment, RerunIsByteIdentical)
{
    const Scenario s = small();
    const std::string a = csv(run_experiment(s));
    const std::string b = csv(run_experiment(s));
    EXPECT_EQ(a, b);
    Scenario other = s;
    other.seed = 4;
    EXPECT_NE(a, csv(run_experiment(other)));
}

TEST(Experiment, ThroughputAgainstOptimumIsBounded)
{
    const auto rows = run_experiment(small());
    ASSERT_EQ(rows.size(), 8u);
    for (const auto& r : rows) {
        ASSERT_TRUE(r.throughput_pct) << r.algorithm;
        EXPECT_GE(*r.throughput_pct, 0.0);
        EXPECT_LE(*r.throughput_pct, 100.0 + 1e-9) << r.algorithm;
        if (r.algorithm == "bruteforce") {
            EXPECT_NEAR(*r.throughput_pct, 100.0, 1e-9);
        }
    }
}

TEST(Experiment, GainsVanishWithoutALocalTier)
{
    Scenario s = small(R"(, "gains": true)");
    s.local_cloud_count = 0;
    s.algorithms = {"music", "greedy", "rsa"};
    int seen = 0;
    for (const auto& r : run_experiment(s)) {
        if (r.fixed_dimension == "none")
            continue;
        for (const auto& g : {r.gain_price_pct, r.gain_power_pct, r.gain_delay_pct})
            if (g) {
                EXPECT_EQ(*g, 0.0);
                ++seen;
            }
    }
    EXPECT_GT(seen, 0);
}

TEST(Experiment, PublicOnlyWorldHasNoLocalServices)
{
    const Scenario s = small();
    const BuiltWorld bw = build_world(s, 0);
    const World pub = public_only(bw.world);
    for (const auto& sv : pub.services)
        if (const auto c = sv.cloud()) {
            EXPECT_EQ(pub.cloud(*c).tier, Tier::Public);
        }
    for (const auto& cell : pub.map.cells())
        EXPECT_FALSE(cell.wifi_covered_by);
    const World keep = public_only(bw.world, true);
    bool any = false;
    for (const auto& cell : keep.map.cells())
        any = any || cell.wifi_covered_by.has_value();
    EXPECT_TRUE(any);
}

TEST(Groups, FormationPartitionsUsersEvenly)
{
    Scenario s = parse_scenario(R"({"users": 23, "groups": {"count": 5}})");
    const BuiltWorld bw = build_world(s, 0);
    for (const auto formation : {GroupFormation::Spatial, GroupFormation::Random}) {
        s.group_formation = formation;
        const Grouping g = form_groups(s, bw.world, 5, 0);
        ASSERT_EQ(g.size(), 5u);
        std::set<std::size_t> all;
        for (const auto& m : g) {
            EXPECT_GE(m.size(), 4u);
            EXPECT_LE(m.size(), 5u);
            all.insert(m.begin(), m.end());
        }
        EXPECT_EQ(all.size(), 23u);
    }
}
