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

#include <music/core/center_of_mobility.hpp>
#include <music/mobility/mobility.hpp>
#include <music/mobility/uncertainty.hpp>
#include <music/workflow/expression.hpp>

#include <gtest/gtest.h>

using namespace music;

TEST(Mobility, RandomWaypointCoversDurationAndStaysOnMap)
{
    const LocationMap map(12, 9, 50.0);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        MobilityParams p;
        p.seed = seed;
        p.duration = 900.0;
        const Trajectory t = generate_random_waypoint(p, map);
        ASSERT_FALSE(t.empty());
        EXPECT_NEAR(t.duration(), 900.0, 1e-9);
        for (std::size_t i = 0; i < t.entries.size(); ++i) {
            ASSERT_TRUE(map.contains(t.entries[i].cell));
            ASSERT_GT(t.entries[i].dwell, 0.0);
            if (i > 0)
                ASSERT_NE(t.entries[i].cell, t.entries[i - 1].cell);
        }
    }
}

TEST(Mobility, SameSeedSameTrajectory)
{
    const LocationMap map(10, 10, 100.0);
    MobilityParams p;
    p.seed = 42;
    p.model = MobilityModel::Manhattan;
    const auto a = generate_trajectory(p, map);
    const auto b = generate_trajectory(p, map);
    ASSERT_EQ(a.entries.size(), b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        EXPECT_EQ(a.entries[i].cell, b.entries[i].cell);
        EXPECT_EQ(a.entries[i].dwell, b.entries[i].dwell);
    }
}

TEST(Mobility, ManhattanTurnFrequencies)
{
    const LocationMap map(30, 30, 10.0);
    TurnCounts turns;
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        MobilityParams p;
        p.model = MobilityModel::Manhattan;
        p.seed = seed;
        p.duration = 3000.0;
        const Trajectory t = generate_manhattan(p, map, &turns);
        // moves between 4-neighbours only
        for (std::size_t i = 1; i < t.entries.size(); ++i) {
            const CellId a = t.entries[i - 1].cell, b = t.entries[i].cell;
            ASSERT_EQ(std::abs(map.column(a) - map.column(b)) + std::abs(map.row(a) - map.row(b)), 1);
        }
    }
    ASSERT_GT(turns.total(), 20000u);
    const double n = static_cast<double>(turns.total());
    EXPECT_NEAR(turns.straight / n, 0.5, 0.02);
    EXPECT_NEAR(turns.left / n, 0.25, 0.02);
    EXPECT_NEAR(turns.right / n, 0.25, 0.02);
}

TEST(Mobility, RejectsBadParameters)
{
    MobilityParams p;
    p.speed_min = 0.0;
    EXPECT_THROW(p.validate(), InvalidInput);
    p = {};
    p.p_left = 0.4;
    EXPECT_THROW(p.validate(), InvalidInput);
}

TEST(CenterOfMobility, DwellWeightedMeanSnapped)
{
    const LocationMap map(5, 1, 10.0);
    Trajectory t;
    t.entries = {{CellId(0), 30.0}, {CellId(4), 10.0}};
    // (5*30 + 45*10) / 40 = 15 -> cell 1
    EXPECT_DOUBLE_EQ(weighted_mean_position(t, map).x, 15.0);
    EXPECT_EQ(center_of_mobility(t, map), CellId(1));
    t.entries = {{CellId(0), 10.0}, {CellId(1), 10.0}};
    // exactly between cells 0 and 1: lowest id
    EXPECT_EQ(center_of_mobility(t, map), CellId(0));
    EXPECT_THROW(center_of_mobility(Trajectory{}, map), InvalidTrajectory);
}

TEST(CenterOfMobility, GroupAveragesMemberCenters)
{
    const LocationMap map(5, 5, 10.0);
    std::vector<MobileUser> users(2);
    users[0].id = UserId(0);
    users[0].trajectory.entries = {{map.at(0, 0), 1.0}};
    users[1].id = UserId(1);
    users[1].trajectory.entries = {{map.at(4, 4), 1.0}};
    UserGroup g;
    g.members = {UserId(0), UserId(1)};
    const auto c = center_of_group_mobility(g, users, map);
    EXPECT_EQ(c.cell, map.at(2, 2));
    g.members.clear();
    EXPECT_THROW(center_of_group_mobility(g, users, map), InvalidGroup);
}

TEST(Uncertainty, PerturbedCountFollowsRate)
{
    World w;
    w.map = LocationMap(8, 8, 10.0);
    for (const char* f : {"a", "b", "c"})
        w.intern_function(f);
    TemplateLibrary lib({{"A", parse_workflow_expression("seq(a, b)")}, {"B", parse_workflow_expression("seq(b, c)")}},
                        w, 1024, 2048);
    LocationTimeWorkflow ltw;
    Rng rng(1);
    for (int i = 0; i < 200; ++i)
        ltw.entries.push_back({CellId(i % 64), 5.0, lib.instantiate(0, rng), 0});
    for (const double rate : {0.0, 0.1, 0.3, 1.0}) {
        std::size_t changed = 0, trials = 0;
        for (std::uint64_t s = 0; s < 50; ++s) {
            const auto out = perturb_ltw(ltw, {rate, PerturbMode::Both, s}, w.map, lib);
            for (std::size_t i = 0; i < out.changes.size(); ++i) {
                ++trials;
                const auto& before = ltw.entries[i];
                const auto& after = out.ltw.entries[i];
                switch (out.changes[i]) {
                case Perturbation::None:
                    ASSERT_EQ(after.cell, before.cell);
                    ASSERT_EQ(after.template_id, before.template_id);
                    break;
                case Perturbation::Location:
                    ++changed;
                    ASSERT_NE(after.cell, before.cell);
                    ASSERT_EQ(after.template_id, before.template_id);
                    break;
                case Perturbation::Service:
                    ++changed;
                    ASSERT_EQ(after.cell, before.cell);
                    ASSERT_NE(after.template_id, before.template_id);
                    break;
                }
            }
        }
        // binomial(10000, rate): 4 standard deviations
        const double sd = std::sqrt(trials * rate * (1 - rate));
        EXPECT_NEAR(double(changed), trials * rate, 4 * sd + 1e-9) << rate;
    }
}
