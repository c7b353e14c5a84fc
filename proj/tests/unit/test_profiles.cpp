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

#include "../support/fixtures.hpp"

#include <music/profiles/profiles.hpp>

#include <gtest/gtest.h>

using namespace music;

namespace {

double at_2mb(double per_100kb) { return per_100kb * 2048.0 / 100.0; }

QoSTriple cost(const music::testing::MiniWorld& m, int service, int cell, double kb = 2048.0)
{
    const CostModel c(m.world, m.profiles);
    return c(ServiceId(service), CellId(cell), FunctionNode{FunctionId(0), kb}, std::nullopt, 60.0);
}

} // namespace

TEST(Profiles, LinkTableAtTwoMegabytes)
{
    const auto p = ProfileSet::defaults();
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::WiFi, Tier::Local).delay_per_100kb), 220.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::ThreeG, Tier::Local).delay_per_100kb), 4426.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::WiFi, Tier::Public).delay_per_100kb), 240.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::ThreeG, Tier::Public).delay_per_100kb), 5128.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::WiFi, Tier::Local).energy_per_100kb), 15435.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::ThreeG, Tier::Local).energy_per_100kb), 26156.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::WiFi, Tier::Public).energy_per_100kb), 19345.0);
    EXPECT_DOUBLE_EQ(at_2mb(p.link(Link::ThreeG, Tier::Public).energy_per_100kb), 27345.0);
}

// One local cloud at cell 0 (covering it), public cloud id 1, function f0:
// service 0 local, 1 public, 2 on the user's device.
TEST(Profiles, InvocationCostsByHostAndLink)
{
    const music::testing::MiniWorld m(10, 10, {0}, 1, {0});
    const double proc = 30.0 * 20.48;
    const double gb = 2048.0 / (1024.0 * 1024.0);

    const QoSTriple local_wifi = cost(m, 0, 0);
    EXPECT_DOUBLE_EQ(local_wifi.delay, proc + 220.0);
    EXPECT_DOUBLE_EQ(local_wifi.power, 15435.0);
    EXPECT_DOUBLE_EQ(local_wifi.price, 0.0);

    const QoSTriple public_wifi = cost(m, 1, 0);
    EXPECT_DOUBLE_EQ(public_wifi.delay, proc + 240.0);
    EXPECT_DOUBLE_EQ(public_wifi.power, 19345.0);
    EXPECT_NEAR(public_wifi.price, 0.52 * proc / 3.6e6 + (0.14 + 0.1) * gb, 1e-15);

    const QoSTriple local_3g = cost(m, 0, 99);
    EXPECT_DOUBLE_EQ(local_3g.delay, proc + 4426.0);
    EXPECT_DOUBLE_EQ(local_3g.power, 26156.0);
    EXPECT_NEAR(local_3g.price, 20.0 * gb, 1e-15);

    const QoSTriple public_3g = cost(m, 1, 99);
    EXPECT_DOUBLE_EQ(public_3g.delay, proc + 5128.0);
    EXPECT_DOUBLE_EQ(public_3g.power, 27345.0);
    EXPECT_NEAR(public_3g.price, 0.52 * proc / 3.6e6 + (0.14 + 0.1 + 20.0) * gb, 1e-15);

    const QoSTriple device = cost(m, 2, 99);
    EXPECT_DOUBLE_EQ(device.delay, 400.0 * 20.48);
    EXPECT_DOUBLE_EQ(device.power, 1500.0 * 20.48);
    EXPECT_EQ(device.price, 0.0);
}

TEST(Profiles, CostsGrowWithDataSize)
{
    const music::testing::MiniWorld m(10, 10, {0}, 1, {0});
    for (int s = 0; s < 3; ++s)
        for (const int cell : {0, 99}) {
            QoSTriple prev{-1, -1, -1};
            for (double kb = 100; kb <= 6000; kb += 350) {
                const QoSTriple q = cost(m, s, cell, kb);
                for (const Dimension d : all_dimensions)
                    ASSERT_GE(q[d], prev[d]);
                prev = q;
            }
        }
}

TEST(Profiles, HandOffBetweenClouds)
{
    const music::testing::MiniWorld m(10, 10, {0}, 1, {0});
    const CostModel c(m.world, m.profiles);
    const FunctionNode f{FunctionId(0), 2048.0};
    const double same = c(ServiceId(1), CellId(0), f, ServiceId(1), 60.0).delay;
    const double across = c(ServiceId(1), CellId(0), f, ServiceId(0), 60.0).delay;
    const double from_device = c(ServiceId(1), CellId(0), f, ServiceId(2), 60.0).delay;
    EXPECT_DOUBLE_EQ(across - same, 20.0);
    EXPECT_DOUBLE_EQ(from_device, same);
}

TEST(Profiles, StreamingBilledOnTimeWindow)
{
    music::testing::MiniWorld m(10, 10, {0}, 1, {0});
    m.world.services[1].billing = Billing::Streaming;
    const CostModel c(m.world, m.profiles);
    const double gb = 2048.0 / (1024.0 * 1024.0);
    const QoSTriple q = c(ServiceId(1), CellId(0), FunctionNode{FunctionId(0), 2048.0}, std::nullopt, 7200.0);
    EXPECT_NEAR(q.price, 0.15 * 2.0 + 0.24 * gb, 1e-12);
}
