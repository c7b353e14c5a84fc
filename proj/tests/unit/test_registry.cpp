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

#include <music/registry/registry.hpp>
#include <music/registry/rtree.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace music;

namespace {

std::vector<int> scan(const std::vector<std::pair<Vec2, int>>& pts, Vec2 c, double d)
{
    std::vector<int> out;
    for (const auto& [p, v] : pts)
        if (distance(p, c) <= d)
            out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(RTree, WindowSearchMatchesScanUnderInsertAndRemove)
{
    Rng rng(17);
    RTree<int> tree;
    std::vector<std::pair<Rect, int>> items;
    for (int i = 0; i < 600; ++i) {
        const double x = uniform(rng, 0, 1000), y = uniform(rng, 0, 1000);
        const Rect r{x, y, x + uniform(rng, 0, 20), y + uniform(rng, 0, 20)};
        tree.insert(r, i);
        items.push_back({r, i});
        if (i % 7 == 3) {
            const std::size_t k = uniform_index(rng, items.size());
            ASSERT_TRUE(tree.remove(items[k].first, items[k].second));
            items.erase(items.begin() + static_cast<std::ptrdiff_t>(k));
        }
        ASSERT_EQ(tree.check_invariants(), "");
    }
    ASSERT_EQ(tree.size(), items.size());
    EXPECT_FALSE(tree.remove(Rect{-5, -5, -4, -4}, 0));
    for (int q = 0; q < 1000; ++q) {
        const double x = uniform(rng, -50, 1000), y = uniform(rng, -50, 1000);
        const Rect w{x, y, x + uniform(rng, 0, 200), y + uniform(rng, 0, 200)};
        std::vector<int> got, want;
        tree.search(w, [&](const auto& it) { got.push_back(it.value); });
        for (const auto& [r, v] : items)
            if (r.intersects(w))
                want.push_back(v);
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        ASSERT_EQ(got, want) << q;
    }
}

TEST(ServiceRegistry, RangeQueryMatchesLinearScan)
{
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        World w;
        w.map = LocationMap(20, 20, 100.0);
        w.intern_function("a");
        w.intern_function("b");
        std::vector<std::pair<Vec2, int>> pts;
        for (int c = 0; c < 40; ++c) {
            CloudNode n;
            n.id = CloudId(c);
            n.tier = Tier::Local;
            n.location = CellId(static_cast<std::int32_t>(uniform_index(rng, w.map.size())));
            n.capacity = 1;
            w.clouds.push_back(n);
            for (int f = 0; f < 2; ++f) {
                Service s;
                s.id = ServiceId(static_cast<std::int32_t>(w.services.size()));
                s.function = FunctionId(f);
                s.host = OnCloud{n.id};
                w.services.push_back(s);
                if (f == 0)
                    pts.push_back({w.map.center(*n.location), s.id.value});
            }
        }
        const auto reg = ServiceRegistry::build(w);
        ASSERT_EQ(reg.located_count(), 80u);
        for (int q = 0; q < 100; ++q) {
            const Vec2 c{uniform(rng, 0, 2000), uniform(rng, 0, 2000)};
            const double d = uniform(rng, 0, 800);
            std::vector<int> got;
            for (const ServiceId s : reg.range_query(c, d, FunctionId(0)))
                got.push_back(s.value);
            ASSERT_EQ(got, scan(pts, c, d));
        }
    }
}

TEST(ServiceRegistry, PublicServicesAreEverywhereAndDevicesUnlisted)
{
    const music::testing::MiniWorld m(10, 10, {0, 99}, 2, {5});
    EXPECT_EQ(m.registry.size(), 6u);
    EXPECT_EQ(m.registry.located_count(), 4u);
    const auto near = m.registry.range_query(m.world.map.center(CellId(0)), 50.0, FunctionId(1), true);
    // local service of f1 on cloud 0, public service of f1
    ASSERT_EQ(near.size(), 2u);
    EXPECT_EQ(m.world.service(near[0]).cloud(), CloudId(0));
    EXPECT_EQ(m.world.service(near[1]).cloud(), CloudId(2));
    EXPECT_TRUE(m.registry.range_query(m.world.map.center(CellId(50)), 10.0).empty());
    EXPECT_THROW((void)m.registry.range_query({0, 0}, -1.0), InvalidInput);
}

TEST(CapacityLedger, AdmitsUpToCapacity)
{
    const music::testing::MiniWorld m(4, 4, {0}, 1, {1}, 2);
    CapacityLedger ledger(m.world);
    EXPECT_TRUE(ledger.try_admit(CloudId(0)));
    EXPECT_TRUE(ledger.try_admit(CloudId(0)));
    EXPECT_FALSE(ledger.try_admit(CloudId(0)));
    EXPECT_FALSE(ledger.has_room(CloudId(0)));
    ledger.release(CloudId(0));
    EXPECT_EQ(ledger.count(CloudId(0)), 1);
    EXPECT_TRUE(ledger.unbounded(CloudId(1)));
}
