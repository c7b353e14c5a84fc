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

#ifndef MUSIC_TESTS_FIXTURES_HPP
#define MUSIC_TESTS_FIXTURES_HPP

#include <music/allocation/problem.hpp>
#include <music/core/model.hpp>
#include <music/profiles/profiles.hpp>
#include <music/registry/registry.hpp>
#include <music/workflow/workflow.hpp>

#include <map>
#include <vector>

namespace music::testing {

/// Per-service constant cost, ignoring context.
struct TableCost
{
    std::map<int, QoSTriple> table;
    QoSTriple operator()(ServiceId s, const FunctionNode&, std::optional<ServiceId>) const
    {
        return table.at(s.value);
    }
};

inline std::vector<ServiceId> ids(std::initializer_list<int> v)
{
    std::vector<ServiceId> out;
    for (const int x : v)
        out.emplace_back(x);
    return out;
}

/// A small hand-built world: `width` x `height` grid, local clouds at the
/// given sites (coverage = site + `around` cells), one public cloud, and for
/// each of `functions` functions one service per local cloud, one public
/// service and one device service per user. Users stand still in `cells`.
struct MiniWorld
{
    World world;
    ProfileSet profiles = ProfileSet::defaults();
    ServiceRegistry registry;

    MiniWorld(int width, int height, std::vector<int> sites, int functions, std::vector<int> user_cells,
              int capacity = 100, int around = 6)
    {
        world.map = LocationMap(width, height, 100.0);
        for (const int site : sites) {
            CloudNode c;
            c.id = CloudId(static_cast<std::int32_t>(world.clouds.size()));
            c.tier = Tier::Local;
            c.location = CellId(site);
            c.capacity = capacity;
            c.covered_cells = coverage_cells(world.map, CellId(site), around);
            world.clouds.push_back(c);
        }
        CloudNode pub;
        pub.id = CloudId(static_cast<std::int32_t>(world.clouds.size()));
        pub.tier = Tier::Public;
        world.clouds.push_back(pub);
        assign_wifi(world.map, world.clouds);
        for (int f = 0; f < functions; ++f)
            world.intern_function("f" + std::to_string(f));
        const auto add = [&](int f, ServiceHost host) {
            Service s;
            s.id = ServiceId(static_cast<std::int32_t>(world.services.size()));
            s.function = FunctionId(f);
            s.host = host;
            world.services.push_back(s);
            return s.id;
        };
        for (int f = 0; f < functions; ++f) {
            for (std::size_t c = 0; c + 1 < world.clouds.size(); ++c)
                add(f, OnCloud{world.clouds[c].id});
            add(f, OnCloud{pub.id});
        }
        for (std::size_t u = 0; u < user_cells.size(); ++u) {
            MobileUser m;
            m.id = UserId(static_cast<std::int32_t>(u));
            m.trajectory.entries.push_back({CellId(user_cells[u]), 60.0});
            for (int f = 0; f < functions; ++f)
                m.device_services.push_back(add(f, OnDevice{m.id}));
            world.users.push_back(m);
        }
        registry = ServiceRegistry::build(world);
    }

    /// LTW with one entry per cell, each a SEQ over the given functions.
    [[nodiscard]] LocationTimeWorkflow ltw(int user, std::vector<int> cells, std::vector<int> fns,
                                           double kb = 2048.0) const
    {
        LocationTimeWorkflow l;
        l.user = UserId(user);
        for (const int c : cells) {
            std::vector<WorkflowNode> kids;
            for (const int f : fns)
                kids.push_back(WorkflowNode::leaf(FunctionId(f), kb));
            l.entries.push_back({CellId(c), 60.0, WorkflowNode::seq(std::move(kids)), -1});
        }
        return l;
    }
};

} // namespace music::testing

#endif // MUSIC_TESTS_FIXTURES_HPP
