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

#ifndef MUSIC_HARNESS_WORLD_BUILDER_HPP
#define MUSIC_HARNESS_WORLD_BUILDER_HPP

#include <music/allocation/allocators.hpp>
#include <music/core/center_of_mobility.hpp>
#include <music/core/model.hpp>
#include <music/harness/scenario.hpp>
#include <music/mobility/mobility.hpp>
#include <music/random.hpp>
#include <music/workflow/expression.hpp>
#include <music/workflow/templates.hpp>

#include <algorithm>
#include <numeric>
#include <vector>

namespace music {

/// Sub-stream tags for derive_seed.
enum class Stream : std::uint64_t { World = 0, Mobility = 1, Workload = 2, Uncertainty = 3, Algorithm = 4, Groups = 5 };

inline std::uint64_t stream_seed(std::uint64_t master, int repetition, Stream s, std::uint64_t k = 0)
{
    return derive_seed(master, {static_cast<std::uint64_t>(repetition), static_cast<std::uint64_t>(s), k});
}

struct BuiltWorld
{
    World world;
    TemplateLibrary templates;
};

/// Grid, clouds, service catalog and users (with trajectories) for one
/// repetition of a scenario.
inline BuiltWorld build_world(const Scenario& sc, int repetition)
{
    BuiltWorld out;
    World& w = out.world;
    w.map = LocationMap(sc.grid_width, sc.grid_height, sc.cell_size);
    Rng rng(stream_seed(sc.seed, repetition, Stream::World));

    std::vector<int> sites = sc.local_cloud_cells;
    if (sites.empty() && sc.local_cloud_count > 0) {
        std::vector<int> all(w.map.size());
        std::iota(all.begin(), all.end(), 0);
        shuffle(all, rng);
        sites.assign(all.begin(), all.begin() + sc.local_cloud_count);
    }
    for (const int site : sites) {
        CloudNode c;
        c.id = CloudId(static_cast<std::int32_t>(w.clouds.size()));
        c.tier = Tier::Local;
        c.location = CellId(site);
        c.capacity = sc.local_capacity;
        c.covered_cells = coverage_cells(w.map, CellId(site), sc.wifi_cells);
        w.clouds.push_back(c);
    }
    const std::size_t n_local = w.clouds.size();
    for (int k = 0; k < sc.public_clouds; ++k) {
        CloudNode c;
        c.id = CloudId(static_cast<std::int32_t>(w.clouds.size()));
        c.tier = Tier::Public;
        w.clouds.push_back(c);
    }
    assign_wifi(w.map, w.clouds);

    std::vector<WorkflowTemplate> templates;
    for (const auto& [name, expr] : sc.templates) {
        templates.push_back({name, parse_workflow_expression(expr)});
        std::vector<std::string> fns;
        templates.back().root.collect_functions(fns);
        for (const auto& f : fns)
            w.intern_function(f);
    }

    const auto add_service = [&](FunctionId f, ServiceHost host, Billing billing) {
        Service s;
        s.id = ServiceId(static_cast<std::int32_t>(w.services.size()));
        s.function = f;
        s.host = host;
        s.billing = billing;
        w.services.push_back(s);
        return s.id;
    };
    for (std::size_t f = 0; f < w.function_names.size(); ++f) {
        const FunctionId fid(static_cast<std::int32_t>(f));
        std::vector<std::size_t> hosts(n_local);
        std::iota(hosts.begin(), hosts.end(), std::size_t{0});
        shuffle(hosts, rng);
        const std::size_t k = std::min<std::size_t>(hosts.size(), static_cast<std::size_t>(sc.local_per_function));
        std::sort(hosts.begin(), hosts.begin() + static_cast<std::ptrdiff_t>(k));
        for (std::size_t i = 0; i < k; ++i)
            add_service(fid, OnCloud{w.clouds[hosts[i]].id}, Billing::Compute);
        const bool streaming = std::find(sc.streaming_functions.begin(), sc.streaming_functions.end(),
                                         w.function_names[f]) != sc.streaming_functions.end();
        for (std::size_t c = n_local; c < w.clouds.size(); ++c)
            for (int i = 0; i < sc.public_per_function; ++i)
                add_service(fid, OnCloud{w.clouds[c].id}, streaming ? Billing::Streaming : Billing::Compute);
    }

    for (int u = 0; u < sc.users; ++u) {
        MobileUser user;
        user.id = UserId(u);
        Rng mob(stream_seed(sc.seed, repetition, Stream::Mobility, static_cast<std::uint64_t>(u)));
        MobilityParams mp;
        mp.model = bernoulli(mob, sc.random_waypoint_share) ? MobilityModel::RandomWaypoint : MobilityModel::Manhattan;
        mp.speed_min = sc.speed_min;
        mp.speed_max = sc.speed_max;
        mp.pause_max = sc.pause_max;
        mp.duration = sc.duration;
        mp.seed = mob();
        user.trajectory = generate_trajectory(mp, w.map);
        if (sc.device_services)
            for (std::size_t f = 0; f < w.function_names.size(); ++f)
                user.device_services.push_back(
                    add_service(FunctionId(static_cast<std::int32_t>(f)), OnDevice{user.id}, Billing::Compute));
        w.users.push_back(std::move(user));
    }

    out.templates = TemplateLibrary(std::move(templates), w, sc.data_kb_min, sc.data_kb_max);
    return out;
}

/// The same world with the local tier switched off: every local-cloud
/// service is withdrawn and, unless `keep_access_points`, the clouds' WiFi
/// access points go dark too, leaving 3G as the only link to the public
/// cloud. Service ids are renumbered.
inline World public_only(const World& w, bool keep_access_points = false)
{
    World out = w;
    out.services.clear();
    std::vector<ServiceId> remap(w.services.size());
    for (const auto& s : w.services) {
        const auto c = s.cloud();
        if (c && w.cloud(*c).tier == Tier::Local)
            continue;
        Service t = s;
        t.id = ServiceId(static_cast<std::int32_t>(out.services.size()));
        remap[s.id.index()] = t.id;
        out.services.push_back(t);
    }
    for (auto& u : out.users)
        for (auto& s : u.device_services)
            s = remap[s.index()];
    if (!keep_access_points) {
        for (auto& c : out.clouds)
            if (c.tier == Tier::Local)
                c.covered_cells.clear();
        assign_wifi(out.map, out.clouds);
    }
    return out;
}

/// LTW of one user: `entries` evenly spaced requests over the trajectory,
/// each in the cell occupied at the middle of its window.
inline LocationTimeWorkflow build_ltw(const Scenario& sc, const BuiltWorld& bw, UserId user, bool group_member,
                                      int repetition)
{
    const MobileUser& mu = bw.world.user(user);
    Rng rng(stream_seed(sc.seed, repetition, Stream::Workload, static_cast<std::uint64_t>(user.value)));
    LocationTimeWorkflow ltw;
    ltw.user = user;
    const double duration = mu.trajectory.duration();
    const double window = duration / sc.ltw_entries;
    for (int i = 0; i < sc.ltw_entries; ++i) {
        LtwEntry e;
        e.cell = mu.trajectory.cell_at((i + 0.5) * window);
        e.time_window = window;
        int tid = -1;
        if (group_member) {
            tid = bw.templates.find(sc.group_template);
        } else {
            double draw = uniform01(rng);
            for (const auto& [name, share] : sc.single_mix) {
                tid = bw.templates.find(name);
                if (draw < share)
                    break;
                draw -= share;
            }
        }
        e.template_id = tid;
        e.workflow = bw.templates.instantiate(tid, rng);
        ltw.entries.push_back(std::move(e));
    }
    return ltw;
}

/// Splits users into `count` groups of near-equal size. Spatial formation
/// walks the grid row by row in a serpentine and cuts the users, ordered by
/// center of mobility, into consecutive runs; random formation shuffles.
inline Grouping form_groups(const Scenario& sc, const World& w, int count, int repetition)
{
    std::vector<std::size_t> order(w.users.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (sc.group_formation == GroupFormation::Spatial) {
        std::vector<long> key(w.users.size());
        for (std::size_t u = 0; u < w.users.size(); ++u) {
            const CellId c = center_of_mobility(w.users[u].trajectory, w.map);
            const int row = w.map.row(c);
            const int col = w.map.column(c);
            key[u] = static_cast<long>(row) * w.map.width() + (row % 2 == 0 ? col : w.map.width() - 1 - col);
        }
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    } else {
        Rng rng(stream_seed(sc.seed, repetition, Stream::Groups));
        shuffle(order, rng);
    }
    Grouping out(static_cast<std::size_t>(count));
    const std::size_t n = order.size();
    for (std::size_t g = 0, at = 0; g < out.size(); ++g) {
        const std::size_t size = n / out.size() + (g < n % out.size() ? 1 : 0);
        out[g].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                      order.begin() + static_cast<std::ptrdiff_t>(at + size));
        at += size;
    }
    return out;
}

} // namespace music

#endif // MUSIC_HARNESS_WORLD_BUILDER_HPP
