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

#ifndef MUSIC_CORE_CENTER_OF_MOBILITY_HPP
#define MUSIC_CORE_CENTER_OF_MOBILITY_HPP

#include <music/core/model.hpp>

#include <span>

namespace music {

/// Dwell-time weighted mean of the visited cell centers.
inline Vec2 weighted_mean_position(const Trajectory& trajectory, const LocationMap& map)
{
    if (trajectory.empty())
        throw InvalidTrajectory("center of mobility needs at least one entry");
    Vec2 acc;
    double total = 0.0;
    for (const auto& e : trajectory.entries) {
        if (!(e.dwell > 0.0))
            throw InvalidTrajectory("dwell times must be positive");
        acc = acc + map.center(e.cell) * e.dwell;
        total += e.dwell;
    }
    return acc / total;
}

/// Cell nearest to where the user spends its time.
inline CellId center_of_mobility(const Trajectory& trajectory, const LocationMap& map)
{
    return map.nearest(weighted_mean_position(trajectory, map));
}

struct GroupCenter
{
    Vec2 position; ///< mean of the members' center-of-mobility cell centers
    CellId cell;   ///< nearest cell to position, lowest id on ties
};

/// Group variant: averages the members' center vectors rather than picking a
/// cell directly, then snaps to the nearest cell for registry queries.
inline GroupCenter center_of_group_mobility(const UserGroup& group, std::span<const MobileUser> users,
                                            const LocationMap& map)
{
    if (group.members.empty())
        throw InvalidGroup("group " + std::to_string(group.id.value) + " has no members");
    Vec2 acc;
    for (const UserId member : group.members) {
        if (!member.valid() || member.index() >= users.size())
            throw InvalidGroup("member " + std::to_string(member.value) + " is not a known user");
        acc = acc + map.center(center_of_mobility(users[member.index()].trajectory, map));
    }
    const Vec2 mean = acc / static_cast<double>(group.members.size());
    return {mean, map.nearest(mean)};
}

} // namespace music

#endif // MUSIC_CORE_CENTER_OF_MOBILITY_HPP
