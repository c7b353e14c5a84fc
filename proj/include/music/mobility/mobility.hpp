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

#ifndef MUSIC_MOBILITY_MOBILITY_HPP
#define MUSIC_MOBILITY_MOBILITY_HPP

#include <music/core/model.hpp>
#include <music/error.hpp>
#include <music/random.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

namespace music {

enum class MobilityModel { RandomWaypoint, Manhattan };

inline const char* to_string(MobilityModel m)
{
    return m == MobilityModel::RandomWaypoint ? "random_waypoint" : "manhattan";
}

struct MobilityParams
{
    MobilityModel model = MobilityModel::RandomWaypoint;
    double speed_min = 1.0;  ///< m/s
    double speed_max = 10.0; ///< m/s
    double pause_max = 10.0; ///< s, random waypoint only
    double duration = 600.0; ///< s
    std::uint64_t seed = 0;
    /// Manhattan turn probabilities at an intersection.
    double p_straight = 0.5;
    double p_left = 0.25;
    double p_right = 0.25;
    /// Sampling step: each step's time is credited to the cell occupied at
    /// the end of the step.
    double step = 1.0;

    void validate() const
    {
        if (!(speed_min > 0.0) || speed_max < speed_min)
            throw InvalidInput("mobility needs 0 < speed_min <= speed_max");
        if (!(duration > 0.0))
            throw InvalidInput("mobility duration must be positive");
        if (pause_max < 0.0)
            throw InvalidInput("pause_max must be non-negative");
        if (!(step > 0.0))
            throw InvalidInput("sampling step must be positive");
        if (p_straight < 0 || p_left < 0 || p_right < 0 || std::abs(p_straight + p_left + p_right - 1.0) > 1e-9)
            throw InvalidInput("turn probabilities must be non-negative and sum to 1");
    }
};

/// Piece of continuous motion: linear from `from` to `to` over [start, end].
/// A pause has from == to.
struct MotionPhase
{
    double start = 0.0;
    double end = 0.0;
    Vec2 from;
    Vec2 to;

    [[nodiscard]] Vec2 at(double t) const
    {
        if (end <= start)
            return to;
        const double f = std::clamp((t - start) / (end - start), 0.0, 1.0);
        return from + (to - from) * f;
    }
};

/// Samples contiguous phases every `step` seconds up to `duration` and merges
/// consecutive samples in the same cell into one trajectory entry.
inline Trajectory sample_phases(const std::vector<MotionPhase>& phases, const LocationMap& map, double duration,
                                double step)
{
    Trajectory out;
    if (phases.empty())
        return out;
    std::size_t k = 0;
    double t = 0.0;
    while (t < duration) {
        const double next = std::min(duration, t + step);
        const double dt = next - t;
        while (k + 1 < phases.size() && phases[k].end < next)
            ++k;
        const CellId cell = map.locate(phases[k].at(next));
        if (!out.entries.empty() && out.entries.back().cell == cell)
            out.entries.back().dwell += dt;
        else
            out.entries.push_back({cell, dt});
        t = next;
    }
    return out;
}

namespace detail {

inline Vec2 random_cell_center(const LocationMap& map, Rng& rng)
{
    return map.center(CellId(static_cast<std::int32_t>(uniform_index(rng, map.size()))));
}

} // namespace detail

/// Random waypoint: repeatedly pick a uniformly random cell center, travel
/// there in a straight line at a speed uniform in [speed_min, speed_max], then
/// pause uniformly in [0, pause_max].
inline Trajectory generate_random_waypoint(const MobilityParams& params, const LocationMap& map)
{
    params.validate();
    Rng rng(params.seed);
    std::vector<MotionPhase> phases;
    Vec2 pos = detail::random_cell_center(map, rng);
    double t = 0.0;
    while (t < params.duration) {
        const Vec2 dest = detail::random_cell_center(map, rng);
        const double speed = uniform(rng, params.speed_min, params.speed_max);
        const double travel = distance(pos, dest) / speed;
        if (travel > 0.0) {
            phases.push_back({t, t + travel, pos, dest});
            t += travel;
        }
        const double pause = uniform(rng, 0.0, params.pause_max);
        if (pause > 0.0) {
            phases.push_back({t, t + pause, dest, dest});
            t += pause;
        }
        pos = dest;
    }
    return sample_phases(phases, map, params.duration, params.step);
}

struct TurnCounts
{
    std::uint64_t straight = 0;
    std::uint64_t left = 0;
    std::uint64_t right = 0;

    [[nodiscard]] std::uint64_t total() const { return straight + left + right; }
};

/// Manhattan model: movement along the row and column lanes through cell
/// centers. At every intersection the walker goes straight, left or right with
/// the configured probabilities, renormalized over the directions that stay on
/// the map (U-turn when none does). The speed is redrawn at every
/// intersection. `interior_turns`, when given, counts the decisions taken at
/// intersections where all three choices were available.
inline Trajectory generate_manhattan(const MobilityParams& params, const LocationMap& map,
                                     TurnCounts* interior_turns = nullptr)
{
    params.validate();
    Rng rng(params.seed);

    static constexpr std::array<std::array<int, 2>, 4> dirs{{{1, 0}, {0, 1}, {-1, 0}, {0, -1}}};
    const auto inside = [&](int col, int row) { return col >= 0 && row >= 0 && col < map.width() && row < map.height(); };

    CellId here(static_cast<std::int32_t>(uniform_index(rng, map.size())));
    int col = map.column(here);
    int row = map.row(here);

    int heading = -1;
    {
        std::vector<int> valid;
        for (int d = 0; d < 4; ++d)
            if (inside(col + dirs[d][0], row + dirs[d][1]))
                valid.push_back(d);
        if (!valid.empty())
            heading = valid[uniform_index(rng, valid.size())];
    }

    std::vector<MotionPhase> phases;
    double t = 0.0;
    if (heading < 0) {
        // 1x1 map: nowhere to go.
        phases.push_back({0.0, params.duration, map.center(here), map.center(here)});
        return sample_phases(phases, map, params.duration, params.step);
    }

    bool first = true;
    while (t < params.duration) {
        if (!first) {
            // straight, left, right relative to the current heading
            const std::array<int, 3> options{heading, (heading + 1) % 4, (heading + 3) % 4};
            const std::array<double, 3> weights{params.p_straight, params.p_left, params.p_right};
            std::array<bool, 3> ok{};
            double mass = 0.0;
            for (int i = 0; i < 3; ++i) {
                ok[i] = inside(col + dirs[options[i]][0], row + dirs[options[i]][1]);
                if (ok[i])
                    mass += weights[i];
            }
            if (mass > 0.0) {
                double u = uniform01(rng) * mass;
                int chosen = -1;
                for (int i = 0; i < 3; ++i) {
                    if (!ok[i] || weights[i] <= 0.0)
                        continue;
                    chosen = i;
                    if (u < weights[i])
                        break;
                    u -= weights[i];
                }
                heading = options[chosen];
                if (interior_turns && ok[0] && ok[1] && ok[2]) {
                    if (chosen == 0)
                        ++interior_turns->straight;
                    else if (chosen == 1)
                        ++interior_turns->left;
                    else
                        ++interior_turns->right;
                }
            } else {
                heading = (heading + 2) % 4;
            }
        }
        first = false;
        const int ncol = col + dirs[heading][0];
        const int nrow = row + dirs[heading][1];
        const double speed = uniform(rng, params.speed_min, params.speed_max);
        const double travel = map.cell_size() / speed;
        phases.push_back({t, t + travel, map.center(map.at(col, row)), map.center(map.at(ncol, nrow))});
        t += travel;
        col = ncol;
        row = nrow;
    }
    return sample_phases(phases, map, params.duration, params.step);
}

inline Trajectory generate_trajectory(const MobilityParams& params, const LocationMap& map)
{
    return params.model == MobilityModel::RandomWaypoint ? generate_random_waypoint(params, map)
                                                         : generate_manhattan(params, map);
}

} // namespace music

#endif // MUSIC_MOBILITY_MOBILITY_HPP
