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

#ifndef MUSIC_CORE_GEOMETRY_HPP
#define MUSIC_CORE_GEOMETRY_HPP

#include <algorithm>
#include <cmath>

namespace music {

/// Point or displacement in the plane, meters.
struct Vec2
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
    friend constexpr bool operator==(Vec2, Vec2) = default;
};

inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Axis-aligned rectangle, closed on all sides.
struct Rect
{
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    static constexpr Rect of_point(Vec2 p) { return {p.x, p.y, p.x, p.y}; }

    /// Smallest rectangle containing the disc of radius r around c.
    static constexpr Rect around(Vec2 c, double r) { return {c.x - r, c.y - r, c.x + r, c.y + r}; }

    [[nodiscard]] constexpr double area() const { return (max_x - min_x) * (max_y - min_y); }

    [[nodiscard]] constexpr bool intersects(const Rect& o) const
    {
        return min_x <= o.max_x && o.min_x <= max_x && min_y <= o.max_y && o.min_y <= max_y;
    }

    [[nodiscard]] constexpr bool contains(const Rect& o) const
    {
        return min_x <= o.min_x && o.max_x <= max_x && min_y <= o.min_y && o.max_y <= max_y;
    }

    [[nodiscard]] constexpr bool contains(Vec2 p) const
    {
        return min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y;
    }

    [[nodiscard]] constexpr Rect united(const Rect& o) const
    {
        return {std::min(min_x, o.min_x), std::min(min_y, o.min_y), std::max(max_x, o.max_x),
                std::max(max_y, o.max_y)};
    }

    [[nodiscard]] constexpr double enlargement(const Rect& o) const { return united(o).area() - area(); }

    friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

} // namespace music

#endif // MUSIC_CORE_GEOMETRY_HPP
