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

#ifndef MUSIC_WORKFLOW_QOS_HPP
#define MUSIC_WORKFLOW_QOS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace music {

enum class Dimension { Price = 0, Power = 1, Delay = 2 };

inline constexpr std::array<Dimension, 3> all_dimensions{Dimension::Price, Dimension::Power, Dimension::Delay};

inline const char* to_string(Dimension d)
{
    switch (d) {
    case Dimension::Price: return "price";
    case Dimension::Power: return "power";
    case Dimension::Delay: return "delay";
    }
    return "?";
}

/// (price, power, delay) in dollars, millijoules and milliseconds, or the
/// dimensionless normalized counterpart.
struct QoSTriple
{
    double price = 0.0;
    double power = 0.0;
    double delay = 0.0;

    [[nodiscard]] constexpr double operator[](Dimension d) const
    {
        return d == Dimension::Price ? price : d == Dimension::Power ? power : delay;
    }

    constexpr double& operator[](Dimension d)
    {
        return d == Dimension::Price ? price : d == Dimension::Power ? power : delay;
    }

    constexpr QoSTriple& operator+=(const QoSTriple& o)
    {
        price += o.price;
        power += o.power;
        delay += o.delay;
        return *this;
    }

    friend constexpr QoSTriple operator+(QoSTriple a, const QoSTriple& b) { return a += b; }
    friend constexpr QoSTriple operator*(const QoSTriple& a, double k)
    {
        return {a.price * k, a.power * k, a.delay * k};
    }
    friend constexpr bool operator==(const QoSTriple&, const QoSTriple&) = default;

    friend std::ostream& operator<<(std::ostream& os, const QoSTriple& q)
    {
        return os << "(price=" << q.price << ", power=" << q.power << ", delay=" << q.delay << ")";
    }
};

inline constexpr QoSTriple componentwise_max(const QoSTriple& a, const QoSTriple& b)
{
    return {std::max(a.price, b.price), std::max(a.power, b.power), std::max(a.delay, b.delay)};
}

inline constexpr QoSTriple componentwise_min(const QoSTriple& a, const QoSTriple& b)
{
    return {std::min(a.price, b.price), std::min(a.power, b.power), std::min(a.delay, b.delay)};
}

/// True when a is no worse than b in every dimension (lower is better).
inline constexpr bool dominates_or_equal(const QoSTriple& a, const QoSTriple& b)
{
    return a.price <= b.price && a.power <= b.power && a.delay <= b.delay;
}

/// Per-dimension bounds of a QoS quantity over some set of choices.
struct Extrema
{
    QoSTriple max;
    QoSTriple min;

    friend constexpr Extrema operator+(const Extrema& a, const Extrema& b) { return {a.max + b.max, a.min + b.min}; }
    friend constexpr bool operator==(const Extrema&, const Extrema&) = default;
};

} // namespace music

#endif // MUSIC_WORKFLOW_QOS_HPP
