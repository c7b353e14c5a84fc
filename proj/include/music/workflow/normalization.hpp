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

#ifndef MUSIC_WORKFLOW_NORMALIZATION_HPP
#define MUSIC_WORKFLOW_NORMALIZATION_HPP

#include <music/error.hpp>
#include <music/workflow/qos.hpp>

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

namespace music {

/// Normalized QoS: every component in [0,1], higher is better.
struct NormalizedQoS
{
    QoSTriple value;

    /// Euclidean norm of the three components, in [0, sqrt(3)].
    [[nodiscard]] double total() const
    {
        return std::sqrt(value.price * value.price + value.power * value.power + value.delay * value.delay);
    }

    /// Worst of the three components; the per-user utility term.
    [[nodiscard]] double worst() const { return std::min({value.price, value.power, value.delay}); }
};

/// (max - v) / (max - min), or 1 when the range collapses. Values a hair
/// outside [min, max] from floating-point summation order are clamped;
/// anything further out means the extrema belong to a different set.
inline double normalize_value(double v, double max, double min)
{
    if (max < min)
        throw ExtremaMismatch("max " + std::to_string(max) + " below min " + std::to_string(min));
    const double tol = 1e-9 * std::max({1.0, std::abs(max), std::abs(min)});
    if (v > max + tol || v < min - tol)
        throw ExtremaMismatch("value " + std::to_string(v) + " outside [" + std::to_string(min) + ", " +
                              std::to_string(max) + "]");
    if (max - min <= tol)
        return 1.0;
    return std::clamp((max - v) / (max - min), 0.0, 1.0);
}

inline NormalizedQoS normalize(const QoSTriple& raw, const Extrema& bounds)
{
    NormalizedQoS n;
    for (const Dimension d : all_dimensions)
        n.value[d] = normalize_value(raw[d], bounds.max[d], bounds.min[d]);
    return n;
}

/// Extrema of a service's QoS over the candidate set it was drawn from.
inline Extrema service_extrema(std::span<const QoSTriple> candidates)
{
    if (candidates.empty())
        throw NoRealizingService("cannot take extrema of an empty candidate set");
    Extrema e{candidates.front(), candidates.front()};
    for (const auto& q : candidates) {
        e.max = componentwise_max(e.max, q);
        e.min = componentwise_min(e.min, q);
    }
    return e;
}

/// A service's QoS normalized against the other services realizing the same
/// function in the same context.
inline NormalizedQoS normalize_service(const QoSTriple& raw, const Extrema& function_bounds)
{
    return normalize(raw, function_bounds);
}

/// Workflow QoS normalized against the workflow's cheapest and most expensive
/// plans (C^min, C^max).
inline NormalizedQoS normalize_workflow_qos(const QoSTriple& raw, const Extrema& workflow_bounds)
{
    return normalize(raw, workflow_bounds);
}

/// LTW QoS normalized against the LTW's extreme plans.
inline NormalizedQoS normalize_ltw_qos(const QoSTriple& raw, const Extrema& ltw_bounds)
{
    return normalize(raw, ltw_bounds);
}

} // namespace music

#endif // MUSIC_WORKFLOW_NORMALIZATION_HPP
