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

#ifndef MUSIC_ALLOCATION_UTILITY_HPP
#define MUSIC_ALLOCATION_UTILITY_HPP

#include <music/core/model.hpp>
#include <music/error.hpp>
#include <music/workflow/normalization.hpp>
#include <music/workflow/qos.hpp>

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace music {

/// Mean over users of each user's worst normalized dimension.
inline double utility_single(std::span<const NormalizedQoS> users)
{
    if (users.empty())
        throw InvalidInput("utility of an empty user set");
    double sum = 0.0;
    for (const auto& u : users)
        sum += u.worst();
    return sum / static_cast<double>(users.size());
}

inline double utility_group(std::span<const NormalizedQoS> members)
{
    if (members.empty())
        throw InvalidGroup("utility of an empty group");
    return utility_single(members);
}

/// Mean of the groups' utilities.
inline double group_objective(std::span<const double> group_utilities)
{
    if (group_utilities.empty())
        throw InvalidGroup("objective over zero groups");
    double sum = 0.0;
    for (const double g : group_utilities)
        sum += g;
    return sum / static_cast<double>(group_utilities.size());
}

/// Budgets on the mean raw QoS of a population. Infinite means unconstrained.
struct ConstraintVector
{
    double price = std::numeric_limits<double>::infinity(); ///< dollars
    double power = std::numeric_limits<double>::infinity(); ///< mJ
    double delay = std::numeric_limits<double>::infinity(); ///< ms

    [[nodiscard]] double operator[](Dimension d) const
    {
        return d == Dimension::Price ? price : d == Dimension::Power ? power : delay;
    }

    [[nodiscard]] bool unconstrained() const
    {
        return std::isinf(price) && std::isinf(power) && std::isinf(delay);
    }

    /// Per-dimension budget check of a single QoS value.
    [[nodiscard]] bool admits(const QoSTriple& q) const
    {
        return q.price <= price && q.power <= power && q.delay <= delay;
    }

    void validate() const
    {
        for (const Dimension d : all_dimensions)
            if (std::isnan((*this)[d]) || (*this)[d] < 0.0)
                throw InvalidInput(std::string("budget on ") + to_string(d) + " must be non-negative");
    }
};

struct Violation
{
    std::string name; ///< "price", "power", "delay" or "capacity:<cloud>"
    double value = 0.0;
    double limit = 0.0;
};

/// Checks mean raw QoS against the budgets (inclusive) and every local cloud's
/// admission count against its capacity. `admissions` is indexed by cloud.
inline std::vector<Violation> check_constraints(std::span<const QoSTriple> per_user, const ConstraintVector& budgets,
                                                const World& world, std::span<const int> admissions)
{
    std::vector<Violation> out;
    if (!per_user.empty()) {
        QoSTriple mean;
        for (const auto& q : per_user)
            mean += q;
        mean = mean * (1.0 / static_cast<double>(per_user.size()));
        for (const Dimension d : all_dimensions)
            if (mean[d] > budgets[d])
                out.push_back({to_string(d), mean[d], budgets[d]});
    }
    for (const auto& c : world.clouds) {
        if (c.tier != Tier::Local || c.id.index() >= admissions.size())
            continue;
        const int n = admissions[c.id.index()];
        if (n > c.capacity)
            out.push_back({"capacity:" + std::to_string(c.id.value), static_cast<double>(n),
                           static_cast<double>(c.capacity)});
    }
    return out;
}

} // namespace music

#endif // MUSIC_ALLOCATION_UTILITY_HPP
