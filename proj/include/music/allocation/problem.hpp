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

#ifndef MUSIC_ALLOCATION_PROBLEM_HPP
#define MUSIC_ALLOCATION_PROBLEM_HPP

#include <music/allocation/utility.hpp>
#include <music/core/center_of_mobility.hpp>
#include <music/core/model.hpp>
#include <music/profiles/profiles.hpp>
#include <music/registry/registry.hpp>
#include <music/workflow/normalization.hpp>
#include <music/workflow/workflow.hpp>

#include <algorithm>
#include <span>
#include <vector>

namespace music {

/// One user's share of an allocation problem: the LTW to plan for, the
/// services able to realize each occurrence, and the LTW extrema that
/// normalize its QoS.
struct UserProblem
{
    UserId user;
    LocationTimeWorkflow ltw;
    /// [entry][occurrence]
    std::vector<std::vector<FunctionNode>> occurrences;
    /// [entry][occurrence] -> every service realizing the occurrence's
    /// function: all cloud services plus the user's own device services.
    std::vector<std::vector<std::vector<ServiceId>>> candidates;
    Extrema bounds;
    CellId center;
    Vec2 center_position;
    /// Budgets on this user's own LTW QoS, on top of the population means.
    ConstraintVector budget;

    /// |Gamma|, the number of complete plans.
    [[nodiscard]] double plan_count() const
    {
        double n = 1.0;
        for (const auto& e : candidates)
            for (const auto& c : e)
                n *= static_cast<double>(c.size());
        return n;
    }
};

struct PlanEvaluation
{
    QoSTriple raw;
    NormalizedQoS normalized;
    double utility = 0.0;
};

/// Shared, read-only inputs of every allocator: the world, its cost model
/// and registry, budgets, and the per-user problems.
class AllocationInstance
{
public:
    AllocationInstance(const World& world, const ProfileSet& profiles, const ServiceRegistry& registry,
                       ConstraintVector budgets = {})
        : world_(&world), cost_(world, profiles), registry_(&registry), budgets_(budgets)
    {
        budgets_.validate();
        by_function_.resize(world.function_names.size());
        for (const auto& s : world.services)
            if (!s.on_device() && s.function.index() < by_function_.size())
                by_function_[s.function.index()].push_back(s.id);
    }

    /// Adds a user with the LTW to plan for. The center of mobility comes
    /// from the user's trajectory, or from the LTW cells weighted by their
    /// time windows when the trajectory is empty.
    std::size_t add_user(UserId user, LocationTimeWorkflow ltw)
    {
        if (ltw.entries.empty())
            throw InvalidInput("user " + std::to_string(user.value) + " has an empty LTW");
        const MobileUser& mu = world_->user(user);
        UserProblem p;
        p.user = user;
        p.ltw = std::move(ltw);
        p.ltw.user = user;
        for (const auto& e : p.ltw.entries) {
            if (!world_->map.contains(e.cell))
                throw InvalidInput("LTW cell " + std::to_string(e.cell.value) + " is off the map");
            p.occurrences.push_back(e.workflow.occurrences());
            auto& per_entry = p.candidates.emplace_back();
            for (const auto& f : p.occurrences.back())
                per_entry.push_back(realizing(mu, f.function));
        }
        p.bounds = ltw_extrema(p.ltw, std::span<const std::vector<std::vector<ServiceId>>>(p.candidates),
                               cost_.for_ltw(p.ltw));
        Trajectory t = mu.trajectory;
        if (t.empty())
            for (const auto& e : p.ltw.entries)
                t.entries.push_back({e.cell, e.time_window > 0.0 ? e.time_window : 1.0});
        p.center_position = weighted_mean_position(t, world_->map);
        p.center = world_->map.nearest(p.center_position);
        users_.push_back(std::move(p));
        return users_.size() - 1;
    }

    [[nodiscard]] const World& world() const { return *world_; }
    [[nodiscard]] const CostModel& cost() const { return cost_; }
    [[nodiscard]] const ServiceRegistry& registry() const { return *registry_; }
    [[nodiscard]] const ConstraintVector& budgets() const { return budgets_; }
    void set_budgets(const ConstraintVector& b)
    {
        b.validate();
        budgets_ = b;
    }

    void set_user_budget(std::size_t i, const ConstraintVector& b)
    {
        b.validate();
        users_.at(i).budget = b;
    }

    /// Budget a single user's plan is held to while it is built: its own
    /// budget, further capped by the population means.
    [[nodiscard]] ConstraintVector effective_budget(std::size_t i) const
    {
        const ConstraintVector& own = users_.at(i).budget;
        return {std::min(own.price, budgets_.price), std::min(own.power, budgets_.power),
                std::min(own.delay, budgets_.delay)};
    }

    [[nodiscard]] std::size_t size() const { return users_.size(); }
    [[nodiscard]] const UserProblem& user(std::size_t i) const { return users_.at(i); }
    [[nodiscard]] std::span<const UserProblem> users() const { return users_; }

    /// Services realizing `function` for `user`, sorted by id.
    [[nodiscard]] std::vector<ServiceId> realizing(const MobileUser& user, FunctionId function) const
    {
        std::vector<ServiceId> out;
        if (function.index() < by_function_.size())
            out = by_function_[function.index()];
        for (const ServiceId s : user.device_services)
            if (world_->service(s).function == function)
                out.push_back(s);
        std::sort(out.begin(), out.end());
        if (out.empty())
            throw NoRealizingService("no service realizes function " + std::to_string(function.value) +
                                     " for user " + std::to_string(user.id.value));
        return out;
    }

    [[nodiscard]] QoSTriple raw_qos(std::size_t i, const ExecutionPlan& plan) const
    {
        const UserProblem& p = users_.at(i);
        return ltw_qos(p.ltw, plan, cost_.for_ltw(p.ltw));
    }

    [[nodiscard]] PlanEvaluation evaluate(std::size_t i, const ExecutionPlan& plan) const
    {
        PlanEvaluation e;
        e.raw = raw_qos(i, plan);
        e.normalized = normalize_ltw_qos(e.raw, users_.at(i).bounds);
        e.utility = e.normalized.worst();
        return e;
    }

    /// QoS of one occurrence in its entry's context, ignoring hand-offs.
    [[nodiscard]] QoSTriple occurrence_qos(std::size_t i, std::size_t entry, std::size_t occurrence,
                                           ServiceId service, std::optional<CellId> cell = {}) const
    {
        const UserProblem& p = users_.at(i);
        const LtwEntry& e = p.ltw.entries.at(entry);
        return cost_(service, cell.value_or(e.cell), p.occurrences.at(entry).at(occurrence), std::nullopt,
                     e.time_window);
    }

    /// Distinct local clouds a plan uses, sorted.
    [[nodiscard]] std::vector<CloudId> footprint(const ExecutionPlan& plan) const
    {
        std::vector<CloudId> out;
        for (const auto& entry : plan.assignments)
            for (const ServiceId s : entry) {
                const auto c = world_->service(s).cloud();
                if (c && world_->cloud(*c).tier == Tier::Local)
                    out.push_back(*c);
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    /// Users admitted per cloud for a set of plans (one per user).
    [[nodiscard]] std::vector<int> admissions(std::span<const ExecutionPlan> plans) const
    {
        std::vector<int> out(world_->clouds.size(), 0);
        for (const auto& plan : plans)
            for (const CloudId c : footprint(plan))
                ++out[c.index()];
        return out;
    }

    /// True when the plan's local clouds all have room in `ledger`.
    [[nodiscard]] bool fits(const ExecutionPlan& plan, const CapacityLedger& ledger) const
    {
        for (const CloudId c : footprint(plan))
            if (!ledger.has_room(c))
                return false;
        return true;
    }

private:
    const World* world_;
    CostModel cost_;
    const ServiceRegistry* registry_;
    ConstraintVector budgets_;
    std::vector<std::vector<ServiceId>> by_function_;
    std::vector<UserProblem> users_;
};

/// Admits every local cloud of `plan`. Returns false, leaving the ledger as it
/// was, when one of them is full.
inline bool admit_plan(const AllocationInstance& inst, const ExecutionPlan& plan, CapacityLedger& ledger)
{
    const auto clouds = inst.footprint(plan);
    std::size_t done = 0;
    for (; done < clouds.size(); ++done)
        if (!ledger.try_admit(clouds[done]))
            break;
    if (done == clouds.size())
        return true;
    for (std::size_t k = 0; k < done; ++k)
        ledger.release(clouds[k]);
    return false;
}

} // namespace music

#endif // MUSIC_ALLOCATION_PROBLEM_HPP
