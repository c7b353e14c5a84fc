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

#ifndef MUSIC_ALLOCATION_ALLOCATORS_HPP
#define MUSIC_ALLOCATION_ALLOCATORS_HPP

#include <music/allocation/find_service.hpp>
#include <music/allocation/problem.hpp>
#include <music/allocation/utility.hpp>
#include <music/random.hpp>
#include <music/registry/registry.hpp>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace music {

/// Disjoint sets of user indices (into an AllocationInstance).
using Grouping = std::vector<std::vector<std::size_t>>;

struct AllocationResult
{
    std::string algorithm;
    std::vector<ExecutionPlan> plans; ///< one per user, instance order
    std::vector<PlanEvaluation> evaluations;
    double utility = 0.0;
    bool feasible = true;
    std::vector<Violation> violations;
    int iterations = 0;
    std::vector<int> admissions; ///< per cloud
};

/// Objective value: the plain mean of user utilities, or the mean of the
/// groups' mean utilities when a grouping is given.
inline double objective(std::span<const PlanEvaluation> evaluations, const Grouping* groups = nullptr)
{
    if (!groups) {
        std::vector<NormalizedQoS> n;
        for (const auto& e : evaluations)
            n.push_back(e.normalized);
        return utility_single(n);
    }
    std::vector<double> per_group;
    for (const auto& g : *groups) {
        std::vector<NormalizedQoS> n;
        for (const std::size_t i : g)
            n.push_back(evaluations[i].normalized);
        per_group.push_back(utility_group(n));
    }
    return group_objective(per_group);
}

/// Evaluates every plan, checks budgets and capacities and fills the
/// summary fields.
inline void finalize(AllocationResult& r, const AllocationInstance& inst, const Grouping* groups = nullptr)
{
    r.evaluations.clear();
    std::vector<QoSTriple> raw;
    for (std::size_t i = 0; i < r.plans.size(); ++i) {
        r.evaluations.push_back(inst.evaluate(i, r.plans[i]));
        raw.push_back(r.evaluations.back().raw);
    }
    r.utility = r.evaluations.empty() ? 0.0 : objective(r.evaluations, groups);
    r.admissions = inst.admissions(r.plans);
    auto v = check_constraints(raw, inst.budgets(), inst.world(), r.admissions);
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (const Dimension d : all_dimensions)
            if (raw[i][d] > inst.user(i).budget[d])
                v.push_back({"user" + std::to_string(i) + ":" + to_string(d), raw[i][d], inst.user(i).budget[d]});
    r.violations.insert(r.violations.end(), v.begin(), v.end());
    r.feasible = r.violations.empty();
}

namespace detail {

struct UnitProposal
{
    std::vector<ExecutionPlan> plans;
    CapacityLedger ledger;
    double utility = 0.0;
};

/// One proposal for a set of users sharing a search center: each member gets
/// a find_service plan and is admitted, in order, to a private copy of the
/// ledger.
inline UnitProposal propose(const AllocationInstance& inst, std::span<const std::size_t> members, Vec2 center,
                            const CapacityLedger& ledger, const AnnealingParams& params, Rng& rng)
{
    UnitProposal out{{}, ledger, 0.0};
    std::vector<NormalizedQoS> n;
    for (const std::size_t u : members) {
        ExecutionPlan plan = find_service(inst, u, center, out.ledger, params, rng);
        if (!admit_plan(inst, plan, out.ledger))
            throw NoFeasibleCandidates("capacity changed while planning user " + std::to_string(u));
        n.push_back(inst.evaluate(u, plan).normalized);
        out.plans.push_back(std::move(plan));
    }
    out.utility = utility_group(n);
    return out;
}

/// Simulated annealing over whole proposals for one unit (a user or a group).
/// Returns the best proposal seen; `iterations` receives the loop count.
inline UnitProposal anneal(const AllocationInstance& inst, std::span<const std::size_t> members, Vec2 center,
                           const CapacityLedger& ledger, const AnnealingParams& params, Rng& rng, int& iterations)
{
    UnitProposal current = propose(inst, members, center, ledger, params, rng);
    UnitProposal best = current;
    for (int j = 0; j < params.max_iter; ++j) {
        UnitProposal next = propose(inst, members, center, ledger, params, rng);
        const double delta = next.utility - current.utility;
        bool accept = delta > 0.0;
        if (!accept) {
            const double u = uniform01(rng);
            accept = params.literal_acceptance ? std::exp(static_cast<double>(params.max_iter)) >= u
                                               : u < std::exp(delta / params.temperature(j));
        }
        if (accept)
            current = std::move(next);
        if (current.utility > best.utility)
            best = current;
        ++iterations;
    }
    return best;
}

inline Vec2 snapped(const LocationMap& map, Vec2 p) { return map.center(map.nearest(p)); }

} // namespace detail

/// MuSIC for independent users: users are planned one after another in a
/// seed-dependent order, each around its own center of mobility, against a
/// shared capacity ledger.
inline AllocationResult music(const AllocationInstance& inst, const AnnealingParams& params, std::uint64_t seed)
{
    params.validate();
    Rng rng(seed);
    AllocationResult r;
    r.algorithm = "music";
    r.plans.resize(inst.size());
    std::vector<std::size_t> order(inst.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
    CapacityLedger ledger(inst.world());
    for (const std::size_t u : order) {
        const std::size_t members[] = {u};
        const Vec2 center = inst.world().map.center(inst.user(u).center);
        auto best = detail::anneal(inst, members, center, ledger, params, rng, r.iterations);
        ledger = std::move(best.ledger);
        r.plans[u] = std::move(best.plans.front());
    }
    finalize(r, inst);
    return r;
}

/// G-MuSIC: every group is annealed as one unit around the mean of its
/// members' centers of mobility. Groups are taken in a seed-dependent order.
inline AllocationResult g_music(const AllocationInstance& inst, const Grouping& groups, const AnnealingParams& params,
                                std::uint64_t seed)
{
    params.validate();
    std::vector<bool> seen(inst.size(), false);
    for (const auto& g : groups) {
        if (g.empty())
            throw InvalidGroup("empty group");
        for (const std::size_t u : g) {
            if (u >= inst.size() || seen[u])
                throw InvalidGroup("groups must be disjoint sets of known users");
            seen[u] = true;
        }
    }
    Rng rng(seed);
    AllocationResult r;
    r.algorithm = "gmusic";
    r.plans.resize(inst.size());
    std::vector<std::size_t> order(groups.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
    CapacityLedger ledger(inst.world());
    const LocationMap& map = inst.world().map;
    for (const std::size_t gi : order) {
        const auto& g = groups[gi];
        Vec2 acc;
        for (const std::size_t u : g)
            acc = acc + map.center(inst.user(u).center);
        const Vec2 center = detail::snapped(map, acc / static_cast<double>(g.size()));
        auto best = detail::anneal(inst, g, center, ledger, params, rng, r.iterations);
        ledger = std::move(best.ledger);
        for (std::size_t k = 0; k < g.size(); ++k)
            r.plans[g[k]] = std::move(best.plans[k]);
    }
    for (std::size_t u = 0; u < inst.size(); ++u)
        if (!seen[u])
            throw InvalidGroup("user " + std::to_string(u) + " belongs to no group");
    finalize(r, inst, &groups);
    return r;
}

struct RsaParams
{
    int retries = 100; ///< redraws per user when a budget is broken
};

/// Random service allocation: every occurrence gets a uniformly random
/// realizing service whose cloud has room. Users are served in a
/// seed-dependent order.
inline AllocationResult allocate_rsa(const AllocationInstance& inst, std::uint64_t seed, RsaParams params = {})
{
    Rng rng(seed);
    AllocationResult r;
    r.algorithm = "rsa";
    r.plans.resize(inst.size());
    std::vector<std::size_t> order(inst.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
    CapacityLedger ledger(inst.world());
    const World& world = inst.world();
    for (const std::size_t u : order) {
        const UserProblem& p = inst.user(u);
        const ConstraintVector budget = inst.effective_budget(u);
        std::vector<std::vector<std::vector<ServiceId>>> table(p.candidates.size());
        for (std::size_t e = 0; e < p.candidates.size(); ++e)
            for (const auto& cands : p.candidates[e]) {
                auto& open = table[e].emplace_back();
                for (const ServiceId s : cands) {
                    const auto c = world.service(s).cloud();
                    if (!c || ledger.has_room(*c))
                        open.push_back(s);
                }
                if (open.empty())
                    throw NoFeasibleCandidates("every candidate of user " + std::to_string(u) + " is full");
            }
        ExecutionPlan plan;
        for (int attempt = 0; attempt <= params.retries; ++attempt) {
            plan = ExecutionPlan::empty_for(p.ltw);
            for (std::size_t e = 0; e < table.size(); ++e)
                for (std::size_t o = 0; o < table[e].size(); ++o)
                    plan.assignments[e][o] = table[e][o][uniform_index(rng, table[e][o].size())];
            if (budget.unconstrained() || budget.admits(inst.raw_qos(u, plan)))
                break;
        }
        if (!admit_plan(inst, plan, ledger))
            throw NoFeasibleCandidates("capacity changed while planning user " + std::to_string(u));
        r.plans[u] = std::move(plan);
    }
    finalize(r, inst);
    return r;
}

/// Where Greedy evaluates a candidate's QoS.
enum class GreedyContext {
    CurrentCell, ///< the user's cell when the allocation is made (first LTW entry)
    EntryCell,   ///< the cell predicted for each LTW entry
};

struct GreedyParams
{
    GreedyContext context = GreedyContext::CurrentCell;
};

/// Greedy allocation: per occurrence, the realizing service with room that
/// has the largest normalized total QoS; ties go to the lowest id. Users are
/// served in instance order.
inline AllocationResult allocate_greedy(const AllocationInstance& inst, GreedyParams params = {})
{
    AllocationResult r;
    r.algorithm = "greedy";
    r.plans.resize(inst.size());
    CapacityLedger ledger(inst.world());
    const World& world = inst.world();
    for (std::size_t u = 0; u < inst.size(); ++u) {
        const UserProblem& p = inst.user(u);
        const std::optional<CellId> cell =
            params.context == GreedyContext::CurrentCell ? std::optional(p.ltw.entries.front().cell) : std::nullopt;
        ExecutionPlan plan = ExecutionPlan::empty_for(p.ltw);
        for (std::size_t e = 0; e < p.candidates.size(); ++e)
            for (std::size_t o = 0; o < p.candidates[e].size(); ++o) {
                std::vector<ServiceId> open;
                std::vector<QoSTriple> q;
                for (const ServiceId s : p.candidates[e][o]) {
                    const auto c = world.service(s).cloud();
                    if (c && !ledger.has_room(*c))
                        continue;
                    open.push_back(s);
                    q.push_back(inst.occurrence_qos(u, e, o, s, cell));
                }
                if (open.empty())
                    throw NoFeasibleCandidates("no candidate with room for user " + std::to_string(u));
                const auto scored = score_candidates(open, q);
                // sorted ascending by (total, id): the best total is last, and
                // among equal totals the lowest id comes first
                std::size_t k = scored.size() - 1;
                while (k > 0 && scored[k - 1].total == scored.back().total)
                    --k;
                plan.assignments[e][o] = scored[k].service;
            }
        if (!admit_plan(inst, plan, ledger))
            throw NoFeasibleCandidates("capacity exhausted for user " + std::to_string(u));
        r.plans[u] = std::move(plan);
    }
    finalize(r, inst);
    return r;
}

} // namespace music

#endif // MUSIC_ALLOCATION_ALLOCATORS_HPP
