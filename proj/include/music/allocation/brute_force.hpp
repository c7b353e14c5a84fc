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

#ifndef MUSIC_ALLOCATION_BRUTE_FORCE_HPP
#define MUSIC_ALLOCATION_BRUTE_FORCE_HPP

#include <music/allocation/allocators.hpp>
#include <music/allocation/problem.hpp>
#include <music/error.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

namespace music {

enum class Problem { Single, Group };

struct BruteForceParams
{
    /// Ceiling on the number of complete per-user plans, summed over users.
    double plan_cap = 1e6;
    /// Ceiling on search-tree nodes when users compete for capacity or
    /// budgets.
    std::uint64_t node_cap = 200'000'000;
};

namespace detail {

/// A plan summarized by what the joint search needs: its raw QoS and the
/// local clouds it occupies (bit i = i-th local cloud).
struct ParetoPoint
{
    QoSTriple q;
    std::uint64_t mask = 0;
    std::vector<std::uint32_t> trail; ///< chosen entry-plan index per entry
};

/// Keeps the points not weakly dominated by another kept point with the same
/// mask. Equal points collapse to one.
inline void pareto_filter(std::vector<ParetoPoint>& pts)
{
    std::sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.mask != b.mask)
            return a.mask < b.mask;
        if (a.q.price != b.q.price)
            return a.q.price < b.q.price;
        if (a.q.power != b.q.power)
            return a.q.power < b.q.power;
        return a.q.delay < b.q.delay;
    });
    std::vector<ParetoPoint> kept;
    std::size_t group_start = 0;
    for (auto& p : pts) {
        if (!kept.empty() && kept.back().mask != p.mask)
            group_start = kept.size();
        bool dominated = false;
        for (std::size_t k = group_start; k < kept.size() && !dominated; ++k)
            dominated = dominates_or_equal(kept[k].q, p.q);
        if (!dominated)
            kept.push_back(std::move(p));
    }
    pts = std::move(kept);
}

struct EntryPlans
{
    std::vector<std::vector<ServiceId>> plans;
    std::vector<ParetoPoint> front; ///< trail holds the single plan index
};

class UserSolver
{
public:
    UserSolver(const AllocationInstance& inst, std::size_t user, const std::vector<int>& local_bit)
        : inst_(inst), user_(user), bit_(local_bit)
    {
    }

    /// Every Pareto-optimal plan outcome per local-cloud mask.
    std::vector<ParetoPoint> solve()
    {
        const UserProblem& p = inst_.user(user_);
        entries_.clear();
        for (std::size_t e = 0; e < p.candidates.size(); ++e)
            entries_.push_back(enumerate_entry(e));
        std::vector<ParetoPoint> acc{{QoSTriple{}, 0, {}}};
        for (const auto& ep : entries_) {
            std::vector<ParetoPoint> next;
            next.reserve(acc.size() * ep.front.size());
            for (const auto& a : acc)
                for (const auto& b : ep.front) {
                    ParetoPoint c{a.q + b.q, a.mask | b.mask, a.trail};
                    c.trail.push_back(b.trail.front());
                    next.push_back(std::move(c));
                }
            pareto_filter(next);
            acc = std::move(next);
        }
        return acc;
    }

    [[nodiscard]] ExecutionPlan plan_of(const ParetoPoint& pt) const
    {
        ExecutionPlan plan;
        for (std::size_t e = 0; e < entries_.size(); ++e)
            plan.assignments.push_back(entries_[e].plans[pt.trail[e]]);
        return plan;
    }

private:
    EntryPlans enumerate_entry(std::size_t e)
    {
        const UserProblem& p = inst_.user(user_);
        const auto& cands = p.candidates[e];
        const auto cost = inst_.cost().for_ltw(p.ltw);
        const auto entry_cost = [&](ServiceId s, const FunctionNode& f, std::optional<ServiceId> prev) {
            return cost(e, s, f, prev);
        };
        EntryPlans out;
        std::vector<std::size_t> idx(cands.size(), 0);
        std::vector<ServiceId> plan(cands.size());
        while (true) {
            std::uint64_t mask = 0;
            for (std::size_t o = 0; o < cands.size(); ++o) {
                plan[o] = cands[o][idx[o]];
                if (const auto c = inst_.world().service(plan[o]).cloud(); c && bit_[c->index()] >= 0)
                    mask |= std::uint64_t{1} << bit_[c->index()];
            }
            const QoSTriple q = aggregate_qos(p.ltw.entries[e].workflow, plan, entry_cost);
            out.front.push_back({q, mask, {static_cast<std::uint32_t>(out.plans.size())}});
            out.plans.push_back(plan);
            std::size_t o = 0;
            while (o < cands.size() && ++idx[o] == cands[o].size())
                idx[o++] = 0;
            if (o == cands.size())
                break;
        }
        pareto_filter(out.front);
        return out;
    }

    const AllocationInstance& inst_;
    std::size_t user_;
    const std::vector<int>& bit_;
    std::vector<EntryPlans> entries_;
};

struct Option
{
    double utility = 0.0;
    QoSTriple q;
    std::uint64_t mask = 0;
    std::size_t point = 0; ///< index into the user's Pareto points
};

} // namespace detail

/// Exact optimum of the allocation problem. Each user's plans are reduced to
/// the Pareto-optimal (QoS, local-cloud set) outcomes by dynamic programming
/// over LTW entries; a branch and bound then picks one outcome per user
/// subject to capacities and mean budgets. The group problem maximizes the
/// mean of group means and applies the budgets per group.
inline AllocationResult brute_force_optimal(const AllocationInstance& inst, Problem problem,
                                            const Grouping* groups = nullptr, BruteForceParams params = {})
{
    if (inst.size() == 0)
        throw InvalidInput("brute force over zero users");
    double total_plans = 0.0;
    for (const auto& u : inst.users())
        total_plans += u.plan_count();
    if (total_plans > params.plan_cap)
        throw TooLargeForEnumeration(std::to_string(static_cast<long long>(total_plans)) +
                                     " plans exceed the cap of " +
                                     std::to_string(static_cast<long long>(params.plan_cap)));

    const World& world = inst.world();
    std::vector<int> bit(world.clouds.size(), -1);
    std::vector<CloudId> bit_cloud;
    for (const auto& c : world.clouds)
        if (c.tier == Tier::Local) {
            if (bit_cloud.size() == 64)
                throw InvalidInput("brute force supports at most 64 local clouds");
            bit[c.id.index()] = static_cast<int>(bit_cloud.size());
            bit_cloud.push_back(c.id);
        }

    // Budget groups and objective weights.
    Grouping budget_groups;
    if (problem == Problem::Group) {
        if (!groups)
            throw InvalidInput("the group problem needs a grouping");
        budget_groups = *groups;
    } else {
        budget_groups.emplace_back(inst.size());
        for (std::size_t i = 0; i < inst.size(); ++i)
            budget_groups[0][i] = i;
    }
    std::vector<double> weight(inst.size(), 0.0);
    std::vector<int> group_of(inst.size(), -1);
    for (std::size_t g = 0; g < budget_groups.size(); ++g)
        for (const std::size_t u : budget_groups[g]) {
            if (u >= inst.size() || group_of[u] >= 0)
                throw InvalidGroup("groups must be disjoint sets of known users");
            group_of[u] = static_cast<int>(g);
            weight[u] = problem == Problem::Group
                            ? 1.0 / (static_cast<double>(budget_groups.size()) * budget_groups[g].size())
                            : 1.0 / static_cast<double>(inst.size());
        }
    for (std::size_t u = 0; u < inst.size(); ++u)
        if (group_of[u] < 0)
            throw InvalidGroup("user " + std::to_string(u) + " belongs to no group");

    const ConstraintVector& mean_budget = inst.budgets();
    const bool mean_budgets = !mean_budget.unconstrained();

    // Per-user outcome lists.
    std::vector<detail::UserSolver> solvers;
    std::vector<std::vector<detail::ParetoPoint>> points(inst.size());
    std::vector<std::vector<detail::Option>> options(inst.size());
    solvers.reserve(inst.size());
    for (std::size_t u = 0; u < inst.size(); ++u) {
        solvers.emplace_back(inst, u, bit);
        points[u] = solvers.back().solve();
        const UserProblem& p = inst.user(u);
        std::vector<detail::Option> opts;
        for (std::size_t k = 0; k < points[u].size(); ++k) {
            const auto& pt = points[u][k];
            if (!p.budget.admits(pt.q))
                continue;
            opts.push_back({normalize_ltw_qos(pt.q, p.bounds).worst(), pt.q, pt.mask, k});
        }
        // An option is useless if another one is at least as good, uses a
        // subset of its clouds and (under mean budgets) costs no more.
        std::sort(opts.begin(), opts.end(), [](const detail::Option& a, const detail::Option& b) {
            if (a.utility != b.utility)
                return a.utility > b.utility;
            return std::popcount(a.mask) < std::popcount(b.mask);
        });
        std::vector<detail::Option> kept;
        for (const auto& o : opts) {
            bool useless = false;
            for (const auto& k : kept) {
                if ((k.mask & ~o.mask) != 0)
                    continue;
                if (!mean_budgets || dominates_or_equal(k.q, o.q)) {
                    useless = true;
                    break;
                }
            }
            if (!useless)
                kept.push_back(o);
        }
        if (kept.empty())
            throw NoFeasibleCandidates("user " + std::to_string(u) + " has no plan within its own budget");
        options[u] = std::move(kept);
    }

    // Search order: by budget group so each group closes before the next.
    std::vector<std::size_t> order;
    for (const auto& g : budget_groups)
        order.insert(order.end(), g.begin(), g.end());
    const std::size_t n = order.size();

    std::vector<double> suffix_best(n + 1, 0.0);
    for (std::size_t k = n; k-- > 0;)
        suffix_best[k] = suffix_best[k + 1] + weight[order[k]] * options[order[k]].front().utility;
    // Cheapest reachable QoS for the rest of each group, per position.
    std::vector<QoSTriple> rest_min(n + 1);
    for (std::size_t k = n; k-- > 0;) {
        QoSTriple m = options[order[k]].front().q;
        for (const auto& o : options[order[k]])
            m = componentwise_min(m, o.q);
        const bool same_group = k + 1 < n && group_of[order[k + 1]] == group_of[order[k]];
        rest_min[k] = m + (same_group ? rest_min[k + 1] : QoSTriple{});
    }

    std::vector<int> cap(bit_cloud.size());
    for (std::size_t b = 0; b < bit_cloud.size(); ++b)
        cap[b] = world.cloud(bit_cloud[b]).capacity;
    std::vector<int> count(bit_cloud.size(), 0);
    std::vector<std::size_t> choice(n, 0), best_choice;
    double best_value = -1.0;
    std::uint64_t nodes = 0;
    QoSTriple group_sum;

    const auto fits = [&](std::uint64_t mask) {
        for (std::uint64_t m = mask; m; m &= m - 1)
            if (count[static_cast<std::size_t>(std::countr_zero(m))] >= cap[static_cast<std::size_t>(std::countr_zero(m))])
                return false;
        return true;
    };
    const auto occupy = [&](std::uint64_t mask, int delta) {
        for (std::uint64_t m = mask; m; m &= m - 1)
            count[static_cast<std::size_t>(std::countr_zero(m))] += delta;
    };

    const auto search = [&](auto&& self, std::size_t k, double value) -> void {
        if (++nodes > params.node_cap)
            throw TooLargeForEnumeration("joint search exceeded " + std::to_string(params.node_cap) + " nodes");
        if (k == n) {
            if (value > best_value) {
                best_value = value;
                best_choice = choice;
            }
            return;
        }
        if (value + suffix_best[k] <= best_value)
            return;
        const std::size_t u = order[k];
        const bool closes = k + 1 == n || group_of[order[k + 1]] != group_of[u];
        const double limit_scale = static_cast<double>(budget_groups[static_cast<std::size_t>(group_of[u])].size());
        for (std::size_t j = 0; j < options[u].size(); ++j) {
            const auto& o = options[u][j];
            if (value + weight[u] * o.utility + suffix_best[k + 1] <= best_value)
                break; // options are sorted by utility
            if (!fits(o.mask))
                continue;
            const QoSTriple saved = group_sum;
            if (mean_budgets) {
                group_sum += o.q;
                const QoSTriple need = group_sum + (closes ? QoSTriple{} : rest_min[k + 1]);
                bool ok = true;
                for (const Dimension d : all_dimensions)
                    ok = ok && need[d] <= mean_budget[d] * limit_scale * (1.0 + 1e-12);
                if (!ok) {
                    group_sum = saved;
                    continue;
                }
                if (closes)
                    group_sum = QoSTriple{};
            }
            occupy(o.mask, +1);
            choice[k] = j;
            self(self, k + 1, value + weight[u] * o.utility);
            occupy(o.mask, -1);
            group_sum = saved;
        }
    };
    search(search, 0, 0.0);

    AllocationResult r;
    r.algorithm = "bruteforce";
    r.iterations = static_cast<int>(std::min<std::uint64_t>(nodes, std::numeric_limits<int>::max()));
    if (best_choice.empty()) {
        r.feasible = false;
        r.violations.push_back({"no joint plan satisfies the constraints", 0.0, 0.0});
        return r;
    }
    r.plans.resize(inst.size());
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t u = order[k];
        r.plans[u] = solvers[u].plan_of(points[u][options[u][best_choice[k]].point]);
    }
    finalize(r, inst, problem == Problem::Group ? groups : nullptr);
    return r;
}

} // namespace music

#endif // MUSIC_ALLOCATION_BRUTE_FORCE_HPP
