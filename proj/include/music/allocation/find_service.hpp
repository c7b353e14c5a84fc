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

#ifndef MUSIC_ALLOCATION_FIND_SERVICE_HPP
#define MUSIC_ALLOCATION_FIND_SERVICE_HPP

#include <music/allocation/problem.hpp>
#include <music/error.hpp>
#include <music/random.hpp>
#include <music/registry/registry.hpp>
#include <music/workflow/normalization.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

namespace music {

struct AnnealingParams
{
    int max_iter = 20;
    double d_th = 2.0; ///< initial search radius, in cells
    double d_r = 1.0;  ///< radius increment, in cells
    int it = 15;       ///< radius expansions
    double t0 = 0.1;
    double alpha = 0.9;
    /// Accept every non-improving proposal, as the original acceptance test
    /// exp(max_iter) >= U[0,1] does. Kept for comparison only.
    bool literal_acceptance = false;
    /// Roulette assemblies tried per radius before expanding when the
    /// assembled plan breaks a budget.
    int assembly_retries = 10;

    void validate() const
    {
        if (max_iter < 0)
            throw InvalidInput("max_iter must be non-negative");
        if (!(d_th > 0.0) || !(d_r > 0.0))
            throw InvalidInput("search radii must be positive");
        if (it < 1)
            throw InvalidInput("it must be at least 1");
        if (!(t0 > 0.0) || !(alpha > 0.0 && alpha < 1.0))
            throw InvalidInput("temperature schedule needs t0 > 0 and 0 < alpha < 1");
        if (assembly_retries < 1)
            throw InvalidInput("assembly_retries must be at least 1");
    }

    [[nodiscard]] double temperature(int j) const { return t0 * std::pow(alpha, j); }
};

/// Index picked by a roulette wheel over `weights` (in the order given) for
/// a draw in [0,1]: the interval [v_0 + ... + v_{j-1}, v_0 + ... + v_j) with
/// v_j = w_j / sum(w). All-zero weights spin a uniform wheel.
inline std::size_t roulette_pick(std::span<const double> weights, double draw)
{
    if (weights.empty())
        throw InvalidInput("roulette over no candidates");
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0))
        return std::min(weights.size() - 1, static_cast<std::size_t>(draw * static_cast<double>(weights.size())));
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] <= 0.0)
            continue;
        last = j;
        acc += weights[j] / total;
        if (draw < acc)
            return j;
    }
    return last;
}

struct ScoredCandidate
{
    ServiceId service;
    double total = 0.0; ///< normalized total QoS
};

/// Normalizes the candidates' QoS over the set and returns them sorted
/// ascending by total (ties by id).
inline std::vector<ScoredCandidate> score_candidates(std::span<const ServiceId> services,
                                                     std::span<const QoSTriple> qos)
{
    const Extrema bounds = service_extrema(qos);
    std::vector<ScoredCandidate> out;
    out.reserve(services.size());
    for (std::size_t k = 0; k < services.size(); ++k)
        out.push_back({services[k], normalize_service(qos[k], bounds).total()});
    std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
        return a.total != b.total ? a.total < b.total : a.service < b.service;
    });
    return out;
}

/// Roulette selection over scored candidates sorted ascending.
inline ServiceId roulette_select(std::span<const ScoredCandidate> sorted, Rng& rng)
{
    std::vector<double> w;
    w.reserve(sorted.size());
    for (const auto& c : sorted)
        w.push_back(c.total);
    return sorted[roulette_pick(w, uniform01(rng))].service;
}

namespace detail {

/// Candidate table for one radius: each occurrence's realizing services that
/// are either within `radius` of the center, reachable from everywhere, or on
/// the user's device, minus local clouds without room.
inline std::vector<std::vector<std::vector<ServiceId>>>
candidates_within(const AllocationInstance& inst, std::size_t user, Vec2 center, double radius,
                  const CapacityLedger& ledger)
{
    const UserProblem& p = inst.user(user);
    const World& world = inst.world();
    const std::vector<ServiceId> near = inst.registry().range_query(center, radius, std::nullopt, true);
    std::vector<std::vector<std::vector<ServiceId>>> out(p.candidates.size());
    for (std::size_t e = 0; e < p.candidates.size(); ++e) {
        out[e].resize(p.candidates[e].size());
        for (std::size_t o = 0; o < p.candidates[e].size(); ++o)
            for (const ServiceId s : p.candidates[e][o]) {
                const Service& svc = world.service(s);
                if (const auto c = svc.cloud()) {
                    if (!std::binary_search(near.begin(), near.end(), s) || !ledger.has_room(*c))
                        continue;
                }
                out[e][o].push_back(s);
            }
    }
    return out;
}

/// Budget excess of a raw triple, each dimension scaled by its reachable
/// range.
inline double excess(const QoSTriple& q, const ConstraintVector& budget, const Extrema& reach)
{
    double sum = 0.0;
    for (const Dimension d : all_dimensions)
        if (q[d] > budget[d])
            sum += (q[d] - budget[d]) / std::max(reach.max[d] - reach.min[d], 1e-12);
    return sum;
}

/// Single-occurrence swaps, steepest first, until the plan fits the budget
/// or no swap lowers the excess.
inline bool tighten(const AllocationInstance& inst, std::size_t user, ExecutionPlan& plan,
                    const std::vector<std::vector<std::vector<ServiceId>>>& table, const ConstraintVector& budget,
                    const Extrema& reach)
{
    double current = excess(inst.raw_qos(user, plan), budget, reach);
    while (current > 0.0) {
        double best = current;
        std::size_t be = 0, bo = 0;
        ServiceId bs;
        for (std::size_t e = 0; e < table.size(); ++e)
            for (std::size_t o = 0; o < table[e].size(); ++o) {
                const ServiceId keep = plan.assignments[e][o];
                for (const ServiceId s : table[e][o]) {
                    if (s == keep)
                        continue;
                    plan.assignments[e][o] = s;
                    const double x = excess(inst.raw_qos(user, plan), budget, reach);
                    if (x < best) {
                        best = x;
                        be = e;
                        bo = o;
                        bs = s;
                    }
                }
                plan.assignments[e][o] = keep;
            }
        if (!(best < current))
            return false;
        plan.assignments[be][bo] = bs;
        current = best;
    }
    return true;
}

} // namespace detail

/// Candidate plan for one user around `center`. The radius grows as
/// d_th + i * d_r cells for i = 0 .. it-1; at the first radius where every
/// occurrence has a candidate and the user's budget is satisfiable, each
/// occurrence gets a service by roulette over the candidates' normalized
/// total QoS in the occurrence's own cell. An assembled plan that breaks the
/// budget is redrawn; after `assembly_retries` the last draw is tightened by
/// single-service swaps, and if that fails too the radius grows.
inline ExecutionPlan find_service(const AllocationInstance& inst, std::size_t user, Vec2 center,
                                  const CapacityLedger& ledger, const AnnealingParams& params, Rng& rng)
{
    const UserProblem& p = inst.user(user);
    const ConstraintVector budget = inst.effective_budget(user);
    const double cell = inst.world().map.cell_size();
    for (int i = 0; i < params.it; ++i) {
        const double radius = (params.d_th + i * params.d_r) * cell;
        const auto table = detail::candidates_within(inst, user, center, radius, ledger);
        bool covered = true;
        for (const auto& e : table)
            for (const auto& o : e)
                covered = covered && !o.empty();
        if (!covered)
            continue;
        Extrema reach;
        if (!budget.unconstrained()) {
            reach = ltw_extrema(p.ltw, std::span<const std::vector<std::vector<ServiceId>>>(table),
                                              inst.cost().for_ltw(p.ltw));
            if (!budget.admits(reach.min))
                continue;
        }

        std::vector<std::vector<std::vector<ScoredCandidate>>> scored(table.size());
        for (std::size_t e = 0; e < table.size(); ++e)
            for (std::size_t o = 0; o < table[e].size(); ++o) {
                std::vector<QoSTriple> q;
                for (const ServiceId s : table[e][o])
                    q.push_back(inst.occurrence_qos(user, e, o, s));
                scored[e].push_back(score_candidates(table[e][o], q));
            }

        ExecutionPlan plan = ExecutionPlan::empty_for(p.ltw);
        for (int attempt = 0; attempt < params.assembly_retries; ++attempt) {
            for (std::size_t e = 0; e < scored.size(); ++e)
                for (std::size_t o = 0; o < scored[e].size(); ++o)
                    plan.assignments[e][o] = roulette_select(scored[e][o], rng);
            if (budget.unconstrained() || budget.admits(inst.raw_qos(user, plan)))
                return plan;
        }
        if (detail::tighten(inst, user, plan, table, budget, reach))
            return plan;
    }
    throw NoFeasibleCandidates("no feasible plan for user " + std::to_string(p.user.value) + " within " +
                               std::to_string(params.it) + " radius expansions");
}

} // namespace music

#endif // MUSIC_ALLOCATION_FIND_SERVICE_HPP
