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

#ifndef MUSIC_HARNESS_EXPERIMENT_HPP
#define MUSIC_HARNESS_EXPERIMENT_HPP

#include <music/allocation/allocators.hpp>
#include <music/allocation/brute_force.hpp>
#include <music/allocation/find_service.hpp>
#include <music/allocation/problem.hpp>
#include <music/harness/metrics.hpp>
#include <music/harness/scenario.hpp>
#include <music/harness/world_builder.hpp>
#include <music/mobility/uncertainty.hpp>
#include <music/profiles/profiles.hpp>
#include <music/registry/registry.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace music {

struct ExperimentOptions
{
    /// Run everything with the local clouds' services withdrawn.
    bool public_only = false;
    BruteForceParams brute_force;
    /// Called after each (repetition, uncertainty level) with progress text.
    std::function<void(const std::string&)> progress;
};

/// Replaces the plan of every entry whose workflow changed between
/// prediction and reality. Each occurrence then falls back to the best
/// (largest normalized total QoS, in the true cell) service that needs no
/// reservation: a public-cloud or on-device one.
inline ExecutionPlan repair_plan(const ExecutionPlan& planned, const LocationTimeWorkflow& predicted,
                                 const AllocationInstance& truth, std::size_t user)
{
    const UserProblem& p = truth.user(user);
    ExecutionPlan out = planned;
    const World& w = truth.world();
    for (std::size_t e = 0; e < p.ltw.entries.size(); ++e) {
        const bool same = e < predicted.entries.size() &&
                          predicted.entries[e].template_id == p.ltw.entries[e].template_id &&
                          e < planned.assignments.size() &&
                          planned.assignments[e].size() == p.occurrences[e].size();
        if (same)
            continue;
        out.assignments.resize(p.ltw.entries.size());
        out.assignments[e].assign(p.occurrences[e].size(), ServiceId{});
        for (std::size_t o = 0; o < p.occurrences[e].size(); ++o) {
            std::vector<ServiceId> open;
            std::vector<QoSTriple> q;
            for (const ServiceId s : p.candidates[e][o]) {
                const auto c = w.service(s).cloud();
                if (c && w.cloud(*c).tier == Tier::Local)
                    continue;
                open.push_back(s);
                q.push_back(truth.occurrence_qos(user, e, o, s));
            }
            if (open.empty())
                throw NoFeasibleCandidates("no unreserved fallback for user " + std::to_string(user));
            out.assignments[e][o] = score_candidates(open, q).back().service;
        }
    }
    return out;
}

namespace detail {

inline std::vector<std::string> expand_algorithms(const Scenario& sc)
{
    std::vector<std::string> out;
    for (const auto& a : sc.algorithms) {
        const std::string name = (a == "music" && sc.groups > 0) ? "gmusic" : (a == "gmusic" && sc.groups == 0) ? "music" : a;
        if (std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(name);
    }
    return out;
}

inline std::uint64_t algorithm_tag(const std::string& name)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (const char c : name)
        h = (h ^ static_cast<unsigned char>(c)) * 1099511628211ULL;
    return h;
}

/// One allocation + evaluation pass on a given world.
struct Pass
{
    const Scenario& sc;
    const World& world;
    const ProfileSet& profiles;
    const ServiceRegistry& registry;
    const std::vector<LocationTimeWorkflow>& predicted;
    const std::vector<LocationTimeWorkflow>& truth;
    const Grouping* groups;
    BruteForceParams bf;

    [[nodiscard]] AllocationInstance instance(const std::vector<LocationTimeWorkflow>& ltws) const
    {
        AllocationInstance inst(world, profiles, registry, sc.budgets);
        for (std::size_t u = 0; u < ltws.size(); ++u)
            inst.add_user(UserId(static_cast<std::int32_t>(u)), ltws[u]);
        return inst;
    }

    [[nodiscard]] AllocationResult allocate(const std::string& algo, const AllocationInstance& plan_inst,
                                            std::uint64_t seed) const
    {
        if (algo == "music")
            return music(plan_inst, sc.annealing, seed);
        if (algo == "gmusic")
            return g_music(plan_inst, *groups, sc.annealing, seed);
        if (algo == "rsa")
            return allocate_rsa(plan_inst, seed);
        if (algo == "greedy")
            return allocate_greedy(plan_inst, {sc.greedy_context});
        return brute_force_optimal(plan_inst, groups ? Problem::Group : Problem::Single, groups, bf);
    }

    /// Plans on the predicted LTWs, repairs, and evaluates on the true ones.
    [[nodiscard]] AllocationResult run(const std::string& algo, const AllocationInstance& plan_inst,
                                       const AllocationInstance& eval_inst, std::uint64_t seed) const
    {
        const AllocationResult planned = allocate(algo, plan_inst, seed);
        AllocationResult r;
        r.algorithm = planned.algorithm;
        r.iterations = planned.iterations;
        r.violations = planned.violations;
        if (planned.plans.empty()) {
            r.feasible = false;
            return r;
        }
        for (std::size_t u = 0; u < eval_inst.size(); ++u)
            r.plans.push_back(repair_plan(planned.plans[u], predicted[u], eval_inst, u));
        finalize(r, eval_inst, groups);
        r.feasible = r.feasible && planned.feasible;
        return r;
    }
};

inline QoSTriple mean_raw(const AllocationResult& r)
{
    QoSTriple m;
    for (const auto& e : r.evaluations)
        m += e.raw;
    return r.evaluations.empty() ? m : m * (1.0 / static_cast<double>(r.evaluations.size()));
}

} // namespace detail

/// Runs the scenario's protocol: for every repetition and uncertainty level,
/// generate the world and workloads, perturb the predictions, allocate with
/// each algorithm, and evaluate against the true workloads and the exact
/// optimum. With gains enabled, each algorithm is also run on the
/// public-only world and then, per fixed dimension, on the 2-tier world with
/// every user's fixed dimension capped at its public-only value.
inline std::vector<MetricsRow> run_experiment(const Scenario& sc, const ExperimentOptions& opt = {})
{
    sc.validate();
    const auto algos = detail::expand_algorithms(sc);
    std::vector<MetricsRow> rows;
    for (int rep = 0; rep < sc.repetitions; ++rep) {
        BuiltWorld bw = build_world(sc, rep);
        if (opt.public_only)
            bw.world = public_only(bw.world);
        const World& world = bw.world;
        const ServiceRegistry registry = ServiceRegistry::build(world);
        std::optional<Grouping> grouping;
        if (sc.groups > 0)
            grouping = form_groups(sc, world, sc.groups, rep);
        std::vector<LocationTimeWorkflow> truth;
        for (int u = 0; u < sc.users; ++u)
            truth.push_back(build_ltw(sc, bw, UserId(u), sc.groups > 0, rep));

        bool local_tier = false;
        for (const auto& c : world.clouds)
            local_tier = local_tier || (c.tier == Tier::Local && !c.covered_cells.empty());
        for (const auto& sv : world.services)
            local_tier = local_tier || (sv.cloud() && world.cloud(*sv.cloud()).tier == Tier::Local);
        std::optional<World> pub_world;
        std::optional<ServiceRegistry> pub_registry;
        if (sc.gains) {
            pub_world = public_only(world);
            pub_registry = ServiceRegistry::build(*pub_world);
        }

        for (const double level : sc.uncertainty_pct) {
            std::vector<LocationTimeWorkflow> predicted;
            for (int u = 0; u < sc.users; ++u) {
                UncertaintySpec us{level / 100.0, sc.uncertainty_mode,
                                   stream_seed(sc.seed, rep, Stream::Uncertainty, static_cast<std::uint64_t>(u))};
                predicted.push_back(inject_uncertainty(truth[static_cast<std::size_t>(u)], us, world.map, bw.templates));
            }
            const Grouping* groups = grouping ? &*grouping : nullptr;
            const detail::Pass pass{sc, world, sc.profiles, registry, predicted, truth, groups, opt.brute_force};
            const AllocationInstance plan_inst = pass.instance(predicted);
            const AllocationInstance eval_inst = pass.instance(truth);

            std::optional<double> optimum;
            if (sc.throughput && sc.users > 0) {
                try {
                    const auto best =
                        brute_force_optimal(eval_inst, groups ? Problem::Group : Problem::Single, groups, opt.brute_force);
                    if (best.feasible)
                        optimum = best.utility;
                } catch (const TooLargeForEnumeration& e) {
                    if (opt.progress)
                        opt.progress(std::string("warning: no optimum, throughput left empty: ") + e.what());
                }
            }

            for (const auto& algo : algos) {
                const std::uint64_t seed = stream_seed(sc.seed, rep, Stream::Algorithm, detail::algorithm_tag(algo));
                MetricsRow base;
                base.scenario_id = sc.id;
                base.algorithm = algo;
                base.users = sc.users;
                base.groups = sc.groups;
                base.uncertainty_pct = level;
                base.repetition = rep;
                base.seed = seed;

                if (sc.users > 0) {
                    const AllocationResult r = pass.run(algo, plan_inst, eval_inst, seed);
                    MetricsRow row = base;
                    row.utility = r.utility;
                    row.feasible = r.feasible;
                    if (optimum && *optimum > 0.0)
                        row.throughput_pct = compute_throughput(r.utility, *optimum);
                    const QoSTriple m = detail::mean_raw(r);
                    row.mean_delay_ms = m.delay;
                    row.mean_power_mj = m.power;
                    row.mean_price_usd = m.price;
                    rows.push_back(row);
                }

                if (!sc.gains || algo == "bruteforce" || sc.users == 0)
                    continue;
                const detail::Pass pub{sc, *pub_world, sc.profiles, *pub_registry, predicted, truth, groups,
                                       opt.brute_force};
                const AllocationInstance pub_plan = pub.instance(predicted);
                const AllocationInstance pub_eval = pub.instance(truth);
                const AllocationResult planned_pub = pub.allocate(algo, pub_plan, seed);
                const AllocationResult base_pub = pub.run(algo, pub_plan, pub_eval, seed);
                std::vector<QoSTriple> baseline;
                for (const auto& e : base_pub.evaluations)
                    baseline.push_back(e.raw);
                for (const Dimension fixed : {Dimension::Delay, Dimension::Power, Dimension::Price}) {
                    AllocationInstance constrained = plan_inst;
                    for (std::size_t u = 0; u < constrained.size(); ++u) {
                        ConstraintVector b;
                        const double cap = planned_pub.evaluations[u].raw[fixed];
                        (fixed == Dimension::Price ? b.price : fixed == Dimension::Power ? b.power : b.delay) = cap;
                        constrained.set_user_budget(u, b);
                    }
                    AllocationResult r;
                    try {
                        // without a local tier the 2-tier world is the baseline
                        r = local_tier ? pass.run(algo, constrained, eval_inst, seed) : base_pub;
                    } catch (const NoFeasibleCandidates&) {
                        r.feasible = false;
                    }
                    MetricsRow row = base;
                    row.fixed_dimension = to_string(fixed);
                    row.feasible = r.feasible;
                    if (!r.evaluations.empty()) {
                        row.utility = r.utility;
                        const QoSTriple m = detail::mean_raw(r);
                        row.mean_delay_ms = m.delay;
                        row.mean_power_mj = m.power;
                        row.mean_price_usd = m.price;
                        std::vector<QoSTriple> two_tier;
                        for (const auto& e : r.evaluations)
                            two_tier.push_back(e.raw);
                        const UserGains g = average_gains(two_tier, baseline, fixed);
                        row.gain_price_pct = g.price;
                        row.gain_power_pct = g.power;
                        row.gain_delay_pct = g.delay;
                    }
                    rows.push_back(row);
                }
            }
            if (opt.progress)
                opt.progress("repetition " + std::to_string(rep + 1) + "/" + std::to_string(sc.repetitions) +
                             ", uncertainty " + detail::fmt(level, 1) + "%");
        }
    }
    return rows;
}

} // namespace music

#endif // MUSIC_HARNESS_EXPERIMENT_HPP
