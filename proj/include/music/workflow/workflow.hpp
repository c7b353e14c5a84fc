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

#ifndef MUSIC_WORKFLOW_WORKFLOW_HPP
#define MUSIC_WORKFLOW_WORKFLOW_HPP

#include <music/core/ids.hpp>
#include <music/error.hpp>
#include <music/random.hpp>
#include <music/workflow/qos.hpp>

#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace music {

enum class Pattern { Leaf, Seq, And, Xor, Loop };

inline const char* to_string(Pattern p)
{
    switch (p) {
    case Pattern::Leaf: return "leaf";
    case Pattern::Seq: return "seq";
    case Pattern::And: return "and";
    case Pattern::Xor: return "xor";
    case Pattern::Loop: return "loop";
    }
    return "?";
}

struct FunctionNode
{
    FunctionId function;
    double input_kb = 0.0;

    friend bool operator==(const FunctionNode&, const FunctionNode&) = default;
};

/// Composition tree of functions. Leaves are function occurrences, numbered
/// in depth-first order; an execution plan binds one service to each.
class WorkflowNode
{
public:
    static WorkflowNode leaf(FunctionId f, double input_kb)
    {
        WorkflowNode n(Pattern::Leaf);
        n.function_ = {f, input_kb};
        return n;
    }
    static WorkflowNode seq(std::vector<WorkflowNode> children) { return composite(Pattern::Seq, std::move(children)); }
    static WorkflowNode all(std::vector<WorkflowNode> children) { return composite(Pattern::And, std::move(children)); }
    static WorkflowNode any(std::vector<WorkflowNode> children) { return composite(Pattern::Xor, std::move(children)); }
    static WorkflowNode loop(WorkflowNode child, int k)
    {
        if (k < 1)
            throw InvalidWorkflow("loop count must be at least 1");
        WorkflowNode n(Pattern::Loop);
        n.repeat_ = k;
        n.children_.push_back(std::move(child));
        return n;
    }

    [[nodiscard]] Pattern pattern() const { return pattern_; }
    [[nodiscard]] bool is_leaf() const { return pattern_ == Pattern::Leaf; }
    [[nodiscard]] const FunctionNode& function() const { return function_; }
    [[nodiscard]] const std::vector<WorkflowNode>& children() const { return children_; }
    [[nodiscard]] int repeat() const { return repeat_; }

    [[nodiscard]] std::size_t occurrence_count() const
    {
        if (is_leaf())
            return 1;
        std::size_t n = 0;
        for (const auto& c : children_)
            n += c.occurrence_count();
        return n;
    }

    /// Leaves in depth-first order.
    [[nodiscard]] std::vector<FunctionNode> occurrences() const
    {
        std::vector<FunctionNode> out;
        collect(out);
        return out;
    }

    /// Throws InvalidWorkflow when a structural invariant does not hold.
    void validate() const
    {
        switch (pattern_) {
        case Pattern::Leaf:
            if (!function_.function.valid())
                throw InvalidWorkflow("leaf without a function");
            if (!(function_.input_kb > 0.0))
                throw InvalidWorkflow("leaf input data size must be positive");
            return;
        case Pattern::Xor:
            if (children_.size() < 2)
                throw InvalidWorkflow("xor needs at least two branches");
            break;
        case Pattern::Loop:
            if (children_.size() != 1 || repeat_ < 1)
                throw InvalidWorkflow("loop needs exactly one child and k >= 1");
            break;
        default:
            if (children_.empty())
                throw InvalidWorkflow(std::string(to_string(pattern_)) + " needs at least one child");
        }
        for (const auto& c : children_)
            c.validate();
    }

    friend bool operator==(const WorkflowNode&, const WorkflowNode&) = default;

private:
    explicit WorkflowNode(Pattern p) : pattern_(p) {}

    static WorkflowNode composite(Pattern p, std::vector<WorkflowNode> children)
    {
        WorkflowNode n(p);
        n.children_ = std::move(children);
        return n;
    }

    void collect(std::vector<FunctionNode>& out) const
    {
        if (is_leaf()) {
            out.push_back(function_);
            return;
        }
        for (const auto& c : children_)
            c.collect(out);
    }

    Pattern pattern_ = Pattern::Leaf;
    FunctionNode function_{};
    std::vector<WorkflowNode> children_;
    int repeat_ = 1;
};

struct LtwEntry
{
    CellId cell;
    double time_window = 0.0; ///< seconds
    WorkflowNode workflow = WorkflowNode::leaf(FunctionId(0), 1.0);
    /// Template the workflow was instantiated from; -1 when built by hand.
    int template_id = -1;
};

/// Sequence of workflows indexed by the location and time they are requested.
struct LocationTimeWorkflow
{
    UserId user;
    std::vector<LtwEntry> entries;

    [[nodiscard]] std::size_t occurrence_count() const
    {
        std::size_t n = 0;
        for (const auto& e : entries)
            n += e.workflow.occurrence_count();
        return n;
    }
};

/// One service per function occurrence, indexed [entry][occurrence].
struct ExecutionPlan
{
    std::vector<std::vector<ServiceId>> assignments;

    static ExecutionPlan empty_for(const LocationTimeWorkflow& ltw)
    {
        ExecutionPlan p;
        p.assignments.reserve(ltw.entries.size());
        for (const auto& e : ltw.entries)
            p.assignments.emplace_back(e.workflow.occurrence_count());
        return p;
    }

    [[nodiscard]] bool complete_for(const LocationTimeWorkflow& ltw) const
    {
        if (assignments.size() != ltw.entries.size())
            return false;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i].size() != ltw.entries[i].workflow.occurrence_count())
                return false;
            for (const auto s : assignments[i])
                if (!s.valid())
                    return false;
        }
        return true;
    }

    friend bool operator==(const ExecutionPlan&, const ExecutionPlan&) = default;
};

/// Cost of running `service` for one occurrence. `previous` is the service of
/// the directly preceding leaf sibling in a SEQ, used to charge hand-offs.
template <typename F>
concept OccurrenceCost = std::invocable<const F&, ServiceId, const FunctionNode&, std::optional<ServiceId>> &&
    std::convertible_to<std::invoke_result_t<const F&, ServiceId, const FunctionNode&, std::optional<ServiceId>>,
                        QoSTriple>;

namespace detail {

template <OccurrenceCost Cost>
class Aggregator
{
public:
    Aggregator(std::span<const ServiceId> plan, const Cost& cost) : plan_(plan), cost_(cost) {}

    QoSTriple run(const WorkflowNode& node)
    {
        const QoSTriple q = visit(node, std::nullopt);
        if (cursor_ != plan_.size())
            throw IncompletePlan("plan has more assignments than the workflow has occurrences");
        return q;
    }

private:
    ServiceId next()
    {
        if (cursor_ >= plan_.size())
            throw IncompletePlan("no service assigned to occurrence " + std::to_string(cursor_));
        const ServiceId s = plan_[cursor_++];
        if (!s.valid())
            throw IncompletePlan("occurrence " + std::to_string(cursor_ - 1) + " is unassigned");
        return s;
    }

    QoSTriple visit(const WorkflowNode& node, std::optional<ServiceId> previous)
    {
        switch (node.pattern()) {
        case Pattern::Leaf: return std::invoke(cost_, next(), node.function(), previous);
        case Pattern::Seq: {
            QoSTriple total;
            std::optional<ServiceId> prev;
            for (const auto& c : node.children()) {
                const std::size_t at = cursor_;
                total += visit(c, c.is_leaf() ? prev : std::nullopt);
                prev = c.is_leaf() ? std::optional(plan_[at]) : std::nullopt;
            }
            return total;
        }
        case Pattern::And: {
            QoSTriple total;
            for (const auto& c : node.children()) {
                const QoSTriple q = visit(c, std::nullopt);
                total.price += q.price;
                total.power += q.power;
                total.delay = std::max(total.delay, q.delay);
            }
            return total;
        }
        case Pattern::Xor: {
            QoSTriple worst;
            for (const auto& c : node.children())
                worst = componentwise_max(worst, visit(c, std::nullopt));
            return worst;
        }
        case Pattern::Loop: return visit(node.children().front(), std::nullopt) * node.repeat();
        }
        return {};
    }

    std::span<const ServiceId> plan_;
    const Cost& cost_;
    std::size_t cursor_ = 0;
};

} // namespace detail

/// Workflow QoS under the composition algebra: SEQ sums, AND sums price and
/// power and takes the slowest branch, XOR takes the worst branch in every
/// dimension, LOOP multiplies by its count.
template <OccurrenceCost Cost>
QoSTriple aggregate_qos(const WorkflowNode& node, std::span<const ServiceId> plan, const Cost& cost)
{
    return detail::Aggregator<Cost>(plan, cost).run(node);
}

/// Realized QoS of one simulated execution: identical to aggregate_qos except
/// that each XOR runs a single branch chosen uniformly at random.
template <OccurrenceCost Cost>
QoSTriple execute_qos(const WorkflowNode& node, std::span<const ServiceId> plan, const Cost& cost, Rng& rng)
{
    std::size_t cursor = 0;
    std::function<QoSTriple(const WorkflowNode&, std::optional<ServiceId>, bool)> visit;
    visit = [&](const WorkflowNode& n, std::optional<ServiceId> previous, bool live) -> QoSTriple {
        switch (n.pattern()) {
        case Pattern::Leaf: {
            if (cursor >= plan.size() || !plan[cursor].valid())
                throw IncompletePlan("occurrence " + std::to_string(cursor) + " is unassigned");
            const ServiceId s = plan[cursor++];
            return live ? QoSTriple(std::invoke(cost, s, n.function(), previous)) : QoSTriple{};
        }
        case Pattern::Seq: {
            QoSTriple total;
            std::optional<ServiceId> prev;
            for (const auto& c : n.children()) {
                const std::size_t at = cursor;
                total += visit(c, c.is_leaf() ? prev : std::nullopt, live);
                prev = c.is_leaf() ? std::optional(plan[at]) : std::nullopt;
            }
            return total;
        }
        case Pattern::And: {
            QoSTriple total;
            for (const auto& c : n.children()) {
                const QoSTriple q = visit(c, std::nullopt, live);
                total.price += q.price;
                total.power += q.power;
                total.delay = std::max(total.delay, q.delay);
            }
            return total;
        }
        case Pattern::Xor: {
            const auto taken = static_cast<std::size_t>(uniform_index(rng, n.children().size()));
            QoSTriple q;
            for (std::size_t i = 0; i < n.children().size(); ++i) {
                const QoSTriple b = visit(n.children()[i], std::nullopt, live && i == taken);
                if (i == taken)
                    q = b;
            }
            return q;
        }
        case Pattern::Loop: return visit(n.children().front(), std::nullopt, live) * n.repeat();
        }
        return {};
    };
    const QoSTriple q = visit(node, std::nullopt, true);
    if (cursor != plan.size())
        throw IncompletePlan("plan has more assignments than the workflow has occurrences");
    return q;
}

/// Cost of an occurrence within an LTW entry.
template <typename F>
concept EntryCost =
    std::invocable<const F&, std::size_t, ServiceId, const FunctionNode&, std::optional<ServiceId>> &&
    std::convertible_to<
        std::invoke_result_t<const F&, std::size_t, ServiceId, const FunctionNode&, std::optional<ServiceId>>,
        QoSTriple>;

/// Sum of the entries' workflow QoS, each evaluated in its own context.
template <EntryCost Cost>
QoSTriple ltw_qos(const LocationTimeWorkflow& ltw, const ExecutionPlan& plan, const Cost& cost)
{
    if (plan.assignments.size() != ltw.entries.size())
        throw IncompletePlan("plan covers " + std::to_string(plan.assignments.size()) + " of " +
                             std::to_string(ltw.entries.size()) + " LTW entries");
    QoSTriple total;
    for (std::size_t i = 0; i < ltw.entries.size(); ++i) {
        const auto entry_cost = [&](ServiceId s, const FunctionNode& f, std::optional<ServiceId> prev) {
            return std::invoke(cost, i, s, f, prev);
        };
        total += aggregate_qos(ltw.entries[i].workflow, plan.assignments[i], entry_cost);
    }
    return total;
}

/// Group LTW QoS: the members' LTW QoS summed.
inline QoSTriple group_ltw_qos(std::span<const QoSTriple> member_qos)
{
    if (member_qos.empty())
        throw InvalidGroup("group QoS needs at least one member");
    QoSTriple total;
    for (const auto& q : member_qos)
        total += q;
    return total;
}

namespace detail {

/// Exact per-dimension extrema of a workflow over the product of candidate
/// sets. AND/XOR/LOOP children are independent, so their bounds compose
/// through the same algebra; SEQ runs of adjacent leaves are coupled by the
/// hand-off term and solved by a chain recurrence over the previous service.
template <OccurrenceCost Cost>
class ExtremaSolver
{
public:
    ExtremaSolver(std::span<const std::vector<ServiceId>> candidates, const Cost& cost)
        : candidates_(candidates), cost_(cost)
    {
    }

    Extrema run(const WorkflowNode& node)
    {
        Extrema e;
        for (const Dimension d : all_dimensions) {
            cursor_ = 0;
            e.max[d] = bound(node, d, true);
            cursor_ = 0;
            e.min[d] = bound(node, d, false);
        }
        if (cursor_ != candidates_.size())
            throw IncompletePlan("candidate list does not match the workflow's occurrences");
        return e;
    }

private:
    const std::vector<ServiceId>& take()
    {
        if (cursor_ >= candidates_.size())
            throw IncompletePlan("no candidates for occurrence " + std::to_string(cursor_));
        const auto& c = candidates_[cursor_++];
        if (c.empty())
            throw NoRealizingService("occurrence " + std::to_string(cursor_ - 1) + " has no candidate service");
        return c;
    }

    static double pick(bool upper, double a, double b) { return upper ? std::max(a, b) : std::min(a, b); }

    double leaf(const WorkflowNode& n, Dimension d, bool upper)
    {
        const auto& cands = take();
        double v = std::invoke(cost_, cands.front(), n.function(), std::nullopt)[d];
        for (const auto s : cands)
            v = pick(upper, v, std::invoke(cost_, s, n.function(), std::nullopt)[d]);
        return v;
    }

    double bound(const WorkflowNode& n, Dimension d, bool upper)
    {
        switch (n.pattern()) {
        case Pattern::Leaf: return leaf(n, d, upper);
        case Pattern::Seq: return seq(n, d, upper);
        case Pattern::And: {
            double total = 0.0;
            bool first = true;
            for (const auto& c : n.children()) {
                const double v = bound(c, d, upper);
                if (d == Dimension::Delay)
                    total = first ? v : std::max(total, v);
                else
                    total += v;
                first = false;
            }
            return total;
        }
        case Pattern::Xor: {
            double worst = 0.0;
            bool first = true;
            for (const auto& c : n.children()) {
                const double v = bound(c, d, upper);
                worst = first ? v : std::max(worst, v);
                first = false;
            }
            return worst;
        }
        case Pattern::Loop: return bound(n.children().front(), d, upper) * n.repeat();
        }
        return 0.0;
    }

    double seq(const WorkflowNode& n, Dimension d, bool upper)
    {
        double settled = 0.0; // total of everything before the current leaf run
        std::vector<std::pair<ServiceId, double>> run; // best run total ending in service
        const auto close_run = [&] {
            if (run.empty())
                return;
            double v = run.front().second;
            for (const auto& [s, t] : run)
                v = pick(upper, v, t);
            settled += v;
            run.clear();
        };
        for (const auto& c : n.children()) {
            if (!c.is_leaf()) {
                close_run();
                settled += bound(c, d, upper);
                continue;
            }
            const auto& cands = take();
            std::vector<std::pair<ServiceId, double>> next;
            next.reserve(cands.size());
            for (const auto s : cands) {
                double best;
                if (run.empty()) {
                    best = std::invoke(cost_, s, c.function(), std::nullopt)[d];
                } else {
                    best = run.front().second + std::invoke(cost_, s, c.function(), run.front().first)[d];
                    for (const auto& [p, t] : run)
                        best = pick(upper, best, t + std::invoke(cost_, s, c.function(), p)[d]);
                }
                next.emplace_back(s, best);
            }
            run = std::move(next);
        }
        close_run();
        return settled;
    }

    std::span<const std::vector<ServiceId>> candidates_;
    const Cost& cost_;
    std::size_t cursor_ = 0;
};

} // namespace detail

/// C^max / C^min of a workflow: the most and least expensive plans in each
/// dimension independently, given the candidate set of every occurrence.
template <OccurrenceCost Cost>
Extrema workflow_extrema(const WorkflowNode& node, std::span<const std::vector<ServiceId>> candidates,
                         const Cost& cost)
{
    return detail::ExtremaSolver<Cost>(candidates, cost).run(node);
}

/// LTW extrema: entries are chosen independently, so the bounds add up.
template <EntryCost Cost>
Extrema ltw_extrema(const LocationTimeWorkflow& ltw, std::span<const std::vector<std::vector<ServiceId>>> candidates,
                    const Cost& cost)
{
    if (candidates.size() != ltw.entries.size())
        throw IncompletePlan("candidate table does not match the LTW");
    Extrema total;
    for (std::size_t i = 0; i < ltw.entries.size(); ++i) {
        const auto entry_cost = [&](ServiceId s, const FunctionNode& f, std::optional<ServiceId> prev) {
            return std::invoke(cost, i, s, f, prev);
        };
        total = total + workflow_extrema(ltw.entries[i].workflow, candidates[i], entry_cost);
    }
    return total;
}

} // namespace music

#endif // MUSIC_WORKFLOW_WORKFLOW_HPP
