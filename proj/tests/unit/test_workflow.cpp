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

#include "../support/fixtures.hpp"

#include <music/workflow/expression.hpp>
#include <music/workflow/templates.hpp>
#include <music/workflow/workflow.hpp>

#include <gtest/gtest.h>

#include <functional>

using namespace music;
using music::testing::TableCost;

namespace {

WorkflowNode leaf(int f) { return WorkflowNode::leaf(FunctionId(f), 100.0); }

// s0 = (1, 10, 100), s1 = (2, 20, 50), s2 = (4, 5, 70)
TableCost three()
{
    return TableCost{{{0, {1, 10, 100}}, {1, {2, 20, 50}}, {2, {4, 5, 70}}}};
}

QoSTriple agg(const WorkflowNode& n, std::initializer_list<int> plan, const TableCost& cost)
{
    const auto p = music::testing::ids(plan);
    return aggregate_qos(n, std::span<const ServiceId>(p), cost);
}

} // namespace

TEST(CompositionAlgebra, SeqSumsEveryDimension)
{
    const auto q = agg(WorkflowNode::seq({leaf(0), leaf(1), leaf(2)}), {0, 1, 2}, three());
    EXPECT_EQ(q.price, 7.0);
    EXPECT_EQ(q.power, 35.0);
    EXPECT_EQ(q.delay, 220.0);
}

TEST(CompositionAlgebra, AndSumsPriceAndPowerTakesSlowestDelay)
{
    const auto q = agg(WorkflowNode::all({leaf(0), leaf(1)}), {0, 1}, three());
    EXPECT_EQ(q.price, 3.0);
    EXPECT_EQ(q.power, 30.0);
    EXPECT_EQ(q.delay, 100.0);
}

TEST(CompositionAlgebra, XorTakesWorstBranchPerDimension)
{
    const auto q = agg(WorkflowNode::any({leaf(0), leaf(1), leaf(2)}), {0, 1, 2}, three());
    EXPECT_EQ(q.price, 4.0);
    EXPECT_EQ(q.power, 20.0);
    EXPECT_EQ(q.delay, 100.0);
}

TEST(CompositionAlgebra, LoopMultipliesByCount)
{
    const auto q = agg(WorkflowNode::loop(WorkflowNode::seq({leaf(1), leaf(2)}), 3), {1, 2}, three());
    EXPECT_EQ(q.price, 18.0);
    EXPECT_EQ(q.power, 75.0);
    EXPECT_EQ(q.delay, 360.0);
}

TEST(CompositionAlgebra, NestedPatterns)
{
    // seq(s0, and(s1, s2)) = (1 + 6, 10 + 25, 100 + max(50, 70))
    const auto q = agg(WorkflowNode::seq({leaf(0), WorkflowNode::all({leaf(1), leaf(2)})}), {0, 1, 2}, three());
    EXPECT_EQ(q, (QoSTriple{7, 35, 170}));
}

TEST(CompositionAlgebra, PlanSizeMismatchThrows)
{
    const auto n = WorkflowNode::seq({leaf(0), leaf(1)});
    EXPECT_THROW(agg(n, {0}, three()), IncompletePlan);
    EXPECT_THROW(agg(n, {0, 1, 2}, three()), IncompletePlan);
    const std::vector<ServiceId> unassigned{ServiceId(0), ServiceId{}};
    EXPECT_THROW(aggregate_qos(n, std::span<const ServiceId>(unassigned), three()), IncompletePlan);
}

TEST(CompositionAlgebra, HandOffSeesPreviousSeqLeafOnly)
{
    std::vector<std::pair<int, int>> seen;
    const auto cost = [&](ServiceId s, const FunctionNode&, std::optional<ServiceId> prev) {
        seen.emplace_back(s.value, prev ? prev->value : -1);
        return QoSTriple{};
    };
    const auto n = WorkflowNode::seq({leaf(0), leaf(1), WorkflowNode::all({leaf(2), leaf(3)}), leaf(4)});
    const auto plan = music::testing::ids({10, 11, 12, 13, 14});
    (void)aggregate_qos(n, std::span<const ServiceId>(plan), cost);
    const std::vector<std::pair<int, int>> want{{10, -1}, {11, 10}, {12, -1}, {13, -1}, {14, -1}};
    EXPECT_EQ(seen, want);
}

TEST(Workflow, ValidateRejectsMalformedTrees)
{
    EXPECT_THROW(WorkflowNode::any({leaf(0)}).validate(), InvalidWorkflow);
    EXPECT_THROW(WorkflowNode::seq({}).validate(), InvalidWorkflow);
    EXPECT_THROW(WorkflowNode::loop(leaf(0), 0), InvalidWorkflow);
    EXPECT_THROW(WorkflowNode::leaf(FunctionId(0), 0.0).validate(), InvalidWorkflow);
    EXPECT_NO_THROW(WorkflowNode::seq({leaf(0), WorkflowNode::any({leaf(1), leaf(2)})}).validate());
}

TEST(Workflow, OccurrencesInDepthFirstOrder)
{
    const auto n = WorkflowNode::seq({leaf(3), WorkflowNode::all({leaf(1), leaf(2)}), leaf(0)});
    ASSERT_EQ(n.occurrence_count(), 4u);
    const auto occ = n.occurrences();
    EXPECT_EQ(occ[0].function, FunctionId(3));
    EXPECT_EQ(occ[1].function, FunctionId(1));
    EXPECT_EQ(occ[2].function, FunctionId(2));
    EXPECT_EQ(occ[3].function, FunctionId(0));
}

TEST(Workflow, ExecuteChoosesOneXorBranchUniformly)
{
    const auto cost = three();
    const auto n = WorkflowNode::any({leaf(0), leaf(1)});
    const auto plan = music::testing::ids({0, 1});
    Rng rng(3);
    int first = 0;
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) {
        const auto q = execute_qos(n, std::span<const ServiceId>(plan), cost, rng);
        ASSERT_TRUE(q == cost.table.at(0) || q == cost.table.at(1));
        first += q == cost.table.at(0);
    }
    EXPECT_NEAR(first / double(draws), 0.5, 0.015);
}

TEST(Workflow, ExecuteEqualsAggregateWithoutXor)
{
    const auto cost = three();
    const auto n = WorkflowNode::loop(WorkflowNode::seq({leaf(0), WorkflowNode::all({leaf(1), leaf(2)})}), 2);
    const auto plan = music::testing::ids({0, 1, 2});
    Rng rng(1);
    EXPECT_EQ(execute_qos(n, std::span<const ServiceId>(plan), cost, rng),
              aggregate_qos(n, std::span<const ServiceId>(plan), cost));
}

TEST(Workflow, LtwAndGroupTotalsAdd)
{
    LocationTimeWorkflow ltw;
    ltw.entries.push_back({CellId(0), 10.0, WorkflowNode::seq({leaf(0), leaf(1)}), -1});
    ltw.entries.push_back({CellId(1), 10.0, leaf(2), -1});
    ExecutionPlan plan;
    plan.assignments = {music::testing::ids({0, 1}), music::testing::ids({2})};
    const auto cost = three();
    const auto q = ltw_qos(ltw, plan, [&](std::size_t, ServiceId s, const FunctionNode& f,
                                          std::optional<ServiceId> p) { return cost(s, f, p); });
    EXPECT_EQ(q, (QoSTriple{7, 35, 220}));
    const QoSTriple members[] = {q, {1, 1, 1}};
    EXPECT_EQ(group_ltw_qos(members), (QoSTriple{8, 36, 221}));
    EXPECT_THROW(group_ltw_qos({}), InvalidGroup);
}

// Extrema by exhaustive enumeration of the candidate product.
TEST(Workflow, ExtremaMatchEnumeration)
{
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        TableCost cost;
        for (int s = 0; s < 12; ++s)
            cost.table[s] = {uniform(rng, 0, 10), uniform(rng, 0, 10), uniform(rng, 0, 10)};
        // hand-off surcharge makes SEQ neighbours interact
        const auto coupled = [&](ServiceId s, const FunctionNode& f, std::optional<ServiceId> prev) {
            QoSTriple q = cost(s, f, prev);
            if (prev && (prev->value % 3) != (s.value % 3))
                q.delay += 2.5;
            return q;
        };
        const auto shape = uniform_index(rng, 3);
        const WorkflowNode n = shape == 0   ? WorkflowNode::seq({leaf(0), leaf(1), leaf(2)})
                               : shape == 1 ? WorkflowNode::seq({leaf(0), WorkflowNode::all({leaf(1), leaf(2)}), leaf(3)})
                                            : WorkflowNode::loop(WorkflowNode::any({WorkflowNode::seq({leaf(0), leaf(1)}), leaf(2)}), 2);
        const std::size_t occ = n.occurrence_count();
        std::vector<std::vector<ServiceId>> cand(occ);
        for (auto& c : cand)
            for (int k = 0; k < 3; ++k)
                c.push_back(ServiceId(static_cast<std::int32_t>(uniform_index(rng, 12))));
        const Extrema e = workflow_extrema(n, std::span<const std::vector<ServiceId>>(cand), coupled);

        QoSTriple lo{1e300, 1e300, 1e300}, hi{-1, -1, -1};
        std::vector<ServiceId> plan(occ);
        std::function<void(std::size_t)> walk = [&](std::size_t i) {
            if (i == occ) {
                const auto q = aggregate_qos(n, std::span<const ServiceId>(plan), coupled);
                lo = componentwise_min(lo, q);
                hi = componentwise_max(hi, q);
                return;
            }
            for (const auto s : cand[i]) {
                plan[i] = s;
                walk(i + 1);
            }
        };
        walk(0);
        for (const Dimension d : all_dimensions) {
            EXPECT_NEAR(e.min[d], lo[d], 1e-9) << trial;
            EXPECT_NEAR(e.max[d], hi[d], 1e-9) << trial;
        }
    }
}

TEST(Expression, ParsesAndPrintsBack)
{
    const auto t = parse_workflow_expression("seq(upload, and(edit, transcode:512), loop(2, xor(a, b)))");
    EXPECT_EQ(to_expression(t), "seq(upload, and(edit, transcode:512), loop(2, xor(a, b)))");
    std::vector<std::string> fns;
    t.collect_functions(fns);
    EXPECT_EQ(fns, (std::vector<std::string>{"upload", "edit", "transcode", "a", "b"}));
}

TEST(Expression, RejectsMalformedInput)
{
    for (const char* bad : {"", "seq(", "seq(a,)", "xor(a)", "loop(0, a)", "loop(1.5, a)", "frob(a, b)",
                            "a:0", "seq(a) b"})
        EXPECT_THROW(parse_workflow_expression(bad), InvalidWorkflow) << bad;
}

TEST(Templates, InstantiateWithOneDataSize)
{
    World w;
    for (const char* f : {"image_filter", "ocr", "text_to_speech"})
        w.intern_function(f);
    TemplateLibrary lib({{"OCRS", parse_workflow_expression("seq(image_filter, ocr:50, text_to_speech)")}}, w,
                        1024, 5120);
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto n = lib.instantiate(0, rng);
        const auto occ = n.occurrences();
        ASSERT_EQ(occ.size(), 3u);
        EXPECT_EQ(occ[0].input_kb, occ[2].input_kb);
        EXPECT_GE(occ[0].input_kb, 1024.0);
        EXPECT_LE(occ[0].input_kb, 5120.0);
        EXPECT_EQ(occ[1].input_kb, 50.0);
        EXPECT_EQ(occ[1].function, *w.function_id("ocr"));
    }
    EXPECT_THROW(TemplateLibrary({{"X", parse_workflow_expression("missing")}}, w, 1, 2), InvalidInput);
}
