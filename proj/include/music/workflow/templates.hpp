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

#ifndef MUSIC_WORKFLOW_TEMPLATES_HPP
#define MUSIC_WORKFLOW_TEMPLATES_HPP

#include <music/core/model.hpp>
#include <music/random.hpp>
#include <music/workflow/expression.hpp>

#include <string>
#include <utility>
#include <vector>

namespace music {

struct WorkflowTemplate
{
    std::string name;
    TemplateNode root;
};

/// Application templates bound to a world's function table. Every instance
/// draws one data size, uniform in [min_kb, max_kb], shared by its leaves.
class TemplateLibrary
{
public:
    TemplateLibrary() = default;

    TemplateLibrary(std::vector<WorkflowTemplate> templates, const World& world, double min_kb, double max_kb)
        : templates_(std::move(templates)), min_kb_(min_kb), max_kb_(max_kb)
    {
        if (!(min_kb > 0.0) || max_kb < min_kb)
            throw InvalidInput("template data-size range must satisfy 0 < min <= max");
        for (const auto& t : templates_) {
            std::vector<std::string> names;
            t.root.collect_functions(names);
            std::vector<FunctionId> ids;
            for (const auto& n : names) {
                const auto id = world.function_id(n);
                if (!id)
                    throw InvalidInput("template '" + t.name + "' uses unknown function '" + n + "'");
                ids.push_back(*id);
            }
            function_ids_.push_back(std::move(ids));
        }
    }

    [[nodiscard]] std::size_t size() const { return templates_.size(); }
    [[nodiscard]] const WorkflowTemplate& at(int id) const { return templates_.at(static_cast<std::size_t>(id)); }

    [[nodiscard]] int find(const std::string& name) const
    {
        for (std::size_t i = 0; i < templates_.size(); ++i)
            if (templates_[i].name == name)
                return static_cast<int>(i);
        return -1;
    }

    [[nodiscard]] WorkflowNode instantiate(int id, Rng& rng) const
    {
        const double kb = uniform(rng, min_kb_, max_kb_);
        return instantiate(id, kb);
    }

    [[nodiscard]] WorkflowNode instantiate(int id, double data_kb) const
    {
        const auto& ids = function_ids_.at(static_cast<std::size_t>(id));
        std::size_t next = 0;
        return at(id).root.instantiate([&](const std::string&) { return ids.at(next++); }, data_kb);
    }

    /// A template other than `current` (uniformly), or `current` itself when
    /// it is the only one.
    [[nodiscard]] int pick_other(int current, Rng& rng) const
    {
        if (templates_.size() <= 1)
            return current < 0 ? 0 : current;
        if (current < 0 || static_cast<std::size_t>(current) >= templates_.size())
            return static_cast<int>(uniform_index(rng, templates_.size()));
        auto k = static_cast<int>(uniform_index(rng, templates_.size() - 1));
        return k >= current ? k + 1 : k;
    }

private:
    std::vector<WorkflowTemplate> templates_;
    std::vector<std::vector<FunctionId>> function_ids_;
    double min_kb_ = 1024.0;
    double max_kb_ = 5120.0;
};

} // namespace music

#endif // MUSIC_WORKFLOW_TEMPLATES_HPP
