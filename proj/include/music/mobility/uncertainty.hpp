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

#ifndef MUSIC_MOBILITY_UNCERTAINTY_HPP
#define MUSIC_MOBILITY_UNCERTAINTY_HPP

#include <music/core/model.hpp>
#include <music/error.hpp>
#include <music/random.hpp>
#include <music/workflow/templates.hpp>
#include <music/workflow/workflow.hpp>

#include <cstdint>
#include <vector>

namespace music {

enum class PerturbMode { PerturbLocation, PerturbService, Both };

struct UncertaintySpec
{
    double rate = 0.0; ///< probability that an entry is mispredicted
    PerturbMode mode = PerturbMode::Both;
    std::uint64_t seed = 0;

    void validate() const
    {
        if (!(rate >= 0.0 && rate <= 1.0))
            throw InvalidInput("uncertainty rate must lie in [0, 1]");
    }
};

enum class Perturbation { None, Location, Service };

struct PerturbedLtw
{
    LocationTimeWorkflow ltw;
    std::vector<Perturbation> changes; ///< one per entry
};

/// Mispredicts each entry independently with probability `rate`: either its
/// cell is replaced by a uniformly random different cell, or its workflow by
/// an instance of a different template (an even split under Both).
inline PerturbedLtw perturb_ltw(const LocationTimeWorkflow& ltw, const UncertaintySpec& spec, const LocationMap& map,
                                const TemplateLibrary& templates)
{
    spec.validate();
    if (ltw.entries.empty())
        throw InvalidInput("cannot perturb an empty LTW");
    Rng rng(spec.seed);
    PerturbedLtw out{ltw, std::vector<Perturbation>(ltw.entries.size(), Perturbation::None)};
    for (std::size_t i = 0; i < out.ltw.entries.size(); ++i) {
        if (!bernoulli(rng, spec.rate))
            continue;
        bool location = spec.mode == PerturbMode::PerturbLocation;
        if (spec.mode == PerturbMode::Both)
            location = bernoulli(rng, 0.5);
        LtwEntry& e = out.ltw.entries[i];
        if (location && map.size() > 1) {
            auto k = static_cast<std::int32_t>(uniform_index(rng, map.size() - 1));
            e.cell = CellId(k >= e.cell.value ? k + 1 : k);
            out.changes[i] = Perturbation::Location;
        } else if (templates.size() > 0) {
            e.template_id = templates.pick_other(e.template_id, rng);
            e.workflow = templates.instantiate(e.template_id, rng);
            out.changes[i] = Perturbation::Service;
        }
    }
    return out;
}

inline LocationTimeWorkflow inject_uncertainty(const LocationTimeWorkflow& ltw, const UncertaintySpec& spec,
                                               const LocationMap& map, const TemplateLibrary& templates)
{
    return perturb_ltw(ltw, spec, map, templates).ltw;
}

} // namespace music

#endif // MUSIC_MOBILITY_UNCERTAINTY_HPP
