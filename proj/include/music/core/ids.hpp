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

#ifndef MUSIC_CORE_IDS_HPP
#define MUSIC_CORE_IDS_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>

namespace music {

/// Integer identifier tagged with the entity it names, so a cell id can
/// never be passed where a service id is expected.
template <typename Tag>
struct Id
{
    std::int32_t value = -1;

    constexpr Id() = default;
    constexpr explicit Id(std::int32_t v) : value(v) {}

    [[nodiscard]] constexpr bool valid() const { return value >= 0; }
    [[nodiscard]] constexpr std::size_t index() const { return static_cast<std::size_t>(value); }

    friend constexpr auto operator<=>(Id, Id) = default;

    friend std::ostream& operator<<(std::ostream& os, Id id) { return os << id.value; }
};

using CellId = Id<struct CellTag>;
using CloudId = Id<struct CloudTag>;
using ServiceId = Id<struct ServiceTag>;
using UserId = Id<struct UserTag>;
using GroupId = Id<struct GroupTag>;
using FunctionId = Id<struct FunctionTag>;

} // namespace music

template <typename Tag>
struct std::hash<music::Id<Tag>>
{
    std::size_t operator()(music::Id<Tag> id) const noexcept { return std::hash<std::int32_t>{}(id.value); }
};

#endif // MUSIC_CORE_IDS_HPP
