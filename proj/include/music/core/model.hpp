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

#ifndef MUSIC_CORE_MODEL_HPP
#define MUSIC_CORE_MODEL_HPP

#include <music/core/geometry.hpp>
#include <music/core/ids.hpp>
#include <music/error.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace music {

struct Cell
{
    CellId id;
    Vec2 center;
    /// Access point the device associates with in this cell (nearest covering
    /// local cloud), if any.
    std::optional<CloudId> wifi_covered_by;
};

/// Regular width x height partition of a rectangle into square cells.
/// Cell ids are row-major starting at the lower-left corner.
class LocationMap
{
public:
    LocationMap() = default;

    LocationMap(int width, int height, double cell_size)
        : width_(width), height_(height), cell_size_(cell_size)
    {
        if (width <= 0 || height <= 0 || !(cell_size > 0.0))
            throw InvalidInput("location map needs positive width, height and cell size");
        cells_.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
        for (int row = 0; row < height; ++row)
            for (int col = 0; col < width; ++col)
                cells_.push_back(Cell{CellId(row * width + col),
                                      Vec2{(col + 0.5) * cell_size, (row + 0.5) * cell_size},
                                      std::nullopt});
    }

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] double cell_size() const { return cell_size_; }
    [[nodiscard]] std::size_t size() const { return cells_.size(); }
    [[nodiscard]] const std::vector<Cell>& cells() const { return cells_; }

    [[nodiscard]] Rect bounds() const { return {0.0, 0.0, width_ * cell_size_, height_ * cell_size_}; }

    [[nodiscard]] bool contains(CellId id) const { return id.valid() && id.index() < cells_.size(); }

    [[nodiscard]] const Cell& cell(CellId id) const
    {
        if (!contains(id))
            throw InvalidInput("cell id " + std::to_string(id.value) + " outside the map");
        return cells_[id.index()];
    }

    [[nodiscard]] Vec2 center(CellId id) const { return cell(id).center; }

    [[nodiscard]] int column(CellId id) const { return id.value % width_; }
    [[nodiscard]] int row(CellId id) const { return id.value / width_; }

    [[nodiscard]] CellId at(int col, int row) const
    {
        if (col < 0 || col >= width_ || row < 0 || row >= height_)
            throw InvalidInput("grid coordinate outside the map");
        return CellId(row * width_ + col);
    }

    /// Cell containing the point. Points on a shared edge belong to the cell
    /// on the upper/right side, the outer boundary to the last row/column.
    [[nodiscard]] CellId locate(Vec2 p) const
    {
        if (!bounds().contains(p))
            throw InvalidInput("point outside the map");
        const int col = std::min(width_ - 1, static_cast<int>(std::floor(p.x / cell_size_)));
        const int row = std::min(height_ - 1, static_cast<int>(std::floor(p.y / cell_size_)));
        return at(col, row);
    }

    /// Cell whose center is nearest to p; ties go to the lowest id.
    [[nodiscard]] CellId nearest(Vec2 p) const
    {
        CellId best;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& c : cells_) {
            const double d = distance(c.center, p);
            if (d < best_d) {
                best_d = d;
                best = c.id;
            }
        }
        return best;
    }

    void set_wifi(CellId id, std::optional<CloudId> cloud) { mutable_cell(id).wifi_covered_by = cloud; }

private:
    Cell& mutable_cell(CellId id)
    {
        if (!contains(id))
            throw InvalidInput("cell id outside the map");
        return cells_[id.index()];
    }

    int width_ = 0;
    int height_ = 0;
    double cell_size_ = 0.0;
    std::vector<Cell> cells_;
};

enum class Tier { Local, Public };

inline const char* to_string(Tier t) { return t == Tier::Local ? "local" : "public"; }

struct CloudNode
{
    CloudId id;
    Tier tier = Tier::Public;
    /// Grid cell of a local cloud; public clouds have none.
    std::optional<CellId> location;
    /// Maximum number of admitted mobile clients; unbounded for public clouds.
    int capacity = std::numeric_limits<int>::max();
    /// Cells where this local cloud's access point provides WiFi, sorted.
    std::vector<CellId> covered_cells;

    [[nodiscard]] bool covers(CellId c) const
    {
        return std::binary_search(covered_cells.begin(), covered_cells.end(), c);
    }
};

struct OnDevice
{
    UserId user;
    friend bool operator==(const OnDevice&, const OnDevice&) = default;
};

struct OnCloud
{
    CloudId node;
    friend bool operator==(const OnCloud&, const OnCloud&) = default;
};

using ServiceHost = std::variant<OnDevice, OnCloud>;

enum class Billing { Compute, Streaming };

struct Service
{
    ServiceId id;
    FunctionId function;
    ServiceHost host;
    /// Compute-profile class; empty selects the per-tier default profile.
    std::string profile_class;
    Billing billing = Billing::Compute;

    [[nodiscard]] bool on_device() const { return std::holds_alternative<OnDevice>(host); }
    [[nodiscard]] std::optional<CloudId> cloud() const
    {
        if (const auto* c = std::get_if<OnCloud>(&host))
            return c->node;
        return std::nullopt;
    }
};

struct TrajectoryEntry
{
    CellId cell;
    double dwell = 0.0; ///< seconds
};

struct Trajectory
{
    std::vector<TrajectoryEntry> entries;

    [[nodiscard]] bool empty() const { return entries.empty(); }

    [[nodiscard]] double duration() const
    {
        double t = 0.0;
        for (const auto& e : entries)
            t += e.dwell;
        return t;
    }

    /// Cell occupied at time t (clamped to the trajectory's span).
    [[nodiscard]] CellId cell_at(double t) const
    {
        if (entries.empty())
            throw InvalidTrajectory("empty trajectory has no position");
        double acc = 0.0;
        for (const auto& e : entries) {
            acc += e.dwell;
            if (t < acc)
                return e.cell;
        }
        return entries.back().cell;
    }
};

struct MobileUser
{
    UserId id;
    std::vector<ServiceId> device_services;
    Trajectory trajectory;
};

struct UserGroup
{
    GroupId id;
    std::vector<UserId> members;
};

/// Everything that exists in one simulated region: the grid, the clouds, every
/// service, and the users. Immutable once a scenario has been built.
struct World
{
    LocationMap map;
    std::vector<CloudNode> clouds;
    std::vector<Service> services;
    std::vector<MobileUser> users;
    std::vector<std::string> function_names;

    [[nodiscard]] const CloudNode& cloud(CloudId id) const
    {
        if (!id.valid() || id.index() >= clouds.size())
            throw InvalidInput("unknown cloud id " + std::to_string(id.value));
        return clouds[id.index()];
    }

    [[nodiscard]] const Service& service(ServiceId id) const
    {
        if (!id.valid() || id.index() >= services.size())
            throw InvalidInput("unknown service id " + std::to_string(id.value));
        return services[id.index()];
    }

    [[nodiscard]] const MobileUser& user(UserId id) const
    {
        if (!id.valid() || id.index() >= users.size())
            throw InvalidInput("unknown user id " + std::to_string(id.value));
        return users[id.index()];
    }

    [[nodiscard]] std::optional<FunctionId> function_id(const std::string& name) const
    {
        const auto it = std::find(function_names.begin(), function_names.end(), name);
        if (it == function_names.end())
            return std::nullopt;
        return FunctionId(static_cast<std::int32_t>(it - function_names.begin()));
    }

    FunctionId intern_function(const std::string& name)
    {
        if (auto id = function_id(name))
            return *id;
        function_names.push_back(name);
        return FunctionId(static_cast<std::int32_t>(function_names.size() - 1));
    }

    [[nodiscard]] Tier tier_of(const Service& s) const
    {
        const auto c = s.cloud();
        return c ? cloud(*c).tier : Tier::Local;
    }
};

/// Cell set of a local cloud's access point: its own cell plus the `around`
/// nearest other cells (center distance, ties to the lowest id).
inline std::vector<CellId> coverage_cells(const LocationMap& map, CellId site, int around)
{
    const Vec2 c = map.center(site);
    std::vector<std::pair<double, CellId>> by_distance;
    by_distance.reserve(map.size());
    for (const auto& cell : map.cells())
        if (cell.id != site)
            by_distance.emplace_back(distance(cell.center, c), cell.id);
    std::sort(by_distance.begin(), by_distance.end());
    std::vector<CellId> out{site};
    for (int i = 0; i < around && i < static_cast<int>(by_distance.size()); ++i)
        out.push_back(by_distance[static_cast<std::size_t>(i)].second);
    std::sort(out.begin(), out.end());
    return out;
}

/// Marks each covered cell with its nearest covering local cloud.
inline void assign_wifi(LocationMap& map, const std::vector<CloudNode>& clouds)
{
    for (const auto& cell : map.cells()) {
        std::optional<CloudId> best;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& node : clouds) {
            if (node.tier != Tier::Local || !node.location || !node.covers(cell.id))
                continue;
            const double d = distance(map.center(*node.location), cell.center);
            if (d < best_d) {
                best_d = d;
                best = node.id;
            }
        }
        map.set_wifi(cell.id, best);
    }
}

} // namespace music

#endif // MUSIC_CORE_MODEL_HPP
