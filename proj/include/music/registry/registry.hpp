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

#ifndef MUSIC_REGISTRY_REGISTRY_HPP
#define MUSIC_REGISTRY_REGISTRY_HPP

#include <music/core/model.hpp>
#include <music/error.hpp>
#include <music/registry/rtree.hpp>

#include <algorithm>
#include <atomic>
#include <memory>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

namespace music {

/// Service directory. Grid-located services sit in an R-tree keyed by their
/// host's cell center; services without a grid location (public clouds) are
/// kept in an "everywhere" set that queries merge in on request.
class ServiceRegistry
{
public:
    ServiceRegistry() = default;

    /// Registers every cloud-hosted service of the world. Device services are
    /// private to their user and are not published.
    static ServiceRegistry build(const World& world)
    {
        ServiceRegistry r;
        for (const auto& s : world.services) {
            const auto c = s.cloud();
            if (!c)
                continue;
            const CloudNode& node = world.cloud(*c);
            if (node.tier == Tier::Local && node.location)
                r.insert(s, world.map.center(*node.location));
            else
                r.insert(s, std::nullopt);
        }
        return r;
    }

    /// `location` empty: the service is reachable from everywhere.
    void insert(const Service& s, std::optional<Vec2> location)
    {
        if (entries_.contains(s.id))
            throw IdError("service " + std::to_string(s.id.value) + " is already registered");
        entries_.emplace(s.id, Entry{s.function, location});
        if (location)
            tree_.insert(Rect::of_point(*location), s.id);
        else
            everywhere_.insert(std::upper_bound(everywhere_.begin(), everywhere_.end(), s.id), s.id);
    }

    void remove(ServiceId id)
    {
        const auto it = entries_.find(id);
        if (it == entries_.end())
            throw IdError("service " + std::to_string(id.value) + " is not registered");
        if (it->second.location)
            tree_.remove(Rect::of_point(*it->second.location), id);
        else
            everywhere_.erase(std::find(everywhere_.begin(), everywhere_.end(), id));
        entries_.erase(it);
    }

    [[nodiscard]] bool contains(ServiceId id) const { return entries_.contains(id); }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] std::size_t located_count() const { return tree_.size(); }

    /// Services within Euclidean distance d of `point`, optionally restricted
    /// to one function, sorted by id. The tree is descended with the disc's
    /// bounding box and hits are then filtered by exact distance.
    [[nodiscard]] std::vector<ServiceId> range_query(Vec2 point, double d, std::optional<FunctionId> function = {},
                                                     bool include_everywhere = false) const
    {
        if (d < 0.0)
            throw InvalidInput("query radius must be non-negative");
        std::vector<ServiceId> out;
        last_visited_ = tree_.search(Rect::around(point, d), [&](const auto& item) {
            const Vec2 at{item.box.min_x, item.box.min_y};
            if (distance(at, point) > d)
                return;
            if (function && entries_.at(item.value).function != *function)
                return;
            out.push_back(item.value);
        });
        if (include_everywhere)
            for (const ServiceId id : everywhere_)
                if (!function || entries_.at(id).function == *function)
                    out.push_back(id);
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Tree nodes examined by the most recent range query.
    [[nodiscard]] std::size_t last_query_visits() const { return last_visited_; }
    [[nodiscard]] const RTree<ServiceId>& tree() const { return tree_; }

    void dump(std::ostream& os) const
    {
        os << "registry: " << tree_.size() << " located, " << everywhere_.size() << " everywhere\n";
        tree_.dump(os, [&](ServiceId id) {
            return "service " + std::to_string(id.value) + " fn " + std::to_string(entries_.at(id).function.value);
        });
        for (const ServiceId id : everywhere_)
            os << "everywhere: service " << id.value << " fn " << entries_.at(id).function.value << "\n";
    }

private:
    struct Entry
    {
        FunctionId function;
        std::optional<Vec2> location;
    };

    RTree<ServiceId> tree_;
    std::vector<ServiceId> everywhere_;
    std::unordered_map<ServiceId, Entry> entries_;
    mutable std::size_t last_visited_ = 0;
};

/// Per-local-cloud admission counts. Admission is an atomic
/// check-and-increment, so concurrent callers can never push a count past
/// its cap.
class CapacityLedger
{
public:
    CapacityLedger() = default;

    explicit CapacityLedger(const World& world)
        : caps_(world.clouds.size()), counts_(std::make_unique<std::atomic<int>[]>(world.clouds.size()))
    {
        for (const auto& c : world.clouds)
            caps_[c.id.index()] = c.tier == Tier::Local ? c.capacity : -1;
        for (std::size_t i = 0; i < caps_.size(); ++i)
            counts_[i].store(0);
    }

    CapacityLedger(const CapacityLedger& o) : caps_(o.caps_), counts_(std::make_unique<std::atomic<int>[]>(o.caps_.size()))
    {
        for (std::size_t i = 0; i < caps_.size(); ++i)
            counts_[i].store(o.counts_[i].load());
    }

    CapacityLedger& operator=(const CapacityLedger& o)
    {
        if (this != &o) {
            CapacityLedger tmp(o);
            caps_ = std::move(tmp.caps_);
            counts_ = std::move(tmp.counts_);
        }
        return *this;
    }

    CapacityLedger(CapacityLedger&&) noexcept = default;
    CapacityLedger& operator=(CapacityLedger&&) noexcept = default;

    /// True for clouds with unbounded capacity.
    [[nodiscard]] bool unbounded(CloudId c) const { return caps_.at(c.index()) < 0; }

    [[nodiscard]] bool try_admit(CloudId c)
    {
        const int cap = caps_.at(c.index());
        if (cap < 0)
            return true;
        auto& count = counts_[c.index()];
        int now = count.load();
        while (now < cap)
            if (count.compare_exchange_weak(now, now + 1))
                return true;
        return false;
    }

    void release(CloudId c)
    {
        if (caps_.at(c.index()) < 0)
            return;
        auto& count = counts_[c.index()];
        int now = count.load();
        while (true) {
            if (now <= 0)
                throw LedgerUnderflow("release on cloud " + std::to_string(c.value) + " with no admitted client");
            if (count.compare_exchange_weak(now, now - 1))
                return;
        }
    }

    [[nodiscard]] int count(CloudId c) const
    {
        return caps_.at(c.index()) < 0 ? 0 : counts_[c.index()].load();
    }

    [[nodiscard]] int cap(CloudId c) const { return caps_.at(c.index()); }

    /// Would admitting to `c` succeed right now.
    [[nodiscard]] bool has_room(CloudId c) const { return unbounded(c) || count(c) < cap(c); }

private:
    std::vector<int> caps_;
    std::unique_ptr<std::atomic<int>[]> counts_;
};

} // namespace music

#endif // MUSIC_REGISTRY_REGISTRY_HPP
