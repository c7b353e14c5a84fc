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

#ifndef MUSIC_REGISTRY_RTREE_HPP
#define MUSIC_REGISTRY_RTREE_HPP

#include <music/core/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace music {

/// Guttman R-tree with quadratic split. Values are stored in leaves with their
/// bounding rectangle; every internal entry's rectangle is the minimum
/// bounding rectangle of its subtree.
template <typename Value, std::size_t MaxEntries = 8, std::size_t MinEntries = 3>
class RTree
{
    static_assert(MinEntries >= 2 && MinEntries <= (MaxEntries + 1) / 2, "need 2 <= m <= ceil(M/2)");

public:
    struct Item
    {
        Rect box;
        Value value;
    };

    RTree() : root_(std::make_unique<Node>(true)) {}

    RTree(const RTree&) = delete;
    RTree& operator=(const RTree&) = delete;
    RTree(RTree&&) noexcept = default;
    RTree& operator=(RTree&&) noexcept = default;

    [[nodiscard]] std::size_t size() const { return size_; }
    [[nodiscard]] bool empty() const { return size_ == 0; }

    void insert(const Rect& box, Value value)
    {
        insert_item(Item{box, std::move(value)});
        ++size_;
    }

    /// Removes one item equal to (box, value). Returns false if absent.
    bool remove(const Rect& box, const Value& value)
    {
        Node* leaf = find_leaf(root_.get(), box, value);
        if (!leaf)
            return false;
        auto& items = leaf->items;
        items.erase(std::find_if(items.begin(), items.end(),
                                 [&](const Item& it) { return it.box == box && it.value == value; }));
        --size_;
        condense(leaf);
        return true;
    }

    /// Calls visit(item) for each item whose rectangle intersects `window`.
    /// Returns the number of tree nodes examined.
    template <typename Visit>
    std::size_t search(const Rect& window, Visit&& visit) const
    {
        std::size_t visited = 0;
        if (size_ > 0)
            search(root_.get(), window, visit, visited);
        return visited;
    }

    [[nodiscard]] std::size_t height() const
    {
        std::size_t h = 1;
        for (const Node* n = root_.get(); !n->leaf; n = n->children.front().get())
            ++h;
        return h;
    }

    [[nodiscard]] std::size_t node_count() const { return count_nodes(root_.get()); }

    /// Checks the structural invariants; returns an empty string when they
    /// hold, otherwise a description of the first violation.
    [[nodiscard]] std::string check_invariants() const
    {
        std::string why;
        std::size_t leaf_depth = 0;
        std::size_t items = 0;
        check(root_.get(), nullptr, 1, leaf_depth, items, why);
        if (why.empty() && items != size_)
            why = "item count " + std::to_string(items) + " != size " + std::to_string(size_);
        return why;
    }

    /// Indented text rendering of the MBR hierarchy.
    template <typename Describe>
    void dump(std::ostream& os, Describe&& describe) const
    {
        dump(os, root_.get(), 0, describe);
    }

private:
    struct Node
    {
        explicit Node(bool is_leaf) : leaf(is_leaf) {}

        bool leaf;
        Node* parent = nullptr;
        Rect box{};
        std::vector<Item> items;                    // leaf level
        std::vector<std::unique_ptr<Node>> children; // internal level

        [[nodiscard]] std::size_t fanout() const { return leaf ? items.size() : children.size(); }

        void recompute_box()
        {
            bool first = true;
            const auto add = [&](const Rect& r) {
                box = first ? r : box.united(r);
                first = false;
            };
            if (leaf)
                for (const auto& it : items)
                    add(it.box);
            else
                for (const auto& c : children)
                    add(c->box);
        }
    };

    void insert_item(Item item)
    {
        Node* leaf = choose_leaf(item.box);
        leaf->items.push_back(std::move(item));
        std::unique_ptr<Node> sibling;
        if (leaf->items.size() > MaxEntries)
            sibling = split(leaf);
        adjust(leaf, std::move(sibling));
    }

    Node* choose_leaf(const Rect& box) const
    {
        Node* n = root_.get();
        while (!n->leaf) {
            Node* best = nullptr;
            double best_growth = std::numeric_limits<double>::infinity();
            double best_area = std::numeric_limits<double>::infinity();
            for (const auto& c : n->children) {
                const double growth = c->box.enlargement(box);
                const double area = c->box.area();
                if (growth < best_growth || (growth == best_growth && area < best_area)) {
                    best = c.get();
                    best_growth = growth;
                    best_area = area;
                }
            }
            n = best;
        }
        return n;
    }

    /// Propagates a change at `n` (and a split-off sibling) up to the root.
    void adjust(Node* n, std::unique_ptr<Node> sibling)
    {
        while (true) {
            n->recompute_box();
            if (sibling)
                sibling->recompute_box();
            Node* parent = n->parent;
            if (!parent) {
                if (sibling) {
                    auto new_root = std::make_unique<Node>(false);
                    n->parent = new_root.get();
                    sibling->parent = new_root.get();
                    new_root->children.push_back(std::move(root_));
                    new_root->children.push_back(std::move(sibling));
                    new_root->recompute_box();
                    root_ = std::move(new_root);
                }
                return;
            }
            std::unique_ptr<Node> parent_sibling;
            if (sibling) {
                sibling->parent = parent;
                parent->children.push_back(std::move(sibling));
                if (parent->children.size() > MaxEntries)
                    parent_sibling = split(parent);
            }
            n = parent;
            sibling = std::move(parent_sibling);
        }
    }

    template <typename Entry>
    static const Rect& box_of(const Entry& e)
    {
        if constexpr (std::is_same_v<Entry, Item>)
            return e.box;
        else
            return e->box;
    }

    /// Quadratic split of an overfull node; returns the new sibling.
    std::unique_ptr<Node> split(Node* n)
    {
        auto sibling = std::make_unique<Node>(n->leaf);
        if (n->leaf)
            quadratic_split(n->items, sibling->items);
        else {
            quadratic_split(n->children, sibling->children);
            for (auto& c : sibling->children)
                c->parent = sibling.get();
            for (auto& c : n->children)
                c->parent = n;
        }
        n->recompute_box();
        sibling->recompute_box();
        return sibling;
    }

    template <typename Entry>
    static void quadratic_split(std::vector<Entry>& keep, std::vector<Entry>& moved)
    {
        std::vector<Entry> pool = std::move(keep);
        keep.clear();
        moved.clear();

        // Seeds: the pair that would waste the most area together.
        std::size_t s1 = 0, s2 = 1;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pool.size(); ++i)
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                const Rect& a = box_of(pool[i]);
                const Rect& b = box_of(pool[j]);
                const double waste = a.united(b).area() - a.area() - b.area();
                if (waste > worst) {
                    worst = waste;
                    s1 = i;
                    s2 = j;
                }
            }
        Rect box1 = box_of(pool[s1]);
        Rect box2 = box_of(pool[s2]);
        keep.push_back(std::move(pool[s1]));
        moved.push_back(std::move(pool[s2]));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(s2));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(s1));

        while (!pool.empty()) {
            if (keep.size() + pool.size() == MinEntries) {
                for (auto& e : pool)
                    keep.push_back(std::move(e));
                break;
            }
            if (moved.size() + pool.size() == MinEntries) {
                for (auto& e : pool)
                    moved.push_back(std::move(e));
                break;
            }
            // Next: the entry with the strongest preference for one group.
            std::size_t pick = 0;
            double best_pref = -1.0;
            for (std::size_t i = 0; i < pool.size(); ++i) {
                const double d1 = box1.enlargement(box_of(pool[i]));
                const double d2 = box2.enlargement(box_of(pool[i]));
                if (std::abs(d1 - d2) > best_pref) {
                    best_pref = std::abs(d1 - d2);
                    pick = i;
                }
            }
            const Rect& r = box_of(pool[pick]);
            const double d1 = box1.enlargement(r);
            const double d2 = box2.enlargement(r);
            bool to_first;
            if (d1 != d2)
                to_first = d1 < d2;
            else if (box1.area() != box2.area())
                to_first = box1.area() < box2.area();
            else
                to_first = keep.size() <= moved.size();
            if (to_first) {
                box1 = box1.united(r);
                keep.push_back(std::move(pool[pick]));
            } else {
                box2 = box2.united(r);
                moved.push_back(std::move(pool[pick]));
            }
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        }
    }

    Node* find_leaf(Node* n, const Rect& box, const Value& value) const
    {
        if (n->leaf) {
            for (const auto& it : n->items)
                if (it.box == box && it.value == value)
                    return n;
            return nullptr;
        }
        for (const auto& c : n->children)
            if (c->box.contains(box))
                if (Node* hit = find_leaf(c.get(), box, value))
                    return hit;
        return nullptr;
    }

    static void collect_items(std::unique_ptr<Node>& n, std::vector<Item>& out)
    {
        if (n->leaf) {
            for (auto& it : n->items)
                out.push_back(std::move(it));
            return;
        }
        for (auto& c : n->children)
            collect_items(c, out);
    }

    /// Removes underfull nodes on the path to the root and re-inserts their
    /// items.
    void condense(Node* n)
    {
        std::vector<Item> orphans;
        while (n->parent) {
            Node* parent = n->parent;
            if (n->fanout() < MinEntries) {
                auto it = std::find_if(parent->children.begin(), parent->children.end(),
                                       [&](const std::unique_ptr<Node>& c) { return c.get() == n; });
                std::unique_ptr<Node> gone = std::move(*it);
                parent->children.erase(it);
                collect_items(gone, orphans);
            } else {
                n->recompute_box();
            }
            n = parent;
        }
        n->recompute_box();
        if (!root_->leaf && root_->children.empty())
            root_ = std::make_unique<Node>(true);
        for (auto& item : orphans)
            insert_item(std::move(item));
        // The root may have been left with a single child after the removals.
        while (!root_->leaf && root_->children.size() == 1) {
            auto child = std::move(root_->children.front());
            child->parent = nullptr;
            root_ = std::move(child);
        }
    }

    template <typename Visit>
    static void search(const Node* n, const Rect& window, Visit& visit, std::size_t& visited)
    {
        ++visited;
        if (n->leaf) {
            for (const auto& it : n->items)
                if (it.box.intersects(window))
                    visit(it);
            return;
        }
        for (const auto& c : n->children)
            if (c->box.intersects(window))
                search(c.get(), window, visit, visited);
    }

    static std::size_t count_nodes(const Node* n)
    {
        std::size_t k = 1;
        if (!n->leaf)
            for (const auto& c : n->children)
                k += count_nodes(c.get());
        return k;
    }

    void check(const Node* n, const Node* parent, std::size_t depth, std::size_t& leaf_depth, std::size_t& items,
               std::string& why) const
    {
        if (!why.empty())
            return;
        if (n->parent != parent) {
            why = "broken parent link at depth " + std::to_string(depth);
            return;
        }
        const bool is_root = parent == nullptr;
        const std::size_t fan = n->fanout();
        if (fan > MaxEntries || (!is_root && fan < MinEntries) || (is_root && !n->leaf && fan < 2)) {
            why = "fan-out " + std::to_string(fan) + " out of range at depth " + std::to_string(depth);
            return;
        }
        if (fan > 0) {
            Rect tight{};
            bool first = true;
            if (n->leaf)
                for (const auto& it : n->items) {
                    tight = first ? it.box : tight.united(it.box);
                    first = false;
                }
            else
                for (const auto& c : n->children) {
                    if (!n->box.contains(c->box)) {
                        why = "child MBR escapes its parent at depth " + std::to_string(depth);
                        return;
                    }
                    tight = first ? c->box : tight.united(c->box);
                    first = false;
                }
            if (!(tight == n->box)) {
                why = "stale MBR at depth " + std::to_string(depth);
                return;
            }
        }
        if (n->leaf) {
            if (leaf_depth == 0)
                leaf_depth = depth;
            else if (leaf_depth != depth)
                why = "leaves at different depths";
            items += n->items.size();
            return;
        }
        for (const auto& c : n->children)
            check(c.get(), n, depth + 1, leaf_depth, items, why);
    }

    template <typename Describe>
    static void dump(std::ostream& os, const Node* n, int indent, Describe& describe)
    {
        const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
        os << pad << (n->leaf ? "leaf" : "node") << " [" << n->box.min_x << ", " << n->box.min_y << "] - ["
           << n->box.max_x << ", " << n->box.max_y << "]\n";
        if (n->leaf) {
            for (const auto& it : n->items)
                os << pad << "  " << describe(it.value) << " @ (" << it.box.min_x << ", " << it.box.min_y << ")\n";
            return;
        }
        for (const auto& c : n->children)
            dump(os, c.get(), indent + 1, describe);
    }

    std::unique_ptr<Node> root_;
    std::size_t size_ = 0;
};

} // namespace music

#endif // MUSIC_REGISTRY_RTREE_HPP
