#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <vector>

#include "pjoin/item.hpp"

namespace pjoin {

// Item-granularity backend: each item is two aggregate units (predictive
// part and the rest) evolving under the same rule classification the neuroid
// tables use, one step per item-level hop. Recruitment noise aside, a
// three-step (reciprocal) neuroid network reproduces these traces step for
// step; the crosscheck enforces that.
class AbstractNet {
public:
    enum class PromptFanout : std::uint8_t { BothChildren, RandomChild };

    explicit AbstractNet(std::uint64_t seed = 0);

    ItemId add_leaf(ItemKind kind = ItemKind::Leaf, int sensor_index = -1);
    // Pre-built PJOIN (fixtures); for the creation protocol use schedule_pjoin.
    ItemId add_pjoin(ItemId a, ItemId b);
    // One-way parent used to inject "parent fires downward" events.
    ItemId add_stub_parent(ItemId child);

    // Runs the four-phase creation schedule: fire A, fire B, birth (C fires),
    // predictive-part firing; downward links usable one step later.
    ItemId schedule_pjoin(ItemId a, ItemId b);

    struct Controls {
        std::vector<ItemId> force_full;
        std::vector<ItemId> force_ppart;  // stands in for a parent prompting from above
    };

    // Advances one step; returns the item-level events of the new step.
    std::vector<TraceEvent> step(const Controls& c = {});

    std::int64_t time() const { return t_; }
    std::size_t item_count() const { return items_.size(); }
    const Item& item(ItemId i) const { return items_[i].meta; }
    const std::vector<Item> dag() const;

    bool fired_full_now(ItemId i) const { return items_[i].full_now; }
    bool fired_ppart_now(ItemId i) const { return items_[i].p_now; }
    bool quiescent() const { return last_quiescent_; }
    bool busy() const { return !pending_.empty(); }

    MachineState machine_state(ItemId i) const;

    // direct children of the last prediction registered by item i, if any
    std::optional<ItemId> predicted_child(ItemId i) const;

    void set_refraction(int steps) { refraction_R_ = steps; }
    void set_fanout(PromptFanout f) { fanout_ = f; }

    // presentation-boundary reset: undo prediction doubling, revive spent
    // parent groups, clear refraction and the passivity view
    void reset_operational_state();

private:
    struct Unit {
        int mul_a = 1;
        int mul_b = 1;
        int refractory = 0;
        bool fired = false;
    };

    struct Node {
        Item meta;
        Unit np, p;
        std::vector<char> group_spent;  // aligned with meta.parents
        bool passive_view = false;
        bool full_now = false;
        bool p_now = false;
        bool np_now = false;
        // which children this node's predictive firing prompted (this step)
        bool prompts_a = false;
        bool prompts_b = false;
        std::int64_t downlinks_active_from = 0;
    };

    struct Pending {
        std::int64_t t;
        enum Kind { ForceFull, Birth, BirthP } kind;
        ItemId item;
    };

    std::vector<Node> items_;
    std::deque<Pending> pending_;
    std::int64_t t_ = 0;
    int refraction_R_ = 1;
    PromptFanout fanout_ = PromptFanout::BothChildren;
    bool last_quiescent_ = false;
    std::mt19937_64 rng_;

    void register_parent(ItemId child, ItemId parent);
};

}  // namespace pjoin
