#include "pjoin/abstract_net.hpp"

#include <algorithm>
#include <cassert>
#include <ostream>
#include <sstream>

namespace pjoin {

std::string to_string(const TraceEvent& e) {
    std::ostringstream os;
    os << e.t << ":i" << e.item << ':'
       << (e.part == PartEvent::Full ? "full" : e.part == PartEvent::PPart ? "p" : "np");
    if (e.forced) os << "!";
    return os.str();
}

void export_item_dag(const std::vector<Item>& items, std::ostream& os) {
    os << "pjoin-itemdag 1 " << items.size() << "\n";
    for (const Item& it : items) {
        os << it.id << ' ' << to_string(it.kind) << ' ' << it.level << ' ' << it.child_a << ' '
           << it.child_b << ' ' << it.neuroids.size() << ' ' << it.predictive.size() << "\n";
    }
}

AbstractNet::AbstractNet(std::uint64_t seed) : rng_(seed) {}

ItemId AbstractNet::add_leaf(ItemKind kind, int sensor_index) {
    Node n;
    n.meta.id = static_cast<ItemId>(items_.size());
    n.meta.kind = kind;
    n.meta.level = 0;
    n.meta.sensor_index = sensor_index;
    items_.push_back(std::move(n));
    return items_.back().meta.id;
}

void AbstractNet::register_parent(ItemId child, ItemId parent) {
    if (child == kNoItem) return;
    items_[child].meta.parents.push_back(parent);
    items_[child].group_spent.push_back(0);
}

ItemId AbstractNet::add_pjoin(ItemId a, ItemId b) {
    Node n;
    n.meta.id = static_cast<ItemId>(items_.size());
    n.meta.kind = ItemKind::Pjoin;
    n.meta.child_a = a;
    n.meta.child_b = b;
    int la = a != kNoItem ? items_[a].meta.level : 0;
    int lb = b != kNoItem ? items_[b].meta.level : 0;
    n.meta.level = 1 + std::max(la, lb);
    n.downlinks_active_from = t_;  // fixture items are born fully wired
    ItemId id = n.meta.id;
    items_.push_back(std::move(n));
    register_parent(a, id);
    register_parent(b, id);
    return id;
}

ItemId AbstractNet::add_stub_parent(ItemId child) {
    // Control-only parent: prompts the child when its predictive part is
    // forced, never reacts to the child (mirrors a one-way Parent wiring).
    Node n;
    n.meta.id = static_cast<ItemId>(items_.size());
    n.meta.kind = ItemKind::Leaf;
    n.meta.child_a = child;
    n.meta.level = items_[child].meta.level + 1;
    n.downlinks_active_from = t_;
    ItemId id = n.meta.id;
    items_.push_back(std::move(n));
    register_parent(child, id);
    return id;
}

ItemId AbstractNet::schedule_pjoin(ItemId a, ItemId b) {
    Node n;
    n.meta.id = static_cast<ItemId>(items_.size());
    n.meta.kind = ItemKind::Pjoin;
    n.meta.child_a = a;
    n.meta.child_b = b;
    n.meta.level = 1 + std::max(items_[a].meta.level, items_[b].meta.level);
    n.downlinks_active_from = t_ + 5;  // wiring completes one step after BirthP
    ItemId id = n.meta.id;
    items_.push_back(std::move(n));
    register_parent(a, id);
    register_parent(b, id);
    pending_.push_back({t_ + 1, Pending::ForceFull, a});
    pending_.push_back({t_ + 2, Pending::ForceFull, b});
    pending_.push_back({t_ + 3, Pending::Birth, id});
    pending_.push_back({t_ + 4, Pending::BirthP, id});
    return id;
}

const std::vector<Item> AbstractNet::dag() const {
    std::vector<Item> out;
    out.reserve(items_.size());
    for (const Node& n : items_) out.push_back(n.meta);
    return out;
}

MachineState AbstractNet::machine_state(ItemId i) const {
    const Node& n = items_[i];
    if (n.np.mul_b == 2)
        return n.passive_view ? MachineState::PassivePredictingB : MachineState::PredictingB;
    if (n.np.mul_a == 2)
        return n.passive_view ? MachineState::PassivePredictingA : MachineState::PredictingA;
    return MachineState::Operational;
}

std::optional<ItemId> AbstractNet::predicted_child(ItemId i) const {
    const Node& n = items_[i];
    if (n.np.mul_b == 2) return n.meta.child_b;
    if (n.np.mul_a == 2) return n.meta.child_a;
    return std::nullopt;
}

void AbstractNet::reset_operational_state() {
    assert(pending_.empty());
    for (Node& n : items_) {
        n.np = Unit{};
        n.p = Unit{};
        std::fill(n.group_spent.begin(), n.group_spent.end(), 0);
        n.passive_view = false;
        n.full_now = n.p_now = n.np_now = false;
        n.prompts_a = n.prompts_b = false;
    }
}

std::vector<TraceEvent> AbstractNet::step(const Controls& c) {
    const std::int64_t now = t_;
    std::vector<char> force_full(items_.size(), 0), force_p(items_.size(), 0),
        exempt(items_.size(), 0);
    for (ItemId i : c.force_full) force_full[i] = 1;
    for (ItemId i : c.force_ppart) force_p[i] = 1;
    for (auto it = pending_.begin(); it != pending_.end();) {
        if (it->t != now + 1) {
            ++it;
            continue;
        }
        switch (it->kind) {
            case Pending::ForceFull: force_full[it->item] = 1; break;
            case Pending::Birth:
                force_full[it->item] = 1;
                exempt[it->item] = 1;  // recruitment firing under a creation tag
                break;
            case Pending::BirthP: force_p[it->item] = 1; break;
        }
        it = pending_.erase(it);
    }

    struct Outcome {
        bool p = false, np = false;
        bool p_prompt_caused = false;
        bool forced = false;
        WClass p_class = WClass::Zero;
        WClass np_class = WClass::Zero;
        bool a_in = false, b_in = false;
    };
    std::vector<Outcome> out(items_.size());

    // phase 1: decide firings from the flags of step `now`
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Node& n = items_[i];
        Outcome& o = out[i];
        const bool pj = n.meta.is_pjoin();
        o.a_in = pj && n.meta.child_a != kNoItem && items_[n.meta.child_a].full_now;
        o.b_in = pj && n.meta.child_b != kNoItem && items_[n.meta.child_b].full_now;
        int live_prompts = 0;
        for (std::size_t g = 0; g < n.meta.parents.size(); ++g) {
            const Node& par = items_[n.meta.parents[g]];
            if (!par.p_now || now < par.downlinks_active_from) continue;
            bool targeted = (par.meta.child_a == n.meta.id && par.prompts_a) ||
                            (par.meta.child_b == n.meta.id && par.prompts_b);
            if (!targeted) continue;
            if (!n.group_spent[g]) ++live_prompts;
        }

        // predictive-part unit, in units of T
        int wp = (o.a_in ? n.p.mul_a : 0) + (o.b_in ? n.p.mul_b : 0) + 2 * live_prompts;
        o.p_class = wp == 0 ? WClass::Zero : wp < 2 ? WClass::Fire : WClass::Double;
        bool p_want = wp >= 1 || force_p[i] || force_full[i];
        if (p_want && (n.p.refractory == 0 || exempt[i])) {
            o.p = true;
            o.p_prompt_caused = live_prompts > 0 && wp - 2 * live_prompts < 1;
            o.forced = force_full[i] || force_p[i];
        }

        // non-predictive unit, in units of T/2
        int wnp = (o.a_in ? n.np.mul_a : 0) + (o.b_in ? n.np.mul_b : 0);
        o.np_class = wnp == 0   ? WClass::Zero
                     : wnp < 2  ? WClass::Low
                     : wnp < 4  ? WClass::Fire
                                : WClass::Double;
        bool np_want = wnp >= 2 || force_full[i];
        if (np_want && (n.np.refractory == 0 || exempt[i])) o.np = true;
    }

    // phase 2: plasticity mirrors of the lambda rows, then commit
    std::vector<TraceEvent> events;
    bool any_change = false;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Node& n = items_[i];
        Outcome& o = out[i];

        if (o.p) {
            // any firing of the predictive part spends every parent group
            for (std::size_t g = 0; g < n.group_spent.size(); ++g) {
                if (!n.group_spent[g]) any_change = true;
                n.group_spent[g] = 1;
            }
            if (o.p_prompt_caused) n.passive_view = true;
            if (n.meta.is_pjoin()) {
                if (o.p_class == WClass::Fire) {
                    if (!o.a_in && n.p.mul_a == 1) n.p.mul_a = 2;
                    if (!o.b_in && n.p.mul_b == 1) n.p.mul_b = 2;
                } else if (o.p_class == WClass::Double) {
                    if (o.a_in && n.p.mul_a == 2) n.p.mul_a = 1;
                    if (o.b_in && n.p.mul_b == 2) n.p.mul_b = 1;
                }
            }
            if (!exempt[i] && refraction_R_ > 0) n.p.refractory = refraction_R_;
        }
        if (o.np && n.meta.is_pjoin() &&
            (o.np_class == WClass::Fire || o.np_class == WClass::Double)) {
            if (o.a_in && n.np.mul_a == 2) n.np.mul_a = 1;
            if (o.b_in && n.np.mul_b == 2) n.np.mul_b = 1;
        }
        if (!o.np && n.meta.is_pjoin() && o.np_class == WClass::Low) {
            // one side fired alone: the silent side doubles (enter predicting)
            if (!o.a_in && n.np.mul_a == 1 && o.b_in) {
                n.np.mul_a = 2;
                any_change = true;
            }
            if (!o.b_in && n.np.mul_b == 1 && o.a_in) {
                n.np.mul_b = 2;
                any_change = true;
            }
        }
        if (o.np && !exempt[i] && refraction_R_ > 0) n.np.refractory = refraction_R_;
        if (o.np && o.p) n.passive_view = false;  // full firing reads as Operational again
    }

    // refraction countdown for units that did not fire
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Node& n = items_[i];
        if (!out[i].p && n.p.refractory > 0) --n.p.refractory, any_change = true;
        if (!out[i].np && n.np.refractory > 0) --n.np.refractory, any_change = true;
    }

    // commit flags and emit events
    for (std::size_t i = 0; i < items_.size(); ++i) {
        Node& n = items_[i];
        Outcome& o = out[i];
        n.full_now = o.p && o.np;
        n.p_now = o.p;
        n.np_now = o.np;
        n.prompts_a = n.prompts_b = false;
        if (o.p) {
            if (fanout_ == PromptFanout::BothChildren) {
                n.prompts_a = n.prompts_b = true;
            } else {
                bool pick_a = n.meta.child_b == kNoItem ||
                              (n.meta.child_a != kNoItem && (rng_() & 1u) == 0);
                n.prompts_a = pick_a;
                n.prompts_b = !pick_a;
            }
        }
        if (o.p && o.np)
            events.push_back({now + 1, n.meta.id, PartEvent::Full, o.forced});
        else if (o.p)
            events.push_back({now + 1, n.meta.id, PartEvent::PPart, o.forced});
        else if (o.np)
            events.push_back({now + 1, n.meta.id, PartEvent::NonP, o.forced});
    }

    ++t_;
    last_quiescent_ = events.empty() && !any_change;
    return events;
}

}  // namespace pjoin
