#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pjoin/network.hpp"

namespace pjoin {

using ItemId = std::int32_t;
constexpr ItemId kNoItem = -1;

enum class ItemKind : std::uint8_t { Sensor, BasisZero, BasisOne, Leaf, Pjoin };

constexpr std::string_view to_string(ItemKind k) {
    switch (k) {
        case ItemKind::Sensor: return "sensor";
        case ItemKind::BasisZero: return "basis0";
        case ItemKind::BasisOne: return "basis1";
        case ItemKind::Leaf: return "leaf";
        case ItemKind::Pjoin: return "pjoin";
    }
    return "?";
}

// An item is a named set of neuroids; the neuroid sets live only in the
// neuroid backend, the DAG structure is shared by both backends.
struct Item {
    ItemId id = kNoItem;
    ItemKind kind = ItemKind::Leaf;
    int level = 0;
    ItemId child_a = kNoItem;
    ItemId child_b = kNoItem;
    std::vector<ItemId> parents;
    int sensor_index = -1;  // for sensor/basis kinds
    std::vector<NeuroidId> neuroids;    // full set, predictive included
    std::vector<NeuroidId> predictive;  // C_P

    bool is_pjoin() const { return kind == ItemKind::Pjoin; }
    bool is_basis() const {
        return kind == ItemKind::BasisZero || kind == ItemKind::BasisOne ||
               kind == ItemKind::Leaf;
    }
};

// The Fig. 1 operational view of a PJOIN item.
enum class MachineState : std::uint8_t {
    Operational,
    PredictingA,
    PredictingB,
    PassivePredictingA,
    PassivePredictingB,
};

constexpr std::string_view to_string(MachineState s) {
    switch (s) {
        case MachineState::Operational: return "Operational";
        case MachineState::PredictingA: return "Predicting-A";
        case MachineState::PredictingB: return "Predicting-B";
        case MachineState::PassivePredictingA: return "Passive-Predicting-A";
        case MachineState::PassivePredictingB: return "Passive-Predicting-B";
    }
    return "?";
}

// Events an item can experience, the alphabet of the exhaustive crosscheck.
enum class ItemEventKind : std::uint8_t {
    FireA,
    FireB,
    FireBoth,
    ParentDown,
    FirePredicted,  // fire the currently predicted child, if any
};

constexpr std::array<ItemEventKind, 5> kEventAlphabet{
    ItemEventKind::FireA, ItemEventKind::FireB, ItemEventKind::FireBoth,
    ItemEventKind::ParentDown, ItemEventKind::FirePredicted};

// Item-level firing kinds observed in a trace. Full = every neuroid of the
// item; PPart = the predictive subset alone; NonP = the complement alone
// (possible when C_P is refractory while the predicted side confirms).
enum class PartEvent : std::uint8_t { Full, PPart, NonP };

struct TraceEvent {
    std::int64_t t;
    ItemId item;
    PartEvent part;
    bool forced = false;  // creation/control firing, not an operational response

    friend bool operator==(const TraceEvent& a, const TraceEvent& b) {
        return a.t == b.t && a.item == b.item && a.part == b.part;
    }
};

std::string to_string(const TraceEvent& e);

void export_item_dag(const std::vector<Item>& items, std::ostream& os);

}  // namespace pjoin
