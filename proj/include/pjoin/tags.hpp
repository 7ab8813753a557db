#pragma once

#include <cstdint>
#include <string_view>

namespace pjoin {

// Closed neuroid memory alphabet. CandidateJ/CandidateP (and the Poised
// variants) distinguish plain-JOIN recruitment from PJOIN recruitment: a plain
// JOIN member must never learn to fire on one input alone, while a PJOIN
// member doubles its missing side.
enum class NeuroidTag : std::uint8_t {
    Null,
    CandidateJ,   // candidate for a plain JOIN
    CandidateP,   // candidate for a PJOIN
    PoisedJ,
    PoisedPn,     // poised, PJOIN pool, not selected for the predictive part
    PoisedPp,     // poised, PJOIN pool, selected for the predictive part
    Dismissed,
    Operational,    // plain JOIN / plain item member
    PjOperational,  // PJOIN member outside C_P
    POperational,   // PJOIN predictive-part member
    PreparedParent, // LINK target being wired from above (Parent synapses)
    PreparedLink,   // LINK target of a plain LINK
    Relay,
    SensorZero,
    SensorOne,
};

enum class SynTag : std::uint8_t {
    Null,
    FromA,
    FromB,
    FromA2,       // doubled while the A side is predicted
    FromB2,
    LOperational, // potentiated relay synapse of a plain LINK
    Parent,       // potentiated downward synapse (relay or reciprocal), double strength
    ParentSpent,  // Parent synapse zeroed while passive
    SensorLink,   // sensor -> basis item drive, toggled by the sensor memory
    Dead,
};

// Input classes the rule tables key on. Boundaries are the exact multiples of
// T that the constructions produce (T/2 per side, T per doubled side, 2T for
// parent prompts), compared exactly.
enum class WClass : std::uint8_t {
    Zero,    // W == 0
    Low,     // 0 < W < T
    Fire,    // T <= W < 2T
    Double,  // W >= 2T
};

constexpr std::string_view to_string(NeuroidTag t) {
    switch (t) {
        case NeuroidTag::Null: return "Null";
        case NeuroidTag::CandidateJ: return "CandidateJ";
        case NeuroidTag::CandidateP: return "CandidateP";
        case NeuroidTag::PoisedJ: return "PoisedJ";
        case NeuroidTag::PoisedPn: return "PoisedPn";
        case NeuroidTag::PoisedPp: return "PoisedPp";
        case NeuroidTag::Dismissed: return "Dismissed";
        case NeuroidTag::Operational: return "Operational";
        case NeuroidTag::PjOperational: return "PjOperational";
        case NeuroidTag::POperational: return "POperational";
        case NeuroidTag::PreparedParent: return "PreparedParent";
        case NeuroidTag::PreparedLink: return "PreparedLink";
        case NeuroidTag::Relay: return "Relay";
        case NeuroidTag::SensorZero: return "SensorZero";
        case NeuroidTag::SensorOne: return "SensorOne";
    }
    return "?";
}

constexpr std::string_view to_string(SynTag t) {
    switch (t) {
        case SynTag::Null: return "Null";
        case SynTag::FromA: return "FromA";
        case SynTag::FromB: return "FromB";
        case SynTag::FromA2: return "FromA2";
        case SynTag::FromB2: return "FromB2";
        case SynTag::LOperational: return "LOperational";
        case SynTag::Parent: return "Parent";
        case SynTag::ParentSpent: return "ParentSpent";
        case SynTag::SensorLink: return "SensorLink";
        case SynTag::Dead: return "Dead";
    }
    return "?";
}

}  // namespace pjoin
