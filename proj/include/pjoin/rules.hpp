#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "pjoin/tags.hpp"
#include "pjoin/weight.hpp"

namespace pjoin {

// The delta/lambda update functions of the model, represented as closed rule
// tables keyed by memory tags so the uniformity requirement is checkable by
// reading the tables. First matching row wins; no row means "unchanged".
//
// Matching fields use small masks: Tri for booleans (match 0, 1, or any),
// bitmasks over tags and W classes.

enum class Tri : std::uint8_t { No, Yes, Any };

constexpr std::uint32_t bit(NeuroidTag t) { return 1u << static_cast<unsigned>(t); }
constexpr std::uint32_t bit(SynTag t) { return 1u << static_cast<unsigned>(t); }
constexpr std::uint32_t bit(WClass c) { return 1u << static_cast<unsigned>(c); }

constexpr std::uint32_t kAnyW =
    bit(WClass::Zero) | bit(WClass::Low) | bit(WClass::Fire) | bit(WClass::Double);
constexpr std::uint32_t kPosW = bit(WClass::Low) | bit(WClass::Fire) | bit(WClass::Double);
constexpr std::uint32_t kSubDoubleW = bit(WClass::Zero) | bit(WClass::Low) | bit(WClass::Fire);

inline bool tri_match(Tri t, bool v) { return t == Tri::Any || (t == Tri::Yes) == v; }

// ---------------------------------------------------------------------------
// delta: (q, fired-next, W) -> q'
// ---------------------------------------------------------------------------

enum class DeltaAction : std::uint8_t {
    Keep,
    SetTag,      // q' = arg
    SplitByBit,  // q' = arg if the neuroid's intrinsic bit is set, arg2 otherwise
};

struct DeltaRule {
    std::uint32_t q_mask;
    Tri fired;
    std::uint32_t w_mask;
    DeltaAction action;
    NeuroidTag arg;
    NeuroidTag arg2 = NeuroidTag::Null;
};

// Recruitment transitions of JOIN/LINK/PJOIN creation (paper's Candidate ->
// Poised -> Operational ladder, with the PJOIN pool splitting on the
// neuroid's intrinsic random bit), plus dismissal of candidates that saw
// input and missed the quorum.
inline constexpr std::array<DeltaRule, 8> kDeltaTable{{
    {bit(NeuroidTag::CandidateJ), Tri::Yes, kAnyW, DeltaAction::SetTag, NeuroidTag::PoisedJ},
    {bit(NeuroidTag::CandidateP), Tri::Yes, kAnyW, DeltaAction::SplitByBit, NeuroidTag::PoisedPp,
     NeuroidTag::PoisedPn},
    {bit(NeuroidTag::CandidateJ) | bit(NeuroidTag::CandidateP), Tri::No, kPosW,
     DeltaAction::SetTag, NeuroidTag::Dismissed},
    {bit(NeuroidTag::PoisedJ), Tri::Yes, kAnyW, DeltaAction::SetTag, NeuroidTag::Operational},
    {bit(NeuroidTag::PoisedPn), Tri::Yes, kAnyW, DeltaAction::SetTag, NeuroidTag::PjOperational},
    {bit(NeuroidTag::PoisedPp), Tri::Yes, kAnyW, DeltaAction::SetTag, NeuroidTag::POperational},
    {bit(NeuroidTag::PoisedJ) | bit(NeuroidTag::PoisedPn) | bit(NeuroidTag::PoisedPp), Tri::No,
     kPosW, DeltaAction::SetTag, NeuroidTag::Dismissed},
    // everything else keeps its tag; operational dynamics live in lambda
    {~0u, Tri::Any, kAnyW, DeltaAction::Keep, NeuroidTag::Null},
}};

// Tags whose firing is part of a creation protocol and must not trigger
// refraction (the two/four synchronized steps of the constructions).
inline constexpr std::uint32_t kRefractionExemptTags =
    bit(NeuroidTag::CandidateJ) | bit(NeuroidTag::CandidateP) | bit(NeuroidTag::PoisedJ) |
    bit(NeuroidTag::PoisedPn) | bit(NeuroidTag::PoisedPp) | bit(NeuroidTag::PreparedParent) |
    bit(NeuroidTag::PreparedLink);

inline NeuroidTag apply_delta(NeuroidTag q, bool fired, WClass w, bool p_bit) {
    const std::uint32_t qb = bit(q);
    for (const auto& r : kDeltaTable) {
        if ((r.q_mask & qb) && tri_match(r.fired, fired) && (r.w_mask & bit(w))) {
            switch (r.action) {
                case DeltaAction::Keep: return q;
                case DeltaAction::SetTag: return r.arg;
                case DeltaAction::SplitByBit: return p_bit ? r.arg : r.arg2;
            }
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// lambda: (q of target, qq, source fired, target fired-next, W) -> (w, qq)
// ---------------------------------------------------------------------------

enum class LambdaAction : std::uint8_t {
    Keep,
    Kill,            // w = 0, qq = Dead (candidate dismissal)
    RescaleA,        // w = T^2/(2kW), qq = FromA   (JOIN step 1)
    RescaleB,        // w = T^2/(2kW), qq = FromB   (JOIN step 2)
    RescaleB2,       // predictive-part variant: twice RescaleB
    DoubleKeep,      // w *= 2, tag unchanged       (predictive-part A side at recruitment)
    DoubleMark,      // w *= 2, FromX -> FromX2     (missing side while predicting)
    HalveUnmark,     // w /= 2, FromX2 -> FromX     (confirmation reset)
    SpendParent,     // w = 0, Parent -> ParentSpent
    RestoreParent,   // w = 2T/k, ParentSpent -> Parent
    PotentiateParent,// w = 2T/k, Null -> Parent    (downward LINK, double strength)
    PotentiateLink,  // w = T/k, Null -> LOperational
};

struct LambdaRule {
    std::uint32_t q_mask;   // target memory (old)
    std::uint32_t qq_mask;  // synapse memory
    Tri f_src;
    Tri f_tgt;
    std::uint32_t w_mask;
    LambdaAction action;
};

inline constexpr std::uint32_t kCandidates =
    bit(NeuroidTag::CandidateJ) | bit(NeuroidTag::CandidateP);
inline constexpr std::uint32_t kPoised =
    bit(NeuroidTag::PoisedJ) | bit(NeuroidTag::PoisedPn) | bit(NeuroidTag::PoisedPp);
inline constexpr std::uint32_t kFromBase = bit(SynTag::FromA) | bit(SynTag::FromB);
inline constexpr std::uint32_t kFromDoubled = bit(SynTag::FromA2) | bit(SynTag::FromB2);

inline constexpr std::array<LambdaRule, 15> kLambdaTable{{
    // --- creation ---
    // step 1: candidates that fire rescale the synapses from the firing item
    {kCandidates, bit(SynTag::Null), Tri::Yes, Tri::Yes, kAnyW, LambdaAction::RescaleA},
    // candidates that saw input and did not fire are dismissed outright
    {kCandidates, ~0u, Tri::Any, Tri::No, kPosW, LambdaAction::Kill},
    // step 2: poised firers rescale the B side (doubled for the predictive part)
    {bit(NeuroidTag::PoisedPp), bit(SynTag::Null), Tri::Yes, Tri::Yes, kAnyW,
     LambdaAction::RescaleB2},
    {bit(NeuroidTag::PoisedJ) | bit(NeuroidTag::PoisedPn), bit(SynTag::Null), Tri::Yes, Tri::Yes,
     kAnyW, LambdaAction::RescaleB},
    // the predictive part's A side doubles as it becomes P-Operational
    {bit(NeuroidTag::PoisedPp), bit(SynTag::FromA), Tri::No, Tri::Yes, kAnyW,
     LambdaAction::DoubleKeep},
    {kPoised, ~0u, Tri::Any, Tri::No, kPosW, LambdaAction::Kill},
    // LINK potentiation, gated by the Prepared prompt
    {bit(NeuroidTag::PreparedParent), bit(SynTag::Null), Tri::Yes, Tri::Any, kAnyW,
     LambdaAction::PotentiateParent},
    {bit(NeuroidTag::PreparedLink), bit(SynTag::Null), Tri::Yes, Tri::Any, kAnyW,
     LambdaAction::PotentiateLink},

    // --- operation: PJOIN members outside the predictive part ---
    // one side fired alone and I did not fire: double the silent side
    {bit(NeuroidTag::PjOperational), kFromBase, Tri::No, Tri::No, bit(WClass::Low),
     LambdaAction::DoubleMark},
    // the predicted side fired and I fired: prediction confirmed, reset
    {bit(NeuroidTag::PjOperational), kFromDoubled, Tri::Yes, Tri::Yes,
     bit(WClass::Fire) | bit(WClass::Double), LambdaAction::HalveUnmark},

    // --- operation: predictive part ---
    // a prompting parent's group is spent once it has made me fire
    {bit(NeuroidTag::POperational), bit(SynTag::Parent), Tri::Yes, Tri::Yes, kAnyW,
     LambdaAction::SpendParent},
    // predictive (single-side or forced) firing: passive to all parents
    {bit(NeuroidTag::POperational), bit(SynTag::Parent), Tri::No, Tri::Yes, kSubDoubleW,
     LambdaAction::SpendParent},
    // full confirmation restores spent parent groups
    {bit(NeuroidTag::POperational), bit(SynTag::ParentSpent), Tri::No, Tri::Yes,
     bit(WClass::Double), LambdaAction::RestoreParent},
    // missing side doubles when the other side alone made me fire
    {bit(NeuroidTag::POperational), kFromBase, Tri::No, Tri::Yes, bit(WClass::Fire),
     LambdaAction::DoubleMark},
    // confirmation through the doubled side: reset it
    {bit(NeuroidTag::POperational), kFromDoubled, Tri::Yes, Tri::Yes, bit(WClass::Double),
     LambdaAction::HalveUnmark},
}};

struct SynapseUpdate {
    Ratio w;
    SynTag qq;
    bool changed;
};

// k is the quorum parameter of the uniform rules (strengths T/k, T^2/(2kW)).
inline SynapseUpdate apply_lambda(NeuroidTag q, SynTag qq, bool f_src, bool f_tgt, WClass wc,
                                  const Ratio& w, const Ratio& W, int k) {
    const std::uint32_t qb = bit(q);
    const std::uint32_t qqb = bit(qq);
    for (const auto& r : kLambdaTable) {
        if (!(r.q_mask & qb) || !(r.qq_mask & qqb)) continue;
        if (!tri_match(r.f_src, f_src) || !tri_match(r.f_tgt, f_tgt)) continue;
        if (!(r.w_mask & bit(wc))) continue;
        switch (r.action) {
            case LambdaAction::Keep: return {w, qq, false};
            case LambdaAction::Kill: return {ratio_zero, SynTag::Dead, true};
            case LambdaAction::RescaleA:
                return {Ratio::of(W.den, 2 * k * W.num), SynTag::FromA, true};
            case LambdaAction::RescaleB:
                return {Ratio::of(W.den, 2 * k * W.num), SynTag::FromB, true};
            case LambdaAction::RescaleB2:
                return {Ratio::of(W.den, k * W.num), SynTag::FromB, true};
            case LambdaAction::DoubleKeep: return {w.doubled(), qq, true};
            case LambdaAction::DoubleMark:
                return {w.doubled(), qq == SynTag::FromA ? SynTag::FromA2 : SynTag::FromB2, true};
            case LambdaAction::HalveUnmark:
                return {w.halved(), qq == SynTag::FromA2 ? SynTag::FromA : SynTag::FromB, true};
            case LambdaAction::SpendParent: return {ratio_zero, SynTag::ParentSpent, true};
            case LambdaAction::RestoreParent:
                return {Ratio::of(2, k), SynTag::Parent, true};
            case LambdaAction::PotentiateParent:
                return {Ratio::of(2, k), SynTag::Parent, true};
            case LambdaAction::PotentiateLink: return {Ratio::of(1, k), SynTag::LOperational, true};
        }
    }
    return {w, qq, false};
}

inline WClass classify(const Ratio& W, const Ratio& T) {
    if (W.is_zero()) return WClass::Zero;
    if (W < T) return WClass::Low;
    Ratio twoT = T.doubled();
    if (W < twoT) return WClass::Fire;
    return WClass::Double;
}

}  // namespace pjoin
