#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pjoin/rules.hpp"
#include "pjoin/tags.hpp"
#include "pjoin/weight.hpp"

namespace pjoin {

using NeuroidId = std::uint32_t;

struct Neuroid {
    Ratio threshold = ratio_one;
    bool firing = false;
    NeuroidTag tag = NeuroidTag::Null;
    int refractory = 0;   // steps of inhibition remaining (counter mode)
    bool p_bit = false;   // intrinsic random bit used by PJOIN recruitment
    bool once_latch = false;  // sensor: at most one firing until the latch is cleared
    bool once_used = false;
};

struct InEdge {
    NeuroidId src;
    Ratio w;
    SynTag qq = SynTag::Null;
};

enum class RefractionMode : std::uint8_t { Counter, Threshold };

struct FiringReport {
    std::int64_t t = 0;                 // time after the step
    std::vector<NeuroidId> fired;       // sorted
    std::vector<double> fired_w;        // summed input of each fired neuroid
    std::size_t state_changes = 0;      // delta/lambda/refraction writes
    bool quiescent() const { return fired.empty() && state_changes == 0; }
};

struct StepLogRecord {
    std::int64_t t;
    std::vector<NeuroidId> fired;
    std::vector<NeuroidId> forced;
    std::size_t state_changes;
};

// Creation-time memory prompt; with forced firings these are the only two
// control inputs (both recorded in the run log).
struct Prompt {
    NeuroidId id;
    NeuroidTag tag;
};

// Discrete-time two-phase engine. Phase 1 computes W_i from the weights and
// firing flags of step t and sets the new firing flags; phase 2 applies the
// rule tables, reading only each neuroid's own state, its incoming synapses
// and the (old) firing flags of their sources.
class Network {
public:
    explicit Network(std::size_t n = 0, std::uint64_t seed = 0, int k = 5);

    NeuroidId add_neuroid(NeuroidTag tag);
    void add_edge(NeuroidId src, NeuroidId dst, Ratio w, SynTag qq = SynTag::Null);

    std::size_t size() const { return nodes_.size(); }
    std::int64_t time() const { return t_; }
    int quorum_k() const { return k_; }
    std::uint64_t seed() const { return seed_; }

    const Neuroid& node(NeuroidId i) const { return nodes_[i]; }
    Neuroid& node(NeuroidId i) { return nodes_[i]; }
    const std::vector<InEdge>& in_edges(NeuroidId i) const { return in_edges_[i]; }
    std::vector<InEdge>& in_edges_mut(NeuroidId i) { return in_edges_[i]; }

    void set_refraction_policy(int steps, RefractionMode mode = RefractionMode::Counter);
    int refraction_steps() const { return refraction_R_; }
    RefractionMode refraction_mode() const { return refraction_mode_; }

    FiringReport step(const std::vector<NeuroidId>& forced = {},
                      const std::vector<Prompt>& prompts = {});

    bool quiescent() const { return last_quiescent_; }

    // control-plane writes outside the vicinal rules (presentation boundaries)
    void set_tag(NeuroidId i, NeuroidTag tag) { nodes_[i].tag = tag; }
    void set_once_latch(NeuroidId i, bool latch);
    void clear_refraction(NeuroidId i);

    void enable_run_log(bool on) { log_enabled_ = on; }
    const std::vector<StepLogRecord>& run_log() const { return log_; }
    void write_run_log(std::ostream& os) const;

    // locality audit: when enabled, phase 2 records every source id it reads
    void enable_audit(bool on);
    const std::vector<std::vector<NeuroidId>>& audit_reads() const { return audit_reads_; }

    void save_snapshot(std::ostream& os) const;
    static Network load_snapshot(std::istream& is);

private:
    std::vector<Neuroid> nodes_;
    std::vector<std::vector<InEdge>> in_edges_;
    std::vector<std::vector<std::pair<NeuroidId, std::uint32_t>>> out_refs_;
    std::vector<Ratio> w_accum_;
    std::vector<NeuroidId> firing_now_;  // ids with nodes_[i].firing
    std::vector<NeuroidId> refractory_list_;
    std::int64_t t_ = 0;
    std::uint64_t seed_ = 0;
    int k_ = 5;
    int refraction_R_ = 1;
    RefractionMode refraction_mode_ = RefractionMode::Counter;
    bool last_quiescent_ = false;
    bool log_enabled_ = false;
    std::vector<StepLogRecord> log_;
    bool audit_enabled_ = false;
    std::vector<std::vector<NeuroidId>> audit_reads_;

    bool refraction_blocks(const Neuroid& n) const;
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace pjoin
