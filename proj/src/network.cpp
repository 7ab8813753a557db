#include "pjoin/network.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace pjoin {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0xD1B54A32D192ED03ull * (index + 1));
    return splitmix64(s);
}

Network::Network(std::size_t n, std::uint64_t seed, int k) : seed_(seed), k_(k) {
    nodes_.reserve(n);
    for (std::size_t i = 0; i < n; ++i) add_neuroid(NeuroidTag::Null);
}

NeuroidId Network::add_neuroid(NeuroidTag tag) {
    NeuroidId id = static_cast<NeuroidId>(nodes_.size());
    Neuroid nd;
    nd.tag = tag;
    std::uint64_t h = seed_ ^ (0x9E3779B97F4A7C15ull * (id + 1));
    nd.p_bit = (splitmix64(h) & 1u) != 0;
    nodes_.push_back(nd);
    in_edges_.emplace_back();
    out_refs_.emplace_back();
    w_accum_.emplace_back();
    if (audit_enabled_) audit_reads_.emplace_back();
    return id;
}

void Network::add_edge(NeuroidId src, NeuroidId dst, Ratio w, SynTag qq) {
    assert(src < nodes_.size() && dst < nodes_.size());
    in_edges_[dst].push_back({src, w, qq});
    out_refs_[src].push_back({dst, static_cast<std::uint32_t>(in_edges_[dst].size() - 1)});
}

void Network::set_refraction_policy(int steps, RefractionMode mode) {
    if (steps < 0) throw std::invalid_argument("refraction steps must be >= 0");
    refraction_R_ = steps;
    refraction_mode_ = mode;
}

void Network::set_once_latch(NeuroidId i, bool latch) {
    nodes_[i].once_latch = latch;
    nodes_[i].once_used = false;
}

void Network::clear_refraction(NeuroidId i) {
    nodes_[i].refractory = 0;
    if (refraction_mode_ == RefractionMode::Threshold) nodes_[i].threshold = ratio_one;
}

void Network::enable_audit(bool on) {
    audit_enabled_ = on;
    audit_reads_.assign(nodes_.size(), {});
}

bool Network::refraction_blocks(const Neuroid& n) const {
    if (refraction_mode_ == RefractionMode::Counter) return n.refractory > 0;
    return n.threshold != ratio_one;  // elevated threshold encodes refraction
}

FiringReport Network::step(const std::vector<NeuroidId>& forced,
                           const std::vector<Prompt>& prompts) {
    for (NeuroidId id : forced)
        if (id >= nodes_.size()) throw std::invalid_argument("forced firing of unknown neuroid");

    std::size_t changes = 0;
    for (const Prompt& p : prompts) {
        if (p.id >= nodes_.size()) throw std::invalid_argument("prompt for unknown neuroid");
        if (nodes_[p.id].tag != p.tag) {
            nodes_[p.id].tag = p.tag;
            ++changes;
        }
    }

    // Phase 1: accumulate W over synapses from neuroids firing at time t.
    std::vector<NeuroidId> touched;
    auto touch = [&](NeuroidId i) {
        if (w_accum_[i].den == 0) return;  // unreachable guard
        // mark via a sentinel list; duplicates filtered below
        touched.push_back(i);
    };
    for (NeuroidId j : firing_now_) {
        for (auto [tgt, idx] : out_refs_[j]) {
            w_accum_[tgt] += in_edges_[tgt][idx].w;
            touch(tgt);
        }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());

    // Forced neuroids take part in phase 2 even with no input.
    std::vector<NeuroidId> phase2 = touched;
    phase2.insert(phase2.end(), firing_now_.begin(), firing_now_.end());
    phase2.insert(phase2.end(), forced.begin(), forced.end());
    std::sort(phase2.begin(), phase2.end());
    phase2.erase(std::unique(phase2.begin(), phase2.end()), phase2.end());

    std::unordered_set<NeuroidId> forced_set(forced.begin(), forced.end());

    // New firing flags. A neuroid in refraction never fires; sensors fired by
    // a downward (Parent-synapse) prompt are exempt and do not refract.
    std::vector<NeuroidId> fired_next;
    std::vector<double> fired_w;
    std::vector<char> fires(phase2.size(), 0);
    for (std::size_t pi = 0; pi < phase2.size(); ++pi) {
        NeuroidId i = phase2[pi];
        Neuroid& nd = nodes_[i];
        const Ratio& W = w_accum_[i];
        bool want = (W >= nd.threshold) || forced_set.count(i);
        if (!want) continue;
        bool sensor = nd.tag == NeuroidTag::SensorZero || nd.tag == NeuroidTag::SensorOne;
        bool predicted_sensor = false;
        if (sensor && !W.is_zero()) {
            for (const InEdge& e : in_edges_[i]) {
                if (e.qq == SynTag::Parent && nodes_[e.src].firing && e.w.positive()) {
                    predicted_sensor = true;
                    break;
                }
            }
        }
        if (refraction_blocks(nd) && !predicted_sensor) continue;
        if (nd.once_latch && nd.once_used) continue;
        fires[pi] = predicted_sensor ? 2 : 1;
        fired_next.push_back(i);
        fired_w.push_back(W.value());
        if (nd.once_latch) nd.once_used = true;
    }

    // Phase 2: lambda over incoming synapses (reading the old q of the
    // target and the old firing flags of the sources), then delta, then the
    // refraction bookkeeping.
    for (std::size_t pi = 0; pi < phase2.size(); ++pi) {
        NeuroidId i = phase2[pi];
        Neuroid& nd = nodes_[i];
        const NeuroidTag q_old = nd.tag;
        const bool f_tgt = fires[pi] != 0;
        const WClass wc = classify(w_accum_[i], nd.threshold);
        for (InEdge& e : in_edges_[i]) {
            if (audit_enabled_) audit_reads_[i].push_back(e.src);
            bool f_src = nodes_[e.src].firing;
            SynapseUpdate up =
                apply_lambda(q_old, e.qq, f_src, f_tgt, wc, e.w, w_accum_[i], k_);
            if (up.changed) {
                e.w = up.w;
                e.qq = up.qq;
                ++changes;
            }
        }
        NeuroidTag q_new = apply_delta(q_old, f_tgt, wc, nd.p_bit);
        if (q_new != q_old) {
            nd.tag = q_new;
            ++changes;
        }
        if (f_tgt && fires[pi] != 2 && refraction_R_ > 0 &&
            !(kRefractionExemptTags & bit(q_old))) {
            if (refraction_mode_ == RefractionMode::Counter) {
                nd.refractory = refraction_R_;
            } else {
                // factor 2^R, halved every quiet step; blocks R checks for
                // any input short of 2T
                Ratio t = nd.threshold;
                for (int r = 0; r < refraction_R_; ++r) t = t.doubled();
                nd.threshold = t;
            }
            refractory_list_.push_back(i);
            ++changes;
        }
    }

    // countdown / threshold decay for neuroids that did not fire this step
    {
        std::unordered_set<NeuroidId> fired_set(fired_next.begin(), fired_next.end());
        std::vector<NeuroidId> keep;
        std::sort(refractory_list_.begin(), refractory_list_.end());
        refractory_list_.erase(std::unique(refractory_list_.begin(), refractory_list_.end()),
                               refractory_list_.end());
        for (NeuroidId i : refractory_list_) {
            if (fired_set.count(i)) {
                keep.push_back(i);
                continue;
            }
            Neuroid& nd = nodes_[i];
            bool still = false;
            if (refraction_mode_ == RefractionMode::Counter) {
                if (nd.refractory > 0) {
                    --nd.refractory;
                    ++changes;
                    still = nd.refractory > 0;
                }
            } else {
                if (nd.threshold != ratio_one) {
                    nd.threshold = nd.threshold.halved();
                    ++changes;
                    still = nd.threshold != ratio_one;
                }
            }
            if (still) keep.push_back(i);
        }
        refractory_list_ = std::move(keep);
    }

    // commit firing flags and reset accumulators
    for (NeuroidId j : firing_now_) nodes_[j].firing = false;
    for (NeuroidId i : fired_next) nodes_[i].firing = true;
    for (NeuroidId i : touched) w_accum_[i] = ratio_zero;
    firing_now_ = fired_next;
    ++t_;
    last_quiescent_ = fired_next.empty() && changes == 0;

    FiringReport rep;
    rep.t = t_;
    rep.fired = std::move(fired_next);
    rep.fired_w = std::move(fired_w);
    rep.state_changes = changes;
    if (log_enabled_) log_.push_back({t_, rep.fired, forced, changes});
    return rep;
}

void Network::write_run_log(std::ostream& os) const {
    os << "pjoin-runlog 1\n";
    for (const auto& rec : log_) {
        os << rec.t << " f";
        for (auto id : rec.fired) os << ' ' << id;
        os << " | c";
        for (auto id : rec.forced) os << ' ' << id;
        os << " | " << rec.state_changes << "\n";
    }
}

void Network::save_snapshot(std::ostream& os) const {
    os << "pjoin-snapshot 1\n";
    os << nodes_.size() << ' ' << t_ << ' ' << seed_ << ' ' << k_ << ' ' << refraction_R_ << ' '
       << (refraction_mode_ == RefractionMode::Counter ? "counter" : "threshold") << "\n";
    for (const Neuroid& nd : nodes_) {
        os << static_cast<int>(nd.tag) << ' ' << nd.threshold.num << ' ' << nd.threshold.den << ' '
           << (nd.firing ? 1 : 0) << ' ' << nd.refractory << ' ' << (nd.p_bit ? 1 : 0) << ' '
           << (nd.once_latch ? 1 : 0) << ' ' << (nd.once_used ? 1 : 0) << "\n";
    }
    std::size_t edges = 0;
    for (const auto& v : in_edges_) edges += v.size();
    os << edges << "\n";
    for (NeuroidId dst = 0; dst < in_edges_.size(); ++dst) {
        for (const InEdge& e : in_edges_[dst]) {
            os << e.src << ' ' << dst << ' ' << e.w.num << ' ' << e.w.den << ' '
               << static_cast<int>(e.qq) << "\n";
        }
    }
}

Network Network::load_snapshot(std::istream& is) {
    std::string magic;
    int version = 0;
    is >> magic >> version;
    if (magic != "pjoin-snapshot" || version != 1)
        throw std::runtime_error("unrecognized snapshot header");
    std::size_t n;
    std::int64_t t;
    std::uint64_t seed;
    int k, R;
    std::string mode;
    is >> n >> t >> seed >> k >> R >> mode;
    Network net(0, seed, k);
    net.t_ = t;
    net.set_refraction_policy(R, mode == "counter" ? RefractionMode::Counter
                                                   : RefractionMode::Threshold);
    for (std::size_t i = 0; i < n; ++i) {
        int tag, firing, refr, pbit, latch, used;
        std::int64_t tn, td;
        is >> tag >> tn >> td >> firing >> refr >> pbit >> latch >> used;
        NeuroidId id = net.add_neuroid(static_cast<NeuroidTag>(tag));
        Neuroid& nd = net.nodes_[id];
        nd.threshold = Ratio::of(tn, td);
        nd.firing = firing != 0;
        nd.refractory = refr;
        nd.p_bit = pbit != 0;
        nd.once_latch = latch != 0;
        nd.once_used = used != 0;
        if (nd.firing) net.firing_now_.push_back(id);
        if (refr > 0 || nd.threshold != ratio_one) net.refractory_list_.push_back(id);
    }
    std::size_t edges;
    is >> edges;
    for (std::size_t e = 0; e < edges; ++e) {
        NeuroidId src, dst;
        std::int64_t wn, wd;
        int qq;
        is >> src >> dst >> wn >> wd >> qq;
        net.add_edge(src, dst, Ratio::of(wn, wd), static_cast<SynTag>(qq));
    }
    return net;
}

}  // namespace pjoin
