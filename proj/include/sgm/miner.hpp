#pragma once

#include <chrono>
#include <cstdint>
#include <istream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sgm/canonical.hpp"
#include "sgm/sampler.hpp"
#include "sgm/topk_queue.hpp"

namespace sgm {

struct MineConfig {
    std::uint32_t p = 4;
    std::size_t k = 50;
    std::uint64_t max_iter = 100000;
    ScoreKind score = ScoreKind::SupportIntersection;
    MhMode mode = MhMode::LoopUntilAccept;
    std::size_t queue_capacity = 100000;
    std::uint64_t seed = 1;
    std::uint64_t checkpoint_every = 0; // 0 -> max(1, max_iter / 100)
    std::uint32_t num_chains = 1;
    double jaccard_eps = 0.05;
    std::uint32_t retry_cap = 1000;
    std::vector<std::uint64_t> chain_seeds; // optional explicit per-chain seeds

    void validate() const {
        if (p < 2) throw Error("config: p must be at least 2");
        if (k == 0) throw Error("config: k must be positive");
        if (k > queue_capacity) throw Error("config: k exceeds the queue capacity");
        if (num_chains == 0) throw Error("config: at least one chain");
        if (!chain_seeds.empty() && chain_seeds.size() != num_chains)
            throw Error("config: chain_seeds must match num_chains");
    }

    std::uint64_t effective_checkpoint() const {
        if (checkpoint_every) return checkpoint_every;
        return std::max<std::uint64_t>(1, max_iter / 100);
    }
};

struct Timings {
    double sampling_sec = 0.0;
    double canonical_sec = 0.0;
    double queue_sec = 0.0;
    double total_sec = 0.0;
};

struct TracePoint {
    std::uint64_t iteration;
    double mean_jaccard;
};

struct MineResult {
    MineConfig config;
    std::vector<PatternEntry> top_k;
    std::uint64_t iterations_run = 0;
    Timings timings;
    std::vector<TracePoint> trace;                        // multi-chain convergence
    std::vector<std::vector<std::string>> chain_top_codes; // final top-k per chain
    std::vector<GraphId> skipped_graphs;                  // hosts with fewer than p vertices
    std::vector<std::uint64_t> selection_counts;          // per eligible graph index
    std::uint64_t gate_skips = 0;
    std::uint64_t canonical_calls = 0;
    MhStats mh;
};

// 1 - |A n B| / |A u B|; two empty sets count as identical.
inline double jaccard_distance(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    const std::size_t uni = a.size() + b.size() - inter;
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

namespace detail {

class Miner {
public:
    Miner(const GraphDatabase& db, const EdgeSupportIndex& index, const MineConfig& cfg,
          std::uint64_t seed)
        : db_(db), index_(index), cfg_(cfg), rng_(seed), queue_(cfg.queue_capacity) {
        for (const LabeledGraph& g : db.graphs) {
            if (g.vertex_count() >= cfg_.p)
                eligible_.push_back(g.id);
            else
                skipped_.push_back(g.id);
        }
        if (eligible_.empty())
            throw Error("no eligible graphs: every graph has fewer than " +
                        std::to_string(cfg_.p) + " vertices");
        if (cfg_.p > 16)
            throw Error("pattern size " + std::to_string(cfg_.p) +
                        " exceeds the canonical-code vertex limit of 16");
        selection_counts_.assign(eligible_.size(), 0);
    }

    // Per iteration: uniform graph choice, one sampler step on that graph's
    // saved chain, gate check, canonical code, queue record. A failed gate
    // skips code generation for that sample entirely.
    void run(std::uint64_t iterations) {
        using clock = std::chrono::steady_clock;
        const auto run_start = clock::now();
        auto secs = [](clock::time_point a, clock::time_point b) {
            return std::chrono::duration<double>(b - a).count();
        };

        for (std::uint64_t it = 0; it < iterations; ++it) {
            ++iterations_run_;

            const auto t0 = clock::now();
            const std::size_t pick = rng_.index(eligible_.size());
            ++selection_counts_[pick];
            const GraphId gid = eligible_[pick];
            const LabeledGraph& g = db_.graphs[gid];

            auto chain = chains_.find(gid);
            if (chain == chains_.end()) {
                // first visit: the grown seed state is this iteration's sample
                SubgraphState st =
                    random_initial_state(g, gid, cfg_.p, cfg_.score, index_, rng_);
                chain = chains_.emplace(gid, std::move(st)).first;
            } else {
                chain->second = mh_step(g, chain->second, cfg_.score, index_, cfg_.mode, rng_,
                                        &mh_, cfg_.retry_cap);
            }
            const SubgraphState& state = chain->second;
            const auto t1 = clock::now();
            timings_.sampling_sec += secs(t0, t1);

            if (queue_.full() && !queue_.passes_gate(state.score)) {
                ++gate_skips_;
                timings_.queue_sec += secs(t1, clock::now());
                continue;
            }

            const auto t2 = clock::now();
            ++canonical_calls_;
            const CanonicalCode code = min_dfs_code(induced_subgraph(g, state.vertices));
            const std::string key = code_to_string(code, db_.vertex_labels, db_.edge_labels);
            const auto t3 = clock::now();
            timings_.canonical_sec += secs(t2, t3);

            queue_.record(key, gid, state.score, iterations_run_);
            timings_.queue_sec += secs(t3, clock::now());
        }
        timings_.total_sec += secs(run_start, clock::now());
    }

    const PatternQueue& queue() const { return queue_; }
    std::uint64_t iterations_run() const { return iterations_run_; }

    MineResult result(std::size_t k) const {
        MineResult r;
        r.config = cfg_;
        r.top_k = queue_.top(k);
        r.iterations_run = iterations_run_;
        r.timings = timings_;
        r.skipped_graphs = skipped_;
        r.selection_counts = selection_counts_;
        r.gate_skips = gate_skips_;
        r.canonical_calls = canonical_calls_;
        r.mh = mh_;
        return r;
    }

private:
    const GraphDatabase& db_;
    const EdgeSupportIndex& index_;
    MineConfig cfg_;
    Rng rng_;
    PatternQueue queue_;
    std::unordered_map<GraphId, SubgraphState> chains_; // saved state per graph
    std::vector<GraphId> eligible_;
    std::vector<GraphId> skipped_;
    std::vector<std::uint64_t> selection_counts_;
    std::uint64_t iterations_run_ = 0;
    std::uint64_t gate_skips_ = 0;
    std::uint64_t canonical_calls_ = 0;
    Timings timings_;
    MhStats mh_;
};

} // namespace detail

inline MineResult mine(const GraphDatabase& db, const EdgeSupportIndex& index,
                       const MineConfig& cfg) {
    cfg.validate();
    detail::Miner miner(db, index, cfg, cfg.seed);
    miner.run(cfg.max_iter);
    return miner.result(cfg.k);
}

inline MineResult mine_uniform_baseline(const GraphDatabase& db, const EdgeSupportIndex& index,
                                        MineConfig cfg) {
    cfg.score = ScoreKind::Uniform;
    return mine(db, index, cfg);
}

// Independent chains with derived seeds, advanced checkpoint by checkpoint.
// At each checkpoint the mean pairwise Jaccard distance over the chains'
// current top-k code sets is recorded; the run stops early once it falls
// below jaccard_eps. Chains merge by unioning support-lists per code.
inline MineResult run_chains(const GraphDatabase& db, const EdgeSupportIndex& index,
                             const MineConfig& cfg) {
    cfg.validate();
    if (cfg.num_chains <= 1) return mine(db, index, cfg);

    std::vector<std::unique_ptr<detail::Miner>> miners;
    for (std::uint32_t c = 0; c < cfg.num_chains; ++c) {
        const std::uint64_t seed =
            cfg.chain_seeds.empty() ? mix_seed(cfg.seed, c) : cfg.chain_seeds[c];
        miners.push_back(std::make_unique<detail::Miner>(db, index, cfg, seed));
    }

    MineResult out;
    out.config = cfg;

    const std::uint64_t every = cfg.effective_checkpoint();
    std::uint64_t done = 0;
    while (done < cfg.max_iter) {
        const std::uint64_t step = std::min(every, cfg.max_iter - done);
        std::vector<std::thread> pool;
        pool.reserve(miners.size());
        for (auto& m : miners)
            pool.emplace_back([&m, step]() { m->run(step); });
        for (auto& t : pool) t.join();
        done += step;

        std::vector<std::set<std::string>> tops;
        tops.reserve(miners.size());
        for (auto& m : miners) {
            auto codes = m->queue().top_codes(cfg.k);
            tops.emplace_back(codes.begin(), codes.end());
        }
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < tops.size(); ++i)
            for (std::size_t j = i + 1; j < tops.size(); ++j) {
                sum += jaccard_distance(tops[i], tops[j]);
                ++pairs;
            }
        const double mean = pairs ? sum / static_cast<double>(pairs) : 0.0;
        out.trace.push_back({done, mean});
        if (mean < cfg.jaccard_eps) break;
    }

    // merge: union of support-lists per code, scores are identical across
    // chains by construction, newest update time wins the tie-break
    std::map<std::string, PatternEntry> merged;
    for (auto& m : miners) {
        for (const PatternEntry& e : m->queue().snapshot()) {
            auto it = merged.find(e.code);
            if (it == merged.end()) {
                merged.emplace(e.code, e);
            } else {
                PatternEntry& t = it->second;
                std::vector<GraphId> ids;
                std::set_union(t.idset.begin(), t.idset.end(), e.idset.begin(), e.idset.end(),
                               std::back_inserter(ids));
                t.idset = std::move(ids);
                t.last_update_iter = std::max(t.last_update_iter, e.last_update_iter);
            }
        }
        out.chain_top_codes.push_back(m->queue().top_codes(cfg.k));
    }

    std::vector<const PatternEntry*> ranked;
    ranked.reserve(merged.size());
    for (const auto& [code, e] : merged) ranked.push_back(&e);
    std::sort(ranked.begin(), ranked.end(), PatternOrder{});
    if (ranked.size() > cfg.queue_capacity) ranked.resize(cfg.queue_capacity);
    for (std::size_t i = 0; i < ranked.size() && i < cfg.k; ++i)
        out.top_k.push_back(*ranked[i]);

    for (auto& m : miners) {
        const MineResult r = m->result(cfg.k);
        out.iterations_run += r.iterations_run;
        out.timings.sampling_sec += r.timings.sampling_sec;
        out.timings.canonical_sec += r.timings.canonical_sec;
        out.timings.queue_sec += r.timings.queue_sec;
        out.timings.total_sec += r.timings.total_sec;
        out.gate_skips += r.gate_skips;
        out.canonical_calls += r.canonical_calls;
        out.mh.proposals += r.mh.proposals;
        out.mh.reinits += r.mh.reinits;
        out.mh.retry_cap_hits += r.mh.retry_cap_hits;
        out.skipped_graphs = r.skipped_graphs;
        if (out.selection_counts.empty())
            out.selection_counts.assign(r.selection_counts.size(), 0);
        for (std::size_t i = 0; i < r.selection_counts.size(); ++i)
            out.selection_counts[i] += r.selection_counts[i];
    }
    return out;
}

inline nlohmann::json config_to_json(const MineConfig& cfg) {
    return nlohmann::json{{"size", cfg.p},
                          {"topk", cfg.k},
                          {"iters", cfg.max_iter},
                          {"score", score_kind_name(cfg.score)},
                          {"mh_mode", cfg.mode == MhMode::LoopUntilAccept ? "paper" : "strict"},
                          {"queue_cap", cfg.queue_capacity},
                          {"seed", cfg.seed},
                          {"checkpoint_every", cfg.effective_checkpoint()},
                          {"chains", cfg.num_chains},
                          {"jaccard_eps", cfg.jaccard_eps}};
}

// Result file: one header object, then one JSON line per pattern. Timings are
// deliberately not part of the file so reruns with the same seed produce
// byte-identical output; they are reported on the in-memory result instead.
inline void write_result_file(const MineResult& r, std::ostream& out) {
    nlohmann::json trace = nlohmann::json::array();
    for (const TracePoint& t : r.trace)
        trace.push_back({{"iteration", t.iteration}, {"mean_jaccard", t.mean_jaccard}});
    nlohmann::json header{{"type", "header"},
                          {"config", config_to_json(r.config)},
                          {"seed", r.config.seed},
                          {"iterations", r.iterations_run},
                          {"trace", trace},
                          {"skipped_graphs", r.skipped_graphs}};
    out << header.dump() << '\n';
    std::size_t rank = 0;
    for (const PatternEntry& e : r.top_k) {
        ++rank;
        nlohmann::json j{{"rank", rank},
                         {"code", e.code},
                         {"support_a", e.idset.size()},
                         {"idset", e.idset},
                         {"score", e.score},
                         {"last_update_iter", e.last_update_iter}};
        out << j.dump() << '\n';
    }
}

struct ResultFile {
    nlohmann::json header;
    std::vector<PatternEntry> patterns; // file order == rank order
};

inline ResultFile read_result_file(std::istream& in) {
    ResultFile rf;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error("result file: bad JSON at line " + std::to_string(lineno));
        if (!have_header) {
            if (j.value("type", "") != "header")
                throw Error("result file: missing header line");
            rf.header = std::move(j);
            have_header = true;
            continue;
        }
        PatternEntry e;
        e.code = j.at("code").get<std::string>();
        e.idset = j.at("idset").get<std::vector<GraphId>>();
        e.score = j.at("score").get<double>();
        e.last_update_iter = j.at("last_update_iter").get<std::uint64_t>();
        rf.patterns.push_back(std::move(e));
    }
    if (!have_header) throw Error("result file: empty");
    return rf;
}

} // namespace sgm
