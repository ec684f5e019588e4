#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "sgm/core.hpp"

namespace sgm {

struct PatternEntry {
    std::string code;
    std::vector<GraphId> idset; // sorted; the support-list
    double score = 0.0;
    std::uint64_t last_update_iter = 0;

    std::size_t support_a() const { return idset.size(); }

    bool operator==(const PatternEntry&) const = default;
};

// Composite order: expected support high to low, then score high to low,
// then update time recent to old, then code ascending so the order is a
// strict total order and eviction is reproducible.
struct PatternOrder {
    bool operator()(const PatternEntry* a, const PatternEntry* b) const {
        if (a->idset.size() != b->idset.size()) return a->idset.size() > b->idset.size();
        if (a->score != b->score) return a->score > b->score;
        if (a->last_update_iter != b->last_update_iter)
            return a->last_update_iter > b->last_update_iter;
        return a->code < b->code;
    }
};

enum class RecordOutcome { Unchanged, Updated, Inserted, InsertedWithEviction };

// Capacity-bounded pattern store. Entries are indexed uniquely by canonical
// code and non-uniquely by the composite order; the tail-half score sum is
// maintained incrementally because the insertion gate runs every iteration.
class PatternQueue {
public:
    explicit PatternQueue(std::size_t capacity) : capacity_(capacity) {
        if (capacity_ == 0) throw Error("PatternQueue: capacity must be positive");
        tail_begin_ = order_.end();
    }

    // not movable: the tail boundary iterator must stay tied to this set
    PatternQueue(const PatternQueue&) = delete;
    PatternQueue& operator=(const PatternQueue&) = delete;
    PatternQueue(PatternQueue&&) = delete;
    PatternQueue& operator=(PatternQueue&&) = delete;

    std::size_t size() const { return order_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool full() const { return size() >= capacity_; }
    bool empty() const { return order_.empty(); }
    bool contains(const std::string& code) const { return by_code_.count(code) != 0; }

    // Mean score of the tail half (the single entry is its own tail when
    // m == 1; for odd m the middle entry belongs to the head).
    double lower_half_avg_score() const {
        if (empty()) throw Error("lower_half_avg_score: empty queue");
        return tail_sum_ / static_cast<double>(tail_count_);
    }

    // Admission test for a sampled score: always true while the queue has
    // room, otherwise the score has to beat the tail-half average. A failed
    // gate means the caller skips canonical-code generation entirely.
    bool passes_gate(double score) const {
        if (!full()) return true;
        return score > lower_half_avg_score();
    }

    RecordOutcome record(const std::string& code, GraphId gid, double score,
                         std::uint64_t iter) {
        auto it = by_code_.find(code);
        if (it != by_code_.end()) {
            PatternEntry& e = it->second;
            auto pos = std::lower_bound(e.idset.begin(), e.idset.end(), gid);
            if (pos != e.idset.end() && *pos == gid) return RecordOutcome::Unchanged;
            order_erase(&e);
            e.idset.insert(pos, gid);
            e.last_update_iter = iter; // time moves only when the support grew
            order_insert(&e);
            return RecordOutcome::Updated;
        }

        bool evicted = false;
        if (full()) {
            evict_last();
            evicted = true;
        }
        auto [slot, inserted] = by_code_.emplace(code, PatternEntry{code, {gid}, score, iter});
        order_insert(&slot->second);
        return evicted ? RecordOutcome::InsertedWithEviction : RecordOutcome::Inserted;
    }

    // Removes and returns the composite-order-worst entry.
    PatternEntry evict_last() {
        if (empty()) throw Error("evict_last: empty queue");
        const PatternEntry* worst = *order_.rbegin();
        PatternEntry out = *worst;
        order_erase(worst);
        by_code_.erase(out.code);
        return out;
    }

    std::vector<PatternEntry> top(std::size_t k) const {
        std::vector<PatternEntry> out;
        out.reserve(std::min(k, size()));
        for (const PatternEntry* e : order_) {
            if (out.size() >= k) break;
            out.push_back(*e);
        }
        return out;
    }

    std::vector<std::string> top_codes(std::size_t k) const {
        std::vector<std::string> out;
        out.reserve(std::min(k, size()));
        for (const PatternEntry* e : order_) {
            if (out.size() >= k) break;
            out.push_back(e->code);
        }
        return out;
    }

    std::vector<PatternEntry> snapshot() const { return top(size()); }

    // One JSON object per entry, best first.
    void write_jsonl(std::ostream& out, std::size_t k) const {
        std::size_t rank = 0;
        for (const PatternEntry* e : order_) {
            if (rank >= k) break;
            ++rank;
            nlohmann::json j{{"rank", rank},
                             {"code", e->code},
                             {"support_a", e->idset.size()},
                             {"idset", e->idset},
                             {"score", e->score},
                             {"last_update_iter", e->last_update_iter}};
            out << j.dump() << '\n';
        }
    }

private:
    using OrderSet = std::set<const PatternEntry*, PatternOrder>;

    std::size_t desired_tail_count() const {
        const std::size_t m = order_.size();
        if (m == 0) return 0;
        return m == 1 ? 1 : m / 2;
    }

    void rebalance() {
        const std::size_t want = desired_tail_count();
        while (tail_count_ < want) {
            --tail_begin_;
            tail_sum_ += (*tail_begin_)->score;
            ++tail_count_;
        }
        while (tail_count_ > want) {
            tail_sum_ -= (*tail_begin_)->score;
            ++tail_begin_;
            --tail_count_;
        }
    }

    void order_insert(const PatternEntry* e) {
        if (order_.empty()) {
            order_.insert(e);
            tail_begin_ = order_.begin();
            tail_count_ = 1;
            tail_sum_ = e->score;
            return;
        }
        const bool tail_side = !PatternOrder{}(e, *tail_begin_); // ranks at/after the boundary
        order_.insert(e);
        if (tail_side) {
            ++tail_count_;
            tail_sum_ += e->score;
        }
        rebalance();
    }

    void order_erase(const PatternEntry* e) {
        auto it = order_.find(e);
        const bool tail_side = !PatternOrder{}(e, *tail_begin_);
        if (it == tail_begin_) ++tail_begin_;
        order_.erase(it);
        if (order_.empty()) {
            tail_begin_ = order_.end();
            tail_count_ = 0;
            tail_sum_ = 0.0;
            return;
        }
        if (tail_side) {
            --tail_count_;
            tail_sum_ -= e->score;
        }
        rebalance();
    }

    std::size_t capacity_;
    std::unordered_map<std::string, PatternEntry> by_code_;
    OrderSet order_;
    OrderSet::iterator tail_begin_;
    std::size_t tail_count_ = 0;
    double tail_sum_ = 0.0;
};

} // namespace sgm
