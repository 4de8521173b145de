#ifndef MGON_SPECTRUM_HPP
#define MGON_SPECTRUM_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "mgon/topology.hpp"

namespace mgon {

struct SpectrumError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Half-open slot range [start, start+len), 0-based slot indices.
struct SlotRange {
    int start = 0;
    int len = 0;
    int end() const { return start + len; }  // exclusive
    bool operator==(const SlotRange&) const = default;
};

struct FiberSlice {
    int fiber = 0;  // global fiber id
    SlotRange range;
};

// Waveband usage of one connection at one node: traffic entering on f_in and
// leaving on f_out through a band at that node.
struct BandUse {
    int node = 0;
    int f_in = 0;
    int f_out = 0;
    bool operator<(const BandUse& o) const {
        if (node != o.node) return node < o.node;
        if (f_in != o.f_in) return f_in < o.f_in;
        return f_out < o.f_out;
    }
};

struct Connection {
    std::vector<FiberSlice> slices;
    std::vector<BandUse> bands;
};

class SpectrumState {
public:
    SpectrumState() = default;
    SpectrumState(const Topology& topo, int capacity_override = 0) {
        init(topo, capacity_override);
    }

    void init(const Topology& topo, int capacity_override = 0) {
        topo_ = &topo;
        capacity_ = capacity_override > 0 ? capacity_override : topo.slots_per_fiber;
        words_ = (capacity_ + 63) / 64;
        fiber_base_.assign(topo.links.size() + 1, 0);
        for (size_t i = 0; i < topo.links.size(); ++i)
            fiber_base_[i + 1] = fiber_base_[i] + topo.links[i].fiber_count;
        fiber_link_.resize(fiber_base_.back());
        for (size_t i = 0; i < topo.links.size(); ++i)
            for (int k = fiber_base_[i]; k < fiber_base_[i + 1]; ++k)
                fiber_link_[k] = (int)i;
        bits_.assign((size_t)fiber_count() * words_, 0);
        band_tables_.assign(topo.node_count, {});
        connections_.clear();
    }

    const Topology& topology() const { return *topo_; }
    int capacity() const { return capacity_; }
    int fiber_count() const { return (int)fiber_link_.size(); }
    int fiber_base(int link) const { return fiber_base_[link]; }
    int link_fibers(int link) const { return fiber_base_[link + 1] - fiber_base_[link]; }
    int fiber_link(int fiber) const { return fiber_link_[fiber]; }
    int fiber_index_on_link(int fiber) const { return fiber - fiber_base_[fiber_link_[fiber]]; }

    bool is_free(int fiber, SlotRange r) const {
        check_range(r);
        const uint64_t* w = fiber_words(fiber);
        for (int s = r.start; s < r.end(); ++s)
            if (w[s >> 6] & (1ULL << (s & 63))) return false;
        return true;
    }

    bool slot_used(int fiber, int slot) const {
        return (fiber_words(fiber)[slot >> 6] >> (slot & 63)) & 1;
    }

    // c_e^x: fibers on the link with the whole range free
    int availability(int link, SlotRange r) const {
        int c = 0;
        for (int f = fiber_base_[link]; f < fiber_base_[link + 1]; ++f)
            if (is_free(f, r)) ++c;
        return c;
    }

    // Lowest-id fiber on the link with the range free, or -1.
    int first_free_fiber(int link, SlotRange r) const {
        for (int f = fiber_base_[link]; f < fiber_base_[link + 1]; ++f)
            if (is_free(f, r)) return f;
        return -1;
    }

    void allocate(int64_t id, const Connection& conn) {
        if (connections_.count(id)) throw SpectrumError("duplicate connection id");
        for (const auto& sl : conn.slices)
            if (!is_free(sl.fiber, sl.range)) throw SpectrumError("conflicting allocation");
        for (const auto& sl : conn.slices) set_bits(sl.fiber, sl.range, true);
        for (const auto& b : conn.bands) ++band_tables_[b.node][{b.f_in, b.f_out}];
        connections_.emplace(id, conn);
    }

    void release(int64_t id) {
        auto it = connections_.find(id);
        if (it == connections_.end()) throw SpectrumError("unknown connection id");
        for (const auto& sl : it->second.slices) set_bits(sl.fiber, sl.range, false);
        for (const auto& b : it->second.bands) {
            auto& tbl = band_tables_[b.node];
            auto bt = tbl.find({b.f_in, b.f_out});
            if (--bt->second == 0) tbl.erase(bt);
        }
        connections_.erase(it);
    }

    bool has_connection(int64_t id) const { return connections_.count(id) != 0; }
    const Connection& connection(int64_t id) const { return connections_.at(id); }
    size_t connection_count() const { return connections_.size(); }

    // ---- waveband tables ----
    bool band_established(int node, int f_in, int f_out) const {
        const auto& tbl = band_tables_[node];
        return tbl.count({f_in, f_out}) != 0;
    }
    int bands_from(int node, int f_in) const {
        int n = 0;
        for (const auto& [key, cnt] : band_tables_[node])
            if (key.first == f_in) ++n;
        return n;
    }
    // Direct insertion for constructing test fixtures / static plans.
    void force_band(int node, int f_in, int f_out) { ++band_tables_[node][{f_in, f_out}]; }

    // ---- metrics ----
    // m_f: highest used slot index + 1 (0 when empty)
    int fiber_msu(int fiber) const {
        const uint64_t* w = fiber_words(fiber);
        for (int i = words_ - 1; i >= 0; --i)
            if (w[i]) return i * 64 + 64 - countl_zero(w[i]);
        return 0;
    }
    int max_msu() const {
        int m = 0;
        for (int f = 0; f < fiber_count(); ++f) m = std::max(m, fiber_msu(f));
        return m;
    }
    double avg_msu() const {
        long long s = 0;
        for (int f = 0; f < fiber_count(); ++f) s += fiber_msu(f);
        return fiber_count() ? (double)s / fiber_count() : 0.0;
    }

    long long total_set_bits() const {
        long long n = 0;
        for (uint64_t w : bits_) n += popcount(w);
        return n;
    }

    // Bitmask over start positions: bit s set iff [s, s+width) is free on the
    // fiber (s + width <= capacity).
    std::vector<uint64_t> free_window_mask(int fiber, int width) const {
        std::vector<uint64_t> m(words_);
        const uint64_t* w = fiber_words(fiber);
        for (int i = 0; i < words_; ++i) m[i] = ~w[i];
        // clear bits beyond capacity
        if (capacity_ & 63) m[words_ - 1] &= (1ULL << (capacity_ & 63)) - 1;
        for (int k = 1; k < width; ++k) and_shifted(m, w, k);
        // starts must leave room for the window
        int last = capacity_ - width;
        for (int i = 0; i < words_; ++i) {
            if (i * 64 > last) { m[i] = 0; continue; }
            if (i * 64 + 63 > last) m[i] &= (last - i * 64 == 63) ? ~0ULL : ((1ULL << (last - i * 64 + 1)) - 1);
        }
        return m;
    }

    // OR over fibers of a link: bit s set iff some fiber has [s,s+width) free.
    std::vector<uint64_t> link_window_mask(int link, int width) const {
        std::vector<uint64_t> m(words_, 0);
        for (int f = fiber_base_[link]; f < fiber_base_[link + 1]; ++f) {
            auto fm = free_window_mask(f, width);
            for (int i = 0; i < words_; ++i) m[i] |= fm[i];
        }
        return m;
    }

    int words() const { return words_; }

private:
    static int popcount(uint64_t x) { return __builtin_popcountll(x); }
    static int countl_zero(uint64_t x) { return __builtin_clzll(x); }

    void check_range(SlotRange r) const {
        if (r.start < 0 || r.len <= 0 || r.end() > capacity_)
            throw SpectrumError("slot range out of bounds");
    }

    const uint64_t* fiber_words(int fiber) const { return &bits_[(size_t)fiber * words_]; }
    uint64_t* fiber_words(int fiber) { return &bits_[(size_t)fiber * words_]; }

    void set_bits(int fiber, SlotRange r, bool on) {
        uint64_t* w = fiber_words(fiber);
        for (int s = r.start; s < r.end(); ++s) {
            if (on)
                w[s >> 6] |= 1ULL << (s & 63);
            else
                w[s >> 6] &= ~(1ULL << (s & 63));
        }
    }

    // m &= ~occupied shifted left by k (i.e. require slot s+k free too)
    void and_shifted(std::vector<uint64_t>& m, const uint64_t* occ, int k) const {
        for (int i = 0; i < words_; ++i) {
            uint64_t freepart;
            int word = i + (k >> 6);
            int off = k & 63;
            uint64_t lo = word < words_ ? ~occ[word] : 0;
            uint64_t hi = word + 1 < words_ ? ~occ[word + 1] : 0;
            freepart = off ? (lo >> off) | (hi << (64 - off)) : lo;
            m[i] &= freepart;
        }
    }

    const Topology* topo_ = nullptr;
    int capacity_ = 0;
    int words_ = 0;
    std::vector<int> fiber_base_;
    std::vector<int> fiber_link_;
    std::vector<uint64_t> bits_;
    std::vector<std::map<std::pair<int, int>, int>> band_tables_;
    std::map<int64_t, Connection> connections_;
};

// First set bit position in a word mask, or -1.
inline int first_set_bit(const std::vector<uint64_t>& m) {
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i]) return (int)(i * 64) + __builtin_ctzll(m[i]);
    return -1;
}

inline int last_set_bit(const std::vector<uint64_t>& m) {
    for (int i = (int)m.size() - 1; i >= 0; --i)
        if (m[i]) return i * 64 + 63 - __builtin_clzll(m[i]);
    return -1;
}

}  // namespace mgon

#endif
