#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wasep/errors.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

enum class Topology { reflecting_segment, ring };

const char* to_string(Topology t);

// Observation window: macroscopic interval [a,b] observed inside a lattice
// of sites [-L, L]. Heights are only defined on the segment topology.
struct WindowSpec {
    double a = -1.0;
    double b = 1.0;
    std::int64_t lattice_extent = 0;  // L; sites span [-L, L]
    Topology topology = Topology::reflecting_segment;

    std::int64_t n_sites() const { return 2 * lattice_extent + 1; }
    void validate() const;
    // Additionally require ceil(|a|/eps) and ceil(|b|/eps) < L.
    void validate_for(const ScalingConstants& scaling) const;
};

// Occupancy field, one bit per site. Sites carry integer coordinates
// x in [min_site, max_site]; for window-based lattices that is [-L, L].
// Small ring systems used by the exact oracle index sites 0..n-1.
class SiteConfiguration {
public:
    SiteConfiguration(std::int64_t n_sites, std::int64_t origin, Topology topology);
    static SiteConfiguration for_window(const WindowSpec& w);

    std::int64_t n_sites() const { return n_sites_; }
    std::int64_t origin() const { return origin_; }
    Topology topology() const { return topology_; }
    std::int64_t min_site() const { return -origin_; }
    std::int64_t max_site() const { return n_sites_ - 1 - origin_; }

    bool occupied(std::int64_t x) const { return test_index(index_of(x)); }
    void set(std::int64_t x, bool value) { set_index(index_of(x), value); }

    std::int64_t particle_count() const;

    bool same_shape(const SiteConfiguration& other) const {
        return n_sites_ == other.n_sites_ && origin_ == other.origin_;
    }
    bool operator==(const SiteConfiguration& other) const {
        return same_shape(other) && topology_ == other.topology_ &&
               words_ == other.words_;
    }

    // Encode the configuration as an integer bit pattern (site index i ->
    // bit i). Only valid for n_sites <= 63; used by the oracle histograms.
    std::uint64_t encode() const;

    // --- index-level operations used by the event loop -------------------
    std::int64_t index_of(std::int64_t x) const {
        const std::int64_t i = x + origin_;
        if (i < 0 || i >= n_sites_) throw state_error("site out of lattice");
        return i;
    }
    bool test_index(std::int64_t i) const {
        return (words_[static_cast<std::size_t>(i >> 6)] >> (i & 63)) & 1u;
    }
    void set_index(std::int64_t i, bool value) {
        const std::size_t w = static_cast<std::size_t>(i >> 6);
        const std::uint64_t bit = 1ULL << (i & 63);
        if (value) words_[w] |= bit; else words_[w] &= ~bit;
    }
    // Move a particle from index `from` to index `to` if the exclusion rule
    // allows it; returns whether the jump happened.
    bool try_move_index(std::int64_t from, std::int64_t to) {
        const std::size_t wf = static_cast<std::size_t>(from >> 6);
        const std::size_t wt = static_cast<std::size_t>(to >> 6);
        const std::uint64_t bf = 1ULL << (from & 63);
        const std::uint64_t bt = 1ULL << (to & 63);
        if (!(words_[wf] & bf) || (words_[wt] & bt)) return false;
        words_[wf] &= ~bf;
        words_[wt] |= bt;
        return true;
    }

    std::span<const std::uint64_t> words() const { return words_; }
    std::span<std::uint64_t> words() { return words_; }

private:
    std::int64_t n_sites_;
    std::int64_t origin_;
    Topology topology_;
    std::vector<std::uint64_t> words_;
};

// Sitewise eta1 <= eta2 (word-wise a & ~b == 0).
bool sitewise_le(const SiteConfiguration& a, const SiteConfiguration& b);

// Spin view: etahat(x) = 2 eta(x) - 1 in {-1, +1}.
inline int spin(const SiteConfiguration& c, std::int64_t x) {
    return c.occupied(x) ? 1 : -1;
}

// Net number of particles that crossed the bond (0,1): +1 for a jump from
// site 1 to site 0, -1 for the reverse.
struct FluxCounter {
    std::int64_t net_crossings = 0;
};

// Integer-valued height function on [-L, L]: consecutive differences are the
// spins, anchored by h(0) = 2 N(t). Real arguments use step interpolation;
// all observables evaluate at integer sites.
struct HeightField {
    std::vector<std::int64_t> values;  // index x + origin
    std::int64_t origin = 0;

    std::int64_t min_site() const { return -origin; }
    std::int64_t max_site() const {
        return static_cast<std::int64_t>(values.size()) - 1 - origin;
    }
    std::int64_t at(std::int64_t x) const {
        const std::int64_t i = x + origin;
        if (i < 0 || i >= static_cast<std::int64_t>(values.size()))
            throw state_error("height evaluated outside the lattice");
        return values[static_cast<std::size_t>(i)];
    }
};

// h(x) = 2N + sum_{0<y<=x} etahat(y) for x > 0, h(0) = 2N, and
// h(x) = 2N - sum_{x<y<=0} etahat(y) for x < 0. Segment topology only:
// on a ring the winding makes h ill-defined.
HeightField height_field(const SiteConfiguration& config, const FluxCounter& flux);

// Recover the spin sequence etahat(x) = h(x) - h(x-1) for the sites
// min_site+1 .. max_site. Throws state_error if any increment is not +-1.
std::vector<int> increments_from_height(const HeightField& h);

}  // namespace wasep
