#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wasep/lattice.hpp"
#include "wasep/rng.hpp"
#include "wasep/scaling.hpp"

namespace wasep {

enum class Direction : std::uint8_t { rightward, leftward };

// One clock ring of the graphical construction: the bond (x, x+1) attempts
// to move a particle rightward (x -> x+1, probability p) or leftward
// (x+1 -> x, probability q).
struct Event {
    double time = 0.0;
    std::int64_t bond = 0;  // left site x of the pair (x, x+1)
    Direction direction = Direction::rightward;
};

// Deterministic Poissonian event stream over the bonds of a lattice. Each
// bond carries total rate p + q = 1, so inter-event gaps are Exp(#bonds),
// the bond is uniform, and the direction marginal is (p, q). Per event the
// draws happen in the fixed order (gap, bond, direction), which together
// with the seed fully determines the stream.
class EventStream {
public:
    EventStream(std::uint64_t seed, const ScalingConstants& scaling,
                std::int64_t n_sites, std::int64_t origin, Topology topology);
    static EventStream for_window(std::uint64_t seed, const ScalingConstants& scaling,
                                  const WindowSpec& window);

    Event next();

    double time() const { return time_; }
    std::uint64_t events_generated() const { return count_; }
    std::int64_t n_bonds() const { return n_bonds_; }
    std::uint64_t seed() const { return seed_; }
    Topology topology() const { return topology_; }

    // Cursor state for exact replay (seed, rng words, clock, event count).
    struct Cursor {
        std::uint64_t seed;
        std::array<std::uint64_t, 4> rng_state;
        double time;
        std::uint64_t count;
    };
    Cursor cursor() const { return {seed_, rng_.state(), time_, count_}; }
    void restore(const Cursor& c) {
        seed_ = c.seed;
        rng_.set_state(c.rng_state);
        time_ = c.time;
        count_ = c.count;
    }

private:
    Rng rng_;
    std::uint64_t seed_;
    double time_ = 0.0;
    std::uint64_t count_ = 0;
    double p_right_;
    std::int64_t n_bonds_;
    std::int64_t first_bond_;  // left site of bond 0
    Topology topology_;
};

// Several exclusion-process replicas driven by one shared event stream (the
// basic coupling). Every replica sees every event; a jump is applied to a
// replica only where its own exclusion rule allows it. Each replica keeps
// its own flux counter for the bond (0,1).
class CoupledEnsemble {
public:
    struct Replica {
        std::string name;
        SiteConfiguration config;
        FluxCounter flux;
    };

    // A per-event assertion, run every `stride` applied events and after the
    // final event of evolve(). Throw hook_violation to abort.
    struct Hook {
        std::uint64_t stride = 1;
        std::function<void(const CoupledEnsemble&, const Event&, std::uint64_t)> fn;
    };

    explicit CoupledEnsemble(EventStream stream);

    std::size_t add_replica(std::string name, SiteConfiguration config);

    std::size_t size() const { return replicas_.size(); }
    const Replica& replica(std::size_t i) const { return replicas_[i]; }
    const Replica& replica(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;
    bool has_replica(std::string_view name) const;

    double time() const { return time_; }
    std::uint64_t events_applied() const { return events_applied_; }
    const EventStream& stream() const { return stream_; }

    // Apply a single event to every replica. Requires e.time >= time().
    void apply(const Event& e);

    // Drain the stream until the clock passes time() + duration. Returns the
    // number of events applied. A pending event beyond the horizon is kept
    // for the next call, so evolve(t1); evolve(t2) == evolve(t1+t2).
    std::uint64_t evolve(double duration, std::span<const Hook> hooks = {});

    HeightField height(std::size_t i) const {
        return height_field(replicas_[i].config, replicas_[i].flux);
    }
    HeightField height(std::string_view name) const {
        const auto& r = replica(name);
        return height_field(r.config, r.flux);
    }

private:
    std::vector<Replica> replicas_;
    EventStream stream_;
    double time_ = 0.0;
    std::uint64_t events_applied_ = 0;
    std::optional<Event> pending_;
    std::int64_t n_sites_ = 0;
    std::int64_t origin_ = 0;
    Topology topology_ = Topology::reflecting_segment;
    bool shape_fixed_ = false;
};

// Renders sites [center-radius, center+radius] of each replica as 0/1
// strings, for hook diagnostics.
std::string neighborhood_dump(const CoupledEnsemble& ensemble, std::int64_t center,
                              std::int64_t radius);

}  // namespace wasep
