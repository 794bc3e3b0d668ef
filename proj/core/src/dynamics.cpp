#include "wasep/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace wasep {

EventStream::EventStream(std::uint64_t seed, const ScalingConstants& scaling,
                         std::int64_t n_sites, std::int64_t origin, Topology topology)
    : rng_(seed), seed_(seed), p_right_(scaling.p), topology_(topology) {
    if (n_sites < 2) throw config_error({"event stream needs at least two sites"});
    first_bond_ = -origin;
    // Segment: bonds (x, x+1) for x in [-L, L-1]; the two half-bonds that
    // would cross the boundary are never generated. Ring: one extra bond
    // wrapping max_site -> min_site.
    n_bonds_ = (topology == Topology::ring) ? n_sites : n_sites - 1;
}

EventStream EventStream::for_window(std::uint64_t seed, const ScalingConstants& scaling,
                                    const WindowSpec& window) {
    window.validate();
    return EventStream(seed, scaling, window.n_sites(), window.lattice_extent,
                       window.topology);
}

Event EventStream::next() {
    Event e;
    time_ += rng_.exponential(static_cast<double>(n_bonds_));
    e.time = time_;
    e.bond = first_bond_ + static_cast<std::int64_t>(
                               rng_.below(static_cast<std::uint64_t>(n_bonds_)));
    e.direction = rng_.u01() < p_right_ ? Direction::rightward : Direction::leftward;
    ++count_;
    return e;
}

CoupledEnsemble::CoupledEnsemble(EventStream stream) : stream_(std::move(stream)) {}

std::size_t CoupledEnsemble::add_replica(std::string name, SiteConfiguration config) {
    if (has_replica(name))
        throw config_error({"duplicate replica name: " + name});
    if (!shape_fixed_) {
        n_sites_ = config.n_sites();
        origin_ = config.origin();
        topology_ = config.topology();
        shape_fixed_ = true;
    } else if (config.n_sites() != n_sites_ || config.origin() != origin_ ||
               config.topology() != topology_) {
        throw config_error({"replica '" + name + "' does not match ensemble window"});
    }
    replicas_.push_back({std::move(name), std::move(config), FluxCounter{}});
    return replicas_.size() - 1;
}

const CoupledEnsemble::Replica& CoupledEnsemble::replica(std::string_view name) const {
    return replicas_[index_of(name)];
}

std::size_t CoupledEnsemble::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < replicas_.size(); ++i) {
        if (replicas_[i].name == name) return i;
    }
    throw config_error({"missing replica: " + std::string(name)});
}

bool CoupledEnsemble::has_replica(std::string_view name) const {
    return std::any_of(replicas_.begin(), replicas_.end(),
                       [&](const Replica& r) { return r.name == name; });
}

void CoupledEnsemble::apply(const Event& e) {
    if (e.time < time_) throw state_error("event time before ensemble clock");
    const std::int64_t left = e.bond + origin_;  // index of the bond's left site
    if (left < 0 || left >= n_sites_ || (topology_ != Topology::ring && left + 1 >= n_sites_))
        throw state_error("event bond outside the lattice window");
    std::int64_t right = left + 1;
    if (right == n_sites_) right = 0;  // ring wrap

    const bool leftward = e.direction == Direction::leftward;
    const std::int64_t from = leftward ? right : left;
    const std::int64_t to = leftward ? left : right;
    const bool is_flux_bond = (e.bond == 0);
    const std::int64_t flux_delta = is_flux_bond ? (leftward ? 1 : -1) : 0;

    for (auto& r : replicas_) {
        if (r.config.try_move_index(from, to)) r.flux.net_crossings += flux_delta;
    }
    time_ = e.time;
}

std::uint64_t CoupledEnsemble::evolve(double duration, std::span<const Hook> hooks) {
    if (duration < 0.0) throw config_error({"evolve: duration must be >= 0"});
    const double horizon = time_ + duration;
    std::uint64_t applied = 0;
    while (true) {
        if (!pending_) pending_ = stream_.next();
        if (pending_->time > horizon) break;
        const Event e = *pending_;
        pending_.reset();
        apply(e);
        ++applied;
        ++events_applied_;
        for (const auto& hook : hooks) {
            if (hook.stride != 0 && events_applied_ % hook.stride == 0)
                hook.fn(*this, e, events_applied_);
        }
    }
    time_ = horizon;
    return applied;
}

std::string neighborhood_dump(const CoupledEnsemble& ensemble, std::int64_t center,
                              std::int64_t radius) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
        const auto& r = ensemble.replica(i);
        out << "  " << r.name << " [" << (center - radius) << ".." << (center + radius)
            << "]: ";
        for (std::int64_t x = center - radius; x <= center + radius; ++x) {
            if (x < r.config.min_site() || x > r.config.max_site())
                out << '.';
            else
                out << (r.config.occupied(x) ? '1' : '0');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace wasep
