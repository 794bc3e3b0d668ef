#include "wasep/lattice.hpp"

#include <bit>
#include <cmath>
#include <string>

namespace wasep {

const char* to_string(Topology t) {
    return t == Topology::ring ? "ring" : "reflecting-segment";
}

void WindowSpec::validate() const {
    if (!(a < b)) throw config_error({"window: require a < b"});
    if (lattice_extent <= 0)
        throw config_error({"window: lattice_extent must be positive"});
}

void WindowSpec::validate_for(const ScalingConstants& scaling) const {
    validate();
    const double inv = scaling.inv_epsilon();
    const auto need = static_cast<std::int64_t>(
        std::ceil(std::max(std::abs(a), std::abs(b)) * inv));
    if (need >= lattice_extent) {
        throw config_error({"window: observation interval [" + std::to_string(a) +
                            ", " + std::to_string(b) +
                            "] does not fit strictly inside lattice extent " +
                            std::to_string(lattice_extent) + " at epsilon " +
                            std::to_string(scaling.epsilon)});
    }
}

SiteConfiguration::SiteConfiguration(std::int64_t n_sites, std::int64_t origin,
                                     Topology topology)
    : n_sites_(n_sites),
      origin_(origin),
      topology_(topology),
      words_(static_cast<std::size_t>((n_sites + 63) / 64), 0) {
    if (n_sites <= 0) throw config_error({"lattice must have at least one site"});
}

SiteConfiguration SiteConfiguration::for_window(const WindowSpec& w) {
    w.validate();
    return SiteConfiguration(w.n_sites(), w.lattice_extent, w.topology);
}

std::int64_t SiteConfiguration::particle_count() const {
    std::int64_t n = 0;
    for (const auto w : words_) n += std::popcount(w);
    return n;
}

std::uint64_t SiteConfiguration::encode() const {
    if (n_sites_ > 63) throw state_error("encode() requires n_sites <= 63");
    return words_[0];
}

bool sitewise_le(const SiteConfiguration& a, const SiteConfiguration& b) {
    if (!a.same_shape(b)) throw state_error("sitewise_le: window mismatch");
    const auto wa = a.words();
    const auto wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        if (wa[i] & ~wb[i]) return false;
    }
    return true;
}

HeightField height_field(const SiteConfiguration& config, const FluxCounter& flux) {
    if (config.topology() == Topology::ring)
        throw state_error("height function is undefined on a ring");
    HeightField h;
    h.origin = config.origin();
    h.values.resize(static_cast<std::size_t>(config.n_sites()));
    const std::int64_t two_n = 2 * flux.net_crossings;

    const std::int64_t lo = config.min_site();
    const std::int64_t hi = config.max_site();
    h.values[static_cast<std::size_t>(config.origin())] = two_n;
    std::int64_t acc = two_n;
    for (std::int64_t x = 1; x <= hi; ++x) {
        acc += spin(config, x);
        h.values[static_cast<std::size_t>(x + h.origin)] = acc;
    }
    acc = two_n;
    for (std::int64_t x = -1; x >= lo; --x) {
        acc -= spin(config, x + 1);
        h.values[static_cast<std::size_t>(x + h.origin)] = acc;
    }
    return h;
}

std::vector<int> increments_from_height(const HeightField& h) {
    std::vector<int> spins;
    spins.reserve(h.values.size() - 1);
    for (std::size_t i = 1; i < h.values.size(); ++i) {
        const std::int64_t d = h.values[i] - h.values[i - 1];
        if (d != 1 && d != -1) {
            throw state_error("corrupted height field: increment " +
                              std::to_string(d) + " at site " +
                              std::to_string(static_cast<std::int64_t>(i) - h.origin));
        }
        spins.push_back(static_cast<int>(d));
    }
    return spins;
}

}  // namespace wasep
