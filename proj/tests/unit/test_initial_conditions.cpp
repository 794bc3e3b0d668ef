#include <doctest.h>

#include <cmath>

#include "wasep/initial_conditions.hpp"
#include "wasep/lattice.hpp"

using namespace wasep;
using doctest::Approx;

TEST_CASE("step profile") {
    WindowSpec w{-1.0, 1.0, 8, Topology::reflecting_segment};
    const auto c = step_profile(w);
    CHECK(c.occupied(0));
    CHECK(!c.occupied(-5));
    const auto h = height_field(c, FluxCounter{});
    for (std::int64_t x = 1; x <= 8; ++x) CHECK(h.at(x) == x);

    WindowSpec ring{-1.0, 1.0, 8, Topology::ring};
    CHECK_THROWS_AS(step_profile(ring), config_error);
}

TEST_CASE("product measure thresholds the uniforms") {
    DensityProfile rho{{0.5, 0.5, 0.5}, 1};
    UniformField u{{0.3, 0.7, 0.5}, 1};
    const auto c = product_measure(rho, u, Topology::reflecting_segment);
    CHECK(c.occupied(-1));
    CHECK(!c.occupied(0));
    CHECK(!c.occupied(1));  // u = rho is not occupied: strict threshold

    const auto full = product_measure(DensityProfile{{1.0, 1.0, 1.0}, 1}, u,
                                      Topology::reflecting_segment);
    CHECK(full.particle_count() == 3);

    UniformField mismatched{{0.1, 0.2}, 1};
    CHECK_THROWS_AS(product_measure(rho, mismatched, Topology::reflecting_segment),
                    config_error);
}

TEST_CASE("shared uniforms make the coupling monotone") {
    Rng rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        const std::int64_t n = 64;
        DensityProfile lo{std::vector<double>(n), 0};
        DensityProfile hi{std::vector<double>(n), 0};
        for (std::int64_t i = 0; i < n; ++i) {
            const double r1 = rng.u01();
            const double r2 = rng.u01();
            lo.rho[static_cast<std::size_t>(i)] = std::min(r1, r2);
            hi.rho[static_cast<std::size_t>(i)] = std::max(r1, r2);
        }
        const auto u = draw_uniform_field(derive_seed(9, static_cast<std::uint64_t>(trial)),
                                          n, 0);
        const auto a = product_measure(lo, u, Topology::ring);
        const auto b = product_measure(hi, u, Topology::ring);
        CHECK(sitewise_le(a, b));
    }
}

TEST_CASE("empirical density tracks the profile") {
    const std::int64_t n = 100000;
    const double rho = 0.37;
    const auto u = draw_uniform_field(606, n, 0);
    const auto c = product_measure(constant_profile(rho, n, 0), u, Topology::ring);
    const double mean = static_cast<double>(c.particle_count()) / static_cast<double>(n);
    const double sigma = std::sqrt(rho * (1.0 - rho) / static_cast<double>(n));
    CHECK(std::abs(mean - rho) < 4.0 * sigma);
}

TEST_CASE("sitewise meet and join") {
    // (0101, 1100) -> min 0100, max 1101, reading strings left to right.
    SiteConfiguration c1(4, 0, Topology::reflecting_segment);
    SiteConfiguration c2(4, 0, Topology::reflecting_segment);
    c1.set(1, true);
    c1.set(3, true);
    c2.set(0, true);
    c2.set(1, true);
    const auto [mn, mx] = sitewise_meet_join(c1, c2);
    CHECK(!mn.occupied(0));
    CHECK(mn.occupied(1));
    CHECK(!mn.occupied(2));
    CHECK(!mn.occupied(3));
    CHECK(mx.occupied(0));
    CHECK(mx.occupied(1));
    CHECK(!mx.occupied(2));
    CHECK(mx.occupied(3));
}

TEST_CASE("meet/join of step and an equilibrium sample") {
    WindowSpec w{-1.0, 1.0, 16, Topology::reflecting_segment};
    const auto step = step_profile(w);
    const auto u = draw_uniform_field(17, w.n_sites(), w.lattice_extent);
    const auto eq = product_measure(constant_profile(0.5, w.n_sites(), w.lattice_extent),
                                    u, w.topology);
    const auto [mn, mx] = sitewise_meet_join(step, eq);
    for (std::int64_t x = mn.min_site(); x <= mn.max_site(); ++x) {
        if (x < 0) {
            CHECK(!mn.occupied(x));                    // empty negative half-line
            CHECK(mx.occupied(x) == eq.occupied(x));   // equilibrium sample
        } else {
            CHECK(mn.occupied(x) == eq.occupied(x));   // equilibrium sample
            CHECK(mx.occupied(x));                     // fully occupied
        }
    }
}

TEST_CASE("meet <= inputs <= join, exhaustive over 4-site pairs") {
    for (std::uint32_t p = 0; p < 16; ++p) {
        for (std::uint32_t q = 0; q < 16; ++q) {
            SiteConfiguration a(4, 0, Topology::ring), b(4, 0, Topology::ring);
            for (int s = 0; s < 4; ++s) {
                a.set(s, (p >> s) & 1u);
                b.set(s, (q >> s) & 1u);
            }
            const auto [mn, mx] = sitewise_meet_join(a, b);
            CHECK(sitewise_le(mn, a));
            CHECK(sitewise_le(mn, b));
            CHECK(sitewise_le(a, mx));
            CHECK(sitewise_le(b, mx));
        }
    }
}

TEST_CASE("lipschitz profiles") {
    WindowSpec w{-1.0, 1.0, 40, Topology::reflecting_segment};

    SUBCASE("linear slope 0.5 at eps 0.04 gives rho = 0.55 everywhere") {
        const auto p = lipschitz_profile(ProfileFunction::linear(0.5), 0.5, 0.04, w);
        for (double r : p.phi.rho) CHECK(r == Approx(0.55).epsilon(1e-12));
        for (double r : p.plus.rho) CHECK(r == Approx(0.55).epsilon(1e-12));
        for (double r : p.minus.rho) CHECK(r == Approx(0.45).epsilon(1e-12));
    }

    SUBCASE("constant phi recovers equilibrium") {
        const auto p = lipschitz_profile(ProfileFunction::linear(0.0), 0.3, 0.04, w);
        for (double r : p.phi.rho) CHECK(r == Approx(0.5).epsilon(1e-12));
    }

    SUBCASE("extremal slope saturates the companion profile") {
        const double m = 0.7;
        const auto p = lipschitz_profile(ProfileFunction::linear(m), m, 0.09, w);
        for (std::size_t i = 0; i < p.phi.rho.size(); ++i)
            CHECK(p.phi.rho[i] == Approx(p.plus.rho[i]).epsilon(1e-12));
    }

    SUBCASE("declared constant below the actual slope is rejected") {
        CHECK_THROWS_AS(lipschitz_profile(ProfileFunction::linear(0.5), 0.1, 0.04, w),
                        config_error);
    }

    SUBCASE("densities leaving [0,1] are rejected") {
        CHECK_THROWS_AS(lipschitz_profile(ProfileFunction::linear(3.0), 3.0, 0.25, w),
                        config_error);
    }
}

TEST_CASE("profile function built-ins") {
    const auto lin = ProfileFunction::linear(2.0);
    CHECK(lin(0.3) == Approx(0.6));

    const auto sin1 = ProfileFunction::sine(0.5, 2.0);
    CHECK(sin1(0.5) == Approx(0.5));
    CHECK(sin1(1.0) == Approx(0.0).epsilon(1e-12));

    const auto pw = ProfileFunction::piecewise_linear({{-1.0, 0.0}, {0.0, 1.0}, {2.0, 0.0}});
    CHECK(pw(-2.0) == Approx(0.0));   // constant extrapolation
    CHECK(pw(-0.5) == Approx(0.5));
    CHECK(pw(1.0) == Approx(0.5));
    CHECK(pw(3.0) == Approx(0.0));
    CHECK_THROWS_AS(ProfileFunction::piecewise_linear({{0.0, 1.0}}), config_error);
    CHECK_THROWS_AS(ProfileFunction::sine(1.0, 0.0), config_error);
}
