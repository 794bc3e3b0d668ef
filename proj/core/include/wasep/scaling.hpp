#pragma once

namespace wasep {

// Weak-asymmetry scaling constants. All values are stored from exact closed
// forms; the small-epsilon series expansions are used only as consistency
// checks in tests.
//
//   p = 1/2 - sqrt(eps)/2,   q = 1/2 + sqrt(eps)/2          (so p + q = 1, q > p)
//   gamma  = eps^{-1/2}/2
//   lambda = log(q/p)/2 = artanh(sqrt(eps)) > 0
//   v      = p + q - 2 sqrt(pq) = 1 - sqrt(1-eps)
struct ScalingConstants {
    double epsilon;
    double p;
    double q;
    double gamma;
    double lambda;
    double v;

    double sqrt_epsilon() const;
    // Lattice window of the macroscopic interval [a,b]: sites in
    // [a/eps, b/eps]. Microscopic time of a macroscopic time t is t/eps^2.
    double inv_epsilon() const { return 1.0 / epsilon; }
    double micro_time(double t_macro) const { return t_macro / (epsilon * epsilon); }
};

// Throws std::invalid_argument unless 0 < epsilon < 1.
ScalingConstants scaling_constants(double epsilon);

}  // namespace wasep
