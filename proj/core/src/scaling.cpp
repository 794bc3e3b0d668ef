#include "wasep/scaling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wasep {

double ScalingConstants::sqrt_epsilon() const { return std::sqrt(epsilon); }

ScalingConstants scaling_constants(double epsilon) {
    if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
        throw std::invalid_argument("epsilon must lie in (0,1), got " +
                                    std::to_string(epsilon));
    }
    const double s = std::sqrt(epsilon);
    ScalingConstants c;
    c.epsilon = epsilon;
    c.p = 0.5 - 0.5 * s;
    c.q = 0.5 + 0.5 * s;
    c.gamma = 0.5 / s;
    // log(q/p)/2 == artanh(sqrt(eps)); atanh is the numerically stable form.
    c.lambda = std::atanh(s);
    // 1 - sqrt(1-eps), written to avoid cancellation for small eps.
    c.v = epsilon / (1.0 + std::sqrt(1.0 - epsilon));
    return c;
}

}  // namespace wasep
