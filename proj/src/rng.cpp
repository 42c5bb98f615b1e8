#include "dscim/rng.hpp"

#include <algorithm>
#include <cmath>

namespace dscim {

std::int8_t TrialRng::gaussian_i8(double sigma, int clip) {
    const double u1 = 1.0 - unit();  // (0, 1]
    const double u2 = unit();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    const double v = std::round(z * sigma);
    const double c = static_cast<double>(clip);
    return static_cast<std::int8_t>(std::clamp(v, -c, c));
}

}  // namespace dscim
