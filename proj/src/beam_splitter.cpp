#include "cphase/beam_splitter.hpp"

#include <cmath>

namespace cphase {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
}

std::complex<double> TwoModeState::fock_20() const { return std::sqrt(2.0) * xx; }
std::complex<double> TwoModeState::fock_02() const { return std::sqrt(2.0) * yy; }

double TwoModeState::norm() const {
    return std::norm(vacuum) + std::norm(x) + std::norm(y) + std::norm(fock_20()) + std::norm(fock_11()) +
           std::norm(fock_02());
}

TwoModeState beam_splitter_transform(const TwoModeState& in) {
    // Image of each creation operator: x -> ax x + ay y, y -> bx x + by y.
    const double r = 1.0 / std::sqrt(2.0);
    const std::complex<double> ax = r, ay = -kI * r;
    const std::complex<double> bx = -kI * r, by = r;

    TwoModeState out;
    out.vacuum = in.vacuum;
    out.x = in.x * ax + in.y * bx;
    out.y = in.x * ay + in.y * by;
    out.xx = in.xx * ax * ax + in.xy * ax * bx + in.yy * bx * bx;
    out.yy = in.xx * ay * ay + in.xy * ay * by + in.yy * by * by;
    out.xy = in.xx * 2.0 * ax * ay + in.xy * (ax * by + ay * bx) + in.yy * 2.0 * bx * by;
    return out;
}

} // namespace cphase
