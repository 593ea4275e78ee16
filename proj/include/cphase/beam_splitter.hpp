#pragma once

#include <complex>

namespace cphase {

/// Up-to-two-photon state of the control ('c') and signal ('s') '1' modes,
/// stored as the coefficients of a polynomial in the creation operators
/// x = a+_c, y = a+_s acting on the vacuum.
struct TwoModeState {
    std::complex<double> vacuum{};
    std::complex<double> x{};
    std::complex<double> y{};
    std::complex<double> xx{};
    std::complex<double> xy{};
    std::complex<double> yy{};

    /// Fock-basis amplitudes; (a+)^2 |0> = sqrt(2) |2>.
    std::complex<double> fock_20() const;
    std::complex<double> fock_11() const { return xy; }
    std::complex<double> fock_02() const;
    double norm() const;
};

/// Directional coupler as a 50/50 mode map,
///   x -> (x - i y)/sqrt(2),  y -> (-i x + y)/sqrt(2).
TwoModeState beam_splitter_transform(const TwoModeState& in);

} // namespace cphase
