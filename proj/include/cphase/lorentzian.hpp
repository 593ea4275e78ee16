#pragma once

// Closed forms for Lorentzian pulses. Every integrand in the overlaps is
// rational in the momenta for this shape, so the integrals reduce to sums of
// residues and need no quadrature over the slowly decaying tails.

#include "cphase/profile.hpp"
#include "cphase/scattering.hpp"

#include <complex>

namespace cphase {

/// A(L) = integral |xi|^2 t(k) e^{-ikL} dk. Both amplitude forms share |xi|^2.
std::complex<double> lorentzian_linear_amplitude(const SpectralProfile& profile, const EmitterParams& emitter,
                                                 double L);

/// g(K) and H(K) of the bound-state reduction (complex_pole form only).
std::complex<double> lorentzian_g(double K, const SpectralProfile& profile, const EmitterParams& emitter);
std::complex<double> lorentzian_h(double K, const SpectralProfile& profile, const EmitterParams& emitter);

/// C(L) = i 2 sqrt(2 Gamma~)/pi integral e^{-iKL} g(K) H(K) dK (complex_pole
/// form only; ContractError otherwise).
std::complex<double> lorentzian_bound_state_term(const SpectralProfile& profile, const EmitterParams& emitter,
                                                 double L);

} // namespace cphase
