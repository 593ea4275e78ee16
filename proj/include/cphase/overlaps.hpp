#pragma once

#include "cphase/kernels.hpp"
#include "cphase/profile.hpp"
#include "cphase/quadrature.hpp"
#include "cphase/scattering.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <mutex>
#include <vector>

namespace cphase {

/// The two complex numbers that fix the gate fidelity at one (sigma, L).
///
/// O1 = <1~|1->, the single-photon overlap of the ideal (delayed, pi-shifted)
/// pulse with the emitter-scattered pulse. T = <target|psi_scat>, the overlap
/// of the scattered two-photon state with the phase-flipped ideal target. A
/// perfect gate has (O1, T) = (1, 1).
struct GateOverlaps {
    double sigma = 0.0;
    double L = 0.0;
    std::complex<double> O1{};
    std::complex<double> T{};
    EmitterParams emitter;
    ConvergenceReport o1_report;
    ConvergenceReport t_report;

    bool converged() const { return o1_report.converged && t_report.converged; }
};

/// k -> -xi(k) exp(ikL): the ideal output of any single photon.
std::function<std::complex<double>(double)> ideal_zero_amplitude(const SpectralProfile& profile, double L);

/// (k, k') -> -xi(k) xi(k') exp(i(k+k')L): the phase-flipped two-photon target.
std::function<std::complex<double>(double, double)> two_photon_target(const SpectralProfile& profile, double L);

/// Target sampled on the grid of an existing amplitude (for inner products).
TwoPhotonAmplitude sample_two_photon_target(const SpectralProfile& profile, double L, const NodeSet& grid,
                                            const QuadratureSpec& resolved);

/// O1 = -integral |xi|^2 t(k) exp(-ikL) dk.
Integral<std::complex<double>> single_overlap(const SpectralProfile& profile, const EmitterParams& emitter, double L,
                                              const QuadratureSpec& quad);

/// O1 for an arbitrary transmission function (used for substitution checks).
Integral<std::complex<double>> single_overlap_with(const SpectralProfile& profile,
                                                   const std::function<std::complex<double>(double)>& t, double L,
                                                   const QuadratureSpec& quad);

/// T = -[A(L)^2 + C(L)/2], with A(L) = integral |xi|^2 t e^{-ikL} and the
/// bound-state part C reduced to one sum-momentum integral (see OverlapEvaluator).
Integral<std::complex<double>> two_overlap(const SpectralProfile& profile, const EmitterParams& emitter, double L,
                                           const QuadratureSpec& quad);

/// T for an arbitrary two-photon amplitude beta(k,k'), by 2D quadrature.
Integral<std::complex<double>> two_overlap_with(const SpectralProfile& profile,
                                                const std::function<std::complex<double>(double, double)>& beta,
                                                double L, const QuadratureSpec& quad);

/// T from a precomputed amplitude grid.
std::complex<double> two_overlap_from_amplitude(const TwoPhotonAmplitude& beta, double L);

/// Per-(pulse, emitter) cache of everything that does not depend on L.
///
/// With K = k + k', the bound-state contribution is
///   C(L) = i 2 sqrt(2 Gamma~)/pi  integral dK e^{-iKL} g(K) H(K),
///   H(K) = integral dk u(k) u(K - k),   u = conj(xi) s,
/// so g and H are tabulated once per refinement level and every L costs one
/// pass over the K nodes. Levels are built lazily and are safe to request from
/// several threads.
class OverlapEvaluator {
public:
    OverlapEvaluator(SpectralProfile profile, EmitterParams emitter, const QuadratureSpec& quad,
                     kernels::ExecPolicy exec = {});

    Integral<std::complex<double>> single(double L) const;
    Integral<std::complex<double>> two(double L) const;
    GateOverlaps evaluate(double L) const;

    const SpectralProfile& profile() const { return profile_; }
    const EmitterParams& emitter() const { return emitter_; }
    const QuadratureSpec& quadrature() const { return quad_; }

private:
    struct Level {
        std::vector<double> sum_points;
        std::vector<std::complex<double>> weighted_gh; // w_K g(K) H(K)
    };

    Integral<std::complex<double>> linear_amplitude(double L) const; // A(L)
    Integral<std::complex<double>> two_given(const Integral<std::complex<double>>& a, double L) const;
    const Level& level(int index) const;
    std::complex<double> bound_state_term(const Level& lvl, double L) const;

    SpectralProfile profile_;
    EmitterParams emitter_;
    QuadratureSpec quad_;
    kernels::ExecPolicy exec_;
    mutable std::mutex mutex_;
    mutable std::vector<std::unique_ptr<Level>> levels_;
};

} // namespace cphase
