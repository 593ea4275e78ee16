#pragma once

#include "cphase/kernels.hpp"
#include "cphase/profile.hpp"
#include "cphase/quadrature.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace cphase {

/// Two-level emitter side-coupled to a chiral waveguide, in Gamma/v_g units.
struct EmitterParams {
    double delta = 0.0;      ///< momentum detuning from the pulse carrier
    double gamma_wg = 1.0;   ///< reduced waveguide coupling Gamma/v_g
    double gamma_loss = 0.0; ///< reduced loss rate gamma/v_g

    void validate() const;
    bool lossless() const { return gamma_loss == 0.0; }
    bool operator==(const EmitterParams&) const = default;
};

/// t(k) = (k - delta - i(gamma_wg - gamma_loss)) / (k - delta + i(gamma_wg + gamma_loss))
std::complex<double> transmission(double k, const EmitterParams& emitter);

/// Continuous phase of t(k) for a lossless emitter, pi + 2 atan((k - delta)/gamma_wg).
/// Throws ContractError when gamma_loss > 0 (|t| != 1, no pure phase).
double phase_theta(double k, const EmitterParams& emitter);

/// s(k) = sqrt(2 gamma_wg) / (k - delta + i(gamma_wg + gamma_loss))
std::complex<double> s_pole(double k, const EmitterParams& emitter);

/// Two-photon bound-state kernel B = i sqrt(2 gamma_wg)/pi s(k)s(k')[s(p)+s(p')].
/// The caller enforces energy conservation p' = k + k' - p.
std::complex<double> bound_state_kernel(double k, double k2, double p, double p2, const EmitterParams& emitter);

/// i 2 sqrt(2 gamma_wg) / pi: with it, b(k,k') = prefactor * s(k) s(k') g(k+k').
std::complex<double> nonlinear_prefactor(const EmitterParams& emitter);

/// g(K) = integral xi(p) xi(K-p) s(p) dp.
Integral<std::complex<double>> nonlinear_g(double K, const SpectralProfile& profile, const EmitterParams& emitter,
                                           const QuadratureSpec& quad);

/// b(k,k') = integral xi(p) xi(k+k'-p) B_{k k' p (k+k'-p)} dp, integrated directly
/// from the kernel without the g factorization.
Integral<std::complex<double>> nonlinear_b(double k, double k2, const SpectralProfile& profile,
                                           const EmitterParams& emitter, const QuadratureSpec& quad);

/// k -> xi(k) t(k)
std::function<std::complex<double>(double)> single_photon_scatter(const SpectralProfile& profile,
                                                                   const EmitterParams& emitter);

/// Complex samples on a uniform grid in the unit coordinate of an AxisMap,
/// read back with 4-point cubic interpolation.
class UniformTable {
public:
    UniformTable(AxisMap map, std::vector<std::complex<double>> values);
    std::complex<double> operator()(double x) const;
    const AxisMap& map() const { return map_; }
    std::size_t size() const { return values_.size(); }

    /// Unit-coordinate sample points of an n-point table (endpoints included).
    static std::vector<double> unit_points(std::size_t n);

private:
    AxisMap map_;
    std::vector<std::complex<double>> values_;
    double spacing_;
};

/// Two-photon spectral amplitude on a shared tensor grid, row-major values(k_i, k'_j).
struct TwoPhotonAmplitude {
    NodeSet grid;
    std::vector<std::complex<double>> values;
    SpectralProfile profile;
    EmitterParams emitter;
    QuadratureSpec quad;
    std::optional<double> L;

    std::size_t n() const { return grid.size(); }
    std::complex<double> at(std::size_t i, std::size_t j) const { return values[i * n() + j]; }
    double norm() const;
};

/// <bra|ket> = sum w_i w_j conj(bra_ij) ket_ij; both amplitudes must share a grid.
std::complex<double> inner_product(const TwoPhotonAmplitude& bra, const TwoPhotonAmplitude& ket);

struct TwoPhotonOptions {
    bool include_nonlinear = true;
    kernels::ExecPolicy exec{};
};

/// beta(k,k') = t(k)t(k')xi(k)xi(k') + 1/2 * prefactor * s(k)s(k') g(k+k') on the
/// resolved node grid; g comes from a table on a grid twice as dense as the
/// sum axis, interpolated cubically.
TwoPhotonAmplitude two_photon_scatter(const SpectralProfile& profile, const EmitterParams& emitter,
                                      const QuadratureSpec& quad, const TwoPhotonOptions& options = {});

/// Norm of the scattered two-photon state without a 2D grid:
///   |lin|^2 part     (integral |t xi|^2)^2,
///   cross term       Re[prefactor * integral dK g(K) J(K)],  J = (conj(t xi) s) * (conj(t xi) s),
///   |bound|^2 part   |prefactor|^2/4 * integral dK |g(K)|^2 S(K),
/// where S(K) = integral |s(k)|^2 |s(K-k)|^2 dk has a closed form. Equals 1 for
/// a lossless emitter.
Integral<double> two_photon_norm(const SpectralProfile& profile, const EmitterParams& emitter,
                                 const QuadratureSpec& quad, kernels::ExecPolicy exec = {});

/// g(K) tabulated for the node grid of `resolved` (unit-uniform, stretch 2).
UniformTable nonlinear_g_table(const SpectralProfile& profile, const EmitterParams& emitter,
                               const QuadratureSpec& resolved, const NodeSet& nodes, kernels::ExecPolicy exec);

} // namespace cphase
