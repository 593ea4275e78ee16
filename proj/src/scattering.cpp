#include "cphase/scattering.hpp"

#include "cphase/errors.hpp"

#include <cmath>
#include <numbers>

namespace cphase {

namespace {
constexpr std::complex<double> kI{0.0, 1.0};
constexpr double kPi = std::numbers::pi;
} // namespace

void EmitterParams::validate() const {
    if (!(gamma_wg > 0.0) || !std::isfinite(gamma_wg)) throw ParameterError("gamma_wg must be positive");
    if (!(gamma_loss >= 0.0) || !std::isfinite(gamma_loss)) throw ParameterError("gamma_loss must be >= 0");
    if (!std::isfinite(delta)) throw ParameterError("detuning must be finite");
}

std::complex<double> transmission(double k, const EmitterParams& e) {
    const double q = k - e.delta;
    return std::complex<double>{q, -(e.gamma_wg - e.gamma_loss)} / std::complex<double>{q, e.gamma_wg + e.gamma_loss};
}

double phase_theta(double k, const EmitterParams& e) {
    if (!e.lossless())
        throw ContractError("phase_theta is only defined for a lossless emitter (|t| = 1 needs gamma_loss = 0)");
    return kPi + 2.0 * std::atan((k - e.delta) / e.gamma_wg);
}

std::complex<double> s_pole(double k, const EmitterParams& e) {
    return std::sqrt(2.0 * e.gamma_wg) / std::complex<double>{k - e.delta, e.gamma_wg + e.gamma_loss};
}

std::complex<double> bound_state_kernel(double k, double k2, double p, double p2, const EmitterParams& e) {
    return kI * (std::sqrt(2.0 * e.gamma_wg) / kPi) * s_pole(k, e) * s_pole(k2, e) * (s_pole(p, e) + s_pole(p2, e));
}

std::complex<double> nonlinear_prefactor(const EmitterParams& e) {
    return kI * (2.0 * std::sqrt(2.0 * e.gamma_wg) / kPi);
}

Integral<std::complex<double>> nonlinear_g(double K, const SpectralProfile& profile, const EmitterParams& emitter,
                                           const QuadratureSpec& quad) {
    const auto r = resolve(quad, profile);
    return integrate_1d(
        [&](double p) { return profile.amplitude(p) * profile.amplitude(K - p) * s_pole(p, emitter); }, r);
}

Integral<std::complex<double>> nonlinear_b(double k, double k2, const SpectralProfile& profile,
                                           const EmitterParams& emitter, const QuadratureSpec& quad) {
    const auto r = resolve(quad, profile);
    const double K = k + k2;
    return integrate_1d(
        [&](double p) {
            return profile.amplitude(p) * profile.amplitude(K - p) * bound_state_kernel(k, k2, p, K - p, emitter);
        },
        r);
}

std::function<std::complex<double>(double)> single_photon_scatter(const SpectralProfile& profile,
                                                                   const EmitterParams& emitter) {
    return [profile, emitter](double k) { return profile.amplitude(k) * transmission(k, emitter); };
}

UniformTable::UniformTable(AxisMap map, std::vector<std::complex<double>> values)
    : map_(map), values_(std::move(values)) {
    if (values_.size() < 4) throw ParameterError("interpolation table needs at least 4 samples");
    spacing_ = 2.0 / static_cast<double>(values_.size() - 1);
}

std::vector<double> UniformTable::unit_points(std::size_t n) {
    std::vector<double> u(n);
    const double h = 2.0 / static_cast<double>(n - 1);
    for (std::size_t j = 0; j < n; ++j) u[j] = -1.0 + h * static_cast<double>(j);
    u.back() = 1.0;
    return u;
}

std::complex<double> UniformTable::operator()(double x) const {
    const double u = map_.to_unit(x);
    if (u < -1.0 || u > 1.0) return {0.0, 0.0};
    const double pos = (u + 1.0) / spacing_;
    const auto last = static_cast<std::ptrdiff_t>(values_.size()) - 1;
    auto j = static_cast<std::ptrdiff_t>(std::floor(pos));
    double f = pos - static_cast<double>(j);
    if (f < 1e-12) return values_[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(j, 0, last))];
    if (j >= last) return values_.back();
    // 4-point Lagrange stencil j-1..j+2, shifted inward at the ends.
    std::ptrdiff_t base = std::clamp<std::ptrdiff_t>(j - 1, 0, last - 3);
    const double t = pos - static_cast<double>(base); // in [0, 3]
    std::complex<double> sum{0.0, 0.0};
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w *= (t - b) / static_cast<double>(a - b);
        sum += w * values_[static_cast<std::size_t>(base + a)];
    }
    return sum;
}

double TwoPhotonAmplitude::norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n(); ++j) row += grid.weights[j] * std::norm(at(i, j));
        sum += grid.weights[i] * row;
    }
    return sum;
}

std::complex<double> inner_product(const TwoPhotonAmplitude& bra, const TwoPhotonAmplitude& ket) {
    if (bra.grid.points != ket.grid.points) throw ContractError("inner_product needs amplitudes on the same grid");
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t i = 0; i < ket.n(); ++i) {
        std::complex<double> row{0.0, 0.0};
        for (std::size_t j = 0; j < ket.n(); ++j) row += ket.grid.weights[j] * std::conj(bra.at(i, j)) * ket.at(i, j);
        sum += ket.grid.weights[i] * row;
    }
    return sum;
}

UniformTable nonlinear_g_table(const SpectralProfile& profile, const EmitterParams& emitter,
                               const QuadratureSpec& resolved, const NodeSet& nodes, kernels::ExecPolicy exec) {
    const AxisMap sum_axis(resolved, 2.0);
    const std::size_t count = 4 * (nodes.size() - 1) + 1;
    const auto unit = UniformTable::unit_points(count);
    std::vector<double> targets(count);
    for (std::size_t j = 0; j < count; ++j) targets[j] = sum_axis.from_unit(unit[j]);

    std::vector<std::complex<double>> left(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        left[i] = nodes.weights[i] * profile.amplitude(nodes.points[i]) * s_pole(nodes.points[i], emitter);

    std::vector<std::complex<double>> g(count);
    auto xi = [&profile](double q) { return profile.amplitude(q); };
    kernels::pair_convolution(targets, nodes.points, left, xi, g, exec);
    if (sum_axis.unbounded()) g.front() = g.back() = {0.0, 0.0};
    return UniformTable(sum_axis, std::move(g));
}

TwoPhotonAmplitude two_photon_scatter(const SpectralProfile& profile, const EmitterParams& emitter,
                                      const QuadratureSpec& quad, const TwoPhotonOptions& options) {
    emitter.validate();
    const auto r = resolve(quad, profile);
    TwoPhotonAmplitude out{make_nodes(r, r.nodes), {}, profile, emitter, r, std::nullopt};
    const std::size_t n = out.n();

    std::vector<std::complex<double>> linear(n), pole(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double k = out.grid.points[i];
        linear[i] = transmission(k, emitter) * profile.amplitude(k);
        pole[i] = s_pole(k, emitter);
    }
    out.values.resize(n * n);

    if (!options.include_nonlinear) {
        kernels::fill_matrix(n, n, [&](std::size_t i, std::size_t j) { return linear[i] * linear[j]; }, out.values,
                             options.exec);
        return out;
    }

    const UniformTable g = nonlinear_g_table(profile, emitter, r, out.grid, options.exec);
    const std::complex<double> half_pref = 0.5 * nonlinear_prefactor(emitter);
    const auto& k = out.grid.points;
    kernels::fill_matrix(
        n, n,
        [&](std::size_t i, std::size_t j) {
            return linear[i] * linear[j] + half_pref * pole[i] * pole[j] * g(k[i] + k[j]);
        },
        out.values, options.exec);
    return out;
}

Integral<double> two_photon_norm(const SpectralProfile& profile, const EmitterParams& emitter,
                                 const QuadratureSpec& quad, kernels::ExecPolicy exec) {
    emitter.validate();
    const QuadratureSpec resolved = resolve(quad, profile);
    const auto pref = nonlinear_prefactor(emitter);
    const double a = emitter.gamma_wg + emitter.gamma_loss;
    const double s_scale = 4.0 * emitter.gamma_wg * emitter.gamma_wg * 2.0 * std::numbers::pi / a;
    const auto xi = [&](double q) { return profile.amplitude(q); };
    const auto v = [&](double q) { return std::conj(transmission(q, emitter) * profile.amplitude(q)) * s_pole(q, emitter); };

    auto estimate = [&](int level) {
        const int n = resolved.nodes << level;
        const NodeSet k_nodes = make_nodes(resolved, n);
        const int sum_count =
            resolved.domain == Domain::window && resolved.rule == Rule::trapezoid ? 2 * n - 1 : 2 * n;
        const NodeSet sum_nodes = make_nodes(resolved, sum_count, 2.0);
        std::vector<std::complex<double>> g_left(k_nodes.size()), v_left(k_nodes.size());
        double linear = 0.0;
        for (std::size_t i = 0; i < k_nodes.size(); ++i) {
            const double k = k_nodes.points[i];
            g_left[i] = k_nodes.weights[i] * profile.amplitude(k) * s_pole(k, emitter);
            v_left[i] = k_nodes.weights[i] * v(k);
            linear += k_nodes.weights[i] * std::norm(transmission(k, emitter)) * profile.intensity(k);
        }
        std::vector<std::complex<double>> g(sum_nodes.size()), j(sum_nodes.size());
        kernels::pair_convolution(sum_nodes.points, k_nodes.points, g_left, xi, g, exec);
        kernels::pair_convolution(sum_nodes.points, k_nodes.points, v_left, v, j, exec);
        std::complex<double> cross{0.0, 0.0};
        double bound = 0.0;
        for (std::size_t m = 0; m < sum_nodes.size(); ++m) {
            const double K = sum_nodes.points[m] - 2.0 * emitter.delta;
            const double w = sum_nodes.weights[m];
            cross += w * g[m] * j[m];
            bound += w * std::norm(g[m]) * s_scale / (K * K + 4.0 * a * a);
        }
        return std::complex<double>(linear * linear + (pref * cross).real() + 0.25 * std::norm(pref) * bound, 0.0);
    };
    const auto r = refine(estimate, resolved, "two-photon norm");
    return {r.value.real(), r.report};
}

} // namespace cphase
