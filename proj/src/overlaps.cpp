#include "cphase/overlaps.hpp"

#include "cphase/errors.hpp"
#include "cphase/lorentzian.hpp"

#include <algorithm>
#include <cmath>

namespace cphase {

namespace {
std::complex<double> phase(double x) { return std::polar(1.0, x); }
} // namespace

std::function<std::complex<double>(double)> ideal_zero_amplitude(const SpectralProfile& profile, double L) {
    return [profile, L](double k) { return -profile.amplitude(k) * phase(k * L); };
}

std::function<std::complex<double>(double, double)> two_photon_target(const SpectralProfile& profile, double L) {
    return [profile, L](double k, double k2) {
        return -profile.amplitude(k) * profile.amplitude(k2) * phase((k + k2) * L);
    };
}

TwoPhotonAmplitude sample_two_photon_target(const SpectralProfile& profile, double L, const NodeSet& grid,
                                            const QuadratureSpec& resolved) {
    TwoPhotonAmplitude out{grid, {}, profile, EmitterParams{}, resolved, L};
    const auto target = two_photon_target(profile, L);
    const std::size_t n = grid.size();
    out.values.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.values[i * n + j] = target(grid.points[i], grid.points[j]);
    return out;
}

Integral<std::complex<double>> single_overlap_with(const SpectralProfile& profile,
                                                   const std::function<std::complex<double>(double)>& t, double L,
                                                   const QuadratureSpec& quad) {
    const auto r = resolve(quad, profile);
    auto a = integrate_1d([&](double k) { return profile.intensity(k) * t(k) * phase(-k * L); }, r);
    a.value = -a.value;
    return a;
}

Integral<std::complex<double>> single_overlap(const SpectralProfile& profile, const EmitterParams& emitter, double L,
                                              const QuadratureSpec& quad) {
    emitter.validate();
    return OverlapEvaluator(profile, emitter, quad, kernels::ExecPolicy{1}).single(L);
}

Integral<std::complex<double>> two_overlap(const SpectralProfile& profile, const EmitterParams& emitter, double L,
                                           const QuadratureSpec& quad) {
    return OverlapEvaluator(profile, emitter, quad).two(L);
}

Integral<std::complex<double>> two_overlap_with(const SpectralProfile& profile,
                                                const std::function<std::complex<double>(double, double)>& beta,
                                                double L, const QuadratureSpec& quad) {
    const auto r = resolve(quad, profile);
    const auto target = two_photon_target(profile, L);
    return integrate_2d([&](double k, double k2) { return std::conj(target(k, k2)) * beta(k, k2); }, r);
}

std::complex<double> two_overlap_from_amplitude(const TwoPhotonAmplitude& beta, double L) {
    const auto target = sample_two_photon_target(beta.profile, L, beta.grid, beta.quad);
    return inner_product(target, beta);
}

OverlapEvaluator::OverlapEvaluator(SpectralProfile profile, EmitterParams emitter, const QuadratureSpec& quad,
                                   kernels::ExecPolicy exec)
    : profile_(std::move(profile)), emitter_(emitter), quad_(resolve(quad, profile_)), exec_(exec) {
    emitter_.validate();
    levels_.resize(static_cast<std::size_t>(quad_.max_refinements) + 1);
}

Integral<std::complex<double>> OverlapEvaluator::linear_amplitude(double L) const {
    if (profile_.shape() == Shape::lorentzian) {
        Integral<std::complex<double>> exact;
        exact.value = lorentzian_linear_amplitude(profile_, emitter_, L);
        exact.report = ConvergenceReport{0, 0, 0.0, true};
        return exact;
    }
    // The intensity transform carries the slowly decaying part of |xi|^2 when
    // it is known in closed form; what is left decays one power faster.
    if (const auto ft = profile_.intensity_transform(L)) {
        auto rest = integrate_1d(
            [&](double k) { return profile_.intensity(k) * (transmission(k, emitter_) - 1.0) * phase(-k * L); },
            quad_);
        rest.value += *ft;
        return rest;
    }
    return integrate_1d([&](double k) { return profile_.intensity(k) * transmission(k, emitter_) * phase(-k * L); },
                        quad_);
}

Integral<std::complex<double>> OverlapEvaluator::single(double L) const {
    auto a = linear_amplitude(L);
    a.value = -a.value;
    return a;
}

const OverlapEvaluator::Level& OverlapEvaluator::level(int index) const {
    std::lock_guard lock(mutex_);
    auto& slot = levels_.at(static_cast<std::size_t>(index));
    if (slot) return *slot;

    const int n = quad_.nodes << index;
    const NodeSet k_nodes = make_nodes(quad_, n);
    const int sum_count = quad_.domain == Domain::window && quad_.rule == Rule::trapezoid ? 2 * n - 1 : 2 * n;
    const NodeSet sum_nodes = make_nodes(quad_, sum_count, 2.0);

    std::vector<std::complex<double>> g_left(k_nodes.size()), h_left(k_nodes.size());
    for (std::size_t i = 0; i < k_nodes.size(); ++i) {
        const double k = k_nodes.points[i];
        const auto xi = profile_.amplitude(k);
        const auto s = s_pole(k, emitter_);
        g_left[i] = k_nodes.weights[i] * xi * s;
        h_left[i] = k_nodes.weights[i] * std::conj(xi) * s;
    }
    const auto xi = [this](double q) { return profile_.amplitude(q); };
    const auto u = [this](double q) { return std::conj(profile_.amplitude(q)) * s_pole(q, emitter_); };

    std::vector<std::complex<double>> g(sum_nodes.size()), h(sum_nodes.size());
    kernels::pair_convolution(sum_nodes.points, k_nodes.points, g_left, xi, g, exec_);
    kernels::pair_convolution(sum_nodes.points, k_nodes.points, h_left, u, h, exec_);

    auto lvl = std::make_unique<Level>();
    lvl->sum_points = sum_nodes.points;
    lvl->weighted_gh.resize(sum_nodes.size());
    for (std::size_t m = 0; m < sum_nodes.size(); ++m) lvl->weighted_gh[m] = sum_nodes.weights[m] * g[m] * h[m];
    slot = std::move(lvl);
    return *slot;
}

std::complex<double> OverlapEvaluator::bound_state_term(const Level& lvl, double L) const {
    std::complex<double> sum{0.0, 0.0};
    for (std::size_t m = 0; m < lvl.sum_points.size(); ++m) sum += lvl.weighted_gh[m] * phase(-lvl.sum_points[m] * L);
    return nonlinear_prefactor(emitter_) * sum;
}

Integral<std::complex<double>> OverlapEvaluator::two(double L) const { return two_given(linear_amplitude(L), L); }

Integral<std::complex<double>> OverlapEvaluator::two_given(const Integral<std::complex<double>>& a, double L) const {
    Integral<std::complex<double>> c;
    if (profile_.shape() == Shape::lorentzian && profile_.lorentzian_form() == LorentzianForm::complex_pole) {
        c.value = lorentzian_bound_state_term(profile_, emitter_, L);
        c.report = ConvergenceReport{0, 0, 0.0, true};
    } else {
        c = refine([&](int idx) { return bound_state_term(level(idx), L); }, quad_, "bound-state overlap");
    }
    Integral<std::complex<double>> out;
    out.value = -(a.value * a.value + 0.5 * c.value);
    out.report.nodes = c.report.nodes;
    out.report.refinements = c.report.refinements;
    out.report.last_rel_change = std::max(a.report.last_rel_change, c.report.last_rel_change);
    out.report.converged = a.report.converged && c.report.converged;
    return out;
}

GateOverlaps OverlapEvaluator::evaluate(double L) const {
    GateOverlaps out;
    out.sigma = profile_.sigma();
    out.L = L;
    out.emitter = emitter_;
    const auto a = linear_amplitude(L);
    const auto t = two_given(a, L);
    auto o1 = a;
    o1.value = -a.value;
    out.O1 = o1.value;
    out.T = t.value;
    out.o1_report = o1.report;
    out.t_report = t.report;
    return out;
}

} // namespace cphase
