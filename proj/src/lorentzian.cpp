#include "cphase/lorentzian.hpp"

#include "cphase/errors.hpp"

#include <array>
#include <cmath>

namespace cphase {

namespace {

using cplx = std::complex<double>;
using Mat3 = std::array<std::array<cplx, 3>, 3>;

constexpr cplx kI{0.0, 1.0};
constexpr double kPi = 3.14159265358979323846;

struct Poles {
    double a2;  // |xi| normalization squared, sigma / 2 pi
    double b;   // sqrt(2 Gamma~)
    cplx lower; // pulse pole c0 - i sigma/2
    cplx upper; // c0 + i sigma/2
    cplx e;     // emitter pole delta - i(Gamma~ + gamma~)
};

Poles poles_of(const SpectralProfile& p, const EmitterParams& em) {
    if (p.shape() != Shape::lorentzian) throw ContractError("closed forms apply to Lorentzian pulses only");
    const double q = 0.5 * p.sigma();
    const double c0 = p.carrier_offset();
    return {p.sigma() / (2.0 * kPi), std::sqrt(2.0 * em.gamma_wg), {c0, -q}, {c0, q},
            {em.delta, -(em.gamma_wg + em.gamma_loss)}};
}

void require_complex_pole(const SpectralProfile& p) {
    if (p.lorentzian_form() != LorentzianForm::complex_pole)
        throw ContractError("the bound-state closed form needs the complex_pole Lorentzian");
}

Mat3 multiply(const Mat3& x, const Mat3& y) {
    Mat3 out{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) out[i][j] += x[i][k] * y[k][j];
    return out;
}

// Scaling and squaring with a truncated Taylor series.
Mat3 expm(Mat3 m) {
    double norm = 0.0;
    for (const auto& row : m) norm = std::max(norm, std::abs(row[0]) + std::abs(row[1]) + std::abs(row[2]));
    int squarings = 0;
    while (norm > 0.25) {
        norm /= 2.0;
        ++squarings;
    }
    const double scale = std::ldexp(1.0, -squarings);
    for (auto& row : m)
        for (auto& v : row) v *= scale;
    Mat3 result{};
    Mat3 term{};
    for (int i = 0; i < 3; ++i) result[i][i] = term[i][i] = 1.0;
    for (int n = 1; n <= 20; ++n) {
        term = multiply(term, m);
        for (auto& row : term)
            for (auto& v : row) v /= static_cast<double>(n);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) result[i][j] += term[i][j];
    }
    for (int s = 0; s < squarings; ++s) result = multiply(result, result);
    return result;
}

// Divided difference f[z0, z1, z2] of f(K) = e^{-iKL} / (K - u), valid for
// coincident nodes: it is the corner entry of f applied to the bidiagonal
// matrix with the nodes on its diagonal.
cplx divided_difference(const std::array<cplx, 3>& z, cplx u, double L) {
    Mat3 j{};
    for (int i = 0; i < 3; ++i) j[i][i] = -kI * L * z[i];
    j[0][1] = j[1][2] = -kI * L;
    const Mat3 e = expm(j);
    // (J - u)^{-1} for the unscaled bidiagonal J.
    const cplx d0 = z[0] - u, d1 = z[1] - u, d2 = z[2] - u;
    const cplx inv02 = 1.0 / (d0 * d1 * d2);
    const cplx inv12 = -1.0 / (d1 * d2);
    const cplx inv22 = 1.0 / d2;
    return e[0][0] * inv02 + e[0][1] * inv12 + e[0][2] * inv22;
}

} // namespace

std::complex<double> lorentzian_linear_amplitude(const SpectralProfile& profile, const EmitterParams& emitter,
                                                 double L) {
    const Poles p = poles_of(profile, emitter);
    // |xi|^2 (t - 1) = C / ((k - lower)(k - upper)(k - e))
    const cplx C = p.a2 * (-2.0 * kI * emitter.gamma_wg);
    cplx rest;
    if (L < 0.0) {
        rest = 2.0 * kPi * kI * C * std::exp(-kI * p.upper * L) / ((p.upper - p.lower) * (p.upper - p.e));
    } else {
        // Divided difference of e^{-ikL}/(k - upper) over the two lower poles,
        // arranged to stay accurate when they coincide.
        const cplx d = p.lower - p.e;
        const cplx m = 0.5 * (p.lower + p.e);
        const cplx w1 = 1.0 / (p.lower - p.upper);
        const cplx w2 = 1.0 / (p.e - p.upper);
        const cplx z = 0.5 * d * L;
        const cplx sinc = std::abs(z) > 1e-4 ? std::sin(z) / z : 1.0 - z * z / 6.0;
        const cplx exp_diff = -kI * L * std::exp(-kI * m * L) * sinc;
        rest = -2.0 * kPi * kI * C * (std::exp(-kI * p.lower * L) * (-w1 * w2) + w2 * exp_diff);
    }
    return *profile.intensity_transform(L) + rest;
}

std::complex<double> lorentzian_g(double K, const SpectralProfile& profile, const EmitterParams& emitter) {
    require_complex_pole(profile);
    const Poles p = poles_of(profile, emitter);
    return -2.0 * kPi * kI * p.a2 * p.b / ((K - 2.0 * p.lower) * (K - p.lower - p.e));
}

std::complex<double> lorentzian_h(double K, const SpectralProfile& profile, const EmitterParams& emitter) {
    require_complex_pole(profile);
    const Poles p = poles_of(profile, emitter);
    return 4.0 * kPi * kI * p.a2 * p.b * p.b / ((p.upper - p.e) * (K - 2.0 * p.upper) * (K - 2.0 * p.e));
}

std::complex<double> lorentzian_bound_state_term(const SpectralProfile& profile, const EmitterParams& emitter,
                                                 double L) {
    require_complex_pole(profile);
    const Poles p = poles_of(profile, emitter);
    // g H = M / ((K - 2 lower)(K - lower - e)(K - 2 e)(K - 2 upper))
    const cplx M = 8.0 * kPi * kPi * p.a2 * p.a2 * p.b * p.b * p.b / (p.upper - p.e);
    const cplx pref = nonlinear_prefactor(emitter);
    const std::array<cplx, 3> lower{2.0 * p.lower, p.lower + p.e, 2.0 * p.e};
    const cplx top = 2.0 * p.upper;
    if (L < 0.0) {
        const cplx denom = (top - lower[0]) * (top - lower[1]) * (top - lower[2]);
        return pref * M * 2.0 * kPi * kI * std::exp(-kI * top * L) / denom;
    }
    return pref * M * (-2.0 * kPi * kI) * divided_difference(lower, top, L);
}

} // namespace cphase
