#include "oracles/frozen_values.hpp"

#include "cphase/errors.hpp"
#include "cphase/profile.hpp"
#include "cphase/quadrature.hpp"
#include "cphase/scattering.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cphase;
using cplx = std::complex<double>;

namespace {
const cplx I{0.0, 1.0};

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }
} // namespace

TEST_CASE("transmission coefficient") {
    const EmitterParams e;
    CHECK(close(transmission(0.0, e), -1.0, 1e-15));
    CHECK(close(transmission(1.0, e), -I, 1e-15));
    CHECK(close(transmission(0.0, EmitterParams{0.0, 1.0, 1.0}), 0.0, 1e-15));
    for (double k = -20.0; k <= 20.0; k += 0.37) {
        CHECK(std::abs(std::abs(transmission(k, e)) - 1.0) < 1e-12);
        CHECK(std::abs(transmission(k, EmitterParams{0.2, 1.0, 0.3})) < 1.0);
    }
}

TEST_CASE("phase of the lossless transmission") {
    const EmitterParams e;
    CHECK(phase_theta(0.0, e) == doctest::Approx(M_PI));
    CHECK(phase_theta(1.0, e) == doctest::Approx(1.5 * M_PI));
    const double k = 0.01;
    CHECK(std::abs(phase_theta(k, e) - (M_PI + 2 * k) - (-2.0 / 3.0 * k * k * k)) < 1e-9);
    // closed form against the arg of t(k), unwrapped by continuity from k = 0
    double unwrapped = M_PI;
    double previous = std::arg(transmission(0.0, e));
    for (int i = 1; i <= 4000; ++i) {
        const double kk = i * 0.005;
        const double a = std::arg(transmission(kk, e));
        double d = a - previous;
        while (d > M_PI) d -= 2 * M_PI;
        while (d < -M_PI) d += 2 * M_PI;
        unwrapped += d;
        previous = a;
        CHECK(std::abs(unwrapped - phase_theta(kk, e)) < 1e-9);
    }
    CHECK_THROWS_AS(phase_theta(0.0, EmitterParams{0.0, 1.0, 0.1}), ContractError);
}

TEST_CASE("s pole") {
    const EmitterParams e;
    CHECK(close(s_pole(0.0, e), -I * std::sqrt(2.0), 1e-15));
    CHECK(close(s_pole(1.0, e), (1.0 - I) / std::sqrt(2.0), 1e-15));
    CHECK(std::abs(s_pole(1e8, e)) < 1e-7);
}

TEST_CASE("bound-state kernel") {
    const EmitterParams e;
    CHECK(close(bound_state_kernel(0, 0, 0, 0, e), frozen::kB0000, 1e-14));
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 20; ++i) {
        const double k = u(rng), k2 = u(rng), p = u(rng), p2 = u(rng);
        const cplx b = bound_state_kernel(k, k2, p, p2, e);
        CHECK(close(b, bound_state_kernel(k2, k, p, p2, e), 1e-14));
        CHECK(close(b, bound_state_kernel(k, k2, p2, p, e), 1e-14));
        // reflecting every momentum conjugates the kernel (resonant, lossless)
        CHECK(close(bound_state_kernel(-k, -k2, -p, -p2, e), std::conj(b), 1e-13));
    }
}

TEST_CASE("g(K) against the symmetric brute-force form") {
    const auto p = make_profile(Shape::gaussian, 1.72);
    const EmitterParams e;
    QuadratureSpec q;
    const auto r = resolve(q, p);
    const auto g0 = nonlinear_g(0.0, p, e, q);
    CHECK(close(g0.value, cplx(frozen::kG0Sigma172Re, frozen::kG0Sigma172Im), 1e-9));

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-6, 6);
    for (int i = 0; i < 20; ++i) {
        const double K = u(rng);
        const auto g = nonlinear_g(K, p, e, q);
        const auto brute = integrate_1d(
            [&](double x) {
                return p.amplitude(x) * p.amplitude(K - x) * (s_pole(x, e) + s_pole(K - x, e)) * 0.5;
            },
            r);
        CAPTURE(K);
        CHECK(std::abs(g.value - brute.value) <= q.rel_tol * std::max(std::abs(brute.value), 1e-3));
    }
    CHECK(std::abs(nonlinear_g(60.0, p, e, q).value) < 1e-12);
}

TEST_CASE("factorized b equals direct integration of the kernel") {
    const auto p = make_profile(Shape::gaussian, 1.3);
    const EmitterParams e{0.2, 1.0, 0.0};
    QuadratureSpec q;
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int i = 0; i < 50; ++i) {
        const double k = u(rng), k2 = u(rng);
        const auto direct = nonlinear_b(k, k2, p, e, q);
        const auto g = nonlinear_g(k + k2, p, e, q);
        const cplx factored = nonlinear_prefactor(e) * s_pole(k, e) * s_pole(k2, e) * g.value;
        CHECK(std::abs(direct.value - factored) <= q.rel_tol * std::max(std::abs(direct.value), 1e-3));
    }
}

TEST_CASE("single-photon scattering") {
    QuadratureSpec q;
    q.rel_tol = 1e-9;
    const auto p = make_profile(Shape::gaussian, 1.0);
    const auto out = single_photon_scatter(p, EmitterParams{});
    const auto n = integrate_1d([&](double k) { return cplx(std::norm(out(k)), 0.0); }, resolve(q, p));
    CHECK(std::abs(n.value - 1.0) < 1e-8);

    const auto narrow = make_profile(Shape::gaussian, 0.05);
    const auto lossy = single_photon_scatter(narrow, EmitterParams{0.0, 1.0, 1.0});
    const auto extinct = integrate_1d([&](double k) { return cplx(std::norm(lossy(k)), 0.0); }, resolve(q, narrow));
    CHECK(extinct.value.real() < 0.05);

    // emitter removed: output equals input
    const auto same = [&](double k) { return p.amplitude(k) * 1.0; };
    CHECK(same(0.4) == p.amplitude(0.4));
}

TEST_CASE("detuning is a translation") {
    const double d0 = 0.7;
    const EmitterParams moved{d0, 1.0, 0.2};
    const EmitterParams base{0.0, 1.0, 0.2};
    for (double k : {-2.0, 0.0, 0.5, 3.0}) {
        CHECK(close(transmission(k + d0, moved), transmission(k, base), 1e-15));
        CHECK(close(s_pole(k + d0, moved), s_pole(k, base), 1e-15));
    }
}

TEST_CASE("two-photon amplitude: symmetry, linear limit, norm") {
    const auto p = make_profile(Shape::gaussian, 1.72);
    const EmitterParams e;
    QuadratureSpec q;
    q.nodes = 129;
    const auto beta = two_photon_scatter(p, e, q);
    double asym = 0.0;
    for (std::size_t i = 0; i < beta.n(); ++i)
        for (std::size_t j = 0; j < beta.n(); ++j) asym = std::max(asym, std::abs(beta.at(i, j) - beta.at(j, i)));
    CHECK(asym < 1e-12);

    TwoPhotonOptions linear;
    linear.include_nonlinear = false;
    const auto lin = two_photon_scatter(p, e, q, linear);
    const auto t = single_photon_scatter(p, e);
    double worst = 0.0;
    for (std::size_t i = 0; i < lin.n(); i += 7)
        for (std::size_t j = 0; j < lin.n(); j += 5)
            worst = std::max(worst, std::abs(lin.at(i, j) - t(lin.grid.points[i]) * t(lin.grid.points[j])));
    CHECK(worst < 1e-15);
    CHECK(std::abs(lin.norm() - 1.0) < 1e-8);
}

TEST_CASE("two-photon norm is conserved without loss") {
    const EmitterParams e;
    for (double sigma : {0.5, 1.0, 1.72, 2.2, 3.0}) {
        const auto p = make_profile(Shape::gaussian, sigma);
        QuadratureSpec q;
        q.rel_tol = 1e-9;
        const auto n = two_photon_norm(p, e, q);
        CAPTURE(sigma);
        CHECK(n.report.converged);
        CHECK(std::abs(n.value - 1.0) < 1e-4);
        CHECK(std::abs(n.value - 1.0) < 1e-10);
        // the 2D grid sum converges slowly through the anti-diagonal 1/k tails
        q.domain = Domain::real_line;
        q.nodes = 513;
        CHECK(std::abs(two_photon_scatter(p, e, q).norm() - n.value) < 2e-3);
    }
    for (const EmitterParams& other : {EmitterParams{0.3, 1.0, 0.0}, EmitterParams{0.0, 0.7, 0.0}}) {
        CHECK(std::abs(two_photon_norm(make_profile(Shape::sech, 1.5), other, QuadratureSpec{}).value - 1.0) < 1e-10);
    }
    CHECK(std::abs(two_photon_norm(make_profile(Shape::lorentzian, 1.5), e, QuadratureSpec{}).value - 1.0) < 1e-5);
    CHECK(two_photon_norm(make_profile(Shape::gaussian, 1.5), EmitterParams{0.0, 1.0, 0.2}, QuadratureSpec{}).value < 0.9);
}

TEST_CASE("emitter parameter validation") {
    CHECK_THROWS_AS((EmitterParams{0.0, 0.0, 0.0}).validate(), ParameterError);
    CHECK_THROWS_AS((EmitterParams{0.0, 1.0, -0.1}).validate(), ParameterError);
    CHECK_NOTHROW((EmitterParams{0.3, 1.0, 0.0}).validate());
}
