#include "oracles/frozen_values.hpp"

#include "cphase/errors.hpp"
#include "cphase/profile.hpp"
#include "cphase/quadrature.hpp"
#include "cphase/units.hpp"

#include <doctest.h>

#include <cmath>

using namespace cphase;
using namespace cphase::units;

namespace {
double norm_of(const SpectralProfile& p) {
    QuadratureSpec q;
    q.rel_tol = 1e-10;
    return integrate_1d([&](double k) { return std::complex<double>(p.intensity(k), 0.0); }, resolve(q, p))
        .value.real();
}
} // namespace

TEST_CASE("unit conversions are the identity in natural units") {
    CHECK(reduced_rate(1.0, 1.0) == 1.0);
    CHECK(momentum_to_internal(1.72, 1.0, 1.0) == 1.72);
    CHECK(length_to_internal(0.8, 1.0, 1.0) == 0.8);
    CHECK(momentum_from_internal(momentum_to_internal(2.5, 3.0, 1.5), 3.0, 1.5) == doctest::Approx(2.5));
}

TEST_CASE("gaussian amplitude at the origin") {
    const auto p = make_profile(Shape::gaussian, 1.0);
    CHECK(std::abs(p.amplitude(0.0) - frozen::kXi0GaussSigma1) < 1e-14);
    CHECK(gaussian_sigma_prime(1.0) == doctest::Approx(0.6005612).epsilon(1e-6));
    CHECK(std::abs(p.amplitude(60.0)) < 1e-300);
    CHECK(std::abs(p.amplitude(-60.0)) < 1e-300);
}

TEST_CASE("lorentzian complex pole amplitude at the origin") {
    const auto p = make_profile(Shape::lorentzian, 1.0);
    const std::complex<double> expected{0.0, -2.0 / std::sqrt(2.0 * M_PI)};
    CHECK(std::abs(p.amplitude(0.0) - expected) < 1e-15);
    CHECK(p.amplitude(0.0).imag() == doctest::Approx(-0.7978845608));
    const auto r = make_profile(Shape::lorentzian, 1.0, {LorentzianForm::real_sqrt, 0.0});
    CHECK(std::abs(r.amplitude(0.0)) == doctest::Approx(std::abs(expected)));
    CHECK(r.amplitude(0.3).imag() == 0.0);
}

TEST_CASE("half maximum sits at k = +-sigma/2 for the analytic shapes") {
    for (Shape shape : {Shape::gaussian, Shape::sech, Shape::lorentzian}) {
        for (double sigma : {0.3, 1.0, 2.2}) {
            const auto p = make_profile(shape, sigma);
            CAPTURE(to_string(shape));
            CAPTURE(sigma);
            CHECK(p.intensity(sigma / 2) == doctest::Approx(0.5 * p.intensity(0.0)).epsilon(1e-12));
            CHECK(p.intensity(-sigma / 2) == doctest::Approx(0.5 * p.intensity(0.0)).epsilon(1e-12));
        }
    }
    const auto sech = make_profile(Shape::sech, 1.0);
    CHECK(sech.intensity(0.5) == doctest::Approx(0.5 * sech.intensity(0.0)).epsilon(1e-13));
}

TEST_CASE("normalization across shapes and widths") {
    for (Shape shape : {Shape::gaussian, Shape::sech, Shape::lorentzian}) {
        for (double sigma : {0.05, 0.3, 1.0, 1.72, 3.0, 5.0}) {
            CAPTURE(to_string(shape));
            CAPTURE(sigma);
            CHECK(std::abs(norm_of(make_profile(shape, sigma)) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("amplitude magnitude is symmetric") {
    for (Shape shape : {Shape::gaussian, Shape::sech, Shape::lorentzian}) {
        const auto p = make_profile(shape, 1.3);
        for (double k : {0.1, 0.7, 2.0, 9.0}) CHECK(std::abs(p.amplitude(k)) == doctest::Approx(std::abs(p.amplitude(-k))));
    }
}

TEST_CASE("intensity transforms match quadrature") {
    QuadratureSpec q;
    q.rel_tol = 1e-11;
    for (Shape shape : {Shape::gaussian, Shape::sech}) {
        for (double sigma : {0.1, 1.0, 1.72, 3.0}) {
            for (double L : {0.0, 0.8, 2.0, 5.0}) {
                const auto p = make_profile(shape, sigma);
                const auto numeric = integrate_1d(
                    [&](double k) { return p.intensity(k) * std::polar(1.0, -k * L); }, resolve(q, p));
                CAPTURE(to_string(shape));
                CAPTURE(sigma);
                CAPTURE(L);
                CHECK(std::abs(numeric.value - *p.intensity_transform(L)) < 1e-8);
            }
        }
    }
    const auto g = make_profile(Shape::gaussian, 1.0);
    CHECK(std::abs(*g.intensity_transform(2.0) - frozen::kGaussFourierSigma1L2) < 1e-14);
    const auto s = make_profile(Shape::sech, 1.72);
    CHECK(std::abs(*s.intensity_transform(0.8) - frozen::kSechTransformSigma172L080) < 1e-13);
}

TEST_CASE("carrier offset shifts the amplitude") {
    const auto base = make_profile(Shape::gaussian, 1.0);
    const auto shifted = make_profile(Shape::gaussian, 1.0, {LorentzianForm::complex_pole, 0.4});
    CHECK(std::abs(shifted.amplitude(0.4 + 0.3) - base.amplitude(0.3)) < 1e-15);
    CHECK(shifted.amplitude(0.4) == base.amplitude(0.0));
    CHECK(std::abs(*shifted.intensity_transform(1.0) - *base.intensity_transform(1.0) * std::polar(1.0, -0.4)) <
          1e-15);
}

TEST_CASE("tabulated profiles interpolate, renormalize and vanish outside") {
    std::vector<double> k;
    std::vector<std::complex<double>> v;
    for (int i = 0; i <= 400; ++i) {
        const double x = -6.0 + 12.0 * i / 400.0;
        k.push_back(x);
        v.emplace_back(3.0 * std::exp(-x * x / 2.0), 0.0);
    }
    const auto p = SpectralProfile::tabulated(k, v);
    CHECK(p.shape() == Shape::tabulated);
    CHECK(p.amplitude(7.0) == std::complex<double>{});
    CHECK(p.amplitude(-6.5) == std::complex<double>{});
    // midpoint of a segment is the mean of its ends
    const double mid = 0.5 * (k[200] + k[201]);
    CHECK(std::abs(p.amplitude(mid) - 0.5 * (p.amplitude(k[200]) + p.amplitude(k[201]))) < 1e-14);
    QuadratureSpec q;
    q.domain = Domain::window;
    q.window_halfwidth = 6.0;
    q.nodes = 401;
    q.rel_tol = 1e-6;
    q.max_refinements = 8;
    const auto n = integrate_1d([&](double x) { return std::complex<double>(p.intensity(x), 0.0); }, q);
    CHECK(n.value.real() == doctest::Approx(1.0).epsilon(1e-5));
    // FWHM of exp(-x^2) intensity is 2 sqrt(ln 2)
    CHECK(p.sigma() == doctest::Approx(2.0 * std::sqrt(std::log(2.0))).epsilon(1e-3));
    CHECK_FALSE(p.intensity_transform(1.0).has_value());
}

TEST_CASE("profile parameter errors") {
    CHECK_THROWS_AS(make_profile(Shape::gaussian, 0.0), ParameterError);
    CHECK_THROWS_AS(make_profile(Shape::sech, -1.0), ParameterError);
    CHECK_THROWS_AS(make_profile(Shape::tabulated, 1.0), ParameterError);
    CHECK_THROWS_AS(parse_shape("square"), ParameterError);
    CHECK(parse_shape("sech") == Shape::sech);
    CHECK_THROWS_AS(SpectralProfile::tabulated({0.0, 0.0}, {1.0, 1.0}), ParameterError);
    CHECK_THROWS_AS(SpectralProfile::tabulated({0.0, 1.0}, {1.0}), ParameterError);
}
