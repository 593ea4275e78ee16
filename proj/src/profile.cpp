#include "cphase/profile.hpp"

#include "cphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cphase {

namespace {

constexpr double kPi = std::numbers::pi;

double half_maximum_width(const std::vector<double>& k, const std::vector<double>& intensity) {
    const auto peak_it = std::max_element(intensity.begin(), intensity.end());
    const double half = *peak_it / 2.0;
    const auto peak = static_cast<std::size_t>(peak_it - intensity.begin());
    double left = k.front();
    for (std::size_t i = peak; i > 0; --i) {
        if (intensity[i - 1] <= half) {
            const double f = (half - intensity[i - 1]) / (intensity[i] - intensity[i - 1]);
            left = k[i - 1] + f * (k[i] - k[i - 1]);
            break;
        }
    }
    double right = k.back();
    for (std::size_t i = peak; i + 1 < k.size(); ++i) {
        if (intensity[i + 1] <= half) {
            const double f = (intensity[i] - half) / (intensity[i] - intensity[i + 1]);
            right = k[i] + f * (k[i + 1] - k[i]);
            break;
        }
    }
    return right - left;
}

} // namespace

std::string_view to_string(Shape shape) {
    switch (shape) {
    case Shape::gaussian: return "gaussian";
    case Shape::lorentzian: return "lorentzian";
    case Shape::sech: return "sech";
    case Shape::tabulated: return "tabulated";
    }
    return "unknown";
}

std::string_view to_string(LorentzianForm form) {
    return form == LorentzianForm::complex_pole ? "complex_pole" : "real_sqrt";
}

Shape parse_shape(std::string_view name) {
    if (name == "gaussian") return Shape::gaussian;
    if (name == "lorentzian") return Shape::lorentzian;
    if (name == "sech") return Shape::sech;
    if (name == "tabulated") return Shape::tabulated;
    throw ParameterError("unknown pulse shape '" + std::string(name) + "'");
}

LorentzianForm parse_lorentzian_form(std::string_view name) {
    if (name == "complex_pole") return LorentzianForm::complex_pole;
    if (name == "real_sqrt") return LorentzianForm::real_sqrt;
    throw ParameterError("unknown Lorentzian form '" + std::string(name) + "'");
}

double gaussian_sigma_prime(double sigma) { return sigma / (2.0 * std::sqrt(std::log(2.0))); }

double sech_k0(double sigma) { return sigma / (2.0 * std::acosh(std::sqrt(2.0))); }

SpectralProfile make_profile(Shape shape, double sigma, const ProfileOptions& options) {
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ParameterError("spectral width sigma must be positive and finite");
    if (!std::isfinite(options.carrier_offset))
        throw ParameterError("carrier offset must be finite");

    SpectralProfile p;
    p.shape_ = shape;
    p.sigma_ = sigma;
    p.carrier_offset_ = options.carrier_offset;
    p.lorentzian_ = options.lorentzian;
    switch (shape) {
    case Shape::gaussian:
        p.scale_ = gaussian_sigma_prime(sigma);
        p.norm_ = std::pow(kPi * p.scale_ * p.scale_, -0.25);
        break;
    case Shape::sech:
        p.scale_ = sech_k0(sigma);
        p.norm_ = 1.0 / std::sqrt(2.0 * p.scale_);
        break;
    case Shape::lorentzian:
        p.scale_ = sigma / 2.0;
        p.norm_ = std::sqrt(sigma / (2.0 * kPi));
        break;
    case Shape::tabulated:
        throw ParameterError("tabulated profiles are built with SpectralProfile::tabulated");
    }
    return p;
}

SpectralProfile SpectralProfile::tabulated(std::vector<double> k, std::vector<std::complex<double>> values,
                                           double carrier_offset) {
    if (k.size() < 2 || k.size() != values.size())
        throw ParameterError("tabulated profile needs >= 2 samples and matching sizes");
    for (std::size_t i = 0; i + 1 < k.size(); ++i)
        if (!(k[i + 1] > k[i])) throw ParameterError("tabulated grid must be strictly increasing");
    for (const auto& v : values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ParameterError("tabulated amplitudes must be finite");

    // Exact norm of the piecewise-linear interpolant.
    double norm2 = 0.0;
    for (std::size_t i = 0; i + 1 < k.size(); ++i) {
        const auto a = values[i];
        const auto b = values[i + 1];
        norm2 += (k[i + 1] - k[i]) * (std::norm(a) + std::real(a * std::conj(b)) + std::norm(b)) / 3.0;
    }
    if (!(norm2 > 0.0)) throw ParameterError("tabulated profile has zero norm");
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& v : values) v *= scale;

    std::vector<double> intensity(values.size());
    std::transform(values.begin(), values.end(), intensity.begin(), [](auto v) { return std::norm(v); });

    SpectralProfile p;
    p.shape_ = Shape::tabulated;
    p.carrier_offset_ = carrier_offset;
    p.sigma_ = half_maximum_width(k, intensity);
    p.scale_ = (k.back() - k.front()) / 2.0;
    p.table_ = std::make_shared<const Table>(Table{std::move(k), std::move(values)});
    return p;
}

std::complex<double> SpectralProfile::analytic_amplitude(double q) const {
    switch (shape_) {
    case Shape::gaussian: return {norm_ * std::exp(-q * q / (2.0 * scale_ * scale_)), 0.0};
    case Shape::sech: return {norm_ / std::cosh(q / scale_), 0.0};
    case Shape::lorentzian: {
        const std::complex<double> pole{q, scale_};
        if (lorentzian_ == LorentzianForm::complex_pole) return norm_ / pole;
        return {norm_ / std::abs(pole), 0.0};
    }
    case Shape::tabulated: break;
    }
    return {0.0, 0.0};
}

std::complex<double> SpectralProfile::table_amplitude(double q) const {
    const auto& k = table_->k;
    if (q < k.front() || q > k.back()) return {0.0, 0.0};
    auto it = std::upper_bound(k.begin(), k.end(), q);
    if (it == k.end()) return table_->values.back();
    const auto hi = static_cast<std::size_t>(it - k.begin());
    const auto lo = hi - 1;
    const double f = (q - k[lo]) / (k[hi] - k[lo]);
    return (1.0 - f) * table_->values[lo] + f * table_->values[hi];
}

std::complex<double> SpectralProfile::amplitude(double k) const {
    const double q = k - carrier_offset_;
    return shape_ == Shape::tabulated ? table_amplitude(q) : analytic_amplitude(q);
}

std::optional<std::complex<double>> SpectralProfile::intensity_transform(double L) const {
    double value = 0.0;
    switch (shape_) {
    case Shape::gaussian: value = std::exp(-scale_ * scale_ * L * L / 4.0); break;
    case Shape::sech: {
        const double x = kPi * scale_ * L / 2.0;
        value = std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : x / std::sinh(x);
        break;
    }
    case Shape::lorentzian: value = std::exp(-scale_ * std::abs(L)); break;
    case Shape::tabulated: return std::nullopt;
    }
    return value * std::polar(1.0, -carrier_offset_ * L);
}

double SpectralProfile::width_scale() const { return scale_; }

double SpectralProfile::default_window() const {
    double w = 8.0;
    switch (shape_) {
    case Shape::gaussian: w = std::max(8.0 * scale_, 8.0); break;
    case Shape::sech: w = std::max(16.0 * scale_, 8.0); break;
    case Shape::lorentzian: w = std::max(8.0 * scale_, 8.0); break;
    case Shape::tabulated:
        w = std::max({std::abs(table_->k.front()), std::abs(table_->k.back()), 8.0});
        break;
    }
    return w + std::abs(carrier_offset_);
}

std::string SpectralProfile::describe() const {
    std::ostringstream os;
    os << to_string(shape_) << "(sigma=" << sigma_;
    if (shape_ == Shape::lorentzian) os << ", form=" << to_string(lorentzian_);
    if (shape_ == Shape::tabulated) os << ", samples=" << table_->k.size();
    if (carrier_offset_ != 0.0) os << ", offset=" << carrier_offset_;
    os << ")";
    return os.str();
}

} // namespace cphase
