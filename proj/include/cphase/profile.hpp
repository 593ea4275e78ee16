#pragma once

#include <complex>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cphase {

enum class Shape { gaussian, lorentzian, sech, tabulated };

/// Amplitude convention used for the Lorentzian shape. Both carry the same
/// intensity; they differ only in spectral phase.
enum class LorentzianForm {
    complex_pole, ///< sqrt(sigma/2pi) / (k + i sigma/2): one-sided exponential in time
    real_sqrt,    ///< |.| of the above: a real, time-symmetric pulse
};

std::string_view to_string(Shape shape);
std::string_view to_string(LorentzianForm form);
Shape parse_shape(std::string_view name);
LorentzianForm parse_lorentzian_form(std::string_view name);

struct ProfileOptions {
    LorentzianForm lorentzian = LorentzianForm::complex_pole;
    double carrier_offset = 0.0;
};

/// Normalized single-photon spectral amplitude xi(k).
///
/// Immutable after construction; copies share the (read-only) table of a
/// tabulated profile. sigma is the intensity FWHM in Gamma/v_g units for the
/// analytic shapes and the measured FWHM of |xi|^2 for tabulated input.
class SpectralProfile {
public:
    /// Samples on a strictly increasing grid; linearly interpolated inside,
    /// zero outside. The interpolant is rescaled to unit norm.
    static SpectralProfile tabulated(std::vector<double> k, std::vector<std::complex<double>> values,
                                     double carrier_offset = 0.0);

    Shape shape() const { return shape_; }
    double sigma() const { return sigma_; }
    double carrier_offset() const { return carrier_offset_; }
    LorentzianForm lorentzian_form() const { return lorentzian_; }

    std::complex<double> amplitude(double k) const;
    double intensity(double k) const { return std::norm(amplitude(k)); }

    /// Closed form of  integral |xi(k)|^2 exp(-i k L) dk  when the shape has one.
    std::optional<std::complex<double>> intensity_transform(double L) const;

    /// Characteristic decay length of |xi| in momentum: sigma' for the Gaussian,
    /// k0 for sech, sigma/2 for the Lorentzian, half the table extent otherwise.
    double width_scale() const;

    /// True if |xi|^2 decays algebraically, so finite windows lose mass.
    bool heavy_tailed() const { return shape_ == Shape::lorentzian; }

    /// Smallest symmetric window that holds the pulse to well below 1e-12 of
    /// its norm and covers the emitter scale (half-width >= 8).
    double default_window() const;

    /// Short text description used in provenance metadata.
    std::string describe() const;

private:
    struct Table {
        std::vector<double> k;
        std::vector<std::complex<double>> values;
    };

    SpectralProfile() = default;
    friend SpectralProfile make_profile(Shape, double, const ProfileOptions&);

    std::complex<double> analytic_amplitude(double q) const;
    std::complex<double> table_amplitude(double q) const;

    Shape shape_ = Shape::gaussian;
    double sigma_ = 1.0;
    double carrier_offset_ = 0.0;
    LorentzianForm lorentzian_ = LorentzianForm::complex_pole;
    double scale_ = 1.0; // sigma', k0 or sigma/2
    double norm_ = 1.0;  // prefactor of the analytic amplitude
    std::shared_ptr<const Table> table_;
};

/// Builds an analytic profile with intensity FWHM sigma.
/// Throws ParameterError for sigma <= 0 or Shape::tabulated.
SpectralProfile make_profile(Shape shape, double sigma, const ProfileOptions& options = {});

inline std::complex<double> amplitude(const SpectralProfile& profile, double k) { return profile.amplitude(k); }

/// sigma' of the Gaussian exp(-k^2 / (2 sigma'^2)) whose intensity FWHM is sigma.
double gaussian_sigma_prime(double sigma);

/// k0 of the sech(k/k0) amplitude whose intensity FWHM is sigma.
double sech_k0(double sigma);

} // namespace cphase
