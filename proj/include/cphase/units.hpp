#pragma once

// Unit convention used throughout the library.
//
// Momenta are measured in units of the waveguide-coupled emitter rate
// Gamma/v_g, so the reduced rate Gamma~ = Gamma/v_g equals 1 for the default
// emitter. Lengths (the extra optical path L) are in v_g/Gamma, spectral widths
// sigma in Gamma/v_g. Every public parameter is therefore dimensionless and the
// helpers below are the identity for Gamma = v_g = 1; they exist so that callers
// holding dimensional values convert in exactly one place.

namespace cphase::units {

/// Reduced coupling rate Gamma/v_g for a dimensional (Gamma, v_g) pair.
constexpr double reduced_rate(double gamma, double group_velocity) { return gamma / group_velocity; }

/// Momentum (1/length) to internal units.
constexpr double momentum_to_internal(double k, double gamma, double group_velocity) {
    return k / reduced_rate(gamma, group_velocity);
}
constexpr double momentum_from_internal(double k, double gamma, double group_velocity) {
    return k * reduced_rate(gamma, group_velocity);
}

/// Length to internal units (multiples of v_g/Gamma).
constexpr double length_to_internal(double length, double gamma, double group_velocity) {
    return length * reduced_rate(gamma, group_velocity);
}
constexpr double length_from_internal(double length, double gamma, double group_velocity) {
    return length / reduced_rate(gamma, group_velocity);
}

} // namespace cphase::units
