#pragma once

#include "cphase/fidelity.hpp"
#include "cphase/kernels.hpp"
#include "cphase/overlaps.hpp"
#include "cphase/profile.hpp"
#include "cphase/quadrature.hpp"

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace cphase {

/// Bumped whenever a change alters computed numbers; part of every cache key.
inline constexpr std::string_view kEngineVersion = "cphase-engine/1.0.0";

enum class Quantity { abs_O1, abs_T, gate_F, state_F_map };

std::string_view to_string(Quantity quantity);
Quantity parse_quantity(std::string_view name);

/// count evenly spaced values from min to max inclusive.
struct Range {
    double min = 0.0;
    double max = 1.0;
    int count = 2;

    std::vector<double> values() const;
    void validate(std::string_view name, bool positive) const;
    bool operator==(const Range&) const = default;
};

struct SweepSpec {
    Range sigma{0.2, 3.0, 61};
    Range L{0.0, 3.0, 61};
    Shape shape = Shape::gaussian;
    LorentzianForm lorentzian = LorentzianForm::complex_pole;
    EmitterParams emitter;
    QuadratureSpec quad = sweep_quadrature();
    Quantity quantity = Quantity::gate_F;
    FidelitySolver solver;
    // state_F_map: fixed (sigma, L) and a map_count x map_count (a, z) grid.
    double map_sigma = 1.72;
    double map_L = 0.80;
    int map_count = 101;

    void validate() const;
    SpectralProfile profile(double sigma) const;

    /// Sweep cells default to a looser tolerance than single evaluations.
    static QuadratureSpec sweep_quadrature() {
        QuadratureSpec q;
        q.rel_tol = 1e-5;
        return q;
    }
};

struct SweepCell {
    double sigma = 0.0;
    double L = 0.0;
    double a = 0.0; ///< state_F_map only
    double z = 0.0; ///< state_F_map only
    std::complex<double> value{};
    bool converged = true;
};

struct SweepOptimum {
    bool found = false;
    double value = 0.0;
    double sigma = 0.0;
    double L = 0.0;
    double a = 0.0;
    double z = 0.0;
};

/// Cells are row-major: sigma (or a) is the row index, L (or z) the column.
/// Non-converged cells hold NaN and are excluded from the optimum.
struct SweepResult {
    SweepSpec spec;
    int rows = 0;
    int cols = 0;
    std::vector<SweepCell> cells;
    SweepOptimum optimum;
    std::size_t flagged = 0;
    std::string hash;
    std::string engine_version;

    const SweepCell& cell(int row, int col) const { return cells[static_cast<std::size_t>(row * cols + col)]; }
};

/// Deterministic content hash (SHA-256 hex) of the spec and engine version.
/// The worker count is not part of the spec and never changes results.
std::string sweep_key(const SweepSpec& spec);

/// Evaluates the requested quantity on every cell. The optimum is the maximum
/// for overlaps and gate fidelity and the minimum (worst case) for
/// state_F_map. More than 1% non-converged cells raises NonConvergenceError.
SweepResult run_sweep(const SweepSpec& spec, kernels::ExecPolicy exec = {});

struct OptimizeParams {
    Range sigma{0.5, 4.0, 15};
    Range L{0.0, 2.0, 11};
    double step_tol = 1e-3;
    FidelitySolver solver;
};

struct OptimizeResult {
    double F_max = 0.0;
    double sigma = 0.0;
    double L = 0.0;
    double coarse_F = 0.0;
    double coarse_sigma = 0.0;
    double coarse_L = 0.0;
    int evaluations = 0;
    FidelityResult at_optimum;
};

/// Coarse gate_F sweep followed by a compass search in (sigma, L) with step
/// halving down to step_tol. Only improving moves are taken, so F_max is never
/// below the best coarse cell.
OptimizeResult optimize_fidelity(Shape shape, LorentzianForm form, const EmitterParams& emitter,
                                 const QuadratureSpec& quad, const OptimizeParams& params = {},
                                 kernels::ExecPolicy exec = {});

} // namespace cphase
