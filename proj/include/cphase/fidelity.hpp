#pragma once

#include "cphase/overlaps.hpp"

#include <complex>
#include <vector>

namespace cphase {

/// Magnitudes of a product logical input (alpha|0_s> + beta|1_s>)(zeta|0_c> + theta|1_c>):
/// a = |alpha|^2, z = |zeta|^2. Phases drop out of the pure-state fidelity.
struct LogicalInputWeights {
    double a = 0.0;
    double z = 0.0;
    void validate() const;
};

/// | a z + O1 (a(1-z) + (1-a)z) + T (1-a)(1-z) |
double state_fidelity(std::complex<double> O1, std::complex<double> T, LogicalInputWeights w);

struct FidelitySolver {
    int grid = 101;          ///< coarse points per axis on [0, 1]
    double tolerance = 1e-5; ///< target accuracy of the minimum in F
    void validate() const;
};

struct FidelityResult {
    double F = 1.0;
    LogicalInputWeights argmin;
    GateOverlaps overlaps;
    int grid = 0;
    int refinement_steps = 0;
    double tolerance = 0.0;
};

/// Worst case over all product inputs for given overlaps: exhaustive coarse
/// grid, then a compass search with step halving. Equal minima resolve to the
/// lexicographically smallest (a, z).
FidelityResult minimize_state_fidelity(std::complex<double> O1, std::complex<double> T,
                                       const FidelitySolver& solver = {});

/// Gate fidelity from computed overlaps. The pure-state formula assumes a
/// lossless emitter, so overlaps computed with gamma_loss > 0 are refused
/// with ContractError.
FidelityResult gate_fidelity(const GateOverlaps& overlaps, const FidelitySolver& solver = {});

/// State fidelity on a count x count grid over [0,1]^2, row-major in a.
std::vector<double> state_fidelity_map(std::complex<double> O1, std::complex<double> T, int count);

} // namespace cphase
