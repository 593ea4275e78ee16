#include "cphase/fidelity.hpp"

#include "cphase/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace cphase {

void LogicalInputWeights::validate() const {
    if (!(a >= 0.0 && a <= 1.0) || !(z >= 0.0 && z <= 1.0))
        throw ParameterError("logical input weights must lie in [0, 1]");
}

void FidelitySolver::validate() const {
    if (grid < 2) throw ParameterError("fidelity grid needs at least 2 points per axis");
    if (!(tolerance > 0.0)) throw ParameterError("fidelity tolerance must be positive");
}

double state_fidelity(std::complex<double> O1, std::complex<double> T, LogicalInputWeights w) {
    w.validate();
    const double a = w.a;
    const double z = w.z;
    return std::abs(a * z + O1 * (a * (1.0 - z) + (1.0 - a) * z) + T * ((1.0 - a) * (1.0 - z)));
}

namespace {
// Differences below a few ulps of an O(1) sum are rounding, not a lower value;
// ignoring them keeps the lexicographic tie-break on flat landscapes.
constexpr double kTie = 1e-14;
} // namespace

FidelityResult minimize_state_fidelity(std::complex<double> O1, std::complex<double> T, const FidelitySolver& solver) {
    solver.validate();
    const double h = 1.0 / (solver.grid - 1);
    FidelityResult out;
    out.grid = solver.grid;
    out.tolerance = solver.tolerance;
    out.F = std::numeric_limits<double>::infinity();
    bool first = true;
    for (int i = 0; i < solver.grid; ++i) {
        for (int j = 0; j < solver.grid; ++j) {
            const LogicalInputWeights w{i == solver.grid - 1 ? 1.0 : i * h, j == solver.grid - 1 ? 1.0 : j * h};
            const double f = state_fidelity(O1, T, w);
            if (first || f < out.F - kTie) {
                out.F = f;
                out.argmin = w;
                first = false;
            }
        }
    }

    // F is Lipschitz with constant below 4 on the unit square, so a final step
    // well under tolerance/4 pins the minimum to the requested accuracy.
    const double min_step = solver.tolerance * 1e-2;
    double step = h / 2.0;
    while (step >= min_step) {
        bool moved = false;
        const std::array<std::array<double, 2>, 4> dirs{{{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
        for (const auto& d : dirs) {
            const LogicalInputWeights w{std::clamp(out.argmin.a + d[0] * step, 0.0, 1.0),
                                        std::clamp(out.argmin.z + d[1] * step, 0.0, 1.0)};
            const double f = state_fidelity(O1, T, w);
            if (f < out.F - kTie) {
                out.F = f;
                out.argmin = w;
                moved = true;
                break;
            }
        }
        ++out.refinement_steps;
        if (!moved) step /= 2.0;
    }
    return out;
}

FidelityResult gate_fidelity(const GateOverlaps& overlaps, const FidelitySolver& solver) {
    if (!overlaps.emitter.lossless())
        throw ContractError("gate fidelity uses the pure-output-state formula, which requires a lossless emitter "
                            "(gamma_loss = 0); lossy outputs are mixed states");
    auto out = minimize_state_fidelity(overlaps.O1, overlaps.T, solver);
    out.overlaps = overlaps;
    return out;
}

std::vector<double> state_fidelity_map(std::complex<double> O1, std::complex<double> T, int count) {
    if (count < 2) throw ParameterError("fidelity map needs at least 2 points per axis");
    const double h = 1.0 / (count - 1);
    std::vector<double> map(static_cast<std::size_t>(count) * static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        for (int j = 0; j < count; ++j)
            map[static_cast<std::size_t>(i * count + j)] =
                state_fidelity(O1, T, {i == count - 1 ? 1.0 : i * h, j == count - 1 ? 1.0 : j * h});
    return map;
}

} // namespace cphase
