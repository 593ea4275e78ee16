#pragma once

#include "cphase/fidelity.hpp"
#include "cphase/quadrature.hpp"
#include "cphase/scattering.hpp"
#include "cphase/sweep.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cphase {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNonConvergence = 3;

/// Everything a CLI invocation needs; defaults reproduce the headline run
/// (gaussian pulse, resonant lossless emitter, sigma = 1.72, L = 0.80).
struct RunConfig {
    std::string subcommand;
    std::string shape = "gaussian";
    std::string lorentzian_form = "complex_pole";
    double sigma = 1.72;
    double L = 0.80;
    double delta = 0.0;
    double gamma_loss = 0.0;
    QuadratureSpec quad;
    std::string output;          ///< empty: standard output
    std::string format = "csv";
    bool cache = true;
    std::string cache_dir;       ///< empty: $CPHASE_CACHE_DIR or ./.cphase-cache
    int workers = 0;

    // overlap scans
    bool scan_L = false;
    Range L_range{0.0, 3.0, 301};

    // fidelity
    bool map = false;
    int map_count = 101;
    bool optimize = false;
    std::vector<double> inject_O1; ///< {re} or {re, im}
    std::vector<double> inject_T;
    FidelitySolver solver;

    // sweep / optimize
    std::string quantity = "gate_F";
    Range sigma_range{0.2, 3.0, 61};
    Range sweep_L_range{0.0, 3.0, 61};
    OptimizeParams optimize_params;
};

/// Runs one invocation. `args` excludes the program name. Results go to the
/// output file (or `out`), diagnostics to `err`. Returns an exit code:
/// 0 success, 2 usage or parameter error, 3 numerical non-convergence.
/// No output file is created unless the computation succeeds.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace cphase
