#include "cphase/sweep.hpp"

#include "cphase/errors.hpp"
#include "cphase/output.hpp"

#include <openssl/evp.h>

#include <array>
#include <exception>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace cphase {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

bool maximizes(Quantity q) { return q != Quantity::state_F_map; }

double fidelity_at(const OverlapEvaluator& evaluator, double L, const FidelitySolver& solver, bool* converged) {
    const auto overlaps = evaluator.evaluate(L);
    if (converged) *converged = overlaps.converged();
    return gate_fidelity(overlaps, solver).F;
}

} // namespace

std::string_view to_string(Quantity quantity) {
    switch (quantity) {
    case Quantity::abs_O1: return "abs_O1";
    case Quantity::abs_T: return "abs_T";
    case Quantity::gate_F: return "gate_F";
    case Quantity::state_F_map: return "state_F_map";
    }
    return "unknown";
}

Quantity parse_quantity(std::string_view name) {
    if (name == "abs_O1") return Quantity::abs_O1;
    if (name == "abs_T") return Quantity::abs_T;
    if (name == "gate_F") return Quantity::gate_F;
    if (name == "state_F_map") return Quantity::state_F_map;
    throw ParameterError("unknown sweep quantity '" + std::string(name) + "'");
}

std::vector<double> Range::values() const {
    std::vector<double> v(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = min + (max - min) * i / (count - 1);
    v.back() = max;
    return v;
}

void Range::validate(std::string_view name, bool positive) const {
    const std::string n(name);
    if (count < 2) throw ParameterError(n + " range needs at least 2 points");
    if (!std::isfinite(min) || !std::isfinite(max) || max < min)
        throw ParameterError(n + " range must be finite with max >= min");
    if (positive && !(min > 0.0)) throw ParameterError(n + " range must be positive");
}

void SweepSpec::validate() const {
    emitter.validate();
    quad.validate();
    solver.validate();
    if (shape == Shape::tabulated) throw ParameterError("sweeps vary sigma and need an analytic pulse shape");
    if (quantity == Quantity::state_F_map) {
        if (!(map_sigma > 0.0)) throw ParameterError("map sigma must be positive");
        if (!std::isfinite(map_L)) throw ParameterError("map L must be finite");
        if (map_count < 2) throw ParameterError("map needs at least 2 points per axis");
    } else {
        sigma.validate("sigma", true);
        L.validate("L", false);
    }
    if ((quantity == Quantity::gate_F || quantity == Quantity::state_F_map) && !emitter.lossless())
        throw ContractError("gate fidelity needs a lossless emitter (gamma_loss = 0): the fidelity formula "
                            "assumes pure output states");
}

SpectralProfile SweepSpec::profile(double s) const {
    return make_profile(shape, s, ProfileOptions{lorentzian, 0.0});
}

std::string sweep_key(const SweepSpec& spec) {
    nlohmann::json payload;
    payload["engine_version"] = kEngineVersion;
    payload["spec"] = to_json(spec);
    return sha256_hex(payload.dump());
}

SweepResult run_sweep(const SweepSpec& spec, kernels::ExecPolicy exec) {
    spec.validate();
    SweepResult out;
    out.spec = spec;
    out.engine_version = std::string(kEngineVersion);
    out.hash = sweep_key(spec);

    if (spec.quantity == Quantity::state_F_map) {
        const OverlapEvaluator evaluator(spec.profile(spec.map_sigma), spec.emitter, spec.quad, exec);
        const auto overlaps = evaluator.evaluate(spec.map_L);
        const auto map = state_fidelity_map(overlaps.O1, overlaps.T, spec.map_count);
        const double h = 1.0 / (spec.map_count - 1);
        out.rows = out.cols = spec.map_count;
        out.cells.resize(map.size());
        for (int i = 0; i < spec.map_count; ++i)
            for (int j = 0; j < spec.map_count; ++j) {
                auto& c = out.cells[static_cast<std::size_t>(i * spec.map_count + j)];
                c.sigma = spec.map_sigma;
                c.L = spec.map_L;
                c.a = i == spec.map_count - 1 ? 1.0 : i * h;
                c.z = j == spec.map_count - 1 ? 1.0 : j * h;
                c.value = map[static_cast<std::size_t>(i * spec.map_count + j)];
                c.converged = overlaps.converged();
            }
    } else {
        const auto sigmas = spec.sigma.values();
        const auto Ls = spec.L.values();
        out.rows = spec.sigma.count;
        out.cols = spec.L.count;
        out.cells.resize(sigmas.size() * Ls.size());
        // One task per sigma row; the row's L-independent tables are built once.
        const kernels::ExecPolicy inner{1};
        // Exceptions must not escape a parallel region; the first failing row
        // (in row order) is rethrown afterwards.
        std::vector<std::exception_ptr> failures(sigmas.size());
        kernels::for_each_index(
            sigmas.size(),
            [&](std::size_t row) {
                try {
                const OverlapEvaluator evaluator(spec.profile(sigmas[row]), spec.emitter, spec.quad, inner);
                for (std::size_t col = 0; col < Ls.size(); ++col) {
                    auto& c = out.cells[row * Ls.size() + col];
                    c.sigma = sigmas[row];
                    c.L = Ls[col];
                    try {
                        switch (spec.quantity) {
                        case Quantity::abs_O1: c.value = evaluator.single(c.L).value; break;
                        case Quantity::abs_T: c.value = evaluator.two(c.L).value; break;
                        case Quantity::gate_F: c.value = fidelity_at(evaluator, c.L, spec.solver, nullptr); break;
                        case Quantity::state_F_map: break;
                        }
                        c.converged = true;
                    } catch (const NonConvergenceError&) {
                        c.value = {kNaN, kNaN};
                        c.converged = false;
                    }
                }
                } catch (...) {
                    failures[row] = std::current_exception();
                }
            },
            exec);
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    const bool maximize = maximizes(spec.quantity);
    for (const auto& c : out.cells) {
        if (!c.converged) {
            ++out.flagged;
            continue;
        }
        const double v = std::abs(c.value);
        if (!out.optimum.found || (maximize ? v > out.optimum.value : v < out.optimum.value))
            out.optimum = SweepOptimum{true, v, c.sigma, c.L, c.a, c.z};
    }
    if (static_cast<double>(out.flagged) > 0.01 * static_cast<double>(out.cells.size()))
        throw NonConvergenceError("sweep failed: " + std::to_string(out.flagged) + " of " +
                                      std::to_string(out.cells.size()) + " cells did not converge",
                                  {kNaN, kNaN}, {kNaN, kNaN});
    return out;
}

OptimizeResult optimize_fidelity(Shape shape, LorentzianForm form, const EmitterParams& emitter,
                                 const QuadratureSpec& quad, const OptimizeParams& params, kernels::ExecPolicy exec) {
    if (!(params.step_tol > 0.0)) throw ParameterError("optimizer step tolerance must be positive");
    SweepSpec coarse;
    coarse.sigma = params.sigma;
    coarse.L = params.L;
    coarse.shape = shape;
    coarse.lorentzian = form;
    coarse.emitter = emitter;
    coarse.quad = quad;
    coarse.quantity = Quantity::gate_F;
    coarse.solver = params.solver;
    const auto sweep = run_sweep(coarse, exec);
    if (!sweep.optimum.found) throw NonConvergenceError("no converged coarse cell", {kNaN, kNaN}, {kNaN, kNaN});

    OptimizeResult out;
    out.coarse_F = sweep.optimum.value;
    out.coarse_sigma = sweep.optimum.sigma;
    out.coarse_L = sweep.optimum.L;
    out.evaluations = static_cast<int>(sweep.cells.size());

    std::map<double, std::unique_ptr<OverlapEvaluator>> evaluators;
    auto evaluator_for = [&](double sigma) -> const OverlapEvaluator& {
        auto& slot = evaluators[sigma];
        if (!slot) slot = std::make_unique<OverlapEvaluator>(coarse.profile(sigma), emitter, quad, exec);
        return *slot;
    };
    auto objective = [&](double sigma, double L) {
        ++out.evaluations;
        try {
            bool converged = false;
            const double f = fidelity_at(evaluator_for(sigma), L, params.solver, &converged);
            return converged ? f : -1.0;
        } catch (const NonConvergenceError&) {
            return -1.0;
        }
    };

    double sigma = out.coarse_sigma;
    double L = out.coarse_L;
    double best = out.coarse_F;
    const double lower_sigma = params.sigma.min > 0.0 ? params.sigma.min * 0.5 : 1e-3;
    double step = std::min((params.sigma.max - params.sigma.min) / (params.sigma.count - 1),
                           (params.L.max - params.L.min) / (params.L.count - 1)) /
                  2.0;
    // Diagonals let the search follow the ridge where the worst-case input
    // switches, which is where the optimum usually sits.
    const std::array<std::array<double, 2>, 8> dirs{
        {{-1, 0}, {1, 0}, {0, -1}, {0, 1}, {-1, -1}, {-1, 1}, {1, -1}, {1, 1}}};
    while (step >= params.step_tol) {
        bool moved = false;
        for (const auto& d : dirs) {
            const double s = sigma + d[0] * step;
            const double l = L + d[1] * step;
            if (s < lower_sigma) continue;
            const double f = objective(s, l);
            if (f > best) {
                best = f;
                sigma = s;
                L = l;
                moved = true;
                break;
            }
        }
        if (!moved) step /= 2.0;
    }
    out.F_max = best;
    out.sigma = sigma;
    out.L = L;
    out.at_optimum = gate_fidelity(evaluator_for(sigma).evaluate(L), params.solver);
    return out;
}

} // namespace cphase
