#include "cphase/quadrature.hpp"

#include "cphase/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace cphase {

namespace {

constexpr double kPi = std::numbers::pi;

NodeSet compute_gauss_legendre(int n) {
    NodeSet set;
    set.points.resize(static_cast<std::size_t>(n));
    set.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            const double pn = n == 0 ? 1.0 : p1;
            const double pnm1 = p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = x;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        set.points[lo] = -x;
        set.points[hi] = x;
        set.weights[lo] = w;
        set.weights[hi] = w;
    }
    if (n % 2 == 1) set.points[static_cast<std::size_t>(n / 2)] = 0.0;
    return set;
}

} // namespace

std::string_view to_string(Rule rule) { return rule == Rule::trapezoid ? "trapezoid" : "gauss_legendre"; }

std::string_view to_string(Domain domain) {
    switch (domain) {
    case Domain::automatic: return "automatic";
    case Domain::window: return "window";
    case Domain::real_line: return "real_line";
    }
    return "unknown";
}

Rule parse_rule(std::string_view name) {
    if (name == "trapezoid") return Rule::trapezoid;
    if (name == "gauss_legendre") return Rule::gauss_legendre;
    throw ParameterError("unknown quadrature rule '" + std::string(name) + "'");
}

Domain parse_domain(std::string_view name) {
    if (name == "automatic") return Domain::automatic;
    if (name == "window") return Domain::window;
    if (name == "real_line") return Domain::real_line;
    throw ParameterError("unknown quadrature domain '" + std::string(name) + "'");
}

void QuadratureSpec::validate() const {
    if (nodes < 3) throw ParameterError("quadrature needs at least 3 nodes per axis");
    if (!(rel_tol > 0.0)) throw ParameterError("rel_tol must be positive");
    if (abs_tol < 0.0) throw ParameterError("abs_tol must be non-negative");
    if (max_refinements < 0) throw ParameterError("max_refinements must be non-negative");
    if (window_halfwidth < 0.0 || !std::isfinite(window_halfwidth))
        throw ParameterError("window half-width must be non-negative");
    if (map_scale < 0.0 || !std::isfinite(map_scale)) throw ParameterError("map scale must be non-negative");
}

QuadratureSpec resolve(const QuadratureSpec& spec, const SpectralProfile& profile) {
    spec.validate();
    QuadratureSpec out = spec;
    if (out.domain == Domain::automatic)
        out.domain = profile.heavy_tailed() ? Domain::real_line : Domain::window;
    if (out.window_halfwidth == 0.0) out.window_halfwidth = profile.default_window();
    // Algebraic tails still oscillate with e^{-ikL} far out; a wide map keeps
    // enough nodes there.
    if (out.map_scale == 0.0)
        out.map_scale = profile.heavy_tailed() ? std::max(8.0 * profile.width_scale(), 16.0)
                                               : std::max(profile.width_scale(), 1.0);
    return out;
}

QuadratureSpec resolve(const QuadratureSpec& spec) {
    spec.validate();
    QuadratureSpec out = spec;
    if (out.domain == Domain::automatic) out.domain = Domain::window;
    if (out.window_halfwidth == 0.0) out.window_halfwidth = 8.0;
    if (out.map_scale == 0.0) out.map_scale = 1.0;
    return out;
}

const NodeSet& gauss_legendre(int n) {
    if (n < 1) throw ParameterError("Gauss-Legendre order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<NodeSet>> memo;
    std::lock_guard lock(mutex);
    auto& slot = memo[n];
    if (!slot) slot = std::make_unique<NodeSet>(compute_gauss_legendre(n));
    return *slot;
}

NodeSet make_nodes(const QuadratureSpec& spec, int count, double stretch) {
    if (spec.domain == Domain::automatic) throw ContractError("make_nodes needs a resolved quadrature spec");
    if (count < 2) throw ParameterError("node count must be at least 2");
    const auto n = static_cast<std::size_t>(count);
    NodeSet set;
    set.points.resize(n);
    set.weights.resize(n);

    if (spec.domain == Domain::window) {
        const double w = spec.window_halfwidth * stretch;
        if (spec.rule == Rule::trapezoid) {
            const double h = 2.0 * w / static_cast<double>(count - 1);
            for (std::size_t i = 0; i < n; ++i) {
                set.points[i] = -w + h * static_cast<double>(i);
                set.weights[i] = h;
            }
            set.weights.front() = set.weights.back() = h / 2.0;
        } else {
            const auto& gl = gauss_legendre(count);
            for (std::size_t i = 0; i < n; ++i) {
                set.points[i] = w * gl.points[i];
                set.weights[i] = w * gl.weights[i];
            }
        }
        return set;
    }

    // real_line: k = c tan(theta). The trapezoid variant is the open midpoint
    // rule, which keeps the (finite, periodic) endpoint values out of the sum.
    const double c = spec.map_scale * stretch;
    auto place = [&](std::size_t i, double theta, double dtheta) {
        const double sec = 1.0 / std::cos(theta);
        set.points[i] = c * std::tan(theta);
        set.weights[i] = c * sec * sec * dtheta;
    };
    if (spec.rule == Rule::trapezoid) {
        const double h = kPi / static_cast<double>(count);
        for (std::size_t i = 0; i < n; ++i) place(i, -kPi / 2.0 + (static_cast<double>(i) + 0.5) * h, h);
    } else {
        const auto& gl = gauss_legendre(count);
        for (std::size_t i = 0; i < n; ++i) place(i, kPi / 2.0 * gl.points[i], kPi / 2.0 * gl.weights[i]);
    }
    return set;
}

AxisMap::AxisMap(const QuadratureSpec& spec, double stretch)
    : domain_(spec.domain),
      extent_((spec.domain == Domain::real_line ? spec.map_scale : spec.window_halfwidth) * stretch) {
    if (domain_ == Domain::automatic) throw ContractError("AxisMap needs a resolved quadrature spec");
}

double AxisMap::to_unit(double k) const {
    if (domain_ == Domain::window) return k / extent_;
    return 2.0 / kPi * std::atan(k / extent_);
}

double AxisMap::from_unit(double u) const {
    if (domain_ == Domain::window) return u * extent_;
    return extent_ * std::tan(kPi / 2.0 * u);
}

Integral<std::complex<double>> refine(const std::function<std::complex<double>(int)>& estimate,
                                      const QuadratureSpec& spec, const std::string& what) {
    Integral<std::complex<double>> out;
    std::complex<double> previous = estimate(0);
    std::complex<double> before_last = previous;
    for (int level = 1; level <= spec.max_refinements; ++level) {
        const std::complex<double> current = estimate(level);
        const double change = std::abs(current - previous);
        const double magnitude = std::abs(current);
        out.value = current;
        out.report.nodes = spec.nodes << level;
        out.report.refinements = level;
        out.report.last_rel_change = magnitude > 0.0 ? change / magnitude : change;
        if (change <= std::max(spec.rel_tol * magnitude, spec.abs_tol)) {
            out.report.converged = true;
            return out;
        }
        before_last = previous;
        previous = current;
    }
    if (spec.max_refinements == 0) {
        out.value = previous;
        out.report.nodes = spec.nodes;
        throw NonConvergenceError(what + ": no refinement allowed, convergence cannot be checked", previous,
                                  previous);
    }
    throw NonConvergenceError(what + " did not converge after " + std::to_string(spec.max_refinements) +
                                  " refinements (relative change " + std::to_string(out.report.last_rel_change) +
                                  ")",
                              before_last, out.value);
}

Integral<std::complex<double>> integrate_1d(const Integrand1d& f, const QuadratureSpec& spec) {
    const QuadratureSpec r = spec.domain == Domain::automatic ? resolve(spec) : spec;
    r.validate();
    auto estimate = [&](int level) {
        const NodeSet nodes = make_nodes(r, r.nodes << level);
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t i = 0; i < nodes.size(); ++i) sum += nodes.weights[i] * f(nodes.points[i]);
        return sum;
    };
    return refine(estimate, r, "1D integral");
}

Integral<std::complex<double>> integrate_2d(const Integrand2d& f, const QuadratureSpec& spec) {
    const QuadratureSpec r = spec.domain == Domain::automatic ? resolve(spec) : spec;
    r.validate();
    auto estimate = [&](int level) {
        const NodeSet nodes = make_nodes(r, r.nodes << level);
        std::complex<double> sum{0.0, 0.0};
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            std::complex<double> row{0.0, 0.0};
            for (std::size_t j = 0; j < nodes.size(); ++j) row += nodes.weights[j] * f(nodes.points[i], nodes.points[j]);
            sum += nodes.weights[i] * row;
        }
        return sum;
    };
    return refine(estimate, r, "2D integral");
}

} // namespace cphase
