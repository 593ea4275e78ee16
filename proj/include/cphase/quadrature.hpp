#pragma once

#include "cphase/profile.hpp"

#include <complex>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace cphase {

enum class Rule { trapezoid, gauss_legendre };

/// Integration domain for integrals over the whole real momentum line.
///  - window:    the finite interval [-W, W]; fine for exponentially decaying pulses.
///  - real_line: k = c tan(theta) on (-pi/2, pi/2); needed for algebraic tails.
///  - automatic: window unless the pulse is heavy-tailed.
enum class Domain { automatic, window, real_line };

std::string_view to_string(Rule rule);
std::string_view to_string(Domain domain);
Rule parse_rule(std::string_view name);
Domain parse_domain(std::string_view name);

struct QuadratureSpec {
    Domain domain = Domain::automatic;
    double window_halfwidth = 0.0; ///< 0 selects the profile's default window
    double map_scale = 0.0;        ///< real_line scale c; 0 picks one from the pulse width
    int nodes = 257;               ///< starting node count per axis
    Rule rule = Rule::trapezoid;
    double rel_tol = 1e-6;
    double abs_tol = 1e-14;
    int max_refinements = 6;

    void validate() const;
    bool operator==(const QuadratureSpec&) const = default;
};

/// Fills automatic fields from the pulse (window, domain, map scale).
QuadratureSpec resolve(const QuadratureSpec& spec, const SpectralProfile& profile);
/// Same, without a pulse: window half-width 8 and the window domain.
QuadratureSpec resolve(const QuadratureSpec& spec);

struct NodeSet {
    std::vector<double> points;
    std::vector<double> weights;
    std::size_t size() const { return points.size(); }
};

/// Nodes for `count` points on a resolved spec. `stretch` scales the domain
/// (window half-width or map scale); sums k + k' live on stretch 2.
NodeSet make_nodes(const QuadratureSpec& resolved, int count, double stretch = 1.0);

/// Gauss-Legendre nodes and weights on [-1, 1]; memoized per n, thread-safe.
const NodeSet& gauss_legendre(int n);

/// Maps a resolved domain onto u in [-1, 1] so tables can be sampled uniformly.
class AxisMap {
public:
    AxisMap(const QuadratureSpec& resolved, double stretch = 1.0);
    double to_unit(double k) const;
    double from_unit(double u) const;
    bool unbounded() const { return domain_ == Domain::real_line; }

private:
    Domain domain_;
    double extent_;
};

struct ConvergenceReport {
    int nodes = 0;
    int refinements = 0;
    double last_rel_change = 0.0;
    bool converged = false;
};

template <class T> struct Integral {
    T value{};
    ConvergenceReport report;
};

using Integrand1d = std::function<std::complex<double>(double)>;
using Integrand2d = std::function<std::complex<double>(double, double)>;

/// Integrates over the real line, doubling nodes until two successive
/// estimates agree to max(rel_tol * |I|, abs_tol). Throws NonConvergenceError.
Integral<std::complex<double>> integrate_1d(const Integrand1d& f, const QuadratureSpec& spec);

/// Tensor-product version of integrate_1d.
Integral<std::complex<double>> integrate_2d(const Integrand2d& f, const QuadratureSpec& spec);

/// Doubling driver shared by all refined quantities: `estimate(level)` must
/// return the value with nodes * 2^level points per axis.
Integral<std::complex<double>> refine(const std::function<std::complex<double>(int)>& estimate,
                                      const QuadratureSpec& spec, const std::string& what);

} // namespace cphase
