#include "cphase/errors.hpp"
#include "cphase/sweep.hpp"

#include <doctest.h>

#include <cmath>

using namespace cphase;

namespace {
SweepSpec small_spec(Quantity q) {
    SweepSpec s;
    s.sigma = {1.0, 2.5, 4};
    s.L = {0.0, 1.5, 4};
    s.quantity = q;
    return s;
}

bool same_cells(const SweepResult& a, const SweepResult& b) {
    if (a.cells.size() != b.cells.size()) return false;
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        const auto& x = a.cells[i];
        const auto& y = b.cells[i];
        if (x.sigma != y.sigma || x.L != y.L || x.a != y.a || x.z != y.z || x.converged != y.converged) return false;
        if (!(x.value == y.value) && !(std::isnan(x.value.real()) && std::isnan(y.value.real()))) return false;
    }
    return true;
}
} // namespace

TEST_CASE("ranges") {
    const Range r{0.0, 3.0, 61};
    const auto v = r.values();
    REQUIRE(v.size() == 61);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 3.0);
    CHECK(v[20] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS((Range{0.0, 1.0, 1}.validate("L", false)), ParameterError);
    CHECK_THROWS_AS((Range{1.0, 0.0, 3}.validate("L", false)), ParameterError);
    CHECK_THROWS_AS((Range{0.0, 1.0, 3}.validate("sigma", true)), ParameterError);
}

TEST_CASE("sweep is deterministic and independent of the worker count") {
    for (Quantity q : {Quantity::abs_O1, Quantity::abs_T, Quantity::gate_F}) {
        const auto spec = small_spec(q);
        const auto one = run_sweep(spec, kernels::ExecPolicy{1});
        const auto again = run_sweep(spec, kernels::ExecPolicy{1});
        const auto many = run_sweep(spec, kernels::ExecPolicy{4});
        CAPTURE(to_string(q));
        CHECK(same_cells(one, again));
        CHECK(same_cells(one, many));
        CHECK(one.hash == many.hash);
        CHECK(one.rows == 4);
        CHECK(one.cols == 4);
        CHECK(one.flagged == 0);
        CHECK(one.cell(2, 3).sigma == doctest::Approx(2.0));
        CHECK(one.cell(2, 3).L == doctest::Approx(1.5));
    }
}

TEST_CASE("sweep cells agree with direct evaluation") {
    const auto spec = small_spec(Quantity::gate_F);
    const auto result = run_sweep(spec);
    const OverlapEvaluator ev(spec.profile(2.0), spec.emitter, spec.quad);
    const auto g = ev.evaluate(1.0);
    const auto f = gate_fidelity(g, spec.solver);
    CHECK(std::abs(result.cell(2, 2).value) == doctest::Approx(f.F).epsilon(1e-12));
    const auto o1 = run_sweep(small_spec(Quantity::abs_O1));
    CHECK(std::abs(o1.cell(2, 2).value - g.O1) < 1e-12);
}

TEST_CASE("optimum is the maximum, or the minimum for the state map") {
    const auto r = run_sweep(small_spec(Quantity::gate_F));
    double best = -1.0;
    for (const auto& c : r.cells) best = std::max(best, std::abs(c.value));
    CHECK(r.optimum.found);
    CHECK(r.optimum.value == best);

    auto map_spec = small_spec(Quantity::state_F_map);
    map_spec.map_count = 21;
    const auto m = run_sweep(map_spec);
    CHECK(m.rows == 21);
    CHECK(m.cols == 21);
    double worst = 2.0;
    for (const auto& c : m.cells) worst = std::min(worst, std::abs(c.value));
    CHECK(m.optimum.value == worst);
    CHECK(m.cell(20, 20).a == 1.0);
    CHECK(m.cell(20, 20).z == 1.0);
    CHECK(std::abs(m.cell(20, 20).value) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.cell(0, 0).sigma == 1.72);
}

TEST_CASE("cache key follows every spec field") {
    const auto base = small_spec(Quantity::gate_F);
    const auto key = sweep_key(base);
    CHECK(key.size() == 64);
    CHECK(key == sweep_key(base));
    auto changed = base;
    changed.quad.nodes = 513;
    CHECK(sweep_key(changed) != key);
    changed = base;
    changed.L.count = 5;
    CHECK(sweep_key(changed) != key);
    changed = base;
    changed.emitter.delta = 0.1;
    CHECK(sweep_key(changed) != key);
    changed = base;
    changed.solver.grid = 51;
    CHECK(sweep_key(changed) != key);
    changed = base;
    changed.shape = Shape::sech;
    CHECK(sweep_key(changed) != key);
}

TEST_CASE("sweep validation") {
    auto s = small_spec(Quantity::gate_F);
    s.emitter.gamma_loss = 0.1;
    CHECK_THROWS_AS(run_sweep(s), ContractError);
    s = small_spec(Quantity::abs_O1);
    s.emitter.gamma_loss = 0.1;
    CHECK_NOTHROW(run_sweep(s));
    s = small_spec(Quantity::abs_T);
    s.sigma = {0.0, 1.0, 3};
    CHECK_THROWS_AS(run_sweep(s), ParameterError);
    s = small_spec(Quantity::abs_T);
    s.shape = Shape::tabulated;
    CHECK_THROWS_AS(run_sweep(s), ParameterError);
    CHECK_THROWS_AS(parse_quantity("fidelity"), ParameterError);
    CHECK(parse_quantity("state_F_map") == Quantity::state_F_map);
}

TEST_CASE("non-converged cells are flagged and fail the sweep") {
    auto s = small_spec(Quantity::abs_T);
    s.quad.rel_tol = 1e-15;
    s.quad.abs_tol = 0.0;
    s.quad.max_refinements = 1;
    s.quad.nodes = 9;
    CHECK_THROWS_AS(run_sweep(s), NonConvergenceError);
}

TEST_CASE("optimizer never falls below its coarse start") {
    OptimizeParams p;
    p.sigma = {1.0, 3.0, 5};
    p.L = {0.0, 1.6, 5};
    p.step_tol = 1e-2;
    const auto r = optimize_fidelity(Shape::gaussian, LorentzianForm::complex_pole, EmitterParams{},
                                     SweepSpec::sweep_quadrature(), p);
    CHECK(r.F_max >= r.coarse_F);
    CHECK(r.F_max > 0.83);
    CHECK(r.F_max < 0.85);
    CHECK(r.evaluations > 25);
    CHECK(std::abs(r.at_optimum.F - r.F_max) < 1e-15);
    CHECK(r.at_optimum.overlaps.sigma == r.sigma);
    CHECK(r.at_optimum.overlaps.L == r.L);
    p.step_tol = 0.0;
    CHECK_THROWS_AS(optimize_fidelity(Shape::gaussian, LorentzianForm::complex_pole, EmitterParams{},
                                      SweepSpec::sweep_quadrature(), p),
                    ParameterError);
}
