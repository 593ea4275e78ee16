#include "cphase/cli.hpp"

#include "cphase/cache.hpp"
#include "cphase/errors.hpp"
#include "cphase/output.hpp"
#include "cphase/overlaps.hpp"
#include "cphase/profile.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cphase {

using nlohmann::json;

namespace {

struct Context {
    RunConfig cfg;
    bool rel_tol_given = false;
    std::ostream& out;
    std::ostream& err;
};

std::complex<double> injected(const std::vector<double>& v) {
    return {v.at(0), v.size() > 1 ? v[1] : 0.0};
}

json range_json(const Range& r) { return to_json(r); }

json config_json(const RunConfig& c) {
    json j{{"subcommand", c.subcommand},
           {"shape", c.shape},
           {"lorentzian_form", c.lorentzian_form},
           {"sigma", c.sigma},
           {"L", c.L},
           {"delta", c.delta},
           {"gamma_wg", 1.0},
           {"gamma_loss", c.gamma_loss},
           {"quadrature", to_json(c.quad)},
           {"solver", to_json(c.solver)}};
    if (c.subcommand == "overlap1" || c.subcommand == "overlap2") {
        j["scan_L"] = c.scan_L;
        if (c.scan_L) j["L_range"] = range_json(c.L_range);
    }
    if (c.subcommand == "fidelity") {
        j["map"] = c.map;
        if (c.map) j["map_count"] = c.map_count;
        j["optimize"] = c.optimize;
        if (!c.inject_O1.empty()) j["inject_O1"] = c.inject_O1;
        if (!c.inject_T.empty()) j["inject_T"] = c.inject_T;
    }
    if (c.subcommand == "sweep") {
        j["quantity"] = c.quantity;
        j["sigma_range"] = range_json(c.sigma_range);
        j["L_range"] = range_json(c.sweep_L_range);
        j["map_count"] = c.map_count;
    }
    if (c.subcommand == "optimize" || (c.subcommand == "fidelity" && c.optimize)) {
        j["coarse_sigma"] = range_json(c.optimize_params.sigma);
        j["coarse_L"] = range_json(c.optimize_params.L);
        j["step_tol"] = c.optimize_params.step_tol;
    }
    return j;
}

json base_metadata(const RunConfig& c) {
    return {{"engine_version", kEngineVersion}, {"command", c.subcommand}, {"config", config_json(c)}};
}

EmitterParams emitter_of(const RunConfig& c) {
    EmitterParams e{c.delta, 1.0, c.gamma_loss};
    e.validate();
    return e;
}

SpectralProfile profile_of(const RunConfig& c, double sigma) {
    return make_profile(parse_shape(c.shape), sigma, ProfileOptions{parse_lorentzian_form(c.lorentzian_form), 0.0});
}

void require_lossless(const RunConfig& c) {
    if (c.gamma_loss != 0.0)
        throw ParameterError("the gate fidelity is defined for pure output states only; a lossy emitter "
                             "(gamma_loss > 0) leaves the photons in a mixed state, so use gamma_loss = 0");
}

// Renders first so that a failure never leaves a partial file behind.
void emit(Context& ctx, const Table& table, const std::string& summary) {
    const Format format = parse_format(ctx.cfg.format);
    std::ostringstream rendered;
    write_table(rendered, table, format);
    if (ctx.cfg.output.empty()) {
        ctx.out << rendered.str();
        if (!summary.empty()) ctx.err << summary << '\n';
        return;
    }
    std::ofstream file(ctx.cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) throw ParameterError("cannot open output file '" + ctx.cfg.output + "'");
    file << rendered.str();
    file.close();
    if (!file) throw ParameterError("failed writing output file '" + ctx.cfg.output + "'");
    if (!summary.empty()) ctx.out << summary << '\n';
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

int cmd_overlap(Context& ctx, bool two) {
    const RunConfig& c = ctx.cfg;
    const auto profile = profile_of(c, c.sigma);
    const OverlapEvaluator evaluator(profile, emitter_of(c), c.quad, kernels::ExecPolicy{c.workers});
    std::vector<double> Ls{c.L};
    if (c.scan_L) {
        c.L_range.validate("L", false);
        Ls = c.L_range.values();
    }

    Table table;
    table.metadata = base_metadata(c);
    table.metadata["quantity"] = two ? "T" : "O1";
    table.metadata["quadrature_resolved"] = to_json(resolve(c.quad, profile));
    table.columns = {"sigma", "L", two ? "abs_T" : "abs_O1", "re", "im"};
    json reports = json::array();
    double best = -1.0;
    double best_L = 0.0;
    for (double L : Ls) {
        const auto r = two ? evaluator.two(L) : evaluator.single(L);
        table.rows.push_back({c.sigma, L, std::abs(r.value), r.value.real(), r.value.imag()});
        json rep = to_json(r.report);
        rep["L"] = L;
        reports.push_back(std::move(rep));
        if (std::abs(r.value) > best) {
            best = std::abs(r.value);
            best_L = L;
        }
    }
    table.metadata["convergence"] = std::move(reports);
    if (c.scan_L) table.metadata["argmax"] = {{"L", best_L}, {"abs", best}};
    const char* name = two ? "|T|" : "|O1|";
    const std::string summary = std::string(c.scan_L ? "max " : "") + name + " = " + fmt("%.6f at L = %.4f", best, best_L);
    emit(ctx, table, summary);
    return kExitOk;
}

json fidelity_json(const FidelityResult& r) {
    return {{"F", r.F}, {"a", r.argmin.a}, {"z", r.argmin.z}, {"refinement_steps", r.refinement_steps}};
}

std::vector<LorentzianForm> forms_to_report(const RunConfig& c) {
    if (parse_shape(c.shape) != Shape::lorentzian) return {parse_lorentzian_form(c.lorentzian_form)};
    const auto primary = parse_lorentzian_form(c.lorentzian_form);
    const auto other = primary == LorentzianForm::complex_pole ? LorentzianForm::real_sqrt : LorentzianForm::complex_pole;
    return {primary, other};
}

Table optimize_table(Context& ctx, const OptimizeParams& params, std::string& summary) {
    const RunConfig& c = ctx.cfg;
    require_lossless(c);
    const Shape shape = parse_shape(c.shape);
    const EmitterParams emitter = emitter_of(c);
    Table table;
    table.metadata = base_metadata(c);
    table.columns = {"shape", "lorentzian_form", "F_max", "sigma", "L",        "a",
                     "z",     "coarse_F",        "coarse_sigma", "coarse_L", "evaluations"};
    // The search is a sweep plus refinement, so it runs at sweep-cell tolerance
    // unless one was given explicitly.
    QuadratureSpec quad = c.quad;
    if (!ctx.rel_tol_given) quad.rel_tol = SweepSpec::sweep_quadrature().rel_tol;
    table.metadata["quadrature"] = to_json(quad);
    json results = json::array();
    for (const auto form : forms_to_report(c)) {
        const auto r = optimize_fidelity(shape, form, emitter, quad, params, kernels::ExecPolicy{c.workers});
        table.rows.push_back({std::string(to_string(shape)), std::string(to_string(form)), r.F_max, r.sigma, r.L,
                              r.at_optimum.argmin.a, r.at_optimum.argmin.z, r.coarse_F, r.coarse_sigma, r.coarse_L,
                              static_cast<long long>(r.evaluations)});
        results.push_back({{"lorentzian_form", to_string(form)},
                           {"F_max", r.F_max},
                           {"sigma", r.sigma},
                           {"L", r.L},
                           {"O1", {r.at_optimum.overlaps.O1.real(), r.at_optimum.overlaps.O1.imag()}},
                           {"T", {r.at_optimum.overlaps.T.real(), r.at_optimum.overlaps.T.imag()}}});
        if (summary.empty())
            summary = std::string(to_string(shape)) + ": " + fmt("F_max = %.6f at sigma = %.4f, L = %.4f", r.F_max, r.sigma, r.L);
        else
            summary += std::string("\n  (") + std::string(to_string(form)) + ") " + fmt("F_max = %.6f at sigma = %.4f, L = %.4f", r.F_max, r.sigma, r.L);
    }
    table.metadata["results"] = std::move(results);
    return table;
}

int cmd_fidelity(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    require_lossless(c);
    c.solver.validate();
    if (c.optimize) {
        std::string summary;
        auto params = c.optimize_params;
        params.solver = c.solver;
        emit(ctx, optimize_table(ctx, params, summary), summary);
        return kExitOk;
    }

    Table table;
    table.metadata = base_metadata(c);
    FidelityResult result;
    if (!c.inject_O1.empty() || !c.inject_T.empty()) {
        if (c.inject_O1.empty() || c.inject_T.empty())
            throw ParameterError("--O1 and --T must be given together");
        result = minimize_state_fidelity(injected(c.inject_O1), injected(c.inject_T), c.solver);
        result.overlaps.O1 = injected(c.inject_O1);
        result.overlaps.T = injected(c.inject_T);
        result.overlaps.sigma = c.sigma;
        result.overlaps.L = c.L;
        table.metadata["overlaps_source"] = "injected";
    } else {
        const auto profile = profile_of(c, c.sigma);
        const OverlapEvaluator evaluator(profile, emitter_of(c), c.quad, kernels::ExecPolicy{c.workers});
        result = gate_fidelity(evaluator.evaluate(c.L), c.solver);
        table.metadata["overlaps_source"] = "computed";
        table.metadata["quadrature_resolved"] = to_json(resolve(c.quad, profile));
        table.metadata["convergence"] = {{"O1", to_json(result.overlaps.o1_report)},
                                         {"T", to_json(result.overlaps.t_report)}};
    }
    const auto O1 = result.overlaps.O1;
    const auto T = result.overlaps.T;
    table.metadata["result"] = fidelity_json(result);
    table.metadata["O1"] = {O1.real(), O1.imag()};
    table.metadata["T"] = {T.real(), T.imag()};
    std::string summary = fmt("F = %.6f at (a, z) = (%.4f, %.4f)", result.F, result.argmin.a, result.argmin.z);

    if (c.map) {
        if (c.map_count < 2) throw ParameterError("map needs at least 2 points per axis");
        const auto values = state_fidelity_map(O1, T, c.map_count);
        const double step = 1.0 / (c.map_count - 1);
        table.columns = {"a", "z", "F"};
        double map_min = values.front();
        for (int i = 0; i < c.map_count; ++i)
            for (int j = 0; j < c.map_count; ++j) {
                const double v = values[static_cast<std::size_t>(i * c.map_count + j)];
                table.rows.push_back({i * step, j * step, v});
                map_min = std::min(map_min, v);
            }
        table.metadata["map_min"] = map_min;
        table.metadata["map_corner_11"] = values.back();
        summary += fmt("; map min = %.6f, F(1,1) = %.6f", map_min, values.back());
    } else {
        table.columns = {"sigma", "L", "F", "a", "z", "O1_re", "O1_im", "T_re", "T_im"};
        table.rows.push_back({result.overlaps.sigma, result.overlaps.L, result.F, result.argmin.a, result.argmin.z,
                              O1.real(), O1.imag(), T.real(), T.imag()});
    }
    emit(ctx, table, summary);
    return kExitOk;
}

int cmd_sweep(Context& ctx) {
    const RunConfig& c = ctx.cfg;
    SweepSpec spec;
    spec.sigma = c.sigma_range;
    spec.L = c.sweep_L_range;
    spec.shape = parse_shape(c.shape);
    spec.lorentzian = parse_lorentzian_form(c.lorentzian_form);
    spec.emitter = emitter_of(c);
    spec.quad = c.quad;
    if (!ctx.rel_tol_given) spec.quad.rel_tol = SweepSpec::sweep_quadrature().rel_tol;
    spec.quantity = parse_quantity(c.quantity);
    spec.solver = c.solver;
    spec.map_sigma = c.sigma;
    spec.map_L = c.L;
    spec.map_count = c.map_count;
    if (spec.quantity == Quantity::gate_F || spec.quantity == Quantity::state_F_map) require_lossless(c);
    spec.validate();

    std::optional<SweepResult> result;
    std::optional<ResultCache> cache;
    if (c.cache) {
        cache.emplace(c.cache_dir.empty() ? ResultCache::default_directory() : std::filesystem::path(c.cache_dir),
                      &ctx.err);
        result = cache->lookup(sweep_key(spec));
        if (result) ctx.err << "cache hit: " << cache->path_for(result->hash).string() << '\n';
    }
    if (!result) {
        result = run_sweep(spec, kernels::ExecPolicy{c.workers});
        if (cache) {
            try {
                cache->store(*result);
                ctx.err << "cache store: " << cache->path_for(result->hash).string() << '\n';
            } catch (const std::exception& e) {
                ctx.err << "warning: cache store failed: " << e.what() << '\n';
            }
        }
    }

    json meta = base_metadata(c);
    meta["spec"] = to_json(result->spec);
    meta["hash"] = result->hash;
    meta["rows"] = result->rows;
    meta["cols"] = result->cols;
    meta["flagged"] = result->flagged;
    const auto& o = result->optimum;
    meta["optimum"] = {{"found", o.found}, {"value", o.value}, {"sigma", o.sigma}, {"L", o.L}};
    if (spec.quantity == Quantity::state_F_map) {
        meta["optimum"]["a"] = o.a;
        meta["optimum"]["z"] = o.z;
    }
    const std::string summary =
        std::string(to_string(spec.quantity)) + (spec.quantity == Quantity::state_F_map ? " min" : " max") +
        fmt(" = %.6f at sigma = %.4f, L = %.4f", o.value, o.sigma, o.L) +
        (result->flagged ? " (" + std::to_string(result->flagged) + " cells flagged)" : "");
    emit(ctx, sweep_table(*result, meta), summary);
    return kExitOk;
}

int cmd_optimize(Context& ctx) {
    std::string summary;
    auto params = ctx.cfg.optimize_params;
    params.solver = ctx.cfg.solver;
    emit(ctx, optimize_table(ctx, params, summary), summary);
    return kExitOk;
}

void add_range(CLI::App* app, const std::string& axis, Range& range, const std::string& what) {
    app->add_option("--" + axis + "-min", range.min, what + " range start")->capture_default_str();
    app->add_option("--" + axis + "-max", range.max, what + " range end")->capture_default_str();
    app->add_option("--" + axis + "-count", range.count, what + " grid points")->capture_default_str();
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Context ctx{RunConfig{}, false, out, err};
    RunConfig& c = ctx.cfg;
    std::string domain = "automatic";
    std::string rule = "trapezoid";

    CLI::App app{"Simulates a photonic controlled-phase gate built from a two-level emitter in a chiral waveguide.\n"
                 "Momenta and widths are in units of Gamma/v_g, lengths in v_g/Gamma.",
                 "cphase"};
    app.set_config("--config", "", "TOML/INI file with option values; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1, 1);
    app.fallthrough();

    app.add_option("--shape", c.shape, "Pulse shape")
        ->check(CLI::IsMember({"gaussian", "lorentzian", "sech"}))
        ->capture_default_str();
    app.add_option("--lorentzian-form", c.lorentzian_form, "Lorentzian amplitude convention")
        ->check(CLI::IsMember({"complex_pole", "real_sqrt"}))
        ->capture_default_str();
    app.add_option("--sigma", c.sigma, "Intensity FWHM of the pulse spectrum")->capture_default_str();
    app.add_option("--L", c.L, "Extra optical length of the reference arm")->capture_default_str();
    app.add_option("--delta", c.delta, "Carrier detuning from the emitter")->capture_default_str();
    app.add_option("--gamma-loss", c.gamma_loss, "Emitter loss rate into non-guided modes")->capture_default_str();
    app.add_option("--nodes", c.quad.nodes, "Starting quadrature nodes per axis")->capture_default_str();
    app.add_option("--rule", rule, "Quadrature rule")
        ->check(CLI::IsMember({"trapezoid", "gauss_legendre"}))
        ->capture_default_str();
    app.add_option("--domain", domain, "Integration domain")
        ->check(CLI::IsMember({"automatic", "window", "real_line"}))
        ->capture_default_str();
    app.add_option("--window", c.quad.window_halfwidth, "Window half-width (0: automatic)")->capture_default_str();
    app.add_option("--map-scale", c.quad.map_scale, "Real-line map scale (0: automatic)")->capture_default_str();
    auto* rel = app.add_option("--rel-tol", c.quad.rel_tol, "Relative convergence tolerance")->capture_default_str();
    app.add_option("--abs-tol", c.quad.abs_tol, "Absolute convergence floor")->capture_default_str();
    app.add_option("--max-refinements", c.quad.max_refinements, "Node doublings before giving up")
        ->capture_default_str();
    app.add_option("--solver-grid", c.solver.grid, "Coarse (a, z) grid per axis for the worst-case search")
        ->capture_default_str();
    app.add_option("--solver-tol", c.solver.tolerance, "Fidelity minimizer tolerance")->capture_default_str();
    app.add_option("-o,--output", c.output, "Output file (default: standard output)");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_flag("--cache,!--no-cache", c.cache, "Use the result cache for sweeps")->capture_default_str();
    app.add_option("--cache-dir", c.cache_dir, "Cache directory (default: $CPHASE_CACHE_DIR or ./.cphase-cache)");
    app.add_option("--workers", c.workers, "Worker threads (0: OpenMP default, 1: serial)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    for (const char* name : {"overlap1", "overlap2"}) {
        auto* sub = app.add_subcommand(name, std::string(name) == "overlap1"
                                                 ? "Single-photon overlap O1 with the ideal output"
                                                 : "Two-photon overlap T with the ideal output");
        sub->add_flag("--scan-L", c.scan_L, "Scan L over a range instead of a single value");
        add_range(sub, "L", c.L_range, "L scan");
    }

    auto* fid = app.add_subcommand("fidelity", "Worst-case gate fidelity at fixed (sigma, L)");
    fid->add_flag("--map", c.map, "Write the full (a, z) state-fidelity map");
    fid->add_option("--map-count", c.map_count, "Map points per axis")->capture_default_str();
    fid->add_flag("--optimize", c.optimize, "Maximize the gate fidelity over (sigma, L)");
    fid->add_option("--O1", c.inject_O1, "Use this O1 (re [im]) instead of computing it")->expected(1, 2);
    fid->add_option("--T", c.inject_T, "Use this T (re [im]) instead of computing it")->expected(1, 2);

    auto* sweep = app.add_subcommand("sweep", "Evaluate a quantity over a (sigma, L) grid");
    sweep->add_option("--quantity", c.quantity, "Quantity per cell")
        ->check(CLI::IsMember({"abs_O1", "abs_T", "gate_F", "state_F_map"}))
        ->capture_default_str();
    add_range(sweep, "sigma", c.sigma_range, "sigma");
    add_range(sweep, "L", c.sweep_L_range, "L");
    sweep->add_option("--map-count", c.map_count, "state_F_map points per axis")->capture_default_str();

    auto* opt = app.add_subcommand("optimize", "Maximize the gate fidelity over (sigma, L)");
    add_range(opt, "sigma", c.optimize_params.sigma, "Coarse sigma");
    add_range(opt, "L", c.optimize_params.L, "Coarse L");
    opt->add_option("--step-tol", c.optimize_params.step_tol, "Final pattern-search step")->capture_default_str();

    std::vector<std::string> storage{"cphase"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        c.subcommand = app.get_subcommands().front()->get_name();
        c.quad.domain = parse_domain(domain);
        c.quad.rule = parse_rule(rule);
        c.quad.validate();
        ctx.rel_tol_given = rel->count() > 0;
        if (c.subcommand == "overlap1") return cmd_overlap(ctx, false);
        if (c.subcommand == "overlap2") return cmd_overlap(ctx, true);
        if (c.subcommand == "fidelity") return cmd_fidelity(ctx);
        if (c.subcommand == "sweep") return cmd_sweep(ctx);
        return cmd_optimize(ctx);
    } catch (const NonConvergenceError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNonConvergence;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace cphase
