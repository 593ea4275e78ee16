#include "cphase/output.hpp"

#include "cphase/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace cphase {

using nlohmann::json;

namespace {

json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
double number_from(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Range range_from_json(const json& j) {
    return Range{j.at("min").get<double>(), j.at("max").get<double>(), j.at("count").get<int>()};
}

} // namespace

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw ParameterError("unknown output format '" + std::string(name) + "'");
}

json to_json(const QuadratureSpec& q) {
    return {{"domain", to_string(q.domain)}, {"window_halfwidth", q.window_halfwidth},
            {"map_scale", q.map_scale},     {"nodes", q.nodes},
            {"rule", to_string(q.rule)},    {"rel_tol", q.rel_tol},
            {"abs_tol", q.abs_tol},         {"max_refinements", q.max_refinements}};
}

json to_json(const EmitterParams& e) {
    return {{"delta", e.delta}, {"gamma_wg", e.gamma_wg}, {"gamma_loss", e.gamma_loss}};
}

json to_json(const ConvergenceReport& r) {
    return {{"nodes", r.nodes},
            {"refinements", r.refinements},
            {"last_rel_change", r.last_rel_change},
            {"converged", r.converged}};
}

json to_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"count", r.count}}; }

json to_json(const FidelitySolver& s) { return {{"grid", s.grid}, {"tolerance", s.tolerance}}; }

json to_json(const SweepSpec& s) {
    json j{{"sigma", to_json(s.sigma)},
           {"L", to_json(s.L)},
           {"shape", to_string(s.shape)},
           {"lorentzian_form", to_string(s.lorentzian)},
           {"emitter", to_json(s.emitter)},
           {"quadrature", to_json(s.quad)},
           {"quantity", to_string(s.quantity)},
           {"solver", to_json(s.solver)}};
    if (s.quantity == Quantity::state_F_map) {
        j["map_sigma"] = s.map_sigma;
        j["map_L"] = s.map_L;
        j["map_count"] = s.map_count;
    }
    return j;
}

QuadratureSpec quadrature_from_json(const json& j) {
    QuadratureSpec q;
    q.domain = parse_domain(j.at("domain").get<std::string>());
    q.window_halfwidth = j.at("window_halfwidth").get<double>();
    q.map_scale = j.at("map_scale").get<double>();
    q.nodes = j.at("nodes").get<int>();
    q.rule = parse_rule(j.at("rule").get<std::string>());
    q.rel_tol = j.at("rel_tol").get<double>();
    q.abs_tol = j.at("abs_tol").get<double>();
    q.max_refinements = j.at("max_refinements").get<int>();
    return q;
}

EmitterParams emitter_from_json(const json& j) {
    return EmitterParams{j.at("delta").get<double>(), j.at("gamma_wg").get<double>(),
                         j.at("gamma_loss").get<double>()};
}

SweepSpec sweep_spec_from_json(const json& j) {
    SweepSpec s;
    s.sigma = range_from_json(j.at("sigma"));
    s.L = range_from_json(j.at("L"));
    s.shape = parse_shape(j.at("shape").get<std::string>());
    s.lorentzian = parse_lorentzian_form(j.at("lorentzian_form").get<std::string>());
    s.emitter = emitter_from_json(j.at("emitter"));
    s.quad = quadrature_from_json(j.at("quadrature"));
    s.quantity = parse_quantity(j.at("quantity").get<std::string>());
    s.solver = FidelitySolver{j.at("solver").at("grid").get<int>(), j.at("solver").at("tolerance").get<double>()};
    if (s.quantity == Quantity::state_F_map) {
        s.map_sigma = j.at("map_sigma").get<double>();
        s.map_L = j.at("map_L").get<double>();
        s.map_count = j.at("map_count").get<int>();
    }
    return s;
}

json to_json(const SweepResult& r) {
    json cells = json::array();
    for (const auto& c : r.cells)
        cells.push_back({c.sigma, c.L, c.a, c.z, number_or_null(c.value.real()), number_or_null(c.value.imag()),
                         c.converged});
    return {{"hash", r.hash},
            {"engine_version", r.engine_version},
            {"spec", to_json(r.spec)},
            {"rows", r.rows},
            {"cols", r.cols},
            {"flagged", r.flagged},
            {"optimum",
             {{"found", r.optimum.found},
              {"value", number_or_null(r.optimum.value)},
              {"sigma", r.optimum.sigma},
              {"L", r.optimum.L},
              {"a", r.optimum.a},
              {"z", r.optimum.z}}},
            {"cells", std::move(cells)}};
}

SweepResult sweep_result_from_json(const json& j) {
    SweepResult r;
    r.hash = j.at("hash").get<std::string>();
    r.engine_version = j.at("engine_version").get<std::string>();
    r.spec = sweep_spec_from_json(j.at("spec"));
    r.rows = j.at("rows").get<int>();
    r.cols = j.at("cols").get<int>();
    r.flagged = j.at("flagged").get<std::size_t>();
    const auto& o = j.at("optimum");
    r.optimum = SweepOptimum{o.at("found").get<bool>(), number_from(o.at("value")), o.at("sigma").get<double>(),
                             o.at("L").get<double>(),    o.at("a").get<double>(),     o.at("z").get<double>()};
    const auto& cells = j.at("cells");
    if (r.rows < 0 || r.cols < 0 || cells.size() != static_cast<std::size_t>(r.rows) * static_cast<std::size_t>(r.cols))
        throw ParameterError("cell count does not match the stored shape");
    r.cells.reserve(cells.size());
    for (const auto& c : cells) {
        if (!c.is_array() || c.size() != 7) throw ParameterError("malformed cell record");
        r.cells.push_back(SweepCell{c[0].get<double>(), c[1].get<double>(), c[2].get<double>(), c[3].get<double>(),
                                    {number_from(c[4]), number_from(c[5])}, c[6].get<bool>()});
    }
    return r;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", value);
    return buf;
}

void write_table(std::ostream& os, const Table& table, Format format) {
    if (format == Format::json) {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json r = json::array();
            for (const auto& cell : row)
                std::visit([&](const auto& v) {
                    using V = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<V, double>)
                        r.push_back(number_or_null(v));
                    else
                        r.push_back(v);
                }, cell);
            rows.push_back(std::move(r));
        }
        os << json{{"metadata", table.metadata}, {"columns", table.columns}, {"rows", std::move(rows)}}.dump(2)
           << '\n';
        return;
    }
    os << "# " << table.metadata.dump() << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit([&](const auto& v) {
                using V = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<V, double>)
                    os << format_number(v);
                else if constexpr (std::is_same_v<V, bool>)
                    os << (v ? "true" : "false");
                else
                    os << v;
            }, row[i]);
        }
        os << '\n';
    }
}

Table sweep_table(const SweepResult& result, const json& metadata) {
    Table t;
    t.metadata = metadata;
    t.columns = {"sigma", "L", "quantity", "re", "im", "abs", "converged"};
    const bool map = result.spec.quantity == Quantity::state_F_map;
    if (map) {
        t.columns.push_back("a");
        t.columns.push_back("z");
    }
    const std::string quantity(to_string(result.spec.quantity));
    for (const auto& c : result.cells) {
        std::vector<TableCell> row{c.sigma,
                                   c.L,
                                   quantity,
                                   c.value.real(),
                                   c.value.imag(),
                                   c.converged ? std::abs(c.value) : std::numeric_limits<double>::quiet_NaN(),
                                   c.converged};
        if (map) {
            row.emplace_back(c.a);
            row.emplace_back(c.z);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace cphase
