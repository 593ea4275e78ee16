#pragma once

// Serialization: JSON forms of the parameter types, the result payload used by
// the cache, and the CSV/JSON table layout shared by every CLI subcommand.

#include "cphase/fidelity.hpp"
#include "cphase/quadrature.hpp"
#include "cphase/scattering.hpp"
#include "cphase/sweep.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace cphase {

enum class Format { csv, json };
Format parse_format(std::string_view name);

nlohmann::json to_json(const QuadratureSpec& quad);
nlohmann::json to_json(const EmitterParams& emitter);
nlohmann::json to_json(const ConvergenceReport& report);
nlohmann::json to_json(const Range& range);
nlohmann::json to_json(const FidelitySolver& solver);
nlohmann::json to_json(const SweepSpec& spec);
nlohmann::json to_json(const SweepResult& result);

QuadratureSpec quadrature_from_json(const nlohmann::json& j);
EmitterParams emitter_from_json(const nlohmann::json& j);
SweepSpec sweep_spec_from_json(const nlohmann::json& j);
/// Throws nlohmann::json::exception or ParameterError on malformed input.
SweepResult sweep_result_from_json(const nlohmann::json& j);

/// Fixed 12-significant-digit scientific notation; "nan" for NaN.
std::string format_number(double value);

using TableCell = std::variant<double, std::string, bool, long long>;

struct Table {
    nlohmann::json metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<TableCell>> rows;
};

/// CSV: one "# " line holding the metadata JSON, a header line, then rows.
/// JSON: {"metadata": ..., "columns": [...], "rows": [[...], ...]}.
void write_table(std::ostream& os, const Table& table, Format format);

/// Sweep cells in the stable layout sigma,L,quantity,re,im,abs,converged
/// (state_F_map appends a,z).
Table sweep_table(const SweepResult& result, const nlohmann::json& metadata);

} // namespace cphase
