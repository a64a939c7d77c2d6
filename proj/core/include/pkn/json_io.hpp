#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "pkn/checks.hpp"
#include "pkn/fuzz.hpp"
#include "pkn/matrix.hpp"
#include "pkn/preserver.hpp"
#include "pkn/tensor.hpp"

namespace pkn {

using ordered_json = nlohmann::ordered_json;

// Matrix wire format: {"rows": r, "cols": c, "data": [[re, im], ...]} with
// data in row-major order.  All readers validate shape, types, and
// finiteness and throw std::invalid_argument with the offending field.
ordered_json matrix_to_json(const Matrix& a);
Matrix matrix_from_json(const ordered_json& j);

// {"dims": [n1, ...], "mat": Matrix}
ordered_json superoperator_to_json(const Superoperator& s);
Superoperator superoperator_from_json(const ordered_json& j);

// {"dims": [n1, ...], "flags": ["id"|"t", ...], "U": Matrix, "V": Matrix}
ordered_json preserver_to_json(const CanonicalPreserver& cp);
CanonicalPreserver preserver_from_json(const ordered_json& j);

ordered_json witness_to_json(const Witness& w);
// {"holds": true|false|"vacuous", "slack": s, "witness": optional}
ordered_json ineq_report_to_json(const IneqReport& rep);
ordered_json fuzz_summary_to_json(const FuzzSummary& sum);
ordered_json preservation_report_to_json(const PreservationReport& rep);
ordered_json decomposition_result_to_json(const DecompositionResult& res);

/// Serializes with every float printed at 17 significant digits, so equal
/// values always produce identical bytes.  indent < 0 emits compact output.
std::string dump_json(const ordered_json& j, int indent = 2);

/// Wraps nlohmann parsing; malformed text throws std::invalid_argument.
ordered_json parse_json(const std::string& text);
ordered_json load_json_file(const std::string& path);

}  // namespace pkn
