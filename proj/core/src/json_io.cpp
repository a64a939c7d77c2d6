#include "pkn/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace pkn {

namespace {

const ordered_json& require_field(const ordered_json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw std::invalid_argument(std::string("missing field \"") + key + "\"");
    return j.at(key);
}

double finite_number(const ordered_json& j, const char* what) {
    if (!j.is_number())
        throw std::invalid_argument(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string(what) + " must be finite");
    return v;
}

std::size_t positive_integer(const ordered_json& j, const char* what) {
    if (!j.is_number_integer() && !j.is_number_unsigned())
        throw std::invalid_argument(std::string(what) + " must be an integer");
    const std::int64_t v = j.get<std::int64_t>();
    if (v < 1) throw std::invalid_argument(std::string(what) + " must be positive");
    return static_cast<std::size_t>(v);
}

std::vector<int> dims_from_json(const ordered_json& j) {
    const ordered_json& dims = require_field(j, "dims");
    if (!dims.is_array() || dims.empty())
        throw std::invalid_argument("\"dims\" must be a non-empty array");
    std::vector<int> out;
    out.reserve(dims.size());
    for (const ordered_json& d : dims)
        out.push_back(static_cast<int>(positive_integer(d, "\"dims\" entry")));
    return out;
}

ordered_json complex_pair(cplx z) { return ordered_json::array({z.real(), z.imag()}); }

}  // namespace

ordered_json matrix_to_json(const Matrix& a) {
    ordered_json data = ordered_json::array();
    for (cplx z : a.data()) data.push_back(complex_pair(z));
    return ordered_json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const ordered_json& j) {
    const std::size_t rows = positive_integer(require_field(j, "rows"), "\"rows\"");
    const std::size_t cols = positive_integer(require_field(j, "cols"), "\"cols\"");
    const ordered_json& data = require_field(j, "data");
    if (!data.is_array() || data.size() != rows * cols)
        throw std::invalid_argument("\"data\" must be an array of rows*cols entries");
    std::vector<cplx> entries;
    entries.reserve(rows * cols);
    for (const ordered_json& e : data) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("matrix entries must be [re, im] pairs");
        entries.emplace_back(finite_number(e[0], "matrix entry"),
                             finite_number(e[1], "matrix entry"));
    }
    return Matrix(rows, cols, std::move(entries));
}

ordered_json superoperator_to_json(const Superoperator& s) {
    return ordered_json{{"dims", s.shape.dims}, {"mat", matrix_to_json(s.mat)}};
}

Superoperator superoperator_from_json(const ordered_json& j) {
    TensorShape shape(dims_from_json(j));
    Matrix mat = matrix_from_json(require_field(j, "mat"));
    return Superoperator(std::move(shape), std::move(mat));
}

ordered_json preserver_to_json(const CanonicalPreserver& cp) {
    ordered_json flags = ordered_json::array();
    for (bool f : cp.flags) flags.push_back(f ? "t" : "id");
    return ordered_json{{"dims", cp.shape.dims},
                        {"flags", std::move(flags)},
                        {"U", matrix_to_json(cp.u)},
                        {"V", matrix_to_json(cp.v)}};
}

CanonicalPreserver preserver_from_json(const ordered_json& j) {
    TensorShape shape(dims_from_json(j));
    const ordered_json& jflags = require_field(j, "flags");
    if (!jflags.is_array())
        throw std::invalid_argument("\"flags\" must be an array of \"id\" / \"t\"");
    std::vector<bool> flags;
    flags.reserve(jflags.size());
    for (const ordered_json& f : jflags) {
        if (f == "id")
            flags.push_back(false);
        else if (f == "t")
            flags.push_back(true);
        else
            throw std::invalid_argument("\"flags\" entries must be \"id\" or \"t\"");
    }
    Matrix u = matrix_from_json(require_field(j, "U"));
    Matrix v = matrix_from_json(require_field(j, "V"));
    return CanonicalPreserver(std::move(shape), std::move(u), std::move(v), std::move(flags));
}

ordered_json witness_to_json(const Witness& w) {
    ordered_json scalars = ordered_json::object();
    for (const auto& [name, value] : w.scalars) scalars[name] = value;
    ordered_json matrices = ordered_json::object();
    for (const auto& [name, m] : w.matrices) matrices[name] = matrix_to_json(m);
    return ordered_json{{"scalars", std::move(scalars)}, {"matrices", std::move(matrices)}};
}

ordered_json ineq_report_to_json(const IneqReport& rep) {
    ordered_json j;
    switch (rep.status) {
        case CheckStatus::holds: j["holds"] = true; break;
        case CheckStatus::violated: j["holds"] = false; break;
        case CheckStatus::vacuous: j["holds"] = "vacuous"; break;
    }
    j["slack"] = rep.slack;
    if (rep.witness) j["witness"] = witness_to_json(*rep.witness);
    return j;
}

ordered_json fuzz_summary_to_json(const FuzzSummary& sum) {
    ordered_json j{{"suite", sum.suite},
                   {"trials", sum.trials},
                   {"seed", sum.seed},
                   {"violations", sum.violations},
                   {"vacuous", sum.vacuous},
                   {"min_slack", sum.min_slack},
                   {"max_slack", sum.max_slack},
                   {"histogram",
                    ordered_json{{"edges", sum.histogram.edges},
                                 {"counts", sum.histogram.counts}}}};
    if (sum.first_violation) j["first_violation"] = witness_to_json(*sum.first_violation);
    return j;
}

ordered_json preservation_report_to_json(const PreservationReport& rep) {
    ordered_json j{{"p", rep.params.p},
                   {"k", rep.params.k},
                   {"trials", rep.trials},
                   {"seed", rep.seed},
                   {"tol", rep.tol},
                   {"max_deviation", rep.max_deviation},
                   {"worst_trial", rep.worst_trial},
                   {"preserved", rep.preserved}};
    if (rep.first_violation) j["first_violation"] = witness_to_json(*rep.first_violation);
    return j;
}

ordered_json decomposition_result_to_json(const DecompositionResult& res) {
    ordered_json diags = ordered_json::array();
    for (const StageDiagnostic& d : res.diagnostics)
        diags.push_back(ordered_json{{"stage", d.stage}, {"depth", d.depth},
                                     {"residual", d.residual}});
    return ordered_json{{"preserver", preserver_to_json(res.preserver)},
                        {"residual", res.residual},
                        {"diagnostics", std::move(diags)}};
}

namespace {

void dump_rec(std::string& out, const ordered_json& j, int indent, int level) {
    const auto newline = [&](int lvl) {
        if (indent >= 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent) * lvl, ' ');
        }
    };
    switch (j.type()) {
        case ordered_json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                newline(level + 1);
                out += ordered_json(key).dump();
                out += indent >= 0 ? ": " : ":";
                dump_rec(out, value, indent, level + 1);
            }
            newline(level);
            out += '}';
            return;
        }
        case ordered_json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const ordered_json& value : j) {
                if (!first) out += ',';
                first = false;
                newline(level + 1);
                dump_rec(out, value, indent, level + 1);
            }
            newline(level);
            out += ']';
            return;
        }
        case ordered_json::value_t::string:
            out += j.dump();
            return;
        case ordered_json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            return;
        case ordered_json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            return;
        case ordered_json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            return;
        case ordered_json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        default:
            out += "null";
            return;
    }
}

}  // namespace

std::string dump_json(const ordered_json& j, int indent) {
    std::string out;
    dump_rec(out, j, indent, 0);
    return out;
}

ordered_json parse_json(const std::string& text) {
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
    }
}

ordered_json load_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str());
}

}  // namespace pkn
