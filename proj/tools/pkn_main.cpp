// Batch front end: compute norms, fuzz the inequality suites, verify and
// decompose candidate preservers.  JSON in, JSON out; exit 0 on success,
// 1 when a mathematical violation or rejection was found, 2 on bad input.
#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pkn/fuzz.hpp"
#include "pkn/json_io.hpp"
#include "pkn/norms.hpp"
#include "pkn/preserver.hpp"

namespace {

using pkn::ordered_json;

void emit(const ordered_json& j, const std::string& out_path) {
    const std::string text = pkn::dump_json(j, 2) + "\n";
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fflush(stdout);
    } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot write file: " + out_path);
        f << text;
    }
}

double witness_scalar(const pkn::Witness& w, const std::string& name) {
    for (const auto& [key, value] : w.scalars)
        if (key == name) return value;
    throw std::logic_error("missing witness scalar: " + name);
}

struct Options {
    double p = 3.0;
    int k = 2;
    std::vector<int> dims;
    std::int64_t trials = 1000;
    std::uint64_t seed = 0;
    double tol = 1e-9;
    double gamma = 0.5;
    std::string matrix_path;
    std::string map_path;
    std::string suite = "all";
    std::string out_path;
};

int cmd_norm(const Options& opt) {
    const pkn::Matrix a = pkn::matrix_from_json(pkn::load_json_file(opt.matrix_path));
    const pkn::PkParams params(opt.p, opt.k);
    const int limit = static_cast<int>(std::min(a.rows(), a.cols()));
    const int k_effective = std::min(opt.k, limit);
    ordered_json j{{"command", "norm"},
                   {"config", ordered_json{{"p", opt.p},
                                           {"k", opt.k},
                                           {"matrix", opt.matrix_path}}},
                   {"value", pk_norm(a, params)},
                   {"k_effective", k_effective},
                   {"clamped", k_effective != opt.k}};
    emit(j, opt.out_path);
    return 0;
}

int cmd_verify(const Options& opt) {
    const pkn::Superoperator phi =
        pkn::superoperator_from_json(pkn::load_json_file(opt.map_path));
    if (!opt.dims.empty() && opt.dims != phi.shape.dims)
        throw std::invalid_argument("--dims does not match the dimensions in the map file");
    const pkn::PreservationReport rep = pkn::verify_preservation(
        phi, pkn::PkParams(opt.p, opt.k), opt.trials, opt.seed, opt.tol);
    ordered_json j{{"command", "verify"},
                   {"config", ordered_json{{"p", opt.p},
                                           {"k", opt.k},
                                           {"dims", phi.shape.dims},
                                           {"trials", opt.trials},
                                           {"seed", opt.seed},
                                           {"tol", opt.tol},
                                           {"map", opt.map_path}}},
                   {"report", pkn::preservation_report_to_json(rep)}};
    emit(j, opt.out_path);
    return rep.preserved ? 0 : 1;
}

int cmd_decompose(const Options& opt) {
    const pkn::Superoperator phi =
        pkn::superoperator_from_json(pkn::load_json_file(opt.map_path));
    if (!opt.dims.empty() && opt.dims != phi.shape.dims)
        throw std::invalid_argument("--dims does not match the dimensions in the map file");
    const ordered_json config{{"p", opt.p},
                              {"k", opt.k},
                              {"dims", phi.shape.dims},
                              {"tol", opt.tol},
                              {"map", opt.map_path}};
    const pkn::PkParams params(opt.p, opt.k);
    try {
        const pkn::DecompositionResult res =
            phi.shape.factors() == 2 ? pkn::decompose_bipartite(phi, params)
                                     : pkn::decompose_multipartite(phi, params);
        ordered_json j{{"command", "decompose"}, {"config", config}};
        ordered_json body = pkn::decomposition_result_to_json(res);
        for (auto& [key, value] : body.items()) j[key] = std::move(value);
        emit(j, opt.out_path);
        return 0;
    } catch (const pkn::DecompositionError& e) {
        ordered_json j{{"command", "decompose"},
                       {"config", config},
                       {"rejected", true},
                       {"stage", e.stage},
                       {"depth", e.depth},
                       {"residual", e.residual},
                       {"message", e.what()}};
        emit(j, opt.out_path);
        return 1;
    }
}

int cmd_fuzz(const Options& opt) {
    std::vector<std::string> names;
    if (opt.suite == "all")
        names = pkn::fuzz_suite_names();
    else
        names.push_back(opt.suite);
    std::int64_t total_violations = 0;
    ordered_json suites = ordered_json::array();
    for (const std::string& name : names) {
        const pkn::FuzzSummary sum = pkn::run_fuzz_suite(name, opt.trials, opt.seed);
        total_violations += sum.violations;
        suites.push_back(pkn::fuzz_summary_to_json(sum));
    }
    ordered_json j{{"command", "fuzz-lemmas"},
                   {"config", ordered_json{{"suite", opt.suite},
                                           {"trials", opt.trials},
                                           {"seed", opt.seed}}},
                   {"violations", total_violations},
                   {"suites", std::move(suites)}};
    emit(j, opt.out_path);
    return total_violations == 0 ? 0 : 1;
}

int cmd_counterexample(const Options& opt) {
    // throws on gamma outside (0,1) or k outside the fixed 4x4 instance
    const pkn::IneqReport rep = pkn::power_sum_reversal_instance(opt.gamma, opt.k);
    const pkn::Witness& w = *rep.witness;
    ordered_json j{{"command", "counterexample"},
                   {"config", ordered_json{{"gamma", opt.gamma}, {"k", opt.k}}},
                   {"instance", ordered_json{{"sum_diagonal", {1.0, 1.0, 3.0, 3.0}},
                                             {"difference_diagonal", {3.0, 3.0, 1.0, 1.0}}}},
                   {"lhs", witness_scalar(w, "lhs")},
                   {"rhs", witness_scalar(w, "rhs")},
                   {"slack", rep.slack},
                   {"reversed", rep.holds()}};
    emit(j, opt.out_path);
    return rep.holds() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"(p,k)-norm toolkit: norms, inequality fuzzing, preserver "
                 "verification and decomposition"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", opt.out_path, "write the JSON report here instead of stdout");
    };

    CLI::App* norm = app.add_subcommand("norm", "(p,k)-norm of a matrix file");
    norm->add_option("--matrix", opt.matrix_path, "matrix JSON file")->required();
    norm->add_option("--p", opt.p, "norm exponent, >= 1")->required();
    norm->add_option("--k", opt.k, "number of singular values, >= 1")->required();
    add_common(norm);

    CLI::App* verify = app.add_subcommand(
        "verify", "sampled norm-preservation check of a superoperator on tensor products");
    verify->add_option("--map", opt.map_path, "superoperator JSON file")->required();
    verify->add_option("--p", opt.p, "norm exponent, >= 1")->required();
    verify->add_option("--k", opt.k, "number of singular values, >= 1")->required();
    verify->add_option("--dims", opt.dims, "expected factor dimensions a,b[,c...]")
        ->delimiter(',');
    verify->add_option("--trials", opt.trials, "sample count (default 1000)");
    verify->add_option("--seed", opt.seed, "RNG seed (default 0)");
    verify->add_option("--tol", opt.tol, "max allowed relative deviation (default 1e-9)");
    add_common(verify);

    CLI::App* decompose = app.add_subcommand(
        "decompose", "recover (U, V, flags) from a canonical-preserver superoperator");
    decompose->add_option("--map", opt.map_path, "superoperator JSON file")->required();
    decompose->add_option("--p", opt.p, "norm exponent, must exceed 2")->required();
    decompose->add_option("--k", opt.k, "number of singular values, >= 1")->required();
    decompose->add_option("--dims", opt.dims, "expected factor dimensions a,b[,c...]")
        ->delimiter(',');
    decompose->add_option("--tol", opt.tol, "reported only; stage tolerances are fixed");
    add_common(decompose);

    CLI::App* fuzz = app.add_subcommand("fuzz-lemmas",
                                        "run one or all randomized inequality suites");
    fuzz->add_option("--suite", opt.suite, "suite name or \"all\" (default all)");
    fuzz->add_option("--trials", opt.trials, "instances per suite (default 1000)");
    fuzz->add_option("--seed", opt.seed, "RNG seed (default 0)");
    add_common(fuzz);

    CLI::App* counter = app.add_subcommand(
        "counterexample", "evaluate the fixed 4x4 instance reversing the power-sum bound");
    counter->add_option("--gamma", opt.gamma, "exponent in (0,1)")->required();
    counter->add_option("--k", opt.k, "top eigenvalues counted (default 2)");
    add_common(counter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (norm->parsed()) return cmd_norm(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (decompose->parsed()) return cmd_decompose(opt);
        if (fuzz->parsed()) return cmd_fuzz(opt);
        if (counter->parsed()) return cmd_counterexample(opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
