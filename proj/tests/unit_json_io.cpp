#include "doctest.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "pkn/fuzz.hpp"
#include "pkn/json_io.hpp"
#include "pkn/matrix.hpp"
#include "pkn/preserver.hpp"
#include "pkn/rng.hpp"
#include "pkn/tensor.hpp"

using pkn::cplx;
using pkn::Matrix;
using pkn::ordered_json;

TEST_CASE("matrix wire format round-trips") {
    pkn::Rng rng(130);
    const Matrix a = pkn::ginibre(3, 5, rng);
    const ordered_json j = pkn::matrix_to_json(a);
    CHECK(j["rows"] == 3);
    CHECK(j["cols"] == 5);
    CHECK(j["data"].size() == 15);
    const Matrix back = pkn::matrix_from_json(j);
    CHECK(pkn::max_abs_diff(a, back) == 0.0);
}

TEST_CASE("matrix reader rejects malformed input") {
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json(R"({"rows": 2, "cols": 2})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json(
                        R"({"rows": 2, "cols": 2, "data": [[1,0],[0,0],[0,0]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json(
                        R"({"rows": 1, "cols": 1, "data": [[1]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json(
                        R"({"rows": 1, "cols": 1, "data": [["x", 0]]})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json(
                        R"({"rows": 0, "cols": 1, "data": []})")),
                    std::invalid_argument);
    CHECK_THROWS_AS(pkn::matrix_from_json(pkn::parse_json("[1, 2, 3]")),
                    std::invalid_argument);
}

TEST_CASE("superoperator wire format round-trips and validates") {
    pkn::Rng rng(131);
    const pkn::TensorShape shape({2, 3});
    const pkn::Superoperator s{shape, pkn::ginibre(36, 36, rng)};
    const ordered_json j = pkn::superoperator_to_json(s);
    const pkn::Superoperator back = pkn::superoperator_from_json(j);
    CHECK(back.shape == shape);
    CHECK(pkn::max_abs_diff(back.mat, s.mat) == 0.0);

    ordered_json bad = j;
    bad["dims"] = std::vector<int>{2, 2};
    CHECK_THROWS_AS(pkn::superoperator_from_json(bad), std::invalid_argument);
    bad["dims"] = std::vector<int>{2, 1};
    CHECK_THROWS_AS(pkn::superoperator_from_json(bad), std::invalid_argument);
}

TEST_CASE("preserver wire format round-trips") {
    const pkn::TensorShape shape({2, 2});
    const pkn::CanonicalPreserver cp = pkn::sample_canonical(shape, 55);
    const ordered_json j = pkn::preserver_to_json(cp);
    for (const auto& f : j["flags"]) {
        const std::string s = f.get<std::string>();
        CHECK((s == "id" || s == "t"));
    }
    const pkn::CanonicalPreserver back = pkn::preserver_from_json(j);
    CHECK(back.flags == cp.flags);
    CHECK(pkn::max_abs_diff(back.u, cp.u) == 0.0);
    CHECK(pkn::max_abs_diff(back.v, cp.v) == 0.0);

    ordered_json bad = j;
    bad["flags"][0] = "transpose";
    CHECK_THROWS_AS(pkn::preserver_from_json(bad), std::invalid_argument);
    // non-unitary U is rejected by the constructor
    ordered_json skew = j;
    skew["U"]["data"][0] = std::vector<double>{5.0, 0.0};
    CHECK_THROWS_AS(pkn::preserver_from_json(skew), std::invalid_argument);
}

TEST_CASE("report serializers expose the documented fields") {
    const pkn::IneqReport rep = pkn::power_sum_reversal_instance(0.5);
    const ordered_json j = pkn::ineq_report_to_json(rep);
    CHECK(j["holds"] == true);
    CHECK(j.contains("slack"));
    CHECK(j.contains("witness"));

    pkn::IneqReport vac;
    vac.status = pkn::CheckStatus::vacuous;
    vac.slack = 0.0;
    const ordered_json jv = pkn::ineq_report_to_json(vac);
    CHECK(jv["holds"] == "vacuous");

    const pkn::FuzzSummary sum = pkn::run_fuzz_suite("scalar-convexity", 50, 1);
    const ordered_json js = pkn::fuzz_summary_to_json(sum);
    CHECK(js["suite"] == "scalar-convexity");
    CHECK(js["trials"] == 50);
    CHECK(js["violations"] == 0);
    CHECK(js.contains("min_slack"));
    CHECK(js["histogram"]["edges"].size() == js["histogram"]["counts"].size() + 1);

    const pkn::Superoperator phi =
        pkn::to_superoperator(pkn::sample_canonical(pkn::TensorShape({2, 2}), 3));
    const pkn::PreservationReport prep = pkn::verify_preservation(phi, {3.0, 2}, 20, 0);
    const ordered_json jp = pkn::preservation_report_to_json(prep);
    CHECK(jp["preserved"] == true);
    CHECK(jp["p"] == 3.0);
    CHECK(jp["k"] == 2);
    CHECK(jp["trials"] == 20);
    CHECK(jp.contains("max_deviation"));

    const pkn::DecompositionResult res = pkn::decompose_bipartite(phi, {3.0, 2});
    const ordered_json jd = pkn::decomposition_result_to_json(res);
    CHECK(jd.contains("preserver"));
    CHECK(jd.contains("residual"));
    CHECK(jd["diagnostics"].is_array());
    CHECK(!jd["diagnostics"].empty());
    CHECK(jd["diagnostics"][0].contains("stage"));
}

TEST_CASE("serialization is deterministic with full float precision") {
    ordered_json j;
    j["x"] = 0.1;
    j["y"] = 1.0;
    j["z"] = 1.0 / 3.0;
    const std::string s = pkn::dump_json(j, -1);
    CHECK(s.find("0.10000000000000001") != std::string::npos);
    CHECK(s.find("0.33333333333333331") != std::string::npos);
    CHECK(pkn::dump_json(j, -1) == s);

    const ordered_json back = pkn::parse_json(s);
    CHECK(back["x"].get<double>() == 0.1);
    CHECK(back["z"].get<double>() == 1.0 / 3.0);

    pkn::Rng rng(132);
    const Matrix a = pkn::ginibre(4, 4, rng);
    const std::string dumped = pkn::dump_json(pkn::matrix_to_json(a));
    const Matrix back2 = pkn::matrix_from_json(pkn::parse_json(dumped));
    CHECK(pkn::max_abs_diff(a, back2) == 0.0);
}

TEST_CASE("parser failures carry a clear error") {
    CHECK_THROWS_AS(pkn::parse_json("{not json"), std::invalid_argument);
    CHECK_THROWS_AS(pkn::parse_json(""), std::invalid_argument);
    CHECK_THROWS_AS(pkn::load_json_file("/nonexistent/path.json"), std::invalid_argument);
    try {
        pkn::parse_json("[1, 2,");
        FAIL("expected a parse failure");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("malformed JSON") != std::string::npos);
    }
}
