#include "oracles.hpp"

#include "tabint/analysis/analyzer.hpp"
#include "tabint/analysis/naive.hpp"
#include "tabint/analysis/report.hpp"
#include "tabint/domains/groundness.hpp"
#include "tabint/domains/sharefree.hpp"
#include "tabint/parser.hpp"

#include <doctest.h>

#include <string>
#include <vector>

using namespace tabint;

namespace {

std::vector<AnalysisResult> all_entries_tabled(const Program& p, const Domain& d) {
    std::vector<AnalysisResult> out;
    for (const EntryDecl& e : p.entries)
        out.push_back(analyze_tabled(p, e, d));
    return out;
}

std::vector<AnalysisResult> all_entries_naive(const Program& p, const Domain& d) {
    std::vector<AnalysisResult> out;
    for (const EntryDecl& e : p.entries)
        out.push_back(analyze_naive(p, e, d));
    return out;
}

} // namespace

TEST_CASE("report schema") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")), "append.pl");
    const Domain& d = gr::domain();
    nlohmann::json rep =
        make_report("append.pl", d.name(), "tabled", p, d, all_entries_tabled(p, d), 1.25);

    CHECK(rep.at("program") == "append.pl");
    CHECK(rep.at("domain") == "gr");
    CHECK(rep.at("engine") == "tabled");
    CHECK(rep.at("wall_ms") == doctest::Approx(1.25));
    CHECK(rep.at("entries").size() == 2);
    REQUIRE(!rep.at("completes").empty());
    for (const auto& row : rep.at("completes")) {
        CHECK(row.contains("pred"));
        CHECK(row.contains("goal"));
        CHECK(row.contains("call"));
        CHECK(row.contains("call_text"));
        CHECK(row.contains("success"));
        CHECK(row.contains("success_text"));
    }
    // rows are sorted by (pred, goal, call_text)
    const auto& rows = rep.at("completes");
    for (size_t i = 1; i < rows.size(); ++i) {
        auto key = [&](size_t j) {
            return std::make_tuple(rows[j].at("pred").get<std::string>(),
                                   rows[j].at("goal").get<std::string>(),
                                   rows[j].at("call_text").get<std::string>());
        };
        CHECK(key(i - 1) < key(i));
    }
    REQUIRE(!rep.at("program_points").empty());
    for (const auto& row : rep.at("program_points")) {
        CHECK(row.contains("clause"));
        CHECK(row.contains("position"));
        CHECK(row.contains("clause_text"));
        CHECK(row.contains("subst"));
        CHECK(row.contains("subst_text"));
    }
    for (const char* k : {"patterns", "body_evals", "suspensions", "resumptions",
                          "answers_proposed", "answers_joined", "answers_discarded", "restarts"})
        CHECK(rep.at("counters").contains(k));
    CHECK(rep.contains("warnings"));
}

TEST_CASE("text rendering is a pure function of the serialized report") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("reverse.pl")), "reverse.pl");
    const Domain& d = shfr::domain();
    nlohmann::json rep =
        make_report("reverse.pl", d.name(), "tabled", p, d, all_entries_tabled(p, d), 0.5);

    std::string direct = render_report_text(rep, true);
    nlohmann::json reparsed = nlohmann::json::parse(rep.dump());
    CHECK(render_report_text(reparsed, true) == direct);
    CHECK(direct.find("program: reverse.pl") != std::string::npos);
    CHECK(direct.find("completes:") != std::string::npos);
    CHECK(direct.find("program points:") != std::string::npos);
    CHECK(direct.find("wall_ms: 0.500") != std::string::npos);
    // points are omitted unless requested
    CHECK(render_report_text(rep, false).find("program points:") == std::string::npos);
}

TEST_CASE("completes section is byte-identical across engines") {
    for (const char* file : {"append.pl", "reverse.pl", "fib.pl", "mutual.pl"}) {
        Program p = parse_program(oracles::slurp(oracles::corpus_path(file)), file);
        for (const Domain* d : {&gr::domain(), &shfr::domain()}) {
            INFO("program=", file, " domain=", d->name());
            nlohmann::json t =
                make_report(file, d->name(), "tabled", p, *d, all_entries_tabled(p, *d), 0.0);
            nlohmann::json n =
                make_report(file, d->name(), "naive", p, *d, all_entries_naive(p, *d), 0.0);
            CHECK(render_completes_section(t) == render_completes_section(n));
            CHECK(t.at("warnings") == n.at("warnings"));
        }
    }
}

TEST_CASE("duplicate per-entry results collapse to one row set") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")), "append.pl");
    const Domain& d = gr::domain();
    std::vector<AnalysisResult> once = all_entries_tabled(p, d);
    std::vector<AnalysisResult> twice = once;
    twice.insert(twice.end(), once.begin(), once.end());

    nlohmann::json a = make_report("append.pl", d.name(), "tabled", p, d, once, 0.0);
    nlohmann::json b = make_report("append.pl", d.name(), "tabled", p, d, twice, 0.0);
    CHECK(a.at("completes") == b.at("completes"));
    CHECK(a.at("program_points") == b.at("program_points")); // lub is idempotent
    // counters add up, they are raw work measures
    CHECK(b.at("counters").at("body_evals").get<std::uint64_t>() ==
          2 * a.at("counters").at("body_evals").get<std::uint64_t>());
}

TEST_CASE("warnings are merged and deduplicated") {
    Program p = parse_program("p(X) :- ghost(X).\nq(X) :- ghost(X).\n"
                              ":- entry p(A) : [ground(A)].\n:- entry q(A) : [ground(A)].",
                              "warn.pl");
    const Domain& d = gr::domain();
    nlohmann::json rep =
        make_report("warn.pl", d.name(), "tabled", p, d, all_entries_tabled(p, d), 0.0);
    REQUIRE(rep.at("warnings").size() == 1);
    CHECK(rep.at("warnings")[0].get<std::string>() ==
          "unknown predicate ghost/1: assuming top success");
    std::string text = render_report_text(rep, false);
    CHECK(text.find("unknown predicate ghost/1") != std::string::npos);
}

TEST_CASE("empty warning list renders a placeholder") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")), "append.pl");
    const Domain& d = gr::domain();
    nlohmann::json rep =
        make_report("append.pl", d.name(), "tabled", p, d, all_entries_tabled(p, d), 0.0);
    CHECK(render_report_text(rep, false).find("warnings: (none)") != std::string::npos);
}
