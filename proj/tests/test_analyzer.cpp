#include "oracles.hpp"

#include "tabint/analysis/analyzer.hpp"
#include "tabint/analysis/differential.hpp"
#include "tabint/domains/groundness.hpp"
#include "tabint/domains/sharefree.hpp"
#include "tabint/errors.hpp"
#include "tabint/parser.hpp"

#include <doctest.h>

#include <algorithm>

using namespace tabint;

namespace {

std::string cva(VarId v) { return canonical_var_name(static_cast<int>(v)); }

const Domain& GR = gr::domain();
const Domain& SF = shfr::domain();

AnalysisResult run(const std::string& src, const Domain& dom, size_t entry_idx = 0,
                   AnalyzeOptions opts = {}) {
    Program p = parse_program(src);
    REQUIRE(p.entries.size() > entry_idx);
    return analyze_tabled(p, p.entries[entry_idx], dom, opts);
}

size_t count_pred(const AnalysisResult& r, const std::string& pred) {
    return static_cast<size_t>(std::count_if(r.completes.begin(), r.completes.end(),
                                             [&](const CompleteEntry& c) { return c.pred.str() == pred; }));
}

const CompleteEntry& find_complete(const AnalysisResult& r, const std::string& goal_text) {
    for (const CompleteEntry& c : r.completes)
        if (term_to_string(c.goal) == goal_text)
            return c;
    REQUIRE_MESSAGE(false, "no complete for " << goal_text);
    static CompleteEntry dummy;
    return dummy;
}

} // namespace

TEST_CASE("a single fact grounds its argument") {
    AnalysisResult r = run("p(a).\n:- entry p(X) : [any(X)].", GR);
    REQUIRE(r.completes.size() == 1);
    const CompleteEntry& c = r.completes[0];
    CHECK(c.pred.str() == "p/1");
    CHECK(term_to_string(c.goal) == "p(A)");
    CHECK(GR.render(c.call, cva) == "A/any");
    CHECK(GR.render(c.success, cva) == "A/g");
    CHECK(r.counters.patterns == 1);
    CHECK(r.warnings.empty());
}

TEST_CASE("ground append stays on one call pattern and grounds the result") {
    std::string src = oracles::slurp(oracles::corpus_path("append.pl"));
    AnalysisResult r = run(src, GR, 0);
    REQUIRE(r.completes.size() == 1); // the inner call is a variant of the entry
    const CompleteEntry& c = r.completes[0];
    CHECK(GR.render(c.call, cva) == "A/g, B/g, C/any");
    CHECK(GR.render(c.success, cva) == "A/g, B/g, C/g");
    CHECK(r.counters.patterns == 1);
    CHECK(r.counters.body_evals == 2); // one clause walk each, no re-runs
    CHECK(r.counters.suspensions == 1);
}

TEST_CASE("free append couples the output with both inputs") {
    std::string src = oracles::slurp(oracles::corpus_path("append.pl"));
    AnalysisResult r = run(src, SF, 1);
    // the entry pattern is created first; deeper calls may refine into
    // further patterns of their own
    REQUIRE(!r.completes.empty());
    const CompleteEntry& c = r.completes[0];
    CHECK(SF.render(c.call, cva) == "sh: [[A],[B],[C]]  fr: A,B,C");
    nlohmann::json sh = SF.to_json(c.success, cva).at("sh");
    auto has_group_with = [&](std::vector<std::string> want) {
        for (const auto& g : sh) {
            bool all = true;
            for (const auto& w : want)
                if (std::find(g.begin(), g.end(), nlohmann::json(w)) == g.end())
                    all = false;
            if (all)
                return true;
        }
        return false;
    };
    CHECK(has_group_with({"A", "C"}));
    CHECK(has_group_with({"B", "C"}));
    // concretely the first argument is always instantiated by the head
    nlohmann::json fr = SF.to_json(c.success, cva).at("fr");
    CHECK(std::find(fr.begin(), fr.end(), nlohmann::json("A")) == fr.end());
}

TEST_CASE("identity through an explicit unification keeps freeness") {
    AnalysisResult r = run("id2(X, Y) :- X = Y.\n:- entry id2(A, B) : [free(A), free(B)].", SF);
    REQUIRE(r.completes.size() == 1);
    CHECK(SF.render(r.completes[0].success, cva) == "sh: [[A,B]]  fr: A,B");
}

TEST_CASE("multivariance: one predicate, two tabled call patterns") {
    std::string src = oracles::slurp(oracles::corpus_path("multivar.pl"));
    for (const Domain* dom : {&GR, &SF}) {
        CAPTURE(dom->name());
        AnalysisResult r = run(src, *dom);
        CHECK(count_pred(r, "dup/2") == 2);
        CHECK(count_pred(r, "id/2") == 2);
        CHECK(count_pred(r, "main/4") == 1);
        CHECK(r.counters.patterns == r.completes.size());
    }
    // and in the groundness view the two patterns differ exactly in the call
    AnalysisResult r = run(src, GR);
    bool saw_ground = false, saw_any = false;
    for (const CompleteEntry& c : r.completes) {
        if (c.pred.str() != "dup/2")
            continue;
        std::string call = GR.render(c.call, cva);
        if (call == "A/g, B/any") {
            saw_ground = true;
            CHECK(GR.render(c.success, cva) == "A/g, B/g");
        }
        if (call == "A/any, B/any")
            saw_any = true;
    }
    CHECK(saw_ground);
    CHECK(saw_any);
}

TEST_CASE("unknown predicates warn and answer top") {
    AnalysisResult r = run("p(X) :- u(X).\n:- entry p(X) : [free(X)].", GR);
    REQUIRE(r.warnings.size() == 1);
    CHECK(r.warnings[0] == "unknown predicate u/1: assuming top success");
    CHECK(GR.render(find_complete(r, "p(A)").success, cva) == "A/any");
    CHECK(GR.render(find_complete(r, "u(A)").success, cva) == "A/any");
}

TEST_CASE("unreachable success is reported as bottom") {
    SUBCASE("self loop") {
        std::string src = oracles::slurp(oracles::corpus_path("loop.pl"));
        AnalysisResult p = run(src, GR, 0);
        REQUIRE(p.completes.size() == 1);
        CHECK(p.completes[0].success.is_bottom());
        AnalysisResult q = run(src, SF, 1);
        CHECK(q.completes[0].success.is_bottom());
        // the point after the looping body literal is unreachable too
        CHECK(q.program_points.at({1, 2}).is_bottom());
    }
    SUBCASE("no structurally matching clause") {
        AnalysisResult r = run("r(b). main(X) :- r(a).\n:- entry main(X) : [free(X)].", GR);
        CHECK(find_complete(r, "main(A)").success.is_bottom());
        CHECK(find_complete(r, "r(a)").success.is_bottom());
    }
    SUBCASE("explicit failure stops the clause walk early") {
        AnalysisResult r = run("q(a). p(X) :- fail, q(X).\n:- entry p(X) : [free(X)].", GR);
        CHECK(find_complete(r, "p(A)").success.is_bottom());
        // q is never called with a bottom context, so it never becomes a pattern
        CHECK(count_pred(r, "q/1") == 0);
        CHECK(r.counters.patterns == 1);
    }
}

TEST_CASE("builtin-only bodies") {
    AnalysisResult t = run("p(X) :- true.\n:- entry p(X) : [any(X)].", GR);
    CHECK(GR.render(t.completes[0].success, cva) == "A/any");
    AnalysisResult e = run("p(X) :- X = a.\n:- entry p(X) : [any(X)].", GR);
    CHECK(GR.render(e.completes[0].success, cva) == "A/g");
}

TEST_CASE("program points accumulate along the clause body") {
    AnalysisResult r = run("q(a). p(X) :- X = a, q(X).\n:- entry p(X) : [any(X)].", GR);
    auto x_namer = [](VarId) { return std::string("X"); };
    // clause ids follow source order: q(a) is 0, the p clause is 1
    CHECK(GR.render(r.program_points.at({1, 1}), x_namer) == "X/any");
    CHECK(GR.render(r.program_points.at({1, 2}), x_namer) == "X/g");
    CHECK(GR.render(r.program_points.at({1, 3}), x_namer) == "X/g");
    // the fact clause has a single (entry == exit) point over no variables
    CHECK(GR.render(r.program_points.at({0, 1}), x_namer) == "true");
    CHECK(r.program_points.count({0, 2}) == 0);
}

TEST_CASE("program points join across distinct traversals") {
    // worker is reached once with a ground argument and once unbound
    std::string src = "worker(X) :- X = X.\n"
                      "main(A, B) :- worker(a), worker(B).\n"
                      ":- entry main(A, B) : [free(A), free(B)].";
    AnalysisResult r = run(src, GR);
    auto x_namer = [](VarId) { return std::string("X"); };
    // two patterns, so two traversals of clause 0 merged pointwise
    CHECK(count_pred(r, "worker/1") == 2);
    CHECK(GR.render(r.program_points.at({0, 1}), x_namer) == "X/any");
}

TEST_CASE("entry and exit substitutions respect the declared entry properties") {
    std::string src = oracles::slurp(oracles::corpus_path("mutual.pl"));
    Program p = parse_program(src);

    AnalysisResult ground = analyze_tabled(p, p.entries[0], GR);
    for (const CompleteEntry& c : ground.completes) {
        CAPTURE(c.pred.str());
        CHECK(GR.render(c.call, cva) == "A/g");
        CHECK(GR.render(c.success, cva) == "A/g");
    }
    CHECK(ground.completes.size() == 2); // even and odd, one pattern each

    AnalysisResult free = analyze_tabled(p, p.entries[1], SF);
    CHECK(free.completes.size() == 2);
    // a successful run instantiates the peano numeral completely
    CHECK(SF.render(free.completes[0].success, cva) == "sh: []  fr: -");
}

TEST_CASE("schedule and seeding options do not change the result") {
    for (const std::string file : {"reverse.pl", "qsort.pl", "mutual.pl"}) {
        std::string src = oracles::slurp(oracles::corpus_path(file));
        Program p = parse_program(src);
        for (const Domain* dom : {&GR, &SF}) {
            for (size_t e = 0; e < p.entries.size(); ++e) {
                INFO("program=", file, " domain=", dom->name(), " entry=", e);
                AnalysisResult base = analyze_tabled(p, p.entries[e], *dom);

                AnalyzeOptions fifo;
                fifo.resume = tabling::ResumePolicy::Fifo;
                AnalysisResult rf = analyze_tabled(p, p.entries[e], *dom, fifo);
                CHECK(compare_completes(base, rf, *dom).equal);

                AnalyzeOptions noseed;
                noseed.seed_nonrecursive = false;
                AnalysisResult rn = analyze_tabled(p, p.entries[e], *dom, noseed);
                CHECK(compare_completes(base, rn, *dom).equal);
            }
        }
    }
}

TEST_CASE("subsumptive reuse collapses a narrower later call") {
    std::string src = "id(X, X). dup(X, Y) :- id(X, Y). first(a).\n"
                      "main(A, B, C, D) :- dup(C, D), first(A), dup(A, B).\n"
                      ":- entry main(A, B, C, D) : [free(A), free(B), free(C), free(D)].";
    AnalysisResult plain = run(src, GR);
    CHECK(count_pred(plain, "dup/2") == 2);

    AnalyzeOptions sub;
    sub.subsumptive_calls = true;
    AnalysisResult merged = run(src, GR, 0, sub);
    CHECK(count_pred(merged, "dup/2") == 1);
    // the reused general answer is sound for the narrower call, only wider
    const CompleteEntry& c = find_complete(merged, "dup(A,B)");
    CHECK(GR.render(c.call, cva) == "A/any, B/any");
}

TEST_CASE("replay after a finished analysis is quiescent") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("reverse.pl")));
    TabledAnalyzer an(p, GR);
    CHECK_THROWS_AS((void)an.replay(), ContractViolation); // nothing analyzed yet
    (void)an.analyze(p.entries[1]);
    ReplayOutcome rep = an.replay();
    CHECK(rep.updates == 0);
    CHECK(rep.new_patterns == 0);
}

TEST_CASE("a tiny step budget aborts the analysis") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")));
    AnalyzeOptions opts;
    opts.step_budget = 1;
    CHECK_THROWS_AS((void)analyze_tabled(p, p.entries[0], GR, opts), ResourceLimitError);
}

TEST_CASE("goals with repeated variables normalize by first occurrence") {
    AnalysisResult r = run("same(X, X). check(Y) :- same(Y, Y).\n:- entry check(Y) : [free(Y)].",
                           GR);
    CHECK(term_to_string(find_complete(r, "same(A,A)").goal) == "same(A,A)");
}
