#include "oracles.hpp"

#include "tabint/analysis/analyzer.hpp"
#include "tabint/analysis/sld.hpp"
#include "tabint/domains/groundness.hpp"
#include "tabint/domains/sharefree.hpp"
#include "tabint/errors.hpp"
#include "tabint/parser.hpp"

#include <doctest.h>

using namespace tabint;

namespace {

// Parses `goal` in its own variable scope (ids 0.. in first-occurrence
// order) and runs it against `src`.
std::vector<ConcreteBinding> solutions(const std::string& src, const std::string& goal,
                                       const SldOptions& opts = {}) {
    Program p = parse_program(src);
    Term g = parse_term_text(goal);
    return sld_solutions(p, g, opts);
}

// The goal must have exactly one solution; returns it.
ConcreteBinding one(const std::string& src, const std::string& goal) {
    auto sols = solutions(src, goal);
    REQUIRE(sols.size() == 1);
    return sols[0];
}

} // namespace

TEST_CASE("deterministic list computation") {
    ConcreteBinding s = one("append([], L, L).\nappend([H|T], L, [H|R]) :- append(T, L, R).",
                            "append([a], [b], Z)");
    CHECK(s.at(0) == Term::list({Term::atom("a"), Term::atom("b")}));
}

TEST_CASE("an infinite loop yields no solutions within any bound") {
    CHECK(solutions("p :- p.", "p").empty());
    CHECK(solutions("q(X) :- q(X).", "q(Y)").empty());
}

TEST_CASE("a ground success produces one empty binding") {
    auto sols = solutions("even(z). even(s(N)) :- odd(N). odd(s(N)) :- even(N).",
                          "even(s(s(z)))");
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].empty());
}

TEST_CASE("the depth bound limits call nesting, not breadth") {
    std::string src = "nest(z). nest(s(X)) :- nest(X).";
    SldOptions opts;
    opts.depth = 3;
    CHECK(solutions(src, "nest(Y)", opts).size() == 3); // z, s(z), s(s(z))
    opts.depth = 6;
    CHECK(solutions(src, "nest(Y)", opts).size() == 6);
}

TEST_CASE("arithmetic evaluation") {
    std::string none;
    CHECK(one(none, "X is 3+4").at(0) == Term::integer(7));
    CHECK(one(none, "X is 5-2*2").at(0) == Term::integer(1));
    CHECK(one(none, "X is 10//3").at(0) == Term::integer(3));
    CHECK(one(none, "X is 10 mod 3").at(0) == Term::integer(1));
    CHECK(one(none, "X is -(2+3)").at(0) == Term::integer(-5));
    CHECK(solutions(none, "X is 1//0").empty());   // undefined, fails quietly
    CHECK(solutions(none, "X is a+1").empty());    // non-numeric
    CHECK(solutions(none, "X is Y+1").empty());    // unbound operand
    CHECK(solutions(none, "2 is 1+1").size() == 1);
    CHECK(solutions(none, "3 is 1+1").empty());
}

TEST_CASE("comparisons") {
    std::string none;
    CHECK(solutions(none, "1 < 2").size() == 1);
    CHECK(solutions(none, "2 =< 1").empty());
    CHECK(solutions(none, "2 >= 2").size() == 1);
    CHECK(solutions(none, "1 =:= 1").size() == 1);
    CHECK(solutions(none, "1 =\\= 2").size() == 1);
    CHECK(solutions(none, "X < 2").empty()); // unbound: prune
}

TEST_CASE("fibonacci through the interpreter") {
    ConcreteBinding s = one(oracles::slurp(oracles::corpus_path("fib.pl")), "fib(5, F)");
    CHECK(s.at(0) == Term::integer(5));
}

TEST_CASE("the occurs check rejects circular bindings") {
    CHECK(solutions("selfref(X) :- X = f(X).", "selfref(Y)").empty());
}

TEST_CASE("unknown predicates prune the branch") {
    CHECK(solutions("p(X) :- missing(X).", "p(Y)").empty());
}

TEST_CASE("unbound goals stay visible as shared placeholders") {
    auto sols = solutions("append([], L, L).\nappend([H|T], L, [H|R]) :- append(T, L, R).",
                          "append(A, [b], C)", SldOptions{.depth = 3});
    REQUIRE(sols.size() == 3);
    // one solution per prefix length; in each, C = A ++ [b] shares A's cells
    bool saw_shared = false;
    for (const ConcreteBinding& s : sols) {
        const Term& a = s.at(0); // A
        const Term& c = s.at(1); // C
        if (a.is_compound()) { // a one-element open prefix [V]
            REQUIRE(c.is_compound());
            CHECK(a.args()[0] == c.args()[0]); // same canonical placeholder
            CHECK(a.args()[0].is_var());
            saw_shared = true;
        }
    }
    CHECK(saw_shared);
    // canonical placeholders make duplicate runs identical
    auto again = solutions("append([], L, L).\nappend([H|T], L, [H|R]) :- append(T, L, R).",
                           "append(A, [b], C)", SldOptions{.depth = 3});
    REQUIRE(again.size() == sols.size());
    for (size_t i = 0; i < sols.size(); ++i)
        CHECK(again[i] == sols[i]);
}

TEST_CASE("step limit guards runaway searches") {
    SldOptions opts;
    opts.max_steps = 10;
    CHECK_THROWS_AS((void)solutions("nest(z). nest(s(X)) :- nest(X).", "nest(Y)", opts),
                    ResourceLimitError);
}

TEST_CASE("soundness check accepts a correct analysis") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")));
    for (const Domain* dom : {&gr::domain(), &shfr::domain()}) {
        for (size_t e = 0; e < p.entries.size(); ++e) {
            INFO("domain=", dom->name(), " entry=", e);
            AnalysisResult r = analyze_tabled(p, p.entries[e], *dom);
            SoundnessReport rep = check_soundness(p, p.entries[e], *dom, r);
            CHECK(rep.instances > 0);
            CHECK(rep.solutions > 0);
            CHECK(rep.violations == 0);
            CHECK(rep.details.empty());
        }
    }
}

TEST_CASE("soundness check flags a fabricated too-strong success") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")));
    const Domain& dom = gr::domain();
    const EntryDecl& entry = p.entries[1]; // all free
    AnalysisResult r = analyze_tabled(p, entry, dom);
    // claim the whole answer is ground, which free solutions contradict
    VarSet vs = r.completes[0].success.vars();
    r.completes[0].success = dom.initial_from_entry(
        oracles::mk_entry(vs, {ArgProp::Ground, ArgProp::Ground, ArgProp::Ground}));
    SoundnessReport rep = check_soundness(p, entry, dom, r);
    CHECK(rep.violations > 0);
    CHECK(!rep.details.empty());
}

TEST_CASE("soundness check requires the matching entry pattern") {
    Program p = parse_program(oracles::slurp(oracles::corpus_path("append.pl")));
    AnalysisResult r = analyze_tabled(p, p.entries[0], gr::domain());
    // wrong entry: the result table has no pattern for the free call
    CHECK_THROWS_AS((void)check_soundness(p, p.entries[1], gr::domain(), r), ContractViolation);
}
