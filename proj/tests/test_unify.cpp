#include "tabint/parser.hpp"
#include "tabint/term.hpp"
#include "tabint/unify.hpp"

#include <doctest.h>

using namespace tabint;

namespace {

Term tt(const std::string& s) {
    int nv = 0;
    return parse_term_text(s, &nv);
}

} // namespace

TEST_CASE("basic unification and resolution") {
    Bindings b;
    Term x = Term::var(0, "X");
    Term y = Term::var(1, "Y");
    CHECK(unify(x, Term::atom("a"), b, true));
    CHECK(b.resolve(x) == Term::atom("a"));

    CHECK(unify(y, Term::compound("f", {x}), b, true));
    CHECK(b.resolve(y) == Term::compound("f", {Term::atom("a")}));

    SUBCASE("clashes fail") {
        Bindings c;
        CHECK(!unify(Term::atom("a"), Term::atom("b"), c, true));
        CHECK(!unify(Term::integer(1), Term::integer(2), c, true));
        CHECK(!unify(Term::atom("a"), Term::integer(1), c, true));
        CHECK(!unify(tt("f(a)"), tt("g(a)"), c, true));
        CHECK(!unify(tt("f(a)"), tt("f(a,b)"), c, true));
    }
}

TEST_CASE("unification is order independent on solved forms") {
    Term x = Term::var(0, "X");
    Term y = Term::var(1, "Y");
    Bindings b1, b2;
    CHECK(unify(Term::compound("f", {x, y}), Term::compound("f", {y, Term::atom("c")}), b1, true));
    CHECK(unify(Term::compound("f", {y, Term::atom("c")}), Term::compound("f", {x, y}), b2, true));
    CHECK(b1.resolve(x) == Term::atom("c"));
    CHECK(b2.resolve(x) == Term::atom("c"));
}

TEST_CASE("occurs check") {
    Term x = Term::var(0, "X");
    Bindings b;
    CHECK(!unify(x, Term::compound("f", {x}), b, true));
    // nested occurrence
    Bindings c;
    Term y = Term::var(1, "Y");
    CHECK(unify(x, Term::compound("f", {y}), c, true));
    CHECK(!unify(y, Term::compound("g", {x}), c, true));
}

TEST_CASE("unifiable is a rational-tree applicability filter") {
    Term x = Term::var(0, "X");
    // cyclic equation: no finite unifier, but accepted as a filter
    CHECK(unifiable(x, Term::compound("f", {x})));
    CHECK(unifiable(tt("f(X, b)"), Term::compound("f", {Term::atom("a"), Term::var(9, "Q")})));
    CHECK(!unifiable(Term::atom("a"), Term::atom("b")));
    CHECK(!unifiable(tt("f(a, X)"), Term::compound("f", {Term::atom("b"), Term::var(9, "Q")})));
}

TEST_CASE("head filtering for clause selection") {
    Program p = parse_program("append([], L, L).\n"
                              "append([H|T], L, [H|R]) :- append(T, L, R).\n");
    const auto& cs = p.preds.at({"append", 3});
    VarId next = 50;
    Clause c0 = rename_apart(cs[0], &next);
    Clause c1 = rename_apart(cs[1], &next);
    Term goal = tt("append([a], [b], Z)");
    // ids of the parsed goal are 0.., disjoint from 50..
    CHECK(!unifiable(goal, c0.head));
    CHECK(unifiable(goal, c1.head));
}

TEST_CASE("resolve walks chains and rebuilds structure") {
    Bindings b;
    Term x = Term::var(0, "X");
    Term y = Term::var(1, "Y");
    Term z = Term::var(2, "Z");
    REQUIRE(unify(x, y, b, true));
    REQUIRE(unify(y, Term::compound("g", {z}), b, true));
    CHECK(b.resolve(Term::compound("f", {x})) == Term::compound("f", {Term::compound("g", {z})}));
    REQUIRE(unify(z, Term::integer(4), b, true));
    CHECK(b.resolve(x) == tt("g(4)"));
}
