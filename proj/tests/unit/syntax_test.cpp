#include "doctest.h"
#include "kplus/sexpr.hpp"
#include "kplus/syntax.hpp"

using namespace kplus;

namespace {
Formula p = Formula::atom("p"), q = Formula::atom("q");
}

TEST_CASE("formulas are interned") {
    CHECK(Formula::imp(p, q) == Formula::imp(Formula::atom("p"), Formula::atom("q")));
    CHECK(Formula::imp(p, q) != Formula::imp(q, p));
    CHECK(Formula::boxp(p) != Formula::box(p));
    CHECK(Formula() == Formula::bot());
    CHECK(Formula::boxp(Formula::imp(p, p)).size() == 4);
    CHECK(Formula::imp(p, q).lhs() == p);
    CHECK(Formula::box(q).body() == q);
}

TEST_CASE("formula printing and parsing") {
    Formula f = Formula::imp(Formula::boxp(p), Formula::box(Formula::imp(Formula::bot(), q)));
    CHECK(print_formula(f) == "(-> (boxp p) (box (-> bot q)))");
    CHECK(parse_formula("(-> (boxp p) (box (-> bot q)))") == f);
    CHECK(parse_formula("  ; comment\n p ") == p);
    CHECK_THROWS_AS(parse_formula("(-> p)"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(box p q)"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("(-> p q"), SyntaxError);
    CHECK_THROWS_AS(parse_formula("o"), SyntaxError);
}

TEST_CASE("syntax errors carry an offset") {
    try {
        parse_formula("(-> p (foo q))");
        FAIL("no throw");
    } catch (const SyntaxError& e) {
        CHECK(e.offset > 0);
    }
}

TEST_CASE("structural order") {
    CHECK(compare(p, p) == 0);
    CHECK((compare(p, q) < 0) == (compare(q, p) > 0));
    CHECK(compare(Formula::bot(), p) < 0);
    CHECK(compare(p, Formula::imp(p, p)) < 0);
}

TEST_CASE("multiset arithmetic") {
    Multiset a{p, q, p};
    CHECK(a.count(p) == 2);
    CHECK(a.total() == 3);
    CHECK(a.without(p).count(p) == 1);
    CHECK_THROWS_AS(a.without(Formula::bot()), Error);
    CHECK(a == Multiset{q, p, p});
    CHECK(a - Multiset{p} == Multiset{p, q});
    CHECK_THROWS_AS(Multiset{p} - Multiset{q}, Error);
    CHECK(a.includes(Multiset{p, p}));
    CHECK_FALSE(a.includes(Multiset{q, q}));
    CHECK(Multiset{p, p}.max_union(Multiset{p, q}) == Multiset{p, p, q});
    CHECK(Multiset{p, p, q}.excess(Multiset{p}) == Multiset{p, q});
    CHECK(Multiset{p}.boxed() == Multiset{Formula::box(p)});
    CHECK(dnecm(Multiset{p, q}) == Multiset{p, q, Formula::boxp(p), Formula::boxp(q)});
    CHECK(Multiset{p, q}.max_size() == 1);
}

TEST_CASE("sequents and focus membership") {
    Formula pp = Formula::imp(p, p);
    CHECK_NOTHROW(mk_sequent({}, Annotation::focus(pp), Multiset{Formula::boxp(pp)}));
    CHECK_THROWS_AS(mk_sequent({}, Annotation::focus(pp), Multiset{pp}), Error);
    Sequent s = parse_sequent("(seq (p) (-> p p) ((boxp (-> p p))))");
    CHECK(s.ann.is_focus_on(pp));
    CHECK(print_sequent(s) == "(seq (p) (-> p p) ((boxp (-> p p))))");
    CHECK_THROWS_AS(parse_sequent("(seq () p (q))"), Error);
    CHECK(parse_annotation("o") == Annotation::unfocused());
}

TEST_CASE("merging modal contexts") {
    // Σ0,◻Γ0,◻⁺Π0 and Σ1,◻Γ1,◻⁺Π1 with the same left side
    Multiset l = Multiset{p} + Multiset{q}.boxed();
    ModalContexts m = merge_modal_contexts(Multiset{p}, Multiset{q}, {}, Multiset{p, Formula::box(q)}, {}, {});
    CHECK(m.sigma + m.gamma.boxed() + m.pi.boxped() == l);
    CHECK_THROWS_AS(merge_modal_contexts(Multiset{p}, {}, {}, Multiset{q}, {}, {}), Error);
}

TEST_CASE("s-expression reader") {
    Sexp s = read_sexp("(a (b c) d)");
    CHECK(s.is_list);
    CHECK(s.items.size() == 3);
    CHECK(s.headed("a"));
    CHECK(s.items[1].items[1].is_atom("c"));
    CHECK_THROWS(read_sexp("(a b"));
    CHECK_THROWS(read_sexp("(a) b"));
    CHECK(read_sexps("(a) (b)").size() == 2);
}
