#include "doctest.h"
#include "kplus/checker.hpp"
#include "kplus/hilbert.hpp"
#include "oracles.hpp"

using namespace kplus;

namespace {
const Annotation circ = Annotation::unfocused();
const Formula p = Formula::atom("p"), q = Formula::atom("q");
}

TEST_CASE("axiom proofs are cut-free and valid") {
    for (int i = 1; i <= 8; ++i) {
        CAPTURE(i);
        Proof pr = axiom_proof(i);
        CHECK(pr.conclusion() == Sequent{{}, circ, Multiset{axiom_formula(i, {})}});
        CHECK(check(pr, circ, CutMode::NoCut).ok);
    }
    CHECK_THROWS_AS(axiom_formula(9, {}), Error);
}

TEST_CASE("axioms hold on small models") {
    for (int i = 1; i <= 8; ++i) {
        CAPTURE(i);
        Sequent s{{}, circ, Multiset{axiom_formula(i, {})}};
        CHECK(oracle::valid_up_to(s, 2, {"p", "q", "r"}));
    }
}

TEST_CASE("hilbert files round-trip") {
    HilbertBuilder b;
    int a = b.identity(p);
    int n = b.nec(a);
    b.weaken(n, q);
    HilbertProof h = b.done();
    CHECK_NOTHROW(validate(h));
    HilbertProof back = parse_hilbert(print_hilbert(h));
    CHECK(print_hilbert(back) == print_hilbert(h));
    CHECK(back.conclusion() == Formula::imp(q, Formula::boxp(Formula::imp(p, p))));
}

TEST_CASE("bad justifications are rejected") {
    CHECK_THROWS_AS(validate(parse_hilbert("(hilbert (line 1 p (axiom 1 (phi p) (psi q) (chi r))))")), Error);
    CHECK_THROWS_AS(validate(parse_hilbert(
                        "(hilbert (line 1 (-> p (-> q p)) (axiom 1 (phi p) (psi q) (chi r))) (line 2 q (mp 1 1)))")),
                    Error);
    CHECK_THROWS_AS(validate(parse_hilbert("(hilbert (line 1 (boxp p) (nec 2)))")), Error);
    CHECK_THROWS(parse_hilbert("(hilbert (line 1 p (guess)))"));
}

TEST_CASE("embedding produces a proof of the conclusion") {
    for (const HilbertProof& h : composed_theorems()) {
        Proof pr = embed(h);
        CHECK(pr.conclusion() == Sequent{{}, circ, Multiset{h.conclusion()}});
        CHECK(check(pr, circ, CutMode::Cut).ok);
    }
}

TEST_CASE("modus ponens and necessitation in the store") {
    Store st;
    Ref a = import_proof(st, p_taut());
    Ref nec = necessitation(st, a);
    CHECK(st.seq(nec).right == Multiset{Formula::boxp(Formula::imp(p, p))});
    Ref ab = axiom_proof(st, 1, Instantiation{Formula::imp(p, p), q, p});
    Ref b = modus_ponens(st, a, ab);
    CHECK(st.seq(b).right == Multiset{Formula::imp(q, Formula::imp(p, p))});
    CHECK(check(*export_proof(st, b), circ, CutMode::Cut).ok);
    CHECK_THROWS_AS(modus_ponens(st, ab, a), Error);
}
