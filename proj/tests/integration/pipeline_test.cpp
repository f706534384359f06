#include "doctest.h"
#include "kplus/admissibility.hpp"
#include "kplus/checker.hpp"
#include "kplus/hilbert.hpp"
#include "kplus/semantics.hpp"
#include "kplus/transforms.hpp"
#include "enumerate.hpp"
#include "oracles.hpp"

using namespace kplus;

namespace {

const Annotation circ = Annotation::unfocused();

std::string fixture(const std::string& name) { return oracle::read_file(std::string(KPLUS_FIXTURES) + "/" + name); }

}  // namespace

TEST_CASE("fixture files match the built-in fixtures") {
    CHECK(proof_equal(parse_proof(fixture("p_taut.kp")), p_taut()));
    CHECK(proof_equal(parse_proof(fixture("p_cyc.kp")), p_cyc()));
    CHECK(proof_equal(parse_proof(fixture("p_cyc_o.kp")), p_cyc_o()));
    CHECK_FALSE(check(parse_proof(fixture("broken.kp")), circ, CutMode::NoCut).ok);
}

TEST_CASE("hilbert derivation to cut-free proof") {
    HilbertProof h = parse_hilbert(fixture("theorem.hil"));
    validate(h);
    Proof embedded = embed(h);
    REQUIRE(check(embedded, circ, CutMode::Cut).ok);
    CHECK(oracle::count_cuts(embedded) > 0);
    ProofStages s = eliminate_cuts_staged(embedded);
    CHECK(check(s.stage3, circ, CutMode::NoCut).ok);
    CHECK(s.stage3.conclusion() == Sequent{{}, circ, Multiset{h.conclusion()}});
    CHECK(fuzz_soundness(s.stage3, 200, 5, 2).ok());
}

TEST_CASE("every composed theorem survives the full pipeline") {
    for (const HilbertProof& h : composed_theorems()) {
        Proof out = eliminate_cuts(embed(h));
        CHECK(check(out, circ, CutMode::NoCut).ok);
        CHECK(out.conclusion().right == Multiset{h.conclusion()});
        Proof plain = deannotate(out);
        CHECK(check(annotate(plain), circ, CutMode::NoCut).ok);
    }
}

TEST_CASE("transform then eliminate then re-check") {
    for (const Proof& pr : oracle::proofs(21, 60, oracle::cut_options())) {
        Proof w = weaken(pr, Multiset{Formula::atom("q")}, {});
        Proof out = eliminate_cuts(w);
        CHECK(out.conclusion() == w.conclusion());
        CHECK(check(out, out.conclusion().ann, CutMode::NoCut).ok);
        CHECK(oracle::valid_up_to(out.conclusion(), 2, {"p", "q"}));
    }
}

TEST_CASE("enumerated proofs all check") {
    Store st;
    Formula p = Formula::atom("p"), pp = Formula::imp(p, p);
    Sequent s{{}, Annotation::focus(pp), Multiset{Formula::boxp(pp)}};
    auto all = oracle::enumerate_proofs(st, s, 2, 64);
    CHECK_FALSE(all.empty());
    for (Ref r : all) CHECK(check(*export_proof(st, r), s.ann, CutMode::NoCut).ok);
}
