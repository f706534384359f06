#include <random>

#include "doctest.h"
#include "kplus/checker.hpp"
#include "kplus/generator.hpp"
#include "oracles.hpp"

using namespace kplus;

namespace {
const Annotation circ = Annotation::unfocused();
const Formula p = Formula::atom("p"), q = Formula::atom("q");
}

TEST_CASE("prover finds proofs of valid sequents and none for invalid ones") {
    Store st;
    CHECK(prove(st, Sequent{{}, circ, Multiset{Formula::imp(p, p)}}).has_value());
    CHECK(prove(st, Sequent{{}, circ, Multiset{Formula::imp(Formula::boxp(p), Formula::box(p))}}).has_value());
    CHECK_FALSE(prove(st, Sequent{{}, circ, Multiset{p}}).has_value());
    CHECK_FALSE(prove(st, Sequent{Multiset{Formula::box(p)}, circ, Multiset{p}}).has_value());
}

TEST_CASE("prover output checks") {
    Store st;
    Formula goal = Formula::imp(Formula::boxp(p), Formula::boxp(Formula::boxp(p)));
    auto r = prove(st, Sequent{{}, circ, Multiset{goal}});
    REQUIRE(r.has_value());
    Proof pr = *export_proof(st, *r);
    CHECK(check(pr, circ, CutMode::NoCut).ok);
}

TEST_CASE("random proofs are valid and respect options") {
    std::mt19937_64 rng(3);
    GenOptions opts = oracle::default_options(true);
    for (int i = 0; i < 40; ++i) {
        auto pr = random_proof(rng, opts);
        REQUIRE(pr.has_value());
        CHECK(check(*pr, pr->conclusion().ann, CutMode::NoCut).ok);
        CHECK(count_nodes(*pr) >= opts.min_nodes);
    }
    GenOptions cuts = oracle::cut_options();
    int with_cuts = 0;
    for (int i = 0; i < 40; ++i) {
        auto pr = random_proof(rng, cuts);
        REQUIRE(pr.has_value());
        CHECK(check(*pr, pr->conclusion().ann, CutMode::MCut).ok);
        with_cuts += oracle::count_cuts(*pr) > 0;
    }
    CHECK(with_cuts > 0);
}

TEST_CASE("random formulas and sequents") {
    std::mt19937_64 rng(1);
    std::vector<Formula> atoms{p, q};
    for (int i = 0; i < 200; ++i) {
        CHECK(random_formula(rng, 6, atoms).size() <= 6);
        CHECK(random_formula_of(rng, Kind::BoxP, 5, atoms).kind() == Kind::BoxP);
        Sequent s = random_sequent(rng, 3, 5, atoms, true);
        CHECK(s.left.total() <= 3);
        CHECK(s.right.total() >= 1);
        CHECK(s.right.total() <= 4);  // one extra for a focus
        CHECK(s.focus_ok());
    }
}

TEST_CASE("mutants are distinct from the fixtures") {
    auto ms = mutants();
    CHECK(ms.size() >= 10);
    for (const Mutant& m : ms) {
        CHECK_FALSE(m.expect.empty());
        CHECK_FALSE(proof_equal(m.proof, p_cyc_o()));
    }
}
