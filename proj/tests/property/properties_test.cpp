#include <random>

#include "doctest.h"
#include "kplus/admissibility.hpp"
#include "kplus/checker.hpp"
#include "kplus/cutreduce.hpp"
#include "kplus/semantics.hpp"
#include "kplus/transforms.hpp"
#include "oracles.hpp"

using namespace kplus;
using oracle::operator+;

namespace {

const std::vector<std::string> kAtoms{"p", "q"};

bool valid_at_root(const Proof& pr, CutMode mode) { return check(pr, pr.conclusion().ann, mode).ok; }

}  // namespace

TEST_CASE("formula printing matches the tree oracle and parses back") {
    std::mt19937_64 rng(101);
    for (int i = 0; i < 2000; ++i) {
        oracle::TreeP t = oracle::random_tree(rng, 9, kAtoms);
        Formula f = oracle::to_formula(t);
        CHECK(print_formula(f) == oracle::show(t));
        CHECK(parse_formula(oracle::show(t)) == f);
        CHECK(oracle::show(oracle::from_formula(f)) == oracle::show(t));
    }
}

TEST_CASE("random proofs round-trip through the file format") {
    for (const Proof& pr : oracle::proofs(7, 150, oracle::default_options())) {
        Proof back = parse_proof(print_proof(pr));
        CHECK(proof_equal(back, pr));
        CHECK(print_proof(back) == print_proof(pr));
    }
}

TEST_CASE("conclusions of random proofs hold on every model of two worlds") {
    for (const Proof& pr : oracle::proofs(8, 150, oracle::default_options())) {
        CHECK(oracle::valid_up_to(pr.conclusion(), 2, kAtoms));
    }
}

TEST_CASE("non-modal steps agree with bag arithmetic") {
    for (const Proof& pr : oracle::proofs(9, 150, oracle::cut_options())) {
        CHECK(oracle::first_bad_nonmodal(pr) == -1);
    }
}

TEST_CASE("census agrees with the oracle census") {
    for (const Proof& pr : oracle::proofs(10, 200, oracle::cut_options())) {
        CutCensus c = cut_census(pr);
        oracle::Census o = oracle::census(pr);
        CHECK(c.main_local_cuts == o.local);
        CHECK(c.main_global_cuts == o.global);
        CHECK(c.main_nonlocal_cuts == o.nonlocal);
        CHECK(c.witness_cuts_transitive == o.witness);
        CHECK((c.classification == CutClass::LocalOnly) == (o.local_only() && o.local > 0));
    }
}

TEST_CASE("weakening adds exactly the given formulas") {
    std::mt19937_64 rng(12);
    std::vector<Formula> atoms{Formula::atom("p"), Formula::atom("q")};
    for (const Proof& pr : oracle::proofs(11, 150, oracle::default_options())) {
        Multiset l, r;
        l.add(random_formula(rng, 4, atoms));
        r.add(random_formula(rng, 4, atoms));
        Proof w = weaken(pr, l, r);
        CHECK(oracle::bag(w.conclusion().left) == oracle::bag(pr.conclusion().left) + oracle::bag(l));
        CHECK(oracle::bag(w.conclusion().right) == oracle::bag(pr.conclusion().right) + oracle::bag(r));
        CHECK(w.conclusion().ann == pr.conclusion().ann);
        CHECK(valid_at_root(w, CutMode::NoCut));
        CHECK(preservation(pr, w).strong());
    }
}

TEST_CASE("annotate inverts deannotate") {
    for (const Proof& pr : oracle::proofs(13, 150, oracle::default_options(false))) {
        Proof plain = deannotate(pr);
        Proof back = annotate(plain);
        CHECK(back.conclusion() == pr.conclusion());
        CHECK(valid_at_root(back, CutMode::NoCut));
    }
}

TEST_CASE("push_local removes main local cuts and keeps the endsequent") {
    for (const Proof& pr : oracle::proofs(14, 150, oracle::cut_options())) {
        Proof out = push_local(pr);
        CHECK(out.conclusion() == pr.conclusion());
        CHECK(valid_at_root(out, CutMode::Cut));
        CHECK(oracle::census(out).local == 0);
        CHECK(max_cut_size(out) <= max_cut_size(pr));
    }
}

TEST_CASE("cut elimination yields valid cut-free proofs") {
    for (const Proof& pr : oracle::proofs(15, 120, oracle::cut_options())) {
        Proof out = eliminate_cuts(pr);
        CHECK(out.conclusion() == pr.conclusion());
        CHECK(oracle::count_cuts(out) == 0);
        CHECK(valid_at_root(out, CutMode::NoCut));
    }
}

TEST_CASE("proofs are sound on random larger models") {
    int i = 0;
    for (const Proof& pr : oracle::proofs(16, 100, oracle::cut_options())) {
        FuzzReport r = fuzz_soundness(pr, 50, 6, ++i);
        CHECK(r.ok());
    }
}
