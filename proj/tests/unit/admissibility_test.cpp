#include "doctest.h"
#include "kplus/admissibility.hpp"
#include "kplus/checker.hpp"
#include "kplus/generator.hpp"
#include "kplus/transforms.hpp"
#include "oracles.hpp"

using namespace kplus;

namespace {

const Annotation circ = Annotation::unfocused();
const Formula p = Formula::atom("p"), q = Formula::atom("q");
const Formula pp = Formula::imp(p, p);

bool cut_free_valid(const Proof& pr) { return check(pr, pr.conclusion().ann, CutMode::NoCut).ok; }

}  // namespace

TEST_CASE("atomic admissibility") {
    Store st;
    Ref l = *prove(st, Sequent{Multiset{q}, circ, Multiset{p, q}});
    Ref r = *prove(st, Sequent{Multiset{p, q}, circ, Multiset{q}});
    Ref out = admit_atomic(st, l, r, p);
    Proof pr = *export_proof(st, out);
    CHECK(pr.conclusion() == Sequent{Multiset{q}, circ, Multiset{q}});
    CHECK(cut_free_valid(pr));
}

TEST_CASE("admit_cut on a boxp cut between cyclic proofs") {
    Formula bpp = Formula::boxp(pp);
    Proof left = weaken(p_cyc_o(), {}, Multiset{bpp});
    Store st;
    Ref r = *prove(st, Sequent{Multiset{bpp}, circ, Multiset{bpp}});
    Proof right = *export_proof(st, r);
    reset_admit_stats();
    Proof out = admit_cut(left, right, bpp);
    CHECK(out.conclusion() == Sequent{{}, circ, Multiset{bpp}});
    CHECK(cut_free_valid(out));
    CHECK(admit_stats().admit_calls >= 1);
}

TEST_CASE("verify_unblocked") {
    Store st;
    Ref clean = import_proof(st, p_cyc_o());
    CHECK(verify_unblocked(st, clean, pp, 0).verified);
    Ref l = st.ax(Sequent{Multiset{q}, circ, Multiset{q, q}});
    Ref r = st.ax(Sequent{Multiset{q, q}, circ, Multiset{q}});
    UnblockedWitnessData bad = verify_unblocked(st, st.cut(q, l, r), pp, 0);
    CHECK_FALSE(bad.verified);
    CHECK_FALSE(bad.reason.empty());
}

TEST_CASE("finite elimination leaves no main local cuts") {
    Store st;
    Ref l = st.ax(Sequent{Multiset{p}, circ, Multiset{p, p}});
    Ref r = st.ax(Sequent{Multiset{p, p}, circ, Multiset{p}});
    Ref box = st.boxr(p, ModalSplit{{}, Multiset{p}, {}, {}}, circ, st.cut(p, l, r));
    Proof in = *export_proof(st, box);
    Proof out = eliminate_finite(in);
    CHECK(out.conclusion() == in.conclusion());
    CHECK(cut_free_valid(out));
}

TEST_CASE("staged elimination of an adversarial chain") {
    Proof chain = oracle::fragment_chain(4);
    ProofStages s = eliminate_cuts_staged(chain);
    for (const Proof* pr : {&s.stage1, &s.stage2, &s.stage3}) {
        CHECK(pr->conclusion() == chain.conclusion());
        CHECK(check(*pr, chain.conclusion().ann, CutMode::Cut).ok);
    }
    CHECK(witnesses_local_only(s.stage1));
    CHECK(cut_census(s.stage3).classification == CutClass::CutFree);
    CHECK(cut_free_valid(s.stage3));
}

TEST_CASE("eliminate_cuts on cut-free input keeps the conclusion") {
    for (const Proof& pr : {p_taut(), p_cyc(), p_cyc_o()}) {
        Proof out = eliminate_cuts(pr);
        CHECK(out.conclusion() == pr.conclusion());
        CHECK(cut_free_valid(out));
    }
}
