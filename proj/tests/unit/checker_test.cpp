#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "kplus/checker.hpp"
#include "kplus/generator.hpp"
#include "kplus/store.hpp"

using namespace kplus;

namespace {

const Annotation circ = Annotation::unfocused();
const Formula p = Formula::atom("p");
const Formula pp = Formula::imp(p, p);

Proof cut_in_witness() {
    Store st;
    Ref l = st.ax(Sequent{Multiset{p}, circ, Multiset{p, p}});
    Ref r = st.ax(Sequent{Multiset{p, p}, circ, Multiset{p}});
    return *export_proof(st, st.boxr(p, ModalSplit{{}, Multiset{p}, {}, {}}, circ, st.cut(p, l, r)));
}

Proof cut_in_main() {
    Store st;
    Ref l = st.ax(Sequent{Multiset{p}, circ, Multiset{p, p}});
    Ref r = st.ax(Sequent{Multiset{p, p}, circ, Multiset{p}});
    return *export_proof(st, st.cut(p, l, r));
}

}  // namespace

TEST_CASE("fixtures check") {
    CHECK(check(p_taut(), circ, CutMode::NoCut).ok);
    CHECK(check(p_cyc(), Annotation::focus(pp), CutMode::NoCut).ok);
    CHECK(check(p_cyc_o(), circ, CutMode::NoCut).ok);
}

TEST_CASE("root annotation must match the system") {
    CheckReport r = check(p_cyc(), circ, CutMode::NoCut);
    CHECK_FALSE(r.ok);
    CHECK(r.has("root-annotation"));
}

TEST_CASE("every mutant is caught with its expected kind") {
    for (const Mutant& m : mutants()) {
        CAPTURE(m.name);
        CheckReport r = check(m.proof, m.system, m.mode);
        CHECK_FALSE(r.ok);
        CHECK(r.has(m.expect));
    }
}

TEST_CASE("cut modes") {
    Proof w = cut_in_witness(), m = cut_in_main();
    CHECK_FALSE(check(w, circ, CutMode::NoCut).ok);
    CHECK(check(w, circ, CutMode::Cut).ok);
    CHECK(check(w, circ, CutMode::WCut).ok);
    CHECK_FALSE(check(w, circ, CutMode::MCut).ok);
    CHECK(check(m, circ, CutMode::MCut).ok);
    CHECK_FALSE(check(m, circ, CutMode::WCut).ok);
    CHECK(check(m, circ, CutMode::Cut).ok);
    CHECK(parse_cut_mode("wcut") == CutMode::WCut);
    CHECK_FALSE(parse_cut_mode("sometimes").has_value());
}

TEST_CASE("witness violations are prefixed with the witness path") {
    CheckReport r = check(cut_in_witness(), circ, CutMode::NoCut);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations[0].node.rfind("w0/", 0) == 0);
    CHECK(r.violations[0].kind == "cut-mode");
}

TEST_CASE("report lines are JSON objects") {
    CheckReport r = check(mutants().front().proof, mutants().front().system, CutMode::NoCut);
    std::istringstream in(r.jsonl());
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.contains("node"));
        CHECK(j.contains("kind"));
        CHECK(j.contains("message"));
        ++n;
    }
    CHECK(n == int(r.violations.size()));
}

TEST_CASE("back-edge sequents must match their target") {
    Proof m = p_cyc();
    for (auto& [id, n] : m.nodes)
        if (n.backedge) {
            n.seq = Sequent{Multiset{p}, Annotation::focus(pp), Multiset{Formula::boxp(pp)}};
        }
    CheckReport r = check(m, Annotation::focus(pp), CutMode::NoCut);
    CHECK_FALSE(r.ok);
    CHECK(r.has("backedge-sequent"));
}

TEST_CASE("unfocused finitary check") {
    CHECK(check_unfocused_finitary(p_taut()).ok);
    CHECK(check_unfocused_finitary(p_cyc_o()).ok);
    FinitaryReport f = check_unfocused_finitary(p_cyc());
    CHECK_FALSE(f.ok);
    CHECK(f.node.has_value());
}

TEST_CASE("deannotate and annotate") {
    for (const Proof& pr : {p_taut(), p_cyc_o()}) {
        Proof plain = deannotate(pr);
        for (auto& [id, n] : plain.nodes) CHECK(!n.seq.ann.is_focus());
        CHECK(plain.witness_table.empty());
        CHECK(proof_equal(annotate(plain), pr));
    }
    Proof plain = deannotate(p_cyc_o());
    bool has_plain_box = false;
    for (auto& [id, n] : plain.nodes) has_plain_box |= !n.backedge && n.tag.rule == Rule::BoxPlain;
    CHECK(has_plain_box);
}

TEST_CASE("a plain boxp looping onto itself annotates to a valid proof") {
    Proof plain = parse_proof(R"((proof (root 0)
      (node 0 (seq () o ((boxp (-> p p)))) (rule boxp (-> p p) (split (sigma) (gamma) (pi) (deltawk))) (children 1 3) (witness))
      (node 1 (seq () o ((-> p p))) (rule impr (-> p p)) (children 2) (witness))
      (node 2 (seq (p) o (p)) (rule ax) (children) (witness))
      (node 3 (backedge 0))))");
    Proof a = annotate(plain);
    CHECK(check(a, circ, CutMode::NoCut).ok);
    CHECK(a.conclusion() == p_cyc_o().conclusion());
}

TEST_CASE("annotate rejects a cycle that never settles on a focus") {
    // two plain boxp nodes with different principals feeding each other
    const char* text = R"((proof (root 0)
      (node 0 (seq () o ((boxp p))) (rule boxp p (split (sigma) (gamma) (pi) (deltawk))) (children 1 2) (witness))
      (node 1 (seq () o (p)) (rule ax) (children) (witness))
      (node 2 (seq () o ((boxp q))) (rule boxp q (split (sigma) (gamma) (pi) (deltawk))) (children 3 4) (witness))
      (node 3 (seq () o (q)) (rule ax) (children) (witness))
      (node 4 (backedge 0))))";
    CHECK_THROWS_WITH_AS(annotate(parse_proof(text)), doctest::Contains("never settles"), Error);
}
