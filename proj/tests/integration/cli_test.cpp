#include <sstream>

#include "doctest.h"
#include "enumerate.hpp"
#include "json.hpp"
#include "kplus/checker.hpp"
#include "kplus/generator.hpp"

using namespace kplus;
using oracle::run_cli;

namespace {

std::string fx(const std::string& name) { return std::string(KPLUS_FIXTURES) + "/" + name; }

}  // namespace

TEST_CASE("check accepts the fixtures") {
    CHECK(run_cli("check " + fx("p_taut.kp")).code == 0);
    CHECK(run_cli("check " + fx("p_cyc_o.kp") + " --mode cut").code == 0);
    CHECK(run_cli("check " + fx("p_cyc.kp") + " --system '(-> p p)'").code == 0);
    CHECK(run_cli("check " + fx("p_cyc.kp")).code == 1);
}

TEST_CASE("violations are JSON lines on stderr") {
    auto r = run_cli("check " + fx("broken.kp"));
    CHECK(r.code == 1);
    std::istringstream in(r.err);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        CHECK(j.contains("kind"));
        ++n;
    }
    CHECK(n >= 1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(run_cli("").code == 2);
    CHECK(run_cli("check").code == 2);
    CHECK(run_cli("check " + fx("p_taut.kp") + " --mode sometimes").code == 2);
    CHECK(run_cli("check " + fx("p_taut.kp"), "KPLUS_MEMO_BUDGET=lots").code == 2);
}

TEST_CASE("generated axioms eliminate to cut-free proofs") {
    std::string dir = oracle::temp_path("axioms");
    REQUIRE(run_cli("gen --axioms -o " + dir).code == 0);
    std::string out = oracle::temp_path("ax8.out.kp");
    REQUIRE(run_cli("eliminate " + dir + "/ax8.kp -o " + out).code == 0);
    CHECK(run_cli("check " + out + " --mode nocut").code == 0);
}

TEST_CASE("hilbert embedding through the cli") {
    std::string emb = oracle::temp_path("thm.kp"), out = oracle::temp_path("thm_cf.kp");
    REQUIRE(run_cli("embed-hilbert " + fx("theorem.hil") + " -o " + emb).code == 0);
    CHECK(run_cli("check " + emb + " --mode cut").code == 0);
    CHECK(run_cli("check " + emb + " --mode nocut").code == 1);
    auto e = run_cli("eliminate " + emb + " -o " + out + " --trace --emit-stages");
    CHECK(e.code == 0);
    CHECK(e.err.find("cutFormula") != std::string::npos);
    CHECK(run_cli("check " + oracle::temp_path("thm_cf.stage1.kp") + " --mode cut").code == 0);
    CHECK(run_cli("check " + out + " --mode nocut").code == 0);
}

TEST_CASE("eliminate is deterministic") {
    std::string emb = oracle::temp_path("det.kp"), a = oracle::temp_path("det.a.kp"),
                b = oracle::temp_path("det.b.kp");
    REQUIRE(run_cli("embed-hilbert " + fx("theorem.hil") + " -o " + emb).code == 0);
    REQUIRE(run_cli("eliminate " + emb + " -o " + a).code == 0);
    REQUIRE(run_cli("eliminate " + emb + " -o " + b).code == 0);
    CHECK(oracle::read_file(a) == oracle::read_file(b));
}

TEST_CASE("budget exhaustion exits with 3") {
    std::string emb = oracle::temp_path("bud.kp"), out = oracle::temp_path("bud.out.kp");
    REQUIRE(run_cli("embed-hilbert " + fx("theorem.hil") + " -o " + emb).code == 0);
    auto r = run_cli("eliminate " + emb + " -o " + out, "KPLUS_MEMO_BUDGET=1");
    CHECK(r.code == 3);
    CHECK(r.err.find("budget") != std::string::npos);
}

TEST_CASE("stats, transform, annotation and fuzz") {
    auto s = run_cli("stats " + fx("p_cyc_o.kp") + " --json");
    REQUIRE(s.code == 0);
    auto j = nlohmann::json::parse(s.out);
    CHECK(j["ordinalHeight"].get<int>() == 2);
    CHECK(j["backedges"].get<int>() == 0);  // main proof only
    CHECK(j["witnesses"].get<int>() == 2);
    auto c = run_cli("stats " + fx("p_cyc.kp") + " --json");
    CHECK(nlohmann::json::parse(c.out)["backedges"].get<int>() == 1);

    std::string w = oracle::temp_path("w.kp");
    CHECK(run_cli("transform " + fx("p_cyc_o.kp") + " --op wk --left '(q)' --right '()' -o " + w).code == 0);
    CHECK(run_cli("check " + w).code == 0);
    CHECK(run_cli("transform " + fx("p_taut.kp") + " --op inv-bot -o " + w).code == 1);

    std::string plain = oracle::temp_path("plain.kp"), back = oracle::temp_path("back.kp");
    CHECK(run_cli("deannotate " + fx("p_cyc_o.kp") + " -o " + plain).code == 0);
    CHECK(run_cli("annotate " + plain + " -o " + back).code == 0);
    CHECK(proof_equal(parse_proof(oracle::read_file(back)), p_cyc_o()));

    CHECK(run_cli("fuzz " + fx("p_cyc_o.kp") + " --models 100 --worlds 4 --seed 3").code == 0);
    std::string bad = oracle::temp_path("bad.seq");
    oracle::write_file(bad, "(seq () o ((-> (box p) (box (box p)))))");
    CHECK(run_cli("fuzz " + bad + " --models 300 --worlds 4 --seed 3").code == 1);
}
