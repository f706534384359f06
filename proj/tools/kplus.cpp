// kplus: batch front end over the library.
// Exit codes: 0 ok, 1 invalid proof or input, 2 usage, 3 memo budget exhausted.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kplus/admissibility.hpp"
#include "kplus/checker.hpp"
#include "kplus/cutreduce.hpp"
#include "kplus/hilbert.hpp"
#include "kplus/semantics.hpp"
#include "kplus/sexpr.hpp"
#include "kplus/transforms.hpp"

using namespace kplus;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kInvalid = 1, kUsage = 2, kBudget = 3 };

struct Failure {
    int code;
    json diag;
};

void diag(const json& j) { std::cerr << j.dump() << "\n"; }

[[noreturn]] void fail(int code, const std::string& kind, const std::string& msg) {
    throw Failure{code, json{{"level", "error"}, {"kind", kind}, {"message", msg}}};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(kUsage, "io", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(kUsage, "io", "cannot write " + path);
    out << text;
    if (text.empty() || text.back() != '\n') out << "\n";
}

Proof load(const std::string& path) {
    std::string text = slurp(path);
    try {
        return parse_proof(text);
    } catch (const Error& e) {
        fail(kInvalid, "parse", e.what());
    }
}

template <class T>
T parse_arg(const std::string& what, const std::string& text, T (*f)(std::string_view)) {
    try {
        return f(text);
    } catch (const Error& e) {
        fail(kUsage, "argument", what + ": " + e.what());
    }
}

Multiset parse_multiset(std::string_view text) {
    std::string t(text);
    if (t.empty() || t.front() != '(') t = "(" + t + ")";
    return multiset_from_sexp(read_sexp(t));
}

// Rejects the input unless it checks at its own root annotation.
void require_valid(const Proof& p, CutMode mode) {
    CheckReport r = check(p, p.conclusion().ann, mode);
    if (r.ok) return;
    std::cerr << r.jsonl();
    fail(kInvalid, "input", "input proof does not check under " + std::string(cut_mode_name(mode)));
}

json census_json(const Proof& p) {
    CutCensus c = cut_census(p);
    return {{"mainLocalCuts", c.main_local_cuts},
            {"mainGlobalCuts", c.main_global_cuts},
            {"mainNonlocalCuts", c.main_nonlocal_cuts},
            {"witnessCuts", c.witness_cuts_transitive},
            {"class", cut_class_name(c.classification)}};
}

json stats_json(const Proof& p) {
    size_t backedges = 0;
    for (auto& [id, n] : p.nodes) backedges += n.backedge;
    return {{"conclusion", print_sequent(p.conclusion())},
            {"nodes", count_nodes(p)},
            {"mainNodes", p.nodes.size()},
            {"backedges", backedges},
            {"witnesses", p.witness_table.size()},
            {"localFragments", local_fragments(p).size()},
            {"localHeight", local_height(p)},
            {"ordinalHeight", ordinal_height(p)},
            {"maxCutSize", max_cut_size(p)},
            {"census", census_json(p)}};
}

std::string stage_path(const std::string& out, int i) {
    fs::path p(out);
    std::string stem = p.stem().string(), ext = p.extension().string();
    return (p.parent_path() / (stem + ".stage" + std::to_string(i) + (ext.empty() ? ".kp" : ext))).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kplus: checker and cut elimination for annotated cyclic proofs"};
    app.require_subcommand(1);

    std::string file, out, system = "o", mode = "nocut", op, formula_arg, left_arg, right_arg, ann_arg;
    bool trace = false, emit_stages = false, as_json = false, axioms = false;
    int models = 1000, worlds = 6;
    uint64_t seed = 0;

    auto* c_check = app.add_subcommand("check", "check a proof");
    c_check->add_option("FILE", file)->required();
    c_check->add_option("--system", system, "root annotation: o or a formula");
    c_check->add_option("--mode", mode)->check(CLI::IsMember({"nocut", "cut", "mcut", "wcut"}));

    auto* c_elim = app.add_subcommand("eliminate", "eliminate all cuts");
    c_elim->add_option("FILE", file)->required();
    c_elim->add_option("-o", out)->required();
    c_elim->add_flag("--trace", trace, "one JSON line per reduction step on stderr");
    c_elim->add_flag("--emit-stages", emit_stages);

    auto* c_stats = app.add_subcommand("stats", "heights, census, fragment counts");
    c_stats->add_option("FILE", file)->required();
    c_stats->add_flag("--json", as_json);

    auto* c_tf = app.add_subcommand("transform", "apply one proof transformation");
    c_tf->add_option("FILE", file)->required();
    c_tf->add_option("--op", op)
        ->required()
        ->check(CLI::IsMember({"wk", "lctr", "rctr", "rctr-boxp", "inv-bot", "linv0", "linv1", "rinv",
                               "annotation"}));
    c_tf->add_option("--formula", formula_arg, "principal formula (lctr/rctr atom, rctr-boxp body, inv implication)");
    c_tf->add_option("--left", left_arg, "wk: formulas added on the left");
    c_tf->add_option("--right", right_arg, "wk: formulas added on the right");
    c_tf->add_option("--annotation", ann_arg, "annotation: o or a formula");
    c_tf->add_option("-o", out)->required();

    auto* c_ann = app.add_subcommand("annotate", "annotate a plain proof");
    c_ann->add_option("FILE", file)->required();
    c_ann->add_option("-o", out)->required();

    auto* c_deann = app.add_subcommand("deannotate", "erase annotations");
    c_deann->add_option("FILE", file)->required();
    c_deann->add_option("-o", out)->required();

    auto* c_embed = app.add_subcommand("embed-hilbert", "translate a Hilbert derivation");
    c_embed->add_option("FILE", file)->required();
    c_embed->add_option("-o", out)->required();

    auto* c_gen = app.add_subcommand("gen", "write generated proofs");
    c_gen->add_flag("--axioms", axioms)->required();
    c_gen->add_option("-o", out, "output directory")->required();

    auto* c_fuzz = app.add_subcommand("fuzz", "random Kripke countermodel search");
    c_fuzz->add_option("FILE", file)->required();
    c_fuzz->add_option("--models", models)->check(CLI::PositiveNumber);
    c_fuzz->add_option("--worlds", worlds)->check(CLI::PositiveNumber);
    c_fuzz->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        diag({{"level", "error"}, {"kind", "usage"}, {"message", e.what()}});
        return kUsage;
    }

    if (const char* env = std::getenv("KPLUS_MEMO_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (!*env || *end || v == 0) {
            diag({{"level", "error"}, {"kind", "usage"}, {"message", "KPLUS_MEMO_BUDGET must be a positive integer"}});
            return kUsage;
        }
    }

    try {
        if (*c_check) {
            Proof p = load(file);
            Annotation s = parse_arg("--system", system, parse_annotation);
            CheckReport r = check(p, s, *parse_cut_mode(mode));
            std::cerr << r.jsonl();
            std::cout << (r.ok ? "ok" : "invalid") << ": " << print_sequent(p.conclusion()) << " under "
                      << print_annotation(s) << "/" << mode << ", " << r.violations.size() << " violation(s)\n";
            return r.ok ? kOk : kInvalid;
        }
        if (*c_elim) {
            Proof p = load(file);
            require_valid(p, CutMode::Cut);
            if (trace)
                set_trace([](CaseId c, Formula chi, size_t res) {
                    diag({{"case", case_name(c)}, {"cutFormula", print_formula(chi)}, {"residuals", res}});
                });
            ProofStages ps = eliminate_cuts_staged(p);
            set_trace({});
            CheckReport r = check(ps.stage3, p.conclusion().ann, CutMode::NoCut);
            if (!r.ok || ps.stage3.conclusion() != p.conclusion()) {
                std::cerr << r.jsonl();
                fail(kInvalid, "internal", "elimination produced an invalid proof");
            }
            spit(out, print_proof(ps.stage3));
            if (emit_stages) {
                spit(stage_path(out, 1), print_proof(ps.stage1));
                spit(stage_path(out, 2), print_proof(ps.stage2));
                spit(stage_path(out, 3), print_proof(ps.stage3));
            }
            std::cout << "cut-free: " << print_sequent(ps.stage3.conclusion()) << ", " << count_nodes(ps.stage3)
                      << " nodes\n";
            return kOk;
        }
        if (*c_stats) {
            Proof p = load(file);
            json j = stats_json(p);
            if (as_json)
                std::cout << j.dump() << "\n";
            else
                for (auto& [k, v] : j.items()) std::cout << k << ": " << v.dump() << "\n";
            return kOk;
        }
        if (*c_tf) {
            Proof p = load(file);
            require_valid(p, CutMode::Cut);
            auto need_formula = [&] {
                if (formula_arg.empty()) fail(kUsage, "usage", "--op " + op + " needs --formula");
                return parse_arg("--formula", formula_arg, parse_formula);
            };
            Proof q;
            try {
                if (op == "wk") {
                    q = weaken(p, parse_arg("--left", left_arg, parse_multiset),
                               parse_arg("--right", right_arg, parse_multiset));
                } else if (op == "lctr") {
                    q = contract_left_atom(p, need_formula());
                } else if (op == "rctr") {
                    q = contract_right_atom(p, need_formula());
                } else if (op == "rctr-boxp") {
                    q = contract_right_boxp(p, need_formula());
                } else if (op == "inv-bot") {
                    q = inv_bot(p);
                } else if (op == "linv0") {
                    q = linv0(p, need_formula());
                } else if (op == "linv1") {
                    q = linv1(p, need_formula());
                } else if (op == "rinv") {
                    q = rinv(p, need_formula());
                } else {
                    if (ann_arg.empty()) fail(kUsage, "usage", "--op annotation needs --annotation");
                    q = change_annotation(p, parse_arg("--annotation", ann_arg, parse_annotation));
                }
            } catch (const BudgetExceeded&) {
                throw;
            } catch (const Error& e) {
                fail(kInvalid, "precondition", e.what());
            }
            spit(out, print_proof(q));
            std::cout << op << ": " << print_sequent(q.conclusion()) << "\n";
            return kOk;
        }
        if (*c_ann || *c_deann) {
            Proof p = load(file);
            Proof q;
            try {
                q = *c_ann ? annotate(p) : deannotate(p);
            } catch (const BudgetExceeded&) {
                throw;
            } catch (const Error& e) {
                fail(kInvalid, "annotate", e.what());
            }
            spit(out, print_proof(q));
            std::cout << (*c_ann ? "annotated: " : "deannotated: ") << print_sequent(q.conclusion()) << "\n";
            return kOk;
        }
        if (*c_embed) {
            std::string text = slurp(file);
            HilbertProof h;
            try {
                h = parse_hilbert(text);
                validate(h);
            } catch (const Error& e) {
                fail(kInvalid, "hilbert", e.what());
            }
            Proof p = embed(h);
            spit(out, print_proof(p));
            std::cout << "embedded: " << print_sequent(p.conclusion()) << "\n";
            return kOk;
        }
        if (*c_gen) {
            std::error_code ec;
            fs::create_directories(out, ec);
            if (ec) fail(kUsage, "io", "cannot create " + out);
            for (int i = 1; i <= 8; ++i)
                spit((fs::path(out) / ("ax" + std::to_string(i) + ".kp")).string(), print_proof(axiom_proof(i)));
            std::cout << "wrote 8 axiom proofs to " << out << "\n";
            return kOk;
        }
        if (*c_fuzz) {
            std::string text = slurp(file);
            FuzzReport rep;
            try {
                Sexp head = read_sexp(text);
                if (head.headed("proof")) {
                    Proof p = proof_from_sexp(head);
                    require_valid(p, CutMode::Cut);
                    rep = fuzz_soundness(p, models, worlds, seed);
                } else {
                    rep = fuzz_sequent(parse_sequent(text), models, worlds, seed);
                }
            } catch (const Failure&) {
                throw;
            } catch (const Error& e) {
                fail(kInvalid, "parse", e.what());
            }
            std::cout << rep.json() << "\n";
            return rep.ok() ? kOk : kInvalid;
        }
    } catch (const Failure& f) {
        diag(f.diag);
        return f.code;
    } catch (const BudgetExceeded& e) {
        diag({{"level", "error"}, {"kind", "budget"}, {"message", e.what()}, {"states", e.states},
              {"budget", memo_budget()}});
        return kBudget;
    } catch (const Error& e) {
        diag({{"level", "error"}, {"kind", "invalid"}, {"message", e.what()}});
        return kInvalid;
    }
    return kUsage;
}
