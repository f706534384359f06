#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "kplus/syntax.hpp"

namespace kplus {

enum class Rule : uint8_t { Ax, AxBot, ImpL, ImpR, BoxR, BoxPF, BoxPU, Cut, BoxPlain };

const char* rule_name(Rule r);
bool is_modal(Rule r);

struct ModalSplit {
    Multiset sigma, gamma, pi, delta_wk;
    bool operator==(const ModalSplit& o) const {
        return sigma == o.sigma && gamma == o.gamma && pi == o.pi && delta_wk == o.delta_wk;
    }
    // conclusion left side: Σ, ◻Γ, ◻⁺Π
    Multiset left() const { return sigma + gamma.boxed() + pi.boxped(); }
    // premise context: Γ, ⊞Π
    Multiset premise() const { return gamma + dnecm(pi); }
    size_t hash() const;
};

// principal: ImpL/ImpR the implication; modal rules the body φ; Cut the cut formula.
struct RuleTag {
    Rule rule = Rule::Ax;
    Formula principal;
    ModalSplit split;
    bool operator==(const RuleTag& o) const {
        if (rule != o.rule || principal != o.principal) return false;
        return !is_modal(rule) || split == o.split;
    }
    // the modal formula in the conclusion's right side
    Formula modal_formula() const;
    size_t hash() const;
};

using NodeId = uint32_t;
using WitnessId = uint32_t;

struct ProofNode {
    NodeId id = 0;
    Sequent seq;
    bool backedge = false;
    NodeId target = 0;
    RuleTag tag;
    std::vector<NodeId> children;
    std::vector<WitnessId> witnesses;
};

struct Proof {
    std::map<NodeId, ProofNode> nodes;
    NodeId root = 0;
    std::map<WitnessId, std::shared_ptr<const Proof>> witness_table;

    const ProofNode& node(NodeId id) const;
    const Sequent& conclusion() const { return node(root).seq; }
    const Proof& witness(WitnessId w) const;
};

// --- file format

Proof parse_proof(std::string_view text);
std::string print_proof(const Proof& p);
struct Sexp;
Proof proof_from_sexp(const Sexp& s);

// Equality up to renaming of node and witness identifiers.
bool proof_equal(const Proof& a, const Proof& b);

// --- structure

// Throws Error when the child/back-edge graph is not a tree plus ancestor back-edges.
void validate_structure(const Proof& p);
std::map<NodeId, NodeId> parent_map(const Proof& p);

std::vector<std::set<NodeId>> local_fragments(const Proof& p);
int local_height(const Proof& p);
int ordinal_height(const Proof& p);

enum class CutClass { CutFree, LocalOnly, MainOnly, WitnessOnly, Mixed };
const char* cut_class_name(CutClass c);

struct CutCensus {
    int main_local_cuts = 0;
    int main_global_cuts = 0;
    int main_nonlocal_cuts = 0;  // reachable through a boxpf premise, even if also local
    int witness_cuts_transitive = 0;
    CutClass classification = CutClass::CutFree;
};
CutCensus cut_census(const Proof& p);
// largest cut-formula size anywhere (transitively), 0 if cut-free
int max_cut_size(const Proof& p);
// true when every witness (transitively) is LocalOnly or CutFree
bool witnesses_local_only(const Proof& p);
int count_nodes(const Proof& p);  // transitively

}  // namespace kplus
