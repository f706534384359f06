#pragma once

// Shared node store used by every transformation. Nodes are immutable once
// defined; acyclic nodes are hash-consed, cycles are tied through reserved
// placeholders. A Proof (tree + back-edges) is the unfolding of a Ref.

#include <cstdint>
#include <deque>
#include <memory>
#include <unordered_map>
#include <vector>

#include "kplus/proof.hpp"

namespace kplus {

using Ref = uint32_t;

struct GNode {
    Sequent seq;
    RuleTag tag;
    std::vector<Ref> kids;
    std::vector<Ref> wits;
    bool defined = false;
};

struct BudgetExceeded : Error {
    size_t states;
    BudgetExceeded(const std::string& what, size_t n)
        : Error("memo budget exhausted in " + what + " after " + std::to_string(n) + " states"),
          states(n) {}
};

size_t memo_budget();  // KPLUS_MEMO_BUDGET or 1'000'000
void set_memo_budget(size_t n);

class Store {
public:
    Ref make(const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids = {},
             std::vector<Ref> wits = {});
    Ref reserve();
    void define(Ref r, const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids = {},
                std::vector<Ref> wits = {});
    // copy the content of src into placeholder r
    void define_as(Ref r, Ref src);

    const GNode& at(Ref r) const { return nodes_[r]; }
    const Sequent& seq(Ref r) const { return nodes_[r].seq; }
    Rule rule(Ref r) const { return nodes_[r].tag.rule; }
    size_t size() const { return nodes_.size(); }

    // rule constructors deriving the conclusion from the premises
    Ref ax(const Sequent& s);
    Ref axbot(const Sequent& s);
    Ref impl(Formula principal, Ref k0, Ref k1);
    Ref impr(Formula principal, Ref k0);
    Ref cut(Formula chi, Ref left, Ref right);
    Ref boxr(Formula phi, const ModalSplit& sp, Annotation s, Ref w0);
    Ref boxpf(Formula phi, const ModalSplit& sp, Ref w0, Ref child);
    Ref boxpu(Formula phi, const ModalSplit& sp, Annotation s, Ref w0, Ref w1);

    // same node with another sequent/tag (used by relabelling transforms)
    Ref remake(Ref r, const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids,
               std::vector<Ref> wits);

    // cached measures over completed graphs
    int ordinal_height(Ref r);
    int local_height(Ref r);
    bool main_local_has_cut(Ref r);
    bool main_global_has_cut(Ref r);
    bool has_cut_anywhere(Ref r);

private:
    struct Key {
        const GNode* n;
    };
    struct KeyHash {
        size_t operator()(const Key& k) const;
    };
    struct KeyEq {
        bool operator()(const Key& a, const Key& b) const;
    };
    std::deque<GNode> nodes_;
    std::unordered_map<Key, Ref, KeyHash, KeyEq> cons_;
    std::unordered_map<Ref, int> oh_, lh_;
    std::unordered_map<Ref, bool> mlc_, mgc_, any_;
};

Ref import_proof(Store& st, const Proof& p);
// Unfolds the graph at r into a tree with back-edges; throws BudgetExceeded
// past node_budget emitted nodes.
std::shared_ptr<const Proof> export_proof(const Store& st, Ref r, size_t node_budget = 0);

// nodes reachable from r through child edges
std::vector<Ref> main_global_nodes(const Store& st, Ref r);

}  // namespace kplus
