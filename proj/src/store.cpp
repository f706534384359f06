#include "kplus/store.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <set>
#include <unordered_set>

namespace kplus {

namespace {
size_t g_budget = 0;
}

size_t memo_budget() {
    if (g_budget) return g_budget;
    if (const char* env = std::getenv("KPLUS_MEMO_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<size_t>(v);
    }
    return 1'000'000;
}

void set_memo_budget(size_t n) { g_budget = n; }

size_t Store::KeyHash::operator()(const Key& k) const {
    size_t h = hash_mix(k.n->seq.hash(), k.n->tag.hash());
    for (Ref r : k.n->kids) h = hash_mix(h, r);
    h = hash_mix(h, 0xabc);
    for (Ref r : k.n->wits) h = hash_mix(h, r);
    return h;
}

bool Store::KeyEq::operator()(const Key& a, const Key& b) const {
    return a.n->kids == b.n->kids && a.n->wits == b.n->wits && a.n->tag == b.n->tag &&
           a.n->seq == b.n->seq;
}

Ref Store::make(const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids, std::vector<Ref> wits) {
    GNode probe{seq, tag, std::move(kids), std::move(wits), true};
    auto it = cons_.find(Key{&probe});
    if (it != cons_.end()) return it->second;
    Ref r = static_cast<Ref>(nodes_.size());
    nodes_.push_back(std::move(probe));
    cons_.emplace(Key{&nodes_.back()}, r);
    return r;
}

Ref Store::reserve() {
    Ref r = static_cast<Ref>(nodes_.size());
    nodes_.emplace_back();
    return r;
}

void Store::define(Ref r, const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids,
                   std::vector<Ref> wits) {
    GNode& n = nodes_[r];
    if (n.defined) throw Error("store: node defined twice");
    n.seq = seq;
    n.tag = tag;
    n.kids = std::move(kids);
    n.wits = std::move(wits);
    n.defined = true;
}

void Store::define_as(Ref r, Ref src) {
    GNode copy = nodes_[src];
    define(r, copy.seq, copy.tag, std::move(copy.kids), std::move(copy.wits));
}

Ref Store::remake(Ref, const Sequent& seq, const RuleTag& tag, std::vector<Ref> kids,
                  std::vector<Ref> wits) {
    return make(seq, tag, std::move(kids), std::move(wits));
}

Ref Store::ax(const Sequent& s) { return make(s, RuleTag{Rule::Ax, Formula(), {}}); }
Ref Store::axbot(const Sequent& s) { return make(s, RuleTag{Rule::AxBot, Formula(), {}}); }

Ref Store::impl(Formula principal, Ref k0, Ref k1) {
    const Sequent& s1 = seq(k1);
    Sequent c{s1.left.without(principal.rhs()).with(principal), s1.ann, s1.right};
    return make(c, RuleTag{Rule::ImpL, principal, {}}, {k0, k1});
}

Ref Store::impr(Formula principal, Ref k0) {
    const Sequent& s0 = seq(k0);
    Sequent c{s0.left.without(principal.lhs()), s0.ann, s0.right.without(principal.rhs()).with(principal)};
    return make(c, RuleTag{Rule::ImpR, principal, {}}, {k0});
}

Ref Store::cut(Formula chi, Ref left, Ref right) {
    const Sequent& s1 = seq(right);
    Sequent c{s1.left.without(chi), s1.ann, s1.right};
    return make(c, RuleTag{Rule::Cut, chi, {}}, {left, right});
}

Ref Store::boxr(Formula phi, const ModalSplit& sp, Annotation s, Ref w0) {
    Sequent c{sp.left(), s, sp.delta_wk.with(Formula::box(phi))};
    return make(c, RuleTag{Rule::BoxR, phi, sp}, {}, {w0});
}

Ref Store::boxpf(Formula phi, const ModalSplit& sp, Ref w0, Ref child) {
    Sequent c{sp.left(), Annotation::focus(phi), sp.delta_wk.with(Formula::boxp(phi))};
    return make(c, RuleTag{Rule::BoxPF, phi, sp}, {child}, {w0});
}

Ref Store::boxpu(Formula phi, const ModalSplit& sp, Annotation s, Ref w0, Ref w1) {
    Sequent c{sp.left(), s, sp.delta_wk.with(Formula::boxp(phi))};
    return make(c, RuleTag{Rule::BoxPU, phi, sp}, {}, {w0, w1});
}

std::vector<Ref> main_global_nodes(const Store& st, Ref r) {
    std::vector<Ref> out;
    std::unordered_set<Ref> seen{r};
    std::vector<Ref> stack{r};
    while (!stack.empty()) {
        Ref x = stack.back();
        stack.pop_back();
        out.push_back(x);
        if (!st.at(x).defined) throw Error("store: undefined placeholder reached");
        for (Ref k : st.at(x).kids)
            if (seen.insert(k).second) stack.push_back(k);
    }
    return out;
}

int Store::ordinal_height(Ref r) {
    auto it = oh_.find(r);
    if (it != oh_.end()) return it->second;
    int best = 0;
    for (Ref x : main_global_nodes(*this, r))
        for (Ref w : nodes_[x].wits) best = std::max(best, 1 + ordinal_height(w));
    oh_[r] = best;
    return best;
}

int Store::local_height(Ref r) {
    auto it = lh_.find(r);
    if (it != lh_.end()) return it->second;
    lh_[r] = -1000000;  // guards against progress-free cycles
    const GNode& n = nodes_[r];
    int best = 0;
    if (n.tag.rule != Rule::BoxPF)
        for (Ref k : n.kids) best = std::max(best, 1 + local_height(k));
    if (best < 0) throw Error("store: cycle inside a local fragment");
    lh_[r] = best;
    return best;
}

bool Store::main_local_has_cut(Ref r) {
    auto it = mlc_.find(r);
    if (it != mlc_.end()) return it->second;
    const GNode& n = nodes_[r];
    bool v = n.tag.rule == Rule::Cut;
    if (!v && n.tag.rule != Rule::BoxPF)
        for (Ref k : n.kids)
            if (main_local_has_cut(k)) {
                v = true;
                break;
            }
    mlc_[r] = v;
    return v;
}

bool Store::main_global_has_cut(Ref r) {
    auto it = mgc_.find(r);
    if (it != mgc_.end()) return it->second;
    bool v = false;
    for (Ref x : main_global_nodes(*this, r))
        if (nodes_[x].tag.rule == Rule::Cut) {
            v = true;
            break;
        }
    mgc_[r] = v;
    return v;
}

bool Store::has_cut_anywhere(Ref r) {
    auto it = any_.find(r);
    if (it != any_.end()) return it->second;
    bool v = false;
    for (Ref x : main_global_nodes(*this, r)) {
        if (nodes_[x].tag.rule == Rule::Cut) v = true;
        for (Ref w : nodes_[x].wits)
            if (!v && has_cut_anywhere(w)) v = true;
        if (v) break;
    }
    any_[r] = v;
    return v;
}

// --- import

namespace {

struct Importer {
    Store& st;
    std::unordered_map<const Proof*, Ref> done;

    Ref run(const Proof& p) {
        auto it = done.find(&p);
        if (it != done.end()) return it->second;
        validate_structure(p);
        std::set<NodeId> targets;
        for (auto& [id, n] : p.nodes)
            if (n.backedge) targets.insert(n.target);
        std::unordered_map<NodeId, Ref> reserved;
        for (NodeId t : targets) reserved[t] = st.reserve();
        std::function<Ref(NodeId)> go = [&](NodeId id) -> Ref {
            const ProofNode& n = p.node(id);
            if (n.backedge) return reserved.at(n.target);
            std::vector<Ref> kids, wits;
            for (NodeId c : n.children) kids.push_back(go(c));
            for (WitnessId w : n.witnesses) wits.push_back(run(p.witness(w)));
            auto rv = reserved.find(id);
            if (rv != reserved.end()) {
                st.define(rv->second, n.seq, n.tag, kids, wits);
                return rv->second;
            }
            return st.make(n.seq, n.tag, kids, wits);
        };
        Ref r = go(p.root);
        done[&p] = r;
        return r;
    }
};

struct Exporter {
    const Store& st;
    size_t budget;
    size_t emitted = 0;
    std::unordered_map<Ref, std::shared_ptr<const Proof>> done;

    std::shared_ptr<const Proof> run(Ref r) {
        auto it = done.find(r);
        if (it != done.end()) return it->second;
        auto p = std::make_shared<Proof>();
        std::unordered_map<Ref, NodeId> onpath;
        std::unordered_map<Ref, WitnessId> wids;
        NodeId next = 0;
        std::function<NodeId(Ref)> go = [&](Ref x) -> NodeId {
            if (budget && ++emitted > budget) throw BudgetExceeded("export", emitted);
            NodeId id = next++;
            const GNode& g = st.at(x);
            if (!g.defined) throw Error("export: undefined placeholder");
            ProofNode n;
            n.id = id;
            n.seq = g.seq;
            auto on = onpath.find(x);
            if (on != onpath.end()) {
                n.backedge = true;
                n.target = on->second;
                p->nodes.emplace(id, std::move(n));
                return id;
            }
            n.tag = g.tag;
            onpath[x] = id;
            for (Ref w : g.wits) {
                auto wi = wids.find(w);
                WitnessId wid;
                if (wi == wids.end()) {
                    wid = static_cast<WitnessId>(wids.size());
                    wids[w] = wid;
                    p->witness_table[wid] = run(w);
                } else {
                    wid = wi->second;
                }
                n.witnesses.push_back(wid);
            }
            for (Ref k : g.kids) n.children.push_back(go(k));
            onpath.erase(x);
            p->nodes.emplace(id, std::move(n));
            return id;
        };
        p->root = go(r);
        done[r] = p;
        return p;
    }
};

}  // namespace

Ref import_proof(Store& st, const Proof& p) {
    Importer im{st, {}};
    return im.run(p);
}

std::shared_ptr<const Proof> export_proof(const Store& st, Ref r, size_t node_budget) {
    Exporter ex{st, node_budget ? node_budget : memo_budget() * 4, 0, {}};
    return ex.run(r);
}

}  // namespace kplus
