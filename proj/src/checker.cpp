#include "kplus/checker.hpp"

#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "kplus/store.hpp"

namespace kplus {

const char* cut_mode_name(CutMode m) {
    switch (m) {
    case CutMode::NoCut: return "nocut";
    case CutMode::Cut: return "cut";
    case CutMode::MCut: return "mcut";
    case CutMode::WCut: return "wcut";
    }
    return "?";
}

std::optional<CutMode> parse_cut_mode(const std::string& s) {
    if (s == "nocut") return CutMode::NoCut;
    if (s == "cut") return CutMode::Cut;
    if (s == "mcut") return CutMode::MCut;
    if (s == "wcut") return CutMode::WCut;
    return std::nullopt;
}

bool CheckReport::has(const std::string& kind) const {
    for (auto& v : violations)
        if (v.kind == kind) return true;
    return false;
}

std::string CheckReport::jsonl() const {
    std::string out;
    for (auto& v : violations) {
        nlohmann::json j;
        j["node"] = v.node;
        j["kind"] = v.kind;
        j["message"] = v.message;
        out += j.dump() + "\n";
    }
    return out;
}

namespace {

CutMode witness_mode(CutMode m) {
    switch (m) {
    case CutMode::NoCut:
    case CutMode::MCut:
        return CutMode::NoCut;
    default:
        return CutMode::Cut;
    }
}

struct Checker {
    std::vector<Violation>& out;
    std::string prefix;

    void add(NodeId id, const std::string& kind, const std::string& msg) {
        out.push_back({prefix + std::to_string(id), kind, msg});
    }

    void expect(NodeId at, const char* what, const Sequent& want, const Sequent& got) {
        if (want != got)
            add(at, "rule-schema",
                std::string(what) + " should be " + print_sequent(want) + ", found " + print_sequent(got));
    }

    void run(const Proof& p, const Annotation& s, CutMode mode) {
        auto rootit = p.nodes.find(p.root);
        if (rootit == p.nodes.end()) {
            add(p.root, "structure", "root node missing");
            return;
        }
        if (rootit->second.seq.ann != s)
            add(p.root, "root-annotation",
                "root annotated " + print_annotation(rootit->second.seq.ann) + ", system is " +
                    print_annotation(s));

        std::map<NodeId, NodeId> parent;
        std::set<NodeId> reach;
        std::vector<NodeId> stack{p.root};
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            if (!reach.insert(x).second) continue;
            const ProofNode& n = p.nodes.at(x);
            if (n.backedge) continue;
            for (NodeId c : n.children) {
                if (!p.nodes.count(c)) {
                    add(x, "structure", "child " + std::to_string(c) + " missing");
                    continue;
                }
                if (c == p.root || parent.count(c)) {
                    add(x, "structure", "node " + std::to_string(c) + " has more than one parent");
                    continue;
                }
                parent[c] = x;
                stack.push_back(c);
            }
        }
        for (auto& [id, n] : p.nodes)
            if (!reach.count(id)) add(id, "structure", "node unreachable from root");

        std::map<std::pair<WitnessId, std::string>, bool> witness_done;
        for (NodeId id : reach) {
            const ProofNode& n = p.nodes.at(id);
            if (!n.seq.focus_ok())
                add(id, "focus-membership",
                    print_formula(Formula::boxp(n.seq.ann.formula())) + " not on the right");
            if (n.backedge) {
                check_backedge(p, id, n, parent);
                continue;
            }
            check_rule(p, id, n, mode, witness_done);
        }
    }

    void check_backedge(const Proof& p, NodeId id, const ProofNode& n, const std::map<NodeId, NodeId>& parent) {
        auto t = p.nodes.find(n.target);
        if (t == p.nodes.end()) {
            add(id, "backedge-target", "target " + std::to_string(n.target) + " missing");
            return;
        }
        if (t->second.backedge) add(id, "backedge-target", "target is itself a back-edge");
        if (t->second.seq != n.seq)
            add(id, "backedge-sequent", "sequent differs from target " + std::to_string(n.target));
        bool progress = false, found = false;
        NodeId cur = id;
        size_t guard = 0;
        while (parent.count(cur) && guard++ <= p.nodes.size()) {
            NodeId up = parent.at(cur);
            if (p.nodes.at(up).tag.rule == Rule::BoxPF) progress = true;
            cur = up;
            if (cur == n.target) {
                found = true;
                break;
            }
        }
        if (!found) add(id, "backedge-target", "target " + std::to_string(n.target) + " is not a strict ancestor");
        if (!found || !progress)
            add(id, "cycle-without-progress", "cycle through " + std::to_string(n.target) +
                                                  " crosses no right premise of boxpf");
    }

    void check_rule(const Proof& p, NodeId id, const ProofNode& n, CutMode mode,
                    std::map<std::pair<WitnessId, std::string>, bool>& witness_done) {
        const Sequent& c = n.seq;
        const RuleTag& t = n.tag;
        size_t want_k = 0, want_w = 0;
        switch (t.rule) {
        case Rule::Ax:
        case Rule::AxBot: break;
        case Rule::ImpR: want_k = 1; break;
        case Rule::ImpL:
        case Rule::Cut: want_k = 2; break;
        case Rule::BoxR: want_w = 1; break;
        case Rule::BoxPF: want_k = 1; want_w = 1; break;
        case Rule::BoxPU: want_w = 2; break;
        case Rule::BoxPlain:
            add(id, "rule-schema", "plain boxp rule in an annotated proof");
            return;
        }
        if (n.children.size() != want_k || n.witnesses.size() != want_w) {
            add(id, "arity", std::string(rule_name(t.rule)) + " expects " + std::to_string(want_k) +
                                 " children and " + std::to_string(want_w) + " witnesses, found " +
                                 std::to_string(n.children.size()) + " and " +
                                 std::to_string(n.witnesses.size()));
            return;
        }
        auto kid = [&](size_t i) -> const Sequent* {
            auto it = p.nodes.find(n.children[i]);
            return it == p.nodes.end() ? nullptr : &it->second.seq;
        };
        for (size_t i = 0; i < want_k; ++i)
            if (!kid(i)) return;

        if (t.rule == Rule::Cut && (mode == CutMode::NoCut || mode == CutMode::WCut))
            add(id, "cut-mode", std::string("cut not allowed in the main fragment under ") + cut_mode_name(mode));

        std::vector<Sequent> wexp;
        switch (t.rule) {
        case Rule::Ax: {
            bool ok = false;
            for (auto& [f, k] : c.left.entries())
                if (f.is_atom() && c.right.contains(f)) ok = true;
            if (!ok) add(id, "rule-schema", "ax without a shared atom");
            break;
        }
        case Rule::AxBot:
            if (!c.left.contains(Formula::bot())) add(id, "rule-schema", "axbot without bot on the left");
            break;
        case Rule::ImpL: {
            if (!c.left.contains(t.principal)) {
                add(id, "rule-schema", "principal not on the left");
                break;
            }
            Multiset g = c.left.without(t.principal);
            expect(id, "left premise", Sequent{g, c.ann, c.right.with(t.principal.lhs())}, *kid(0));
            expect(id, "right premise", Sequent{g.with(t.principal.rhs()), c.ann, c.right}, *kid(1));
            break;
        }
        case Rule::ImpR: {
            if (!c.right.contains(t.principal)) {
                add(id, "rule-schema", "principal not on the right");
                break;
            }
            expect(id, "premise",
                   Sequent{c.left.with(t.principal.lhs()), c.ann,
                           c.right.without(t.principal).with(t.principal.rhs())},
                   *kid(0));
            break;
        }
        case Rule::Cut:
            expect(id, "left premise", Sequent{c.left, c.ann, c.right.with(t.principal)}, *kid(0));
            expect(id, "right premise", Sequent{c.left.with(t.principal), c.ann, c.right}, *kid(1));
            break;
        default: {
            Formula mf = t.modal_formula();
            if (c.left != t.split.left() || c.right != t.split.delta_wk.with(mf)) {
                add(id, "rule-schema", "split does not match the conclusion");
                break;
            }
            Multiset prem = t.split.premise();
            Annotation f = Annotation::focus(t.principal);
            if (t.rule == Rule::BoxPF && !c.ann.is_focus_on(t.principal))
                add(id, "side-condition", "boxpf requires the focus " + print_formula(t.principal));
            if (t.rule == Rule::BoxPU && c.ann.is_focus_on(t.principal))
                add(id, "side-condition", "boxpu forbids the focus " + print_formula(t.principal));
            wexp.push_back(Sequent{prem, Annotation::unfocused(), Multiset{t.principal}});
            if (t.rule == Rule::BoxPU) wexp.push_back(Sequent{prem, f, Multiset{mf}});
            if (t.rule == Rule::BoxPF) expect(id, "right premise", Sequent{prem, f, Multiset{mf}}, *kid(0));
        }
        }

        for (size_t i = 0; i < wexp.size(); ++i) {
            WitnessId w = n.witnesses[i];
            auto it = p.witness_table.find(w);
            if (it == p.witness_table.end() || !it->second) {
                add(id, "witness-missing", "witness " + std::to_string(w) + " not defined");
                continue;
            }
            const Proof& wp = *it->second;
            auto root = wp.nodes.find(wp.root);
            if (root != wp.nodes.end() && root->second.seq != wexp[i]) {
                add(id, "witness-sequent", "witness " + std::to_string(w) + " should prove " +
                                               print_sequent(wexp[i]) + ", proves " +
                                               print_sequent(root->second.seq));
                continue;
            }
            auto key = std::make_pair(w, print_annotation(wexp[i].ann));
            if (witness_done[key]) continue;
            witness_done[key] = true;
            Checker sub{out, prefix + "w" + std::to_string(w) + "/"};
            sub.run(wp, wexp[i].ann, witness_mode(mode));
        }
    }
};

}  // namespace

CheckReport check(const Proof& p, const Annotation& s, CutMode mode) {
    CheckReport r;
    r.system = s;
    r.mode = mode;
    Checker c{r.violations, ""};
    c.run(p, s, mode);
    r.ok = r.violations.empty();
    return r;
}

FinitaryReport check_unfocused_finitary(const Proof& p) {
    FinitaryReport r;
    for (auto& [id, n] : p.nodes) {
        if (n.backedge) {
            r.ok = false;
            r.node = id;
            r.message = "back-edge in an unfocused main fragment";
            return r;
        }
        if (n.tag.rule == Rule::BoxPF) {
            r.ok = false;
            r.node = id;
            r.message = "boxpf in an unfocused main fragment";
            return r;
        }
    }
    return r;
}

// --- de/annotation

namespace {

struct Deannotator {
    Proof out;
    NodeId next = 0;

    NodeId copy(const Proof& p, NodeId x, std::map<NodeId, NodeId>& ids) {
        const ProofNode& n = p.node(x);
        NodeId id = next++;
        ids[x] = id;
        ProofNode m;
        m.id = id;
        m.seq = Sequent{n.seq.left, Annotation::unfocused(), n.seq.right};
        if (n.backedge) {
            m.backedge = true;
            m.target = ids.at(n.target);
            out.nodes[id] = m;
            return id;
        }
        m.tag = n.tag;
        auto inline_witness = [&](WitnessId w) {
            const Proof& wp = p.witness(w);
            std::map<NodeId, NodeId> wids;
            return copy(wp, wp.root, wids);
        };
        switch (n.tag.rule) {
        case Rule::BoxR:
            m.children.push_back(inline_witness(n.witnesses.at(0)));
            break;
        case Rule::BoxPF:
            m.tag.rule = Rule::BoxPlain;
            m.children.push_back(inline_witness(n.witnesses.at(0)));
            m.children.push_back(copy(p, n.children.at(0), ids));
            break;
        case Rule::BoxPU:
            m.tag.rule = Rule::BoxPlain;
            m.children.push_back(inline_witness(n.witnesses.at(0)));
            m.children.push_back(inline_witness(n.witnesses.at(1)));
            break;
        default:
            for (NodeId c : n.children) m.children.push_back(copy(p, c, ids));
        }
        out.nodes[id] = m;
        return id;
    }
};

struct KeyHash {
    size_t operator()(const std::pair<NodeId, Annotation>& k) const {
        return hash_mix(k.first, k.second.hash());
    }
};

}  // namespace

Proof deannotate(const Proof& p) {
    Deannotator d;
    std::map<NodeId, NodeId> ids;
    d.out.root = d.copy(p, p.root, ids);
    return d.out;
}

Proof annotate(const Proof& plain) {
    validate_structure(plain);
    using Key = std::pair<NodeId, Annotation>;
    struct Edge {
        size_t to;
        bool witness;
        bool progress;
    };
    std::vector<Key> keys;
    std::vector<std::vector<Edge>> edges;
    std::unordered_map<Key, size_t, KeyHash> index;

    auto resolve = [&](NodeId x) {
        const ProofNode& n = plain.node(x);
        return n.backedge ? n.target : x;
    };
    std::function<size_t(NodeId, Annotation)> visit = [&](NodeId x, Annotation s) -> size_t {
        x = resolve(x);
        Key k{x, s};
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        size_t i = keys.size();
        index[k] = i;
        keys.push_back(k);
        edges.emplace_back();
        const ProofNode& n = plain.node(x);
        std::vector<Edge> es;
        switch (n.tag.rule) {
        case Rule::BoxR:
            if (n.children.size() != 1) throw Error("annotate: plain box needs one premise");
            es.push_back({visit(n.children[0], Annotation::unfocused()), true, false});
            break;
        case Rule::BoxPlain: {
            if (n.children.size() != 2) throw Error("annotate: plain boxp needs two premises");
            Annotation f = Annotation::focus(n.tag.principal);
            es.push_back({visit(n.children[0], Annotation::unfocused()), true, false});
            bool main = s == f;
            es.push_back({visit(n.children[1], f), !main, main});
            break;
        }
        case Rule::BoxPF:
        case Rule::BoxPU:
            throw Error("annotate: input already annotated");
        default:
            for (NodeId c : n.children) es.push_back({visit(c, s), false, false});
        }
        edges[i] = es;
        return i;
    };
    size_t root = visit(plain.root, Annotation::unfocused());

    // Tarjan SCC
    size_t n = keys.size();
    std::vector<int> idx(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on(n, false);
    std::vector<size_t> stack;
    int counter = 0, ncomp = 0;
    std::function<void(size_t)> tarjan = [&](size_t v) {
        idx[v] = low[v] = counter++;
        stack.push_back(v);
        on[v] = true;
        for (auto& e : edges[v]) {
            if (idx[e.to] < 0) {
                tarjan(e.to);
                low[v] = std::min(low[v], low[e.to]);
            } else if (on[e.to]) {
                low[v] = std::min(low[v], idx[e.to]);
            }
        }
        if (low[v] == idx[v]) {
            for (;;) {
                size_t w = stack.back();
                stack.pop_back();
                on[w] = false;
                comp[w] = ncomp;
                if (w == v) break;
            }
            ++ncomp;
        }
    };
    for (size_t v = 0; v < n; ++v)
        if (idx[v] < 0) tarjan(v);
    for (size_t v = 0; v < n; ++v)
        for (auto& e : edges[v])
            if (comp[e.to] == comp[v] && e.witness)
                throw Error("annotate: cycle through node " + std::to_string(keys[v].first) +
                            " never settles on a focus");
    // inside each component the non-progress edges must be acyclic
    std::vector<int> color(n, 0);
    std::function<void(size_t)> dfs = [&](size_t v) {
        color[v] = 1;
        for (auto& e : edges[v]) {
            if (e.progress || comp[e.to] != comp[v]) continue;
            if (color[e.to] == 1)
                throw Error("annotate: cycle through node " + std::to_string(keys[v].first) +
                            " without progress");
            if (color[e.to] == 0) dfs(e.to);
        }
        color[v] = 2;
    };
    for (size_t v = 0; v < n; ++v)
        if (color[v] == 0) dfs(v);

    Store st;
    std::vector<Ref> refs(n);
    for (size_t v = 0; v < n; ++v) refs[v] = st.reserve();
    for (size_t v = 0; v < n; ++v) {
        const ProofNode& pn = plain.node(keys[v].first);
        Sequent q{pn.seq.left, keys[v].second, pn.seq.right};
        RuleTag tag = pn.tag;
        std::vector<Ref> kids, wits;
        switch (tag.rule) {
        case Rule::BoxR:
            wits.push_back(refs[edges[v][0].to]);
            break;
        case Rule::BoxPlain:
            wits.push_back(refs[edges[v][0].to]);
            if (edges[v][1].progress) {
                tag.rule = Rule::BoxPF;
                kids.push_back(refs[edges[v][1].to]);
            } else {
                tag.rule = Rule::BoxPU;
                wits.push_back(refs[edges[v][1].to]);
            }
            break;
        default:
            for (auto& e : edges[v]) kids.push_back(refs[e.to]);
        }
        st.define(refs[v], q, tag, kids, wits);
    }
    return *export_proof(st, refs[root]);
}

}  // namespace kplus
