#include "kplus/proof.hpp"

#include <algorithm>
#include <functional>

#include "kplus/sexpr.hpp"

namespace kplus {

const char* rule_name(Rule r) {
    switch (r) {
    case Rule::Ax: return "ax";
    case Rule::AxBot: return "axbot";
    case Rule::ImpL: return "impl";
    case Rule::ImpR: return "impr";
    case Rule::BoxR: return "box";
    case Rule::BoxPF: return "boxpf";
    case Rule::BoxPU: return "boxpu";
    case Rule::Cut: return "cut";
    case Rule::BoxPlain: return "boxp";
    }
    return "?";
}

bool is_modal(Rule r) {
    return r == Rule::BoxR || r == Rule::BoxPF || r == Rule::BoxPU || r == Rule::BoxPlain;
}

size_t ModalSplit::hash() const {
    return hash_mix(hash_mix(sigma.hash(), gamma.hash()), hash_mix(pi.hash(), delta_wk.hash()));
}

Formula RuleTag::modal_formula() const {
    return rule == Rule::BoxR ? Formula::box(principal) : Formula::boxp(principal);
}

size_t RuleTag::hash() const {
    size_t h = hash_mix(static_cast<size_t>(rule), principal.hash());
    return is_modal(rule) ? hash_mix(h, split.hash()) : h;
}

const ProofNode& Proof::node(NodeId id) const {
    auto it = nodes.find(id);
    if (it == nodes.end()) throw Error("no node " + std::to_string(id));
    return it->second;
}

const Proof& Proof::witness(WitnessId w) const {
    auto it = witness_table.find(w);
    if (it == witness_table.end() || !it->second) throw Error("no witness " + std::to_string(w));
    return *it->second;
}

// --- parsing

namespace {

uint32_t parse_id(const Sexp& s) {
    if (s.is_list || s.atom.empty()) sexp_fail(s, "expected identifier");
    for (char c : s.atom)
        if (c < '0' || c > '9') sexp_fail(s, "identifiers are natural numbers");
    return static_cast<uint32_t>(std::stoul(s.atom));
}

ModalSplit split_from_sexp(const Sexp& s) {
    if (!s.headed("split") || s.items.size() != 5) sexp_fail(s, "malformed split");
    const char* names[] = {"sigma", "gamma", "pi", "deltawk"};
    Multiset parts[4];
    for (int i = 0; i < 4; ++i) {
        const Sexp& part = s.items[i + 1];
        if (!part.headed(names[i])) sexp_fail(part, std::string("expected ") + names[i]);
        parts[i] = multiset_from_sexp(part, 1);
    }
    return ModalSplit{parts[0], parts[1], parts[2], parts[3]};
}

RuleTag tag_from_sexp(const Sexp& s) {
    if (!s.headed("rule") || s.items.size() < 2) sexp_fail(s, "malformed rule");
    const std::string& t = s.items[1].atom;
    RuleTag tag;
    auto need = [&](size_t n) {
        if (s.items.size() != n) sexp_fail(s, "wrong number of rule arguments for " + t);
    };
    if (t == "ax" || t == "axbot") {
        need(2);
        tag.rule = t == "ax" ? Rule::Ax : Rule::AxBot;
    } else if (t == "impl" || t == "impr") {
        need(3);
        tag.rule = t == "impl" ? Rule::ImpL : Rule::ImpR;
        tag.principal = formula_from_sexp(s.items[2]);
        if (!tag.principal.is_imp()) sexp_fail(s.items[2], "principal must be an implication");
    } else if (t == "box" || t == "boxpf" || t == "boxpu" || t == "boxp") {
        need(4);
        tag.rule = t == "box" ? Rule::BoxR
                 : t == "boxpf" ? Rule::BoxPF
                 : t == "boxpu" ? Rule::BoxPU
                                : Rule::BoxPlain;
        tag.principal = formula_from_sexp(s.items[2]);
        tag.split = split_from_sexp(s.items[3]);
    } else if (t == "cut") {
        need(3);
        tag.rule = Rule::Cut;
        if (!s.items[2].headed("cutformula") || s.items[2].items.size() != 2)
            sexp_fail(s.items[2], "expected (cutformula F)");
        tag.principal = formula_from_sexp(s.items[2].items[1]);
    } else {
        sexp_fail(s.items[1], "unknown rule tag '" + t + "'");
    }
    return tag;
}

}  // namespace

Proof proof_from_sexp(const Sexp& s) {
    if (!s.headed("proof")) sexp_fail(s, "expected (proof ...)");
    Proof p;
    bool have_root = false;
    std::vector<NodeId> unsequenced;
    for (size_t i = 1; i < s.items.size(); ++i) {
        const Sexp& it = s.items[i];
        if (it.headed("root")) {
            if (it.items.size() != 2) sexp_fail(it, "malformed root");
            p.root = parse_id(it.items[1]);
            have_root = true;
        } else if (it.headed("node")) {
            if (it.items.size() < 3) sexp_fail(it, "malformed node");
            ProofNode n;
            n.id = parse_id(it.items[1]);
            if (p.nodes.count(n.id)) sexp_fail(it, "duplicate node id");
            size_t k = 2;
            bool has_seq = it.items[k].headed("seq");
            if (has_seq) n.seq = sequent_from_sexp(it.items[k++], false);
            if (k >= it.items.size()) sexp_fail(it, "node without step");
            const Sexp& step = it.items[k++];
            if (step.headed("backedge")) {
                if (step.items.size() != 2) sexp_fail(step, "malformed backedge");
                n.backedge = true;
                n.target = parse_id(step.items[1]);
                if (!has_seq) unsequenced.push_back(n.id);
            } else {
                if (!has_seq) sexp_fail(it, "rule node without sequent");
                n.tag = tag_from_sexp(step);
                for (; k < it.items.size(); ++k) {
                    const Sexp& extra = it.items[k];
                    if (extra.headed("children")) {
                        for (size_t j = 1; j < extra.items.size(); ++j)
                            n.children.push_back(parse_id(extra.items[j]));
                    } else if (extra.headed("witness")) {
                        for (size_t j = 1; j < extra.items.size(); ++j)
                            n.witnesses.push_back(parse_id(extra.items[j]));
                    } else {
                        sexp_fail(extra, "unexpected node field");
                    }
                }
            }
            if (n.backedge && k != it.items.size()) sexp_fail(it, "trailing fields on backedge");
            p.nodes.emplace(n.id, std::move(n));
        } else if (it.headed("witnessdef")) {
            if (it.items.size() != 3) sexp_fail(it, "malformed witnessdef");
            WitnessId w = parse_id(it.items[1]);
            if (p.witness_table.count(w)) sexp_fail(it, "duplicate witness id");
            p.witness_table[w] = std::make_shared<const Proof>(proof_from_sexp(it.items[2]));
        } else {
            sexp_fail(it, "unexpected proof field");
        }
    }
    if (!have_root) sexp_fail(s, "proof without root");
    for (NodeId id : unsequenced) {
        ProofNode& n = p.nodes[id];
        auto t = p.nodes.find(n.target);
        if (t != p.nodes.end() && !t->second.backedge) n.seq = t->second.seq;
    }
    return p;
}

Proof parse_proof(std::string_view text) { return proof_from_sexp(read_sexp(text)); }

// --- printing

namespace {

void print_proof_to(std::string& out, const Proof& p, int indent) {
    std::string pad(indent, ' ');
    out += "(proof (root " + std::to_string(p.root) + ")";
    for (auto& [id, n] : p.nodes) {
        out += "\n" + pad + "  (node " + std::to_string(id) + " ";
        if (n.backedge) {
            auto t = p.nodes.find(n.target);
            if (t == p.nodes.end() || t->second.backedge || t->second.seq != n.seq)
                out += print_sequent(n.seq) + " ";
            out += "(backedge " + std::to_string(n.target) + "))";
            continue;
        }
        out += print_sequent(n.seq) + " (rule " + rule_name(n.tag.rule);
        switch (n.tag.rule) {
        case Rule::Ax:
        case Rule::AxBot:
            break;
        case Rule::Cut:
            out += " (cutformula " + print_formula(n.tag.principal) + ")";
            break;
        case Rule::ImpL:
        case Rule::ImpR:
            out += " " + print_formula(n.tag.principal);
            break;
        default: {
            const ModalSplit& sp = n.tag.split;
            auto part = [](const char* name, const Multiset& m) {
                std::string inner = print_multiset(m);
                return std::string("(") + name + (m.empty() ? "" : " ") + inner.substr(1);
            };
            out += " " + print_formula(n.tag.principal) + " (split " + part("sigma", sp.sigma) + " " +
                   part("gamma", sp.gamma) + " " + part("pi", sp.pi) + " " +
                   part("deltawk", sp.delta_wk) + ")";
        }
        }
        out += ") (children";
        for (NodeId c : n.children) out += " " + std::to_string(c);
        out += ") (witness";
        for (WitnessId w : n.witnesses) out += " " + std::to_string(w);
        out += "))";
    }
    for (auto& [w, q] : p.witness_table) {
        out += "\n" + pad + "  (witnessdef " + std::to_string(w) + " ";
        if (q) print_proof_to(out, *q, indent + 4);
        out += ")";
    }
    out += ")";
}

}  // namespace

std::string print_proof(const Proof& p) {
    std::string out;
    print_proof_to(out, p, 0);
    out += "\n";
    return out;
}

// --- equality up to renaming

namespace {

struct EqCtx {
    std::set<std::pair<const Proof*, const Proof*>> assumed;

    bool proofs(const Proof& a, const Proof& b) {
        auto key = std::make_pair(&a, &b);
        if (assumed.count(key)) return true;
        assumed.insert(key);
        std::map<NodeId, NodeId> m;
        return nodes(a, b, a.root, b.root, m);
    }

    bool nodes(const Proof& a, const Proof& b, NodeId x, NodeId y, std::map<NodeId, NodeId>& m) {
        auto ix = a.nodes.find(x);
        auto iy = b.nodes.find(y);
        if (ix == a.nodes.end() || iy == b.nodes.end()) return false;
        const ProofNode& nx = ix->second;
        const ProofNode& ny = iy->second;
        if (nx.backedge != ny.backedge || nx.seq != ny.seq) return false;
        if (nx.backedge) {
            auto t = m.find(nx.target);
            return t != m.end() && t->second == ny.target;
        }
        if (!(nx.tag == ny.tag) || nx.children.size() != ny.children.size() ||
            nx.witnesses.size() != ny.witnesses.size())
            return false;
        m[x] = y;
        for (size_t i = 0; i < nx.children.size(); ++i)
            if (!nodes(a, b, nx.children[i], ny.children[i], m)) return false;
        for (size_t i = 0; i < nx.witnesses.size(); ++i) {
            auto wa = a.witness_table.find(nx.witnesses[i]);
            auto wb = b.witness_table.find(ny.witnesses[i]);
            if (wa == a.witness_table.end() || wb == b.witness_table.end()) return false;
            if (!proofs(*wa->second, *wb->second)) return false;
        }
        return true;
    }
};

}  // namespace

bool proof_equal(const Proof& a, const Proof& b) {
    EqCtx ctx;
    return ctx.proofs(a, b);
}

// --- structure

std::map<NodeId, NodeId> parent_map(const Proof& p) {
    std::map<NodeId, NodeId> parent;
    for (auto& [id, n] : p.nodes)
        if (!n.backedge)
            for (NodeId c : n.children) parent.emplace(c, id);
    return parent;
}

void validate_structure(const Proof& p) {
    if (!p.nodes.count(p.root)) throw Error("structure: root " + std::to_string(p.root) + " missing");
    std::map<NodeId, int> indeg;
    for (auto& [id, n] : p.nodes) {
        if (n.backedge) {
            if (!p.nodes.count(n.target))
                throw Error("structure: backedge " + std::to_string(id) + " targets missing node");
            continue;
        }
        for (NodeId c : n.children) {
            if (!p.nodes.count(c))
                throw Error("structure: node " + std::to_string(id) + " has missing child");
            if (++indeg[c] > 1) throw Error("structure: node " + std::to_string(c) + " has two parents");
        }
    }
    if (indeg.count(p.root)) throw Error("structure: root has a parent");
    // reachability via child edges, without revisiting
    std::set<NodeId> seen;
    std::vector<NodeId> stack{p.root};
    while (!stack.empty()) {
        NodeId x = stack.back();
        stack.pop_back();
        if (!seen.insert(x).second) throw Error("structure: child edges form a cycle");
        const ProofNode& n = p.node(x);
        if (!n.backedge)
            for (NodeId c : n.children) stack.push_back(c);
    }
    if (seen.size() != p.nodes.size()) throw Error("structure: unreachable nodes");
    auto parent = parent_map(p);
    for (auto& [id, n] : p.nodes) {
        if (!n.backedge) continue;
        NodeId cur = id;
        bool found = false;
        while (parent.count(cur)) {
            cur = parent[cur];
            if (cur == n.target) {
                found = true;
                break;
            }
        }
        if (!found) throw Error("structure: backedge " + std::to_string(id) + " target is not an ancestor");
    }
}

std::vector<std::set<NodeId>> local_fragments(const Proof& p) {
    validate_structure(p);
    std::vector<std::set<NodeId>> parts;
    std::vector<NodeId> roots{p.root};
    while (!roots.empty()) {
        NodeId r = roots.back();
        roots.pop_back();
        std::set<NodeId> part;
        std::vector<NodeId> stack{r};
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            part.insert(x);
            const ProofNode& n = p.node(x);
            if (n.backedge) continue;
            for (NodeId c : n.children) {
                if (n.tag.rule == Rule::BoxPF)
                    roots.push_back(c);
                else
                    stack.push_back(c);
            }
        }
        parts.push_back(std::move(part));
    }
    return parts;
}

int local_height(const Proof& p) {
    std::function<int(NodeId)> h = [&](NodeId x) {
        const ProofNode& n = p.node(x);
        if (n.backedge || n.tag.rule == Rule::BoxPF) return 0;
        int best = 0;
        for (NodeId c : n.children) best = std::max(best, 1 + h(c));
        return best;
    };
    return h(p.root);
}

int ordinal_height(const Proof& p) {
    int best = -1;
    for (auto& [w, q] : p.witness_table) best = std::max(best, ordinal_height(*q));
    return best + 1;
}

const char* cut_class_name(CutClass c) {
    switch (c) {
    case CutClass::CutFree: return "CutFree";
    case CutClass::LocalOnly: return "LocalOnly";
    case CutClass::MainOnly: return "MainOnly";
    case CutClass::WitnessOnly: return "WitnessOnly";
    case CutClass::Mixed: return "Mixed";
    }
    return "?";
}

namespace {

int main_local_cut_count(const Proof& p) {
    int n = 0;
    std::vector<NodeId> stack{p.root};
    while (!stack.empty()) {
        const ProofNode& x = p.node(stack.back());
        stack.pop_back();
        if (x.backedge) continue;
        if (x.tag.rule == Rule::Cut) ++n;
        if (x.tag.rule == Rule::BoxPF) continue;
        for (NodeId c : x.children) stack.push_back(c);
    }
    return n;
}

// cut nodes met after crossing a boxpf premise, back-edges followed: these
// recur in non-main local fragments of the unfolding
int nonlocal_cut_count(const Proof& p) {
    std::set<NodeId> seen;
    std::vector<NodeId> stack;
    for (auto& [id, x] : p.nodes)
        if (!x.backedge && x.tag.rule == Rule::BoxPF)
            for (NodeId c : x.children) stack.push_back(c);
    int n = 0;
    while (!stack.empty()) {
        NodeId id = stack.back();
        stack.pop_back();
        const ProofNode& x = p.node(id);
        if (x.backedge) {
            stack.push_back(x.target);
            continue;
        }
        if (!seen.insert(id).second) continue;
        if (x.tag.rule == Rule::Cut) ++n;
        for (NodeId c : x.children) stack.push_back(c);
    }
    return n;
}

int all_cuts(const Proof& p) {
    int n = 0;
    for (auto& [id, x] : p.nodes)
        if (!x.backedge && x.tag.rule == Rule::Cut) ++n;
    for (auto& [w, q] : p.witness_table) n += all_cuts(*q);
    return n;
}

}  // namespace

CutCensus cut_census(const Proof& p) {
    CutCensus c;
    c.main_local_cuts = main_local_cut_count(p);
    c.main_nonlocal_cuts = nonlocal_cut_count(p);
    for (auto& [id, x] : p.nodes)
        if (!x.backedge && x.tag.rule == Rule::Cut) ++c.main_global_cuts;
    for (auto& [w, q] : p.witness_table) c.witness_cuts_transitive += all_cuts(*q);
    if (c.main_global_cuts == 0 && c.witness_cuts_transitive == 0)
        c.classification = CutClass::CutFree;
    else if (c.witness_cuts_transitive == 0 && c.main_nonlocal_cuts == 0)
        c.classification = CutClass::LocalOnly;
    else if (c.witness_cuts_transitive == 0)
        c.classification = CutClass::MainOnly;
    else if (c.main_global_cuts == 0)
        c.classification = CutClass::WitnessOnly;
    else
        c.classification = CutClass::Mixed;
    return c;
}

int max_cut_size(const Proof& p) {
    int m = 0;
    for (auto& [id, x] : p.nodes)
        if (!x.backedge && x.tag.rule == Rule::Cut) m = std::max(m, x.tag.principal.size());
    for (auto& [w, q] : p.witness_table) m = std::max(m, max_cut_size(*q));
    return m;
}

bool witnesses_local_only(const Proof& p) {
    for (auto& [w, q] : p.witness_table) {
        CutClass c = cut_census(*q).classification;
        if (c != CutClass::CutFree && c != CutClass::LocalOnly) return false;
    }
    return true;
}

int count_nodes(const Proof& p) {
    int n = static_cast<int>(p.nodes.size());
    for (auto& [w, q] : p.witness_table) n += count_nodes(*q);
    return n;
}

}  // namespace kplus
