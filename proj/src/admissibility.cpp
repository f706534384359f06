#include "kplus/admissibility.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "kplus/transforms.hpp"

namespace kplus {

namespace {

thread_local AdmitStats g_stats;

void need(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
}

void require_cut_free(Store& st, Ref r, const char* who) {
    if (st.has_cut_anywhere(r)) throw Error(std::string(who) + ": premise is not cut-free");
}

}  // namespace

AdmitStats& admit_stats() { return g_stats; }
void reset_admit_stats() { g_stats = AdmitStats{}; }

UnblockedWitnessData verify_unblocked(Store& st, Ref r, Formula chi, int alpha) {
    UnblockedWitnessData d{chi, alpha, true, ""};
    Formula bchi = Formula::boxp(chi);
    std::unordered_set<Ref> seen;
    std::vector<Ref> todo{r};
    while (!todo.empty() && d.verified) {
        Ref x = todo.back();
        todo.pop_back();
        if (!seen.insert(x).second) continue;
        for (Ref y : main_global_nodes(st, x)) {
            const GNode& n = st.at(y);
            for (Ref w : n.wits) todo.push_back(w);
            if (n.tag.rule != Rule::Cut) continue;
            Formula f = n.tag.principal;
            if (f != chi && f != bchi) {
                d.verified = false;
                d.reason = "cut on " + print_formula(f);
                break;
            }
            if (f == bchi) {
                Ref k0 = n.kids[0], k1 = n.kids[1];
                if (st.has_cut_anywhere(k0) || st.has_cut_anywhere(k1)) {
                    d.verified = false;
                    d.reason = "premise of a " + print_formula(bchi) + " cut has cuts";
                    break;
                }
                int h = st.ordinal_height(k0) + st.ordinal_height(k1);
                if (h > alpha) {
                    d.verified = false;
                    d.reason = "cut height " + std::to_string(h) + " exceeds " + std::to_string(alpha);
                    break;
                }
            }
        }
    }
    return d;
}

Ref admit_atomic(Store& st, Ref left, Ref right, Formula p) {
    need(p.is_atom(), "admit_atomic: cut formula is not an atom");
    Resolver res = [&](const CutObligation& ob, CaseId c) -> Ref {
        if (is_modal_case(c)) throw Error("admit_atomic: modal case on an atom");
        return admit_atomic(st, ob.left, ob.right, ob.chi);
    };
    return reduce_cut(st, CutObligation{left, right, p, "cut"}, res).result;
}

Ref admit_box(Store& st, Ref left, Ref right, Formula box_chi, const CutOracle& inner) {
    need(box_chi.is_box(), "admit_box: cut formula is not a box");
    Resolver res = [&](const CutObligation& ob, CaseId c) -> Ref {
        if (is_modal_case(c)) {
            ++g_stats.inner_calls;
            return inner(ob.left, ob.right, ob.chi);
        }
        return admit_box(st, ob.left, ob.right, ob.chi, inner);
    };
    return reduce_cut(st, CutObligation{left, right, box_chi, "cut"}, res).result;
}

Ref admit_master_top(Store& st, Ref left, Ref right, Formula chi, int alpha, const CutOracle& inner) {
    ++g_stats.master_top_calls;
    Formula bchi = Formula::boxp(chi);
    int h = st.ordinal_height(left) + st.ordinal_height(right);
    if (h > alpha)
        throw Error("admit_master_top: height " + std::to_string(h) + " exceeds budget " + std::to_string(alpha));
    Resolver res = [&](const CutObligation& ob, CaseId c) -> Ref {
        if (!is_modal_case(c)) return admit_master_top(st, ob.left, ob.right, chi, alpha, inner);
        if (ob.chi == bchi) {
            if (c == CaseId::BoxPUBoxPF && ob.tag == "cut3") return st.cut(ob.chi, ob.left, ob.right);
            int hh = st.ordinal_height(ob.left) + st.ordinal_height(ob.right);
            if (hh >= alpha)
                throw Error("admit_master_top: residual height " + std::to_string(hh) + " not below " +
                            std::to_string(alpha));
            return admit_master(st, ob.left, ob.right, bchi, inner);
        }
        if (c == CaseId::BoxPUBoxPF && ob.tag == "cut4") return st.cut(ob.chi, ob.left, ob.right);
        ++g_stats.inner_calls;
        return inner(ob.left, ob.right, ob.chi);
    };
    return reduce_cut(st, CutObligation{left, right, bchi, "cut"}, res).result;
}

Ref admit_master_local(Store& st, Ref r, Formula chi, int alpha, const CutOracle& inner) {
    Formula bchi = Formula::boxp(chi);
    std::unordered_map<Ref, Ref> memo;
    std::function<Ref(Ref)> go = [&](Ref x) -> Ref {
        if (!st.main_local_has_cut(x)) return x;
        auto it = memo.find(x);
        if (it != memo.end()) return it->second;
        const GNode n = st.at(x);
        Ref out = x;
        switch (n.tag.rule) {
        case Rule::Cut:
            if (n.tag.principal == bchi) {
                require_cut_free(st, n.kids[0], "admit_master_local");
                require_cut_free(st, n.kids[1], "admit_master_local");
                ++g_stats.master_local_calls;
                out = admit_master_top(st, n.kids[0], n.kids[1], chi, alpha, inner);
            } else if (n.tag.principal == chi) {
                out = st.cut(chi, go(n.kids[0]), go(n.kids[1]));
            } else {
                throw Error("admit_master_local: unexpected cut on " + print_formula(n.tag.principal));
            }
            break;
        case Rule::ImpL:
            out = st.impl(n.tag.principal, go(n.kids[0]), go(n.kids[1]));
            break;
        case Rule::ImpR:
            out = st.impr(n.tag.principal, go(n.kids[0]));
            break;
        default:
            break;
        }
        memo[x] = out;
        return out;
    };
    return go(r);
}

Ref admit_master_aux(Store& st, Ref left, Ref right, Formula chi, int alpha, const CutOracle& inner) {
    Ref top = admit_master_top(st, left, right, chi, alpha, inner);
    size_t states = 0;
    Ref out = map_fragments(
        st, top, [&](Ref c) { return st.main_global_has_cut(c); },
        [&](Ref c) { return admit_master_local(st, c, chi, alpha, inner); }, "admit_master_aux", &states);
    g_stats.fragments += states;
    return out;
}

Ref admit_master(Store& st, Ref left, Ref right, Formula boxp_chi, const CutOracle& inner) {
    need(boxp_chi.is_boxp(), "admit_master: cut formula is not a boxp");
    ++g_stats.master_calls;
    Formula chi = boxp_chi.body();
    int alpha = st.ordinal_height(left) + st.ordinal_height(right);
    Ref aux = admit_master_aux(st, left, right, chi, alpha, inner);
    Ref pushed = push(st, aux);
    CutOracle counted = [&](Ref l, Ref r, Formula f) {
        ++g_stats.inner_calls;
        return inner(l, r, f);
    };
    Ref out = map_witnesses(st, pushed, [&](Ref w) { return eliminate_finite(st, w, counted); });
    if (st.has_cut_anywhere(out)) throw Error("admit_master: cuts survived witness repair");
    return out;
}

Ref admit_cut(Store& st, Ref left, Ref right, Formula chi) {
    ++g_stats.admit_calls;
    obligation_conclusion(st, CutObligation{left, right, chi, "cut"});
    CutOracle rec = [&st](Ref l, Ref r, Formula f) { return admit_cut(st, l, r, f); };
    switch (chi.kind()) {
    case Kind::Bot:
        return tf::inv_bot(st, left);
    case Kind::Atom:
        return admit_atomic(st, left, right, chi);
    case Kind::Box:
        return admit_box(st, left, right, chi, rec);
    case Kind::BoxP:
        return admit_master(st, left, right, chi, rec);
    case Kind::Imp: {
        Formula a = chi.lhs(), b = chi.rhs();
        Ref pi = tf::rinv(st, left, chi);                               // a, Γ ⇒ Δ, b
        Ref t0 = tf::weaken(st, tf::linv0(st, right, chi), {}, Multiset{b});  // Γ ⇒ Δ, a, b
        Ref t1 = tf::linv1(st, right, chi);                             // b, Γ ⇒ Δ
        Ref c0 = admit_cut(st, t0, pi, a);                              // Γ ⇒ Δ, b
        return admit_cut(st, c0, t1, b);
    }
    }
    throw Error("admit_cut: unknown formula kind");
}

Ref map_witnesses(Store& st, Ref r, const std::function<Ref(Ref)>& f) {
    std::unordered_map<Ref, Ref> done, wmemo, ph;
    std::unordered_set<Ref> onpath;
    std::function<Ref(Ref)> go = [&](Ref x) -> Ref {
        auto it = done.find(x);
        if (it != done.end()) return it->second;
        if (onpath.count(x)) {
            auto p = ph.find(x);
            if (p != ph.end()) return p->second;
            Ref h = st.reserve();
            ph[x] = h;
            return h;
        }
        onpath.insert(x);
        const GNode n = st.at(x);
        std::vector<Ref> kids, wits;
        bool changed = false;
        for (Ref w : n.wits) {
            auto m = wmemo.find(w);
            Ref v = m != wmemo.end() ? m->second : (wmemo[w] = f(w));
            wits.push_back(v);
            changed |= v != w;
        }
        for (Ref k : n.kids) {
            kids.push_back(go(k));
            changed |= kids.back() != k;
        }
        onpath.erase(x);
        Ref out;
        auto p = ph.find(x);
        if (p != ph.end()) {
            st.define(p->second, n.seq, n.tag, kids, wits);
            out = p->second;
        } else {
            out = changed ? st.make(n.seq, n.tag, kids, wits) : x;
        }
        done[x] = out;
        return out;
    };
    return go(r);
}

Ref eliminate_finite(Store& st, Ref r, const CutOracle& oracle) {
    if (!st.has_cut_anywhere(r)) return r;
    Ref x = map_witnesses(st, r, [&](Ref w) { return eliminate_finite(st, w, oracle); });
    std::unordered_map<Ref, Ref> memo;
    std::function<Ref(Ref)> go = [&](Ref y) -> Ref {
        auto it = memo.find(y);
        if (it != memo.end()) return it->second;
        const GNode n = st.at(y);
        Ref out = y;
        switch (n.tag.rule) {
        case Rule::Cut:
            out = oracle(go(n.kids[0]), go(n.kids[1]), n.tag.principal);
            break;
        case Rule::ImpL:
            if (st.main_local_has_cut(y)) out = st.impl(n.tag.principal, go(n.kids[0]), go(n.kids[1]));
            break;
        case Rule::ImpR:
            if (st.main_local_has_cut(y)) out = st.impr(n.tag.principal, go(n.kids[0]));
            break;
        case Rule::BoxPF:
            if (st.main_global_has_cut(n.kids[0]))
                throw Error("eliminate_finite: cut outside the main local fragment");
            break;
        default:
            break;
        }
        memo[y] = out;
        return out;
    };
    return go(x);
}

Ref eliminate_finite(Store& st, Ref r) {
    CutOracle rec = [&st](Ref l, Ref rr, Formula f) { return admit_cut(st, l, rr, f); };
    return eliminate_finite(st, r, rec);
}

Ref eliminate_cuts(Store& st, Ref r, Stages* stages) {
    std::unordered_map<Ref, Ref> memo;
    std::function<Ref(Ref, Stages*)> elim = [&](Ref x, Stages* sg) -> Ref {
        auto it = memo.find(x);
        if (it != memo.end() && !sg) return it->second;
        Ref s1 = map_witnesses(st, x, [&](Ref w) { return st.has_cut_anywhere(w) ? elim(w, nullptr) : w; });
        Ref s2 = push(st, s1);
        Ref s3 = map_witnesses(st, s2, [&](Ref w) { return eliminate_finite(st, w); });
        if (sg) *sg = Stages{s1, s2, s3};
        memo[x] = s3;
        return s3;
    };
    Ref out = elim(r, stages);
    if (st.has_cut_anywhere(out)) throw Error("eliminate_cuts: cuts survived");
    return out;
}

// --- proof-level wrappers

Proof admit_cut(const Proof& left, const Proof& right, Formula chi) {
    Store st;
    Ref l = import_proof(st, left), r = import_proof(st, right);
    require_cut_free(st, l, "admit_cut");
    require_cut_free(st, r, "admit_cut");
    return *export_proof(st, admit_cut(st, l, r, chi));
}

Proof eliminate_finite(const Proof& p) {
    Store st;
    return *export_proof(st, eliminate_finite(st, import_proof(st, p)));
}

Proof eliminate_cuts(const Proof& p) {
    Store st;
    return *export_proof(st, eliminate_cuts(st, import_proof(st, p)));
}

ProofStages eliminate_cuts_staged(const Proof& p) {
    Store st;
    Stages sg;
    eliminate_cuts(st, import_proof(st, p), &sg);
    return ProofStages{*export_proof(st, sg.stage1), *export_proof(st, sg.stage2), *export_proof(st, sg.stage3)};
}

}  // namespace kplus
