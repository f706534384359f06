#include "kplus/cutreduce.hpp"

#include <algorithm>
#include <unordered_map>

#include "kplus/transforms.hpp"

namespace kplus {

const char* case_name(CaseId c) {
    switch (c) {
    case CaseId::LabelCoincide: return "label-coincide";
    case CaseId::AxSide: return "axiom-side";
    case CaseId::AxCutLeft: return "axiom-cut-left";
    case CaseId::AxCutRight: return "axiom-cut-right";
    case CaseId::AxCutBot: return "axiom-cut-bot";
    case CaseId::Principal: return "principal-imp";
    case CaseId::CommLeftImpL: return "comm-left-impl";
    case CaseId::CommLeftImpR: return "comm-left-impr";
    case CaseId::CommRightImpR: return "comm-right-impr";
    case CaseId::CommRightImpL: return "comm-right-impl";
    case CaseId::WeakenLeft: return "weaken-left";
    case CaseId::WeakenRight: return "weaken-right";
    case CaseId::BoxBox: return "box-box";
    case CaseId::BoxBoxPU: return "box-boxpu";
    case CaseId::BoxBoxPF: return "box-boxpf";
    case CaseId::BoxPUBox: return "boxpu-box";
    case CaseId::BoxPUBoxPU: return "boxpu-boxpu";
    case CaseId::BoxPUBoxPF: return "boxpu-boxpf";
    }
    return "?";
}

bool is_modal_case(CaseId c) { return c >= CaseId::BoxBox; }

namespace {

thread_local TraceFn g_trace;

bool shared_atom(const Sequent& s) {
    for (auto& [f, n] : s.left.entries())
        if (f.is_atom() && s.right.contains(f)) return true;
    return false;
}

bool axiomatic(const Sequent& s) { return s.left.contains(Formula::bot()) || shared_atom(s); }

bool is_axiom_rule(Rule r) { return r == Rule::Ax || r == Rule::AxBot; }

// left modal with χ as its principal formula
bool modal_principal(const GNode& n, Formula chi) {
    return (n.tag.rule == Rule::BoxR || n.tag.rule == Rule::BoxPU) && n.tag.modal_formula() == chi;
}

// right modal with χ in ◻Γ or ◻⁺Π
bool modal_context(const GNode& n, Formula chi) {
    if (n.tag.rule != Rule::BoxR && n.tag.rule != Rule::BoxPU && n.tag.rule != Rule::BoxPF) return false;
    if (chi.is_box()) return n.tag.split.gamma.contains(chi.body());
    if (chi.is_boxp()) return n.tag.split.pi.contains(chi.body());
    return false;
}

}  // namespace

void set_trace(TraceFn fn) { g_trace = std::move(fn); }

Sequent obligation_conclusion(const Store& st, const CutObligation& ob) {
    const Sequent& sr = st.seq(ob.right);
    const Sequent& sl = st.seq(ob.left);
    if (!sr.left.contains(ob.chi))
        throw Error("cut: " + print_formula(ob.chi) + " absent on the left of the right premise");
    Sequent c{sr.left.without(ob.chi), sr.ann, sr.right};
    if (sl != Sequent{c.left, c.ann, c.right.with(ob.chi)})
        throw Error("cut: premise contexts disagree: " + print_sequent(sl) + " vs " + print_sequent(sr));
    return c;
}

std::vector<CaseId> applicable_cases(Store& st, const CutObligation& ob) {
    std::vector<CaseId> out;
    Sequent c = obligation_conclusion(st, ob);
    const GNode& L = st.at(ob.left);
    const GNode& R = st.at(ob.right);
    Formula chi = ob.chi;
    if (chi.is_boxp() && c.ann.is_focus_on(chi.body())) out.push_back(CaseId::LabelCoincide);
    if ((is_axiom_rule(L.tag.rule) || is_axiom_rule(R.tag.rule)) && axiomatic(c)) out.push_back(CaseId::AxSide);
    if (L.tag.rule == Rule::Ax && chi.is_atom() && c.left.contains(chi)) out.push_back(CaseId::AxCutLeft);
    if (R.tag.rule == Rule::Ax && chi.is_atom() && c.right.contains(chi)) out.push_back(CaseId::AxCutRight);
    if (R.tag.rule == Rule::AxBot && chi.is_bot()) out.push_back(CaseId::AxCutBot);
    if (L.tag.rule == Rule::ImpR && L.tag.principal == chi && R.tag.rule == Rule::ImpL && R.tag.principal == chi)
        out.push_back(CaseId::Principal);
    if (L.tag.rule == Rule::ImpL) out.push_back(CaseId::CommLeftImpL);
    if (L.tag.rule == Rule::ImpR && L.tag.principal != chi) out.push_back(CaseId::CommLeftImpR);
    if (R.tag.rule == Rule::ImpR) out.push_back(CaseId::CommRightImpR);
    if (R.tag.rule == Rule::ImpL && R.tag.principal != chi) out.push_back(CaseId::CommRightImpL);
    if (is_modal(L.tag.rule) && L.tag.split.delta_wk.contains(chi)) out.push_back(CaseId::WeakenLeft);
    if (is_modal(R.tag.rule) && R.tag.split.sigma.contains(chi)) out.push_back(CaseId::WeakenRight);
    if (modal_principal(L, chi) && modal_context(R, chi)) {
        bool lb = L.tag.rule == Rule::BoxR;
        switch (R.tag.rule) {
        case Rule::BoxR: out.push_back(lb ? CaseId::BoxBox : CaseId::BoxPUBox); break;
        case Rule::BoxPU: out.push_back(lb ? CaseId::BoxBoxPU : CaseId::BoxPUBoxPU); break;
        default: out.push_back(lb ? CaseId::BoxBoxPF : CaseId::BoxPUBoxPF); break;
        }
    }
    return out;
}

ReductionResult reduce_cut(Store& st, const CutObligation& ob, const Resolver& resolve_in) {
    ReductionResult rr;
    Sequent c = obligation_conclusion(st, ob);
    const GNode L = st.at(ob.left);
    const GNode R = st.at(ob.right);
    const Formula chi = ob.chi;
    if (L.tag.rule == Rule::Cut || R.tag.rule == Rule::Cut)
        throw Error("reduce_cut: premise ends in a cut");

    auto cut = [&](Ref l, Ref r, Formula f, const char* tag) -> Ref {
        CutObligation res{l, r, f, tag};
        rr.residuals.push_back(res);
        if (resolve_in) return resolve_in(res, rr.which);
        return st.cut(f, l, r);
    };
    auto done = [&](CaseId id, Ref r) {
        rr.result = r;
        if (g_trace) g_trace(id, chi, rr.residuals.size());
        return rr;
    };

    // (1) labelling coincides with the cut formula
    if (chi.is_boxp() && c.ann.is_focus_on(chi.body())) {
        rr.which = CaseId::LabelCoincide;
        return done(rr.which, tf::rctr_boxp(st, ob.left, chi.body()));
    }

    // (2) axiomatic
    if (is_axiom_rule(L.tag.rule) || is_axiom_rule(R.tag.rule)) {
        if (axiomatic(c)) {
            rr.which = CaseId::AxSide;
            return done(rr.which, shared_atom(c) ? st.ax(c) : st.axbot(c));
        }
        if (L.tag.rule == Rule::Ax) {
            rr.which = CaseId::AxCutLeft;
            return done(rr.which, tf::lctr_atom(st, ob.right, chi));
        }
        if (R.tag.rule == Rule::Ax) {
            rr.which = CaseId::AxCutRight;
            return done(rr.which, tf::rctr_atom(st, ob.left, chi));
        }
        if (R.tag.rule == Rule::AxBot) {
            rr.which = CaseId::AxCutBot;
            return done(rr.which, tf::inv_bot(st, ob.left));
        }
        throw Error("reduce_cut: axiomatic case without a matching shape");
    }

    // (3) principal implication
    if (L.tag.rule == Rule::ImpR && L.tag.principal == chi && R.tag.rule == Rule::ImpL &&
        R.tag.principal == chi) {
        rr.which = CaseId::Principal;
        Formula c0 = chi.lhs(), c1 = chi.rhs();
        Ref r1 = cut(tf::weaken(st, R.kids[0], {}, Multiset{c1}), L.kids[0], c0, "cut1");
        return done(rr.which, cut(r1, R.kids[1], c1, "cut2"));
    }

    // (4) commutative implication cases
    if (L.tag.rule == Rule::ImpL) {
        rr.which = CaseId::CommLeftImpL;
        Formula a = L.tag.principal;
        Ref k0 = cut(L.kids[0], tf::linv0(st, ob.right, a), chi, "cut1");
        Ref k1 = cut(L.kids[1], tf::linv1(st, ob.right, a), chi, "cut2");
        return done(rr.which, st.impl(a, k0, k1));
    }
    if (L.tag.rule == Rule::ImpR && L.tag.principal != chi) {
        rr.which = CaseId::CommLeftImpR;
        Formula b = L.tag.principal;
        return done(rr.which, st.impr(b, cut(L.kids[0], tf::rinv(st, ob.right, b), chi, "cut1")));
    }
    if (R.tag.rule == Rule::ImpR) {
        rr.which = CaseId::CommRightImpR;
        Formula b = R.tag.principal;
        return done(rr.which, st.impr(b, cut(tf::rinv(st, ob.left, b), R.kids[0], chi, "cut1")));
    }
    if (R.tag.rule == Rule::ImpL && R.tag.principal != chi) {
        rr.which = CaseId::CommRightImpL;
        Formula a = R.tag.principal;
        Ref k0 = cut(tf::linv0(st, ob.left, a), R.kids[0], chi, "cut1");
        Ref k1 = cut(tf::linv1(st, ob.left, a), R.kids[1], chi, "cut2");
        return done(rr.which, st.impl(a, k0, k1));
    }

    // (5) cut formula in a weakening part
    if (is_modal(L.tag.rule) && L.tag.split.delta_wk.contains(chi)) {
        rr.which = CaseId::WeakenLeft;
        RuleTag t = L.tag;
        t.split.delta_wk.remove(chi);
        return done(rr.which, st.make(c, t, L.kids, L.wits));
    }
    if (is_modal(R.tag.rule) && R.tag.split.sigma.contains(chi)) {
        rr.which = CaseId::WeakenRight;
        RuleTag t = R.tag;
        t.split.sigma.remove(chi);
        return done(rr.which, st.make(c, t, R.kids, R.wits));
    }

    // (6) modal against modal
    if (!modal_principal(L, chi) || !modal_context(R, chi))
        throw Error("reduce_cut: no catalog case applies to " + print_formula(chi) + " between " +
                    rule_name(L.tag.rule) + " and " + rule_name(R.tag.rule));

    const ModalSplit& ls = L.tag.split;
    const ModalSplit& rs = R.tag.split;
    Formula x0 = chi.body();
    Multiset g1 = rs.gamma, p1 = rs.pi;
    if (chi.is_box())
        g1.remove(x0);
    else
        p1.remove(x0);
    ModalContexts m = merge_modal_contexts(ls.sigma, ls.gamma, ls.pi, rs.sigma, g1, p1);
    Multiset prem2 = m.gamma + dnecm(m.pi);
    Multiset add_l = prem2 - (ls.gamma + dnecm(ls.pi));
    Multiset add_r = prem2 - (g1 + dnecm(p1));
    ModalSplit out_split{m.sigma, m.gamma, m.pi, rs.delta_wk};
    Formula phi = R.tag.principal;
    Formula bphi = Formula::boxp(phi);
    Annotation fphi = Annotation::focus(phi);
    Annotation circ = Annotation::unfocused();
    bool left_box = L.tag.rule == Rule::BoxR;
    Rule rrule = R.tag.rule;
    rr.which = left_box ? (rrule == Rule::BoxR ? CaseId::BoxBox : rrule == Rule::BoxPU ? CaseId::BoxBoxPU : CaseId::BoxBoxPF)
                        : (rrule == Rule::BoxR ? CaseId::BoxPUBox : rrule == Rule::BoxPU ? CaseId::BoxPUBoxPU : CaseId::BoxPUBoxPF);

    Ref tau0 = tf::weaken(st, R.wits[0], add_r, {});
    Ref tau1 = 0;
    if (rrule == Rule::BoxPU) tau1 = tf::weaken(st, R.wits[1], add_r, {});
    if (rrule == Rule::BoxPF) tau1 = tf::weaken(st, R.kids[0], add_r, {});

    Ref rho0, rho1 = 0;
    if (left_box) {
        Ref pi0 = L.wits[0];
        rho0 = cut(tf::weaken(st, pi0, add_l, Multiset{phi}), tau0, x0, "cut1");
        if (rrule != Rule::BoxR) {
            Ref l = tf::change_annotation(st, tf::weaken(st, pi0, add_l, Multiset{bphi}), fphi);
            rho1 = cut(l, tau1, x0, "cut2");
        }
    } else {
        Ref pi0 = L.wits[0], pi1 = L.wits[1];
        Multiset add_l_x = add_l.with(x0);
        Ref l1 = tf::change_annotation(st, tf::weaken(st, pi1, add_l_x, Multiset{phi}), circ);
        Ref inner = cut(l1, tau0, chi, "cut1");
        rho0 = cut(tf::weaken(st, pi0, add_l, Multiset{phi}), inner, x0, "cut2");
        if (rrule != Rule::BoxR) {
            Ref l3 = tf::change_annotation(st, tf::weaken(st, pi1, add_l_x, Multiset{bphi}), fphi);
            Ref c3 = cut(l3, tau1, chi, "cut3");
            Ref l4 = tf::change_annotation(st, tf::weaken(st, pi0, add_l, Multiset{bphi}), fphi);
            rho1 = cut(l4, c3, x0, "cut4");
        }
    }
    Ref out;
    switch (rrule) {
    case Rule::BoxR: out = st.boxr(phi, out_split, c.ann, rho0); break;
    case Rule::BoxPU: out = st.boxpu(phi, out_split, c.ann, rho0, rho1); break;
    default: out = st.boxpf(phi, out_split, rho0, rho1); break;
    }
    if (st.seq(out) != c) throw Error("reduce_cut: modal reduction changed the conclusion");
    return done(rr.which, out);
}

// --- pushing cuts

Ref push_top(Store& st, const CutObligation& ob, PushStats* stats) {
    Resolver res = [&](const CutObligation& r, CaseId c) -> Ref {
        if (is_modal_case(c)) return st.cut(r.chi, r.left, r.right);
        return push_top(st, r, stats);
    };
    ReductionResult rr = reduce_cut(st, ob, res);
    if (stats) {
        ++stats->firings;
        ++stats->by_case[case_name(rr.which)];
    }
    return rr.result;
}

Ref push_local(Store& st, Ref r, PushStats* stats) {
    std::unordered_map<Ref, Ref> memo;
    std::function<Ref(Ref)> go = [&](Ref x) -> Ref {
        if (!st.main_local_has_cut(x)) return x;
        auto it = memo.find(x);
        if (it != memo.end()) return it->second;
        const GNode n = st.at(x);
        Ref out;
        switch (n.tag.rule) {
        case Rule::Cut: {
            Ref l = go(n.kids[0]);
            Ref rr = go(n.kids[1]);
            if (stats) ++stats->push_top_calls;
            out = push_top(st, CutObligation{l, rr, n.tag.principal, "cut"}, stats);
            break;
        }
        case Rule::ImpL:
            out = st.impl(n.tag.principal, go(n.kids[0]), go(n.kids[1]));
            break;
        case Rule::ImpR:
            out = st.impr(n.tag.principal, go(n.kids[0]));
            break;
        default:
            out = x;
        }
        memo[x] = out;
        return out;
    };
    return go(r);
}

Ref map_fragments(Store& st, Ref r, const std::function<bool(Ref)>& needs,
                  const std::function<Ref(Ref)>& local, const char* what, size_t* states_out) {
    std::unordered_map<Ref, Ref> memo;
    size_t states = 0;
    std::function<Ref(Ref)> go;
    std::function<Ref(Ref, std::unordered_map<Ref, Ref>&)> rebuild = [&](Ref x, std::unordered_map<Ref, Ref>& seen) -> Ref {
        auto it = seen.find(x);
        if (it != seen.end()) return it->second;
        const GNode n = st.at(x);
        Ref out = x;
        if (n.tag.rule == Rule::BoxPF) {
            Ref k = go(n.kids[0]);
            if (k != n.kids[0]) out = st.make(n.seq, n.tag, {k}, n.wits);
        } else if (!n.kids.empty()) {
            std::vector<Ref> kids;
            bool changed = false;
            for (Ref k : n.kids) {
                kids.push_back(rebuild(k, seen));
                changed |= kids.back() != k;
            }
            if (changed) out = st.make(n.seq, n.tag, kids, n.wits);
        }
        seen[x] = out;
        return out;
    };
    go = [&](Ref c) -> Ref {
        auto it = memo.find(c);
        if (it != memo.end()) return it->second;
        if (!needs(c)) {
            memo[c] = c;
            return c;
        }
        if (++states > memo_budget()) throw BudgetExceeded(what, states);
        if (states_out) *states_out = std::max(*states_out, states);
        Ref ph = st.reserve();
        memo[c] = ph;
        Ref f = local(c);
        std::unordered_map<Ref, Ref> seen;
        st.define_as(ph, rebuild(f, seen));
        return ph;
    };
    return go(r);
}

Ref push(Store& st, Ref r, PushStats* stats) {
    size_t states = 0;
    Ref out = map_fragments(
        st, r, [&](Ref c) { return st.main_global_has_cut(c); },
        [&](Ref c) { return push_local(st, c, stats); }, "push", &states);
    if (stats) stats->memo_states = std::max(stats->memo_states, states);
    return out;
}

Proof push_local(const Proof& p, PushStats* stats) {
    Store st;
    Ref r = import_proof(st, p);
    return *export_proof(st, push_local(st, r, stats));
}

Proof push(const Proof& p, PushStats* stats) {
    Store st;
    Ref r = import_proof(st, p);
    return *export_proof(st, push(st, r, stats));
}

ProofReduction reduce_cut(const Proof& left, const Proof& right, Formula chi) {
    Store st;
    CutObligation ob{import_proof(st, left), import_proof(st, right), chi, "cut"};
    ReductionResult rr = reduce_cut(st, ob);
    return ProofReduction{rr.which, *export_proof(st, rr.result), rr.residuals.size()};
}

}  // namespace kplus
