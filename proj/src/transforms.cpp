#include "kplus/transforms.hpp"

#include <functional>
#include <unordered_map>

namespace kplus {
namespace tf {

namespace {

enum class Hook { None, Linv0, Linv1, Rinv };

struct Edit {
    Multiset rm_left, add_left, rm_right, add_right;
    Hook hook = Hook::None;
    Formula target;  // the inverted implication
    const char* name = "edit";
};

bool has_shared_atom(const Sequent& s) {
    for (auto& [f, n] : s.left.entries())
        if (f.is_atom() && s.right.contains(f)) return true;
    return false;
}

bool is_axiom(const Sequent& s) { return s.left.contains(Formula::bot()) || has_shared_atom(s); }

struct Editor {
    Store& st;
    const Edit& e;
    std::unordered_map<Ref, Ref> memo;

    Sequent apply(const Sequent& s) const {
        if (!s.left.includes(e.rm_left) || !s.right.includes(e.rm_right))
            throw Error(std::string(e.name) + ": formula to remove is absent in " + print_sequent(s));
        return Sequent{s.left - e.rm_left + e.add_left, s.ann, s.right - e.rm_right + e.add_right};
    }

    Ref go(Ref r) {
        auto it = memo.find(r);
        if (it != memo.end()) return it->second;
        const GNode n = st.at(r);
        Ref out;
        switch (n.tag.rule) {
        case Rule::Ax:
        case Rule::AxBot: {
            Sequent c = apply(n.seq);
            if (!is_axiom(c)) throw Error(std::string(e.name) + ": axiom lost its axiomatic character");
            bool bot = c.left.contains(Formula::bot());
            out = (n.tag.rule == Rule::AxBot && bot) || !has_shared_atom(c) ? st.axbot(c) : st.ax(c);
            break;
        }
        case Rule::ImpL:
            if ((e.hook == Hook::Linv0 || e.hook == Hook::Linv1) && n.tag.principal == e.target) {
                out = e.hook == Hook::Linv0 ? n.kids[0] : n.kids[1];
                break;
            }
            out = st.impl(n.tag.principal, go(n.kids[0]), go(n.kids[1]));
            break;
        case Rule::ImpR:
            if (e.hook == Hook::Rinv && n.tag.principal == e.target) {
                out = n.kids[0];
                break;
            }
            out = st.impr(n.tag.principal, go(n.kids[0]));
            break;
        case Rule::Cut:
            out = st.cut(n.tag.principal, go(n.kids[0]), go(n.kids[1]));
            break;
        default: {
            RuleTag tag = n.tag;
            if (!tag.split.sigma.includes(e.rm_left) || !tag.split.delta_wk.includes(e.rm_right))
                throw Error(std::string(e.name) + ": formula outside the weakening part of a modal rule");
            tag.split.sigma = tag.split.sigma - e.rm_left + e.add_left;
            tag.split.delta_wk = tag.split.delta_wk - e.rm_right + e.add_right;
            out = st.make(apply(n.seq), tag, n.kids, n.wits);
        }
        }
        memo[r] = out;
        return out;
    }
};

Ref run(Store& st, Ref r, const Edit& e) {
    Editor ed{st, e, {}};
    return ed.go(r);
}

void need(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
}

}  // namespace

Ref weaken(Store& st, Ref r, const Multiset& left, const Multiset& right) {
    if (left.empty() && right.empty()) return r;
    Edit e;
    e.add_left = left;
    e.add_right = right;
    e.name = "wk";
    return run(st, r, e);
}

Ref lctr_atom(Store& st, Ref r, Formula p) {
    need(p.is_atom(), "lctr: not an atom");
    need(st.seq(r).left.count(p) >= 2, "lctr: multiplicity of " + print_formula(p) + " below 2");
    Edit e;
    e.rm_left = Multiset{p};
    e.name = "lctr";
    return run(st, r, e);
}

Ref rctr_atom(Store& st, Ref r, Formula p) {
    need(p.is_atom(), "rctr: not an atom");
    need(st.seq(r).right.count(p) >= 2, "rctr: multiplicity of " + print_formula(p) + " below 2");
    Edit e;
    e.rm_right = Multiset{p};
    e.name = "rctr";
    return run(st, r, e);
}

Ref rctr_boxp(Store& st, Ref r, Formula chi) {
    Formula f = Formula::boxp(chi);
    need(st.seq(r).right.count(f) >= 2, "rctr_boxp: multiplicity of " + print_formula(f) + " below 2");
    Edit e;
    e.rm_right = Multiset{f};
    e.name = "rctr_boxp";
    return run(st, r, e);
}

Ref inv_bot(Store& st, Ref r) {
    need(st.seq(r).right.contains(Formula::bot()), "inv_bot: bot absent on the right");
    Edit e;
    e.rm_right = Multiset{Formula::bot()};
    e.name = "inv_bot";
    return run(st, r, e);
}

Ref linv0(Store& st, Ref r, Formula imp) {
    need(imp.is_imp() && st.seq(r).left.contains(imp), "linv0: implication absent on the left");
    Edit e;
    e.rm_left = Multiset{imp};
    e.add_right = Multiset{imp.lhs()};
    e.hook = Hook::Linv0;
    e.target = imp;
    e.name = "linv0";
    return run(st, r, e);
}

Ref linv1(Store& st, Ref r, Formula imp) {
    need(imp.is_imp() && st.seq(r).left.contains(imp), "linv1: implication absent on the left");
    Edit e;
    e.rm_left = Multiset{imp};
    e.add_left = Multiset{imp.rhs()};
    e.hook = Hook::Linv1;
    e.target = imp;
    e.name = "linv1";
    return run(st, r, e);
}

Ref rinv(Store& st, Ref r, Formula imp) {
    need(imp.is_imp() && st.seq(r).right.contains(imp), "rinv: implication absent on the right");
    Edit e;
    e.rm_right = Multiset{imp};
    e.add_left = Multiset{imp.lhs()};
    e.add_right = Multiset{imp.rhs()};
    e.hook = Hook::Rinv;
    e.target = imp;
    e.name = "rinv";
    return run(st, r, e);
}

Ref change_annotation(Store& st, Ref r, const Annotation& s) {
    const Sequent& top = st.seq(r);
    if (top.ann == s) return r;
    if (s.is_focus() && !top.right.contains(Formula::boxp(s.formula())))
        throw Error("change_annotation: focus-membership fails for " + print_annotation(s));
    std::unordered_map<Ref, Ref> memo;
    std::function<Ref(Ref)> go = [&](Ref x) -> Ref {
        auto it = memo.find(x);
        if (it != memo.end()) return it->second;
        const GNode n = st.at(x);
        Sequent c{n.seq.left, s, n.seq.right};
        RuleTag tag = n.tag;
        Ref out;
        switch (n.tag.rule) {
        case Rule::BoxPF:
            tag.rule = Rule::BoxPU;
            out = st.make(c, tag, {}, {n.wits[0], n.kids[0]});
            break;
        case Rule::BoxPU:
            if (s.is_focus_on(n.tag.principal)) {
                tag.rule = Rule::BoxPF;
                out = st.make(c, tag, {n.wits[1]}, {n.wits[0]});
            } else {
                out = st.make(c, tag, {}, n.wits);
            }
            break;
        case Rule::BoxR:
            out = st.make(c, tag, {}, n.wits);
            break;
        default: {
            std::vector<Ref> kids;
            for (Ref k : n.kids) kids.push_back(go(k));
            out = st.make(c, tag, kids, {});
        }
        }
        memo[x] = out;
        return out;
    };
    return go(r);
}

}  // namespace tf

namespace {

template <class F>
Proof lift(const Proof& p, F f) {
    Store st;
    Ref r = import_proof(st, p);
    return *export_proof(st, f(st, r));
}

}  // namespace

Proof weaken(const Proof& p, const Multiset& l, const Multiset& r) {
    return lift(p, [&](Store& st, Ref x) { return tf::weaken(st, x, l, r); });
}
Proof contract_left_atom(const Proof& p, Formula a) {
    return lift(p, [&](Store& st, Ref x) { return tf::lctr_atom(st, x, a); });
}
Proof contract_right_atom(const Proof& p, Formula a) {
    return lift(p, [&](Store& st, Ref x) { return tf::rctr_atom(st, x, a); });
}
Proof contract_right_boxp(const Proof& p, Formula chi) {
    return lift(p, [&](Store& st, Ref x) { return tf::rctr_boxp(st, x, chi); });
}
Proof inv_bot(const Proof& p) {
    return lift(p, [&](Store& st, Ref x) { return tf::inv_bot(st, x); });
}
Proof linv0(const Proof& p, Formula imp) {
    return lift(p, [&](Store& st, Ref x) { return tf::linv0(st, x, imp); });
}
Proof linv1(const Proof& p, Formula imp) {
    return lift(p, [&](Store& st, Ref x) { return tf::linv1(st, x, imp); });
}
Proof rinv(const Proof& p, Formula imp) {
    return lift(p, [&](Store& st, Ref x) { return tf::rinv(st, x, imp); });
}
Proof change_annotation(const Proof& p, const Annotation& s) {
    return lift(p, [&](Store& st, Ref x) { return tf::change_annotation(st, x, s); });
}

PreservationProfile preservation(const Proof& in, const Proof& out) {
    PreservationProfile f;
    f.ordinal_height = ordinal_height(out) <= ordinal_height(in);
    f.local_height = local_height(out) <= local_height(in);
    f.cut_sizes = max_cut_size(out) <= max_cut_size(in);
    CutCensus ci = cut_census(in), co = cut_census(out);
    if (ci.main_local_cuts == 0) f.main_local_cut_freeness = co.main_local_cuts == 0;
    auto local = [](CutClass c) { return c == CutClass::CutFree || c == CutClass::LocalOnly; };
    if (local(ci.classification)) f.cut_locality = local(co.classification);
    if (witnesses_local_only(in)) f.witness_cut_locality = witnesses_local_only(out);
    return f;
}

}  // namespace kplus
