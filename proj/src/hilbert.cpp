#include "kplus/hilbert.hpp"

#include <map>
#include <sstream>

#include "kplus/sexpr.hpp"
#include "kplus/transforms.hpp"

namespace kplus {

namespace {

Formula imp(Formula a, Formula b) { return Formula::imp(a, b); }
Formula box(Formula a) { return Formula::box(a); }
Formula boxp(Formula a) { return Formula::boxp(a); }

const Annotation kCirc = Annotation::unfocused();

// A, ◻⁺A ⇒_A ◻⁺A, closed by a back-edge onto itself
Ref focused_loop(Store& st, Formula a) {
    Ref x = st.reserve();
    ModalSplit sp{Multiset{a}, {}, Multiset{a}, {}};
    Ref w = identity(st, a, Multiset{boxp(a)}, kCirc, {});
    st.define_as(x, st.boxpf(a, sp, w, x));
    return x;
}

}  // namespace

Formula axiom_formula(int i, const Instantiation& in) {
    Formula p = in.phi, q = in.psi, r = in.chi;
    switch (i) {
    case 1: return imp(p, imp(q, p));
    case 2: return imp(imp(p, imp(q, r)), imp(imp(p, q), imp(p, r)));
    case 3: return imp(imp(imp(p, Formula::bot()), Formula::bot()), p);
    case 4: return imp(box(imp(p, q)), imp(box(p), box(q)));
    case 5: return imp(boxp(imp(p, q)), imp(boxp(p), boxp(q)));
    case 6: return imp(boxp(p), box(p));
    case 7: return imp(boxp(p), box(boxp(p)));
    case 8: return imp(box(p), imp(boxp(imp(p, box(p))), boxp(p)));
    }
    throw Error("no axiom " + std::to_string(i));
}

Ref identity(Store& st, Formula f, const Multiset& left, const Annotation& s, const Multiset& right) {
    Sequent c{left.with(f), s, right.with(f)};
    switch (f.kind()) {
    case Kind::Atom:
        return st.ax(c);
    case Kind::Bot:
        return st.axbot(c);
    case Kind::Imp: {
        Formula a = f.lhs(), b = f.rhs();
        Ref k0 = identity(st, a, left, s, right.with(b));
        Ref k1 = identity(st, b, left.with(a), s, right);
        return st.impr(f, st.impl(f, k0, k1));
    }
    case Kind::Box: {
        Formula a = f.body();
        ModalSplit sp{left, Multiset{a}, {}, right};
        return st.boxr(a, sp, s, identity(st, a, {}, kCirc, {}));
    }
    case Kind::BoxP: {
        Formula a = f.body();
        ModalSplit sp{left, {}, Multiset{a}, right};
        Ref w0 = identity(st, a, Multiset{f}, kCirc, {});
        if (s.is_focus_on(a)) return st.boxpf(a, sp, w0, focused_loop(st, a));
        return st.boxpu(a, sp, s, w0, focused_loop(st, a));
    }
    }
    throw Error("identity: unknown formula kind");
}

Ref axiom_proof(Store& st, int i, const Instantiation& in) {
    Formula p = in.phi, q = in.psi, r = in.chi;
    Formula ax = axiom_formula(i, in);
    Ref body;
    switch (i) {
    case 1:
        return st.impr(ax, st.impr(imp(q, p), identity(st, p, Multiset{q}, kCirc, {})));
    case 2: {
        Formula pqr = imp(p, imp(q, r)), pq = imp(p, q);
        // ψ→χ, ψ, φ ⇒ χ
        Ref qr = st.impl(imp(q, r), identity(st, q, Multiset{p}, kCirc, Multiset{r}),
                         identity(st, r, Multiset{q, p}, kCirc, {}));
        // ψ, φ→(ψ→χ), φ ⇒ χ
        Ref inner = st.impl(pqr, identity(st, p, Multiset{q}, kCirc, Multiset{r}), qr);
        // φ→(ψ→χ), φ→ψ, φ ⇒ χ
        body = st.impl(pq, identity(st, p, Multiset{pqr}, kCirc, Multiset{r}), inner);
        return st.impr(ax, st.impr(ax.rhs(), st.impr(imp(p, r), body)));
    }
    case 3: {
        Formula nb = imp(p, Formula::bot());
        Ref left = st.impr(nb, identity(st, p, {}, kCirc, Multiset{Formula::bot()}));
        Ref right = st.axbot(Sequent{Multiset{Formula::bot()}, kCirc, Multiset{p}});
        return st.impr(ax, st.impl(ax.lhs(), left, right));
    }
    case 4: {
        Ref w = st.impl(imp(p, q), identity(st, p, {}, kCirc, Multiset{q}), identity(st, q, Multiset{p}, kCirc, {}));
        ModalSplit sp{{}, Multiset{imp(p, q), p}, {}, {}};
        return st.impr(ax, st.impr(ax.rhs(), st.boxr(q, sp, kCirc, w)));
    }
    case 5: {
        Formula pq = imp(p, q);
        Ref mp = st.impl(pq, identity(st, p, {}, kCirc, Multiset{q}), identity(st, q, Multiset{p}, kCirc, {}));
        Ref w0 = tf::weaken(st, mp, Multiset{boxp(pq), boxp(p)}, {});
        Ref loop = st.reserve();
        st.define_as(loop, st.boxpf(q, ModalSplit{Multiset{pq, p}, {}, Multiset{pq, p}, {}}, w0, loop));
        Ref top = st.boxpu(q, ModalSplit{{}, {}, Multiset{pq, p}, {}}, kCirc, w0, loop);
        return st.impr(ax, st.impr(ax.rhs(), top));
    }
    case 6: {
        Ref w = identity(st, p, Multiset{boxp(p)}, kCirc, {});
        return st.impr(ax, st.boxr(p, ModalSplit{{}, {}, Multiset{p}, {}}, kCirc, w));
    }
    case 7: {
        Ref w = identity(st, boxp(p), Multiset{p}, kCirc, {});
        return st.impr(ax, st.boxr(boxp(p), ModalSplit{{}, {}, Multiset{p}, {}}, kCirc, w));
    }
    case 8: {
        Formula step = imp(p, box(p));
        Ref w0 = identity(st, p, Multiset{step, boxp(step)}, kCirc, {});
        Ref w1 = st.reserve();
        Annotation fp = Annotation::focus(p);
        Ref again = st.boxpf(p, ModalSplit{Multiset{p}, Multiset{p}, Multiset{step}, {}}, w0, w1);
        Ref here = identity(st, p, Multiset{boxp(step)}, fp, Multiset{boxp(p)});
        st.define_as(w1, st.impl(step, here, again));
        Ref top = st.boxpu(p, ModalSplit{{}, Multiset{p}, Multiset{step}, {}}, kCirc, w0, w1);
        return st.impr(ax, st.impr(ax.rhs(), top));
    }
    }
    throw Error("no axiom " + std::to_string(i));
}

Proof axiom_proof(int i, const Instantiation& in) {
    Store st;
    return *export_proof(st, axiom_proof(st, i, in));
}

Ref modus_ponens(Store& st, Ref a, Ref ab) {
    const Sequent& sab = st.seq(ab);
    if (!sab.left.empty() || sab.right.total() != 1 || !sab.right.entries()[0].first.is_imp())
        throw Error("modus_ponens: second premise does not conclude an implication");
    Formula f = sab.right.entries()[0].first;
    if (st.seq(a).right != Multiset{f.lhs()}) throw Error("modus_ponens: antecedent mismatch");
    Ref left = tf::weaken(st, a, {}, Multiset{f.rhs()});  // ⇒ A, B
    Ref right = tf::rinv(st, ab, f);                        // A ⇒ B
    return st.cut(f.lhs(), left, right);
}

Ref necessitation(Store& st, Ref a) {
    const Sequent& s = st.seq(a);
    if (!s.left.empty() || s.right.total() != 1) throw Error("necessitation: premise is not ⇒ A");
    Formula f = s.right.entries()[0].first;
    Ref loop = st.reserve();
    st.define_as(loop, st.boxpf(f, ModalSplit{}, a, loop));
    return st.boxpu(f, ModalSplit{}, kCirc, a, loop);
}

// --- Hilbert proofs

const HilbertLine& HilbertProof::line(int number) const {
    for (auto& l : lines)
        if (l.number == number) return l;
    throw Error("no line " + std::to_string(number));
}

void validate(const HilbertProof& h) {
    if (h.lines.empty()) throw Error("hilbert: empty proof");
    std::map<int, Formula> seen;
    for (auto& l : h.lines) {
        if (seen.count(l.number)) throw Error("hilbert: duplicate line " + std::to_string(l.number));
        auto ref = [&](int n) {
            auto it = seen.find(n);
            if (it == seen.end())
                throw Error("hilbert: line " + std::to_string(l.number) + " cites line " + std::to_string(n) +
                            " which does not precede it");
            return it->second;
        };
        switch (l.just) {
        case HilbertLine::Just::Axiom:
            if (axiom_formula(l.axiom, l.inst) != l.formula)
                throw Error("hilbert: line " + std::to_string(l.number) + " is not an instance of axiom " +
                            std::to_string(l.axiom));
            break;
        case HilbertLine::Just::MP:
            if (ref(l.b) != Formula::imp(ref(l.a), l.formula))
                throw Error("hilbert: line " + std::to_string(l.number) + " is not a modus ponens");
            break;
        case HilbertLine::Just::Nec:
            if (Formula::boxp(ref(l.a)) != l.formula)
                throw Error("hilbert: line " + std::to_string(l.number) + " is not a necessitation");
            break;
        }
        seen[l.number] = l.formula;
    }
}

namespace {

int line_number(const Sexp& s) {
    if (s.is_list || s.atom.empty() || s.atom.find_first_not_of("0123456789") != std::string::npos)
        sexp_fail(s, "expected line number");
    return std::stoi(s.atom);
}

}  // namespace

HilbertProof parse_hilbert(std::string_view text) {
    Sexp top = read_sexp(text);
    if (!top.headed("hilbert")) sexp_fail(top, "expected (hilbert ...)");
    HilbertProof h;
    for (size_t i = 1; i < top.items.size(); ++i) {
        const Sexp& l = top.items[i];
        if (!l.headed("line") || l.items.size() != 4) sexp_fail(l, "expected (line N F JUST)");
        HilbertLine line;
        line.number = line_number(l.items[1]);
        line.formula = formula_from_sexp(l.items[2]);
        const Sexp& j = l.items[3];
        if (j.headed("axiom")) {
            if (j.items.size() < 2) sexp_fail(j, "axiom needs an index");
            line.just = HilbertLine::Just::Axiom;
            line.axiom = line_number(j.items[1]);
            if (line.axiom < 1 || line.axiom > 8) sexp_fail(j.items[1], "axiom index must be 1..8");
            for (size_t k = 2; k < j.items.size(); ++k) {
                const Sexp& b = j.items[k];
                if (!b.is_list || b.items.size() != 2) sexp_fail(b, "expected (phi F)");
                Formula f = formula_from_sexp(b.items[1]);
                if (b.headed("phi"))
                    line.inst.phi = f;
                else if (b.headed("psi"))
                    line.inst.psi = f;
                else if (b.headed("chi"))
                    line.inst.chi = f;
                else
                    sexp_fail(b, "unknown schematic variable");
            }
        } else if (j.headed("mp") && j.items.size() == 3) {
            line.just = HilbertLine::Just::MP;
            line.a = line_number(j.items[1]);
            line.b = line_number(j.items[2]);
        } else if (j.headed("nec") && j.items.size() == 2) {
            line.just = HilbertLine::Just::Nec;
            line.a = line_number(j.items[1]);
        } else {
            sexp_fail(j, "malformed justification");
        }
        h.lines.push_back(line);
    }
    validate(h);
    return h;
}

std::string print_hilbert(const HilbertProof& h) {
    std::ostringstream os;
    os << "(hilbert";
    for (auto& l : h.lines) {
        os << "\n  (line " << l.number << " " << print_formula(l.formula) << " ";
        switch (l.just) {
        case HilbertLine::Just::Axiom:
            os << "(axiom " << l.axiom << " (phi " << print_formula(l.inst.phi) << ") (psi "
               << print_formula(l.inst.psi) << ") (chi " << print_formula(l.inst.chi) << "))";
            break;
        case HilbertLine::Just::MP: os << "(mp " << l.a << " " << l.b << ")"; break;
        case HilbertLine::Just::Nec: os << "(nec " << l.a << ")"; break;
        }
        os << ")";
    }
    os << ")\n";
    return os.str();
}

Ref embed(Store& st, const HilbertProof& h) {
    validate(h);
    std::map<int, Ref> done;
    for (auto& l : h.lines) {
        switch (l.just) {
        case HilbertLine::Just::Axiom: done[l.number] = axiom_proof(st, l.axiom, l.inst); break;
        case HilbertLine::Just::MP: done[l.number] = modus_ponens(st, done.at(l.a), done.at(l.b)); break;
        case HilbertLine::Just::Nec: done[l.number] = necessitation(st, done.at(l.a)); break;
        }
    }
    return done.at(h.lines.back().number);
}

Proof embed(const HilbertProof& h) {
    Store st;
    return *export_proof(st, embed(st, h));
}

// --- builder

int HilbertBuilder::axiom(int i, const Instantiation& in) {
    HilbertLine l;
    l.number = static_cast<int>(h_.lines.size()) + 1;
    l.formula = axiom_formula(i, in);
    l.axiom = i;
    l.inst = in;
    h_.lines.push_back(l);
    return l.number;
}

int HilbertBuilder::mp(int a, int ab) {
    Formula fab = f(ab);
    if (!fab.is_imp() || fab.lhs() != f(a)) throw Error("builder: modus ponens does not apply");
    HilbertLine l;
    l.number = static_cast<int>(h_.lines.size()) + 1;
    l.formula = fab.rhs();
    l.just = HilbertLine::Just::MP;
    l.a = a;
    l.b = ab;
    h_.lines.push_back(l);
    return l.number;
}

int HilbertBuilder::nec(int a) {
    HilbertLine l;
    l.number = static_cast<int>(h_.lines.size()) + 1;
    l.formula = Formula::boxp(f(a));
    l.just = HilbertLine::Just::Nec;
    l.a = a;
    h_.lines.push_back(l);
    return l.number;
}

int HilbertBuilder::identity(Formula phi) {
    Formula pp = imp(phi, phi);
    int l1 = axiom(1, {phi, pp, phi});
    int l2 = axiom(2, {phi, pp, phi});
    int l3 = mp(l1, l2);
    int l4 = axiom(1, {phi, phi, phi});
    return mp(l4, l3);
}

int HilbertBuilder::weaken(int a, Formula psi) {
    int ax = axiom(1, {f(a), psi, psi});
    return mp(a, ax);
}

std::vector<HilbertProof> composed_theorems() {
    Formula p = Formula::atom("p"), q = Formula::atom("q");
    std::vector<HilbertProof> out;
    auto add = [&](auto build) {
        HilbertBuilder b;
        build(b);
        out.push_back(b.done());
    };
    std::vector<Formula> bases{p, q, box(p), boxp(p)};
    for (Formula f : bases) add([&](HilbertBuilder& b) { b.identity(f); });
    for (Formula f : bases) add([&](HilbertBuilder& b) { b.nec(b.identity(f)); });
    for (Formula f : bases) add([&](HilbertBuilder& b) { b.weaken(b.identity(p), f); });
    // ◻⁺(φ→φ) with axiom 5: ◻⁺φ → ◻⁺φ
    for (Formula f : {p, q}) {
        add([&](HilbertBuilder& b) {
            int n = b.nec(b.identity(f));
            b.mp(n, b.axiom(5, {f, f, f}));
        });
    }
    // axiom 6: ◻(φ→φ)
    for (Formula f : {p, q}) {
        add([&](HilbertBuilder& b) {
            int n = b.nec(b.identity(f));
            b.mp(n, b.axiom(6, {imp(f, f), f, f}));
        });
    }
    // axiom 7: ◻◻⁺(φ→φ)
    for (Formula f : {p, q}) {
        add([&](HilbertBuilder& b) {
            int n = b.nec(b.identity(f));
            b.mp(n, b.axiom(7, {imp(f, f), f, f}));
        });
    }
    // axiom 8 chain down to ◻⁺((φ→φ)→◻(φ→φ)) → ◻⁺(φ→φ)
    add([&](HilbertBuilder& b) {
        Formula pp = imp(p, p);
        int n = b.nec(b.identity(p));
        int bx = b.mp(n, b.axiom(6, {pp, p, p}));
        b.mp(bx, b.axiom(8, {pp, p, p}));
    });
    // axiom 4 after axiom 6: ◻p → ◻p
    add([&](HilbertBuilder& b) {
        Formula pp = imp(p, p);
        int n = b.nec(b.identity(p));
        int bx = b.mp(n, b.axiom(6, {pp, p, p}));
        b.mp(bx, b.axiom(4, {p, p, p}));
    });
    return out;
}

}  // namespace kplus
