#include "kplus/generator.hpp"

#include <algorithm>
#include <unordered_map>

#include "kplus/hilbert.hpp"

namespace kplus {

// --- fixtures

namespace {

Formula pp() {
    Formula p = Formula::atom("p");
    return Formula::imp(p, p);
}

Ref taut(Store& st) {
    Formula p = Formula::atom("p");
    return st.impr(pp(), st.ax(Sequent{Multiset{p}, Annotation::unfocused(), Multiset{p}}));
}

Ref cyc(Store& st) {
    Ref x = st.reserve();
    st.define_as(x, st.boxpf(pp(), ModalSplit{}, taut(st), x));
    return x;
}

ProofNode& node(Proof& p, NodeId id) { return p.nodes.at(id); }

Proof with_witness(const Proof& p, WitnessId w, const Proof& q) {
    Proof out = p;
    out.witness_table[w] = std::make_shared<Proof>(q);
    return out;
}

}  // namespace

Proof p_taut() {
    Store st;
    return *export_proof(st, taut(st));
}

Proof p_cyc() {
    Store st;
    return *export_proof(st, cyc(st));
}

Proof p_cyc_o() {
    Store st;
    return *export_proof(st, necessitation(st, taut(st)));
}

std::vector<Mutant> mutants() {
    const Annotation circ = Annotation::unfocused();
    const Formula p = Formula::atom("p"), q = Formula::atom("q");
    const Annotation fpp = Annotation::focus(pp());
    std::vector<Mutant> out;

    {
        Proof m = p_taut();
        for (auto& [id, n] : m.nodes) n.seq.ann = Annotation::focus(p);
        out.push_back({"focus-not-on-right", m, Annotation::focus(p), CutMode::NoCut, "focus-membership"});
    }
    {
        Proof m = p_cyc();
        for (auto& [id, n] : m.nodes)
            if (n.backedge) n.target = id;
        out.push_back({"backedge-onto-itself", m, fpp, CutMode::NoCut, "backedge-target"});
    }
    {
        // ⇒ p→p whose premise loops back to the root through impr only
        Proof m = p_taut();
        ProofNode& leaf = node(m, node(m, m.root).children.at(0));
        leaf.backedge = true;
        leaf.target = m.root;
        leaf.tag = RuleTag{};
        out.push_back({"cycle-without-progress", m, circ, CutMode::NoCut, "cycle-without-progress"});
    }
    {
        Proof m = p_taut();
        NodeId kid = node(m, m.root).children.at(0);
        node(m, m.root).children.clear();
        m.nodes.erase(kid);
        out.push_back({"impr-without-premise", m, circ, CutMode::NoCut, "arity"});
    }
    {
        Proof m = p_taut();
        NodeId leaf = node(m, m.root).children.at(0);
        ProofNode extra;
        extra.id = 100;
        extra.seq = node(m, leaf).seq;
        extra.tag = node(m, leaf).tag;
        m.nodes[100] = extra;
        node(m, leaf).children.push_back(100);
        out.push_back({"ax-with-premise", m, circ, CutMode::NoCut, "arity"});
    }
    {
        Proof m = p_cyc_o();
        node(m, m.root).witnesses.pop_back();
        out.push_back({"boxpu-one-witness", m, circ, CutMode::NoCut, "arity"});
    }
    {
        Proof m = p_cyc_o();
        auto& w = node(m, m.root).witnesses;
        std::swap(w[0], w[1]);
        out.push_back({"boxpu-witnesses-swapped", m, circ, CutMode::NoCut, "witness-sequent"});
    }
    {
        Proof m = p_cyc();
        for (auto& [id, n] : m.nodes) n.seq.ann = circ;
        out.push_back({"boxpf-without-focus", m, circ, CutMode::NoCut, "side-condition"});
    }
    {
        Proof m;
        ProofNode n;
        n.id = 0;
        n.seq = Sequent{Multiset{q}, circ, Multiset{p}};
        n.tag = RuleTag{Rule::Ax, Formula(), {}};
        m.nodes[0] = n;
        out.push_back({"ax-without-shared-atom", m, circ, CutMode::NoCut, "rule-schema"});
    }
    {
        Store st;
        Proof m = *export_proof(st, identity(st, pp(), {}, circ, {}));
        for (auto& [id, n] : m.nodes)
            if (n.tag.rule == Rule::ImpL) {
                node(m, n.children.at(1)).seq.right.add(q);
                break;
            }
        out.push_back({"impl-wrong-premise", m, circ, CutMode::NoCut, "rule-schema"});
    }
    {
        Store st;
        Ref l = st.ax(Sequent{Multiset{p}, circ, Multiset{p, p}});
        Ref r = st.ax(Sequent{Multiset{p, p}, circ, Multiset{p}});
        Proof m = *export_proof(st, st.cut(p, l, r));
        out.push_back({"cut-under-nocut", m, circ, CutMode::NoCut, "cut-mode"});
    }
    {
        Proof m = p_cyc_o();
        node(m, m.root).witnesses[1] = 99;
        out.push_back({"witness-undefined", m, circ, CutMode::NoCut, "witness-missing"});
    }
    {
        Proof m = p_cyc();
        node(m, m.root).tag.split.sigma.add(q);
        out.push_back({"split-mismatch", m, fpp, CutMode::NoCut, "rule-schema"});
    }
    {
        // witness 0 of the boxpu proves its sequent under the wrong annotation
        Proof m = p_cyc_o();
        Proof w = m.witness(node(m, m.root).witnesses[0]);
        for (auto& [id, n] : w.nodes) n.seq.ann = Annotation::focus(pp());
        out.push_back({"witness-annotation", with_witness(m, node(m, m.root).witnesses[0], w), circ,
                       CutMode::NoCut, "witness-sequent"});
    }
    return out;
}

// --- prover

namespace {

struct SeqHash {
    size_t operator()(const Sequent& s) const { return s.hash(); }
};

bool shared_atom(const Sequent& s) {
    for (auto& [f, n] : s.left.entries())
        if (f.is_atom() && s.right.contains(f)) return true;
    return false;
}

struct Search {
    Store& st;
    const ProverConfig& cfg;
    std::mt19937_64* rng;
    size_t steps = 0;
    int cuts = 0;
    bool in_witness = false;

    struct Frame {
        Sequent seq;
        Ref ph;
        bool used = false;
        bool progress = false;  // the edge toward the next frame is a boxpf premise
    };
    std::vector<Frame> path;
    std::unordered_map<Sequent, std::optional<Ref>, SeqHash> wcache;

    bool coin(double pr) { return rng && pr > 0 && std::bernoulli_distribution(pr)(*rng); }

    template <class T>
    void shuffle(std::vector<T>& v) {
        if (rng) std::shuffle(v.begin(), v.end(), *rng);
    }

    std::optional<Ref> witness(const Sequent& s, int depth) {
        auto it = wcache.find(s);
        if (it != wcache.end()) return it->second;
        auto saved = std::move(path);
        path.clear();
        bool was = in_witness;
        in_witness = true;
        auto r = go(s, depth);
        in_witness = was;
        path = std::move(saved);
        wcache[s] = r;
        return r;
    }

    std::optional<Ref> go(const Sequent& s, int depth) {
        if (++steps > cfg.max_steps || depth > cfg.max_depth) return std::nullopt;
        if (s.left.contains(Formula::bot())) return st.axbot(s);
        if (shared_atom(s)) return st.ax(s);
        for (size_t j = path.size(); j-- > 0;) {
            if (path[j].seq != s) continue;
            bool progress = false;
            for (size_t k = j; k < path.size(); ++k) progress |= path[k].progress;
            if (!progress) return std::nullopt;
            path[j].used = true;
            return path[j].ph;
        }
        path.push_back(Frame{s, st.reserve()});
        auto r = expand(s, depth);
        Frame f = path.back();
        path.pop_back();
        if (!r) return std::nullopt;
        if (!f.used) return r;
        st.define_as(f.ph, *r);
        return f.ph;
    }

    std::optional<Ref> expand(const Sequent& s, int depth) {
        if (cuts < cfg.max_cuts && (!in_witness || cfg.cuts_in_witnesses) && coin(cfg.cut_rate)) {
            std::vector<Formula> atoms;
            for (auto* side : {&s.left, &s.right})
                for (auto& [f, n] : side->entries())
                    if (f.is_atom()) atoms.push_back(f);
            if (atoms.empty()) atoms.push_back(Formula::atom("p"));
            Formula chi = random_formula(*rng, cfg.cut_formula_size, atoms);
            ++cuts;
            auto l = go(Sequent{s.left, s.ann, s.right.with(chi)}, depth + 1);
            if (l) {
                auto r = go(Sequent{s.left.with(chi), s.ann, s.right}, depth + 1);
                if (r) return st.make(s, RuleTag{Rule::Cut, chi, {}}, {*l, *r});
            }
        }
        std::vector<Formula> rimp, limp, modal;
        for (auto& [f, n] : s.right.entries()) {
            if (f.is_imp()) rimp.push_back(f);
            if (f.is_box() || f.is_boxp()) modal.push_back(f);
        }
        for (auto& [f, n] : s.left.entries())
            if (f.is_imp()) limp.push_back(f);
        shuffle(rimp);
        shuffle(limp);
        if (!rimp.empty() && (limp.empty() || !coin(0.5))) {
            Formula f = rimp[0];
            auto k = go(Sequent{s.left.with(f.lhs()), s.ann, s.right.without(f).with(f.rhs())}, depth + 1);
            if (!k) return std::nullopt;
            return st.make(s, RuleTag{Rule::ImpR, f, {}}, {*k});
        }
        if (!limp.empty()) {
            Formula f = limp[0];
            Multiset g = s.left.without(f);
            auto k0 = go(Sequent{g, s.ann, s.right.with(f.lhs())}, depth + 1);
            if (!k0) return std::nullopt;
            auto k1 = go(Sequent{g.with(f.rhs()), s.ann, s.right}, depth + 1);
            if (!k1) return std::nullopt;
            return st.make(s, RuleTag{Rule::ImpL, f, {}}, {*k0, *k1});
        }
        // focused formula first when not randomized
        std::stable_sort(modal.begin(), modal.end(), [&](Formula a, Formula b) {
            return (a.is_boxp() && s.ann.is_focus_on(a.body())) > (b.is_boxp() && s.ann.is_focus_on(b.body()));
        });
        shuffle(modal);
        for (Formula f : modal) {
            bool partial = coin(cfg.partial_split);
            for (int attempt = 0; attempt < (partial ? 2 : 1); ++attempt) {
                ModalSplit sp = split_for(s, f, partial && attempt == 0);
                if (auto r = modal_rule(s, f, sp, depth)) return r;
            }
        }
        return std::nullopt;
    }

    ModalSplit split_for(const Sequent& s, Formula f, bool partial) {
        ModalSplit sp;
        for (auto& [g, n] : s.left.entries())
            for (int i = 0; i < n; ++i) {
                bool keep = (g.is_box() || g.is_boxp()) && !(partial && coin(0.4));
                if (!keep)
                    sp.sigma.add(g);
                else if (g.is_box())
                    sp.gamma.add(g.body());
                else
                    sp.pi.add(g.body());
            }
        sp.delta_wk = s.right.without(f);
        return sp;
    }

    std::optional<Ref> modal_rule(const Sequent& s, Formula f, const ModalSplit& sp, int depth) {
        Formula phi = f.body();
        Multiset prem = sp.premise();
        auto w0 = witness(Sequent{prem, Annotation::unfocused(), Multiset{phi}}, depth + 1);
        if (!w0) return std::nullopt;
        if (f.is_box()) return st.boxr(phi, sp, s.ann, *w0);
        Sequent second{prem, Annotation::focus(phi), Multiset{f}};
        if (s.ann.is_focus_on(phi)) {
            path.back().progress = true;
            auto c = go(second, depth + 1);
            path.back().progress = false;
            if (!c) return std::nullopt;
            return st.boxpf(phi, sp, *w0, *c);
        }
        auto w1 = witness(second, depth + 1);
        if (!w1) return std::nullopt;
        return st.boxpu(phi, sp, s.ann, *w0, *w1);
    }
};

}  // namespace

std::optional<Ref> prove(Store& st, const Sequent& s, const ProverConfig& cfg, std::mt19937_64* rng) {
    if (!s.focus_ok()) return std::nullopt;
    Search search{st, cfg, rng, 0, 0, false, {}, {}};
    return search.go(s, 0);
}

// --- random objects

namespace {

Formula gen(std::mt19937_64& rng, int size, const std::vector<Formula>& atoms) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    if (size <= 1) return pick(8) == 0 ? Formula::bot() : atoms[pick(static_cast<int>(atoms.size()))];
    int c = pick(4);
    if (size == 2 || c >= 2) {
        Formula b = gen(rng, size - 1, atoms);
        return c % 2 ? Formula::box(b) : Formula::boxp(b);
    }
    int a = 1 + pick(size - 2);
    return Formula::imp(gen(rng, a, atoms), gen(rng, size - 1 - a, atoms));
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, int max_size, const std::vector<Formula>& atoms) {
    int size = std::uniform_int_distribution<int>(1, std::max(1, max_size))(rng);
    return gen(rng, size, atoms);
}

Formula random_formula_of(std::mt19937_64& rng, Kind shape, int max_size, const std::vector<Formula>& atoms) {
    auto between = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, std::max(lo, hi))(rng); };
    switch (shape) {
    case Kind::Bot: return Formula::bot();
    case Kind::Atom: return atoms[between(0, static_cast<int>(atoms.size()) - 1)];
    case Kind::Box: return Formula::box(gen(rng, between(1, max_size - 1), atoms));
    case Kind::BoxP: return Formula::boxp(gen(rng, between(1, max_size - 1), atoms));
    case Kind::Imp: {
        int size = between(3, max_size);
        int a = between(1, size - 2);
        return Formula::imp(gen(rng, a, atoms), gen(rng, size - 1 - a, atoms));
    }
    }
    return Formula::bot();
}

Sequent random_sequent(std::mt19937_64& rng, int max_formulas, int max_size, const std::vector<Formula>& atoms,
                       bool focused) {
    auto count = [&](int lo) { return std::uniform_int_distribution<int>(lo, std::max(lo, max_formulas))(rng); };
    Sequent s;
    for (int i = count(0); i > 0; --i) s.left.add(random_formula(rng, max_size, atoms));
    for (int i = count(1); i > 0; --i) s.right.add(random_formula(rng, max_size, atoms));
    if (focused && std::bernoulli_distribution(0.5)(rng)) {
        std::vector<Formula> cands;
        for (auto& [f, n] : s.right.entries())
            if (f.is_boxp()) cands.push_back(f);
        if (cands.empty()) {
            Formula f = Formula::boxp(random_formula(rng, std::max(1, max_size - 1), atoms));
            s.right.add(f);
            cands.push_back(f);
        }
        s.ann = Annotation::focus(cands[std::uniform_int_distribution<size_t>(0, cands.size() - 1)(rng)].body());
    }
    return s;
}

std::optional<Ref> random_proof(Store& st, std::mt19937_64& rng, const GenOptions& opts) {
    for (int i = 0; i < opts.attempts; ++i) {
        Sequent s = random_sequent(rng, opts.max_formulas, opts.max_size, opts.atoms, opts.focused);
        auto r = prove(st, s, opts.prover, &rng);
        if (!r) continue;
        if (opts.min_nodes > 1 && count_nodes(*export_proof(st, *r)) < opts.min_nodes) continue;
        return r;
    }
    return std::nullopt;
}

std::optional<Proof> random_proof(std::mt19937_64& rng, const GenOptions& opts) {
    Store st;
    auto r = random_proof(st, rng, opts);
    if (!r) return std::nullopt;
    return *export_proof(st, *r);
}

}  // namespace kplus
