#include "kplus/semantics.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"

namespace kplus {

KripkeModel::KripkeModel(int worlds) : n_(worlds), rel_(static_cast<size_t>(worlds) * worlds, false) {
    if (worlds < 1) throw Error("model needs at least one world");
}

size_t KripkeModel::idx(int w, int v) const { return static_cast<size_t>(w) * n_ + v; }

void KripkeModel::check_world(int w) const {
    if (w < 0 || w >= n_) throw Error("unknown world " + std::to_string(w));
}

void KripkeModel::add_edge(int w, int v) {
    check_world(w);
    check_world(v);
    rel_[idx(w, v)] = true;
    plus_.reset();
}

void KripkeModel::set_true(const std::string& atom, int w) {
    check_world(w);
    auto& v = val_[atom];
    v.resize(n_, false);
    v[w] = true;
}

bool KripkeModel::holds(const std::string& atom, int w) const {
    check_world(w);
    auto it = val_.find(atom);
    return it != val_.end() && it->second[w];
}

std::vector<bool> KripkeModel::closure_warshall() const {
    std::vector<bool> c = rel_;
    for (int k = 0; k < n_; ++k)
        for (int i = 0; i < n_; ++i)
            if (c[idx(i, k)])
                for (int j = 0; j < n_; ++j)
                    if (c[idx(k, j)]) c[idx(i, j)] = true;
    return c;
}

std::vector<bool> KripkeModel::closure_squaring() const {
    // C := C ∪ C∘C until stable
    std::vector<bool> c = rel_;
    for (;;) {
        std::vector<bool> next = c;
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k < n_; ++k)
                if (c[idx(i, k)])
                    for (int j = 0; j < n_; ++j)
                        if (c[idx(k, j)]) next[idx(i, j)] = true;
        if (next == c) return c;
        c = std::move(next);
    }
}

bool KripkeModel::rel_plus(int w, int v) const {
    check_world(w);
    check_world(v);
    if (!plus_) plus_ = closure_warshall();
    return (*plus_)[idx(w, v)];
}

std::string KripkeModel::describe() const {
    std::ostringstream os;
    os << "worlds=" << n_ << " R={";
    bool first = true;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (rel(i, j)) {
                os << (first ? "" : ",") << i << "->" << j;
                first = false;
            }
    os << "}";
    for (auto& [a, v] : val_) {
        os << " " << a << "={";
        first = true;
        for (int i = 0; i < n_; ++i)
            if (v[i]) {
                os << (first ? "" : ",") << i;
                first = false;
            }
        os << "}";
    }
    return os.str();
}

bool eval(const KripkeModel& m, int w, Formula f) {
    switch (f.kind()) {
    case Kind::Bot: return false;
    case Kind::Atom: return m.holds(f.name(), w);
    case Kind::Imp: return !eval(m, w, f.lhs()) || eval(m, w, f.rhs());
    case Kind::Box:
        for (int v = 0; v < m.size(); ++v)
            if (m.rel(w, v) && !eval(m, v, f.body())) return false;
        return true;
    case Kind::BoxP:
        for (int v = 0; v < m.size(); ++v)
            if (m.rel_plus(w, v) && !eval(m, v, f.body())) return false;
        return true;
    }
    return false;
}

bool sequent_valid(const KripkeModel& m, const Sequent& s) {
    for (int w = 0; w < m.size(); ++w) {
        bool sat = false;
        for (auto& [f, n] : s.left.entries())
            if (!eval(m, w, f)) {
                sat = true;
                break;
            }
        if (!sat)
            for (auto& [f, n] : s.right.entries())
                if (eval(m, w, f)) {
                    sat = true;
                    break;
                }
        if (!sat) return false;
    }
    return true;
}

KripkeModel random_model(std::mt19937_64& rng, int max_worlds, const std::vector<std::string>& atoms) {
    std::uniform_int_distribution<int> nw(1, std::max(1, max_worlds));
    std::bernoulli_distribution coin(0.5);
    KripkeModel m(nw(rng));
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (coin(rng)) m.add_edge(i, j);
    for (auto& a : atoms)
        for (int i = 0; i < m.size(); ++i)
            if (coin(rng)) m.set_true(a, i);
    return m;
}

std::vector<std::string> atoms_of(const Sequent& s) {
    std::set<std::string> out;
    std::function<void(Formula)> go = [&](Formula f) {
        switch (f.kind()) {
        case Kind::Atom: out.insert(f.name()); break;
        case Kind::Imp: go(f.lhs()); go(f.rhs()); break;
        case Kind::Box:
        case Kind::BoxP: go(f.body()); break;
        default: break;
        }
    };
    for (auto& [f, n] : s.left.entries()) go(f);
    for (auto& [f, n] : s.right.entries()) go(f);
    return {out.begin(), out.end()};
}

std::string FuzzReport::json() const {
    nlohmann::json j{{"models", models}, {"counterexamples", counterexamples}};
    if (first) j["first"] = *first;
    return j.dump();
}

FuzzReport fuzz_sequent(const Sequent& s, int models, int max_worlds, uint64_t seed) {
    FuzzReport r;
    std::mt19937_64 rng(seed);
    auto atoms = atoms_of(s);
    for (int i = 0; i < models; ++i) {
        KripkeModel m = random_model(rng, max_worlds, atoms);
        ++r.models;
        if (!sequent_valid(m, s)) {
            ++r.counterexamples;
            if (!r.first) r.first = m.describe();
        }
    }
    return r;
}

FuzzReport fuzz_soundness(const Proof& p, int models, int max_worlds, uint64_t seed) {
    return fuzz_sequent(p.conclusion(), models, max_worlds, seed);
}

}  // namespace kplus
