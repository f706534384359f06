#include "kplus/syntax.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <unordered_set>

#include "kplus/sexpr.hpp"

namespace kplus {

struct FormulaNode {
    Kind kind;
    std::string name;
    const FormulaNode* a;
    const FormulaNode* b;
    int size;
    size_t hash;
};

namespace {

struct NodeHash {
    size_t operator()(const FormulaNode* n) const { return n->hash; }
};
struct NodeEq {
    bool operator()(const FormulaNode* x, const FormulaNode* y) const {
        return x->kind == y->kind && x->a == y->a && x->b == y->b && x->name == y->name;
    }
};

class Interner {
public:
    const FormulaNode* intern(Kind k, std::string name, const FormulaNode* a, const FormulaNode* b) {
        size_t h = std::hash<int>()(static_cast<int>(k));
        h = hash_mix(h, std::hash<std::string>()(name));
        if (a) h = hash_mix(h, a->hash);
        if (b) h = hash_mix(h, b->hash);
        int sz = 1 + (a ? a->size : 0) + (b ? b->size : 0);
        FormulaNode probe{k, std::move(name), a, b, sz, h};
        std::lock_guard<std::mutex> lock(mu_);
        auto it = table_.find(&probe);
        if (it != table_.end()) return *it;
        pool_.push_back(std::make_unique<FormulaNode>(std::move(probe)));
        const FormulaNode* n = pool_.back().get();
        table_.insert(n);
        return n;
    }

private:
    std::mutex mu_;
    std::vector<std::unique_ptr<FormulaNode>> pool_;
    std::unordered_set<const FormulaNode*, NodeHash, NodeEq> table_;
};

Interner& interner() {
    static Interner* in = new Interner;
    return *in;
}

bool valid_atom_name(std::string_view s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

}  // namespace

Formula::Formula() : n_(bot().n_) {}
Formula Formula::bot() {
    static const FormulaNode* n = interner().intern(Kind::Bot, "", nullptr, nullptr);
    return Formula(n);
}
Formula Formula::atom(std::string_view name) {
    if (!valid_atom_name(name) || name == "bot" || name == "o")
        throw Error("invalid atom name '" + std::string(name) + "'");
    return Formula(interner().intern(Kind::Atom, std::string(name), nullptr, nullptr));
}
Formula Formula::imp(Formula a, Formula b) {
    return Formula(interner().intern(Kind::Imp, "", a.n_, b.n_));
}
Formula Formula::box(Formula a) { return Formula(interner().intern(Kind::Box, "", a.n_, nullptr)); }
Formula Formula::boxp(Formula a) { return Formula(interner().intern(Kind::BoxP, "", a.n_, nullptr)); }

Kind Formula::kind() const { return n_->kind; }
const std::string& Formula::name() const { return n_->name; }
Formula Formula::lhs() const { return Formula(n_->a); }
Formula Formula::rhs() const { return Formula(n_->b); }
Formula Formula::body() const { return Formula(n_->a); }
int Formula::size() const { return n_->size; }
size_t Formula::hash() const { return n_->hash; }

int compare(Formula a, Formula b) {
    if (a == b) return 0;
    if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
    switch (a.kind()) {
    case Kind::Bot:
        return 0;
    case Kind::Atom:
        return a.name() < b.name() ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Imp: {
        int c = compare(a.lhs(), b.lhs());
        return c ? c : compare(a.rhs(), b.rhs());
    }
    default:
        return compare(a.body(), b.body());
    }
}

// --- multisets

Multiset::Multiset(std::initializer_list<Formula> fs) {
    for (Formula f : fs) add(f);
}

Multiset Multiset::of(const std::vector<Formula>& fs) {
    Multiset m;
    for (Formula f : fs) m.add(f);
    return m;
}

int Multiset::count(Formula f) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), f,
                               [](const Entry& e, Formula x) { return compare(e.first, x) < 0; });
    return (it != items_.end() && it->first == f) ? it->second : 0;
}

int Multiset::total() const {
    int n = 0;
    for (auto& e : items_) n += e.second;
    return n;
}

void Multiset::add(Formula f, int n) {
    if (n <= 0) return;
    auto it = std::lower_bound(items_.begin(), items_.end(), f,
                               [](const Entry& e, Formula x) { return compare(e.first, x) < 0; });
    if (it != items_.end() && it->first == f)
        it->second += n;
    else
        items_.insert(it, {f, n});
}

void Multiset::remove(Formula f, int n) {
    auto it = std::lower_bound(items_.begin(), items_.end(), f,
                               [](const Entry& e, Formula x) { return compare(e.first, x) < 0; });
    if (it == items_.end() || it->first != f || it->second < n)
        throw Error("multiset: cannot remove " + print_formula(f));
    it->second -= n;
    if (it->second == 0) items_.erase(it);
}

Multiset Multiset::operator+(const Multiset& o) const {
    Multiset r = *this;
    for (auto& [f, n] : o.items_) r.add(f, n);
    return r;
}

Multiset Multiset::operator-(const Multiset& o) const {
    Multiset r = *this;
    for (auto& [f, n] : o.items_) r.remove(f, n);
    return r;
}

Multiset Multiset::with(Formula f) const {
    Multiset r = *this;
    r.add(f);
    return r;
}

Multiset Multiset::without(Formula f) const {
    Multiset r = *this;
    r.remove(f);
    return r;
}

bool Multiset::includes(const Multiset& o) const {
    for (auto& [f, n] : o.items_)
        if (count(f) < n) return false;
    return true;
}

Multiset Multiset::max_union(const Multiset& o) const {
    Multiset r = *this;
    for (auto& [f, n] : o.items_) {
        int c = count(f);
        if (n > c) r.add(f, n - c);
    }
    return r;
}

Multiset Multiset::excess(const Multiset& o) const {
    Multiset r;
    for (auto& [f, n] : items_) {
        int c = o.count(f);
        if (n > c) r.add(f, n - c);
    }
    return r;
}

Multiset Multiset::boxed() const {
    Multiset r;
    for (auto& [f, n] : items_) r.add(Formula::box(f), n);
    return r;
}

Multiset Multiset::boxped() const {
    Multiset r;
    for (auto& [f, n] : items_) r.add(Formula::boxp(f), n);
    return r;
}

std::vector<Formula> Multiset::flat() const {
    std::vector<Formula> out;
    for (auto& [f, n] : items_)
        for (int i = 0; i < n; ++i) out.push_back(f);
    return out;
}

size_t Multiset::hash() const {
    size_t h = 0x51ed;
    for (auto& [f, n] : items_) h = hash_mix(hash_mix(h, f.hash()), static_cast<size_t>(n));
    return h;
}

int Multiset::max_size() const {
    int m = 0;
    for (auto& e : items_) m = std::max(m, e.first.size());
    return m;
}

Multiset dnecm(const Multiset& g) { return g + g.boxped(); }

size_t Sequent::hash() const { return hash_mix(hash_mix(left.hash(), ann.hash()), right.hash()); }

Sequent mk_sequent(Multiset left, Annotation ann, Multiset right) {
    Sequent s{std::move(left), ann, std::move(right)};
    if (!s.focus_ok())
        throw Error("focus-membership: " + print_formula(Formula::boxp(ann.formula())) +
                    " not on the right of " + print_sequent(s));
    return s;
}

ModalContexts merge_modal_contexts(const Multiset& s0, const Multiset& g0, const Multiset& p0,
                                   const Multiset& s1, const Multiset& g1, const Multiset& p1) {
    Multiset c0 = s0 + g0.boxed() + p0.boxped();
    Multiset c1 = s1 + g1.boxed() + p1.boxped();
    if (c0 != c1)
        throw Error("merge: contexts differ: " + print_multiset(c0) + " vs " + print_multiset(c1));
    ModalContexts out;
    out.gamma = g0.max_union(g1);
    out.pi = p0.max_union(p1);
    out.sigma = c0 - out.gamma.boxed() - out.pi.boxped();
    return out;
}

// --- printing

namespace {
void print_to(std::string& out, Formula f) {
    switch (f.kind()) {
    case Kind::Bot:
        out += "bot";
        break;
    case Kind::Atom:
        out += f.name();
        break;
    case Kind::Imp:
        out += "(-> ";
        print_to(out, f.lhs());
        out += ' ';
        print_to(out, f.rhs());
        out += ')';
        break;
    case Kind::Box:
        out += "(box ";
        print_to(out, f.body());
        out += ')';
        break;
    case Kind::BoxP:
        out += "(boxp ";
        print_to(out, f.body());
        out += ')';
        break;
    }
}
}  // namespace

std::string print_formula(Formula f) {
    std::string s;
    print_to(s, f);
    return s;
}

std::string print_annotation(const Annotation& a) {
    return a.is_focus() ? print_formula(a.formula()) : "o";
}

std::string print_multiset(const Multiset& m) {
    std::string s = "(";
    bool first = true;
    for (Formula f : m.flat()) {
        if (!first) s += ' ';
        first = false;
        print_to(s, f);
    }
    return s + ")";
}

std::string print_sequent(const Sequent& q) {
    return "(seq " + print_multiset(q.left) + " " + print_annotation(q.ann) + " " +
           print_multiset(q.right) + ")";
}

// --- s-expressions

namespace {

class Reader {
public:
    explicit Reader(std::string_view t) : t_(t) {}

    void skip() {
        while (i_ < t_.size()) {
            char c = t_[i_];
            if (c == ';') {
                while (i_ < t_.size() && t_[i_] != '\n') ++i_;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++i_;
            } else {
                break;
            }
        }
    }
    bool at_end() {
        skip();
        return i_ >= t_.size();
    }

    Sexp read() {
        skip();
        if (i_ >= t_.size()) throw SyntaxError("unexpected end of input", i_);
        Sexp s;
        s.offset = i_;
        char c = t_[i_];
        if (c == '(') {
            ++i_;
            s.is_list = true;
            for (;;) {
                skip();
                if (i_ >= t_.size()) throw SyntaxError("unbalanced parenthesis", i_);
                if (t_[i_] == ')') {
                    ++i_;
                    break;
                }
                s.items.push_back(read());
            }
            return s;
        }
        if (c == ')') throw SyntaxError("unexpected ')'", i_);
        size_t j = i_;
        while (j < t_.size() && t_[j] != '(' && t_[j] != ')' && t_[j] != ' ' && t_[j] != '\t' &&
               t_[j] != '\n' && t_[j] != '\r' && t_[j] != ';')
            ++j;
        s.atom = std::string(t_.substr(i_, j - i_));
        i_ = j;
        return s;
    }
    size_t pos() const { return i_; }

private:
    std::string_view t_;
    size_t i_ = 0;
};

}  // namespace

Sexp read_sexp(std::string_view text) {
    Reader r(text);
    Sexp s = r.read();
    if (!r.at_end()) throw SyntaxError("trailing input", r.pos());
    return s;
}

std::vector<Sexp> read_sexps(std::string_view text) {
    Reader r(text);
    std::vector<Sexp> out;
    while (!r.at_end()) out.push_back(r.read());
    return out;
}

void sexp_fail(const Sexp& s, const std::string& msg) { throw SyntaxError(msg, s.offset); }

Formula formula_from_sexp(const Sexp& s) {
    if (!s.is_list) {
        if (s.atom == "bot") return Formula::bot();
        if (!valid_atom_name(s.atom) || s.atom == "o") sexp_fail(s, "bad atom '" + s.atom + "'");
        return Formula::atom(s.atom);
    }
    if (s.headed("->") && s.items.size() == 3)
        return Formula::imp(formula_from_sexp(s.items[1]), formula_from_sexp(s.items[2]));
    if (s.headed("box") && s.items.size() == 2) return Formula::box(formula_from_sexp(s.items[1]));
    if (s.headed("boxp") && s.items.size() == 2) return Formula::boxp(formula_from_sexp(s.items[1]));
    sexp_fail(s, "malformed formula");
}

Annotation annotation_from_sexp(const Sexp& s) {
    if (s.is_atom("o")) return Annotation::unfocused();
    return Annotation::focus(formula_from_sexp(s));
}

Multiset multiset_from_sexp(const Sexp& s, size_t first) {
    if (!s.is_list) sexp_fail(s, "expected formula list");
    Multiset m;
    for (size_t i = first; i < s.items.size(); ++i) m.add(formula_from_sexp(s.items[i]));
    return m;
}

Sequent sequent_from_sexp(const Sexp& s, bool check_focus) {
    if (!s.headed("seq") || s.items.size() != 4) sexp_fail(s, "malformed sequent");
    Sequent q{multiset_from_sexp(s.items[1]), annotation_from_sexp(s.items[2]),
              multiset_from_sexp(s.items[3])};
    if (check_focus && !q.focus_ok()) sexp_fail(s, "focus-membership violated");
    return q;
}

Formula parse_formula(std::string_view text) { return formula_from_sexp(read_sexp(text)); }
Annotation parse_annotation(std::string_view text) { return annotation_from_sexp(read_sexp(text)); }
Sequent parse_sequent(std::string_view text) { return sequent_from_sexp(read_sexp(text)); }

}  // namespace kplus
