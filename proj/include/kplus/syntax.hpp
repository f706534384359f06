#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kplus {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SyntaxError : Error {
    size_t offset;
    SyntaxError(const std::string& msg, size_t off)
        : Error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

enum class Kind : uint8_t { Bot, Atom, Imp, Box, BoxP };

struct FormulaNode;

// Interned formula handle. Equality is pointer equality.
class Formula {
public:
    Formula();  // bot
    static Formula bot();
    static Formula atom(std::string_view name);
    static Formula imp(Formula a, Formula b);
    static Formula box(Formula a);
    static Formula boxp(Formula a);

    Kind kind() const;
    const std::string& name() const;
    Formula lhs() const;   // Imp
    Formula rhs() const;   // Imp
    Formula body() const;  // Box, BoxP
    int size() const;
    size_t hash() const;

    bool is_bot() const { return kind() == Kind::Bot; }
    bool is_atom() const { return kind() == Kind::Atom; }
    bool is_imp() const { return kind() == Kind::Imp; }
    bool is_box() const { return kind() == Kind::Box; }
    bool is_boxp() const { return kind() == Kind::BoxP; }

    bool operator==(const Formula& o) const { return n_ == o.n_; }
    bool operator!=(const Formula& o) const { return n_ != o.n_; }

    const FormulaNode* node() const { return n_; }

private:
    explicit Formula(const FormulaNode* n) : n_(n) {}
    const FormulaNode* n_;
};

// Structural order: kind, then atom name, then children left to right.
int compare(Formula a, Formula b);
struct FormulaLess {
    bool operator()(Formula a, Formula b) const { return compare(a, b) < 0; }
};

class Multiset {
public:
    using Entry = std::pair<Formula, int>;

    Multiset() = default;
    Multiset(std::initializer_list<Formula> fs);
    static Multiset of(const std::vector<Formula>& fs);

    int count(Formula f) const;
    bool contains(Formula f) const { return count(f) > 0; }
    bool empty() const { return items_.empty(); }
    int total() const;

    void add(Formula f, int n = 1);
    void remove(Formula f, int n = 1);  // throws if fewer than n copies

    Multiset operator+(const Multiset& o) const;
    Multiset operator-(const Multiset& o) const;  // throws unless o ⊆ this
    Multiset with(Formula f) const;
    Multiset without(Formula f) const;
    bool includes(const Multiset& o) const;
    Multiset max_union(const Multiset& o) const;
    // elements of this not covered by o, counting multiplicity
    Multiset excess(const Multiset& o) const;

    Multiset boxed() const;   // ◻Γ
    Multiset boxped() const;  // ◻⁺Γ
    std::vector<Formula> flat() const;

    const std::vector<Entry>& entries() const { return items_; }
    size_t hash() const;
    int max_size() const;

    bool operator==(const Multiset& o) const { return items_ == o.items_; }
    bool operator!=(const Multiset& o) const { return !(*this == o); }

private:
    std::vector<Entry> items_;
};

// ⊞Γ = Γ, ◻⁺Γ
Multiset dnecm(const Multiset& g);

class Annotation {
public:
    Annotation() : focused_(false) {}
    static Annotation unfocused() { return {}; }
    static Annotation focus(Formula f) {
        Annotation a;
        a.focused_ = true;
        a.f_ = f;
        return a;
    }
    bool is_focus() const { return focused_; }
    Formula formula() const { return f_; }
    bool is_focus_on(Formula f) const { return focused_ && f_ == f; }
    bool operator==(const Annotation& o) const {
        return focused_ == o.focused_ && (!focused_ || f_ == o.f_);
    }
    bool operator!=(const Annotation& o) const { return !(*this == o); }
    size_t hash() const { return focused_ ? f_.hash() * 31 + 7 : 3; }

private:
    bool focused_;
    Formula f_;
};

struct Sequent {
    Multiset left;
    Annotation ann;
    Multiset right;

    bool focus_ok() const { return !ann.is_focus() || right.contains(Formula::boxp(ann.formula())); }
    bool operator==(const Sequent& o) const {
        return ann == o.ann && left == o.left && right == o.right;
    }
    bool operator!=(const Sequent& o) const { return !(*this == o); }
    size_t hash() const;
};

// Checked constructor: rejects sequents violating focus membership.
Sequent mk_sequent(Multiset left, Annotation ann, Multiset right);

struct ModalContexts {
    Multiset sigma, gamma, pi;
};
ModalContexts merge_modal_contexts(const Multiset& s0, const Multiset& g0, const Multiset& p0,
                                   const Multiset& s1, const Multiset& g1, const Multiset& p1);

std::string print_formula(Formula f);
std::string print_annotation(const Annotation& a);
std::string print_multiset(const Multiset& m);
std::string print_sequent(const Sequent& s);

Formula parse_formula(std::string_view text);
Annotation parse_annotation(std::string_view text);
Sequent parse_sequent(std::string_view text);

inline size_t hash_mix(size_t h, size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace kplus

template <>
struct std::hash<kplus::Formula> {
    size_t operator()(const kplus::Formula& f) const { return f.hash(); }
};
