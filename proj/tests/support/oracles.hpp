#pragma once
// Reference implementations used only by tests. None of them call the module
// under test for the quantity being checked.

#include <chrono>
#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "kplus/generator.hpp"
#include "kplus/proof.hpp"
#include "kplus/semantics.hpp"

namespace oracle {

// --- formulas as plain trees

struct Tree {
    enum K { Bot, Atom, Imp, Box, BoxP } k = Bot;
    std::string name;
    std::shared_ptr<Tree> a, b;
};
using TreeP = std::shared_ptr<Tree>;

TreeP random_tree(std::mt19937_64& rng, int size, const std::vector<std::string>& atoms);
std::string show(const TreeP& t);
kplus::Formula to_formula(const TreeP& t);
// evaluates with a breadth-first R⁺
bool eval(const kplus::KripkeModel& m, int w, const TreeP& t);
TreeP from_formula(kplus::Formula f);

// R⁺ by breadth-first search from every world
std::vector<std::vector<bool>> reach_plus(const kplus::KripkeModel& m);

// ⋀Γ → ⋁Δ at every world of every model on at most n worlds over the given
// atoms (exhaustive; only for tiny n)
bool valid_up_to(const kplus::Sequent& s, int n, const std::vector<std::string>& atoms);

// --- multisets keyed by printed formula

using Bag = std::map<std::string, int>;
Bag bag(const kplus::Multiset& m);
Bag operator+(Bag a, const Bag& b);
Bag minus_one(Bag a, const std::string& f);
std::string show(const Bag& b);

// --- proofs

struct Census {
    int local = 0, global = 0, witness = 0;
    int nonlocal = 0;  // cut nodes that occur above some boxpf in the unfolding
    bool local_only() const { return witness == 0 && nonlocal == 0; }
};
Census census(const kplus::Proof& p);
int count_cuts(const kplus::Proof& p);

// Non-modal rule instances (ax, axbot, impl, impr, cut) re-checked with Bag
// arithmetic; returns the first offending node id or -1.
long first_bad_nonmodal(const kplus::Proof& p);

// main global fragment has neither back-edges nor boxpf nodes
bool finitary(const kplus::Proof& p);

// k focused fragments in a row, each opening with a cut on a fresh atom; the
// last one loops onto itself. Root: a1..ak, ◻⁺a1..◻⁺ak ⇒_{p→p} ◻⁺(p→p).
kplus::Proof fragment_chain(int k);

// --- corpora

std::vector<kplus::Proof> proofs(uint64_t seed, int n, const kplus::GenOptions& opts);
// random sequent, reshaped, then proved; nullopt after opts.attempts misses
std::optional<kplus::Proof> shaped_proof(std::mt19937_64& rng, const kplus::GenOptions& opts,
                                         const std::function<void(kplus::Sequent&)>& shape);
kplus::GenOptions default_options(bool focused = true);
kplus::GenOptions cut_options();

double seconds_since(std::chrono::steady_clock::time_point t);

}  // namespace oracle
