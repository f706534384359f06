#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kplus/proof.hpp"

namespace kplus {

class KripkeModel {
public:
    explicit KripkeModel(int worlds = 1);

    int size() const { return n_; }
    void add_edge(int w, int v);
    void set_true(const std::string& atom, int w);

    bool rel(int w, int v) const { return rel_[idx(w, v)]; }
    bool rel_plus(int w, int v) const;  // transitive closure, cached
    bool holds(const std::string& atom, int w) const;

    // closure by Floyd–Warshall and by iterative squaring, for cross-checks
    std::vector<bool> closure_warshall() const;
    std::vector<bool> closure_squaring() const;

    std::string describe() const;

private:
    size_t idx(int w, int v) const;
    void check_world(int w) const;
    int n_;
    std::vector<bool> rel_;
    std::map<std::string, std::vector<bool>> val_;
    mutable std::optional<std::vector<bool>> plus_;
};

bool eval(const KripkeModel& m, int w, Formula f);
// ⋀Γ → ⋁Δ at every world; the annotation is ignored
bool sequent_valid(const KripkeModel& m, const Sequent& s);

// edge and atom probability 1/2, world count uniform in 1..max_worlds
KripkeModel random_model(std::mt19937_64& rng, int max_worlds, const std::vector<std::string>& atoms);

struct FuzzReport {
    int models = 0;
    int counterexamples = 0;
    std::optional<std::string> first;  // description of the first failing model
    bool ok() const { return counterexamples == 0; }
    std::string json() const;
};

FuzzReport fuzz_sequent(const Sequent& s, int models, int max_worlds, uint64_t seed);
FuzzReport fuzz_soundness(const Proof& p, int models, int max_worlds, uint64_t seed);

std::vector<std::string> atoms_of(const Sequent& s);

}  // namespace kplus
