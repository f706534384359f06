#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "kplus/checker.hpp"
#include "kplus/proof.hpp"
#include "kplus/store.hpp"

namespace kplus {

// --- fixtures

Proof p_taut();   // ⇒_∘ p→p
Proof p_cyc();    // ⇒_{p→p} ◻⁺(p→p), boxpf with a back-edge onto itself
Proof p_cyc_o();  // ⇒_∘ ◻⁺(p→p), boxpu over p_taut and p_cyc

struct Mutant {
    std::string name;
    Proof proof;
    Annotation system;
    CutMode mode = CutMode::NoCut;
    std::string expect;  // a violation kind the checker must report
};
std::vector<Mutant> mutants();

// --- backward prover

struct ProverConfig {
    int max_depth = 14;
    size_t max_steps = 20000;
    double partial_split = 0.0;  // chance of moving a boxed formula into sigma
    double cut_rate = 0.0;       // chance of opening a cut at a node
    bool cuts_in_witnesses = false;
    int max_cuts = 3;
    int cut_formula_size = 3;
};

// Searches for a proof of s. With rng the choice order and splits are randomized.
std::optional<Ref> prove(Store& st, const Sequent& s, const ProverConfig& cfg = {},
                         std::mt19937_64* rng = nullptr);

// --- random objects

Formula random_formula(std::mt19937_64& rng, int max_size, const std::vector<Formula>& atoms);
Formula random_formula_of(std::mt19937_64& rng, Kind shape, int max_size, const std::vector<Formula>& atoms);
Sequent random_sequent(std::mt19937_64& rng, int max_formulas, int max_size,
                       const std::vector<Formula>& atoms, bool focused);

struct GenOptions {
    std::vector<Formula> atoms{Formula::atom("p"), Formula::atom("q")};
    int max_formulas = 3;
    int max_size = 5;
    bool focused = false;  // allow a focus annotation on the root
    ProverConfig prover;
    int attempts = 400;
    int min_nodes = 1;  // reject smaller proofs
};

// Random provable sequent with a random proof; nullopt after opts.attempts misses.
std::optional<Ref> random_proof(Store& st, std::mt19937_64& rng, const GenOptions& opts);
std::optional<Proof> random_proof(std::mt19937_64& rng, const GenOptions& opts);

}  // namespace kplus
