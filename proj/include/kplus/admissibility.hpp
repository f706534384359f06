#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kplus/cutreduce.hpp"
#include "kplus/proof.hpp"
#include "kplus/store.hpp"

namespace kplus {

// Resolves a cut between two cut-free premises to a cut-free proof.
using CutOracle = std::function<Ref(Ref left, Ref right, Formula chi)>;

struct UnblockedWitnessData {
    Formula chi;
    int alpha = 0;
    bool verified = false;
    std::string reason;  // first failure when !verified
};

// Every cut has formula χ or ◻⁺χ; ◻⁺χ-cuts have cut-free premises whose
// ordinal heights sum to at most α.
UnblockedWitnessData verify_unblocked(Store& st, Ref r, Formula chi, int alpha);

struct AdmitStats {
    size_t master_top_calls = 0;
    size_t master_local_calls = 0;  // admit_master_top calls issued by admit_master_local
    size_t master_calls = 0;
    size_t inner_calls = 0;
    size_t fragments = 0;  // admit_master_aux memo states
    size_t admit_calls = 0;
};
AdmitStats& admit_stats();
void reset_admit_stats();

Ref admit_atomic(Store& st, Ref left, Ref right, Formula p);
Ref admit_box(Store& st, Ref left, Ref right, Formula box_chi, const CutOracle& inner);

// chi is the body of the cut formula ◻⁺χ throughout the master lemmas.
Ref admit_master_top(Store& st, Ref left, Ref right, Formula chi, int alpha, const CutOracle& inner);
Ref admit_master_local(Store& st, Ref r, Formula chi, int alpha, const CutOracle& inner);
Ref admit_master_aux(Store& st, Ref left, Ref right, Formula chi, int alpha, const CutOracle& inner);
Ref admit_master(Store& st, Ref left, Ref right, Formula boxp_chi, const CutOracle& inner);

Ref admit_cut(Store& st, Ref left, Ref right, Formula chi);

// Cuts in main local fragments (witnesses included) only.
Ref eliminate_finite(Store& st, Ref r, const CutOracle& oracle);
Ref eliminate_finite(Store& st, Ref r);

// Rebuilds the main global fragment with every witness w replaced by f(w).
Ref map_witnesses(Store& st, Ref r, const std::function<Ref(Ref)>& f);

struct Stages {
    Ref stage1 = 0, stage2 = 0, stage3 = 0;
};
Ref eliminate_cuts(Store& st, Ref r, Stages* stages = nullptr);

// Proof-level wrappers
Proof admit_cut(const Proof& left, const Proof& right, Formula chi);
Proof eliminate_finite(const Proof& p);
Proof eliminate_cuts(const Proof& p);

struct ProofStages {
    Proof stage1, stage2, stage3;
};
ProofStages eliminate_cuts_staged(const Proof& p);

}  // namespace kplus
