#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kplus/proof.hpp"
#include "kplus/store.hpp"

namespace kplus {

enum class CaseId {
    LabelCoincide,
    AxSide,
    AxCutLeft,   // left is Ax on the cut atom: lctr on the right proof
    AxCutRight,  // right is Ax on the cut atom: rctr on the left proof
    AxCutBot,    // right is AxBot on the cut formula: inv_bot
    Principal,
    CommLeftImpL,
    CommLeftImpR,
    CommRightImpR,
    CommRightImpL,
    WeakenLeft,
    WeakenRight,
    BoxBox,
    BoxBoxPU,
    BoxBoxPF,
    BoxPUBox,
    BoxPUBoxPU,
    BoxPUBoxPF,
};
constexpr int kCaseCount = 18;
const char* case_name(CaseId c);
bool is_modal_case(CaseId c);

struct CutObligation {
    Ref left = 0;   // Γ ⇒_s Δ, χ
    Ref right = 0;  // χ, Γ ⇒_s Δ
    Formula chi;
    std::string tag = "cut";
};

// Discharges a residual cut; receives the catalog case that produced it.
using Resolver = std::function<Ref(const CutObligation&, CaseId)>;

struct ReductionResult {
    CaseId which = CaseId::AxSide;
    Ref result = 0;
    std::vector<CutObligation> residuals;
};

// Conclusion Γ ⇒_s Δ of the obligation; throws on context mismatch.
Sequent obligation_conclusion(const Store& st, const CutObligation& ob);

// One step of the catalog. The default resolver plugs residuals as literal cuts.
ReductionResult reduce_cut(Store& st, const CutObligation& ob, const Resolver& resolve = {});
// Every case whose shape condition holds, ignoring priority.
std::vector<CaseId> applicable_cases(Store& st, const CutObligation& ob);

struct PushStats {
    size_t firings = 0;
    size_t push_top_calls = 0;     // from push_local
    size_t memo_states = 0;        // push corecursion
    std::map<std::string, size_t> by_case;
};

// Optional observer of every reduce_cut firing (for --trace).
using TraceFn = std::function<void(CaseId, Formula chi, size_t residuals)>;
void set_trace(TraceFn fn);

Ref push_top(Store& st, const CutObligation& ob, PushStats* stats = nullptr);
Ref push_local(Store& st, Ref r, PushStats* stats = nullptr);
Ref push(Store& st, Ref r, PushStats* stats = nullptr);

// Corecursive map over local fragments. local(c) rewrites the fragment rooted
// at c; every boxpf premise of its result is then mapped again. Fragments with
// !needs(c) are kept. Memo on Ref, cycles tied through placeholders.
Ref map_fragments(Store& st, Ref r, const std::function<bool(Ref)>& needs,
                  const std::function<Ref(Ref)>& local, const char* what,
                  size_t* states = nullptr);

// Proof-level wrappers
Proof push_local(const Proof& p, PushStats* stats = nullptr);
Proof push(const Proof& p, PushStats* stats = nullptr);

struct ProofReduction {
    CaseId which;
    Proof skeleton;  // residuals appear as literal cuts
    size_t residuals;
};
ProofReduction reduce_cut(const Proof& left, const Proof& right, Formula chi);

}  // namespace kplus
