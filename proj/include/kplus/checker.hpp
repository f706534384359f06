#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kplus/proof.hpp"

namespace kplus {

enum class CutMode { NoCut, Cut, MCut, WCut };
const char* cut_mode_name(CutMode m);
std::optional<CutMode> parse_cut_mode(const std::string& s);

struct Violation {
    std::string node;  // "12", or "w0/3" inside witness 0
    std::string kind;
    std::string message;
};

struct CheckReport {
    bool ok = true;
    Annotation system;
    CutMode mode = CutMode::NoCut;
    std::vector<Violation> violations;

    bool has(const std::string& kind) const;
    std::string jsonl() const;
};

CheckReport check(const Proof& p, const Annotation& s, CutMode mode);

struct FinitaryReport {
    bool ok = true;
    std::optional<NodeId> node;
    std::string message;
};
// No back-edge and no BoxPF in the main global fragment.
FinitaryReport check_unfocused_finitary(const Proof& p);

// Erase annotations; witnesses become ordinary premises of box/boxp nodes.
Proof deannotate(const Proof& p);
// Unique annotation with root ∘; throws Error when a cycle never settles on a focus.
Proof annotate(const Proof& plain);

}  // namespace kplus
