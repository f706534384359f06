#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kplus/proof.hpp"
#include "kplus/store.hpp"

namespace kplus {

struct Instantiation {
    Formula phi = Formula::atom("p");
    Formula psi = Formula::atom("q");
    Formula chi = Formula::atom("r");
};

Formula axiom_formula(int i, const Instantiation& in);

// F, left ⇒_s right, F
Ref identity(Store& st, Formula f, const Multiset& left, const Annotation& s, const Multiset& right);
// ⇒_∘ axiom i, cut-free
Ref axiom_proof(Store& st, int i, const Instantiation& in);
Proof axiom_proof(int i, const Instantiation& in = {});

// ⇒_∘ B from ⇒_∘ A and ⇒_∘ A→B, one cut on A
Ref modus_ponens(Store& st, Ref a, Ref ab);
// ⇒_∘ ◻⁺A from ⇒_∘ A
Ref necessitation(Store& st, Ref a);

struct HilbertLine {
    enum class Just { Axiom, MP, Nec };
    int number = 0;
    Formula formula;
    Just just = Just::Axiom;
    int axiom = 0;
    Instantiation inst;
    int a = 0, b = 0;  // referenced line numbers
};

struct HilbertProof {
    std::vector<HilbertLine> lines;
    const HilbertLine& line(int number) const;
    Formula conclusion() const { return lines.back().formula; }
};

// Throws Error on a malformed justification.
void validate(const HilbertProof& h);
HilbertProof parse_hilbert(std::string_view text);
std::string print_hilbert(const HilbertProof& h);

Ref embed(Store& st, const HilbertProof& h);
Proof embed(const HilbertProof& h);

// Appends lines and returns their numbers.
class HilbertBuilder {
public:
    int axiom(int i, const Instantiation& in);
    int mp(int a, int ab);
    int nec(int a);
    // ⊢ φ→φ
    int identity(Formula phi);
    // ⊢ A  ↦  ⊢ ψ→A
    int weaken(int a, Formula psi);
    HilbertProof done() const { return h_; }

private:
    Formula f(int n) const { return h_.line(n).formula; }
    HilbertProof h_;
};

// Fixed corpus of theorems derived with MP and Nec.
std::vector<HilbertProof> composed_theorems();

}  // namespace kplus
