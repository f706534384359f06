#pragma once

#include <string>

#include "kplus/proof.hpp"
#include "kplus/store.hpp"

namespace kplus {

// Graph-level transforms. Each rebuilds the main local fragment only; witnesses
// and right premises of boxpf nodes are shared with the input.
namespace tf {
Ref weaken(Store& st, Ref r, const Multiset& left, const Multiset& right);
Ref lctr_atom(Store& st, Ref r, Formula p);
Ref rctr_atom(Store& st, Ref r, Formula p);
Ref rctr_boxp(Store& st, Ref r, Formula chi);
Ref inv_bot(Store& st, Ref r);
Ref linv0(Store& st, Ref r, Formula imp);
Ref linv1(Store& st, Ref r, Formula imp);
Ref rinv(Store& st, Ref r, Formula imp);
Ref change_annotation(Store& st, Ref r, const Annotation& s);
}  // namespace tf

// Proof-level wrappers.
Proof weaken(const Proof& p, const Multiset& left, const Multiset& right);
Proof contract_left_atom(const Proof& p, Formula atom);
Proof contract_right_atom(const Proof& p, Formula atom);
Proof contract_right_boxp(const Proof& p, Formula chi);
Proof inv_bot(const Proof& p);
Proof linv0(const Proof& p, Formula imp);
Proof linv1(const Proof& p, Formula imp);
Proof rinv(const Proof& p, Formula imp);
Proof change_annotation(const Proof& p, const Annotation& s);

struct PreservationProfile {
    bool ordinal_height = true;
    bool local_height = true;
    bool cut_sizes = true;
    bool main_local_cut_freeness = true;
    bool cut_locality = true;
    bool witness_cut_locality = true;

    bool strong() const {
        return ordinal_height && local_height && cut_sizes && main_local_cut_freeness && cut_locality &&
               witness_cut_locality;
    }
    bool weak() const { return local_height && cut_sizes && main_local_cut_freeness && cut_locality; }
};

// Flag-by-flag comparison of a transform's input and output.
PreservationProfile preservation(const Proof& in, const Proof& out);

}  // namespace kplus
