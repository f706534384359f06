#pragma once

#include <string>
#include <vector>

#include "kplus/store.hpp"

namespace oracle {

// Every cut-free proof of s whose main local fragment has height ≤ h. Each
// modal premise outside the local fragment (witnesses, boxpf premises) is one
// fixed proof found by the deterministic prover; a boxpf premise equal to s
// becomes a back-edge. All modal splits are tried. Stops after cap proofs.
std::vector<kplus::Ref> enumerate_proofs(kplus::Store& st, const kplus::Sequent& s, int h, size_t cap = 4096);

// all multisets of size ≤ n over the given formulas
std::vector<kplus::Multiset> multisets_upto(const std::vector<kplus::Formula>& fs, int n);

struct CliResult {
    int code = -1;
    std::string out, err;
};
// Runs the kplus binary with the given argument string; env is prepended
// verbatim (e.g. "KPLUS_MEMO_BUDGET=3").
CliResult run_cli(const std::string& args, const std::string& env = "");

std::string temp_path(const std::string& name);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace oracle
