#include "enumerate.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kplus/generator.hpp"

using namespace kplus;

namespace oracle {

namespace {

struct Enum {
    Store& st;
    size_t cap;

    std::optional<Ref> fixed(const Sequent& s) { return prove(st, s); }

    // boxed left formulas each go to sigma or to gamma/pi
    std::vector<ModalSplit> splits(const Sequent& s, Formula f) {
        std::vector<Formula> modal, rest;
        for (Formula g : s.left.flat()) (g.is_box() || g.is_boxp() ? modal : rest).push_back(g);
        std::vector<ModalSplit> out;
        for (uint32_t mask = 0; mask < (1u << modal.size()); ++mask) {
            ModalSplit sp;
            for (Formula g : rest) sp.sigma.add(g);
            for (size_t i = 0; i < modal.size(); ++i) {
                if (mask >> i & 1)
                    sp.sigma.add(modal[i]);
                else if (modal[i].is_box())
                    sp.gamma.add(modal[i].body());
                else
                    sp.pi.add(modal[i].body());
            }
            sp.delta_wk = s.right.without(f);
            if (std::find(out.begin(), out.end(), sp) == out.end()) out.push_back(sp);
        }
        return out;
    }

    void modal(const Sequent& s, Formula f, std::vector<Ref>& out) {
        Formula phi = f.body();
        for (const ModalSplit& sp : splits(s, f)) {
            Multiset prem = sp.premise();
            auto w0 = fixed(Sequent{prem, Annotation::unfocused(), Multiset{phi}});
            if (!w0) continue;
            if (f.is_box()) {
                out.push_back(st.boxr(phi, sp, s.ann, *w0));
                continue;
            }
            Sequent second{prem, Annotation::focus(phi), Multiset{f}};
            if (s.ann.is_focus_on(phi)) {
                if (second == s) {
                    Ref x = st.reserve();
                    st.define(x, s, RuleTag{Rule::BoxPF, phi, sp}, {x}, {*w0});
                    out.push_back(x);
                } else if (auto c = fixed(second)) {
                    out.push_back(st.boxpf(phi, sp, *w0, *c));
                }
                continue;
            }
            if (auto w1 = fixed(second)) out.push_back(st.boxpu(phi, sp, s.ann, *w0, *w1));
        }
    }

    std::vector<Ref> run(const Sequent& s, int h) {
        std::vector<Ref> out;
        if (!s.focus_ok()) return out;
        if (s.left.contains(Formula::bot())) out.push_back(st.axbot(s));
        for (auto& [f, n] : s.left.entries())
            if (f.is_atom() && s.right.contains(f)) {
                out.push_back(st.ax(s));
                break;
            }
        for (auto& [f, n] : s.right.entries())
            if (f.is_box() || f.is_boxp()) modal(s, f, out);
        if (h > 0) {
            for (auto& [f, n] : s.right.entries()) {
                if (!f.is_imp()) continue;
                for (Ref k : run(Sequent{s.left.with(f.lhs()), s.ann, s.right.without(f).with(f.rhs())}, h - 1)) {
                    if (out.size() >= cap) break;
                    out.push_back(st.make(s, RuleTag{Rule::ImpR, f, {}}, {k}));
                }
            }
            for (auto& [f, n] : s.left.entries()) {
                if (!f.is_imp()) continue;
                Multiset g = s.left.without(f);
                auto k0s = run(Sequent{g, s.ann, s.right.with(f.lhs())}, h - 1);
                auto k1s = run(Sequent{g.with(f.rhs()), s.ann, s.right}, h - 1);
                for (Ref k0 : k0s)
                    for (Ref k1 : k1s) {
                        if (out.size() >= cap) break;
                        out.push_back(st.make(s, RuleTag{Rule::ImpL, f, {}}, {k0, k1}));
                    }
            }
        }
        if (out.size() > cap) out.resize(cap);
        return out;
    }
};

}  // namespace

std::vector<Ref> enumerate_proofs(Store& st, const Sequent& s, int h, size_t cap) {
    return Enum{st, cap}.run(s, h);
}

std::vector<Multiset> multisets_upto(const std::vector<Formula>& fs, int n) {
    std::vector<Multiset> out{Multiset{}};
    std::vector<Multiset> layer{Multiset{}};
    std::vector<size_t> from{0};  // index of the smallest formula allowed next
    for (int k = 1; k <= n; ++k) {
        std::vector<Multiset> next;
        std::vector<size_t> nfrom;
        for (size_t i = 0; i < layer.size(); ++i)
            for (size_t j = from[i]; j < fs.size(); ++j) {
                next.push_back(layer[i].with(fs[j]));
                nfrom.push_back(j);
            }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
        from = std::move(nfrom);
    }
    return out;
}

std::string temp_path(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("kplus-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

CliResult run_cli(const std::string& args, const std::string& env) {
#ifndef KPLUS_CLI
    (void)args;
    (void)env;
    return {};
#else
    static int counter = 0;
    std::string out = temp_path("cli" + std::to_string(counter) + ".out");
    std::string err = temp_path("cli" + std::to_string(counter++) + ".err");
    std::string cmd = (env.empty() ? "" : "env " + env + " ") + std::string(KPLUS_CLI) + " " + args + " >" + out +
                      " 2>" + err;
    int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_file(out);
    r.err = read_file(err);
    return r;
#endif
}

}  // namespace oracle
