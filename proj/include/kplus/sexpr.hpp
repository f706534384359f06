#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kplus/syntax.hpp"

namespace kplus {

struct Sexp {
    bool is_list = false;
    std::string atom;
    std::vector<Sexp> items;
    size_t offset = 0;

    bool is_atom(std::string_view s) const { return !is_list && atom == s; }
    // (head ...) test
    bool headed(std::string_view h) const {
        return is_list && !items.empty() && items[0].is_atom(h);
    }
};

Sexp read_sexp(std::string_view text);
std::vector<Sexp> read_sexps(std::string_view text);

Formula formula_from_sexp(const Sexp& s);
Annotation annotation_from_sexp(const Sexp& s);
Multiset multiset_from_sexp(const Sexp& s, size_t first = 0);
Sequent sequent_from_sexp(const Sexp& s, bool check_focus = true);

[[noreturn]] void sexp_fail(const Sexp& s, const std::string& msg);

}  // namespace kplus
