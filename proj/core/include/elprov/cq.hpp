#pragma once

#include <string>
#include <vector>

#include "elprov/model.hpp"

namespace elprov {

struct Term {
    bool is_var = true;
    std::string name;

    static Term var(std::string n) { return {true, std::move(n)}; }
    static Term ind(std::string n) { return {false, std::move(n)}; }
    std::string str() const { return is_var ? name : "ind:" + name; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

struct QueryAtom {
    bool is_role = false;
    std::string pred;  // concept atoms; "top" for the top predicate
    Role role;            // role atoms; inverted only inside rewriting
    Term t1;
    Term t2;

    static QueryAtom concept_atom(std::string c, Term t) { return {false, std::move(c), {}, std::move(t), {}}; }
    static QueryAtom role_atom(Role r, Term a, Term b) { return {true, {}, std::move(r), std::move(a), std::move(b)}; }

    std::string str() const;
    friend auto operator<=>(const QueryAtom&, const QueryAtom&) = default;
};

struct ConjunctiveQuery {
    std::vector<Term> head;        // answer terms; variables in user queries
    std::vector<QueryAtom> atoms;  // sorted, duplicate-free after normalize_atoms()

    void normalize_atoms();
    std::vector<std::string> existential_vars() const;
    bool is_answer_var(const std::string& v) const;
    std::string str() const;

    friend auto operator<=>(const ConjunctiveQuery&, const ConjunctiveQuery&) = default;
};

}  // namespace elprov
