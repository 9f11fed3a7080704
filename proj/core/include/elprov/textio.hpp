#pragma once

#include <string>
#include <string_view>

#include "elprov/cq.hpp"
#include "elprov/errors.hpp"
#include "elprov/model.hpp"
#include "elprov/semiring.hpp"

namespace elprov {

struct ParseOptions {
    // Accept `_`-prefixed identifiers (machine-generated names).
    bool allow_reserved = false;
    // Accept conjunctions and qualified existentials on the right; the
    // result must go through desugar_rhs before any reasoning.
    bool allow_rich_rhs = false;
};

// Bare names in `X <= Y` and `X and Y <= bot` are roles when they are used as
// roles elsewhere in the text (or carry a `-`), and concept names otherwise.
AnnotatedOntology parse_ontology(std::string_view text, const ParseOptions& opts = {});

// One axiom without annotation; names are classified against ctx first.
Axiom parse_axiom(std::string_view text, const Vocabulary& ctx, const ParseOptions& opts = {});

// Bare identifiers are variables unless ctx lists them as individuals and
// they are not answer variables.
ConjunctiveQuery parse_query(std::string_view text, const Vocabulary* ctx = nullptr);

// Values: decimals, `inf`, access levels P/C/S/T, `true`/`false`.
Valuation parse_valuation(std::string_view text);

// Inverse of Concept::str().
Concept parse_concept(std::string_view text, const ParseOptions& opts = {});

}  // namespace elprov
