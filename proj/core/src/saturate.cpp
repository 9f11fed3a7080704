#include "elprov/saturate.hpp"

#include "elprov/errors.hpp"
#include "elprov/profile.hpp"
#include "engine.hpp"

namespace elprov {

using detail::EngineMode;
using detail::EngineOptions;
using detail::run_engine;

SaturationSet::SaturationSet(Entries entries, std::set<std::string> individuals)
    : entries_(std::move(entries)), individuals_(std::move(individuals)) {}

const std::set<Monomial>* SaturationSet::find(const Axiom& a) const {
    auto it = entries_.find(a);
    return it == entries_.end() ? nullptr : &it->second;
}

WhyPolynomial SaturationSet::polynomial(const Axiom& a) const {
    const auto* ms = find(a);
    return ms ? WhyPolynomial::of(*ms) : WhyPolynomial::zero();
}

bool SaturationSet::has_clash() const {
    if (contains(Gci{Concept::top(), Concept::bottom()})) return true;
    return !clash_witness().empty();
}

std::string SaturationSet::clash_witness() const {
    for (const auto& i : individuals_)
        if (contains(ConceptAssertion{Concept::bottom(), i})) return i;
    return {};
}

std::string SaturationSet::str() const {
    std::string out;
    for (const auto& [ax, monos] : entries_) {
        out += render(ax) + " @ ";
        bool first = true;
        for (const auto& m : monos) {
            if (!first) out += " | ";
            first = false;
            out += m.str();
        }
        out += "\n";
    }
    return out;
}

void require_normal_form(const AnnotatedOntology& o) {
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && !is_normal_gci(*g)) throw NotNormalForm("not in normal form: " + render(a.axiom));
    }
}

SaturationSet init_set(const AnnotatedOntology& o) {
    require_normal_form(o);
    EngineOptions opts;
    opts.init_only = true;
    return run_engine(o, opts);
}

SaturationSet saturate(const AnnotatedOntology& o) {
    require_normal_form(o);
    return run_engine(o, {});
}

SaturationSet saturate_k(const AnnotatedOntology& o, std::size_t k) {
    require_normal_form(o);
    if (k == 0) throw Error("saturate_k requires k >= 1");
    if (check_profile(o) != Profile::ELHIrestr) throw NotELHIrestr("ontology is not in the restricted profile");
    EngineOptions opts;
    opts.restricted = true;
    opts.max_size = k;
    return run_engine(o, opts);
}

std::set<Axiom> classical_saturate(const AnnotatedOntology& o, bool restricted) {
    require_normal_form(o);
    EngineOptions opts;
    opts.mode = EngineMode::Classical;
    opts.restricted = restricted;
    std::set<Axiom> out;
    SaturationSet sat = run_engine(o, opts);
    for (const auto& [ax, monos] : sat.entries()) out.insert(ax);
    return out;
}

bool is_satisfiable(const AnnotatedOntology& o) {
    require_normal_form(o);
    EngineOptions opts;
    opts.mode = EngineMode::Classical;
    return !run_engine(o, opts).has_clash();
}

SaturationSet lin_saturate(const AnnotatedOntology& o, bool restricted) {
    require_normal_form(o);
    EngineOptions opts;
    opts.mode = EngineMode::Lin;
    opts.restricted = restricted;
    return run_engine(o, opts);
}

}  // namespace elprov
