#include "elprov/explain.hpp"

#include <algorithm>

#include "elprov/entail.hpp"
#include "elprov/errors.hpp"
#include "elprov/normalize.hpp"
#include "elprov/profile.hpp"
#include "elprov/query.hpp"
#include "elprov/saturate.hpp"

namespace elprov {

namespace {

AnnotatedOntology normal(const AnnotatedOntology& o) {
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && !is_normal_gci(*g)) return normalize(o);
    }
    return o;
}

void require_satisfiable(const AnnotatedOntology& n) {
    if (!is_satisfiable(n)) throw UnsatisfiableOntology("ontology is unsatisfiable");
}

}  // namespace

WhyPolynomial goal_provenance(const AnnotatedOntology& o, const Goal& goal) {
    if (const auto* ax = std::get_if<Axiom>(&goal)) return axiom_provenance(o, *ax);
    const auto& q = std::get<QueryGoal>(goal);
    return cq_provenance(o, q.query, q.tuple);
}

std::vector<Justification> justifications(const AnnotatedOntology& o, const Goal& goal,
                                          const std::set<Variable>& static_vars) {
    require_satisfiable(normal(o));
    WhyPolynomial p = goal_provenance(o, goal);
    if (p.is_top()) {
        const auto* ax = std::get_if<Axiom>(&goal);
        if (ax && std::holds_alternative<NegRoleInclusion>(*ax))
            throw UnsupportedAxiom("negative role inclusions have no monomial provenance");
        throw UnsatisfiableLHS("left-hand side is unsatisfiable");
    }
    WhyPolynomial erased;
    for (const auto& m : p.monomials()) {
        std::vector<Variable> keep;
        for (const auto& v : m.vars())
            if (!static_vars.count(v)) keep.push_back(v);
        erased.add(Monomial(std::move(keep)));
    }
    std::map<Variable, std::size_t> owner;
    for (std::size_t i = 0; i < o.axioms().size(); ++i)
        for (const auto& v : o.axioms()[i].annotation.vars()) owner.emplace(v, i);

    std::vector<Justification> out;
    WhyPolynomial minimal = minimize(erased);
    for (const auto& m : minimal.monomials()) {
        std::set<std::size_t> idx;
        for (const auto& v : m.vars()) {
            auto it = owner.find(v);
            if (it == owner.end()) throw Error("variable " + v + " belongs to no axiom");
            idx.insert(it->second);
        }
        Justification j;
        for (auto i : idx) j.push_back(o.axioms()[i]);
        out.push_back(std::move(j));
    }
    std::sort(out.begin(), out.end(), [](const Justification& a, const Justification& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return render(a) < render(b);
    });
    return out;
}

std::string render(const Justification& j) {
    std::string out = "{";
    for (std::size_t i = 0; i < j.size(); ++i) out += (i ? "; " : "") + render(j[i].axiom);
    return out + "}";
}

std::map<Axiom, Monomial> linsat(const AnnotatedOntology& o) {
    AnnotatedOntology n = normal(o);
    require_satisfiable(n);
    SaturationSet sat = lin_saturate(n, check_profile(n) == Profile::ELHIrestr);
    std::map<Axiom, Monomial> out;
    for (const auto& [ax, monos] : sat.entries()) {
        std::vector<Variable> vars;
        for (const auto& m : monos) vars.insert(vars.end(), m.vars().begin(), m.vars().end());
        out.emplace(ax, Monomial(std::move(vars)));
    }
    return out;
}

Lineage lineage(const AnnotatedOntology& o, const Axiom& alpha) {
    if (!is_assertion(alpha)) {
        require_satisfiable(normal(o));
        return flatten(axiom_provenance(o, alpha));
    }
    auto lin = linsat(o);
    auto it = lin.find(alpha);
    if (it == lin.end()) return Lineage::zero();
    return Lineage::of({it->second.vars().begin(), it->second.vars().end()});
}

bool is_relevant(const AnnotatedOntology& o, const Axiom& alpha, const Variable& v) {
    Lineage l = lineage(o, alpha);
    return l.kind == Lineage::Kind::Vars && l.vars.count(v) > 0;
}

AnnotatedOntology ncut(const AnnotatedOntology& o, double n, const Valuation& val) {
    AnnotatedOntology out;
    for (const auto& a : o.axioms()) {
        double degree = 1.0;
        for (const auto& v : a.annotation.vars()) {
            auto it = val.find(v);
            if (it == val.end()) throw MissingValuation("no value for " + v);
            degree = std::min(degree, it->second);
        }
        if (degree >= n) out.add(a);
    }
    return out;
}

}  // namespace elprov
