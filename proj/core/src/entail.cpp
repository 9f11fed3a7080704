#include "elprov/entail.hpp"

#include <algorithm>
#include <string>

#include "elprov/errors.hpp"
#include "elprov/normalize.hpp"
#include "elprov/profile.hpp"
#include "elprov/saturate.hpp"
#include "fresh.hpp"

namespace elprov {

namespace {

using detail::first_free;

AnnotatedOntology normal(const AnnotatedOntology& o) {
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && !is_normal_gci(*g)) return normalize(o);
    }
    return o;
}

class Fresh {
public:
    explicit Fresh(const AnnotatedOntology& o) : voc_(vocabulary(o)) {
        next_ind_ = first_free(voc_.individuals, "_i");
        next_var_ = first_free(voc_.variables, "_v");
    }
    std::string individual() { return "_i" + std::to_string(next_ind_++); }
    std::string variable() { return "_v" + std::to_string(next_var_++); }
    std::string concept_name() const {
        std::string e = "_nfE";
        for (int i = 1; voc_.concepts.count(e); ++i) e = "_nfE" + std::to_string(i);
        return e;
    }

private:
    Vocabulary voc_;
    std::size_t next_ind_ = 0;
    std::size_t next_var_ = 0;
};

// Assertions making a an instance of c. With annotate == false every
// assertion carries the unit and `vars` stays empty.
void unfold(const Concept& c, const std::string& a, Fresh& fresh, bool annotate, AnnotatedOntology& out,
            std::set<Variable>& vars) {
    auto put = [&](Axiom ax) {
        Monomial m;
        if (annotate) {
            std::string v = fresh.variable();
            vars.insert(v);
            m = Monomial{v};
        }
        out.add(std::move(ax), std::move(m));
    };
    switch (c.kind()) {
        case Concept::Kind::Top: break;
        case Concept::Kind::Bottom: throw UnsupportedAxiom("bot on a left-hand side");
        case Concept::Kind::Name: put(ConceptAssertion{c, a}); break;
        case Concept::Kind::Exists: {
            std::string b = fresh.individual();
            const Role& r = c.role();
            put(r.inverted ? RoleAssertion{r.name, b, a} : RoleAssertion{r.name, a, b});
            unfold(c.filler(), b, fresh, annotate, out, vars);
            break;
        }
        case Concept::Kind::And:
            for (const auto& x : c.conjuncts()) unfold(x, a, fresh, annotate, out, vars);
            break;
    }
}

RoleAssertion role_fact(const Role& p, const std::string& a, const std::string& b) {
    return p.inverted ? RoleAssertion{p.name, b, a} : RoleAssertion{p.name, a, b};
}

bool satisfiable_with(const AnnotatedOntology& o, const AnnotatedOntology& extra) {
    return is_satisfiable(normal(o.merged(extra)));
}

}  // namespace

WhyPolynomial assertion_provenance(const AnnotatedOntology& o, const Axiom& assertion) {
    AnnotatedOntology n = normal(o);
    SaturationSet sat = saturate(n);
    if (sat.has_clash()) return WhyPolynomial::top();
    return sat.polynomial(assertion);
}

Reduction reduce_to_assertion(const AnnotatedOntology& o, const Axiom& alpha) {
    Fresh fresh(o);
    Reduction r;
    if (const auto* g = std::get_if<Gci>(&alpha)) {
        AnnotatedOntology extra;
        std::string a0 = fresh.individual();
        unfold(g->lhs, a0, fresh, true, extra, r.fresh_vars);
        if (g->rhs.is_bottom()) {
            r.target = ConceptAssertion{Concept::bottom(), a0};
        } else {
            Concept e = Concept::name(fresh.concept_name());
            extra.add(Gci{g->rhs, e}, Monomial{});
            r.target = ConceptAssertion{e, a0};
        }
        r.ontology = o.merged(extra);
        r.carrier = Monomial(std::vector<Variable>(r.fresh_vars.begin(), r.fresh_vars.end()));
        return r;
    }
    if (const auto* ri = std::get_if<RoleInclusion>(&alpha)) {
        std::string a0 = fresh.individual();
        std::string b0 = fresh.individual();
        AnnotatedOntology extra;
        extra.add(role_fact(ri->sub, a0, b0), Monomial{});
        r.ontology = o.merged(extra);
        r.target = role_fact(ri->super, a0, b0);
        return r;
    }
    throw UnsupportedAxiom("no assertion reduction for " + render(alpha));
}

WhyPolynomial axiom_provenance(const AnnotatedOntology& o, const Axiom& alpha) {
    AnnotatedOntology n = normal(o);
    if (is_assertion(alpha)) return assertion_provenance(n, alpha);
    if (!is_satisfiable(n)) return WhyPolynomial::top();

    if (const auto* neg = std::get_if<NegRoleInclusion>(&alpha)) {
        Fresh fresh(n);
        std::string a0 = fresh.individual();
        std::string b0 = fresh.individual();
        AnnotatedOntology extra;
        extra.add(role_fact(neg->first, a0, b0), Monomial{});
        extra.add(role_fact(neg->second, a0, b0), Monomial{});
        return satisfiable_with(n, extra) ? WhyPolynomial::zero() : WhyPolynomial::top();
    }

    if (const auto* g = std::get_if<Gci>(&alpha)) {
        Fresh fresh(n);
        AnnotatedOntology lhs;
        std::set<Variable> none;
        unfold(g->lhs, fresh.individual(), fresh, false, lhs, none);
        if (!satisfiable_with(n, lhs)) return WhyPolynomial::top();
        if (g->rhs.is_bottom()) return WhyPolynomial::zero();
    } else if (const auto* ri = std::get_if<RoleInclusion>(&alpha)) {
        AnnotatedOntology lhs;
        Fresh fresh(n);
        std::string a0 = fresh.individual();
        lhs.add(role_fact(ri->sub, a0, fresh.individual()), Monomial{});
        if (!satisfiable_with(n, lhs)) return WhyPolynomial::top();
    }

    Reduction red = reduce_to_assertion(n, alpha);
    SaturationSet sat = saturate(normal(red.ontology));
    WhyPolynomial out;
    const auto* monos = sat.find(red.target);
    if (!monos) return out;
    for (const auto& m : *monos) {
        if (!std::all_of(red.fresh_vars.begin(), red.fresh_vars.end(), [&](const Variable& v) { return m.contains(v); }))
            continue;
        std::vector<Variable> rest;
        for (const auto& v : m.vars())
            if (!red.fresh_vars.count(v)) rest.push_back(v);
        out.add(Monomial(std::move(rest)));
    }
    return out;
}

bool entails_annotated(const AnnotatedOntology& o, const Axiom& alpha, const Monomial& m) {
    AnnotatedOntology n = normal(o);
    if (is_assertion(alpha) && check_profile(n) == Profile::ELHIrestr) {
        if (!is_satisfiable(n)) return true;
        SaturationSet sat = saturate_k(n, std::max<std::size_t>(m.size(), 1));
        const auto* monos = sat.find(alpha);
        return monos && monos->count(m) > 0;
    }
    return axiom_provenance(n, alpha).contains(m);
}

}  // namespace elprov
