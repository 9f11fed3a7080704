#include "elprov/profile.hpp"

#include <string>
#include <vector>

#include "elprov/saturate.hpp"

namespace elprov {

namespace {

// Roles P with O |= C <= exists P for some concept name C of O.
std::set<Role> entailed_existentials(const AnnotatedOntology& o, const Vocabulary& voc) {
    AnnotatedOntology probe = o;
    std::vector<std::pair<std::string, std::string>> probes;  // (concept, individual)
    std::size_t i = 0;
    for (const auto& c : voc.concepts) {
        std::string ind = "_pc" + std::to_string(i++);
        probe.add(ConceptAssertion{Concept::name(c), ind}, Monomial());
        probes.emplace_back(c, ind);
    }
    std::vector<std::pair<Role, std::string>> markers;
    std::size_t j = 0;
    for (const auto& r : voc.roles) {
        for (bool inv : {false, true}) {
            Role p{r, inv};
            std::string e = "_pe" + std::to_string(j++);
            probe.add(Gci{Concept::exists(p), Concept::name(e)}, Monomial());
            markers.emplace_back(p, e);
        }
    }
    auto sat = classical_saturate(probe);
    bool unsat = sat.count(Gci{Concept::top(), Concept::bottom()}) > 0;
    for (const auto& a : voc.individuals)
        if (sat.count(ConceptAssertion{Concept::bottom(), a})) unsat = true;

    std::set<Role> out;
    for (const auto& [p, e] : markers) {
        bool hit = unsat && !probes.empty();
        for (const auto& [c, ind] : probes) {
            if (hit) break;
            hit = sat.count(ConceptAssertion{Concept::name(e), ind}) ||
                  sat.count(ConceptAssertion{Concept::bottom(), ind});
        }
        if (hit) out.insert(p);
    }
    return out;
}

}  // namespace

Profile check_profile(const AnnotatedOntology& o) {
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && !is_normal_gci(*g)) return Profile::General;
    }
    std::vector<const Gci*> qualified;
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && g->lhs.kind() == Concept::Kind::Exists && !g->lhs.filler().is_top()) qualified.push_back(g);
    }
    if (qualified.empty()) return Profile::ELHIrestr;
    Vocabulary voc = vocabulary(o);
    auto ex = entailed_existentials(o, voc);
    for (const Gci* g : qualified)
        if (ex.count(g->lhs.role().inv())) return Profile::NormalForm;
    return Profile::ELHIrestr;
}

}  // namespace elprov
