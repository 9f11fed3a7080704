#include "elprov/model.hpp"

#include <algorithm>

#include "visit.hpp"

namespace elprov {

Concept::Concept() { render(); }

Concept Concept::top() { return Concept(); }

Concept Concept::bottom() {
    Concept c;
    c.kind_ = Kind::Bottom;
    c.render();
    return c;
}

Concept Concept::name(std::string n) {
    Concept c;
    c.kind_ = Kind::Name;
    c.name_ = std::move(n);
    c.render();
    return c;
}

Concept Concept::exists(Role r, Concept filler) {
    Concept c;
    c.kind_ = Kind::Exists;
    c.role_ = std::move(r);
    c.children_.push_back(std::move(filler));
    c.render();
    return c;
}

Concept Concept::conj(std::vector<Concept> parts) {
    std::vector<Concept> flat;
    for (auto& p : parts) {
        if (p.kind_ == Kind::And) {
            for (auto& q : p.children_) flat.push_back(std::move(q));
        } else if (p.kind_ != Kind::Top) {
            flat.push_back(std::move(p));
        }
    }
    std::sort(flat.begin(), flat.end());
    flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
    if (flat.empty()) return top();
    if (flat.size() == 1) return std::move(flat.front());
    Concept c;
    c.kind_ = Kind::And;
    c.children_ = std::move(flat);
    c.render();
    return c;
}

void Concept::render() {
    switch (kind_) {
        case Kind::Top: text_ = "top"; break;
        case Kind::Bottom: text_ = "bot"; break;
        case Kind::Name: text_ = name_; break;
        case Kind::Exists: {
            const Concept& f = children_.front();
            if (f.is_top()) {
                text_ = "exists " + role_.str();
            } else if (f.kind_ == Kind::And) {
                text_ = "exists " + role_.str() + " . (" + f.text_ + ")";
            } else {
                text_ = "exists " + role_.str() + " . " + f.text_;
            }
            break;
        }
        case Kind::And: {
            text_.clear();
            for (const auto& c : children_) {
                if (!text_.empty()) text_ += " and ";
                text_ += c.text_;
            }
            break;
        }
    }
}

NegRoleInclusion make_neg_ri(Role a, Role b) {
    if (b < a) std::swap(a, b);
    return {std::move(a), std::move(b)};
}

using detail::Overloaded;

std::string render(const Axiom& a) {
    return std::visit(
        Overloaded{
            [](const ConceptAssertion& x) { return x.cls.str() + "(" + x.individual + ")"; },
            [](const RoleAssertion& x) { return x.role + "(" + x.subject + "," + x.object + ")"; },
            [](const Gci& x) { return x.lhs.str() + " <= " + x.rhs.str(); },
            [](const RoleInclusion& x) { return x.sub.str() + " <= " + x.super.str(); },
            [](const NegRoleInclusion& x) {
                return x.first.str() + " and " + x.second.str() + " <= bot";
            },
        },
        a);
}

bool is_assertion(const Axiom& a) {
    return std::holds_alternative<ConceptAssertion>(a) || std::holds_alternative<RoleAssertion>(a);
}

bool is_valid_rhs(const Concept& c) {
    return c.is_name() || c.is_bottom() ||
           (c.kind() == Concept::Kind::Exists && c.filler().is_top());
}

bool is_valid_lhs(const Concept& c) {
    switch (c.kind()) {
        case Concept::Kind::Top:
        case Concept::Kind::Name: return true;
        case Concept::Kind::Bottom: return false;
        case Concept::Kind::Exists: return is_valid_lhs(c.filler());
        case Concept::Kind::And:
            return std::all_of(c.conjuncts().begin(), c.conjuncts().end(),
                               [](const Concept& x) { return is_valid_lhs(x); });
    }
    return false;
}

bool is_normal_gci(const Gci& g) {
    const Concept& l = g.lhs;
    const Concept& r = g.rhs;
    bool rhs_name = r.is_name() || r.is_bottom();
    if (l.is_atomic()) return rhs_name || (r.kind() == Concept::Kind::Exists && r.filler().is_top());
    if (!rhs_name) return false;
    if (l.kind() == Concept::Kind::And)
        return l.conjuncts().size() == 2 && l.conjuncts()[0].is_name() && l.conjuncts()[1].is_name();
    if (l.kind() == Concept::Kind::Exists) return l.filler().is_atomic();
    return false;
}

bool AnnotatedOntology::add(Axiom axiom, Monomial annotation) {
    if (index_.count(axiom)) return false;
    index_.emplace(axiom, axioms_.size());
    axioms_.push_back({std::move(axiom), std::move(annotation)});
    return true;
}

const Monomial* AnnotatedOntology::annotation_of(const Axiom& a) const {
    auto it = index_.find(a);
    return it == index_.end() ? nullptr : &axioms_[it->second].annotation;
}

AnnotatedOntology AnnotatedOntology::merged(const AnnotatedOntology& other) const {
    AnnotatedOntology out = *this;
    for (const auto& a : other.axioms_) out.add(a);
    return out;
}

std::string AnnotatedOntology::str() const {
    std::string out;
    for (const auto& a : axioms_) out += render(a.axiom) + " @ " + a.annotation.str() + "\n";
    return out;
}

void collect_symbols(const Concept& c, Vocabulary& out) {
    switch (c.kind()) {
        case Concept::Kind::Top:
        case Concept::Kind::Bottom: break;
        case Concept::Kind::Name: out.concepts.insert(c.concept_name()); break;
        case Concept::Kind::Exists:
            out.roles.insert(c.role().name);
            collect_symbols(c.filler(), out);
            break;
        case Concept::Kind::And:
            for (const auto& x : c.conjuncts()) collect_symbols(x, out);
            break;
    }
}

Vocabulary vocabulary(const AnnotatedOntology& o) {
    Vocabulary v;
    for (const auto& a : o.axioms()) {
        v.variables.insert(a.annotation.vars().begin(), a.annotation.vars().end());
        std::visit(Overloaded{
                       [&](const ConceptAssertion& x) {
                           collect_symbols(x.cls, v);
                           v.individuals.insert(x.individual);
                       },
                       [&](const RoleAssertion& x) {
                           v.roles.insert(x.role);
                           v.individuals.insert(x.subject);
                           v.individuals.insert(x.object);
                       },
                       [&](const Gci& x) {
                           collect_symbols(x.lhs, v);
                           collect_symbols(x.rhs, v);
                       },
                       [&](const RoleInclusion& x) {
                           v.roles.insert(x.sub.name);
                           v.roles.insert(x.super.name);
                       },
                       [&](const NegRoleInclusion& x) {
                           v.roles.insert(x.first.name);
                           v.roles.insert(x.second.name);
                       },
                   },
                   a.axiom);
    }
    return v;
}

std::string to_string(Profile p) {
    switch (p) {
        case Profile::General: return "General";
        case Profile::NormalForm: return "NormalForm";
        case Profile::ELHIrestr: return "ELHIrestr";
    }
    return "General";
}

}  // namespace elprov
