#include "elprov/normalize.hpp"

#include <algorithm>
#include <string>

#include "fresh.hpp"

namespace elprov {

namespace {

using detail::first_free;

class Rewriter {
public:
    explicit Rewriter(const AnnotatedOntology& o) {
        Vocabulary v = vocabulary(o);
        next_concept_ = first_free(v.concepts, "_nf");
        next_role_ = first_free(v.roles, "_nfS");
    }

    Concept fresh_concept() { return Concept::name("_nf" + std::to_string(next_concept_++)); }
    Role fresh_role() { return {"_nfS" + std::to_string(next_role_++), false}; }

    // Adds (lhs <= rhs, m). An axiom already present with another annotation
    // is routed through a fresh name so both annotations survive.
    void emit(Concept lhs, Concept rhs, const Monomial& m) {
        Gci g{lhs, rhs};
        if (const Monomial* have = out.annotation_of(g)) {
            if (*have == m) return;
            Concept mid = fresh_concept();
            out.add(Gci{std::move(lhs), mid}, m);
            out.add(Gci{mid, std::move(rhs)}, Monomial{});
            return;
        }
        out.add(std::move(g), m);
    }

    // Returns an equivalent left side of shape A, A and A', or exists P . A.
    Concept flatten_lhs(const Concept& c) {
        switch (c.kind()) {
            case Concept::Kind::Top:
            case Concept::Kind::Bottom:
            case Concept::Kind::Name: return c;
            case Concept::Kind::Exists: return Concept::exists(c.role(), to_name(c.filler()));
            case Concept::Kind::And: {
                std::vector<Concept> names;
                for (const auto& part : c.conjuncts()) names.push_back(to_name(part));
                Concept acc = Concept::conj({names.begin(), names.end()});
                if (acc.kind() != Concept::Kind::And || acc.conjuncts().size() <= 2) return acc;
                std::vector<Concept> rest = acc.conjuncts();
                acc = Concept::conj({rest[0], rest[1]});
                for (std::size_t i = 2; i < rest.size(); ++i) {
                    Concept a = fresh_concept();
                    emit(acc, a, {});
                    acc = Concept::conj({a, rest[i]});
                }
                return acc;
            }
        }
        return c;
    }

    Concept to_name(const Concept& c) {
        if (c.is_atomic()) return c;
        Concept flat = flatten_lhs(c);
        Concept a = fresh_concept();
        emit(flat, a, {});
        return a;
    }

    void gci(const Gci& g, const Monomial& m) {
        if (g.rhs.kind() == Concept::Kind::Exists) {
            emit(to_name(g.lhs), g.rhs, m);
        } else {
            emit(flatten_lhs(g.lhs), g.rhs, m);
        }
    }

    void desugar(const Concept& lhs, const Concept& rhs, const Monomial& m) {
        switch (rhs.kind()) {
            case Concept::Kind::Top: return;
            case Concept::Kind::And:
                for (const auto& part : rhs.conjuncts()) desugar(lhs, part, m);
                return;
            case Concept::Kind::Exists:
                if (!rhs.filler().is_top()) {
                    Role s = fresh_role();
                    emit(lhs, Concept::exists(s), m);
                    out.add(RoleInclusion{s, rhs.role()}, Monomial{});
                    desugar(Concept::exists(s.inv()), rhs.filler(), {});
                    return;
                }
                break;
            default: break;
        }
        emit(lhs, rhs, m);
    }

    AnnotatedOntology out;

private:
    std::size_t next_concept_ = 0;
    std::size_t next_role_ = 0;
};

}  // namespace

AnnotatedOntology normalize(const AnnotatedOntology& o) {
    Rewriter rw(o);
    for (const auto& a : o.axioms()) {
        if (const auto* g = std::get_if<Gci>(&a.axiom)) {
            rw.gci(*g, a.annotation);
        } else {
            rw.out.add(a);
        }
    }
    return std::move(rw.out);
}

AnnotatedOntology desugar_rhs(const AnnotatedOntology& o) {
    Rewriter rw(o);
    for (const auto& a : o.axioms()) {
        if (const auto* g = std::get_if<Gci>(&a.axiom)) {
            rw.desugar(g->lhs, g->rhs, a.annotation);
        } else {
            rw.out.add(a);
        }
    }
    return std::move(rw.out);
}

}  // namespace elprov
