#include <doctest.h>

#include <random>

#include "elprov/entail.hpp"
#include "elprov/errors.hpp"
#include "elprov/normalize.hpp"
#include "elprov/oracle.hpp"
#include "elprov/profile.hpp"
#include "elprov/saturate.hpp"
#include "fixtures.hpp"

using namespace elprov;
using fx::mono;
using fx::poly;

namespace {

std::set<Monomial> monos(std::initializer_list<const char*> texts) {
    std::set<Monomial> out;
    for (const char* t : texts) out.insert(mono(t));
    return out;
}

Gci gci(const std::string& a, const std::string& b) { return Gci{Concept::name(a), Concept::name(b)}; }

// Axioms of o whose variables lie in m.
AnnotatedOntology restrict_to(const AnnotatedOntology& o, const Monomial& m) {
    AnnotatedOntology out;
    for (const auto& a : o.axioms())
        if (a.annotation.subset_of(m)) out.add(a);
    return out;
}

}  // namespace

TEST_SUITE("saturate") {

TEST_CASE("init_set") {
    auto s = init_set(fx::cyc());
    for (const char* c : {"A", "B"}) CHECK(s.find(gci(c, c)) != nullptr);
    CHECK(s.contains(Gci{Concept::top(), Concept::top()}));
    CHECK(s.contains(Gci{Concept::bottom(), Concept::bottom()}));
    CHECK(*s.find(gci("A", "B")) == monos({"x1"}));
    CHECK_FALSE(s.contains(Gci{Concept::name("A"), Concept::top()}));

    auto r = init_set(parse_ontology("R(a,b) @ x\n"));
    CHECK(r.contains(ConceptAssertion{Concept::top(), "a"}));
    CHECK(r.contains(ConceptAssertion{Concept::top(), "b"}));
    for (bool inv : {false, true}) {
        Role R{"R", inv};
        CHECK(r.contains(RoleInclusion{R, R}));
        CHECK(r.contains(Gci{Concept::exists(R, Concept::bottom()), Concept::bottom()}));
    }

    auto n = init_set(parse_ontology("P and Q- <= bot @ x\n"));
    CHECK(*n.find(make_neg_ri(Role{"P", true}, Role{"Q"})) == monos({"x"}));
    CHECK_THROWS_AS(init_set(parse_ontology("exists R . (A and B) <= C @ x\n")), NotNormalForm);
}

TEST_CASE("saturate on the small fixtures") {
    CHECK(*saturate(fx::cyc()).find(gci("A", "B")) == monos({"x1", "x1*x2"}));
    CHECK(*saturate(fx::idem()).find(gci("A", "C")) == monos({"x1*x2*x3"}));
    CHECK(*saturate(fx::exp_onto(2)).find(gci("B", "A")) ==
          monos({"u", "u*u1*v1", "u*u2*v2", "u*u1*u2*v1*v2"}));
}

TEST_CASE("saturate_k") {
    auto e = fx::exp_onto(2);
    auto full = saturate(e);
    auto bounded = saturate_k(e, 5);
    for (const auto& [ax, ms] : full.entries()) {
        if (is_assertion(ax)) continue;
        std::set<Monomial> small;
        for (const auto& m : ms)
            if (m.size() <= 5) small.insert(m);
        const auto* got = bounded.find(ax);
        CHECK(got != nullptr);
        if (got) CHECK(*got == small);
    }
    // The bounded rules only join conjunctions on the left of a plain
    // subsumption, so A <= C itself is not derived; instances still are.
    CHECK(saturate_k(fx::idem(), 3).find(gci("A", "C")) == nullptr);
    auto idem_a = fx::idem();
    idem_a.add(ConceptAssertion{Concept::name("A"), "a"}, Monomial{"w"});
    auto bounded4 = saturate_k(idem_a, 4);
    const auto* ca = bounded4.find(ConceptAssertion{Concept::name("C"), "a"});
    REQUIRE(ca != nullptr);
    CHECK(*ca == monos({"w*x1*x2*x3"}));
    CHECK(saturate_k(idem_a, 3).find(ConceptAssertion{Concept::name("C"), "a"}) == nullptr);
    CHECK(*saturate_k(fx::cyc(), 1).find(gci("A", "B")) == monos({"x1"}));
    CHECK_THROWS_AS(saturate_k(fx::cyc(), 0), Error);
    CHECK_THROWS_AS(saturate_k(parse_ontology("exists R- . A <= B @ x1\nC <= exists R @ x2\n"), 2), NotELHIrestr);
}

TEST_CASE("satisfiability") {
    CHECK_FALSE(is_satisfiable(fx::unsat()));
    CHECK(is_satisfiable(fx::dio()));
    CHECK(is_satisfiable(AnnotatedOntology{}));
    auto s = saturate(fx::unsat());
    CHECK(s.has_clash());
    CHECK(s.clash_witness() == "a");
}

TEST_CASE("text dump") {
    CHECK(saturate(fx::cyc()).str().find("A <= B @ x1 | x1*x2\n") != std::string::npos);
}

TEST_CASE("property: saturation is monotone and sound") {
    std::mt19937 rng(41);
    for (int i = 0; i < 60; ++i) {
        auto o = fx::random_normal(rng);
        auto s = saturate(o);
        AnnotatedOntology bigger = o;
        auto extra = fx::random_normal(rng);
        for (const auto& a : extra.axioms()) {
            AnnotatedAxiom renamed = a;
            renamed.annotation = Monomial{"w" + a.annotation.str()};
            bigger.add(renamed);
        }
        auto sb = saturate(bigger);
        for (const auto& [ax, ms] : s.entries()) {
            const auto* got = sb.find(ax);
            REQUIRE(got != nullptr);
            for (const auto& m : ms) CHECK(got->count(m));
        }
        for (const auto& [ax, ms] : s.entries()) {
            if (!is_assertion(ax)) continue;
            const auto* ca = std::get_if<ConceptAssertion>(&ax);
            if (ca && ca->cls.is_top()) continue;
            for (const auto& m : ms) {
                CHECK(m.size() <= o.size());
                CHECK(brute_classical_entails(restrict_to(o, m), ax));
            }
        }
    }
}

}  // TEST_SUITE

TEST_SUITE("entail") {

TEST_CASE("assertion provenance") {
    auto o = fx::dio();
    CHECK(assertion_provenance(o, fx::axiom(o, "Deity(dionysus)")).str() == "x1 + x3*x4*y1*y2 + x5*x6*y1*y3");
    CHECK(assertion_provenance(o, fx::axiom(o, "Deity(semele)")).is_zero());
    auto u = fx::unsat();
    CHECK(assertion_provenance(u, fx::axiom(u, "B(bfresh)")).is_top());
}

TEST_CASE("reduce_to_assertion") {
    auto o = fx::idem();
    auto r = reduce_to_assertion(o, gci("A", "C"));
    CHECK(r.carrier == Monomial{"_v0"});
    CHECK(r.fresh_vars == std::set<Variable>{"_v0"});
    CHECK(render(r.target) == "_nfE(_i0)");
    CHECK(r.ontology.contains(ConceptAssertion{Concept::name("A"), "_i0"}));
    CHECK(*r.ontology.annotation_of(gci("C", "_nfE")) == Monomial{});

    auto e = parse_ontology("R(c,d) @ x1\nB <= D @ x2\n");
    auto g = reduce_to_assertion(e, Gci{Concept::exists(Role{"R"}, Concept::name("B")), Concept::name("D")});
    CHECK(g.carrier == mono("_v0*_v1"));
    CHECK(g.ontology.contains(RoleAssertion{"R", "_i0", "_i1"}));
    CHECK(g.ontology.contains(ConceptAssertion{Concept::name("B"), "_i1"}));

    auto ri = parse_ontology("R(c,d) @ x0\nR <= S @ x1\n");
    auto rr = reduce_to_assertion(ri, RoleInclusion{Role{"R"}, Role{"S"}});
    CHECK(rr.carrier.is_unit());
    CHECK(std::get<RoleAssertion>(rr.target) == RoleAssertion{"S", "_i0", "_i1"});
    CHECK(*rr.ontology.annotation_of(RoleAssertion{"R", "_i0", "_i1"}) == Monomial{});
    CHECK_THROWS_AS(reduce_to_assertion(ri, make_neg_ri(Role{"R"}, Role{"S"})), UnsupportedAxiom);
}

TEST_CASE("axiom provenance") {
    CHECK(axiom_provenance(fx::idem(), gci("A", "C")).str() == "x1*x2*x3");
    CHECK(axiom_provenance(fx::cyc(), gci("A", "B")).str() == "x1 + x1*x2");
    CHECK(axiom_provenance(parse_ontology("A <= B @ x1\n"), gci("B", "A")).is_zero());
    auto u = fx::unsat();
    CHECK(axiom_provenance(u, gci("B", "A")).is_top());
    auto lhs = parse_ontology("A and B <= bot @ x1\nC <= D @ x2\n");
    CHECK(axiom_provenance(lhs, Gci{Concept::conj({Concept::name("A"), Concept::name("B")}), Concept::name("D")})
              .is_top());
    auto neg = parse_ontology("R <= S @ x1\nS and T- <= bot @ x2\n");
    CHECK(axiom_provenance(neg, make_neg_ri(Role{"R"}, Role{"T", true})).is_top());
    CHECK(axiom_provenance(neg, make_neg_ri(Role{"R", true}, Role{"T"})).is_top());
    CHECK(axiom_provenance(neg, make_neg_ri(Role{"R"}, Role{"S"})).is_zero());
    auto ri = parse_ontology("R <= S @ x1\nS <= T- @ x2\n");
    CHECK(axiom_provenance(ri, RoleInclusion{Role{"R"}, Role{"T", true}}).str() == "x1*x2");
    CHECK(axiom_provenance(ri, RoleInclusion{Role{"R", true}, Role{"T"}}).str() == "x1*x2");
    CHECK(axiom_provenance(ri, RoleInclusion{Role{"T"}, Role{"R"}}).is_zero());
}

TEST_CASE("entails_annotated") {
    auto o = fx::dio();
    auto d = fx::axiom(o, "Deity(dionysus)");
    CHECK(entails_annotated(o, d, {"x1"}));
    CHECK_FALSE(entails_annotated(o, d, {"x2"}));
    CHECK(entails_annotated(o, d, mono("x3*x4*y1*y2")));
    auto u = fx::unsat();
    CHECK(entails_annotated(u, fx::axiom(u, "B(a)"), {"zz"}));
}

TEST_CASE("property: saturate_k agrees with filtered saturate on restricted inputs") {
    std::mt19937 rng(8);
    int tested = 0;
    for (int i = 0; i < 150 && tested < 40; ++i) {
        auto o = fx::random_normal(rng);
        if (check_profile(o) != Profile::ELHIrestr) continue;
        ++tested;
        auto full = saturate(o);
        for (std::size_t k : {1, 2, 3}) {
            auto bounded = saturate_k(o, k);
            for (const auto& [ax, ms] : full.entries()) {
                if (!is_assertion(ax)) continue;
                std::set<Monomial> want;
                for (const auto& m : ms)
                    if (m.size() <= k) want.insert(m);
                const auto* got = bounded.find(ax);
                CHECK((got ? *got : std::set<Monomial>{}) == want);
            }
        }
    }
    CHECK(tested >= 20);
}

TEST_CASE("property: zero provenance iff the oracle finds no entailment") {
    std::mt19937 rng(99);
    for (int i = 0; i < 60; ++i) {
        auto o = fx::random_normal(rng);
        auto voc = vocabulary(o);
        for (const auto& a : voc.concepts) {
            for (const auto& b : voc.concepts) {
                Gci g = gci(a, b);
                bool zero = axiom_provenance(o, g).is_zero();
                CHECK(zero == !brute_classical_entails(o, g));
            }
            for (const auto& ind : voc.individuals) {
                Axiom ca = ConceptAssertion{Concept::name(a), ind};
                CHECK(assertion_provenance(o, ca).is_zero() == !brute_classical_entails(o, ca));
            }
        }
    }
}

}  // TEST_SUITE
