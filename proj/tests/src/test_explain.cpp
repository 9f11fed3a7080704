#include <doctest.h>

#include <iterator>
#include <random>
#include <sstream>

#include "elprov/entail.hpp"
#include "elprov/errors.hpp"
#include "elprov/explain.hpp"
#include "elprov/oracle.hpp"
#include "elprov/saturate.hpp"
#include "fixtures.hpp"

using namespace elprov;
using fx::mono;

namespace {

// Frozen output of tests/oracle/derive.py, keyed by its line labels.
std::string derived(const std::string& label) {
    std::istringstream in(fx::slurp("derived.txt"));
    for (std::string line; std::getline(in, line);)
        if (line.rfind(label + ": ", 0) == 0) return line.substr(label.size() + 2);
    FAIL("no frozen value for " << label);
    return {};
}

// Justifications as a sum of variable products, for comparison with the
// frozen values.
std::string as_sum(const std::vector<Justification>& js) {
    WhyPolynomial p;
    for (const auto& j : js) {
        std::vector<Variable> vs;
        for (const auto& a : j) vs.insert(vs.end(), a.annotation.vars().begin(), a.annotation.vars().end());
        p.add(Monomial(std::move(vs)));
    }
    return p.str();
}

Axiom ax(const AnnotatedOntology& o, const std::string& text) { return fx::axiom(o, text); }

// Entailed named-concept assertions of o, in saturation order.
std::vector<Axiom> entailed_assertions(const AnnotatedOntology& o) {
    std::vector<Axiom> out;
    auto sat = saturate(o);
    for (const auto& [a, ms] : sat.entries()) {
        const auto* ca = std::get_if<ConceptAssertion>(&a);
        if (ca && ca->cls.kind() == Concept::Kind::Name && !ms.empty()) out.push_back(a);
        if (std::holds_alternative<RoleAssertion>(a) && !ms.empty()) out.push_back(a);
    }
    return out;
}

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("justifications on the fixtures") {
    auto o = fx::dio();
    auto js = justifications(o, ax(o, "Deity(dionysus)"));
    CHECK(as_sum(js) == derived("dio Deity(dionysus)"));
    REQUIRE(js.size() == 3);
    CHECK(render(js[0]) == "{Deity(dionysus)}");
    CHECK(render(js[2]) == "{mother(dionysus,demeter); Deity(demeter); exists parent . Deity <= Deity; mother <= parent}");
    CHECK(as_sum(justifications(o, QueryGoal{fx::q_dio(), {"dionysus"}})) == derived("dio q(dionysus)"));
    CHECK(as_sum(justifications(fx::cyc(), ax(fx::cyc(), "A <= B"))) == derived("cyc A <= B"));
    CHECK(as_sum(justifications(fx::idem(), ax(fx::idem(), "A <= C"))) == derived("idem A <= C"));
    CHECK(justifications(o, ax(o, "Deity(semele)")).empty());
}

TEST_CASE("static axioms are erased") {
    auto o = fx::dio();
    auto js = justifications(o, ax(o, "Deity(dionysus)"), {"y1", "y2", "y3"});
    REQUIRE(js.size() == 3);
    CHECK(render(js[1]) == "{father(dionysus,zeus); Deity(zeus)}");
    auto all = justifications(o, ax(o, "Deity(dionysus)"), {"x1"});
    REQUIRE(all.size() == 1);
    CHECK(render(all[0]) == "{}");
}

TEST_CASE("justification errors") {
    CHECK_THROWS_AS(justifications(fx::unsat(), ax(fx::unsat(), "B(a)")), UnsatisfiableOntology);
    auto lhs = parse_ontology("A and B <= bot @ x1\nC <= D @ x2\n");
    CHECK_THROWS_AS(justifications(lhs, Gci{Concept::conj({Concept::name("A"), Concept::name("B")}), Concept::name("D")}),
                    UnsatisfiableLHS);
}

TEST_CASE("linsat and lineage") {
    auto o = fx::dio();
    auto lin = linsat(o);
    CHECK(lin.at(ax(o, "Deity(dionysus)")).str() == "x1*x3*x4*x5*x6*y1*y2*y3");
    std::istringstream frozen(derived("dio lineage Deity(dionysus)"));
    std::set<Variable> want{std::istream_iterator<std::string>(frozen), {}};
    CHECK(lineage(o, ax(o, "Deity(dionysus)")).vars == want);
    CHECK(lineage(o, ax(o, "Deity(semele)")).kind == Lineage::Kind::Zero);

    for (int n : {2, 3}) {
        auto e = fx::exp_onto(n);
        std::vector<Variable> all{"u"};
        for (int i = 1; i <= n; ++i) {
            all.push_back("u" + std::to_string(i));
            all.push_back("v" + std::to_string(i));
        }
        CHECK(linsat(e).at(ax(e, "B <= A")) == Monomial(all));
        CHECK(lineage(e, ax(e, "B <= A")).vars == std::set<Variable>(all.begin(), all.end()));
    }
    auto single = parse_ontology("A(a) @ x\n");
    CHECK(linsat(single).at(ax(single, "A(a)")) == Monomial{"x"});
    CHECK_THROWS_AS(linsat(fx::unsat()), UnsatisfiableOntology);
    CHECK_THROWS_AS(lineage(fx::unsat(), ax(fx::unsat(), "A(a)")), UnsatisfiableOntology);
}

TEST_CASE("is_relevant") {
    auto o = fx::dio();
    CHECK(is_relevant(fx::cyc(), ax(fx::cyc(), "A <= B"), "x2"));
    CHECK_FALSE(is_relevant(o, ax(o, "Deity(dionysus)"), "x2"));
    CHECK(is_relevant(o, ax(o, "Deity(dionysus)"), "y3"));
    CHECK_FALSE(is_relevant(o, ax(o, "Deity(dionysus)"), "nowhere"));
}

TEST_CASE("ncut") {
    auto o = fx::dio();
    auto val = fx::dio_fuzzy();
    CHECK(std::to_string(ncut(o, 0.9, val).size()) == derived("dio ncut 0.9 size"));
    CHECK(ncut(o, 0, val) == o);
    CHECK(ncut(o, 1.01, val).size() == 0);
    CHECK_THROWS_AS(ncut(o, 0.5, Valuation{{"x1", 0.9}}), MissingValuation);
}

TEST_CASE("property: linsat is the flattened Why provenance") {
    std::mt19937 rng(31);
    for (int i = 0; i < 80; ++i) {
        auto o = fx::random_normal(rng);
        auto lin = linsat(o);
        for (const auto& a : entailed_assertions(o)) {
            Lineage want = flatten(assertion_provenance(o, a));
            REQUIRE(lin.count(a));
            CHECK(std::set<Variable>(lin.at(a).vars().begin(), lin.at(a).vars().end()) == want.vars);
        }
    }
}

TEST_CASE("property: justifications match the oracle and lie inside the lineage") {
    std::mt19937 rng(57);
    for (int i = 0; i < 60; ++i) {
        auto o = fx::random_normal(rng);
        for (const auto& a : entailed_assertions(o)) {
            auto js = justifications(o, a);
            CHECK(js == brute_justifications(o, a));
            auto lin = lineage(o, a);
            for (const auto& j : js)
                for (const auto& x : j)
                    for (const auto& v : x.annotation.vars()) CHECK(lin.vars.count(v));
        }
    }
}

}  // TEST_SUITE

TEST_SUITE("oracle") {

TEST_CASE("brute_classical_entails") {
    auto s = parse_ontology("A(a) @ x1\nA <= B @ x2\n");
    CHECK(brute_classical_entails(s, ax(s, "B(a)")));
    CHECK_FALSE(brute_classical_entails(AnnotatedOntology{}, Axiom{ConceptAssertion{Concept::name("A"), "a"}}));
    auto o = fx::dio();
    AnnotatedOntology rest;
    for (const auto& a : o.axioms())
        if (a.annotation != Monomial{"x1"}) rest.add(a);
    CHECK(brute_classical_entails(rest, ax(o, "Deity(dionysus)")));
    CHECK(brute_classical_entails(o, QueryGoal{fx::q_dio(), {"dionysus"}}));
    CHECK_FALSE(brute_classical_entails(o, QueryGoal{fx::q_dio(), {"semele"}}));
    CHECK(brute_classical_entails(fx::idem(), ax(fx::idem(), "A <= C")));
    CHECK(brute_classical_entails(fx::pb(), ax(fx::pb(), "B <= C")));
}

TEST_CASE("brute_justifications") {
    auto c = fx::cyc();
    auto js = brute_justifications(c, ax(c, "A <= B"));
    REQUIRE(js.size() == 1);
    CHECK(render(js[0]) == "{A <= B}");
    auto o = fx::dio();
    CHECK(as_sum(brute_justifications(o, ax(o, "Deity(dionysus)"))) == derived("dio Deity(dionysus)"));
    CHECK(brute_justifications(o, ax(o, "Deity(semele)")).empty());
}

TEST_CASE("bound") {
    auto big = fx::exp_onto(6);  // 13 axioms
    CHECK_THROWS_AS(brute_justifications(big, ax(big, "B <= A")), BoundExceeded);
    CHECK_NOTHROW(brute_classical_entails(big, ax(big, "B <= A"), OracleOptions{13}));
}

}  // TEST_SUITE
