#include <doctest.h>

#include <cmath>
#include <random>

#include "elprov/errors.hpp"
#include "elprov/semiring.hpp"
#include "fixtures.hpp"

using namespace elprov;
using fx::mono;
using fx::poly;

namespace {

WhyPolynomial random_poly(std::mt19937& rng, int vars = 6, int max_monos = 4) {
    std::uniform_int_distribution<int> count(0, max_monos);
    std::bernoulli_distribution coin(0.35);
    WhyPolynomial p;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        std::vector<Variable> vs;
        for (int v = 1; v <= vars; ++v)
            if (coin(rng)) vs.push_back("x" + std::to_string(v));
        p.add(Monomial(std::move(vs)));
    }
    return p;
}

}  // namespace

TEST_SUITE("semiring") {

TEST_CASE("mono_times is set union") {
    CHECK(mono_times({}, {"x1"}) == Monomial{"x1"});
    CHECK(mono_times({"x1", "y2"}, {"x1", "y1"}).str() == "x1*y1*y2");
    CHECK(mono_times({"x3", "x4"}, {"y1", "y2"}).str() == "x3*x4*y1*y2");
}

TEST_CASE("poly_plus") {
    CHECK(poly_plus(WhyPolynomial::zero(), poly("x1")) == poly("x1"));
    CHECK(poly_plus(poly("x1"), poly("x1")) == poly("x1"));
    CHECK(poly_plus(WhyPolynomial::top(), poly("x1")).is_top());
}

TEST_CASE("poly_times") {
    CHECK(poly_times(poly("x1 + y1"), poly("x2")).str() == "x1*x2 + x2*y1");
    CHECK(poly_times(WhyPolynomial::zero(), WhyPolynomial::top()).is_zero());
    CHECK(poly_times(WhyPolynomial::top(), WhyPolynomial::zero()).is_zero());
    CHECK(poly_times(WhyPolynomial::top(), poly("x1")).is_top());
    CHECK(poly_times(poly("x1 + x2"), poly("x1")).str() == "x1 + x1*x2");
}

TEST_CASE("minimize keeps minimal monomials") {
    CHECK(minimize(poly("x1 + x1*x2")).str() == "x1");
    auto p = poly("x1 + x3*x4*y1*y2 + x5*x6*y1*y3");
    CHECK(minimize(p) == p);
    CHECK(minimize(WhyPolynomial::zero()).is_zero());
    CHECK(minimize(WhyPolynomial::top()).is_top());
}

TEST_CASE("flatten") {
    CHECK(flatten(poly("x1 + x3*x4*y1*y2 + x5*x6*y1*y3")).str() == "{x1, x3, x4, x5, x6, y1, y2, y3}");
    CHECK(flatten(WhyPolynomial::zero()).kind == Lineage::Kind::Zero);
    CHECK(flatten(WhyPolynomial::top()).kind == Lineage::Kind::Top);
    Lineage unit = flatten(WhyPolynomial::one());
    CHECK(unit.kind == Lineage::Kind::Vars);
    CHECK(unit.vars.empty());
}

TEST_CASE("text forms") {
    CHECK(WhyPolynomial::zero().str() == "0");
    CHECK(WhyPolynomial::one().str() == "1");
    CHECK(WhyPolynomial::top().str() == "TOP");
    CHECK(poly("y1 + x2*x1").str() == "x1*x2 + y1");
}

TEST_CASE("builtin semirings") {
    CHECK(builtin_semiring("fuzzy").times(0.9, 0.2) == 0.2);
    CHECK(builtin_semiring("tropical").plus(6, 12) == 6);
    auto access = builtin_semiring("access");
    CHECK(access.times(*access.parse_value("P"), *access.parse_value("S")) == *access.parse_value("S"));
    CHECK(access.format_value(*access.parse_value("S")) == "S");
    CHECK_THROWS_AS(builtin_semiring("nat"), UnknownSemiring);
    for (const char* name : {"fuzzy", "viterbi", "tropical", "access", "boolean"}) {
        auto s = builtin_semiring(name);
        CHECK(s.flags.plus_idempotent);
        CHECK(s.sum_of_all.has_value());
    }
    CHECK(builtin_semiring("fuzzy").flags.times_idempotent);
    CHECK(builtin_semiring("access").flags.times_idempotent);
    CHECK(builtin_semiring("boolean").flags.times_idempotent);
    CHECK_FALSE(builtin_semiring("tropical").flags.times_idempotent);
    CHECK_FALSE(builtin_semiring("viterbi").flags.times_idempotent);
}

TEST_CASE("evaluate") {
    auto p = poly("x1 + x3*x4*y1*y2 + x5*x6*y1*y3");
    CHECK(evaluate(p, builtin_semiring("fuzzy"), fx::dio_fuzzy()) == doctest::Approx(0.9).epsilon(1e-12));
    // The tropical image of the Why polynomial; evaluate itself refuses the target.
    CHECK(evaluate_unchecked(p, builtin_semiring("tropical"), fx::dio_tropical()) == 1);
    CHECK_THROWS_AS(evaluate(p, builtin_semiring("tropical"), fx::dio_tropical()), FlagViolation);
    CHECK(evaluate(WhyPolynomial::zero(), builtin_semiring("fuzzy"), {}) == 0);
    CHECK(evaluate(WhyPolynomial::top(), builtin_semiring("fuzzy"), {}) == 1);
    CHECK(evaluate_unchecked(WhyPolynomial::top(), builtin_semiring("tropical"), {}) == 0);
    CHECK_THROWS_AS(evaluate(poly("x1"), builtin_semiring("fuzzy"), {}), MissingValuation);
}

TEST_CASE("property: Why[X] laws on random polynomials") {
    std::mt19937 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto p = random_poly(rng), q = random_poly(rng), r = random_poly(rng);
        CHECK(poly_plus(p, q) == poly_plus(q, p));
        CHECK(poly_times(p, q) == poly_times(q, p));
        CHECK(poly_plus(poly_plus(p, q), r) == poly_plus(p, poly_plus(q, r)));
        CHECK(poly_times(poly_times(p, q), r) == poly_times(p, poly_times(q, r)));
        CHECK(poly_times(p, poly_plus(q, r)) == poly_plus(poly_times(p, q), poly_times(p, r)));
        auto mp = minimize(p);
        CHECK(minimize(mp) == mp);
        for (const auto& m : mp.monomials()) CHECK(p.monomials().count(m));
        if (!p.is_zero() && !q.is_zero()) {
            auto fp = flatten(p).vars, fq = flatten(q).vars;
            fp.insert(fq.begin(), fq.end());
            CHECK(flatten(poly_plus(p, q)).vars == fp);
            CHECK(flatten(poly_times(p, q)).vars == fp);
        }
        for (const auto& m : p.monomials()) {
            CHECK(mono_times(m, {}) == m);
            CHECK(mono_times(m, m) == m);
        }
    }
}

}  // TEST_SUITE
