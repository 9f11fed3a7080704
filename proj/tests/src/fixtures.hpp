#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "elprov/explain.hpp"
#include "elprov/model.hpp"
#include "elprov/textio.hpp"

#ifndef ELPROV_TEST_DATA
#error "ELPROV_TEST_DATA must point at tests/data"
#endif

namespace fx {

using namespace elprov;

inline std::string data_path(const std::string& name) { return std::string(ELPROV_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& name) {
    std::ifstream in(data_path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline AnnotatedOntology load(const std::string& name) { return parse_ontology(slurp(name)); }

inline AnnotatedOntology dio() { return load("dio.onto"); }
inline AnnotatedOntology cyc() { return load("cyc.onto"); }
inline AnnotatedOntology idem() { return load("idem.onto"); }
inline AnnotatedOntology unsat() { return load("unsat.onto"); }
inline AnnotatedOntology pb() { return load("pb.onto"); }
inline Valuation dio_fuzzy() { return parse_valuation(slurp("dio_fuzzy.val")); }
inline Valuation dio_tropical() { return parse_valuation(slurp("dio_tropical.val")); }
inline ConjunctiveQuery q_dio() { return parse_query(slurp("dio.cq")); }

// {(A <= Ai, vi), (Ai <= B, ui) | 1 <= i <= n} plus (B <= A, u).
inline AnnotatedOntology exp_onto(int n) {
    std::string text;
    for (int i = 1; i <= n; ++i) {
        std::string k = std::to_string(i);
        text += "A <= A" + k + " @ v" + k + "\n";
        text += "A" + k + " <= B @ u" + k + "\n";
    }
    text += "B <= A @ u\n";
    return parse_ontology(text);
}

inline Axiom axiom(const AnnotatedOntology& o, const std::string& text) { return parse_axiom(text, vocabulary(o)); }

inline Monomial mono(const std::string& text) {
    std::vector<Variable> vars;
    std::string cur;
    for (char c : text + "*") {
        if (c == '*') {
            if (!cur.empty()) vars.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    return Monomial(std::move(vars));
}

// Polynomial from its canonical text; "0" and "TOP" are accepted.
inline WhyPolynomial poly(const std::string& text) {
    if (text == "TOP") return WhyPolynomial::top();
    WhyPolynomial p;
    if (text == "0") return p;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t next = text.find(" + ", pos);
        std::string part = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        p.add(part == "1" ? Monomial{} : mono(part));
        if (next == std::string::npos) break;
        pos = next + 3;
    }
    return p;
}

// ---- random corpora ------------------------------------------------------

struct RandomSpec {
    int max_axioms = 8;
    int names = 4;
    int roles = 2;
    int individuals = 3;
    bool inverses = true;
};

// Satisfiable by construction: no bot anywhere. Assertions, normal GCIs and
// RIs, one fresh variable per axiom.
inline AnnotatedOntology random_normal(std::mt19937& rng, const RandomSpec& spec = {}) {
    auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
    auto cname = [&]() { return std::string(1, char('A' + pick(spec.names))); };
    auto ind = [&]() { return std::string(1, char('a' + pick(spec.individuals))); };
    auto role = [&]() {
        std::string r = "r" + std::to_string(pick(spec.roles));
        return spec.inverses && pick(3) == 0 ? r + "-" : r;
    };
    auto plain_role = [&]() { return "r" + std::to_string(pick(spec.roles)); };
    Vocabulary ctx;
    for (int i = 0; i < spec.names; ++i) ctx.concepts.insert(std::string(1, char('A' + i)));
    for (int i = 0; i < spec.roles; ++i) ctx.roles.insert("r" + std::to_string(i));
    AnnotatedOntology o;
    int count = 1 + pick(spec.max_axioms);
    int var = 0;
    for (int tries = 0; static_cast<int>(o.size()) < count && tries < 100; ++tries) {
        std::string line;
        switch (pick(8)) {
            case 0: line = cname() + "(" + ind() + ")"; break;
            case 1: line = plain_role() + "(" + ind() + "," + ind() + ")"; break;
            case 2: line = cname() + " <= " + cname(); break;
            case 3: line = cname() + " and " + cname() + " <= " + cname(); break;
            case 4: line = cname() + " <= exists " + role(); break;
            case 5: line = "exists " + role() + " . " + cname() + " <= " + cname(); break;
            case 6: line = "exists " + role() + " <= " + cname(); break;
            default: line = role() + " <= " + role(); break;
        }
        Axiom ax;
        try {
            ax = parse_axiom(line, ctx);
        } catch (const Error&) {
            continue;  // e.g. A and A
        }
        if (o.add(ax, Monomial{"v" + std::to_string(var)})) ++var;
    }
    return o;
}

}  // namespace fx
