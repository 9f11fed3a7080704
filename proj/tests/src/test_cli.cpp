#include <doctest.h>

#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = elprov::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return fx::data_path(name); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("provenance") {
    auto r = run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus)"});
    CHECK(r.code == 0);
    CHECK(r.out == "x1 + x3*x4*y1*y2 + x5*x6*y1*y3\n");
    r = run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus)", "--semiring", "fuzzy", "--valuation",
             data("dio_fuzzy.val")});
    CHECK(r.code == 0);
    CHECK(r.out == "0.9\n");
    r = run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus)", "--semiring", "tropical", "--valuation",
             data("dio_tropical.val")});
    CHECK(r.code == 0);
    CHECK(r.out == "1\n");
    CHECK(r.err.find("not idempotent") != std::string::npos);
    r = run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus)", "--oracle"});
    CHECK(r.code == 0);
}

TEST_CASE("query") {
    auto r = run({"query", data("dio.onto"), "--query", data("dio.cq"), "--tuple", "dionysus", "--semiring",
                  "tropical", "--valuation", data("dio_tropical.val")});
    CHECK(r.code == 0);
    CHECK(r.out == "4\n");
    r = run({"query", data("dio.onto"), "--query", data("dio.cq"), "--tuple", "dionysus", "--rewritings"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("1 : q(x) :- Deity(x), parent(x,_e0).\n", 0) == 0);
    r = run({"query", data("dio.onto"), "--query", data("dio.cq"), "--tuple", "dionysus,zeus"});
    CHECK(r.code == 1);
}

TEST_CASE("check") {
    auto r = run({"check", data("unsat.onto")});
    CHECK(r.code == 3);
    CHECK(r.err.find("bot(a)") != std::string::npos);
    r = run({"check", data("dio.onto")});
    CHECK(r.code == 0);
    CHECK(r.out == "profile: ELHIrestr\nsatisfiable\n");
}

TEST_CASE("justify, lineage and ncut") {
    auto r = run({"justify", data("cyc.onto"), "--axiom", "A <= B", "--oracle"});
    CHECK(r.code == 0);
    CHECK(r.out == "{A <= B}\n");
    r = run({"justify", data("dio.onto"), "--axiom", "Deity(dionysus)", "--static", "x1"});
    CHECK(r.out == "{}\n");
    r = run({"justify", data("unsat.onto"), "--axiom", "B(a)"});
    CHECK(r.code == 3);
    r = run({"lineage", data("dio.onto"), "--axiom", "Deity(dionysus)"});
    CHECK(r.out == "{x1, x3, x4, x5, x6, y1, y2, y3}\n");
    r = run({"ncut", data("dio.onto"), "--valuation", data("dio_fuzzy.val"), "--n", "1"});
    CHECK(r.code == 0);
    CHECK(r.out == "Deity(zeus) @ x6\nmother <= parent @ y2\nfather <= parent @ y3\n");
}

TEST_CASE("normalize and saturate") {
    auto r = run({"saturate", data("cyc.onto")});
    CHECK(r.code == 0);
    CHECK(r.out.find("A <= B @ x1 | x1*x2\n") != std::string::npos);
    r = run({"saturate", data("cyc.onto"), "--k", "1"});
    CHECK(r.out.find("A <= B @ x1\n") != std::string::npos);
    CHECK(run({"saturate", data("cyc.onto"), "--k", "0"}).code == 1);
    r = run({"normalize", data("dio.onto")});
    CHECK(r.out == fx::slurp("dio.onto").substr(fx::slurp("dio.onto").find('\n') + 1));
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"provenance", data("dio.onto")}).code == 1);
    CHECK(run({"check", data("missing.onto")}).code == 1);
    auto r = run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus"});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("parse error", 0) == 0);
    CHECK(run({"provenance", data("dio.onto"), "--axiom", "Deity(dionysus)", "--semiring", "nat", "--valuation",
               data("dio_fuzzy.val")})
              .code == 1);
}

TEST_CASE("output is deterministic") {
    std::vector<std::string> args{"saturate", data("dio.onto")};
    CHECK(run(args).out == run(args).out);
}

}  // TEST_SUITE
