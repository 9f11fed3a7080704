#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>

#include "elprov/entail.hpp"
#include "elprov/errors.hpp"
#include "elprov/explain.hpp"
#include "elprov/normalize.hpp"
#include "elprov/oracle.hpp"
#include "elprov/profile.hpp"
#include "elprov/query.hpp"
#include "elprov/saturate.hpp"
#include "elprov/textio.hpp"

namespace elprov::cli {

namespace {

// Thrown after a mismatch has already been reported on err.
struct OracleMismatch {};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CLI::ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) out.push_back(cur);
    return out;
}

struct Options {
    std::string onto;
    std::string axiom;
    std::string semiring;
    std::string valuation;
    std::string query;
    std::string tuple;
    std::string statics;
    std::size_t k = 0;
    double n = 0;
    bool classical = false;
    bool oracle = false;
    bool rewritings = false;
};

class Runner {
public:
    Runner(const Options& opts, std::ostream& out, std::ostream& err) : opts_(opts), out_(out), err_(err) {}

    int check() {
        AnnotatedOntology o = load();
        out_ << "profile: " << to_string(check_profile(o)) << "\n";
        std::set<Axiom> sat = classical_saturate(normalize(o));
        std::string witness;
        for (const auto& a : sat) {
            const auto* ca = std::get_if<ConceptAssertion>(&a);
            if (ca && ca->cls.is_bottom()) {
                witness = render(a);
                break;
            }
        }
        if (witness.empty() && sat.count(Gci{Concept::top(), Concept::bottom()})) witness = "top <= bot";
        if (!witness.empty()) {
            out_ << "unsatisfiable\n";
            err_ << "unsatisfiable: derived " << witness << "\n";
            return kUnsat;
        }
        out_ << "satisfiable\n";
        return kOk;
    }

    int normalize_cmd() {
        out_ << normalize(load()).str();
        return kOk;
    }

    int saturate_cmd() {
        AnnotatedOntology n = normalize(load());
        if (opts_.classical) {
            for (const auto& a : classical_saturate(n)) out_ << render(a) << "\n";
        } else if (opts_.k > 0) {
            out_ << saturate_k(n, opts_.k).str();
        } else {
            out_ << saturate(n).str();
        }
        return kOk;
    }

    int provenance() {
        AnnotatedOntology o = load();
        Goal goal = axiom_goal(o);
        WhyPolynomial p = goal_provenance(o, goal);
        if (opts_.oracle) cross_check_provenance(o, goal, p);
        print_value(p);
        return kOk;
    }

    int query() {
        AnnotatedOntology o = load();
        Vocabulary voc = vocabulary(o);
        ConjunctiveQuery q = parse_query(read_file(opts_.query), &voc);
        std::vector<std::string> tuple = split_commas(opts_.tuple);
        if (opts_.rewritings) {
            AnnotatedOntology n = normalize(o);
            for (const auto& r : rewrite(q, saturate(n), n)) out_ << r.monomial.str() << " : " << r.query.str() << "\n";
        }
        QueryGoal goal{q, tuple};
        WhyPolynomial p = goal_provenance(o, goal);
        if (opts_.oracle) cross_check_provenance(o, goal, p);
        print_value(p);
        return kOk;
    }

    int justify() {
        AnnotatedOntology o = load();
        Goal goal = axiom_goal(o);
        std::set<Variable> statics;
        for (auto& v : split_commas(opts_.statics)) statics.insert(v);
        std::vector<Justification> js = justifications(o, goal, statics);
        if (opts_.oracle) {
            std::vector<Justification> ref = brute_justifications(o, goal, statics);
            if (ref != js) {
                err_ << "oracle mismatch: " << ref.size() << " reference justifications, " << js.size()
                     << " computed\n";
                for (const auto& j : ref) err_ << "  oracle: " << render(j) << "\n";
                throw OracleMismatch{};
            }
        }
        for (const auto& j : js) out_ << render(j) << "\n";
        return kOk;
    }

    int lineage_cmd() {
        AnnotatedOntology o = load();
        out_ << lineage(o, std::get<Axiom>(axiom_goal(o))).str() << "\n";
        return kOk;
    }

    int ncut_cmd() {
        AnnotatedOntology o = load();
        out_ << ncut(o, opts_.n, parse_valuation(read_file(opts_.valuation))).str();
        return kOk;
    }

private:
    AnnotatedOntology load() const { return parse_ontology(read_file(opts_.onto)); }

    Goal axiom_goal(const AnnotatedOntology& o) const { return parse_axiom(opts_.axiom, vocabulary(o)); }

    void print_value(const WhyPolynomial& p) {
        if (opts_.semiring.empty()) {
            out_ << p.str() << "\n";
            return;
        }
        if (opts_.valuation.empty()) throw CLI::ValidationError("--semiring requires --valuation");
        SemiringSpec s = builtin_semiring(opts_.semiring);
        Valuation v = parse_valuation(read_file(opts_.valuation));
        Value x;
        if (s.flags.plus_idempotent && s.flags.times_idempotent) {
            x = evaluate(p, s, v);
        } else {
            err_ << "warning: " << s.name
                 << " is not idempotent; printing the image of the Why polynomial, not its own provenance\n";
            x = evaluate_unchecked(p, s, v);
        }
        out_ << s.format_value(x) << "\n";
    }

    // Every monomial must name an entailing subset, and the minimal ones must
    // be exactly the brute-force justifications.
    void cross_check_provenance(const AnnotatedOntology& o, const Goal& goal, const WhyPolynomial& p) {
        if (p.is_top()) {
            if (!brute_classical_entails(o, goal)) {
                err_ << "oracle mismatch: Top computed but the goal is not classically entailed\n";
                throw OracleMismatch{};
            }
            return;
        }
        for (const auto& m : p.monomials()) {
            AnnotatedOntology sub;
            for (const auto& a : o.axioms())
                if (a.annotation.subset_of(m)) sub.add(a);
            if (!brute_classical_entails(sub, goal)) {
                err_ << "oracle mismatch: monomial " << m.str() << " does not entail the goal\n";
                throw OracleMismatch{};
            }
        }
        std::vector<Justification> ref = brute_justifications(o, goal);
        std::set<Monomial> want;
        for (const auto& j : ref) {
            std::vector<Variable> vars;
            for (const auto& a : j) vars.insert(vars.end(), a.annotation.vars().begin(), a.annotation.vars().end());
            want.insert(Monomial(std::move(vars)));
        }
        if (minimize(p).monomials() != want) {
            err_ << "oracle mismatch: minimal monomials differ from " << ref.size() << " reference justifications\n";
            throw OracleMismatch{};
        }
    }

    const Options& opts_;
    std::ostream& out_;
    std::ostream& err_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Provenance for annotated ontologies", "elprov"};
    app.require_subcommand(1);
    Options opts;

    auto onto = [&](CLI::App* sub) { sub->add_option("ontology", opts.onto, "ontology file")->required(); };
    auto axiom = [&](CLI::App* sub) { sub->add_option("--axiom", opts.axiom, "axiom text")->required(); };
    auto eval = [&](CLI::App* sub) {
        sub->add_option("--semiring", opts.semiring, "fuzzy, viterbi, tropical, access or boolean");
        sub->add_option("--valuation", opts.valuation, "valuation file");
    };

    auto* check = app.add_subcommand("check", "profile and satisfiability");
    onto(check);
    auto* norm = app.add_subcommand("normalize", "print the normal form");
    onto(norm);
    auto* sat = app.add_subcommand("saturate", "print the saturation set");
    onto(sat);
    sat->add_option("--k", opts.k, "monomial size bound")->check(CLI::PositiveNumber);
    sat->add_flag("--classical", opts.classical, "drop annotations");
    auto* prov = app.add_subcommand("provenance", "provenance of an axiom");
    onto(prov);
    axiom(prov);
    eval(prov);
    prov->add_flag("--oracle", opts.oracle, "cross-check against the brute-force reasoner");
    auto* qry = app.add_subcommand("query", "provenance of a query answer");
    onto(qry);
    qry->add_option("--query", opts.query, "query file")->required();
    qry->add_option("--tuple", opts.tuple, "comma-separated individuals");
    qry->add_flag("--rewritings", opts.rewritings, "list rewritings first");
    qry->add_flag("--oracle", opts.oracle, "cross-check against the brute-force reasoner");
    eval(qry);
    auto* just = app.add_subcommand("justify", "minimal axiom sets");
    onto(just);
    axiom(just);
    just->add_option("--static", opts.statics, "comma-separated static variables");
    just->add_flag("--oracle", opts.oracle, "cross-check against the brute-force reasoner");
    auto* lin = app.add_subcommand("lineage", "variables used by some derivation");
    onto(lin);
    axiom(lin);
    auto* cut = app.add_subcommand("ncut", "axioms with degree at least n");
    onto(cut);
    cut->add_option("--valuation", opts.valuation, "valuation file")->required();
    cut->add_option("--n", opts.n, "threshold")->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }

    Runner r(opts, out, err);
    try {
        if (*check) return r.check();
        if (*norm) return r.normalize_cmd();
        if (*sat) return r.saturate_cmd();
        if (*prov) return r.provenance();
        if (*qry) return r.query();
        if (*just) return r.justify();
        if (*lin) return r.lineage_cmd();
        if (*cut) return r.ncut_cmd();
    } catch (const OracleMismatch&) {
        return kOracleMismatch;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kParse;
    } catch (const UnsatisfiableOntology& e) {
        err << "unsatisfiable: " << e.what() << "\n";
        return kUnsat;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

}  // namespace elprov::cli
