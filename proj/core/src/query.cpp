#include "elprov/query.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "elprov/errors.hpp"
#include "elprov/normalize.hpp"
#include "elprov/saturate.hpp"

namespace elprov {

// ---- ConjunctiveQuery ---------------------------------------------------

std::string QueryAtom::str() const {
    if (is_role) return role.str() + "(" + t1.str() + "," + t2.str() + ")";
    return pred + "(" + t1.str() + ")";
}

void ConjunctiveQuery::normalize_atoms() {
    std::set<Term> used;
    for (const auto& a : atoms) {
        if (a.is_role || a.pred != "top") {
            used.insert(a.t1);
            if (a.is_role) used.insert(a.t2);
        }
    }
    std::erase_if(atoms, [&](const QueryAtom& a) { return !a.is_role && a.pred == "top" && used.count(a.t1); });
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
}

bool ConjunctiveQuery::is_answer_var(const std::string& v) const {
    return std::any_of(head.begin(), head.end(), [&](const Term& t) { return t.is_var && t.name == v; });
}

std::vector<std::string> ConjunctiveQuery::existential_vars() const {
    std::set<std::string> out;
    for (const auto& a : atoms) {
        for (const Term* t : {&a.t1, &a.t2}) {
            if (t == &a.t2 && !a.is_role) continue;
            if (t->is_var && !is_answer_var(t->name)) out.insert(t->name);
        }
    }
    return {out.begin(), out.end()};
}

std::string ConjunctiveQuery::str() const {
    std::string out = "q(";
    for (std::size_t i = 0; i < head.size(); ++i) out += (i ? "," : "") + head[i].str();
    out += ") :- ";
    for (std::size_t i = 0; i < atoms.size(); ++i) out += (i ? ", " : "") + atoms[i].str();
    return out + ".";
}

namespace {

Term rename_term(const Term& t, const std::map<std::string, std::string>& ren) {
    if (!t.is_var) return t;
    auto it = ren.find(t.name);
    return it == ren.end() ? t : Term::var(it->second);
}

ConjunctiveQuery renamed(const ConjunctiveQuery& q, const std::map<std::string, std::string>& ren) {
    ConjunctiveQuery out;
    for (const auto& h : q.head) out.head.push_back(rename_term(h, ren));
    for (const auto& a : q.atoms) {
        QueryAtom b = a;
        b.t1 = rename_term(a.t1, ren);
        if (a.is_role) b.t2 = rename_term(a.t2, ren);
        out.atoms.push_back(std::move(b));
    }
    out.normalize_atoms();
    return out;
}

}  // namespace

ConjunctiveQuery canonical(const ConjunctiveQuery& q) {
    std::vector<std::string> ex = q.existential_vars();
    std::vector<std::size_t> perm(ex.size());
    std::iota(perm.begin(), perm.end(), 0);
    auto apply = [&]() {
        std::map<std::string, std::string> ren;
        for (std::size_t i = 0; i < ex.size(); ++i) ren[ex[i]] = "_e" + std::to_string(perm[i]);
        return renamed(q, ren);
    };
    ConjunctiveQuery best = apply();
    if (ex.size() > 7) return best;
    while (std::next_permutation(perm.begin(), perm.end())) {
        ConjunctiveQuery c = apply();
        if (c.atoms < best.atoms) best = std::move(c);
    }
    return best;
}

// ---- rewriting -----------------------------------------------------------

namespace {

using MonoSet = std::set<Monomial>;
using Pair = std::pair<std::set<std::string>, Monomial>;

struct RewriteIndex {
    struct Exr {
        std::string lhs;  // concept name or "top"
        Role role;
        Monomial v;
    };
    struct Exl {
        Role role;  // P_i, i.e. the axiom reads exists inv(P_i) . filler <= B
        std::string filler;
        Monomial v;
    };

    std::vector<Exr> exr;
    std::map<std::string, std::vector<Exl>> exl_by_rhs;
    std::map<Role, std::map<Role, MonoSet>> ri;
    std::map<std::string, std::vector<std::pair<std::vector<std::string>, const MonoSet*>>> gci_by_rhs;
    std::map<std::string, const MonoSet*> top_sub;

    RewriteIndex(const SaturationSet& sat, const AnnotatedOntology& o) {
        for (const auto& a : o.axioms()) {
            const auto* g = std::get_if<Gci>(&a.axiom);
            if (!g) continue;
            if (g->rhs.kind() == Concept::Kind::Exists && g->lhs.is_atomic()) {
                exr.push_back({g->lhs.is_top() ? "top" : g->lhs.concept_name(), g->rhs.role(), a.annotation});
            } else if (g->lhs.kind() == Concept::Kind::Exists && g->rhs.is_name()) {
                const Concept& f = g->lhs.filler();
                exl_by_rhs[g->rhs.concept_name()].push_back(
                    {g->lhs.role().inv(), f.is_top() ? "top" : f.concept_name(), a.annotation});
            }
        }
        for (const auto& [ax, monos] : sat.entries()) {
            if (const auto* r = std::get_if<RoleInclusion>(&ax)) {
                ri[r->sub][r->super] = monos;
            } else if (const auto* g = std::get_if<Gci>(&ax)) {
                if (!g->rhs.is_name()) continue;
                std::vector<std::string> lhs;
                if (g->lhs.is_name()) {
                    lhs.push_back(g->lhs.concept_name());
                } else if (g->lhs.kind() == Concept::Kind::And) {
                    for (const auto& c : g->lhs.conjuncts()) lhs.push_back(c.concept_name());
                } else if (!g->lhs.is_top()) {
                    continue;
                }
                if (g->lhs.is_top()) top_sub[g->rhs.concept_name()] = &monos;
                gci_by_rhs[g->rhs.concept_name()].emplace_back(std::move(lhs), &monos);
            }
        }
    }

    const MonoSet* ri_monos(const Role& p, const Role& q) const {
        auto it = ri.find(p);
        if (it == ri.end()) return nullptr;
        auto jt = it->second.find(q);
        return jt == it->second.end() ? nullptr : &jt->second;
    }

    // Ways for B to hold at a P-successor.
    std::set<Pair> pair_sb(const std::string& b, const Role& p) const {
        std::set<Pair> out;
        if (auto it = exl_by_rhs.find(b); it != exl_by_rhs.end()) {
            for (const auto& e : it->second) {
                const MonoSet* ms = ri_monos(p, e.role);
                if (!ms) continue;
                std::set<std::string> at;
                if (e.filler != "top") at.insert(e.filler);
                for (const auto& m : *ms) out.insert({at, mono_times(e.v, m)});
            }
        }
        if (auto it = top_sub.find(b); it != top_sub.end())
            for (const auto& o : *it->second) out.insert({{}, o});
        return out;
    }

    // Ways for concept atom c to hold at a P-successor.
    std::set<Pair> pair_set_c(const std::string& c, const Role& p) const {
        if (c == "top") return {{{}, Monomial{}}};
        std::set<Pair> out;
        auto it = gci_by_rhs.find(c);
        if (it == gci_by_rhs.end()) return out;
        for (const auto& [bs, monos] : it->second) {
            std::vector<std::set<Pair>> per_b;
            bool ok = true;
            for (const auto& b : bs) {
                per_b.push_back(pair_sb(b, p));
                if (per_b.back().empty()) {
                    ok = false;
                    break;
                }
            }
            if (!ok) continue;
            for (const auto& n : *monos) {
                std::set<Pair> acc{{{}, n}};
                for (const auto& sb : per_b) acc = product(acc, sb);
                out.insert(acc.begin(), acc.end());
            }
        }
        return out;
    }

    static std::set<Pair> product(const std::set<Pair>& a, const std::set<Pair>& b) {
        std::set<Pair> out;
        for (const auto& [at1, m1] : a) {
            for (const auto& [at2, m2] : b) {
                std::set<std::string> at = at1;
                at.insert(at2.begin(), at2.end());
                out.insert({std::move(at), mono_times(m1, m2)});
            }
        }
        return out;
    }
};

// Preference: individual, answer variable, existential variable; ties by name.
std::optional<Term> pick_y0(const std::set<Term>& vp, const ConjunctiveQuery& q) {
    std::optional<Term> ind, ans, ex;
    std::size_t inds = 0;
    for (const auto& t : vp) {
        if (!t.is_var) {
            ++inds;
            if (!ind) ind = t;
        } else if (q.is_answer_var(t.name)) {
            if (!ans) ans = t;
        } else if (!ex) {
            ex = t;
        }
    }
    if (inds > 1) return std::nullopt;  // an anonymous element has one parent
    if (ind) return ind;
    if (ans) return ans;
    return ex;
}

void step(const ConjunctiveQuery& q, const Monomial& m, const RewriteIndex& idx,
          const std::function<void(ConjunctiveQuery, Monomial)>& emit) {
    for (const auto& x0name : q.existential_vars()) {
        Term x0 = Term::var(x0name);
        bool loop = std::any_of(q.atoms.begin(), q.atoms.end(),
                                [&](const QueryAtom& a) { return a.is_role && a.t1 == x0 && a.t2 == x0; });
        if (loop) continue;

        // S2: role atoms at x0 become Q(y, x0).
        std::vector<std::pair<Role, Term>> role_at;
        std::vector<std::string> concept_at;
        ConjunctiveQuery rest;
        rest.head = q.head;
        std::set<Term> vp;
        for (const auto& a : q.atoms) {
            if (a.is_role && a.t1 == x0) {
                role_at.emplace_back(a.role.inv(), a.t2);
                vp.insert(a.t2);
            } else if (a.is_role && a.t2 == x0) {
                role_at.emplace_back(a.role, a.t1);
                vp.insert(a.t1);
            } else if (!a.is_role && a.t1 == x0) {
                concept_at.push_back(a.pred);
            } else {
                rest.atoms.push_back(a);
            }
        }
        Term y0 = x0;
        if (!vp.empty()) {
            auto pick = pick_y0(vp, q);
            if (!pick) continue;
            y0 = *pick;
        }
        // S5 on the remaining atoms and the head.
        auto subst = [&](const Term& t) { return vp.count(t) ? y0 : t; };
        for (auto& h : rest.head) h = subst(h);
        for (auto& a : rest.atoms) {
            a.t1 = subst(a.t1);
            if (a.is_role) a.t2 = subst(a.t2);
        }

        for (const auto& e : idx.exr) {
            std::vector<const MonoSet*> role_sets;
            bool ok = true;
            for (const auto& [qrole, y] : role_at) {
                const MonoSet* ms = idx.ri_monos(e.role, qrole);
                if (!ms) {
                    ok = false;
                    break;
                }
                role_sets.push_back(ms);
            }
            if (!ok) continue;
            std::set<Pair> concept_rew{{{}, Monomial{}}};
            for (const auto& c : concept_at) {
                std::set<Pair> pc = idx.pair_set_c(c, e.role);
                if (pc.empty()) {
                    ok = false;
                    break;
                }
                concept_rew = RewriteIndex::product(concept_rew, pc);
            }
            if (!ok) continue;
            MonoSet role_rew{Monomial{}};
            for (const MonoSet* ms : role_sets) {
                MonoSet next;
                for (const auto& a : role_rew)
                    for (const auto& b : *ms) next.insert(mono_times(a, b));
                role_rew = std::move(next);
            }
            for (const auto& mr : role_rew) {
                for (const auto& [at, mc] : concept_rew) {
                    ConjunctiveQuery out = rest;
                    out.atoms.push_back(QueryAtom::concept_atom(e.lhs, y0));
                    for (const auto& d : at) out.atoms.push_back(QueryAtom::concept_atom(d, y0));
                    out.normalize_atoms();
                    emit(std::move(out), mono_times(mono_times(m, e.v), mono_times(mr, mc)));
                }
            }
        }
    }
}

}  // namespace

std::vector<RewrittenQuery> rewrite(const ConjunctiveQuery& q, const SaturationSet& sat, const AnnotatedOntology& o) {
    RewriteIndex idx(sat, o);
    std::set<RewrittenQuery> seen;
    std::deque<RewrittenQuery> frontier;
    RewrittenQuery start{canonical(q), Monomial{}};
    seen.insert(start);
    frontier.push_back(start);
    while (!frontier.empty()) {
        RewrittenQuery cur = std::move(frontier.front());
        frontier.pop_front();
        step(cur.query, cur.monomial, idx, [&](ConjunctiveQuery nq, Monomial nm) {
            RewrittenQuery r{canonical(nq), std::move(nm)};
            if (seen.insert(r).second) frontier.push_back(std::move(r));
        });
    }
    return {seen.begin(), seen.end()};
}

// ---- matching --------------------------------------------------------------

namespace {

struct Facts {
    std::map<std::string, std::map<std::string, const MonoSet*>> concepts;  // concept -> ind -> monos
    std::map<std::string, std::vector<std::pair<std::pair<std::string, std::string>, const MonoSet*>>> roles;

    explicit Facts(const SaturationSet& sat) {
        for (const auto& [ax, monos] : sat.entries()) {
            if (const auto* c = std::get_if<ConceptAssertion>(&ax)) {
                if (c->cls.is_bottom()) continue;
                std::string name = c->cls.is_top() ? "top" : c->cls.concept_name();
                concepts[name][c->individual] = &monos;
            } else if (const auto* r = std::get_if<RoleAssertion>(&ax)) {
                roles[r->role].push_back({{r->subject, r->object}, &monos});
            }
        }
    }
};

WhyPolynomial poly_of(const MonoSet& ms) { return WhyPolynomial::of(ms); }

class Matcher {
public:
    Matcher(const ConjunctiveQuery& q, const Facts& facts) : facts_(facts) {
        // Concept atoms last so role atoms bind variables first.
        for (const auto& a : q.atoms)
            if (a.is_role) atoms_.push_back(a);
        for (const auto& a : q.atoms)
            if (!a.is_role) atoms_.push_back(a);
    }

    WhyPolynomial run(std::map<std::string, std::string> binding) {
        binding_ = std::move(binding);
        out_ = WhyPolynomial::zero();
        search(0, WhyPolynomial::one());
        return out_;
    }

private:
    std::optional<std::string> value(const Term& t) const {
        if (!t.is_var) return t.name;
        auto it = binding_.find(t.name);
        if (it == binding_.end()) return std::nullopt;
        return it->second;
    }

    // Binds t to v; returns false on conflict. `bound` records new bindings.
    bool bind(const Term& t, const std::string& v, std::vector<std::string>& bound) {
        auto cur = value(t);
        if (cur) return *cur == v;
        binding_[t.name] = v;
        bound.push_back(t.name);
        return true;
    }

    void unbind(const std::vector<std::string>& bound) {
        for (const auto& n : bound) binding_.erase(n);
    }

    void search(std::size_t i, const WhyPolynomial& acc) {
        if (i == atoms_.size()) {
            out_ = poly_plus(out_, acc);
            return;
        }
        const QueryAtom& a = atoms_[i];
        if (!a.is_role) {
            auto it = facts_.concepts.find(a.pred);
            if (it == facts_.concepts.end()) return;
            auto v = value(a.t1);
            if (v) {
                auto jt = it->second.find(*v);
                if (jt != it->second.end()) search(i + 1, poly_times(acc, poly_of(*jt->second)));
                return;
            }
            for (const auto& [ind, monos] : it->second) {
                std::vector<std::string> bound;
                bind(a.t1, ind, bound);
                search(i + 1, poly_times(acc, poly_of(*monos)));
                unbind(bound);
            }
            return;
        }
        auto it = facts_.roles.find(a.role.name);
        if (it == facts_.roles.end()) return;
        const Term& s = a.role.inverted ? a.t2 : a.t1;
        const Term& o = a.role.inverted ? a.t1 : a.t2;
        for (const auto& [edge, monos] : it->second) {
            std::vector<std::string> bound;
            if (bind(s, edge.first, bound) && bind(o, edge.second, bound))
                search(i + 1, poly_times(acc, poly_of(*monos)));
            unbind(bound);
        }
    }

    const Facts& facts_;
    std::vector<QueryAtom> atoms_;
    std::map<std::string, std::string> binding_;
    WhyPolynomial out_;
};

std::optional<std::map<std::string, std::string>> bind_head(const ConjunctiveQuery& q,
                                                            const std::vector<std::string>& tuple) {
    std::map<std::string, std::string> b;
    for (std::size_t i = 0; i < q.head.size(); ++i) {
        const Term& h = q.head[i];
        if (!h.is_var) {
            if (h.name != tuple[i]) return std::nullopt;
            continue;
        }
        auto [it, fresh] = b.emplace(h.name, tuple[i]);
        if (!fresh && it->second != tuple[i]) return std::nullopt;
    }
    return b;
}

void check_arity(const ConjunctiveQuery& q, const std::vector<std::string>& tuple) {
    if (q.head.size() != tuple.size())
        throw ArityMismatch("query has " + std::to_string(q.head.size()) + " answer terms, tuple has " +
                            std::to_string(tuple.size()));
}

WhyPolynomial match_with(const ConjunctiveQuery& q, const std::vector<std::string>& tuple, const Facts& facts) {
    auto b = bind_head(q, tuple);
    if (!b) return WhyPolynomial::zero();
    return Matcher(q, facts).run(std::move(*b));
}

AnnotatedOntology normal(const AnnotatedOntology& o) {
    for (const auto& a : o.axioms()) {
        const auto* g = std::get_if<Gci>(&a.axiom);
        if (g && !is_normal_gci(*g)) return normalize(o);
    }
    return o;
}

}  // namespace

WhyPolynomial match_provenance(const ConjunctiveQuery& q, const std::vector<std::string>& tuple,
                               const SaturationSet& sat) {
    check_arity(q, tuple);
    Facts facts(sat);
    return match_with(q, tuple, facts);
}

WhyPolynomial cq_provenance(const AnnotatedOntology& o, const ConjunctiveQuery& q,
                            const std::vector<std::string>& tuple) {
    check_arity(q, tuple);
    AnnotatedOntology n = normal(o);
    SaturationSet sat = saturate(n);
    if (sat.has_clash()) return WhyPolynomial::top();
    Facts facts(sat);
    WhyPolynomial out;
    for (const auto& r : rewrite(q, sat, n)) {
        WhyPolynomial p = match_with(r.query, tuple, facts);
        out = poly_plus(out, poly_times(WhyPolynomial::of(r.monomial), p));
    }
    return out;
}

// ---- tree-shaped queries -----------------------------------------------------

TreeReduction tree_cq_reduction(const ConjunctiveQuery& q) {
    if (q.head.size() != 1 || !q.head[0].is_var) throw NotTreeShaped("need exactly one answer variable");
    std::map<std::string, std::vector<const QueryAtom*>> by_var;
    std::set<std::string> vars;
    std::size_t edges = 0;
    for (const auto& a : q.atoms) {
        if (!a.t1.is_var || (a.is_role && !a.t2.is_var)) throw NotTreeShaped("individual in " + a.str());
        vars.insert(a.t1.name);
        by_var[a.t1.name].push_back(&a);
        if (a.is_role) {
            if (a.t1 == a.t2) throw NotTreeShaped("self loop in " + a.str());
            vars.insert(a.t2.name);
            by_var[a.t2.name].push_back(&a);
            ++edges;
        }
    }
    if (edges + 1 != vars.size()) throw NotTreeShaped("query graph is not a tree");

    std::set<std::string> visited;
    std::function<Concept(const std::string&)> build = [&](const std::string& v) {
        visited.insert(v);
        std::vector<Concept> parts;
        for (const QueryAtom* a : by_var[v]) {
            if (!a->is_role) {
                if (a->pred != "top") parts.push_back(Concept::name(a->pred));
                continue;
            }
            bool out = a->t1.name == v;
            const std::string& child = out ? a->t2.name : a->t1.name;
            if (visited.count(child)) continue;
            Role r = out ? a->role : a->role.inv();
            parts.push_back(Concept::exists(r, build(child)));
        }
        return Concept::conj(std::move(parts));
    };
    Concept c = build(q.head[0].name);
    if (visited.size() != vars.size()) throw NotTreeShaped("query graph is not connected");
    return {c, "_nfQ0"};
}

WhyPolynomial tree_cq_provenance(const AnnotatedOntology& o, const ConjunctiveQuery& q, const std::string& a) {
    TreeReduction t = tree_cq_reduction(q);
    AnnotatedOntology ext = o;
    ext.add(Gci{t.cls, Concept::name(t.fresh_name)}, Monomial{});
    AnnotatedOntology n = normalize(ext);
    SaturationSet sat = saturate(n);
    if (sat.has_clash()) return WhyPolynomial::top();
    return sat.polynomial(ConceptAssertion{Concept::name(t.fresh_name), a});
}

}  // namespace elprov
