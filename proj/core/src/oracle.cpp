#include "elprov/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>

#include "elprov/errors.hpp"
#include "elprov/normalize.hpp"

namespace elprov {

namespace {

using Names = std::set<std::string>;
const std::string kTop = "top";
const std::string kBot = "bot";

std::string name_of(const Concept& c) {
    if (c.is_top()) return kTop;
    if (c.is_bottom()) return kBot;
    return c.concept_name();
}

// Horn reasoner over a normalized ontology. A type is a set of concept names
// (kBot marks a clash). The type of an anonymous element is a function of the
// seed it inherits from its parent.
class Reasoner {
public:
    explicit Reasoner(const AnnotatedOntology& o) {
        for (const auto& a : o.axioms()) load(a.axiom);
        close_roles();
        saturate();
    }

    bool unsat() const { return unsat_; }

    bool has_concept(const std::string& a, const std::string& c) const {
        if (c == kTop) return inds_.count(a) > 0;
        auto it = types_.find(a);
        return it != types_.end() && it->second.count(c) > 0;
    }

    Names roles_between(const std::string& a, const std::string& b) const {
        Names out;
        for (const auto& q : edge_roles(a, b))
            if (!q.inverted) out.insert(q.name);
        return out;
    }

    bool role_sub(const Role& p, const Role& q) const { return sub_star(p).count(q) > 0; }

    // Some element named a has a P-successor.
    bool has_successor(const std::string& a, const Role& p) const {
        const Names& t = types_.at(a);
        for (const auto& [lhs, r] : exr_)
            if ((lhs == kTop || t.count(lhs)) && role_sub(r, p)) return true;
        for (const auto& b : inds_)
            if (edge_roles(a, b).count(p)) return true;
        return false;
    }

    struct Model {
        std::vector<Names> concepts;
        std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>> roles;
        std::map<std::string, std::size_t> ids;
    };

    // Individuals with anonymous trees of the given depth, plus one extra tree
    // rooted at every reachable anonymous type.
    Model materialize(std::size_t depth, std::size_t limit) const {
        Model m;
        auto add = [&](Names t) {
            if (m.concepts.size() >= limit) throw BoundExceeded("canonical model exceeds element limit");
            m.concepts.push_back(std::move(t));
            return m.concepts.size() - 1;
        };
        auto link = [&](const Role& p, std::size_t x, std::size_t y) {
            for (const auto& q : sub_star(p)) {
                if (q.inverted) {
                    m.roles[q.name].insert({y, x});
                } else {
                    m.roles[q.name].insert({x, y});
                }
            }
        };
        std::function<void(std::size_t, std::size_t)> grow = [&](std::size_t x, std::size_t d) {
            if (d == 0) return;
            Names t = m.concepts[x];
            for (const auto& [lhs, p] : exr_) {
                if (lhs != kTop && !t.count(lhs)) continue;
                std::size_t y = add(memo_.at(seed_for(t, p)));
                link(p, x, y);
                grow(y, d - 1);
            }
        };
        for (const auto& a : inds_) m.ids[a] = add(types_.at(a));
        for (const auto& a : inds_)
            for (const auto& b : inds_)
                for (const auto& q : edge_roles(a, b))
                    if (!q.inverted) m.roles[q.name].insert({m.ids[a], m.ids[b]});
        std::size_t named = m.concepts.size();
        for (std::size_t i = 0; i < named; ++i) grow(i, depth);
        for (const auto& [seed, t] : memo_) {
            if (!reachable_.count(seed)) continue;
            grow(add(t), depth);
        }
        return m;
    }

private:
    void load(const Axiom& ax) {
        std::visit(
            [&](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, ConceptAssertion>) {
                    inds_.insert(x.individual);
                    asserted_[x.individual].insert(name_of(x.cls));
                } else if constexpr (std::is_same_v<T, RoleAssertion>) {
                    inds_.insert(x.subject);
                    inds_.insert(x.object);
                    edges_.insert({x.role, x.subject, x.object});
                } else if constexpr (std::is_same_v<T, RoleInclusion>) {
                    ri_.push_back({x.sub, x.super});
                    ri_.push_back({x.sub.inv(), x.super.inv()});
                } else if constexpr (std::is_same_v<T, NegRoleInclusion>) {
                    disjoint_.push_back({x.first, x.second});
                    disjoint_.push_back({x.first.inv(), x.second.inv()});
                } else {
                    load_gci(x);
                }
            },
            ax);
    }

    void load_gci(const Gci& g) {
        roles_seen(g.lhs);
        roles_seen(g.rhs);
        if (g.rhs.kind() == Concept::Kind::Exists) {
            exr_.push_back({name_of(g.lhs), g.rhs.role()});
        } else if (g.lhs.kind() == Concept::Kind::Exists) {
            exl_.push_back({g.lhs.role(), name_of(g.lhs.filler()), name_of(g.rhs)});
        } else if (g.lhs.kind() == Concept::Kind::And) {
            std::vector<std::string> parts;
            for (const auto& c : g.lhs.conjuncts()) parts.push_back(name_of(c));
            conj_.push_back({parts, name_of(g.rhs)});
        } else {
            conj_.push_back({{name_of(g.lhs)}, name_of(g.rhs)});
        }
    }

    void roles_seen(const Concept& c) {
        if (c.kind() == Concept::Kind::Exists) {
            roles_.insert(Role{c.role().name, false});
            roles_.insert(Role{c.role().name, true});
        }
    }

    void close_roles() {
        for (const auto& [a, b] : ri_) {
            for (const Role& r : {a, b}) {
                roles_.insert(Role{r.name, false});
                roles_.insert(Role{r.name, true});
            }
        }
        for (const auto& e : edges_) {
            roles_.insert(Role{std::get<0>(e), false});
            roles_.insert(Role{std::get<0>(e), true});
        }
        for (const auto& [a, b] : disjoint_) {
            roles_.insert(a);
            roles_.insert(b);
        }
        for (const auto& r : roles_) sub_[r].insert(r);
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& [a, b] : ri_) {
                for (auto& [r, sups] : sub_) {
                    if (sups.count(a) && !sups.count(b)) {
                        sups.insert(b);
                        changed = true;
                    }
                }
            }
        }
    }

    const std::set<Role>& sub_star(const Role& r) const {
        static const std::set<Role> empty;
        auto it = sub_.find(r);
        return it == sub_.end() ? empty : it->second;
    }

    bool clashing(const std::set<Role>& rs) const {
        for (const auto& [a, b] : disjoint_)
            if (rs.count(a) && rs.count(b)) return true;
        return false;
    }

    std::set<Role> edge_roles(const std::string& a, const std::string& b) const {
        std::set<Role> out;
        for (const auto& [r, s, o] : edges_) {
            if (s == a && o == b) {
                const auto& up = sub_star(Role{r, false});
                out.insert(up.begin(), up.end());
            }
            if (s == b && o == a) {
                const auto& up = sub_star(Role{r, true});
                out.insert(up.begin(), up.end());
            }
        }
        return out;
    }

    // Concepts a P-successor of an element of type t inherits from it.
    Names seed_for(const Names& t, const Role& p) const {
        Names seed;
        const auto& back = sub_star(p.inv());
        for (const auto& [q, filler, rhs] : exl_)
            if (back.count(q) && (filler == kTop || t.count(filler))) seed.insert(rhs);
        return seed;
    }

    Names& lookup(const Names& seed) {
        auto [it, fresh] = memo_.emplace(seed, seed);
        if (fresh) changed_ = true;
        return it->second;
    }

    void local_closure(Names& t) {
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [parts, rhs] : conj_) {
                if (t.count(rhs)) continue;
                bool all = std::all_of(parts.begin(), parts.end(),
                                       [&](const std::string& c) { return c == kTop || t.count(c); });
                if (all) {
                    t.insert(rhs);
                    grew = true;
                }
            }
        }
    }

    // One refinement of type t using the current successor types.
    Names refine(Names t) {
        local_closure(t);
        for (const auto& [lhs, p] : exr_) {
            if (lhs != kTop && !t.count(lhs)) continue;
            if (clashing(sub_star(p))) t.insert(kBot);
            Names seed = seed_for(t, p);
            reachable_.insert(seed);
            Names succ = lookup(seed);
            if (succ.count(kBot)) t.insert(kBot);
            const auto& up = sub_star(p);
            for (const auto& [q, filler, rhs] : exl_)
                if (up.count(q) && (filler == kTop || succ.count(filler))) t.insert(rhs);
        }
        local_closure(t);
        return t;
    }

    void saturate() {
        for (const auto& a : inds_) types_[a] = asserted_[a];
        lookup({});
        changed_ = true;
        while (changed_) {
            changed_ = false;
            std::vector<Names> keys;
            for (const auto& [k, v] : memo_) keys.push_back(k);
            for (const auto& k : keys) {
                Names t = refine(memo_.at(k));
                if (t != memo_.at(k)) {
                    memo_[k] = std::move(t);
                    changed_ = true;
                }
            }
            for (const auto& a : inds_) {
                Names t = types_[a];
                for (const auto& b : inds_) {
                    auto rs = edge_roles(a, b);
                    if (rs.empty()) continue;
                    if (clashing(rs)) t.insert(kBot);
                    const Names& tb = types_[b];
                    for (const auto& [q, filler, rhs] : exl_)
                        if (rs.count(q) && (filler == kTop || tb.count(filler))) t.insert(rhs);
                }
                t = refine(std::move(t));
                if (t != types_[a]) {
                    types_[a] = std::move(t);
                    changed_ = true;
                }
            }
        }
        unsat_ = memo_.at({}).count(kBot) > 0;
        for (const auto& [a, t] : types_)
            if (t.count(kBot)) unsat_ = true;
    }

    std::set<std::string> inds_;
    std::map<std::string, Names> asserted_;
    std::set<std::tuple<std::string, std::string, std::string>> edges_;
    std::vector<std::pair<Role, Role>> ri_;
    std::vector<std::pair<Role, Role>> disjoint_;
    std::vector<std::pair<std::string, Role>> exr_;
    std::vector<std::tuple<Role, std::string, std::string>> exl_;
    std::vector<std::pair<std::vector<std::string>, std::string>> conj_;
    std::set<Role> roles_;
    std::map<Role, std::set<Role>> sub_;

    std::map<Names, Names> memo_;
    std::set<Names> reachable_;
    std::map<std::string, Names> types_;
    bool changed_ = false;
    bool unsat_ = false;
};

std::string fresh_individual(const AnnotatedOntology& o, const std::string& base) {
    Vocabulary v = vocabulary(o);
    std::string n = base;
    for (int i = 0; v.individuals.count(n); ++i) n = base + std::to_string(i);
    return n;
}

void unfold(const Concept& c, const std::string& a, int& counter, AnnotatedOntology& out) {
    switch (c.kind()) {
        case Concept::Kind::Top:
        case Concept::Kind::Bottom: break;
        case Concept::Kind::Name: out.add(ConceptAssertion{c, a}, Monomial{}); break;
        case Concept::Kind::Exists: {
            std::string b = "_ob" + std::to_string(counter++);
            const Role& r = c.role();
            out.add(r.inverted ? RoleAssertion{r.name, b, a} : RoleAssertion{r.name, a, b}, Monomial{});
            unfold(c.filler(), b, counter, out);
            break;
        }
        case Concept::Kind::And:
            for (const auto& x : c.conjuncts()) unfold(x, a, counter, out);
            break;
    }
}

RoleAssertion fact(const Role& p, const std::string& a, const std::string& b) {
    return p.inverted ? RoleAssertion{p.name, b, a} : RoleAssertion{p.name, a, b};
}

bool match(const Reasoner::Model& m, const QueryGoal& g) {
    const ConjunctiveQuery& q = g.query;
    std::map<std::string, std::size_t> bind;
    for (std::size_t i = 0; i < q.head.size(); ++i) {
        auto it = m.ids.find(g.tuple[i]);
        if (it == m.ids.end()) return false;
        const Term& h = q.head[i];
        if (!h.is_var) {
            if (h.name != g.tuple[i]) return false;
            continue;
        }
        auto [jt, fresh] = bind.emplace(h.name, it->second);
        if (!fresh && jt->second != it->second) return false;
    }
    std::vector<QueryAtom> atoms = q.atoms;
    std::stable_partition(atoms.begin(), atoms.end(), [](const QueryAtom& a) { return a.is_role; });

    std::function<bool(std::size_t)> go = [&](std::size_t i) -> bool {
        if (i == atoms.size()) return true;
        const QueryAtom& a = atoms[i];
        auto resolve = [&](const Term& t) -> std::optional<std::size_t> {
            if (!t.is_var) {
                auto it = m.ids.find(t.name);
                if (it == m.ids.end()) return std::size_t(-1);
                return it->second;
            }
            auto it = bind.find(t.name);
            if (it == bind.end()) return std::nullopt;
            return it->second;
        };
        auto try_bind = [&](const Term& t, std::size_t e, std::vector<std::string>& added) {
            auto cur = resolve(t);
            if (cur) return *cur == e;
            bind[t.name] = e;
            added.push_back(t.name);
            return true;
        };
        auto undo = [&](const std::vector<std::string>& added) {
            for (const auto& n : added) bind.erase(n);
        };
        if (!a.is_role) {
            for (std::size_t e = 0; e < m.concepts.size(); ++e) {
                if (a.pred != kTop && !m.concepts[e].count(a.pred)) continue;
                std::vector<std::string> added;
                bool ok = try_bind(a.t1, e, added) && go(i + 1);
                undo(added);
                if (ok) return true;
            }
            return false;
        }
        auto it = m.roles.find(a.role.name);
        if (it == m.roles.end()) return false;
        for (const auto& [x, y] : it->second) {
            std::size_t s = a.role.inverted ? y : x;
            std::size_t o = a.role.inverted ? x : y;
            std::vector<std::string> added;
            bool ok = try_bind(a.t1, s, added) && try_bind(a.t2, o, added) && go(i + 1);
            undo(added);
            if (ok) return true;
        }
        return false;
    };
    return go(0);
}

// Individuals named by the goal belong to every model, even when s never
// mentions them.
AnnotatedOntology with_individuals(const AnnotatedOntology& s, const std::vector<std::string>& names) {
    AnnotatedOntology out = s;
    for (const auto& a : names) out.add(ConceptAssertion{Concept::top(), a}, Monomial{});
    return out;
}

bool entails(const AnnotatedOntology& s0, const Goal& goal) {
    if (const auto* qg = std::get_if<QueryGoal>(&goal)) {
        std::vector<std::string> names = qg->tuple;
        for (const auto& at : qg->query.atoms)
            for (const Term* t : {&at.t1, &at.t2})
                if (!t->is_var && !t->name.empty()) names.push_back(t->name);
        AnnotatedOntology s = with_individuals(s0, names);
        Reasoner r(normalize(s));
        if (r.unsat()) return true;
        std::size_t depth = std::max<std::size_t>(1, qg->query.existential_vars().size());
        return match(r.materialize(depth, 200000), *qg);
    }
    const Axiom& alpha = std::get<Axiom>(goal);
    AnnotatedOntology s = s0;
    if (const auto* ca = std::get_if<ConceptAssertion>(&alpha)) s = with_individuals(s0, {ca->individual});
    if (const auto* ra = std::get_if<RoleAssertion>(&alpha)) s = with_individuals(s0, {ra->subject, ra->object});
    if (const auto* ca = std::get_if<ConceptAssertion>(&alpha)) {
        Reasoner r(normalize(s));
        return r.unsat() || r.has_concept(ca->individual, name_of(ca->cls));
    }
    if (const auto* ra = std::get_if<RoleAssertion>(&alpha)) {
        Reasoner r(normalize(s));
        return r.unsat() || r.roles_between(ra->subject, ra->object).count(ra->role) > 0;
    }
    if (const auto* g = std::get_if<Gci>(&alpha)) {
        std::string a0 = fresh_individual(s, "_oa");
        AnnotatedOntology ext = s;
        int counter = 0;
        unfold(g->lhs, a0, counter, ext);
        ext.add(ConceptAssertion{Concept::top(), a0}, Monomial{});
        Reasoner r(normalize(ext));
        if (r.unsat() || g->rhs.is_bottom()) return r.unsat();
        if (g->rhs.is_top()) return true;
        if (g->rhs.kind() == Concept::Kind::Exists) return r.has_successor(a0, g->rhs.role());
        return r.has_concept(a0, g->rhs.concept_name());
    }
    if (const auto* ri = std::get_if<RoleInclusion>(&alpha)) {
        AnnotatedOntology ext = s;
        ext.add(fact(ri->sub, "_oa", "_ob"), Monomial{});
        Reasoner r(normalize(ext));
        if (r.unsat()) return true;
        Role q = ri->super;
        return r.roles_between(q.inverted ? "_ob" : "_oa", q.inverted ? "_oa" : "_ob").count(q.name) > 0;
    }
    const auto& neg = std::get<NegRoleInclusion>(alpha);
    Reasoner base(normalize(s));
    if (base.unsat()) return true;
    AnnotatedOntology ext = s;
    ext.add(fact(neg.first, "_oa", "_ob"), Monomial{});
    ext.add(fact(neg.second, "_oa", "_ob"), Monomial{});
    return Reasoner(normalize(ext)).unsat();
}

}  // namespace

bool brute_classical_entails(const AnnotatedOntology& s, const Goal& goal, const OracleOptions& opts) {
    if (s.size() > opts.max_axioms)
        throw BoundExceeded(std::to_string(s.size()) + " axioms exceed the oracle bound of " +
                            std::to_string(opts.max_axioms));
    return entails(s, goal);
}

std::vector<Justification> brute_justifications(const AnnotatedOntology& o, const Goal& goal,
                                                const std::set<Variable>& static_vars, const OracleOptions& opts) {
    std::vector<std::size_t> movable;
    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < o.axioms().size(); ++i) {
        const auto& vars = o.axioms()[i].annotation.vars();
        bool is_static = std::any_of(vars.begin(), vars.end(), [&](const Variable& v) { return static_vars.count(v); });
        (is_static ? fixed : movable).push_back(i);
    }
    if (o.size() > opts.max_axioms)
        throw BoundExceeded(std::to_string(o.size()) + " axioms exceed the oracle bound of " +
                            std::to_string(opts.max_axioms));
    const std::size_t n = movable.size();
    std::vector<std::uint32_t> masks(std::size_t{1} << n);
    for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(),
                     [](std::uint32_t a, std::uint32_t b) { return std::popcount(a) < std::popcount(b); });
    std::vector<std::uint32_t> kept;
    for (std::uint32_t mask : masks) {
        if (std::any_of(kept.begin(), kept.end(), [&](std::uint32_t k) { return (k & mask) == k; })) continue;
        AnnotatedOntology sub;
        for (auto i : fixed) sub.add(o.axioms()[i]);
        for (std::size_t b = 0; b < n; ++b)
            if (mask >> b & 1U) sub.add(o.axioms()[movable[b]]);
        if (entails(sub, goal)) kept.push_back(mask);
    }
    std::vector<Justification> out;
    for (auto mask : kept) {
        Justification j;
        for (std::size_t b = 0; b < n; ++b)
            if (mask >> b & 1U) j.push_back(o.axioms()[movable[b]]);
        std::sort(j.begin(), j.end(), [&](const AnnotatedAxiom& x, const AnnotatedAxiom& y) {
            auto pos = [&](const AnnotatedAxiom& a) {
                return std::find(o.axioms().begin(), o.axioms().end(), a) - o.axioms().begin();
            };
            return pos(x) < pos(y);
        });
        out.push_back(std::move(j));
    }
    std::sort(out.begin(), out.end(), [](const Justification& a, const Justification& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return render(a) < render(b);
    });
    return out;
}

}  // namespace elprov
