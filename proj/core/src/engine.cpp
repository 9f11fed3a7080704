#include "engine.hpp"

#include <absl/container/flat_hash_map.h>
#include <absl/container/flat_hash_set.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "elprov/errors.hpp"
#include "visit.hpp"

// Forward chaining over interned facts. Monomials are fixed-width bitsets over
// the ontology variables. Conclusions are buffered and committed between
// worklist steps, so joins may iterate stored facts freely.
//
// CR^T_2 is realized as hyperresolution on "base" GCIs (those coming from the
// ontology, the initial set, CR^T_0, CR^T_3 and CR^T_5): for a base
// B1 and ... and Bk <= C with n, and facts (Mj <= Bj, mj), derive
// (M1 u ... u Mk <= C, n * m1 * ... * mk). Applying CR^A_1 to base GCIs only is
// enough for the same reason. CR^T_3 is split into support facts
// SUPP(Q, B, At): "B holds at a Q-successor of an instance of At", built per
// conjunct and composed along base GCIs.

namespace elprov::detail {

namespace {

constexpr int kTop = 0;
constexpr int kBot = 1;

template <int W>
struct Bits {
    std::array<std::uint64_t, W> w{};

    void set(int i) { w[static_cast<std::size_t>(i) >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(int i) const { return (w[static_cast<std::size_t>(i) >> 6] >> (i & 63)) & 1U; }
    Bits operator|(const Bits& o) const {
        Bits r;
        for (int i = 0; i < W; ++i) r.w[i] = w[i] | o.w[i];
        return r;
    }
    std::size_t count() const {
        std::size_t c = 0;
        for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
        return c;
    }
    bool operator==(const Bits&) const = default;

    template <typename H>
    friend H AbslHashValue(H h, const Bits& b) {
        return H::combine(std::move(h), b.w);
    }
};

enum Kind : std::uint8_t { CA, RA, GCI, RI, NRI, EXL, EXR, SUPP, SUPP4 };

// CA(a=concept, b=ind) RA(a=role name, b, c=inds) GCI(s=lhs set, a=rhs)
// RI(a, b roles) NRI(a <= b roles) EXL(a=role, b=filler, c=rhs) EXR(a=lhs, b=role)
// SUPP(a=role, b=concept, s=support set, c=0 elementary | 1 composed)
// SUPP4(a=role, b=concept, c=2*anchored + composed)
struct FactKey {
    Kind kind;
    std::int32_t a = 0, b = 0, c = 0, s = 0;
    bool operator==(const FactKey&) const = default;
    template <typename H>
    friend H AbslHashValue(H h, const FactKey& k) {
        return H::combine(std::move(h), k.kind, k.a, k.b, k.c, k.s);
    }
};

constexpr std::uint8_t kNew = 1;
constexpr std::uint8_t kBase = 2;

std::uint64_t pack(std::int32_t x, std::int32_t y) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) | static_cast<std::uint32_t>(y);
}

using Ids = std::vector<std::uint32_t>;

template <int W>
class Engine {
    using M = Bits<W>;

    struct Item {
        M mono;
        bool base = false;
        bool queued = false;
    };

    struct Fact {
        FactKey key;
        std::vector<Item> items;
        absl::flat_hash_map<M, std::uint32_t> index;
        bool has_base = false;
    };

    struct Task {
        std::uint32_t fact;
        std::uint32_t item;
        std::uint8_t event;
    };

    struct Pending {
        FactKey key;
        M mono;
        bool base;
    };

public:
    Engine(const AnnotatedOntology& o, const EngineOptions& opts) : opts_(opts) { load(o); }

    SaturationSet run() {
        flush();
        if (!opts_.init_only) {
            while (!queue_.empty()) {
                Task t = queue_.front();
                queue_.pop_front();
                process(t);
                flush();
            }
        }
        return export_set();
    }

private:
    // ---- symbols -------------------------------------------------------

    int concept_id(const std::string& n) {
        auto [it, fresh] = concept_ids_.emplace(n, static_cast<int>(concepts_.size()));
        if (fresh) concepts_.push_back(n);
        return it->second;
    }
    int concept_id(const Concept& c) {
        if (c.is_top()) return kTop;
        if (c.is_bottom()) return kBot;
        return concept_id(c.concept_name());
    }
    int role_name_id(const std::string& n) {
        auto [it, fresh] = role_ids_.emplace(n, static_cast<int>(roles_.size()));
        if (fresh) roles_.push_back(n);
        return it->second;
    }
    int role_id(const Role& r) { return role_name_id(r.name) * 2 + (r.inverted ? 1 : 0); }
    int ind_id(const std::string& n) {
        auto [it, fresh] = ind_ids_.emplace(n, static_cast<int>(inds_.size()));
        if (fresh) inds_.push_back(n);
        return it->second;
    }
    std::int32_t set_id(std::vector<std::int32_t> v) {
        std::erase(v, kTop);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        auto [it, fresh] = set_ids_.emplace(v, static_cast<std::int32_t>(sets_.size()));
        if (fresh) sets_.push_back(std::move(v));
        return it->second;
    }
    M mono_of(const Monomial& m) {
        M r;
        if (opts_.mode == EngineMode::Classical) return r;
        for (const auto& v : m.vars()) r.set(var_ids_.at(v));
        return r;
    }

    // ---- loading --------------------------------------------------------

    void load(const AnnotatedOntology& o) {
        concepts_ = {"top", "bot"};
        sets_.push_back({});
        set_ids_.emplace(std::vector<std::int32_t>{}, 0);
        Vocabulary voc = vocabulary(o);
        for (const auto& v : voc.variables) {
            var_ids_.emplace(v, static_cast<int>(vars_.size()));
            vars_.push_back(v);
        }
        for (const auto& c : voc.concepts) concept_id(c);
        for (const auto& r : voc.roles) role_name_id(r);
        for (const auto& i : voc.individuals) ind_id(i);
        std::size_t nc = concepts_.size();
        std::size_t nr = roles_.size() * 2;
        ca_by_concept_.resize(nc);
        gci_by_rhs_.resize(nc);
        base_by_conj_.resize(nc);
        exl_by_filler_.resize(nc);
        supp_by_b_.resize(nc);
        supp4_by_b_.resize(nc);
        ra_by_role_.resize(roles_.size());
        ri_by_sub_.resize(nr);
        ri_by_super_.resize(nr);
        nri_partners_.resize(nr);
        exl_by_role_.resize(nr);
        exr_by_role_.resize(nr);
        supp_by_q_.resize(nr);
        is_ex_.assign(nr, false);

        for (const auto& ax : o.axioms()) {
            M m = mono_of(ax.annotation);
            std::visit(Overloaded{
                           [&](const ConceptAssertion& x) {
                               add(FactKey{CA, concept_id(x.cls), ind_id(x.individual)}, m);
                           },
                           [&](const RoleAssertion& x) {
                               add(FactKey{RA, role_name_id(x.role), ind_id(x.subject), ind_id(x.object)}, m);
                           },
                           [&](const Gci& g) { load_gci(g, m); },
                           [&](const RoleInclusion& r) {
                               int p = role_id(r.sub), q = role_id(r.super);
                               add(FactKey{RI, p, q}, m);
                               add(FactKey{RI, p ^ 1, q ^ 1}, m);
                           },
                           [&](const NegRoleInclusion& n) {
                               int p = role_id(n.first), q = role_id(n.second);
                               add_nri(p, q, m);
                               add_nri(p ^ 1, q ^ 1, m);
                           },
                       },
                       ax.axiom);
        }
        M unit;
        for (std::size_t i = 0; i < inds_.size(); ++i) add(FactKey{CA, kTop, static_cast<int>(i)}, unit);
        for (std::size_t c = 0; c < nc; ++c) {
            int ci = static_cast<int>(c);
            add(FactKey{GCI, ci, 0, 0, c == kTop ? 0 : set_id({ci})}, unit);
        }
        for (int p = 0; p < static_cast<int>(nr); ++p) {
            add(FactKey{RI, p, p}, unit);
            add(FactKey{EXL, p, kBot, kBot}, unit);
        }
        for (int p = 0; p < static_cast<int>(nr); ++p) all_roles_.push_back(p);
    }

    void load_gci(const Gci& g, const M& m) {
        const Concept& l = g.lhs;
        const Concept& r = g.rhs;
        if (r.kind() == Concept::Kind::Exists) {
            int q = role_id(r.role());
            is_ex_[q] = true;
            add(FactKey{EXR, concept_id(l), q}, m);
        } else if (l.kind() == Concept::Kind::Exists) {
            add(FactKey{EXL, role_id(l.role()), concept_id(l.filler()), concept_id(r)}, m);
        } else if (l.kind() == Concept::Kind::And) {
            std::vector<std::int32_t> s;
            for (const auto& c : l.conjuncts()) s.push_back(concept_id(c));
            add(FactKey{GCI, concept_id(r), 0, 0, set_id(s)}, m);
        } else {
            add(FactKey{GCI, concept_id(r), 0, 0, set_id({concept_id(l)})}, m);
        }
    }

    void add_nri(int p, int q, const M& m) {
        if (q < p) std::swap(p, q);
        add(FactKey{NRI, p, q}, m);
    }

    void add(const FactKey& k, const M& m) { pending_.push_back({k, m, true}); }

    // ---- storage --------------------------------------------------------

    void derive(const FactKey& k, const M& m, bool base = true) {
        if (m.count() > opts_.max_size) return;
        pending_.push_back({k, m, base});
    }

    void derive_gci(std::vector<std::int32_t> lhs, int rhs, const M& m, bool base) {
        if (m.count() > opts_.max_size) return;
        derive(FactKey{GCI, rhs, 0, 0, set_id(std::move(lhs))}, m, base);
    }

    int find(const FactKey& k) const {
        auto it = fact_ids_.find(k);
        return it == fact_ids_.end() ? -1 : static_cast<int>(it->second);
    }

    void flush() {
        std::vector<Pending> batch;
        batch.swap(pending_);
        for (auto& p : batch) commit(p);
    }

    void commit(const Pending& p) {
        auto [it, fresh] = fact_ids_.emplace(p.key, static_cast<std::uint32_t>(facts_.size()));
        std::uint32_t fid = it->second;
        if (fresh) {
            facts_.push_back(Fact{p.key, {}, {}, false});
            register_fact(fid);
        }
        Fact& f = facts_[fid];
        bool became_base = p.base && !f.has_base;
        if (opts_.mode == EngineMode::Lin) {
            if (f.items.empty()) {
                f.items.push_back({p.mono, p.base, false});
            } else {
                Item& it0 = f.items[0];
                M merged = it0.mono | p.mono;
                if (merged == it0.mono && (!p.base || it0.base)) return;
                it0.mono = merged;
                it0.base = it0.base || p.base;
            }
            if (became_base) mark_base(fid);
            if (!f.items[0].queued) {
                f.items[0].queued = true;
                queue_.push_back({fid, 0, static_cast<std::uint8_t>(kNew | kBase)});
            }
            return;
        }
        auto [mit, mfresh] = f.index.emplace(p.mono, static_cast<std::uint32_t>(f.items.size()));
        if (mfresh) {
            f.items.push_back({p.mono, p.base, false});
            if (became_base) mark_base(fid);
            queue_.push_back({fid, mit->second, static_cast<std::uint8_t>(kNew | (p.base ? kBase : 0))});
        } else if (p.base && !f.items[mit->second].base) {
            f.items[mit->second].base = true;
            if (became_base) mark_base(fid);
            queue_.push_back({fid, mit->second, kBase});
        }
    }

    void mark_base(std::uint32_t fid) {
        Fact& f = facts_[fid];
        f.has_base = true;
        if (f.key.kind != GCI) return;
        const auto& s = sets_[f.key.s];
        if (s.empty()) base_by_conj_[kTop].push_back(fid);
        for (auto c : s) base_by_conj_[c].push_back(fid);
    }

    void register_fact(std::uint32_t fid) {
        const FactKey k = facts_[fid].key;
        switch (k.kind) {
            case CA: ca_by_concept_[k.a].push_back(fid); break;
            case RA:
                ra_by_role_[k.a].push_back(fid);
                ra_by_subj_[pack(k.a, k.b)].push_back(fid);
                ra_by_obj_[pack(k.a, k.c)].push_back(fid);
                break;
            case GCI: gci_by_rhs_[k.a].push_back(fid); break;
            case RI:
                ri_by_sub_[k.a].push_back(fid);
                ri_by_super_[k.b].push_back(fid);
                break;
            case NRI:
                nri_partners_[k.a].push_back({k.b, fid});
                if (k.a != k.b) nri_partners_[k.b].push_back({k.a, fid});
                break;
            case EXL:
                exl_by_role_[k.a].push_back(fid);
                exl_by_filler_[k.b].push_back(fid);
                exl_by_rf_[pack(k.a, k.b)].push_back(fid);
                break;
            case EXR: exr_by_role_[k.b].push_back(fid); break;
            case SUPP:
                supp_by_q_[k.a].push_back(fid);
                supp_by_qb_[pack(k.a, k.b)].push_back(fid);
                supp_by_b_[k.b].push_back(fid);
                break;
            case SUPP4:
                supp4_by_pb_[pack(k.a, k.b)].push_back(fid);
                supp4_by_b_[k.b].push_back(fid);
                break;
        }
    }

    const Ids& lookup(const absl::flat_hash_map<std::uint64_t, Ids>& idx, std::uint64_t key) const {
        auto it = idx.find(key);
        return it == idx.end() ? empty_ : it->second;
    }

    template <typename F>
    void each(std::uint32_t fid, F&& f) const {
        for (const auto& it : facts_[fid].items) f(it.mono);
    }
    template <typename F>
    void each_base(std::uint32_t fid, F&& f) const {
        for (const auto& it : facts_[fid].items)
            if (it.base) f(it.mono);
    }

    // One fact per level; f(picked facts, distinct unions of start with one
    // item of each picked fact).
    template <typename F>
    void choose(const std::vector<Ids>& levels, const std::vector<M>& start, F&& f) const {
        if (start.empty()) return;
        Ids picked;
        choose_facts(levels, 0, start, picked, f);
    }
    template <typename F>
    void choose_facts(const std::vector<Ids>& levels, std::size_t i, const std::vector<M>& start, Ids& picked,
                      F& f) const {
        if (i == levels.size()) {
            std::vector<M> monos = start;
            for (auto fid : picked) monos = product(monos, fid);
            if (!monos.empty()) f(picked, monos);
            return;
        }
        for (std::uint32_t fid : levels[i]) {
            picked.push_back(fid);
            choose_facts(levels, i + 1, start, picked, f);
            picked.pop_back();
        }
    }
    std::vector<M> product(const std::vector<M>& cur, std::uint32_t fid) const {
        std::vector<M> next;
        absl::flat_hash_set<M> seen;
        for (const auto& a : cur)
            for (const auto& it : facts_[fid].items) {
                M x = a | it.mono;
                if (x.count() > opts_.max_size) continue;
                if (seen.insert(x).second) next.push_back(x);
            }
        return next;
    }

    std::vector<M> base_monos(std::uint32_t g, const M& m) const {
        std::vector<M> out;
        each_base(g, [&](const M& n) {
            if (!is_unit_identity(facts_[g].key, n)) out.push_back(m | n);
        });
        return out;
    }

    bool is_unit_identity(const FactKey& g, const M& n) const {
        if (n != M{}) return false;
        const auto& s = sets_[g.s];
        return s.empty() ? g.a == kTop : (s.size() == 1 && s[0] == g.a);
    }

    // Facts RA witnessing holds(P, x, y) for fixed y; calls f(x, fid).
    template <typename F>
    void edges_into(int p, int y, F&& f) const {
        int r = p >> 1;
        if ((p & 1) == 0) {
            for (auto fid : lookup(ra_by_obj_, pack(r, y))) f(facts_[fid].key.b, fid);
        } else {
            for (auto fid : lookup(ra_by_subj_, pack(r, y))) f(facts_[fid].key.c, fid);
        }
    }

    int holds(int p, int x, int y) const {
        int r = p >> 1;
        return (p & 1) == 0 ? find(FactKey{RA, r, x, y}) : find(FactKey{RA, r, y, x});
    }

    void derive_holds(int p, int x, int y, const M& m) {
        int r = p >> 1;
        if ((p & 1) == 0) {
            derive(FactKey{RA, r, x, y}, m);
        } else {
            derive(FactKey{RA, r, y, x}, m);
        }
    }

    // ---- rules ------------------------------------------------------------

    void process(const Task& t) {
        Fact& f = facts_[t.fact];
        if (opts_.mode == EngineMode::Lin) f.items[t.item].queued = false;
        const FactKey k = f.key;
        const M m = f.items[t.item].mono;
        const bool base = f.items[t.item].base;
        switch (k.kind) {
            case CA:
                if (t.event & kNew) on_ca(k.a, k.b, m);
                break;
            case RA:
                if (t.event & kNew) on_ra(k.a, k.b, k.c, m);
                break;
            case GCI:
                if (t.event & kNew) on_gci_left(t.fact, m);
                if ((t.event & kBase) && base) on_gci_base(t.fact, m);
                break;
            case RI:
                if (t.event & kNew) on_ri(k.a, k.b, m);
                break;
            case EXL:
                if (t.event & kNew) on_exl(k.a, k.b, k.c, m);
                break;
            case SUPP:
                if (t.event & kNew) on_supp(t.fact, m);
                break;
            case SUPP4:
                if (t.event & kNew) on_supp4(t.fact, m);
                break;
            case NRI:
            case EXR: break;  // static; consulted by the other rules
        }
    }

    // CR^A_1 for base g at individual a, with conjunct `fixed` bound to m.
    void apply_ca1(std::uint32_t g, int a, int fixed, const M& m) {
        const FactKey gk = facts_[g].key;
        std::vector<Ids> levels;
        for (auto x : sets_[gk.s]) {
            if (x == fixed) continue;
            int fid = find(FactKey{CA, x, a});
            if (fid < 0) return;
            levels.push_back({static_cast<std::uint32_t>(fid)});
        }
        choose(levels, base_monos(g, m), [&](const Ids&, const std::vector<M>& ms) {
            for (const auto& x : ms) derive(FactKey{CA, gk.a, a}, x);
        });
    }

    void on_ca(int c, int a, const M& m) {
        for (auto g : base_by_conj_[c]) {
            if (c == kTop && !sets_[facts_[g].key.s].empty()) continue;
            apply_ca1(g, a, c, m);
        }
        for (auto e : exl_by_filler_[c]) {
            const FactKey ek = facts_[e].key;
            edges_into(ek.a, a, [&](int x, std::uint32_t edge) {
                each(edge, [&](const M& me) { each(e, [&](const M& n) { derive(FactKey{CA, ek.c, x}, m | me | n); }); });
            });
        }
    }

    void on_ra(int r, int a, int b, const M& m) {
        int p = r * 2;
        for (auto e : exl_by_role_[p]) {
            const FactKey ek = facts_[e].key;
            int ca = find(FactKey{CA, ek.b, b});
            if (ca < 0) continue;
            each(ca, [&](const M& mc) { each(e, [&](const M& n) { derive(FactKey{CA, ek.c, a}, m | mc | n); }); });
        }
        for (auto e : exl_by_role_[p | 1]) {
            const FactKey ek = facts_[e].key;
            int ca = find(FactKey{CA, ek.b, a});
            if (ca < 0) continue;
            each(ca, [&](const M& mc) { each(e, [&](const M& n) { derive(FactKey{CA, ek.c, b}, m | mc | n); }); });
        }
        for (auto ri : ri_by_sub_[p]) {
            int q = facts_[ri].key.b;
            each(ri, [&](const M& n) { derive_holds(q, a, b, m | n); });
        }
        auto clash = [&](int x, int other, std::uint32_t nri, int who) {
            if (other < 0) return;
            each(static_cast<std::uint32_t>(other), [&](const M& mo) {
                each(nri, [&](const M& n) { derive(FactKey{CA, kBot, who}, m | mo | n); });
            });
            (void)x;
        };
        for (auto [y, nri] : nri_partners_[p]) clash(p, holds(y, a, b), nri, a);
        for (auto [x, nri] : nri_partners_[p | 1])
            if ((x & 1) == 0) clash(x, holds(x, b, a), nri, b);
    }

    void on_gci_left(std::uint32_t fid, const M& m) {
        const FactKey k = facts_[fid].key;
        const auto lhs = sets_[k.s];
        const int c = k.a;
        if (!opts_.restricted || lhs.size() <= 2) {
            for (auto g : base_by_conj_[c]) {
                const FactKey gk = facts_[g].key;
                const auto& gs = sets_[gk.s];
                if (c == kTop && !gs.empty()) continue;
                if (gs.empty()) continue;
                if (opts_.restricted && gs.size() != 1) continue;
                std::vector<Ids> levels;
                for (auto x : gs)
                    if (x != c) levels.push_back(gci_by_rhs_[x]);
                choose(levels, base_monos(g, m), [&](const Ids& facts, const std::vector<M>& ms) {
                    std::vector<std::int32_t> u = lhs;
                    for (auto f : facts) {
                        const auto& s = sets_[facts_[f].key.s];
                        u.insert(u.end(), s.begin(), s.end());
                    }
                    FactKey key{GCI, gk.a, 0, 0, set_id(std::move(u))};
                    for (const auto& x : ms) derive(key, x, false);
                });
            }
        }
        if (!lhs.empty()) return;
        for (int q = 0; q < static_cast<int>(is_ex_.size()); ++q)
            if (is_ex_[q]) derive(FactKey{SUPP, q, c, 0, 0}, m);
        if (!opts_.restricted) return;
        if (c != kTop)
            for (int p : all_roles_) derive(FactKey{SUPP4, p, c, 0}, m);
        // CR^T_5
        for (auto g : base_by_conj_[c]) {
            const FactKey gk = facts_[g].key;
            const auto& gs = sets_[gk.s];
            if (gs.size() != 2) continue;
            int other = gs[0] == c ? gs[1] : gs[0];
            int t = find(FactKey{GCI, other, 0, 0, 0});
            if (t < 0) continue;
            each_base(g, [&](const M& n) {
                each(static_cast<std::uint32_t>(t), [&](const M& o2) { derive_gci({}, gk.a, m | n | o2, true); });
            });
        }
    }

    void on_gci_base(std::uint32_t g, const M& n) {
        const FactKey gk = facts_[g].key;
        if (is_unit_identity(gk, n)) return;
        const auto gs = sets_[gk.s];
        const int d = gk.a;

        // Hyperresolution with g as the base.
        if (!gs.empty() && (!opts_.restricted || gs.size() == 1)) {
            std::vector<Ids> levels;
            for (auto x : gs) {
                if (!opts_.restricted) {
                    levels.push_back(gci_by_rhs_[x]);
                    continue;
                }
                Ids small;
                for (auto f : gci_by_rhs_[x])
                    if (sets_[facts_[f].key.s].size() <= 2) small.push_back(f);
                levels.push_back(std::move(small));
            }
            choose(levels, {n}, [&](const Ids& facts, const std::vector<M>& ms) {
                std::vector<std::int32_t> u;
                for (auto f : facts) {
                    const auto& s = sets_[facts_[f].key.s];
                    u.insert(u.end(), s.begin(), s.end());
                }
                FactKey key{GCI, d, 0, 0, set_id(std::move(u))};
                for (const auto& x : ms) derive(key, x, false);
            });
        }

        // CR^A_1
        if (gs.empty()) {
            for (auto ca : ca_by_concept_[kTop]) {
                int a = facts_[ca].key.b;
                each(ca, [&](const M& mc) { derive(FactKey{CA, d, a}, n | mc); });
            }
        } else {
            for (auto ca : ca_by_concept_[gs[0]]) {
                int a = facts_[ca].key.b;
                std::vector<Ids> levels;
                bool ok = true;
                for (auto x : gs) {
                    int fid = find(FactKey{CA, x, a});
                    if (fid < 0) {
                        ok = false;
                        break;
                    }
                    levels.push_back({static_cast<std::uint32_t>(fid)});
                }
                if (!ok) continue;
                choose(levels, {n}, [&](const Ids&, const std::vector<M>& ms) {
                    for (const auto& x : ms) derive(FactKey{CA, d, a}, x);
                });
            }
        }

        if (gs.empty()) return;
        compose_supp_from_base(g, n, -1, 0, M{});
        if (opts_.restricted) compose_supp4_from_base(g, n, -1, M{});

        // CR^T_5
        if (opts_.restricted && gs.size() == 2) {
            int t0 = find(FactKey{GCI, gs[0], 0, 0, 0});
            int t1 = find(FactKey{GCI, gs[1], 0, 0, 0});
            if (t0 >= 0 && t1 >= 0) {
                each(static_cast<std::uint32_t>(t0), [&](const M& a0) {
                    each(static_cast<std::uint32_t>(t1), [&](const M& a1) { derive_gci({}, d, n | a0 | a1, true); });
                });
            }
        }
    }

    void on_ri(int p, int q, const M& m) {
        for (auto r : ri_by_super_[p]) {
            int x = facts_[r].key.a;
            each(r, [&](const M& n) { derive(FactKey{RI, x, q}, m | n); });
        }
        for (auto r : ri_by_sub_[q]) {
            int y = facts_[r].key.b;
            each(r, [&](const M& n) { derive(FactKey{RI, p, y}, m | n); });
        }
        if ((p & 1) == 0) {
            for (auto ra : ra_by_role_[p >> 1]) {
                const FactKey rk = facts_[ra].key;
                each(ra, [&](const M& n) { derive_holds(q, rk.b, rk.c, m | n); });
            }
        }
        if (opts_.restricted) {
            for (auto e : lookup(exl_by_rf_, pack(q, kTop))) {
                int b = facts_[e].key.c;
                each(e, [&](const M& n) { derive(FactKey{SUPP4, p, b, 2}, m | n); });
            }
        }
        if (!is_ex_[p]) return;
        // CR^T_0
        for (auto [y, nri] : nri_partners_[q]) {
            int r2 = find(FactKey{RI, p, y});
            if (r2 < 0) continue;
            each(static_cast<std::uint32_t>(r2), [&](const M& m2) {
                each(nri, [&](const M& m3) {
                    for (auto x : exr_by_role_[p]) {
                        int a = facts_[x].key.a;
                        each(x, [&](const M& m0) { derive_gci({a}, kBot, m | m2 | m3 | m0, true); });
                    }
                });
            });
        }
        // CR^T_3, elementary supports
        for (auto e : exl_by_role_[q ^ 1]) {
            const FactKey ek = facts_[e].key;
            if (ek.b == kBot || (opts_.restricted && ek.b != kTop)) continue;
            std::int32_t at = set_id({ek.b});
            each(e, [&](const M& n) { derive(FactKey{SUPP, p, ek.c, 0, at}, m | n); });
        }
        // CR^T_3, conclusion
        for (auto s : supp_by_q_[p]) {
            const FactKey sk = facts_[s].key;
            for (auto e : lookup(exl_by_rf_, pack(q, sk.b))) conclude_ct3(p, sk, s, e, m);
        }
    }

    // EXR(A, q) x RI(q <= P, m) x SUPP s x EXL(P, C, D) e
    void conclude_ct3(int q, const FactKey& sk, std::uint32_t s, std::uint32_t e, const M& m) {
        int d = facts_[e].key.c;
        for (auto x : exr_by_role_[q]) {
            std::vector<std::int32_t> lhs = sets_[sk.s];
            lhs.push_back(facts_[x].key.a);
            each(x, [&](const M& m0) {
                each(s, [&](const M& ms) { each(e, [&](const M& o) { derive_gci(lhs, d, m | m0 | ms | o, true); }); });
            });
        }
    }

    void on_exl(int p, int a, int b, const M& n) {
        for (auto ca : ca_by_concept_[a]) {
            int y = facts_[ca].key.b;
            edges_into(p, y, [&](int x, std::uint32_t edge) {
                each(ca, [&](const M& mc) { each(edge, [&](const M& me) { derive(FactKey{CA, b, x}, n | mc | me); }); });
            });
        }
        if (a != kBot && (!opts_.restricted || a == kTop)) {
            std::int32_t at = set_id({a});
            for (auto r : ri_by_super_[p ^ 1]) {
                int q = facts_[r].key.a;
                if (!is_ex_[q]) continue;
                each(r, [&](const M& mr) { derive(FactKey{SUPP, q, b, 0, at}, n | mr); });
            }
        }
        if (opts_.restricted && a == kTop) {
            for (auto r : ri_by_super_[p]) {
                int x = facts_[r].key.a;
                each(r, [&](const M& mr) { derive(FactKey{SUPP4, x, b, 2}, n | mr); });
            }
        }
        for (auto r : ri_by_super_[p]) {
            int q = facts_[r].key.a;
            if (!is_ex_[q]) continue;
            for (auto s : lookup(supp_by_qb_, pack(q, a))) {
                const FactKey sk = facts_[s].key;
                each(r, [&](const M& mr) {
                    for (auto x : exr_by_role_[q]) {
                        std::vector<std::int32_t> lhs = sets_[sk.s];
                        lhs.push_back(facts_[x].key.a);
                        each(x, [&](const M& m0) {
                            each(s, [&](const M& ms) { derive_gci(lhs, b, n | mr | m0 | ms, true); });
                        });
                    }
                });
            }
        }
    }

    // Composes SUPP facts along base g. When fixed_fact >= 0 that fact (with
    // monomial fixed_mono) supplies conjunct fixed_concept.
    void compose_supp_from_base(std::uint32_t g, const M& n, int fixed_fact, int fixed_concept, const M& fixed_mono) {
        const FactKey gk = facts_[g].key;
        const auto gs = sets_[gk.s];
        if (opts_.restricted && gs.size() > 2) return;
        std::vector<int> roles;
        if (fixed_fact >= 0) {
            roles.push_back(facts_[fixed_fact].key.a);
        } else {
            for (auto s : supp_by_b_[gs[0]]) roles.push_back(facts_[s].key.a);
            std::sort(roles.begin(), roles.end());
            roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
        }
        for (int q : roles) {
            std::vector<Ids> levels;
            bool ok = true;
            for (auto x : gs) {
                if (x == fixed_concept && fixed_fact >= 0) continue;
                Ids l;
                for (auto s : lookup(supp_by_qb_, pack(q, x)))
                    if (!(opts_.restricted && gs.size() == 2 && facts_[s].key.c != 0)) l.push_back(s);
                if (l.empty()) {
                    ok = false;
                    break;
                }
                levels.push_back(std::move(l));
            }
            if (!ok) continue;
            std::vector<std::int32_t> base_at;
            if (fixed_fact >= 0) base_at = sets_[facts_[fixed_fact].key.s];
            int kind = opts_.restricted ? 1 : 0;
            choose(levels, {n | fixed_mono}, [&](const Ids& facts, const std::vector<M>& ms) {
                std::vector<std::int32_t> at = base_at;
                for (auto f : facts) {
                    const auto& s = sets_[facts_[f].key.s];
                    at.insert(at.end(), s.begin(), s.end());
                }
                FactKey key{SUPP, q, gk.a, kind, set_id(std::move(at))};
                for (const auto& x : ms) derive(key, x);
            });
        }
    }

    void compose_supp4_from_base(std::uint32_t g, const M& n, int fixed_fact, const M& fixed_mono) {
        const FactKey gk = facts_[g].key;
        const auto gs = sets_[gk.s];
        if (gs.size() > 2) return;
        int fixed_concept = fixed_fact >= 0 ? facts_[fixed_fact].key.b : -1;
        std::vector<int> roles;
        if (fixed_fact >= 0) {
            roles.push_back(facts_[fixed_fact].key.a);
        } else {
            for (auto s : supp4_by_b_[gs[0]]) roles.push_back(facts_[s].key.a);
            std::sort(roles.begin(), roles.end());
            roles.erase(std::unique(roles.begin(), roles.end()), roles.end());
        }
        for (int p : roles) {
            std::vector<Ids> levels;
            bool ok = true;
            for (auto x : gs) {
                if (x == fixed_concept) continue;
                Ids l;
                for (auto s : lookup(supp4_by_pb_, pack(p, x)))
                    if (!(gs.size() == 2 && (facts_[s].key.c & 1) != 0)) l.push_back(s);
                if (l.empty()) {
                    ok = false;
                    break;
                }
                levels.push_back(std::move(l));
            }
            if (!ok) continue;
            int anchored = fixed_fact >= 0 ? (facts_[fixed_fact].key.c >> 1) : 0;
            choose(levels, {n | fixed_mono}, [&](const Ids& facts, const std::vector<M>& ms) {
                int anc = anchored;
                for (auto f : facts) anc |= facts_[f].key.c >> 1;
                for (const auto& x : ms) derive(FactKey{SUPP4, p, gk.a, anc * 2 + 1}, x);
            });
        }
    }

    void on_supp(std::uint32_t s, const M& ms) {
        const FactKey sk = facts_[s].key;
        for (auto r : ri_by_sub_[sk.a]) {
            int p = facts_[r].key.b;
            for (auto e : lookup(exl_by_rf_, pack(p, sk.b))) {
                each(r, [&](const M& mr) {
                    int d = facts_[e].key.c;
                    for (auto x : exr_by_role_[sk.a]) {
                        std::vector<std::int32_t> lhs = sets_[sk.s];
                        lhs.push_back(facts_[x].key.a);
                        each(x, [&](const M& m0) {
                            each(e, [&](const M& o) { derive_gci(lhs, d, ms | mr | m0 | o, true); });
                        });
                    }
                });
            }
        }
        if (sk.b == kTop) return;
        for (auto g : base_by_conj_[sk.b]) {
            const auto& gs = sets_[facts_[g].key.s];
            if (gs.empty()) continue;
            if (opts_.restricted && gs.size() == 2 && sk.c != 0) continue;
            each_base(g, [&](const M& n) {
                if (is_unit_identity(facts_[g].key, n)) return;
                compose_supp_from_base(g, n, static_cast<int>(s), sk.b, ms);
            });
        }
    }

    void on_supp4(std::uint32_t s, const M& ms) {
        const FactKey sk = facts_[s].key;
        if ((sk.c >> 1) && sk.b != kTop) derive(FactKey{EXL, sk.a, kTop, sk.b}, ms);
        if (sk.b == kTop) return;
        for (auto g : base_by_conj_[sk.b]) {
            const auto& gs = sets_[facts_[g].key.s];
            if (gs.empty()) continue;
            if (gs.size() == 2 && (sk.c & 1) != 0) continue;
            each_base(g, [&](const M& n) {
                if (is_unit_identity(facts_[g].key, n)) return;
                compose_supp4_from_base(g, n, static_cast<int>(s), ms);
            });
        }
    }

    // ---- export -----------------------------------------------------------

    Concept concept_of(int c) const {
        if (c == kTop) return Concept::top();
        if (c == kBot) return Concept::bottom();
        return Concept::name(concepts_[c]);
    }
    Role role_of(int p) const { return {roles_[p >> 1], (p & 1) != 0}; }

    Monomial to_monomial(const M& m) const {
        std::vector<Variable> vs;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (m.test(static_cast<int>(i))) vs.push_back(vars_[i]);
        return Monomial(std::move(vs));
    }

    SaturationSet export_set() const {
        SaturationSet::Entries out;
        for (const auto& f : facts_) {
            const FactKey& k = f.key;
            Axiom ax;
            switch (k.kind) {
                case CA: ax = ConceptAssertion{concept_of(k.a), inds_[k.b]}; break;
                case RA: ax = RoleAssertion{roles_[k.a], inds_[k.b], inds_[k.c]}; break;
                case GCI: {
                    std::vector<Concept> parts;
                    for (auto c : sets_[k.s]) parts.push_back(concept_of(c));
                    ax = Gci{Concept::conj(std::move(parts)), concept_of(k.a)};
                    break;
                }
                case RI: ax = RoleInclusion{role_of(k.a), role_of(k.b)}; break;
                case NRI: ax = make_neg_ri(role_of(k.a), role_of(k.b)); break;
                case EXL: ax = Gci{Concept::exists(role_of(k.a), concept_of(k.b)), concept_of(k.c)}; break;
                case EXR: ax = Gci{concept_of(k.a), Concept::exists(role_of(k.b))}; break;
                case SUPP:
                case SUPP4: continue;
            }
            auto& monos = out[ax];
            for (const auto& it : f.items) monos.insert(to_monomial(it.mono));
        }
        return SaturationSet(std::move(out), {inds_.begin(), inds_.end()});
    }

    EngineOptions opts_;

    std::vector<std::string> concepts_, roles_, inds_, vars_;
    absl::flat_hash_map<std::string, int> concept_ids_, role_ids_, ind_ids_, var_ids_;
    // Grows inside rules; copy an entry before any call that may intern a set.
    std::vector<std::vector<std::int32_t>> sets_;
    absl::flat_hash_map<std::vector<std::int32_t>, std::int32_t> set_ids_;

    std::vector<Fact> facts_;
    absl::flat_hash_map<FactKey, std::uint32_t> fact_ids_;
    std::vector<Pending> pending_;
    std::deque<Task> queue_;

    std::vector<Ids> ca_by_concept_, gci_by_rhs_, base_by_conj_, exl_by_filler_, supp_by_b_, supp4_by_b_;
    std::vector<Ids> ra_by_role_, ri_by_sub_, ri_by_super_, exl_by_role_, exr_by_role_, supp_by_q_;
    std::vector<std::vector<std::pair<int, std::uint32_t>>> nri_partners_;
    absl::flat_hash_map<std::uint64_t, Ids> ra_by_subj_, ra_by_obj_, exl_by_rf_, supp_by_qb_, supp4_by_pb_;
    std::vector<bool> is_ex_;
    std::vector<int> all_roles_;
    const Ids empty_;
};

}  // namespace

SaturationSet run_engine(const AnnotatedOntology& o, const EngineOptions& opts) {
    std::size_t nvars = opts.mode == EngineMode::Classical ? 0 : vocabulary(o).variables.size();
    if (nvars <= 64) return Engine<1>(o, opts).run();
    if (nvars <= 256) return Engine<4>(o, opts).run();
    if (nvars <= 1024) return Engine<16>(o, opts).run();
    if (nvars <= 4096) return Engine<64>(o, opts).run();
    throw Error("saturation supports at most 4096 annotation variables, got " + std::to_string(nvars));
}

}  // namespace elprov::detail
