#include "tabint/domains/sharefree.hpp"

#include "tabint/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace tabint::shfr {

namespace {

struct ShFrRep final : SubstRep {
    Sharing sharing;
    // Parallel to the variable set: 1 = definitely a free (unbound) variable.
    std::vector<std::uint8_t> free;
};

using RepPtr = std::shared_ptr<const SubstRep>;

const ShFrRep& as_sf(const SubstRep& r) { return static_cast<const ShFrRep&>(r); }

Group sorted_group(Group g) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

void canon(Sharing& sh) {
    for (Group& g : sh)
        g = sorted_group(std::move(g));
    sh.erase(std::remove_if(sh.begin(), sh.end(), [](const Group& g) { return g.empty(); }),
             sh.end());
    std::sort(sh.begin(), sh.end());
    sh.erase(std::unique(sh.begin(), sh.end()), sh.end());
}

bool occurs(const Sharing& sh, VarId v) {
    for (const Group& g : sh)
        if (std::binary_search(g.begin(), g.end(), v))
            return true;
    return false;
}

bool contains_group(const Sharing& sh, const Group& g) {
    return std::binary_search(sh.begin(), sh.end(), g);
}

Group group_union(const Group& a, const Group& b) {
    Group out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool group_meets(const Group& g, const std::vector<VarId>& vars) {
    for (VarId v : vars)
        if (std::binary_search(g.begin(), g.end(), v))
            return true;
    return false;
}

Sharing pairwise_union(const Sharing& a, const Sharing& b) {
    Sharing out;
    out.reserve(a.size() * b.size());
    for (const Group& ga : a)
        for (const Group& gb : b)
            out.push_back(group_union(ga, gb));
    canon(out);
    return out;
}

// Enforces the representation invariant: free marks only on variables that
// still occur in some group.
void repair_freeness(const Sharing& sh, const VarSet& vs, std::vector<std::uint8_t>& free) {
    for (size_t i = 0; i < vs.size(); ++i)
        if (free[i] && !occurs(sh, vs.ids[i]))
            free[i] = 0;
}

// All non-empty subsets of vars as groups. Guarded by the closure limit.
Sharing power_sharing(const std::vector<VarId>& vars) {
    if (vars.size() > kClosureLimit)
        throw ResourceLimitError("sharing width limit exceeded: " + std::to_string(vars.size()) +
                                 " unconstrained variables > " + std::to_string(kClosureLimit));
    Group sorted = sorted_group(vars);
    Sharing out;
    size_t n = sorted.size();
    for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
        Group g;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i))
                g.push_back(sorted[i]);
        out.push_back(std::move(g));
    }
    canon(out);
    return out;
}

struct AmguState {
    Sharing sh;
    std::vector<std::uint8_t> free;
};

// Abstract unification step for x = t (classic set-sharing amgu with
// freeness refinement). Mutates st in place.
void amgu_step(const VarSet& vs, AmguState& st, VarId x, const Term& t) {
    std::vector<VarId> tv = t.vars();
    int xi = vs.index_of(x);

    Sharing sh_x, sh_t, rest;
    for (const Group& g : st.sh) {
        bool in_x = std::binary_search(g.begin(), g.end(), x);
        bool in_t = group_meets(g, tv);
        if (in_x)
            sh_x.push_back(g);
        if (in_t)
            sh_t.push_back(g);
        if (!in_x && !in_t)
            rest.push_back(g);
    }

    bool x_ground = sh_x.empty();
    bool t_ground = sh_t.empty(); // includes the no-variables case

    if (x_ground && t_ground)
        return;

    if (t_ground) {
        // x becomes ground; everything that may share with x loses freeness,
        // and groups through x disappear.
        Sharing out;
        for (const Group& g : st.sh)
            if (!std::binary_search(g.begin(), g.end(), x))
                out.push_back(g);
        for (const Group& g : sh_x)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
        st.free[xi] = 0;
        st.sh = std::move(out);
        canon(st.sh);
        repair_freeness(st.sh, vs, st.free);
        return;
    }

    if (x_ground) {
        // t becomes ground.
        Sharing out;
        for (const Group& g : st.sh)
            if (!group_meets(g, tv))
                out.push_back(g);
        for (const Group& g : sh_t)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
        st.sh = std::move(out);
        canon(st.sh);
        repair_freeness(st.sh, vs, st.free);
        return;
    }

    Sharing merged = pairwise_union(star_union(sh_x), star_union(sh_t));
    Sharing out = std::move(rest);
    out.insert(out.end(), merged.begin(), merged.end());
    canon(out);
    st.sh = std::move(out);

    bool x_free = st.free[xi] != 0;
    bool t_free_var = t.is_var() && st.free[vs.index_of(t.var_id())] != 0;
    if (x_free && t_free_var) {
        // Pure aliasing of two unbound variables: freeness survives.
    } else if (x_free) {
        // x (and anything that may be the same variable) gets bound to t.
        st.free[xi] = 0;
        for (const Group& g : sh_x)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
    } else if (t_free_var) {
        st.free[vs.index_of(t.var_id())] = 0;
        for (const Group& g : sh_t)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
    } else {
        // Both sides possibly bound: instantiation may flow either way.
        for (const Group& g : sh_x)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
        for (const Group& g : sh_t)
            for (VarId v : g)
                st.free[vs.index_of(v)] = 0;
    }
    repair_freeness(st.sh, vs, st.free);
}

class ShareFreeDomain final : public Domain {
public:
    std::string name() const override { return "shfr"; }

protected:
    RepPtr v_top(const VarSet& vs) const override {
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing = power_sharing(vs.ids);
        rep->free.assign(vs.size(), 0);
        return rep;
    }

    RepPtr v_entry(const VarSet& vs, const std::vector<ArgProp>& props) const override {
        auto rep = std::make_shared<ShFrRep>();
        rep->free.assign(vs.size(), 0);
        std::vector<VarId> any_vars;
        for (size_t i = 0; i < vs.size(); ++i) {
            switch (props[i]) {
            case ArgProp::Ground:
                break;
            case ArgProp::Free:
                // A declared-free variable is a fresh cell: unaliased.
                rep->sharing.push_back({vs.ids[i]});
                rep->free[i] = 1;
                break;
            case ArgProp::Any:
                any_vars.push_back(vs.ids[i]);
                break;
            }
        }
        // Arbitrary terms may alias each other in any combination, but they
        // cannot mention the fresh cells of the declared-free variables.
        Sharing any_sh = power_sharing(any_vars);
        rep->sharing.insert(rep->sharing.end(), any_sh.begin(), any_sh.end());
        canon(rep->sharing);
        return rep;
    }

    RepPtr v_lub(const VarSet& vs, const SubstRep& a, const SubstRep& b) const override {
        const auto& sa = as_sf(a);
        const auto& sb = as_sf(b);
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing = sa.sharing;
        rep->sharing.insert(rep->sharing.end(), sb.sharing.begin(), sb.sharing.end());
        canon(rep->sharing);
        rep->free.resize(vs.size());
        for (size_t i = 0; i < vs.size(); ++i)
            rep->free[i] = sa.free[i] & sb.free[i];
        repair_freeness(rep->sharing, vs, rep->free);
        return rep;
    }

    bool v_leq(const VarSet& vs, const SubstRep& a, const SubstRep& b) const override {
        const auto& sa = as_sf(a);
        const auto& sb = as_sf(b);
        for (const Group& g : sa.sharing)
            if (!contains_group(sb.sharing, g))
                return false;
        for (size_t i = 0; i < vs.size(); ++i)
            if (sb.free[i] && !sa.free[i])
                return false;
        return true;
    }

    bool v_identical(const VarSet&, const SubstRep& a, const SubstRep& b) const override {
        // Representations are canonical, so equivalence is structural.
        return as_sf(a).sharing == as_sf(b).sharing && as_sf(a).free == as_sf(b).free;
    }

    RepPtr v_project(const VarSet& from, const VarSet& to, const SubstRep& s) const override {
        const auto& ss = as_sf(s);
        auto rep = std::make_shared<ShFrRep>();
        for (const Group& g : ss.sharing) {
            Group restricted;
            for (VarId v : g)
                if (to.contains(v))
                    restricted.push_back(v);
            if (!restricted.empty())
                rep->sharing.push_back(std::move(restricted));
        }
        canon(rep->sharing);
        rep->free.reserve(to.size());
        for (VarId v : to.ids)
            rep->free.push_back(ss.free[from.index_of(v)]);
        repair_freeness(rep->sharing, to, rep->free);
        return rep;
    }

    RepPtr v_extend_scope(const VarSet& from, const VarSet& to, const SubstRep& s) const override {
        const auto& ss = as_sf(s);
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing = ss.sharing;
        rep->free.reserve(to.size());
        for (VarId v : to.ids) {
            int i = from.index_of(v);
            if (i < 0) {
                rep->sharing.push_back({v}); // fresh: free unaliased cell
                rep->free.push_back(1);
            } else {
                rep->free.push_back(ss.free[i]);
            }
        }
        canon(rep->sharing);
        return rep;
    }

    RepPtr v_rename(const VarSet& from, const VarSet& to, const SubstRep& s) const override {
        const auto& ss = as_sf(s);
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing.reserve(ss.sharing.size());
        for (const Group& g : ss.sharing) {
            Group ng;
            ng.reserve(g.size());
            for (VarId v : g)
                ng.push_back(to.ids[from.index_of(v)]);
            rep->sharing.push_back(std::move(ng));
        }
        canon(rep->sharing);
        rep->free = ss.free; // positional
        return rep;
    }

    RepPtr v_unify(const VarSet& vs, RepPtr s, const Term& a, const Term& b) const override {
        AmguState st{as_sf(*s).sharing, as_sf(*s).free};
        for (const VarTermEq& eq : peel_equations(a, b))
            amgu_step(vs, st, eq.var, eq.term);
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing = std::move(st.sh);
        rep->free = std::move(st.free);
        return rep;
    }

    RepPtr v_conjoin(const VarSet&, const SubstRep& a, const VarSet&,
                     const SubstRep& b) const override {
        const auto& sa = as_sf(a);
        const auto& sb = as_sf(b);
        auto rep = std::make_shared<ShFrRep>();
        rep->sharing = sa.sharing;
        rep->sharing.insert(rep->sharing.end(), sb.sharing.begin(), sb.sharing.end());
        canon(rep->sharing);
        rep->free = sa.free;
        rep->free.insert(rep->free.end(), sb.free.begin(), sb.free.end());
        return rep;
    }

    RepPtr v_extend(const VarSet& call_vs, const SubstRep& call, const VarSet& prime_vs,
                    const SubstRep& prime) const override {
        const auto& sc = as_sf(call);
        const auto& sp = as_sf(prime);
        auto rep = std::make_shared<ShFrRep>();

        // Groups untouched by the goal survive; groups meeting the goal
        // variables may have been merged by the goal's execution, so close
        // them under union and keep those whose projection onto the goal
        // variables is still admitted by the success.
        Sharing disj, meet;
        for (const Group& g : sc.sharing)
            (group_meets(g, prime_vs.ids) ? meet : disj).push_back(g);
        Sharing star = star_union(meet);
        for (Group& g : star) {
            Group onto;
            for (VarId v : g)
                if (prime_vs.contains(v))
                    onto.push_back(v);
            if (contains_group(sp.sharing, onto))
                disj.push_back(std::move(g));
        }
        rep->sharing = std::move(disj);
        canon(rep->sharing);

        // Freeness: goal variables take the success marks; other variables
        // stay free unless they may share with a goal variable that is not
        // free after the goal.
        rep->free.resize(call_vs.size());
        std::vector<VarId> unfree_goal_vars;
        for (size_t j = 0; j < prime_vs.size(); ++j)
            if (!sp.free[j])
                unfree_goal_vars.push_back(prime_vs.ids[j]);
        for (size_t i = 0; i < call_vs.size(); ++i) {
            VarId v = call_vs.ids[i];
            int j = prime_vs.index_of(v);
            if (j >= 0) {
                rep->free[i] = sp.free[j];
                continue;
            }
            std::uint8_t f = sc.free[i];
            if (f) {
                for (const Group& g : sc.sharing) {
                    if (!std::binary_search(g.begin(), g.end(), v))
                        continue;
                    if (group_meets(g, unfree_goal_vars)) {
                        f = 0;
                        break;
                    }
                }
            }
            rep->free[i] = f;
        }
        repair_freeness(rep->sharing, call_vs, rep->free);
        return rep;
    }

    bool v_all_ground(const VarSet&, const SubstRep& s,
                      const std::vector<VarId>& vars) const override {
        const auto& sh = as_sf(s).sharing;
        for (VarId v : vars)
            if (occurs(sh, v))
                return false;
        return true;
    }

    RepPtr v_nonvar(const VarSet& vs, RepPtr s, VarId v) const override {
        const auto& ss = as_sf(*s);
        if (!ss.free[vs.index_of(v)])
            return s;
        auto rep = std::make_shared<ShFrRep>(ss);
        rep->free[vs.index_of(v)] = 0;
        return rep;
    }

    bool v_gamma(const VarSet& vs, const SubstRep& s, const ConcreteBinding& b) const override {
        const auto& ss = as_sf(s);
        // Occurrence set of every runtime variable must be an admitted group.
        std::vector<VarId> runtime;
        for (VarId v : vs.ids)
            for (VarId w : b.at(v).vars())
                if (std::find(runtime.begin(), runtime.end(), w) == runtime.end())
                    runtime.push_back(w);
        for (VarId w : runtime) {
            Group occ;
            for (VarId v : vs.ids) {
                std::vector<VarId> tv = b.at(v).vars();
                if (std::find(tv.begin(), tv.end(), w) != tv.end())
                    occ.push_back(v);
            }
            occ = sorted_group(std::move(occ));
            if (!contains_group(ss.sharing, occ))
                return false;
        }
        for (size_t i = 0; i < vs.size(); ++i)
            if (ss.free[i] && !b.at(vs.ids[i]).is_var())
                return false;
        return true;
    }

    std::string v_render(const VarSet& vs, const SubstRep& s, const VarNamer& n) const override {
        const auto& ss = as_sf(s);
        std::ostringstream os;
        os << "sh: [";
        for (size_t i = 0; i < ss.sharing.size(); ++i) {
            if (i)
                os << ',';
            os << '[';
            for (size_t j = 0; j < ss.sharing[i].size(); ++j) {
                if (j)
                    os << ',';
                os << n(ss.sharing[i][j]);
            }
            os << ']';
        }
        os << "]  fr: ";
        bool any = false;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (!ss.free[i])
                continue;
            if (any)
                os << ',';
            os << n(vs.ids[i]);
            any = true;
        }
        if (!any)
            os << '-';
        return os.str();
    }

    nlohmann::json v_json(const VarSet& vs, const SubstRep& s, const VarNamer& n) const override {
        const auto& ss = as_sf(s);
        nlohmann::json sh = nlohmann::json::array();
        for (const Group& g : ss.sharing) {
            nlohmann::json jg = nlohmann::json::array();
            for (VarId v : g)
                jg.push_back(n(v));
            sh.push_back(std::move(jg));
        }
        nlohmann::json fr = nlohmann::json::array();
        for (size_t i = 0; i < vs.size(); ++i)
            if (ss.free[i])
                fr.push_back(n(vs.ids[i]));
        return nlohmann::json{{"sh", std::move(sh)}, {"fr", std::move(fr)}};
    }
};

} // namespace

Sharing star_union(const Sharing& groups, size_t limit) {
    Sharing in = groups;
    canon(in);
    if (in.size() > limit)
        throw ResourceLimitError("sharing closure width limit exceeded: " +
                                 std::to_string(in.size()) + " groups > " +
                                 std::to_string(limit));
    std::set<Group> seen;
    size_t n = in.size();
    for (size_t mask = 1; mask < (size_t(1) << n); ++mask) {
        Group u;
        for (size_t i = 0; i < n; ++i)
            if (mask & (size_t(1) << i))
                u = group_union(u, in[i]);
        seen.insert(std::move(u));
    }
    return Sharing(seen.begin(), seen.end());
}

const Domain& domain() {
    static const ShareFreeDomain d;
    return d;
}

Subst amgu(VarId x, const Term& t, const Subst& lam) {
    return domain().unify(lam, Term::var(x, "_amgu"), t);
}

} // namespace tabint::shfr
