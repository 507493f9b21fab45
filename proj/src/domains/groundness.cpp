#include "tabint/domains/groundness.hpp"

#include "tabint/errors.hpp"

#include <algorithm>
#include <sstream>

namespace tabint::gr {

namespace {

struct GrRep final : SubstRep {
    // Parallel to the variable set: 1 = definitely ground.
    std::vector<std::uint8_t> ground;
};

using RepPtr = std::shared_ptr<const SubstRep>;

const GrRep& as_gr(const SubstRep& r) { return static_cast<const GrRep&>(r); }

class GroundnessDomain final : public Domain {
public:
    std::string name() const override { return "gr"; }

protected:
    RepPtr v_top(const VarSet& vs) const override {
        auto rep = std::make_shared<GrRep>();
        rep->ground.assign(vs.size(), 0);
        return rep;
    }

    RepPtr v_entry(const VarSet& vs, const std::vector<ArgProp>& props) const override {
        auto rep = std::make_shared<GrRep>();
        rep->ground.resize(vs.size());
        for (size_t i = 0; i < vs.size(); ++i)
            rep->ground[i] = props[i] == ArgProp::Ground ? 1 : 0;
        return rep;
    }

    RepPtr v_lub(const VarSet&, const SubstRep& a, const SubstRep& b) const override {
        auto rep = std::make_shared<GrRep>();
        const auto& ga = as_gr(a).ground;
        const auto& gb = as_gr(b).ground;
        rep->ground.resize(ga.size());
        for (size_t i = 0; i < ga.size(); ++i)
            rep->ground[i] = ga[i] & gb[i];
        return rep;
    }

    bool v_leq(const VarSet&, const SubstRep& a, const SubstRep& b) const override {
        const auto& ga = as_gr(a).ground;
        const auto& gb = as_gr(b).ground;
        for (size_t i = 0; i < ga.size(); ++i)
            if (gb[i] && !ga[i])
                return false;
        return true;
    }

    RepPtr v_project(const VarSet& from, const VarSet& to, const SubstRep& s) const override {
        auto rep = std::make_shared<GrRep>();
        const auto& g = as_gr(s).ground;
        rep->ground.reserve(to.size());
        for (VarId v : to.ids)
            rep->ground.push_back(g[from.index_of(v)]);
        return rep;
    }

    RepPtr v_extend_scope(const VarSet& from, const VarSet& to, const SubstRep& s) const override {
        auto rep = std::make_shared<GrRep>();
        const auto& g = as_gr(s).ground;
        rep->ground.reserve(to.size());
        for (VarId v : to.ids) {
            int i = from.index_of(v);
            rep->ground.push_back(i < 0 ? 0 : g[i]); // fresh variables are unbound
        }
        return rep;
    }

    RepPtr v_rename(const VarSet&, const VarSet&, const SubstRep& s) const override {
        return std::make_shared<GrRep>(as_gr(s)); // payload is positional
    }

    RepPtr v_unify(const VarSet& vs, RepPtr s, const Term& a, const Term& b) const override {
        auto rep = std::make_shared<GrRep>(as_gr(*s));
        auto& g = rep->ground;
        std::vector<VarTermEq> eqs = peel_equations(a, b);
        // var = term couples the variable with the term's variables in both
        // directions; iterate to a fixpoint.
        bool changed = true;
        while (changed) {
            changed = false;
            for (const VarTermEq& eq : eqs) {
                int xi = vs.index_of(eq.var);
                std::vector<VarId> tv = eq.term.vars();
                bool all_tv_ground = true;
                for (VarId v : tv)
                    if (!g[vs.index_of(v)])
                        all_tv_ground = false;
                if (all_tv_ground && !g[xi]) {
                    g[xi] = 1;
                    changed = true;
                }
                if (g[xi]) {
                    for (VarId v : tv) {
                        int i = vs.index_of(v);
                        if (!g[i]) {
                            g[i] = 1;
                            changed = true;
                        }
                    }
                }
            }
        }
        return rep;
    }

    RepPtr v_conjoin(const VarSet&, const SubstRep& a, const VarSet&,
                     const SubstRep& b) const override {
        auto rep = std::make_shared<GrRep>(as_gr(a));
        const auto& gb = as_gr(b).ground;
        rep->ground.insert(rep->ground.end(), gb.begin(), gb.end());
        return rep;
    }

    RepPtr v_extend(const VarSet& call_vs, const SubstRep& call, const VarSet& prime_vs,
                    const SubstRep& prime) const override {
        auto rep = std::make_shared<GrRep>(as_gr(call));
        const auto& gp = as_gr(prime).ground;
        // Success only instantiates further: keep the more precise mark.
        for (size_t j = 0; j < prime_vs.size(); ++j) {
            int i = call_vs.index_of(prime_vs.ids[j]);
            rep->ground[i] = rep->ground[i] | gp[j];
        }
        return rep;
    }

    bool v_all_ground(const VarSet& vs, const SubstRep& s,
                      const std::vector<VarId>& vars) const override {
        const auto& g = as_gr(s).ground;
        for (VarId v : vars)
            if (!g[vs.index_of(v)])
                return false;
        return true;
    }

    bool v_gamma(const VarSet& vs, const SubstRep& s, const ConcreteBinding& b) const override {
        const auto& g = as_gr(s).ground;
        for (size_t i = 0; i < vs.size(); ++i)
            if (g[i] && !b.at(vs.ids[i]).is_ground())
                return false;
        return true;
    }

    std::string v_render(const VarSet& vs, const SubstRep& s, const VarNamer& n) const override {
        const auto& g = as_gr(s).ground;
        std::ostringstream os;
        for (size_t i = 0; i < vs.size(); ++i) {
            if (i)
                os << ", ";
            os << n(vs.ids[i]) << '/' << (g[i] ? "g" : "any");
        }
        return os.str();
    }

    nlohmann::json v_json(const VarSet& vs, const SubstRep& s, const VarNamer& n) const override {
        const auto& g = as_gr(s).ground;
        nlohmann::json j = nlohmann::json::object();
        for (size_t i = 0; i < vs.size(); ++i)
            j[n(vs.ids[i])] = g[i] ? "g" : "any";
        return j;
    }
};

} // namespace

const Domain& domain() {
    static const GroundnessDomain d;
    return d;
}

Subst abstract_unify(const Term& a, const Term& b, const Subst& lam) {
    return domain().unify(lam, a, b);
}

} // namespace tabint::gr
