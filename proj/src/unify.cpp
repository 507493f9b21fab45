#include "tabint/unify.hpp"

namespace tabint {

Term Bindings::walk(const Term& t) const {
    Term cur = t;
    while (cur.is_var()) {
        auto it = map_.find(cur.var_id());
        if (it == map_.end())
            return cur;
        cur = it->second;
    }
    return cur;
}

Term Bindings::resolve(const Term& t) const {
    Term w = walk(t);
    if (!w.is_compound())
        return w;
    std::vector<Term> args;
    args.reserve(w.args().size());
    for (const Term& a : w.args())
        args.push_back(resolve(a));
    return Term::compound(w.name(), std::move(args));
}

namespace {

bool occurs_in(VarId v, const Term& t, const Bindings& b) {
    Term w = b.walk(t);
    if (w.is_var())
        return w.var_id() == v;
    for (const Term& a : w.args())
        if (occurs_in(v, a, b))
            return true;
    return false;
}

} // namespace

bool unify(const Term& a, const Term& b, Bindings& bindings, bool occurs_check) {
    Term x = bindings.walk(a);
    Term y = bindings.walk(b);
    if (x.is_var()) {
        if (y.is_var() && y.var_id() == x.var_id())
            return true;
        if (occurs_check && occurs_in(x.var_id(), y, bindings))
            return false;
        bindings.bind(x.var_id(), y);
        return true;
    }
    if (y.is_var()) {
        if (occurs_check && occurs_in(y.var_id(), x, bindings))
            return false;
        bindings.bind(y.var_id(), x);
        return true;
    }
    if (x.is_int() || y.is_int())
        return x.is_int() && y.is_int() && x.int_value() == y.int_value();
    if (x.name() != y.name() || x.arity() != y.arity())
        return false;
    for (int i = 0; i < x.arity(); ++i)
        if (!unify(x.args()[i], y.args()[i], bindings, occurs_check))
            return false;
    return true;
}

bool unifiable(const Term& a, const Term& b) {
    Bindings store;
    return unify(a, b, store, false);
}

} // namespace tabint
