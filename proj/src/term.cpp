#include "tabint/term.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tabint {

Term Term::var(VarId id, std::string name) {
    Term t;
    t.tag_ = Tag::Var;
    t.var_ = id;
    t.name_ = std::move(name);
    return t;
}

Term Term::atom(std::string name) {
    Term t;
    t.tag_ = Tag::Atom;
    t.name_ = std::move(name);
    return t;
}

Term Term::integer(long long value) {
    Term t;
    t.tag_ = Tag::Int;
    t.name_.clear();
    t.int_ = value;
    return t;
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    if (args.empty())
        return atom(std::move(functor));
    Term t;
    t.tag_ = Tag::Compound;
    t.name_ = std::move(functor);
    t.args_ = std::move(args);
    return t;
}

Term Term::list(const std::vector<Term>& items, Term tail) {
    Term result = std::move(tail);
    for (auto it = items.rbegin(); it != items.rend(); ++it)
        result = Term::compound(".", {*it, std::move(result)});
    return result;
}

bool Term::operator==(const Term& other) const {
    if (tag_ != other.tag_)
        return false;
    switch (tag_) {
    case Tag::Var: return var_ == other.var_;
    case Tag::Atom: return name_ == other.name_;
    case Tag::Int: return int_ == other.int_;
    case Tag::Compound: return name_ == other.name_ && args_ == other.args_;
    }
    return false;
}

bool Term::is_ground() const {
    switch (tag_) {
    case Tag::Var: return false;
    case Tag::Atom:
    case Tag::Int: return true;
    case Tag::Compound:
        return std::all_of(args_.begin(), args_.end(),
                           [](const Term& a) { return a.is_ground(); });
    }
    return true;
}

void Term::collect_vars(std::vector<VarId>& out) const {
    switch (tag_) {
    case Tag::Var:
        if (std::find(out.begin(), out.end(), var_) == out.end())
            out.push_back(var_);
        break;
    case Tag::Compound:
        for (const Term& a : args_)
            a.collect_vars(out);
        break;
    default:
        break;
    }
}

std::vector<VarId> Term::vars() const {
    std::vector<VarId> out;
    collect_vars(out);
    return out;
}

Term Term::rename_vars(const std::function<VarId(VarId)>& map_id,
                       const std::function<std::string(VarId, const std::string&)>& map_name) const {
    switch (tag_) {
    case Tag::Var:
        return Term::var(map_id(var_), map_name(var_, name_));
    case Tag::Compound: {
        std::vector<Term> new_args;
        new_args.reserve(args_.size());
        for (const Term& a : args_)
            new_args.push_back(a.rename_vars(map_id, map_name));
        return Term::compound(name_, std::move(new_args));
    }
    default:
        return *this;
    }
}

Term Term::rename_vars(const std::function<VarId(VarId)>& map_id) const {
    return rename_vars(map_id, [](VarId, const std::string& n) { return n; });
}

int Term::size() const {
    int n = 1;
    for (const Term& a : args_)
        n += a.size();
    return n;
}

PredKey pred_key_of(const Term& t) {
    return PredKey{t.name(), t.arity()};
}

namespace {

// Priorities follow the standard operator table: comparisons and =/is at
// 700 (non-associative), additive at 500, multiplicative at 400, all
// left-associative.
int infix_prio(const std::string& f) {
    if (f == "=" || f == "is" || f == "<" || f == ">" || f == "=<" || f == ">=" ||
        f == "=:=" || f == "=\\=")
        return 700;
    if (f == "+" || f == "-")
        return 500;
    if (f == "*" || f == "//" || f == "mod")
        return 400;
    return 0;
}

bool is_infix(const std::string& f) {
    return infix_prio(f) > 0;
}

bool atom_needs_quotes(const std::string& s) {
    if (s.empty())
        return true;
    if (s == "[]" || s == ".")
        return s == ".";
    if (is_infix(s))
        return false;
    if (!(s[0] >= 'a' && s[0] <= 'z'))
        return true;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_'))
            return true;
    return false;
}

void write_quoted(std::ostringstream& os, const std::string& name) {
    os << '\'';
    for (char c : name) {
        if (c == '\'')
            os << "''";
        else
            os << c;
    }
    os << '\'';
}

// Priority a term carries when it appears as an operand.
int operand_prio(const Term& t) {
    if (t.is_compound() && t.arity() == 2 && is_infix(t.name()))
        return infix_prio(t.name());
    if (t.is_compound() && t.arity() == 1 && t.name() == "-")
        return 200;
    if (t.is_int() && t.int_value() < 0)
        return 200;
    return 0;
}

// Would the operand's leading '-' merge with a preceding symbolic operator?
bool starts_with_minus(const Term& t) {
    return (t.is_int() && t.int_value() < 0) ||
           (t.is_compound() && t.arity() == 1 && t.name() == "-");
}

void write_term(std::ostringstream& os, const Term& t,
                const std::function<std::string(VarId)>& namer) {
    switch (t.tag()) {
    case Term::Tag::Var:
        if (namer)
            os << namer(t.var_id());
        else if (!t.name().empty() && t.name() != "_")
            os << t.name();
        else
            os << "_G" << t.var_id();
        return;
    case Term::Tag::Atom:
        if (atom_needs_quotes(t.name()))
            write_quoted(os, t.name());
        else
            os << t.name();
        return;
    case Term::Tag::Int:
        os << t.int_value();
        return;
    case Term::Tag::Compound:
        break;
    }
    if (t.name() == "." && t.arity() == 2) {
        // List sugar, with a | tail when the spine ends in a non-[] term.
        os << '[';
        const Term* cur = &t;
        bool first = true;
        while (cur->is_compound() && cur->name() == "." && cur->arity() == 2) {
            if (!first)
                os << ',';
            write_term(os, cur->args()[0], namer);
            first = false;
            cur = &cur->args()[1];
        }
        if (!(cur->is_atom() && cur->name() == "[]")) {
            os << '|';
            write_term(os, *cur, namer);
        }
        os << ']';
        return;
    }
    if (t.arity() == 2 && is_infix(t.name())) {
        int p = infix_prio(t.name());
        bool word = std::isalpha(static_cast<unsigned char>(t.name()[0]));
        int left_max = p == 700 ? p - 1 : p; // 700 is non-associative
        auto emit = [&](const Term& c, int max_prio, bool right_of_symbol) {
            bool parens = operand_prio(c) > max_prio || (right_of_symbol && starts_with_minus(c));
            if (parens)
                os << '(';
            write_term(os, c, namer);
            if (parens)
                os << ')';
        };
        emit(t.args()[0], left_max, false);
        if (word)
            os << ' ' << t.name() << ' ';
        else
            os << t.name();
        emit(t.args()[1], p - 1, !word);
        return;
    }
    if (t.arity() == 1 && t.name() == "-") {
        os << '-';
        bool parens = operand_prio(t.args()[0]) > 200 || starts_with_minus(t.args()[0]);
        if (parens)
            os << '(';
        write_term(os, t.args()[0], namer);
        if (parens)
            os << ')';
        return;
    }
    if (atom_needs_quotes(t.name()))
        write_quoted(os, t.name());
    else
        os << t.name();
    os << '(';
    for (int i = 0; i < t.arity(); ++i) {
        if (i)
            os << ',';
        write_term(os, t.args()[i], namer);
    }
    os << ')';
}

} // namespace

std::string term_to_string(const Term& t, const std::function<std::string(VarId)>& namer) {
    std::ostringstream os;
    write_term(os, t, namer);
    return os.str();
}

std::string term_to_string(const Term& t) {
    return term_to_string(t, nullptr);
}

} // namespace tabint
