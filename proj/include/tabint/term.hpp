#pragma once

#include <cstdint>
#include <compare>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace tabint {

using VarId = std::int32_t;

// First-order term: variable, atom, integer, or compound.
// Value semantics; structural equality. Lists use the usual encoding
// ('.'/2 and the atom []), the parser provides the bracket sugar.
class Term {
public:
    enum class Tag : std::uint8_t { Var, Atom, Int, Compound };

    Term() : tag_(Tag::Atom), name_("[]") {}

    static Term var(VarId id, std::string name);
    static Term atom(std::string name);
    static Term integer(long long value);
    static Term compound(std::string functor, std::vector<Term> args);
    static Term list(const std::vector<Term>& items, Term tail = Term::atom("[]"));

    Tag tag() const { return tag_; }
    bool is_var() const { return tag_ == Tag::Var; }
    bool is_atom() const { return tag_ == Tag::Atom; }
    bool is_int() const { return tag_ == Tag::Int; }
    bool is_compound() const { return tag_ == Tag::Compound; }
    // Atom or compound: something that can appear as a goal or clause head.
    bool is_callable() const { return tag_ == Tag::Atom || tag_ == Tag::Compound; }

    VarId var_id() const { return var_; }
    // Variable display name, atom name, or compound functor.
    const std::string& name() const { return name_; }
    long long int_value() const { return int_; }
    const std::vector<Term>& args() const { return args_; }
    int arity() const { return static_cast<int>(args_.size()); }

    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

    bool is_ground() const;
    // Appends variable ids in first-occurrence order (duplicates skipped).
    void collect_vars(std::vector<VarId>& out) const;
    std::vector<VarId> vars() const;
    // Structural copy with every variable id (and optionally name) rewritten.
    Term rename_vars(const std::function<VarId(VarId)>& map_id,
                     const std::function<std::string(VarId, const std::string&)>& map_name) const;
    Term rename_vars(const std::function<VarId(VarId)>& map_id) const;
    // Node count, variables and constants counting as one node each.
    int size() const;

private:
    Tag tag_;
    VarId var_ = -1;
    std::string name_;
    long long int_ = 0;
    std::vector<Term> args_;
};

// Predicate identity: name/arity.
struct PredKey {
    std::string name;
    int arity = 0;

    auto operator<=>(const PredKey&) const = default;
    std::string str() const { return name + "/" + std::to_string(arity); }
};

// Key of a callable term. Precondition: t.is_callable().
PredKey pred_key_of(const Term& t);

// Prolog-style writer: lists in bracket sugar, common binary operators infix.
std::string term_to_string(const Term& t);
std::string term_to_string(const Term& t, const std::function<std::string(VarId)>& namer);

} // namespace tabint
