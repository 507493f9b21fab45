#pragma once

#include "tabint/term.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tabint {

// A clause with variables standardized to ids 0..var_count-1 in
// first-occurrence order (head before body). An empty body is a fact.
struct Clause {
    Term head;
    std::vector<Term> body;
    int id = 0;        // position in source order, 0-based, program-wide
    int var_count = 0;
    // Set by classify_recursion: some body literal's predicate can reach
    // back to this clause's own predicate.
    bool recursive = false;
};

// Initial instantiation property of one entry-goal variable.
enum class ArgProp { Ground, Free, Any };

// ":- entry Goal : [props]." directive. Variables without an explicit
// property default to Any.
struct EntryDecl {
    Term goal;
    std::map<VarId, ArgProp> props;
    int var_count = 0; // goal vars are standardized like clause vars

    ArgProp prop_of(VarId v) const {
        auto it = props.find(v);
        return it == props.end() ? ArgProp::Any : it->second;
    }
    std::string str() const;
};

struct Program {
    // Clause order inside each vector follows the source.
    std::map<PredKey, std::vector<Clause>> preds;
    std::vector<EntryDecl> entries;
    // Filled by classify_recursion for every defined predicate.
    std::map<PredKey, bool> recursive_pred;
    // SCC index per defined predicate (same index = mutually recursive group).
    std::map<PredKey, int> scc_index;

    bool defines(const PredKey& k) const { return preds.count(k) != 0; }
    const std::vector<Clause>* clauses_of(const PredKey& k) const {
        auto it = preds.find(k);
        return it == preds.end() ? nullptr : &it->second;
    }
    bool is_recursive(const PredKey& k) const {
        auto it = recursive_pred.find(k);
        return it != recursive_pred.end() && it->second;
    }
};

// Recognized evaluable predicates. Calls to these are interpreted by the
// domains / the concrete interpreter and are never tabled.
enum class Builtin { True, Fail, Unify, Is, Cmp };

std::optional<Builtin> builtin_of(const PredKey& k);

// Computes SCCs of the defined-predicate call graph (unknown predicates and
// builtins contribute no edges) and marks recursive predicates and clauses.
// A predicate is recursive iff it lies on a call-graph cycle; a clause is
// recursive iff some body literal's predicate sits in the head's SCC.
void classify_recursion(Program& prog);

// Returns the clause with all variable ids replaced by fresh ones taken
// sequentially from *next_fresh (old id i maps to *next_fresh + i).
// Display names are preserved; the id mapping is deterministic.
Clause rename_apart(const Clause& c, VarId* next_fresh);

std::string clause_to_string(const Clause& c);

} // namespace tabint
