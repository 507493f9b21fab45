#pragma once

#include "tabint/errors.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace tabint::tabling {

enum class ResumePolicy { Lifo, Fifo };

// Aggregation interface of a tabled evaluation. call_entail compares call
// patterns (the engine uses it as an equivalence by checking both
// directions unless subsumptive reuse is enabled); answer_entail tests
// whether a candidate answer is already covered by the saved one;
// answer_join merges the two; apply_answer post-processes a delivery.
template <class Call, class Value>
struct AggregateOps {
    std::function<bool(const Call&, const Call&)> call_entail;
    std::function<bool(const Value&, const Value&)> answer_entail; // (candidate, saved)
    std::function<Value(const Value&, const Value&)> answer_join;  // (saved, candidate)
    std::function<Value(const Value&)> apply_answer;
};

struct EngineOptions {
    ResumePolicy policy = ResumePolicy::Lifo;
    std::uint64_t step_budget = 10'000'000; // unit executions
    // Reuse a generator when the new call merely entails it (strict
    // generalization) instead of requiring entailment both ways.
    bool subsumptive_calls = false;
};

struct EngineStats {
    std::uint64_t generators = 0;
    std::uint64_t suspensions = 0;
    std::uint64_t resumptions = 0;
    std::uint64_t answers_proposed = 0;
    std::uint64_t answers_joined = 0;    // proposals that changed the table
    std::uint64_t answers_discarded = 0; // proposals entailed by saved answers
    std::uint64_t body_evals = 0;        // unit executions including re-runs
};

// Tabling core with aggregated answers. Calls that are equivalent under
// call_entail share one generator; each generator keeps one saved answer
// per answer key, updated by incremental join; consumers suspended on a
// generator are re-run when its answers change. Completion follows the
// usual approximate-SCC discipline over the dependency stack.
//
// Evaluation is depth-first and single-threaded: a new generator's body
// units run inside the tabled_call that created it.
template <class Call, class Value>
class Engine {
public:
    using Ops = AggregateOps<Call, Value>;

    class Generator;

    struct Unit {
        Generator* owner;
        std::function<void()> fn;
        bool queued = false;
        std::uint64_t runs = 0;
    };

    struct GeneratorCounters {
        std::uint64_t answers_proposed = 0;
        std::uint64_t answers_joined = 0;
        std::uint64_t answers_discarded = 0;
    };

    class Generator {
    public:
        const std::string& key() const { return key_; }
        const Call& call() const { return call_; }
        bool complete() const { return complete_; }
        const std::map<std::string, Value>& raw_answers() const { return answers_; }
        const GeneratorCounters& counters() const { return counters_; }
        // Installs one body unit; only meaningful during the setup callback.
        void push_unit(std::function<void()> fn) {
            units_.push_back(std::make_unique<Unit>(Unit{this, std::move(fn)}));
        }

    private:
        friend class Engine;
        std::string key_;
        Call call_;
        bool complete_ = false;
        std::map<std::string, Value> answers_;
        std::uint64_t stamp_ = 0;
        int dfn_ = -1;
        int mindep_ = -1;
        int stack_pos_ = -1; // -1 once popped
        std::vector<std::unique_ptr<Unit>> units_;
        // Registration order; re-registration updates the stamp in place.
        std::vector<std::pair<Unit*, std::uint64_t>> consumers_;
        GeneratorCounters counters_;
    };

    enum class CallKind { NewGenerator, SuspendOn, ReuseComplete };
    struct CallResult {
        CallKind kind;
        Generator* gen;
    };
    enum class AnswerOutcome { Unchanged, Updated };

    struct ReplayReport {
        std::uint64_t updates = 0;      // answers that would still change
        std::uint64_t new_patterns = 0; // calls missing from the final table
    };

    Engine(Ops ops, EngineOptions opts = {}) : ops_(std::move(ops)), opts_(opts) {}

    // Runs fn as the root episode. Every tabled_call made (transitively)
    // inside completes before control returns here.
    void run(const std::function<void()>& fn) {
        fn();
        if (!dep_stack_.empty() || !pending_.empty())
            throw ContractViolation("tabling engine finished with incomplete generators");
    }

    CallResult tabled_call(const std::string& key, Call call,
                           const std::function<void(Generator&)>& setup) {
        if (Generator* g = lookup(key, call)) {
            if (g->complete_)
                return {CallKind::ReuseComplete, g};
            ++stats_.suspensions;
            register_consumer(*g);
            propagate_mindep(g->mindep_);
            return {CallKind::SuspendOn, g};
        }
        if (replay_) {
            ++replay_report_.new_patterns;
            auto dummy = std::make_unique<Generator>();
            dummy->key_ = key;
            dummy->call_ = std::move(call);
            dummy->complete_ = true;
            replay_dummies_.push_back(std::move(dummy));
            return {CallKind::NewGenerator, replay_dummies_.back().get()};
        }

        auto owned = std::make_unique<Generator>();
        Generator* g = owned.get();
        g->key_ = key;
        g->call_ = std::move(call);
        g->dfn_ = g->mindep_ = next_dfn_++;
        g->stack_pos_ = static_cast<int>(dep_stack_.size());
        dep_stack_.push_back(g);
        generators_.push_back(std::move(owned));
        key_index_[key].push_back(g);
        ++stats_.generators;

        setup(*g);
        for (auto& u : g->units_)
            run_unit(u.get());
        try_complete(g);

        if (!g->complete_) {
            register_consumer(*g);
            propagate_mindep(g->mindep_);
        }
        return {CallKind::NewGenerator, g};
    }

    AnswerOutcome add_answer(Generator& g, const std::string& answer_key, Value v) {
        if (g.complete_) {
            if (!replay_)
                throw ContractViolation("add_answer on a completed generator (" + g.key_ + ")");
            auto it = g.answers_.find(answer_key);
            if (it != g.answers_.end() && ops_.answer_entail(v, it->second))
                return AnswerOutcome::Unchanged;
            ++replay_report_.updates;
            return AnswerOutcome::Updated;
        }
        ++stats_.answers_proposed;
        ++g.counters_.answers_proposed;
        auto it = g.answers_.find(answer_key);
        if (it == g.answers_.end()) {
            g.answers_.emplace(answer_key, std::move(v));
        } else if (ops_.answer_entail(v, it->second)) {
            ++stats_.answers_discarded;
            ++g.counters_.answers_discarded;
            return AnswerOutcome::Unchanged;
        } else {
            it->second = ops_.answer_join(it->second, v);
        }
        ++stats_.answers_joined;
        ++g.counters_.answers_joined;
        bump(g);
        return AnswerOutcome::Updated;
    }

    std::optional<Value> answer(const Generator& g, const std::string& answer_key) const {
        auto it = g.answers_.find(answer_key);
        if (it == g.answers_.end())
            return std::nullopt;
        return ops_.apply_answer(it->second);
    }

    std::map<std::string, Value> answers(const Generator& g) const {
        std::map<std::string, Value> out;
        for (const auto& [k, v] : g.answers_)
            out.emplace(k, ops_.apply_answer(v));
        return out;
    }

    const EngineStats& stats() const { return stats_; }
    size_t generator_count() const { return generators_.size(); }
    Generator& generator_at(size_t i) { return *generators_[i]; }
    const Generator& generator_at(size_t i) const { return *generators_[i]; }

    // Re-runs every generator body against the final table without mutating
    // it. A fixpoint table yields a zero report.
    ReplayReport replay() {
        replay_ = true;
        replay_report_ = {};
        EngineStats saved = stats_;
        for (size_t i = 0; i < generators_.size(); ++i)
            for (auto& u : generators_[i]->units_)
                u->fn();
        stats_ = saved;
        replay_ = false;
        return replay_report_;
    }

private:
    Generator* lookup(const std::string& key, const Call& call) {
        auto it = key_index_.find(key);
        if (it == key_index_.end())
            return nullptr;
        for (Generator* g : it->second) {
            bool hit = opts_.subsumptive_calls
                           ? ops_.call_entail(call, g->call_)
                           : ops_.call_entail(call, g->call_) && ops_.call_entail(g->call_, call);
            if (hit)
                return g;
        }
        return nullptr;
    }

    void register_consumer(Generator& g) {
        if (running_units_.empty())
            return; // the root episode is never resumed
        Unit* u = running_units_.back();
        for (auto& [unit, stamp] : g.consumers_) {
            if (unit == u) {
                stamp = g.stamp_;
                return;
            }
        }
        g.consumers_.emplace_back(u, g.stamp_);
    }

    void propagate_mindep(int dep) {
        if (running_units_.empty())
            return;
        Generator* owner = running_units_.back()->owner;
        if (dep < owner->mindep_)
            owner->mindep_ = dep;
    }

    void bump(Generator& g) {
        ++g.stamp_;
        for (auto& [unit, seen] : g.consumers_) {
            if (seen >= g.stamp_ || unit->queued || unit->owner->complete_)
                continue;
            unit->queued = true;
            pending_.push_back(unit);
        }
    }

    void run_unit(Unit* u) {
        if (++steps_ > opts_.step_budget)
            throw ResourceLimitError("engine step budget exceeded while evaluating generator '" +
                                     u->owner->key_ + "'");
        ++stats_.body_evals;
        if (u->runs > 0)
            ++stats_.resumptions;
        ++u->runs;
        running_units_.push_back(u);
        struct Pop {
            std::vector<Unit*>* s;
            ~Pop() { s->pop_back(); }
        } pop{&running_units_};
        u->fn();
    }

    // Completion check for g after an evaluation round. Only a segment
    // leader (mindep == dfn) may complete; it keeps resuming stale units
    // owned by its segment until none remain, unless a re-run discovers a
    // dependency below the segment, in which case leadership moves down.
    void try_complete(Generator* g) {
        if (g->mindep_ != g->dfn_)
            return;
        size_t base = static_cast<size_t>(g->stack_pos_);
        for (;;) {
            int seg_min = segment_min(base);
            if (seg_min < g->dfn_) {
                g->mindep_ = seg_min;
                return;
            }
            Unit* u = pick_pending(base);
            if (!u)
                break;
            // The re-run issues its tabled_calls from scratch; generators it
            // creates either complete inside the call or join this segment.
            run_unit(u);
        }
        for (size_t i = base; i < dep_stack_.size(); ++i) {
            Generator* h = dep_stack_[i];
            h->complete_ = true;
            h->consumers_.clear();
            h->stack_pos_ = -1;
        }
        dep_stack_.resize(base);
    }

    int segment_min(size_t base) const {
        int m = dep_stack_[base]->dfn_;
        for (size_t i = base; i < dep_stack_.size(); ++i)
            if (dep_stack_[i]->mindep_ < m)
                m = dep_stack_[i]->mindep_;
        return m;
    }

    Unit* pick_pending(size_t base) {
        if (opts_.policy == ResumePolicy::Fifo) {
            for (auto it = pending_.begin(); it != pending_.end(); ++it) {
                if (eligible(*it, base)) {
                    Unit* u = *it;
                    pending_.erase(it);
                    u->queued = false;
                    return u;
                }
            }
        } else {
            for (auto it = pending_.rbegin(); it != pending_.rend(); ++it) {
                if (eligible(*it, base)) {
                    Unit* u = *it;
                    pending_.erase(std::next(it).base());
                    u->queued = false;
                    return u;
                }
            }
        }
        return nullptr;
    }

    static bool eligible(const Unit* u, size_t base) {
        return !u->owner->complete_ && u->owner->stack_pos_ >= static_cast<int>(base);
    }

    Ops ops_;
    EngineOptions opts_;
    EngineStats stats_;
    std::vector<std::unique_ptr<Generator>> generators_;
    std::map<std::string, std::vector<Generator*>> key_index_;
    std::vector<Generator*> dep_stack_;
    std::deque<Unit*> pending_;
    std::vector<Unit*> running_units_;
    std::vector<std::unique_ptr<Generator>> replay_dummies_;
    int next_dfn_ = 0;
    std::uint64_t steps_ = 0;
    bool replay_ = false;
    ReplayReport replay_report_;
};

} // namespace tabint::tabling
