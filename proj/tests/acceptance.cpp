// End-to-end acceptance checks. Each criterion prints exactly one
// PASS/FAIL line; the process exits with the number of failed criteria.

#include "oracles.hpp"

#include "tabint/analysis/analyzer.hpp"
#include "tabint/analysis/differential.hpp"
#include "tabint/analysis/dist.hpp"
#include "tabint/analysis/naive.hpp"
#include "tabint/analysis/sld.hpp"
#include "tabint/domains/groundness.hpp"
#include "tabint/domains/sharefree.hpp"
#include "tabint/parser.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace tabint;

namespace {

const std::vector<std::string> kCorpus = {"append.pl", "reverse.pl", "fib.pl", "hanoi.pl",
                                          "qsort.pl",  "mutual.pl",  "loop.pl", "multivar.pl"};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VarNamer canonical_namer() {
    return [](VarId v) { return canonical_var_name(static_cast<int>(v)); };
}

// One analyzed (program, domain, entry) combination, analyzer kept alive
// so its finished table can be replayed later.
struct Combo {
    std::string file;
    const Domain* dom = nullptr;
    size_t entry = 0;
    std::unique_ptr<TabledAnalyzer> analyzer;
    AnalysisResult tabled;
    AnalysisResult naive;
};

struct Harness {
    std::map<std::string, Program> programs;
    std::vector<Combo> combos;
    double differential_seconds = 0.0;
    int failures = 0;

    const Program& prog(const std::string& file) { return programs.at(file); }

    void run(int id, const std::string& label, const std::function<std::string()>& body) {
        std::string detail;
        try {
            detail = body();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (detail.empty()) {
            std::cout << "PASS criterion " << id << ": " << label << "\n";
        } else {
            ++failures;
            std::cout << "FAIL criterion " << id << ": " << label << " (" << detail << ")\n";
        }
    }
};

std::string combo_label(const Combo& c) {
    std::ostringstream os;
    os << c.file << " [" << c.dom->name() << "] entry " << c.entry;
    return os.str();
}

// Criterion 1: run both engines over every corpus program, domain and
// entry; the complete tables must agree and the whole sweep must be quick.
std::string check_differential(Harness& h) {
    auto t0 = std::chrono::steady_clock::now();
    for (const std::string& file : kCorpus)
        h.programs.emplace(file, parse_program_file(oracles::corpus_path(file)));
    std::string first_mismatch;
    for (const std::string& file : kCorpus) {
        const Program& p = h.prog(file);
        for (const Domain* dom : {&gr::domain(), &shfr::domain()}) {
            for (size_t e = 0; e < p.entries.size(); ++e) {
                Combo c;
                c.file = file;
                c.dom = dom;
                c.entry = e;
                c.analyzer = std::make_unique<TabledAnalyzer>(p, *dom);
                c.tabled = c.analyzer->analyze(p.entries[e]);
                c.naive = analyze_naive(p, p.entries[e], *dom);
                DiffReport diff = compare_completes(c.tabled, c.naive, *dom);
                if (!diff.equal && first_mismatch.empty())
                    first_mismatch = combo_label(c) + ": " + diff.mismatches.at(0);
                if (c.tabled.warnings != c.naive.warnings && first_mismatch.empty())
                    first_mismatch = combo_label(c) + ": warning lists differ";
                h.combos.push_back(std::move(c));
            }
        }
    }
    h.differential_seconds = seconds_since(t0);
    if (!first_mismatch.empty())
        return first_mismatch;
    if (h.differential_seconds >= 10.0) {
        std::ostringstream os;
        os << "sweep took " << h.differential_seconds << "s, bound is 10s";
        return os.str();
    }
    return "";
}

// Criterion 2: no depth-bounded concrete solution may escape the analyzed
// success substitution of its entry.
std::string check_soundness_sweep(Harness& h) {
    SldOptions opts; // depth 6, the default
    std::uint64_t total_solutions = 0;
    for (const Combo& c : h.combos) {
        const Program& p = h.prog(c.file);
        SoundnessReport rep = check_soundness(p, p.entries[c.entry], *c.dom, c.tabled, opts);
        total_solutions += rep.solutions;
        if (rep.violations != 0)
            return combo_label(c) + ": " + std::to_string(rep.violations) + " violations, e.g. " +
                   rep.details.at(0);
    }
    if (total_solutions == 0)
        return "the resolution oracle produced no solutions at all";
    return "";
}

// Criterion 3: order and join laws on randomly built elements.
std::string check_lattice_laws() {
    constexpr int kTriples = 1000;
    for (const Domain* dom : {&gr::domain(), &shfr::domain()}) {
        std::mt19937 rng(dom->name() == "gr" ? 9001 : 9002);
        for (int trial = 0; trial < kTriples; ++trial) {
            size_t n = 1 + rng() % 4;
            std::vector<VarId> ids;
            for (size_t i = 0; i < n; ++i)
                ids.push_back(static_cast<VarId>(i));
            VarSet vs(ids);
            Subst a = oracles::random_subst(rng, *dom, vs);
            Subst b = oracles::random_subst(rng, *dom, vs);
            Subst c = oracles::random_subst(rng, *dom, vs);
            auto fail = [&](const char* law) {
                return dom->name() + " trial " + std::to_string(trial) + ": " + law;
            };
            Subst ab = dom->lub(a, b);
            if (!dom->identical(ab, dom->lub(b, a)))
                return fail("lub is not commutative");
            if (!dom->identical(dom->lub(a, dom->lub(b, c)), dom->lub(ab, c)))
                return fail("lub is not associative");
            if (!dom->identical(dom->lub(a, a), a))
                return fail("lub is not idempotent");
            if (!dom->leq(a, ab) || !dom->leq(b, ab))
                return fail("lub is not an upper bound");
            if (dom->leq(a, c) && dom->leq(b, c) && !dom->leq(ab, c))
                return fail("lub is not the least upper bound");
            if (!dom->leq(a, a))
                return fail("leq is not reflexive");
            if (dom->leq(a, b) && dom->leq(b, c) && !dom->leq(a, c))
                return fail("leq is not transitive");
            if (dom->leq(a, b) && dom->leq(b, a) && !dom->identical(a, b))
                return fail("mutual leq without semantic equality");
            if (dom->leq(a, b) != dom->identical(ab, b))
                return fail("leq(a,b) disagrees with lub(a,b) == b");
            Subst bot = dom->bottom(vs);
            if (!dom->leq(bot, a) || !dom->identical(dom->lub(a, bot), a))
                return fail("bottom is not the least element");
        }
    }
    return "";
}

// Criterion 4: re-running every clause body against a finished table must
// produce no new information.
std::string check_replay(Harness& h) {
    for (Combo& c : h.combos) {
        ReplayOutcome out = c.analyzer->replay();
        if (out.updates != 0 || out.new_patterns != 0)
            return combo_label(c) + ": updates " + std::to_string(out.updates) +
                   ", new patterns " + std::to_string(out.new_patterns);
    }
    return "";
}

// Criterion 5: self- and mutually-recursive inputs finish well under a
// second each, including the cyclic shortest-path instance.
std::string check_cycles() {
    auto timed = [](const std::string& what, const std::function<void()>& f) -> std::string {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double s = seconds_since(t0);
        if (s >= 1.0) {
            std::ostringstream os;
            os << what << " took " << s << "s, bound is 1s";
            return os.str();
        }
        return "";
    };
    for (const char* file : {"loop.pl", "mutual.pl"}) {
        Program p = parse_program_file(oracles::corpus_path(file));
        for (const Domain* dom : {&gr::domain(), &shfr::domain()}) {
            for (size_t e = 0; e < p.entries.size(); ++e) {
                std::string what = std::string(file) + " [" + dom->name() + "] entry " +
                                   std::to_string(e);
                std::string err = timed(what, [&] { (void)analyze_tabled(p, p.entries[e], *dom); });
                if (!err.empty())
                    return err;
            }
        }
    }
    Program graph = parse_program_file(oracles::corpus_path("graphs/cycle.pl"));
    return timed("shortest paths on the cyclic graph",
                 [&] { (void)shortest_paths(graph, "a"); });
}

// Criterion 6: distances computed through min aggregation equal the
// reference relaxation algorithm on random graphs.
std::string check_min_aggregation() {
    std::mt19937 rng(2026);
    for (int g = 0; g < 100; ++g) {
        int n = 2 + static_cast<int>(rng() % 7); // up to 8 nodes
        int m = 1 + static_cast<int>(rng() % (2 * n));
        std::vector<oracles::GEdge> edges;
        std::ostringstream src;
        for (int i = 0; i < m; ++i) {
            std::string from = "n" + std::to_string(rng() % n);
            std::string to = "n" + std::to_string(rng() % n);
            long long w = static_cast<long long>(rng() % 10);
            edges.push_back({from, to, w});
            src << "edge(" << from << ", " << to << ", " << w << ").\n";
        }
        Program graph = parse_program(src.str(), "random-graph");
        for (int s = 0; s < n; ++s) {
            std::string source = "n" + std::to_string(s);
            std::map<std::string, long long> expect = oracles::shortest_ge1(edges, source);
            DistResult got = shortest_paths(graph, source);
            if (got.dist != expect) {
                std::ostringstream os;
                os << "graph " << g << " source " << source << ": got {";
                for (const auto& [k, v] : got.dist)
                    os << k << ":" << v << " ";
                os << "} expected {";
                for (const auto& [k, v] : expect)
                    os << k << ":" << v << " ";
                os << "}";
                return os.str();
            }
        }
    }
    return "";
}

// Criterion 7: on the recursive corpus programs, answer reuse must keep the
// tabled engine's clause-body count at or below the naive engine's.
std::string check_work_bound(Harness& h) {
    for (const Combo& c : h.combos) {
        if (c.file == "multivar.pl") // straight-line program, both walk once
            continue;
        if (c.tabled.counters.body_evals > c.naive.counters.body_evals)
            return combo_label(c) + ": tabled " + std::to_string(c.tabled.counters.body_evals) +
                   " > naive " + std::to_string(c.naive.counters.body_evals);
    }
    return "";
}

// Criterion 8: resume order and table seeding must not change any result.
std::string check_schedule_independence(Harness& h) {
    AnalyzeOptions fifo;
    fifo.resume = tabling::ResumePolicy::Fifo;
    AnalyzeOptions unseeded;
    unseeded.seed_nonrecursive = false;
    for (const Combo& c : h.combos) {
        const Program& p = h.prog(c.file);
        for (const auto& [name, opts] :
             {std::pair<const char*, AnalyzeOptions>{"fifo resume", fifo},
              std::pair<const char*, AnalyzeOptions>{"unseeded", unseeded}}) {
            AnalysisResult alt = analyze_tabled(p, p.entries[c.entry], *c.dom, opts);
            DiffReport diff = compare_completes(c.tabled, alt, *c.dom);
            if (!diff.equal)
                return combo_label(c) + " under " + name + ": " + diff.mismatches.at(0);
        }
    }
    return "";
}

// Criterion 9: exactness spot checks on list concatenation. A fully ground
// call grounds its output; an all-free call must expose input-output
// sharing on both list arguments.
std::string check_append_precision(Harness& h) {
    const Combo* ground = nullptr;
    const Combo* free = nullptr;
    for (const Combo& c : h.combos) {
        if (c.file != "append.pl")
            continue;
        if (c.dom->name() == "gr" && c.entry == 0)
            ground = &c;
        if (c.dom->name() == "shfr" && c.entry == 1)
            free = &c;
    }
    if (!ground || !free)
        return "append combinations missing from the sweep";

    const CompleteEntry& g = ground->tabled.completes.at(0);
    std::string got = gr::domain().render(g.success, canonical_namer());
    if (got != "A/g, B/g, C/g")
        return "ground call success is '" + got + "'";

    const CompleteEntry& f = free->tabled.completes.at(0);
    nlohmann::json j = shfr::domain().to_json(f.success, canonical_namer());
    auto shares = [&](const std::string& x, const std::string& y) {
        for (const auto& group : j.at("sh")) {
            bool has_x = false, has_y = false;
            for (const auto& v : group) {
                has_x = has_x || v == x;
                has_y = has_y || v == y;
            }
            if (has_x && has_y)
                return true;
        }
        return false;
    };
    if (!shares("A", "C"))
        return "free call success misses the A-C sharing: " +
               shfr::domain().render(f.success, canonical_namer());
    if (!shares("B", "C"))
        return "free call success misses the B-C sharing: " +
               shfr::domain().render(f.success, canonical_namer());
    return "";
}

} // namespace

int main() {
    Harness h;
    h.run(1, "tabled and naive fixpoints agree across the corpus",
          [&] { return check_differential(h); });
    h.run(2, "concrete solutions never escape an analyzed success",
          [&] { return check_soundness_sweep(h); });
    h.run(3, "order and join laws hold on random domain elements",
          [] { return check_lattice_laws(); });
    h.run(4, "replaying a finished table changes nothing",
          [&] { return check_replay(h); });
    h.run(5, "cyclic programs terminate promptly",
          [] { return check_cycles(); });
    h.run(6, "min aggregation matches the reference shortest-path algorithm",
          [] { return check_min_aggregation(); });
    h.run(7, "the tabled engine never walks more clause bodies than the naive one",
          [&] { return check_work_bound(h); });
    h.run(8, "results are independent of resume order and table seeding",
          [&] { return check_schedule_independence(h); });
    h.run(9, "list concatenation analyses are exact",
          [&] { return check_append_precision(h); });
    return h.failures;
}
