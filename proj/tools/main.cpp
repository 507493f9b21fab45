#include "tabint/analysis/analyzer.hpp"
#include "tabint/analysis/differential.hpp"
#include "tabint/analysis/dist.hpp"
#include "tabint/analysis/naive.hpp"
#include "tabint/analysis/report.hpp"
#include "tabint/analysis/sld.hpp"
#include "tabint/errors.hpp"
#include "tabint/parser.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

namespace {

using namespace tabint;

constexpr int kExitParse = 1;
constexpr int kExitResource = 2;
constexpr int kExitContract = 3;
constexpr int kExitDisagreement = 5;

double ms_since(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count();
}

AnalyzeOptions tabled_options(const std::string& resume, const std::string& seed,
                              bool subsumptive, std::uint64_t step_budget) {
    AnalyzeOptions opts;
    opts.resume = resume == "fifo" ? tabling::ResumePolicy::Fifo : tabling::ResumePolicy::Lifo;
    opts.seed_nonrecursive = seed != "off";
    opts.subsumptive_calls = subsumptive;
    opts.step_budget = step_budget;
    return opts;
}

std::vector<AnalysisResult> run_all_entries(const Program& prog, const Domain& dom,
                                            const std::string& engine,
                                            const AnalyzeOptions& topts,
                                            std::uint64_t step_budget) {
    std::vector<AnalysisResult> out;
    for (const EntryDecl& e : prog.entries) {
        if (engine == "naive") {
            NaiveOptions nopts;
            nopts.eval_budget = step_budget;
            out.push_back(analyze_naive(prog, e, dom, nopts));
        } else {
            out.push_back(analyze_tabled(prog, e, dom, topts));
        }
    }
    return out;
}

const Program& require_entries(const Program& prog, const std::string& path) {
    if (prog.entries.empty())
        throw ContractViolation(path + ": program declares no entry directives");
    return prog;
}

int cmd_analyze(const std::string& path, const std::string& domain, const std::string& engine,
                const std::string& format, bool with_points, const std::string& resume,
                const std::string& seed, bool subsumptive, std::uint64_t step_budget) {
    Program prog = parse_program_file(path);
    require_entries(prog, path);
    const Domain& dom = *domain_by_name(domain);

    auto t0 = std::chrono::steady_clock::now();
    AnalyzeOptions topts = tabled_options(resume, seed, subsumptive, step_budget);
    std::vector<AnalysisResult> results = run_all_entries(prog, dom, engine, topts, step_budget);
    double wall = ms_since(t0);

    nlohmann::json rep = make_report(path, domain, engine, prog, dom, results, wall);
    if (format == "json")
        std::cout << rep.dump(2) << "\n";
    else
        std::cout << render_report_text(rep, with_points);
    return 0;
}

int cmd_check(const std::vector<std::string>& paths, const std::string& domain, int depth,
              std::uint64_t step_budget) {
    std::vector<const Domain*> domains;
    if (domain == "both" || domain == "gr")
        domains.push_back(domain_by_name("gr"));
    if (domain == "both" || domain == "shfr")
        domains.push_back(domain_by_name("shfr"));

    bool disagreement = false;
    for (const std::string& path : paths) {
        Program prog = parse_program_file(path);
        require_entries(prog, path);
        for (const Domain* dom : domains) {
            for (size_t i = 0; i < prog.entries.size(); ++i) {
                const EntryDecl& e = prog.entries[i];
                AnalyzeOptions topts;
                topts.step_budget = step_budget;
                AnalysisResult tabled = analyze_tabled(prog, e, *dom, topts);
                NaiveOptions nopts;
                nopts.eval_budget = step_budget;
                AnalysisResult naive = analyze_naive(prog, e, *dom, nopts);

                std::string label = path + " [" + dom->name() + "] " + e.str();
                DiffReport diff = compare_completes(tabled, naive, *dom);
                if (diff.equal) {
                    std::cout << label << " differential: ok (" << tabled.completes.size()
                              << " patterns)\n";
                } else {
                    disagreement = true;
                    std::cout << label << " differential: MISMATCH\n";
                    for (const std::string& m : diff.mismatches)
                        std::cout << "    " << m << "\n";
                }

                SldOptions sopts;
                sopts.depth = depth;
                SoundnessReport sound = check_soundness(prog, e, *dom, tabled, sopts);
                if (sound.violations == 0) {
                    std::cout << label << " soundness: ok (" << sound.instances << " instances, "
                              << sound.solutions << " solutions)\n";
                } else {
                    disagreement = true;
                    std::cout << label << " soundness: " << sound.violations << " VIOLATIONS\n";
                    for (const std::string& d : sound.details)
                        std::cout << "    " << d << "\n";
                }
            }
        }
    }
    return disagreement ? kExitDisagreement : 0;
}

int cmd_bench(const std::vector<std::string>& paths, const std::string& domain, int reps,
              int discard, const std::string& csv_path) {
    std::vector<const Domain*> domains;
    if (domain == "both" || domain == "gr")
        domains.push_back(domain_by_name("gr"));
    if (domain == "both" || domain == "shfr")
        domains.push_back(domain_by_name("shfr"));

    std::ofstream csv;
    if (!csv_path.empty()) {
        csv.open(csv_path);
        csv << "program,domain,tabled_ms,naive_ms,ms_ratio,tabled_body_evals,naive_body_evals,"
               "eval_ratio\n";
    }

    std::cout << "program                domain  tabled_ms   naive_ms   ms_ratio   evals(t/n)\n";
    for (const std::string& path : paths) {
        Program prog;
        try {
            prog = parse_program_file(path);
        } catch (const ParseError& e) {
            std::cerr << "skipping " << path << ": " << e.what() << "\n";
            continue;
        }
        if (prog.entries.empty()) {
            std::cerr << "skipping " << path << ": no entry directives\n";
            continue;
        }
        for (const Domain* dom : domains) {
            auto measure = [&](const std::string& engine) {
                std::vector<double> times;
                std::uint64_t evals = 0;
                for (int r = 0; r < reps; ++r) {
                    auto t0 = std::chrono::steady_clock::now();
                    auto results = run_all_entries(prog, *dom, engine, AnalyzeOptions{},
                                                   AnalyzeOptions{}.step_budget);
                    times.push_back(ms_since(t0));
                    if (r == 0)
                        for (const AnalysisResult& res : results)
                            evals += res.counters.body_evals;
                }
                // Drop the worst measurements, average the rest.
                std::sort(times.begin(), times.end());
                size_t keep = times.size() - std::min<size_t>(times.size() - 1,
                                                              static_cast<size_t>(discard));
                double mean = std::accumulate(times.begin(), times.begin() + keep, 0.0) /
                              static_cast<double>(keep);
                return std::make_pair(mean, evals);
            };
            auto [t_ms, t_evals] = measure("tabled");
            auto [n_ms, n_evals] = measure("naive");
            double ratio = t_ms > 0 ? n_ms / t_ms : 0.0;
            double eratio = t_evals > 0 ? static_cast<double>(n_evals) /
                                              static_cast<double>(t_evals)
                                        : 0.0;
            char line[256];
            std::snprintf(line, sizeof line, "%-22s %-6s %9.3f %10.3f %10.2f   %llu/%llu",
                          path.c_str(), dom->name().c_str(), t_ms, n_ms, ratio,
                          static_cast<unsigned long long>(t_evals),
                          static_cast<unsigned long long>(n_evals));
            std::cout << line << "\n";
            if (csv.is_open()) {
                csv << path << ',' << dom->name() << ',' << t_ms << ',' << n_ms << ',' << ratio
                    << ',' << t_evals << ',' << n_evals << ',' << eratio << "\n";
            }
        }
    }
    return 0;
}

int cmd_dist(const std::string& path, std::string source, const std::string& format) {
    Program graph = parse_program_file(path);
    if (source.empty())
        source = default_source(graph);
    DistResult res = shortest_paths(graph, source);
    if (format == "json") {
        nlohmann::json j;
        j["source"] = res.source;
        j["dist"] = res.dist;
        j["stats"] = {{"generators", res.stats.generators},
                      {"suspensions", res.stats.suspensions},
                      {"resumptions", res.stats.resumptions},
                      {"answers_proposed", res.stats.answers_proposed},
                      {"answers_joined", res.stats.answers_joined},
                      {"answers_discarded", res.stats.answers_discarded},
                      {"body_evals", res.stats.body_evals}};
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "source: " << res.source << "\n";
        for (const auto& [node, d] : res.dist)
            std::cout << "dist(" << res.source << ", " << node << ") = " << d << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Abstract-substitution analyzer for a pure Prolog subset"};
    app.require_subcommand(1);

    std::string path, domain = "gr", engine = "tabled", format = "text";
    std::string resume = "lifo", seed = "on", source, csv_path;
    bool with_points = false, subsumptive = false;
    std::uint64_t step_budget = 10'000'000;
    int depth = 6, reps = 40, discard = 10;
    std::vector<std::string> paths;

    CLI::App* analyze = app.add_subcommand("analyze", "Analyze one program");
    analyze->add_option("file", path, "program file")->required();
    analyze->add_option("--domain", domain)->check(CLI::IsMember({"gr", "shfr"}));
    analyze->add_option("--engine", engine)->check(CLI::IsMember({"tabled", "naive"}));
    analyze->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));
    analyze->add_flag("--points", with_points, "include program points in text output");
    analyze->add_option("--resume", resume)->check(CLI::IsMember({"lifo", "fifo"}));
    analyze->add_option("--seed-nonrec", seed)->check(CLI::IsMember({"on", "off"}));
    analyze->add_flag("--subsumptive", subsumptive,
                      "reuse generators for entailed (not just equivalent) calls");
    analyze->add_option("--step-budget", step_budget);

    CLI::App* check = app.add_subcommand("check", "Differential and concrete soundness checks");
    check->add_option("files", paths, "program files")->required();
    check->add_option("--domain", domain, "gr, shfr or both")
        ->check(CLI::IsMember({"gr", "shfr", "both"}));
    check->add_option("--depth", depth, "resolution depth bound");
    check->add_option("--step-budget", step_budget);

    CLI::App* bench = app.add_subcommand("bench", "Compare engine timings over programs");
    bench->add_option("files", paths, "program files")->required();
    bench->add_option("--domain", domain, "gr, shfr or both")
        ->check(CLI::IsMember({"gr", "shfr", "both"}));
    bench->add_option("--reps", reps);
    bench->add_option("--discard", discard, "worst repetitions dropped per mean");
    bench->add_option("--csv", csv_path, "also write rows to this CSV file");

    CLI::App* dist = app.add_subcommand("dist", "Shortest-path demo over edge/3 facts");
    dist->add_option("file", path, "graph file")->required();
    dist->add_option("--source", source, "source node (default: first edge origin)");
    dist->add_option("--format", format)->check(CLI::IsMember({"text", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(analyze))
            return cmd_analyze(path, domain, engine, format, with_points, resume, seed,
                               subsumptive, step_budget);
        if (app.got_subcommand(check)) {
            if (domain == "gr" && !check->count("--domain"))
                domain = "both";
            return cmd_check(paths, domain, depth, step_budget);
        }
        if (app.got_subcommand(bench)) {
            if (domain == "gr" && !bench->count("--domain"))
                domain = "both";
            return cmd_bench(paths, domain, reps, discard, csv_path);
        }
        if (app.got_subcommand(dist))
            return cmd_dist(path, source, format);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const ContractViolation& e) {
        std::cerr << "contract violation: " << e.what() << "\n";
        return kExitContract;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
