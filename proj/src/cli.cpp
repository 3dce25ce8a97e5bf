#include "wmm/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <limits>
#include <memory>

#include "wmm/explorer.hpp"
#include "wmm/oracle.hpp"
#include "wmm/trace_io.hpp"

namespace wmm {

namespace {

enum class Format { Human, Structured };

struct RunConfig {
    std::string subcommand;
    std::string path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::uint64_t iterations = 1000;
    bool iterations_given = false;
    std::string plugin = "random";
    std::string prune = "off";
    size_t prune_trigger = 64;
    Seq prune_window = 32;
    Format format = Format::Human;
    std::string trace_out;
};

constexpr int kExitClean = 0;
constexpr int kExitFindings = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

std::string rate(std::uint64_t k, std::uint64_t n) { return std::to_string(k) + "/" + std::to_string(n); }

std::unique_ptr<Plugin> make_plugin(const RunConfig& rc) {
    if (rc.plugin == "exhaustive") return std::make_unique<ExhaustivePlugin>();
    return std::make_unique<RandomPlugin>();
}

ExploreConfig explore_config(const RunConfig& rc) {
    ExploreConfig cfg;
    cfg.prune.mode = *parse_prune_mode(rc.prune);
    cfg.prune.trigger = rc.prune_trigger;
    cfg.prune.window = rc.prune_window;
    return cfg;
}

std::uint64_t run_count(const RunConfig& rc) {
    if (rc.plugin == "exhaustive" && !rc.iterations_given) return std::numeric_limits<std::uint64_t>::max();
    return rc.iterations;
}

void write_traces(const RunConfig& rc, const Program& p, const Summary& sum) {
    if (rc.trace_out.empty()) return;
    std::ofstream f(rc.trace_out);
    if (!f) throw ProgramError("cannot open trace output '" + rc.trace_out + "'");
    for (size_t i = 0; i < sum.traces.size(); ++i) {
        if (sum.traces.size() > 1) f << "# run " << i << "\n";
        f << write_trace(p, sum.traces[i]);
    }
}

void report_summary(const RunConfig& rc, const Program& p, const Summary& sum, const Plugin& plugin,
                    std::ostream& out) {
    const auto* exhaustive = dynamic_cast<const ExhaustivePlugin*>(&plugin);
    if (rc.format == Format::Structured) {
        out << "#wmm-probe 1\n";
        out << "summary runs=" << sum.runs << " seed=" << rc.seed << " plugin=" << rc.plugin
            << " prune=" << rc.prune << "\n";
        for (const auto& [vals, n] : sum.outcomes) {
            out << "outcome count=" << n;
            std::string o = oracle::outcome_string(p, vals);
            if (!o.empty()) out << " " << o;
            out << "\n";
        }
        for (const auto& r : sum.races) {
            out << "race kind=" << to_string(r.kind) << " cell=" << p.cell_names.at(r.cell)
                << " stmts=" << r.first.stmt << "," << r.second.stmt << "\n";
        }
        for (const auto& a : sum.asserts) out << "assert stmt=" << a.stmt << "\n";
        out << "rate race=" << rate(sum.race_runs, sum.runs) << " assert=" << rate(sum.assert_runs, sum.runs)
            << " deadlock=" << rate(sum.deadlock_runs, sum.runs) << "\n";
        if (rc.prune != "off") {
            out << "prune passes=" << sum.prune.passes << " stores=" << sum.prune.stores
                << " loads=" << sum.prune.loads << " fences=" << sum.prune.fences << "\n";
        }
        if (exhaustive) out << "exhaustive complete=" << (exhaustive->exhausted_budget() || !exhaustive->done() ? 0 : 1) << "\n";
        if (sum.runs == 1 && !sum.traces.empty()) out << write_trace(p, sum.traces.front());
        return;
    }

    out << "runs: " << sum.runs << " (seed " << rc.seed << ", plugin " << rc.plugin << ", prune " << rc.prune
        << ")\n";
    out << "outcomes:\n";
    for (const auto& [vals, n] : sum.outcomes) {
        std::string o = oracle::outcome_string(p, vals);
        out << "  " << (o.empty() ? "(no observed cells)" : o) << "  " << n << "\n";
    }
    if (sum.race_runs) out << "race detected in " << rate(sum.race_runs, sum.runs) << " runs\n";
    for (const auto& r : sum.races) out << "  " << format_race(p, r) << "\n";
    if (sum.assert_runs) out << "assertion failed in " << rate(sum.assert_runs, sum.runs) << " runs\n";
    for (const auto& a : sum.asserts) out << "  ASSERT stmt " << a.stmt << " (thread " << a.tid << ")\n";
    if (sum.deadlock_runs) out << "deadlock in " << rate(sum.deadlock_runs, sum.runs) << " runs\n";
    if (!sum.has_findings()) out << "no findings\n";
    if (rc.prune != "off") {
        out << "pruned: " << sum.prune.stores << " stores, " << sum.prune.loads << " loads, " << sum.prune.fences
            << " fences in " << sum.prune.passes << " passes\n";
    }
    if (exhaustive) {
        out << (exhaustive->done() && !exhaustive->exhausted_budget() ? "exhaustive: decision tree complete\n"
                                                                       : "exhaustive: stopped before the tree was complete\n");
    }
    if (sum.runs == 1 && !sum.traces.empty()) out << "trace:\n" << write_trace(p, sum.traces.front());
}

int cmd_fuzz(const RunConfig& rc, const Program& p, std::ostream& out) {
    auto plugin = make_plugin(rc);
    const std::uint64_t count = run_count(rc);
    const bool keep = count == 1 || !rc.trace_out.empty();
    Summary sum = run_many(p, *plugin, rc.seed, count, explore_config(rc), keep);
    write_traces(rc, p, sum);
    report_summary(rc, p, sum, *plugin, out);
    return sum.has_findings() ? kExitFindings : kExitClean;
}

int cmd_dump(const RunConfig& rc, const Program& p, std::ostream& out) {
    auto plugin = make_plugin(rc);
    Trace t = explore(p, *plugin, rc.seed, explore_config(rc));
    std::string text = write_trace(p, t);
    if (!rc.trace_out.empty()) {
        std::ofstream f(rc.trace_out);
        if (!f) throw ProgramError("cannot open trace output '" + rc.trace_out + "'");
        f << text;
    } else {
        out << text;
    }
    return t.has_findings() ? kExitFindings : kExitClean;
}

int cmd_enumerate(const RunConfig& rc, const Program& p, std::ostream& out) {
    oracle::Enumeration en = oracle::enumerate_consistent(p);
    if (rc.format == Format::Structured) {
        out << "#wmm-enumerate 1\n";
        out << "summary executions=" << en.executions.size() << " classes=" << en.outcomes.size()
            << " candidates=" << en.candidates << "\n";
        for (const auto& o : en.outcomes) out << "outcome " << oracle::outcome_string(p, o) << "\n";
        return kExitClean;
    }
    out << "consistent executions: " << en.executions.size() << " (" << en.candidates << " candidates checked)\n";
    out << "outcome classes: " << en.outcomes.size() << "\n";
    for (const auto& o : en.outcomes) out << "  " << oracle::outcome_string(p, o) << "\n";
    return kExitClean;
}

int cmd_check(const RunConfig& rc, const Program& p, std::ostream& out, std::ostream& err) {
    auto plugin = make_plugin(rc);
    Summary sum = run_many(p, *plugin, rc.seed, run_count(rc), explore_config(rc), true);
    std::uint64_t accepted = 0;
    std::uint64_t rejected = 0;
    std::uint64_t unsupported = 0;
    for (size_t i = 0; i < sum.traces.size(); ++i) {
        const Trace& t = sum.traces[i];
        std::vector<oracle::Execution> lifted;
        try {
            lifted = oracle::lift_trace(p, t);
        } catch (const oracle::Unsupported&) {
            ++unsupported;
            continue;
        } catch (const oracle::ExtensionBudgetExceeded&) {
            ++unsupported;
            continue;
        }
        bool ok = false;
        oracle::Verdict first_fail;
        for (const auto& x : lifted) {
            oracle::Verdict v = oracle::check_consistent(x);
            if (v.ok) {
                ok = true;
                break;
            }
            if (first_fail.ok) first_fail = v;
        }
        if (ok) {
            ++accepted;
            continue;
        }
        if (rejected++ == 0) {
            err << "oracle rejected run " << i << ": " << first_fail.tag << " " << first_fail.detail << "\n";
            err << write_trace(p, t);
            if (!lifted.empty()) err << oracle::describe(p, lifted.front());
        }
    }
    if (rc.format == Format::Structured) {
        out << "#wmm-check 1\n";
        out << "summary runs=" << sum.runs << " accepted=" << accepted << " rejected=" << rejected
            << " skipped=" << unsupported << "\n";
    } else {
        out << "lifted " << sum.runs << " traces: " << accepted << " consistent, " << rejected << " rejected";
        if (unsupported) out << ", " << unsupported << " skipped";
        out << "\n";
    }
    if (rejected) return kExitInternal;
    return sum.has_findings() ? kExitFindings : kExitClean;
}

void add_common(CLI::App* sub, RunConfig& rc) {
    sub->add_option("program", rc.path, "Litmus program")->required();
    sub->add_option("--seed", rc.seed, "First seed (default: $WMM_PROBE_SEED or 0)");
    sub->add_option("--iterations", rc.iterations, "Number of runs")->check(CLI::PositiveNumber);
    sub->add_option("--plugin", rc.plugin, "Scheduling plugin")->check(CLI::IsMember({"random", "exhaustive"}));
    sub->add_option("--prune", rc.prune, "Pruning mode")
        ->check(CLI::IsMember({"off", "conservative", "aggressive"}));
    sub->add_option("--prune-trigger", rc.prune_trigger, "Live events that trigger a prune pass");
    sub->add_option("--prune-window", rc.prune_window, "Recent sequence numbers kept by aggressive pruning");
    sub->add_option("--format", rc.format, "Report format")
        ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"human", Format::Human},
                                                                           {"structured", Format::Structured}}));
    sub->add_option("--trace-out", rc.trace_out, "Write trace dumps to this file");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Randomized tester and race detector for C11-style litmus programs", "wmm-probe"};
    app.require_subcommand(1);
    RunConfig rc;
    const std::pair<const char*, const char*> commands[] = {
        {"run", "Execute one seed and print its trace and findings"},
        {"fuzz", "Execute many seeds and print the outcome histogram"},
        {"enumerate", "Print the consistent outcome classes of the axiomatic model"},
        {"check", "Lift every fuzzed trace and check it against the axiomatic model"},
        {"dump", "Print the trace of one seed"},
    };
    for (auto [name, help] : commands) add_common(app.add_subcommand(name, help), rc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << "wmm-probe: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    rc.subcommand = sub->get_name();
    rc.seed_given = sub->count("--seed") > 0;
    rc.iterations_given = sub->count("--iterations") > 0;
    if (!rc.seed_given) {
        if (const char* env = std::getenv("WMM_PROBE_SEED")) {
            try {
                rc.seed = std::stoull(env);
            } catch (const std::exception&) {
                err << "wmm-probe: WMM_PROBE_SEED is not a number: " << env << "\n";
                return kExitUsage;
            }
        }
    }
    if (rc.prune == "aggressive" && rc.prune_window > rc.prune_trigger) {
        err << "wmm-probe: --prune-window must not exceed --prune-trigger\n";
        return kExitUsage;
    }
    if (rc.subcommand == "run") {
        rc.iterations = 1;
        rc.iterations_given = true;
    }

    try {
        Program p = parse_program_file(rc.path);
        if (rc.subcommand == "run" || rc.subcommand == "fuzz") return cmd_fuzz(rc, p, out);
        if (rc.subcommand == "dump") return cmd_dump(rc, p, out);
        if (rc.subcommand == "enumerate") return cmd_enumerate(rc, p, out);
        return cmd_check(rc, p, out, err);
    } catch (const ParseError& e) {
        err << rc.path << ":" << e.pos().line << ":" << e.pos().column << ": error: " << e.message() << "\n";
        return kExitUsage;
    } catch (const SemanticError& e) {
        err << rc.path << ":" << e.pos().line << ":" << e.pos().column << ": error: " << e.message() << "\n";
        return kExitUsage;
    } catch (const ProgramError& e) {
        err << "wmm-probe: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oracle::BudgetExceeded& e) {
        err << "wmm-probe: " << e.what() << "\n";
        return kExitUsage;
    } catch (const oracle::Unsupported& e) {
        err << "wmm-probe: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvariantError& e) {
        err << "wmm-probe: internal invariant failed: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace wmm
