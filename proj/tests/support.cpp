#include "support.hpp"

#include <algorithm>
#include <map>

namespace wmm::testing {

std::string corpus_path(const std::string& name) { return std::string(WMM_LITMUS_DIR) + "/" + name + ".lit"; }

Program load(const std::string& name) { return parse_program_file(corpus_path(name)); }

std::vector<std::string> small_corpus() {
    return {"mp_relaxed", "mp_relacq", "mp_fences", "sb",       "sb_sc",           "sb_fences",  "iriw_relaxed",
            "iriw_sc",    "corr",      "coww_cowr", "rmw_chain", "rmw_release_seq", "exchange_sc", "wrc"};
}

std::vector<std::string> modelled_corpus() {
    auto v = small_corpus();
    for (const char* n : {"na_race", "na_mp", "na_mp_relaxed", "seqlock_bug", "seqlock_ok", "rwlock_bug",
                          "rwlock_ok", "counter_loop"}) {
        v.emplace_back(n);
    }
    return v;
}

// ---------------------------------------------------------------------------

namespace {

constexpr LocId kLoc = 0;

void audit(const MoGraph& g, std::map<Seq, ClockVector>& prev, MoGraphCheck& out) {
    ++out.steps;
    std::vector<Seq> seqs;
    for (const auto& [s, n] : g.nodes()) seqs.push_back(s);
    for (Seq a : seqs) {
        for (Seq b : seqs) {
            ++out.pairs;
            if (g.reachable(a, b) != g.reachable_dfs(a, b)) ++out.reachability_mismatches;
        }
    }
    for (const auto& [s, n] : g.nodes()) {
        if (n.cv.get(n.tid) != n.seq) ++out.own_slot_violations;
        for (Seq t : n.edges) {
            if (!leq(n.cv, g.find(t)->cv)) ++out.edge_cv_violations;
        }
        if (auto it = prev.find(s); it != prev.end() && !leq(it->second, n.cv)) ++out.shrinking_cvs;
        prev[s] = n.cv;
    }
    if (g.has_cycle()) ++out.cycles;
}

}  // namespace

MoGraphCheck check_random_mo_graphs(std::uint64_t seed, int sequences, int max_nodes) {
    MoGraphCheck out;
    SplitMix64 rng(seed);
    for (int q = 0; q < sequences; ++q) {
        ++out.sequences;
        MoGraph g;
        std::map<Seq, ClockVector> prev;
        std::map<Tid, Seq> last_of;
        Seq next = 1;
        const int nodes = 2 + static_cast<int>(rng.below(max_nodes - 1));
        int made = 0;
        while (made < nodes) {
            const auto choice = rng.below(10);
            std::vector<Seq> seqs;
            for (const auto& [s, n] : g.nodes()) seqs.push_back(s);

            if (choice < 4 || seqs.size() < 2) {
                // Plain store: ordered after its thread's previous store.
                Tid tid = 1 + static_cast<Tid>(rng.below(4));
                Seq s = next++;
                g.get_node(s, tid, kLoc);
                if (auto it = last_of.find(tid); it != last_of.end()) g.add_edge(it->second, s);
                last_of[tid] = s;
                ++made;
            } else if (choice < 6) {
                // RMW store reading from a node nothing has read by RMW yet.
                Tid tid = 1 + static_cast<Tid>(rng.below(4));
                std::vector<Seq> sources;
                for (Seq s : seqs) {
                    if (g.find(s)->rmw != kNoSeq) continue;
                    auto it = last_of.find(tid);
                    if (it != last_of.end() && it->second != s && g.reachable_dfs(s, it->second)) continue;
                    sources.push_back(s);
                }
                if (sources.empty()) continue;
                Seq src = sources[rng.below(sources.size())];
                Seq s = next++;
                // The thread-order edge is redirected along rmw chains, so it
                // can still close a cycle; such placements are skipped.
                MoGraph trial = g;
                trial.get_node(s, tid, kLoc);
                trial.add_rmw_edge(src, s);
                if (auto it = last_of.find(tid); it != last_of.end() && it->second != src) {
                    trial.add_edge(it->second, s);
                }
                if (trial.has_cycle()) continue;
                g = std::move(trial);
                ++out.rmw_edges;
                last_of[tid] = s;
                ++made;
            } else {
                // Extra constraint between existing stores, kept acyclic.
                Seq a = seqs[rng.below(seqs.size())];
                Seq b = seqs[rng.below(seqs.size())];
                if (a == b) continue;
                MoGraph trial = g;
                trial.add_edge(a, b);
                if (trial.has_cycle()) continue;
                g.add_edge(a, b);
            }
            audit(g, prev, out);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

void NaiveRaceDetector::access(CellId cell, bool is_write, Tid tid, const ClockVector& C, int stmt) {
    const Epoch mine = C.get(tid);
    for (const auto& r : history_) {
        if (r.cell != cell || r.tid == tid || (!is_write && !r.write)) continue;
        // A prior access at clock c sits half a step after event c, so it is
        // ordered before us only if we have seen a later event of its thread.
        if (!(r.clock < C.get(r.tid)) && !first_) first_ = stmt;
    }
    history_.push_back({cell, is_write, tid, mine});
}

// ---------------------------------------------------------------------------

namespace {

const char* random_order(SplitMix64& rng, bool load) {
    static const char* loads[] = {"relaxed", "acquire", "seq_cst"};
    static const char* stores[] = {"relaxed", "release", "seq_cst"};
    return load ? loads[rng.below(3)] : stores[rng.below(3)];
}

}  // namespace

std::string random_program_text(SplitMix64& rng, int max_stmts) {
    const int nthreads = 2 + static_cast<int>(rng.below(2));
    int budget = max_stmts;
    std::string text;
    int reg = 0;
    for (int t = 0; t < nthreads; ++t) {
        text += "t" + std::to_string(t) + " = Fork {\n";
        int n = 1 + static_cast<int>(rng.below(std::max(1, budget / (nthreads - t))));
        for (int i = 0; i < n && budget > 0; ++i, --budget) {
            const std::string cell = rng.below(2) ? "x" : "y";
            const std::string loc = rng.below(2) ? "a" : "b";
            switch (rng.below(7)) {
            case 0: text += "    " + cell + " := " + std::to_string(1 + rng.below(3)) + "\n"; break;
            case 1: text += "    v" + std::to_string(reg++) + " := " + cell + "\n"; break;
            case 2: text += "    Store(1, " + loc + ", " + random_order(rng, false) + ")\n"; break;
            case 3: {
                std::string r = "r" + std::to_string(reg++);
                text += "    " + r + " = Load(" + loc + ", " + random_order(rng, true) + ")\n";
                text += "    if (" + r + ") {\n        " + cell + " := 7\n    }\n";
                break;
            }
            case 4: text += std::string("    Fence(") + (rng.below(2) ? "acquire" : "release") + ")\n"; break;
            case 5: text += "    RMW(" + loc + ", rel_acq, FetchAdd(1))\n"; break;
            default: text += "    r" + std::to_string(reg++) + " = Load(" + loc + ", acquire)\n"; break;
            }
        }
        text += "}\n";
    }
    for (int t = 0; t < nthreads; ++t) text += "Join(t" + std::to_string(t) + ")\n";
    if (rng.below(2)) text += "z := x + y\n";
    return text;
}

std::string random_expr_text(SplitMix64& rng, int depth) {
    if (depth == 0 || rng.below(3) == 0) {
        switch (rng.below(3)) {
        case 0: return std::to_string(static_cast<std::int64_t>(rng.below(200)) - 100);
        case 1: return "v";
        default: return "w";
        }
    }
    static const char* ops[] = {"+", "-", "*", "==", "!=", "<", "<="};
    return "(" + random_expr_text(rng, depth - 1) + " " + ops[rng.below(7)] + " " + random_expr_text(rng, depth - 1) +
           ")";
}

// ---------------------------------------------------------------------------

bool trace_consistent(const Program& p, const Trace& t, oracle::Verdict* why) {
    auto lifted = oracle::lift_trace(p, t);
    bool first = true;
    for (const auto& x : lifted) {
        auto v = oracle::check_consistent(x);
        if (v.ok) return true;
        if (first && why) *why = v;
        first = false;
    }
    if (why && lifted.empty()) *why = {false, "no-extension", ""};
    return false;
}

LiftedSet exhaustive_lifted_keys(const Program& p, std::uint64_t node_budget) {
    LiftedSet out;
    ExhaustivePlugin plugin(node_budget);
    while (!plugin.done()) {
        Trace t = explore(p, plugin, 0);
        ++out.runs;
        bool any = false;
        for (const auto& x : oracle::lift_trace(p, t)) {
            if (oracle::check_consistent(x).ok) {
                out.keys.insert(oracle::canonical_key(x));
                any = true;
            }
        }
        if (!any) ++out.rejected_traces;
    }
    out.complete = !plugin.exhausted_budget();
    return out;
}

}  // namespace wmm::testing
