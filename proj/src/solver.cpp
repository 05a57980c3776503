/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

// Conflict-driven clause learning solver: two watched literals, first-UIP
// learning with local minimization, VSIDS-style variable activity with phase
// saving, geometric restarts and activity-based learnt clause reduction.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "smckit/error.hpp"
#include "smckit/sat.hpp"

namespace smckit {

namespace {

using Lit = std::uint32_t;
using CRef = std::uint32_t;

constexpr CRef kNoReason = ~CRef{0};
constexpr Lit kNoLit = ~Lit{0};

inline Lit make_lit(std::uint32_t var, bool negative) { return 2 * var + (negative ? 1U : 0U); }
inline Lit negate_lit(Lit l) { return l ^ 1U; }
inline std::uint32_t var_of(Lit l) { return l >> 1; }
inline bool is_negative(Lit l) { return (l & 1U) != 0; }

enum class Value : std::int8_t { False = -1, Undef = 0, True = 1 };

struct ClauseData {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
};

struct Watcher {
    CRef cref;
    Lit blocker;
};

std::uint64_t splitmix64(std::uint64_t & state)
{
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Cdcl {
public:
    Cdcl(std::uint32_t num_vars, const SolverOptions & options)
        : options_(options), assigns_(num_vars, Value::Undef), levels_(num_vars, 0), reasons_(num_vars, kNoReason),
          phases_(num_vars, false), seen_(num_vars, 0), activity_(num_vars, 0.0), heap_index_(num_vars, -1),
          watches_(2 * static_cast<std::size_t>(num_vars))
    {
        if (options_.seed != 0) {
            std::uint64_t state = options_.seed;
            for (auto & a : activity_) a = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 * 1e-5;
        }
        for (std::uint32_t v = 0; v < num_vars; ++v) heap_insert(v);
    }

    // Returns false if the clause set became trivially unsatisfiable.
    bool add_clause(const std::vector<int> & dimacs)
    {
        std::vector<Lit> lits;
        lits.reserve(dimacs.size());
        for (int x : dimacs) lits.push_back(make_lit(static_cast<std::uint32_t>(std::abs(x)) - 1, x < 0));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        std::size_t j = 0;
        for (std::size_t i = 0; i < lits.size(); ++i) {
            if (i + 1 < lits.size() && lits[i + 1] == negate_lit(lits[i])) return true; // tautology
            if (value(lits[i]) == Value::True) return true;
            if (value(lits[i]) == Value::False) continue;
            lits[j++] = lits[i];
        }
        lits.resize(j);
        if (lits.empty()) return false;
        if (lits.size() == 1) {
            enqueue(lits[0], kNoReason);
            return propagate() == kNoReason;
        }
        attach(store(std::move(lits), false));
        return true;
    }

    SatResult::Verdict run()
    {
        std::uint64_t restart_limit = std::max<std::uint64_t>(1, options_.restart_first);
        double restart_growth = static_cast<double>(restart_limit);
        std::uint64_t since_restart = 0;
        max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);

        for (;;) {
            const CRef conflict = propagate();
            if (conflict != kNoReason) {
                ++stats_.conflicts;
                ++since_restart;
                if (stats_.conflicts > options_.conflict_budget)
                    throw Error(ErrorKind::ResourceLimit,
                                "conflict budget of " + std::to_string(options_.conflict_budget) + " exhausted");
                if (decision_level() == 0) return SatResult::Verdict::Unsat;

                std::vector<Lit> learnt;
                const int back_level = analyze(conflict, learnt);
                backtrack(back_level);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    const CRef cref = store(learnt, true);
                    attach(cref);
                    bump_clause(cref);
                    enqueue(learnt[0], cref);
                }
                decay_activities();
                continue;
            }

            if (since_restart >= restart_limit) {
                ++stats_.restarts;
                since_restart = 0;
                restart_growth *= options_.restart_factor;
                restart_limit = static_cast<std::uint64_t>(restart_growth);
                max_learnts_ *= 1.1;
                backtrack(0);
            }
            if (static_cast<double>(num_learnts_) - static_cast<double>(trail_.size()) >= max_learnts_) reduce_db();

            const Lit next = pick_branch();
            if (next == kNoLit) return SatResult::Verdict::Sat;
            ++stats_.decisions;
            trail_lim_.push_back(trail_.size());
            enqueue(next, kNoReason);
        }
    }

    std::vector<bool> model() const
    {
        std::vector<bool> m(assigns_.size());
        for (std::size_t v = 0; v < assigns_.size(); ++v) m[v] = assigns_[v] == Value::True;
        return m;
    }

    const SatStats & stats() const noexcept { return stats_; }

private:
    Value value(Lit l) const
    {
        const Value v = assigns_[var_of(l)];
        if (v == Value::Undef) return v;
        return (v == Value::True) != is_negative(l) ? Value::True : Value::False;
    }

    int decision_level() const { return static_cast<int>(trail_lim_.size()); }

    CRef store(std::vector<Lit> lits, bool learnt)
    {
        clauses_.push_back(ClauseData{std::move(lits), learnt});
        if (learnt) ++num_learnts_;
        return static_cast<CRef>(clauses_.size() - 1);
    }

    void attach(CRef cref)
    {
        const auto & c = clauses_[cref].lits;
        watches_[negate_lit(c[0])].push_back({cref, c[1]});
        watches_[negate_lit(c[1])].push_back({cref, c[0]});
    }

    void enqueue(Lit l, CRef reason)
    {
        const std::uint32_t v = var_of(l);
        assigns_[v] = is_negative(l) ? Value::False : Value::True;
        levels_[v] = decision_level();
        reasons_[v] = reason;
        trail_.push_back(l);
    }

    CRef propagate()
    {
        CRef conflict = kNoReason;
        while (qhead_ < trail_.size()) {
            const Lit p = trail_[qhead_++];
            const Lit false_lit = negate_lit(p);
            auto & ws = watches_[p];
            ++stats_.propagations;
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                const Watcher w = ws[i];
                if (value(w.blocker) == Value::True) {
                    ws[j++] = ws[i++];
                    continue;
                }
                ClauseData & c = clauses_[w.cref];
                if (c.deleted) {
                    ++i;
                    continue;
                }
                auto & lits = c.lits;
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                ++i;
                const Lit first = lits[0];
                if (first != w.blocker && value(first) == Value::True) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) != Value::False) {
                        std::swap(lits[1], lits[k]);
                        watches_[negate_lit(lits[1])].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, first};
                if (value(first) == Value::False) {
                    conflict = w.cref;
                    qhead_ = trail_.size();
                    while (i < ws.size()) ws[j++] = ws[i++];
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
            if (conflict != kNoReason) break;
        }
        return conflict;
    }

    int analyze(CRef conflict, std::vector<Lit> & learnt)
    {
        learnt.clear();
        learnt.push_back(kNoLit);
        int path_count = 0;
        Lit p = kNoLit;
        std::size_t index = trail_.size();

        do {
            ClauseData & c = clauses_[conflict];
            if (c.learnt) bump_clause(conflict);
            for (std::size_t k = (p == kNoLit ? 0 : 1); k < c.lits.size(); ++k) {
                const Lit q = c.lits[k];
                const std::uint32_t v = var_of(q);
                if (seen_[v] || levels_[v] == 0) continue;
                bump_var(v);
                seen_[v] = 1;
                if (levels_[v] >= decision_level())
                    ++path_count;
                else
                    learnt.push_back(q);
            }
            do {
                --index;
            } while (!seen_[var_of(trail_[index])]);
            p = trail_[index];
            conflict = reasons_[var_of(p)];
            seen_[var_of(p)] = 0;
            --path_count;
        } while (path_count > 0);
        learnt[0] = negate_lit(p);

        // Drop literals implied by the rest of the clause through a single
        // reason step.
        std::vector<Lit> kept{learnt[0]};
        for (std::size_t k = 1; k < learnt.size(); ++k) {
            const std::uint32_t v = var_of(learnt[k]);
            const CRef r = reasons_[v];
            bool redundant = r != kNoReason;
            if (redundant) {
                const auto & rl = clauses_[r].lits;
                for (std::size_t t = 1; t < rl.size(); ++t) {
                    const std::uint32_t u = var_of(rl[t]);
                    if (!seen_[u] && levels_[u] > 0) {
                        redundant = false;
                        break;
                    }
                }
            }
            if (!redundant) kept.push_back(learnt[k]);
        }
        for (std::size_t k = 1; k < learnt.size(); ++k) seen_[var_of(learnt[k])] = 0;
        learnt.swap(kept);

        int back_level = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t k = 2; k < learnt.size(); ++k)
                if (levels_[var_of(learnt[k])] > levels_[var_of(learnt[max_i])]) max_i = k;
            std::swap(learnt[1], learnt[max_i]);
            back_level = levels_[var_of(learnt[1])];
        }
        return back_level;
    }

    void backtrack(int level)
    {
        if (decision_level() <= level) return;
        const std::size_t stop = trail_lim_[static_cast<std::size_t>(level)];
        for (std::size_t i = trail_.size(); i-- > stop;) {
            const std::uint32_t v = var_of(trail_[i]);
            phases_[v] = !is_negative(trail_[i]);
            assigns_[v] = Value::Undef;
            reasons_[v] = kNoReason;
            if (heap_index_[v] < 0) heap_insert(v);
        }
        trail_.resize(stop);
        trail_lim_.resize(static_cast<std::size_t>(level));
        qhead_ = trail_.size();
    }

    Lit pick_branch()
    {
        while (!heap_.empty()) {
            const std::uint32_t v = heap_pop();
            if (assigns_[v] == Value::Undef) return make_lit(v, !phases_[v]);
        }
        return kNoLit;
    }

    void reduce_db()
    {
        std::vector<CRef> learnts;
        for (CRef c = 0; c < clauses_.size(); ++c)
            if (clauses_[c].learnt && !clauses_[c].deleted) learnts.push_back(c);
        std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
            if (clauses_[a].activity != clauses_[b].activity) return clauses_[a].activity < clauses_[b].activity;
            return a < b;
        });
        const std::size_t half = learnts.size() / 2;
        for (std::size_t i = 0; i < half; ++i) {
            ClauseData & c = clauses_[learnts[i]];
            if (c.lits.size() <= 2) continue;
            const std::uint32_t v0 = var_of(c.lits[0]);
            const bool locked = reasons_[v0] == learnts[i] && value(c.lits[0]) == Value::True;
            if (locked) continue;
            c.deleted = true;
            c.lits.clear();
            c.lits.shrink_to_fit();
            --num_learnts_;
        }
    }

    void bump_var(std::uint32_t v)
    {
        activity_[v] += var_inc_;
        if (activity_[v] > 1e100) {
            for (auto & a : activity_) a *= 1e-100;
            var_inc_ *= 1e-100;
        }
        if (heap_index_[v] >= 0) sift_up(static_cast<std::size_t>(heap_index_[v]));
    }

    void bump_clause(CRef c)
    {
        clauses_[c].activity += clause_inc_;
        if (clauses_[c].activity > 1e20) {
            for (auto & cl : clauses_)
                if (cl.learnt) cl.activity *= 1e-20;
            clause_inc_ *= 1e-20;
        }
    }

    void decay_activities()
    {
        var_inc_ /= 0.95;
        clause_inc_ /= 0.999;
    }

    // Max-heap on activity; lower variable index wins ties.
    bool heap_less(std::uint32_t a, std::uint32_t b) const
    {
        return activity_[a] != activity_[b] ? activity_[a] > activity_[b] : a < b;
    }

    void heap_insert(std::uint32_t v)
    {
        heap_index_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        sift_up(heap_.size() - 1);
    }

    std::uint32_t heap_pop()
    {
        const std::uint32_t top = heap_.front();
        heap_index_[top] = -1;
        heap_.front() = heap_.back();
        heap_.pop_back();
        if (!heap_.empty()) {
            heap_index_[heap_.front()] = 0;
            sift_down(0);
        }
        return top;
    }

    void sift_up(std::size_t i)
    {
        const std::uint32_t v = heap_[i];
        while (i > 0) {
            const std::size_t parent = (i - 1) / 2;
            if (!heap_less(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            heap_index_[heap_[i]] = static_cast<int>(i);
            i = parent;
        }
        heap_[i] = v;
        heap_index_[v] = static_cast<int>(i);
    }

    void sift_down(std::size_t i)
    {
        const std::uint32_t v = heap_[i];
        for (;;) {
            std::size_t child = 2 * i + 1;
            if (child >= heap_.size()) break;
            if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
            if (!heap_less(heap_[child], v)) break;
            heap_[i] = heap_[child];
            heap_index_[heap_[i]] = static_cast<int>(i);
            i = child;
        }
        heap_[i] = v;
        heap_index_[v] = static_cast<int>(i);
    }

    SolverOptions options_;
    std::vector<Value> assigns_;
    std::vector<int> levels_;
    std::vector<CRef> reasons_;
    std::vector<bool> phases_;
    std::vector<char> seen_;
    std::vector<double> activity_;
    std::vector<int> heap_index_;
    std::vector<std::uint32_t> heap_;
    std::vector<std::vector<Watcher>> watches_;
    std::vector<ClauseData> clauses_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::size_t num_learnts_ = 0;
    double max_learnts_ = 0.0;
    double var_inc_ = 1.0;
    double clause_inc_ = 1.0;
    SatStats stats_;
};

} // namespace

bool satisfies(const CnfFormula & cnf, const std::vector<bool> & model)
{
    for (const auto & clause : cnf.clauses) {
        bool ok = false;
        for (int lit : clause) {
            const auto v = static_cast<std::size_t>(std::abs(lit));
            const bool val = v <= model.size() && model[v - 1];
            if (val == (lit > 0)) {
                ok = true;
                break;
            }
        }
        if (!ok) return false;
    }
    return true;
}

SatResult solve(const CnfFormula & cnf, const SolverOptions & options)
{
    if (cnf.num_vars < 0) throw std::invalid_argument("negative variable count");
    for (const auto & clause : cnf.clauses)
        for (int lit : clause)
            if (lit == 0 || std::abs(lit) > cnf.num_vars) throw std::invalid_argument("literal out of range");

    Cdcl solver(static_cast<std::uint32_t>(cnf.num_vars), options);
    SatResult result;
    bool consistent = true;
    for (const auto & clause : cnf.clauses) {
        if (!solver.add_clause(clause)) {
            consistent = false;
            break;
        }
    }
    result.verdict = consistent ? solver.run() : SatResult::Verdict::Unsat;
    result.stats = solver.stats();
    if (result.sat()) {
        result.model = solver.model();
        if (!satisfies(cnf, result.model)) throw std::logic_error("solver produced a model violating the input");
    }
    return result;
}

} // namespace smckit
