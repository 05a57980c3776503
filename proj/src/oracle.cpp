/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

#include "smckit/error.hpp"

namespace smckit::oracle {

namespace {

enum class Tri : std::int8_t { False, True, Unknown };

// Kleene evaluation under a partial assignment.
template <class ValueOf>
Tri kleene(const Formula & f, ValueOf & value_of)
{
    switch (f.op()) {
    case Op::True: return Tri::True;
    case Op::False: return Tri::False;
    case Op::Var: return value_of(f.atom());
    case Op::Not: {
        const Tri t = kleene(f.child(0), value_of);
        return t == Tri::Unknown ? t : (t == Tri::True ? Tri::False : Tri::True);
    }
    case Op::And: {
        Tri acc = Tri::True;
        for (const auto & k : f.children()) {
            const Tri t = kleene(k, value_of);
            if (t == Tri::False) return Tri::False;
            if (t == Tri::Unknown) acc = Tri::Unknown;
        }
        return acc;
    }
    case Op::Or: {
        Tri acc = Tri::False;
        for (const auto & k : f.children()) {
            const Tri t = kleene(k, value_of);
            if (t == Tri::True) return Tri::True;
            if (t == Tri::Unknown) acc = Tri::Unknown;
        }
        return acc;
    }
    case Op::Implies: {
        const Tri a = kleene(f.child(0), value_of);
        if (a == Tri::False) return Tri::True;
        const Tri b = kleene(f.child(1), value_of);
        if (b == Tri::True) return Tri::True;
        if (a == Tri::True) return b;
        return Tri::Unknown;
    }
    case Op::Iff: {
        const Tri a = kleene(f.child(0), value_of);
        if (a == Tri::Unknown) return a;
        const Tri b = kleene(f.child(1), value_of);
        if (b == Tri::Unknown) return b;
        return a == b ? Tri::True : Tri::False;
    }
    }
    return Tri::Unknown;
}

// Enumerates all values of the `free_stage` bits satisfying `f`, in ascending
// numeric order, with bits of the other stage fixed to `fixed`. Branches on
// the most significant bit first and prunes on a definite false.
std::vector<State> enumerate(const Formula & f, unsigned width, Stage free_stage, State fixed)
{
    std::vector<State> out;
    std::uint64_t assigned_mask = 0;
    std::uint64_t value = 0;
    auto value_of = [&](const VarRef & v) {
        if (v.bit >= width) throw Error(ErrorKind::BitOutOfRange, "bit beyond width");
        if (v.stage != free_stage) return fixed.bit(v.bit) ? Tri::True : Tri::False;
        if (((assigned_mask >> v.bit) & 1U) == 0) return Tri::Unknown;
        return ((value >> v.bit) & 1U) ? Tri::True : Tri::False;
    };
    auto rec = [&](auto & self, int bit) -> void {
        const Tri t = kleene(f, value_of);
        if (t == Tri::False) return;
        if (t == Tri::True) {
            // Every completion of the remaining low bits satisfies f.
            const std::uint64_t free_count = std::uint64_t{1} << (bit + 1);
            for (std::uint64_t low = 0; low < free_count; ++low) out.push_back(State{value | low});
            return;
        }
        if (bit < 0) return;
        const std::uint64_t m = std::uint64_t{1} << bit;
        assigned_mask |= m;
        value &= ~m;
        self(self, bit - 1);
        value |= m;
        self(self, bit - 1);
        value &= ~m;
        assigned_mask &= ~m;
    };
    rec(rec, static_cast<int>(width) - 1);
    return out;
}

void require_width(const TransitionSystem & sys, unsigned cap)
{
    if (sys.width() > cap)
        throw Error(ErrorKind::WidthTooLarge,
                    "width " + std::to_string(sys.width()) + " exceeds the explicit-state cap " + std::to_string(cap));
}

} // namespace

std::vector<State> models(const Formula & state_formula, unsigned width)
{
    return enumerate(state_formula, width, Stage::Current, State{});
}

std::vector<State> successors(const TransitionSystem & sys, State s)
{
    return enumerate(sys.trans(), sys.width(), Stage::Next, s);
}

ReachReport reach(const TransitionSystem & sys)
{
    require_width(sys, kReachWidthCap);
    const std::uint64_t n = sys.num_states();
    std::vector<bool> visited(n, false);
    std::vector<std::uint32_t> parent(n, 0);
    std::vector<std::uint32_t> dist(n, 0);
    constexpr std::uint32_t kRoot = ~std::uint32_t{0};

    ReachReport report;
    std::vector<State> frontier;
    std::optional<State> bad;
    auto discover = [&](State s, std::uint32_t from, std::uint32_t d) {
        visited[s.value] = true;
        parent[s.value] = from;
        dist[s.value] = d;
        report.reachable.push_back(s);
        if (!bad && !sys.is_safe(s)) bad = s;
    };

    for (State s : models(sys.init(), sys.width())) {
        discover(s, kRoot, 0);
        frontier.push_back(s);
    }
    std::uint32_t layer = 0;
    while (!frontier.empty()) {
        std::vector<State> next;
        for (State s : frontier) {
            for (State t : successors(sys, s)) {
                if (visited[t.value]) continue;
                discover(t, static_cast<std::uint32_t>(s.value), layer + 1);
                next.push_back(t);
            }
        }
        if (!next.empty()) report.depth = layer + 1;
        frontier.swap(next);
        ++layer;
    }

    std::sort(report.reachable.begin(), report.reachable.end());
    report.safe = !bad.has_value();
    if (bad) {
        std::vector<State> trace(dist[bad->value] + 1);
        std::uint64_t cur = bad->value;
        for (std::size_t i = trace.size(); i-- > 0;) {
            trace[i] = State{cur};
            cur = parent[cur];
        }
        report.shortest_cex = StateSeq(sys.width(), std::move(trace));
    }
    return report;
}

bool validate_trace(const TransitionSystem & sys, const StateSeq & trace)
{
    if (trace.width() != sys.width() || trace.origin() != 0 || trace.size() == 0) return false;
    return sys.is_initial(trace.at(0)) && path(sys.trans(), trace, 0, trace.size() - 1) && !sys.is_safe(trace.back());
}

bool loopfree_safety(const TransitionSystem & sys, std::optional<std::uint64_t> max_len)
{
    require_width(sys, kLoopFreeWidthCap);
    const std::uint64_t n = sys.num_states();
    const std::uint64_t bound = max_len.value_or(n - 1);

    std::vector<std::vector<std::uint32_t>> succ(n);
    std::vector<std::vector<std::uint32_t>> pred(n);
    for (std::uint64_t s = 0; s < n; ++s)
        for (State t : successors(sys, State{s})) {
            succ[s].push_back(static_cast<std::uint32_t>(t.value));
            pred[t.value].push_back(static_cast<std::uint32_t>(s));
        }

    // States with some walk to a P-violation. Walk endpoints over-approximate
    // loop-free path endpoints, so a state outside this set has only safe
    // loop-free continuations and the search below can skip it.
    std::vector<bool> reaches_bad(n, false);
    std::vector<std::uint32_t> work;
    for (std::uint64_t s = 0; s < n; ++s)
        if (!sys.is_safe(State{s})) {
            reaches_bad[s] = true;
            work.push_back(static_cast<std::uint32_t>(s));
        }
    while (!work.empty()) {
        const std::uint32_t t = work.back();
        work.pop_back();
        for (std::uint32_t p : pred[t])
            if (!reaches_bad[p]) {
                reaches_bad[p] = true;
                work.push_back(p);
            }
    }

    constexpr std::uint64_t kExpansionBudget = 50'000'000;
    std::uint64_t expansions = 0;
    std::vector<bool> on_path(n, false);

    // Depth-first enumeration of loop-free paths; returns false at the first
    // endpoint violating P.
    auto dfs = [&](auto & self, std::uint32_t v, std::uint64_t len) -> bool {
        if (!sys.is_safe(State{v})) return false;
        if (len == bound) return true;
        if (++expansions > kExpansionBudget)
            throw Error(ErrorKind::ResourceLimit, "loop-free path enumeration budget exhausted");
        on_path[v] = true;
        bool ok = true;
        for (std::uint32_t u : succ[v]) {
            if (on_path[u] || !reaches_bad[u]) continue;
            if (!self(self, u, len + 1)) {
                ok = false;
                break;
            }
        }
        on_path[v] = false;
        return ok;
    };

    for (State s : models(sys.init(), sys.width())) {
        if (!reaches_bad[s.value]) continue;
        if (!dfs(dfs, static_cast<std::uint32_t>(s.value), 0)) return false;
    }
    return true;
}

} // namespace smckit::oracle
