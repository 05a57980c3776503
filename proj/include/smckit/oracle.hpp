/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_ORACLE_HPP
#define SMCKIT_ORACLE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "smckit/system.hpp"

// Explicit-state ground truth. Nothing here touches the SAT backend.

namespace smckit::oracle {

inline constexpr unsigned kReachWidthCap = 24;
inline constexpr unsigned kLoopFreeWidthCap = 12;

struct ReachReport {
    std::vector<State> reachable; // ascending
    bool safe = true;
    std::optional<StateSeq> shortest_cex;
    unsigned depth = 0; // largest BFS distance from an initial state
};

/// States satisfying a current-state formula, ascending.
std::vector<State> models(const Formula & state_formula, unsigned width);

/// T-successors of `s`, ascending.
std::vector<State> successors(const TransitionSystem & sys, State s);

/// Breadth-first reachability from every initial state. Throws WidthTooLarge
/// above kReachWidthCap.
ReachReport reach(const TransitionSystem & sys);

/// I(s_0), every step in T, and the last state violates P.
bool validate_trace(const TransitionSystem & sys, const StateSeq & trace);

/// True iff every loop-free initial path of at most `max_len` transitions
/// ends in a P-state (default bound: the longest possible loop-free path).
/// Throws WidthTooLarge above kLoopFreeWidthCap and ResourceLimit if the
/// path search exceeds its expansion budget.
bool loopfree_safety(const TransitionSystem & sys, std::optional<std::uint64_t> max_len = std::nullopt);

} // namespace smckit::oracle

#endif // SMCKIT_ORACLE_HPP
