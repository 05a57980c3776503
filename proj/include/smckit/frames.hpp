/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_FRAMES_HPP
#define SMCKIT_FRAMES_HPP

#include <compare>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "smckit/formula.hpp"

namespace smckit {

struct BitLit {
    unsigned bit = 0;
    bool positive = true;

    friend auto operator<=>(const BitLit &, const BitLit &) = default;
};

/// Conjunction of literals, kept sorted by bit with at most one literal per bit.
struct Cube {
    std::vector<BitLit> lits;

    static Cube of_state(State s, unsigned width);
    bool contains(State s) const;
    Formula formula() const;

    friend auto operator<=>(const Cube &, const Cube &) = default;
};

/// Disjunction of literals, same representation as Cube.
struct Clause {
    std::vector<BitLit> lits;

    bool holds(State s) const;
    Formula formula() const;
    std::string to_string() const;

    friend auto operator<=>(const Clause &, const Clause &) = default;
};

Clause negate(const Cube & cube);
Cube negate(const Clause & clause);
/// Sorts and deduplicates; returns false on a complementary pair.
bool normalize(std::vector<BitLit> & lits);

/// PDR over-approximations R_0 .. R_N. R_0 stands for the initial states and
/// carries no clauses. For i >= 1, R_i is the conjunction of its clause set;
/// clause sets shrink with i (clauses(R_{i+1}) is a subset of clauses(R_i)).
class FrameSeq {
public:
    /// R_0 only.
    FrameSeq() = default;

    /// Index of the last frame.
    std::size_t top() const noexcept { return clauses_.size(); }
    std::size_t size() const noexcept { return clauses_.size() + 1; }

    /// Appends R_{top+1} with the given clauses.
    void push(std::set<Clause> clauses);

    /// Clause set of R_i, i >= 1.
    const std::set<Clause> & clauses(std::size_t i) const;

    /// Adds `c` to R_1 .. R_{i+1}. R_0 is never touched.
    void refine(std::size_t i, const Clause & c);

    /// Adds `c` to R_i alone, for forward propagation.
    void add_at(std::size_t i, const Clause & c);

    /// Formula denoted by R_i with R_0 = init. Indices past the top read the
    /// top frame.
    Formula denotation(std::size_t i, const Formula & init) const;

    bool syntactically_monotone() const;

    friend bool operator==(const FrameSeq &, const FrameSeq &) = default;

private:
    std::vector<std::set<Clause>> clauses_; // clauses_[i-1] holds R_i
};

/// Text form: `frame <i>` headers from 0 up, each followed by DIMACS-style
/// literal lines (bit b is literal b+1) terminated by 0. Frame 0 is empty.
/// Lines starting with `c` or `#` are comments.
std::string write_certificate(const FrameSeq & frames);
/// Throws CertificateParseError.
FrameSeq parse_certificate(std::string_view text, unsigned width);

} // namespace smckit

#endif // SMCKIT_FRAMES_HPP
