/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_SAT_HPP
#define SMCKIT_SAT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smckit/formula.hpp"
#include "smckit/system.hpp"

namespace smckit {

struct SolverOptions {
    std::uint64_t conflict_budget = 1'000'000;
    std::uint64_t seed = 0;
    std::uint64_t restart_first = 100;
    double restart_factor = 1.5;
};

struct SatStats {
    std::uint64_t conflicts = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

struct SatResult {
    enum class Verdict { Sat, Unsat };

    Verdict verdict = Verdict::Unsat;
    /// model[v - 1] is the value of DIMACS variable v.
    std::vector<bool> model;
    SatStats stats;

    bool sat() const noexcept { return verdict == Verdict::Sat; }
    bool value(int var) const { return var >= 1 && static_cast<std::size_t>(var) <= model.size() && model[var - 1]; }
};

/// CDCL search. Throws Error(ResourceLimit) once the conflict budget is spent.
/// A Sat model is checked against every clause before it is returned.
SatResult solve(const CnfFormula & cnf, const SolverOptions & options = {});

bool satisfies(const CnfFormula & cnf, const std::vector<bool> & model);

// ---------------------------------------------------------------------------
// DIMACS and solver transcripts

std::string export_dimacs(const CnfFormula & cnf);

/// Reads `p cnf` text. Only the header and clauses are kept; the result has an
/// empty var_map.
CnfFormula parse_dimacs(std::string_view text);

/// Accepts competition output (`s SATISFIABLE` / `v ...` lines) and the
/// MiniSat result-file form (`SAT` followed by a literal line). Variables
/// missing from the model read as false. Throws MalformedSolverOutput.
SatResult parse_solver_output(std::string_view text, int num_vars);

/// Competition-format transcript for a result.
std::string format_solver_output(const SatResult & result);

/// File-based adapter for an external DIMACS solver. The command template may
/// name `{input}` and `{output}`; without `{output}` standard output is
/// captured instead.
class ExternalSolver {
public:
    explicit ExternalSolver(std::string command_template) : command_(std::move(command_template)) {}

    SatResult solve(const CnfFormula & cnf) const;
    const std::string & command() const noexcept { return command_; }

private:
    std::string command_;
};

/// Embedded solver unless an external command is configured.
struct SolverConfig {
    SolverOptions options;
    std::string external_command;
};

SatResult solve(const CnfFormula & cnf, const SolverConfig & config);

// ---------------------------------------------------------------------------
// Validity queries

/// `forall s_[0..steps], body`.
struct ValidityQuery {
    unsigned steps = 0;
    TimedFormula body;
    std::string label;
};

struct QueryOutcome {
    enum class Verdict { Valid, Refuted };

    Verdict verdict = Verdict::Valid;
    /// For Refuted: steps+1 states falsifying the body.
    std::optional<StateSeq> witness;
    SatStats stats;

    bool valid() const noexcept { return verdict == Verdict::Valid; }
};

/// Valid iff the negated body is unsatisfiable. Bits the model leaves
/// unconstrained decode as false. The witness is re-evaluated against the body.
QueryOutcome check_validity(const ValidityQuery & query, unsigned width, const SolverConfig & config = {});

/// Clause form of the negated body, as handed to the solver.
CnfFormula query_cnf(const ValidityQuery & query);

/// SMT-LIB2 script declaring one Bool per timed bit and asserting the negated
/// body, ending in (check-sat).
std::string export_smt2(const ValidityQuery & query, unsigned width);

} // namespace smckit

#endif // SMCKIT_SAT_HPP
