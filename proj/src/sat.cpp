/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unistd.h>

#include "smckit/error.hpp"
#include "smckit/sat.hpp"

namespace smckit {

std::string export_dimacs(const CnfFormula & cnf)
{
    std::string out = "p cnf " + std::to_string(cnf.num_vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
    for (const auto & clause : cnf.clauses) {
        for (int lit : clause) {
            out += std::to_string(lit);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

CnfFormula parse_dimacs(std::string_view text)
{
    CnfFormula cnf;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    std::size_t expected = 0;
    std::vector<int> clause;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
        if (tok == "p") {
            std::string fmt;
            long long v = -1, c = -1;
            if (header || !(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw Error(ErrorKind::SyntaxError, "bad DIMACS header: " + line);
            header = true;
            cnf.num_vars = static_cast<int>(v);
            expected = static_cast<std::size_t>(c);
            continue;
        }
        if (!header) throw Error(ErrorKind::SyntaxError, "clause before DIMACS header");
        std::istringstream ts(line);
        long long lit;
        while (ts >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(std::move(clause));
                clause.clear();
            } else {
                if (std::llabs(lit) > cnf.num_vars) throw Error(ErrorKind::SyntaxError, "literal out of range");
                clause.push_back(static_cast<int>(lit));
            }
        }
        if (!ts.eof()) throw Error(ErrorKind::SyntaxError, "bad token in DIMACS: " + line);
    }
    if (!header) throw Error(ErrorKind::SyntaxError, "missing DIMACS header");
    if (!clause.empty()) cnf.clauses.push_back(std::move(clause));
    if (cnf.clauses.size() != expected) throw Error(ErrorKind::SyntaxError, "clause count does not match header");
    return cnf;
}

SatResult parse_solver_output(std::string_view text, int num_vars)
{
    std::optional<SatResult::Verdict> verdict;
    bool unknown = false;
    bool bare_model = false; // MiniSat result file: literals follow "SAT"
    std::vector<int> lits;

    auto set_verdict = [&](SatResult::Verdict v) {
        if (verdict || unknown) throw Error(ErrorKind::MalformedSolverOutput, "more than one status line");
        verdict = v;
    };
    auto read_lits = [&](std::istringstream & ls) {
        std::string tok;
        while (ls >> tok) {
            char * end = nullptr;
            const long long lit = std::strtoll(tok.c_str(), &end, 10);
            if (*end != '\0') throw Error(ErrorKind::MalformedSolverOutput, "bad model token '" + tok + "'");
            if (lit == 0) continue;
            if (std::llabs(lit) > num_vars) throw Error(ErrorKind::MalformedSolverOutput, "model literal out of range");
            lits.push_back(static_cast<int>(lit));
        }
    };

    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c") continue;
        if (tok == "s") {
            std::string status;
            ls >> status;
            if (status == "SATISFIABLE") set_verdict(SatResult::Verdict::Sat);
            else if (status == "UNSATISFIABLE") set_verdict(SatResult::Verdict::Unsat);
            else if (status == "UNKNOWN" || status == "INDETERMINATE") unknown = true;
            else throw Error(ErrorKind::MalformedSolverOutput, "unknown status '" + status + "'");
        } else if (tok == "SAT" || tok == "SATISFIABLE") {
            set_verdict(SatResult::Verdict::Sat);
            bare_model = true;
        } else if (tok == "UNSAT" || tok == "UNSATISFIABLE") {
            set_verdict(SatResult::Verdict::Unsat);
        } else if (tok == "INDET" || tok == "UNKNOWN") {
            unknown = true;
        } else if (tok == "v") {
            read_lits(ls);
        } else if (bare_model) {
            std::istringstream all(line);
            read_lits(all);
        } else {
            throw Error(ErrorKind::MalformedSolverOutput, "unexpected line '" + line + "'");
        }
    }
    if (unknown) throw Error(ErrorKind::ResourceLimit, "external solver gave up");
    if (!verdict) throw Error(ErrorKind::MalformedSolverOutput, "no status line");

    SatResult result;
    result.verdict = *verdict;
    if (result.sat()) {
        result.model.assign(static_cast<std::size_t>(num_vars), false);
        for (int lit : lits) {
            const auto v = static_cast<std::size_t>(std::abs(lit)) - 1;
            result.model[v] = lit > 0;
        }
    } else if (!lits.empty()) {
        throw Error(ErrorKind::MalformedSolverOutput, "model lines on an unsatisfiable result");
    }
    return result;
}

std::string format_solver_output(const SatResult & result)
{
    if (!result.sat()) return "s UNSATISFIABLE\n";
    std::string out = "s SATISFIABLE\nv";
    for (std::size_t v = 0; v < result.model.size(); ++v) {
        out += ' ';
        if (!result.model[v]) out += '-';
        out += std::to_string(v + 1);
    }
    out += " 0\n";
    return out;
}

namespace {

std::filesystem::path scratch_file(const char * suffix)
{
    static std::atomic<unsigned long> counter{0};
    const auto tid = std::hash<std::thread::id>{}(std::this_thread::get_id());
    return std::filesystem::temp_directory_path() /
           ("smckit-" + std::to_string(::getpid()) + "-" + std::to_string(tid % 100000) + "-" +
            std::to_string(counter++) + suffix);
}

void replace_all(std::string & s, std::string_view from, const std::string & to)
{
    for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
        s.replace(pos, from.size(), to);
}

} // namespace

SatResult ExternalSolver::solve(const CnfFormula & cnf) const
{
    const auto input = scratch_file(".cnf");
    const auto output = scratch_file(".out");
    {
        std::ofstream f(input);
        if (!f) throw Error(ErrorKind::IoError, "cannot write " + input.string());
        f << export_dimacs(cnf);
    }
    std::string cmd = command_;
    const bool has_output = cmd.find("{output}") != std::string::npos;
    replace_all(cmd, "{input}", "'" + input.string() + "'");
    replace_all(cmd, "{output}", "'" + output.string() + "'");
    if (cmd == command_ && !has_output) cmd += " '" + input.string() + "'";
    if (!has_output) cmd += " > '" + output.string() + "'";
    // SAT solvers conventionally exit with 10/20, so the status is not checked.
    [[maybe_unused]] const int rc = std::system(cmd.c_str());

    std::ifstream in(output);
    std::ostringstream buf;
    if (in) buf << in.rdbuf();
    std::error_code ec;
    std::filesystem::remove(input, ec);
    std::filesystem::remove(output, ec);
    if (!in) throw Error(ErrorKind::IoError, "external solver produced no output: " + cmd);

    SatResult result = parse_solver_output(buf.str(), cnf.num_vars);
    if (result.sat() && !satisfies(cnf, result.model))
        throw Error(ErrorKind::MalformedSolverOutput, "external model violates the formula");
    return result;
}

SatResult solve(const CnfFormula & cnf, const SolverConfig & config)
{
    if (!config.external_command.empty()) return ExternalSolver(config.external_command).solve(cnf);
    return solve(cnf, config.options);
}

// ---------------------------------------------------------------------------

namespace {

void check_query_shape(const ValidityQuery & q, unsigned width)
{
    q.body.for_each_atom([&](const TimedVar & v) {
        if (v.step > q.steps) throw std::invalid_argument("query body refers past its last step: " + q.label);
        if (v.bit >= width) throw Error(ErrorKind::BitOutOfRange, "query body bit beyond width: " + q.label);
    });
}

} // namespace

CnfFormula query_cnf(const ValidityQuery & query)
{
    CnfBuilder builder;
    builder.require(!query.body);
    return builder.take();
}

QueryOutcome check_validity(const ValidityQuery & query, unsigned width, const SolverConfig & config)
{
    check_query_shape(query, width);
    const CnfFormula cnf = query_cnf(query);
    const SatResult sat = solve(cnf, config);

    QueryOutcome out;
    out.stats = sat.stats;
    if (!sat.sat()) return out;

    std::vector<State> states(query.steps + 1);
    for (const auto & [tv, var] : cnf.var_map)
        if (sat.value(var)) states[tv.step].value |= std::uint64_t{1} << tv.bit;
    StateSeq witness(width, std::move(states));
    const bool holds = query.body.evaluate([&](const TimedVar & v) { return witness.at(v.step).bit(v.bit); });
    if (holds) throw std::logic_error("decoded witness does not refute " + query.label);
    out.verdict = QueryOutcome::Verdict::Refuted;
    out.witness = std::move(witness);
    return out;
}

namespace {

void smt2_term(const TimedFormula & f, std::string & out)
{
    auto nary = [&](const char * op) {
        out += '(';
        out += op;
        for (const auto & k : f.children()) {
            out += ' ';
            smt2_term(k, out);
        }
        out += ')';
    };
    switch (f.op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Var: out += "s" + std::to_string(f.atom().step) + "_b" + std::to_string(f.atom().bit); break;
    case Op::Not: nary("not"); break;
    case Op::And: nary("and"); break;
    case Op::Or: nary("or"); break;
    case Op::Implies: nary("=>"); break;
    case Op::Iff: nary("="); break;
    }
}

} // namespace

std::string export_smt2(const ValidityQuery & query, unsigned width)
{
    check_query_shape(query, width);
    std::string out;
    if (!query.label.empty()) out += "; " + query.label + "\n";
    out += "(set-logic QF_UF)\n";
    for (unsigned t = 0; t <= query.steps; ++t)
        for (unsigned b = 0; b < width; ++b)
            out += "(declare-const s" + std::to_string(t) + "_b" + std::to_string(b) + " Bool)\n";
    out += "(assert (not ";
    smt2_term(query.body, out);
    out += "))\n(check-sat)\n(exit)\n";
    return out;
}

} // namespace smckit
