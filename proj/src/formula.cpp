/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/formula.hpp"

#include <algorithm>
#include <cstdlib>

#include "smckit/error.hpp"

namespace smckit {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::MissingNextState: return "MissingNextState";
    case ErrorKind::BitOutOfRange: return "BitOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredVariable: return "UndeclaredVariable";
    case ErrorKind::NextInInit: return "NextInInit";
    case ErrorKind::WidthMismatch: return "WidthMismatch";
    case ErrorKind::IndexOutOfWindow: return "IndexOutOfWindow";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
    case ErrorKind::MalformedSolverOutput: return "MalformedSolverOutput";
    case ErrorKind::NonClausalProperty: return "NonClausalProperty";
    case ErrorKind::WidthTooLarge: return "WidthTooLarge";
    case ErrorKind::CertificateParseError: return "CertificateParseError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

bool eval(const Formula & f, State current, std::optional<State> next, unsigned width)
{
    return f.evaluate([&](const VarRef & v) {
        if (v.bit >= width)
            throw Error(ErrorKind::BitOutOfRange,
                        "bit b" + std::to_string(v.bit) + " in a " + std::to_string(width) + "-bit state");
        if (v.stage == Stage::Current) return current.bit(v.bit);
        if (!next) throw Error(ErrorKind::MissingNextState, "b" + std::to_string(v.bit) + "' needs a next state");
        return next->bit(v.bit);
    });
}

TimedFormula instantiate(const Formula & f, unsigned t)
{
    return f.map_atoms<TimedVar>([t](const VarRef & v) {
        return TimedVar{v.bit, v.stage == Stage::Current ? t : t + 1};
    });
}

bool has_next_vars(const Formula & f)
{
    return f.any_atom([](const VarRef & v) { return v.stage == Stage::Next; });
}

unsigned max_step(const TimedFormula & f)
{
    unsigned m = 0;
    f.for_each_atom([&](const TimedVar & v) { m = std::max(m, v.step); });
    return m;
}

namespace {

int precedence(Op op)
{
    switch (op) {
    case Op::Iff: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    default: return 6;
    }
}

template <class A, class AtomPrinter>
void render(const Expr<A> & f, int min_prec, std::string & out, AtomPrinter & atom)
{
    const int p = precedence(f.op());
    const bool parens = p < min_prec;
    if (parens) out += '(';
    switch (f.op()) {
    case Op::True: out += "true"; break;
    case Op::False: out += "false"; break;
    case Op::Var: out += atom(f.atom()); break;
    case Op::Not:
        out += '!';
        render(f.child(0), 5, out, atom);
        break;
    case Op::And:
    case Op::Or: {
        const char * sep = f.op() == Op::And ? " & " : " | ";
        for (std::size_t i = 0; i < f.children().size(); ++i) {
            if (i) out += sep;
            render(f.child(i), p + 1, out, atom);
        }
        break;
    }
    case Op::Implies:
        render(f.child(0), 3, out, atom);
        out += " -> ";
        render(f.child(1), 2, out, atom);
        break;
    case Op::Iff:
        render(f.child(0), 1, out, atom);
        out += " <-> ";
        render(f.child(1), 2, out, atom);
        break;
    }
    if (parens) out += ')';
}

} // namespace

std::string to_string(const Formula & f)
{
    std::string out;
    auto atom = [](const VarRef & v) {
        return "b" + std::to_string(v.bit) + (v.stage == Stage::Next ? "'" : "");
    };
    render(f, 0, out, atom);
    return out;
}

std::string to_string(const TimedFormula & f)
{
    std::string out;
    auto atom = [](const TimedVar & v) { return "s" + std::to_string(v.step) + ".b" + std::to_string(v.bit); };
    render(f, 0, out, atom);
    return out;
}

// ---------------------------------------------------------------------------
// Tseitin encoding

int CnfBuilder::fresh() { return ++cnf_.num_vars; }

int CnfBuilder::atom_var(TimedVar v)
{
    auto [it, inserted] = cnf_.var_map.try_emplace(v, 0);
    if (inserted) it->second = fresh();
    return it->second;
}

int CnfBuilder::true_literal()
{
    if (true_var_ == 0) {
        true_var_ = fresh();
        add_clause({true_var_});
    }
    return true_var_;
}

void CnfBuilder::add_clause(std::vector<int> clause)
{
    std::sort(clause.begin(), clause.end(), [](int a, int b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a < b;
    });
    clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
    for (std::size_t i = 1; i < clause.size(); ++i)
        if (clause[i] == -clause[i - 1]) return; // tautology
    cnf_.clauses.push_back(std::move(clause));
}

int CnfBuilder::literal(const TimedFormula & f)
{
    switch (f.op()) {
    case Op::True: return true_literal();
    case Op::False: return -true_literal();
    case Op::Var: return atom_var(f.atom());
    case Op::Not: return -literal(f.child(0));
    default: break;
    }
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;

    std::vector<int> kids;
    kids.reserve(f.children().size());
    for (const auto & k : f.children()) kids.push_back(literal(k));

    const int g = fresh();
    switch (f.op()) {
    case Op::And: {
        std::vector<int> big{g};
        for (int l : kids) {
            add_clause({-g, l});
            big.push_back(-l);
        }
        add_clause(std::move(big));
        break;
    }
    case Op::Or: {
        std::vector<int> big{-g};
        for (int l : kids) {
            add_clause({g, -l});
            big.push_back(l);
        }
        add_clause(std::move(big));
        break;
    }
    case Op::Implies: {
        const int a = kids[0], b = kids[1];
        add_clause({-g, -a, b});
        add_clause({g, a});
        add_clause({g, -b});
        break;
    }
    case Op::Iff: {
        const int a = kids[0], b = kids[1];
        add_clause({-g, -a, b});
        add_clause({-g, a, -b});
        add_clause({g, a, b});
        add_clause({g, -a, -b});
        break;
    }
    default: break;
    }
    memo_.emplace(f.id(), g);
    keep_alive_.push_back(f);
    return g;
}

void CnfBuilder::require(const TimedFormula & f)
{
    if (f.op() == Op::True) return;
    if (f.op() == Op::And) {
        for (const auto & k : f.children()) require(k);
        return;
    }
    if (f.op() == Op::Or) {
        std::vector<int> clause;
        for (const auto & k : f.children()) clause.push_back(literal(k));
        add_clause(std::move(clause));
        return;
    }
    add_clause({literal(f)});
}

CnfFormula to_cnf(const TimedFormula & f)
{
    CnfBuilder b;
    b.require(f);
    return b.take();
}

} // namespace smckit
