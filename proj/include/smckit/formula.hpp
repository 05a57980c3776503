/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_FORMULA_HPP
#define SMCKIT_FORMULA_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace smckit {

enum class Stage : std::uint8_t { Current, Next };

/// A state bit in the current or the primed (next) state.
struct VarRef {
    unsigned bit = 0;
    Stage stage = Stage::Current;

    friend auto operator<=>(const VarRef &, const VarRef &) = default;
};

/// A state bit pinned to an absolute position in an unrolled path.
struct TimedVar {
    unsigned bit = 0;
    unsigned step = 0;

    friend auto operator<=>(const TimedVar &, const TimedVar &) = default;
};

enum class Op : std::uint8_t { True, False, Var, Not, And, Or, Implies, Iff };

/// Immutable boolean expression tree over atoms of type `Atom`. Subtrees may be
/// shared between expressions; copying an `Expr` is a reference-count bump.
template <class Atom>
class Expr {
    struct Node {
        Op op;
        Atom atom{};
        std::vector<Expr> kids;
    };

public:
    using atom_type = Atom;

    Expr() : node_(constant_node(true)) {}

    static Expr constant(bool value) { return Expr(constant_node(value)); }
    static Expr top() { return constant(true); }
    static Expr bottom() { return constant(false); }

    static Expr var(Atom atom) { return Expr(std::make_shared<const Node>(Node{Op::Var, atom, {}})); }

    static Expr make_not(Expr e) { return Expr(std::make_shared<const Node>(Node{Op::Not, {}, {std::move(e)}})); }

    static Expr make_implies(Expr lhs, Expr rhs)
    {
        return Expr(std::make_shared<const Node>(Node{Op::Implies, {}, {std::move(lhs), std::move(rhs)}}));
    }

    static Expr make_iff(Expr lhs, Expr rhs)
    {
        return Expr(std::make_shared<const Node>(Node{Op::Iff, {}, {std::move(lhs), std::move(rhs)}}));
    }

    // Empty conjunction is true, empty disjunction false; a single operand is
    // returned as is and nested nodes of the same kind are flattened.
    static Expr make_and(std::vector<Expr> operands) { return nary(Op::And, std::move(operands)); }
    static Expr make_or(std::vector<Expr> operands) { return nary(Op::Or, std::move(operands)); }

    Op op() const noexcept { return node_->op; }
    const Atom & atom() const noexcept { return node_->atom; }
    const std::vector<Expr> & children() const noexcept { return node_->kids; }
    const Expr & child(std::size_t i) const { return node_->kids.at(i); }

    bool is_const() const noexcept { return op() == Op::True || op() == Op::False; }

    // Identity of the underlying node, used to memoize over shared subtrees.
    const void * id() const noexcept { return node_.get(); }

    template <class F>
    bool evaluate(F && value_of) const
    {
        switch (op()) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Var: return value_of(atom());
        case Op::Not: return !child(0).evaluate(value_of);
        case Op::And:
            for (const auto & k : children())
                if (!k.evaluate(value_of)) return false;
            return true;
        case Op::Or:
            for (const auto & k : children())
                if (k.evaluate(value_of)) return true;
            return false;
        case Op::Implies: return !child(0).evaluate(value_of) || child(1).evaluate(value_of);
        case Op::Iff: return child(0).evaluate(value_of) == child(1).evaluate(value_of);
        }
        return false;
    }

    /// Rebuilds the tree with every atom replaced by `f(atom)`; shared
    /// subtrees stay shared in the result.
    template <class OtherAtom, class F>
    Expr<OtherAtom> map_atoms(F && f) const
    {
        std::unordered_map<const void *, Expr<OtherAtom>> memo;
        return map_rec<OtherAtom>(f, memo);
    }

    template <class Pred>
    bool any_atom(Pred && pred) const
    {
        if (op() == Op::Var) return pred(atom());
        for (const auto & k : children())
            if (k.any_atom(pred)) return true;
        return false;
    }

    template <class F>
    void for_each_atom(F && f) const
    {
        if (op() == Op::Var) {
            f(atom());
            return;
        }
        for (const auto & k : children()) k.for_each_atom(f);
    }

    std::size_t size() const
    {
        std::size_t n = 1;
        for (const auto & k : children()) n += k.size();
        return n;
    }

    /// Structural equality (not semantic equivalence).
    friend bool operator==(const Expr & a, const Expr & b)
    {
        if (a.node_ == b.node_) return true;
        if (a.op() != b.op() || a.children().size() != b.children().size()) return false;
        if (a.op() == Op::Var && !(a.atom() == b.atom())) return false;
        for (std::size_t i = 0; i < a.children().size(); ++i)
            if (!(a.child(i) == b.child(i))) return false;
        return true;
    }

private:
    template <class>
    friend class Expr;

    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> constant_node(bool value)
    {
        static const auto t = std::make_shared<const Node>(Node{Op::True, {}, {}});
        static const auto f = std::make_shared<const Node>(Node{Op::False, {}, {}});
        return value ? t : f;
    }

    static Expr nary(Op op, std::vector<Expr> operands)
    {
        std::vector<Expr> flat;
        flat.reserve(operands.size());
        for (auto & e : operands) {
            if (e.op() == op)
                flat.insert(flat.end(), e.children().begin(), e.children().end());
            else
                flat.push_back(std::move(e));
        }
        if (flat.empty()) return constant(op == Op::And);
        if (flat.size() == 1) return flat.front();
        return Expr(std::make_shared<const Node>(Node{op, {}, std::move(flat)}));
    }

    template <class OtherAtom, class F>
    Expr<OtherAtom> map_rec(F & f, std::unordered_map<const void *, Expr<OtherAtom>> & memo) const
    {
        if (auto it = memo.find(id()); it != memo.end()) return it->second;
        Expr<OtherAtom> out;
        switch (op()) {
        case Op::True: out = Expr<OtherAtom>::top(); break;
        case Op::False: out = Expr<OtherAtom>::bottom(); break;
        case Op::Var: out = Expr<OtherAtom>::var(f(atom())); break;
        default: {
            std::vector<Expr<OtherAtom>> kids;
            kids.reserve(children().size());
            for (const auto & k : children()) kids.push_back(k.template map_rec<OtherAtom>(f, memo));
            using Target = typename Expr<OtherAtom>::Node;
            out = Expr<OtherAtom>(std::make_shared<const Target>(Target{op(), {}, std::move(kids)}));
        }
        }
        memo.emplace(id(), out);
        return out;
    }

    std::shared_ptr<const Node> node_;
};

using Formula = Expr<VarRef>;
using TimedFormula = Expr<TimedVar>;

// Construction helpers shared by both formula flavours.
template <class A>
Expr<A> operator!(const Expr<A> & e) { return Expr<A>::make_not(e); }
template <class A>
Expr<A> operator&(const Expr<A> & a, const Expr<A> & b) { return Expr<A>::make_and({a, b}); }
template <class A>
Expr<A> operator|(const Expr<A> & a, const Expr<A> & b) { return Expr<A>::make_or({a, b}); }
template <class A>
Expr<A> implies(const Expr<A> & a, const Expr<A> & b) { return Expr<A>::make_implies(a, b); }
template <class A>
Expr<A> iff(const Expr<A> & a, const Expr<A> & b) { return Expr<A>::make_iff(a, b); }

inline Formula cur(unsigned bit) { return Formula::var({bit, Stage::Current}); }
inline Formula nxt(unsigned bit) { return Formula::var({bit, Stage::Next}); }
inline TimedFormula at(unsigned bit, unsigned step) { return TimedFormula::var({bit, step}); }

/// State value as a plain bit vector; bit i of `value` is state bit b<i>.
struct State {
    std::uint64_t value = 0;

    bool bit(unsigned i) const noexcept { return ((value >> i) & 1U) != 0; }

    friend auto operator<=>(const State &, const State &) = default;
};

/// Evaluates a state formula. Throws MissingNextState when a primed variable is
/// reached without `next`, BitOutOfRange when a bit index is >= width.
bool eval(const Formula & f, State current, std::optional<State> next, unsigned width);

/// Maps Current to step t and Next to step t+1.
TimedFormula instantiate(const Formula & f, unsigned t);

bool has_next_vars(const Formula & f);
unsigned max_step(const TimedFormula & f);

/// DSL rendering (b0, b0', ! & | -> <->), parenthesized so that it re-parses
/// to the same tree.
std::string to_string(const Formula & f);
std::string to_string(const TimedFormula & f);

/// Solver-ready clause form of a timed formula.
struct CnfFormula {
    int num_vars = 0;
    std::vector<std::vector<int>> clauses;
    std::map<TimedVar, int> var_map;
};

/// Incremental Tseitin encoder. Literals are DIMACS-style signed integers;
/// timed atoms get variables on first use.
class CnfBuilder {
public:
    int literal(const TimedFormula & f);

    /// Adds clauses forcing `f` to hold.
    void require(const TimedFormula & f);

    int atom_var(TimedVar v);
    int fresh();
    void add_clause(std::vector<int> clause);

    const CnfFormula & cnf() const noexcept { return cnf_; }
    CnfFormula take() { return std::move(cnf_); }

private:
    int true_literal();

    CnfFormula cnf_;
    int true_var_ = 0;
    std::unordered_map<const void *, int> memo_;
    std::vector<TimedFormula> keep_alive_;
};

CnfFormula to_cnf(const TimedFormula & f);

} // namespace smckit

#endif // SMCKIT_FORMULA_HPP
