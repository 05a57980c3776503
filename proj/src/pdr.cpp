/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/pdr.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "smckit/error.hpp"
#include "smckit/oracle.hpp"

namespace smckit {

namespace {

constexpr unsigned kEnumerateWidth = 10;

QueryOutcome validity(const TimedFormula & body, unsigned steps, unsigned width, const SolverConfig & solver,
                      std::string label)
{
    return check_validity(ValidityQuery{steps, body, std::move(label)}, width, solver);
}

bool is_valid(const TimedFormula & body, unsigned steps, unsigned width, const SolverConfig & solver,
              std::string label)
{
    return validity(body, steps, width, solver, std::move(label)).valid();
}

// Negation normal form restricted to what a clause set can express.
struct Clausifier {
    unsigned width;

    [[noreturn]] static void reject(const std::string & why)
    {
        throw Error(ErrorKind::NonClausalProperty, why);
    }

    // Literals of a disjunction; nullopt when the disjunction is true.
    std::optional<std::vector<BitLit>> disjunction(const Formula & f, bool negated) const
    {
        std::vector<BitLit> lits;
        if (!collect_or(f, negated, lits)) return std::nullopt;
        if (!normalize(lits)) return std::nullopt; // tautology
        return lits;
    }

    // Returns false when the disjunction is already true.
    bool collect_or(const Formula & f, bool negated, std::vector<BitLit> & lits) const
    {
        switch (f.op()) {
        case Op::True: return negated;
        case Op::False: return !negated;
        case Op::Var:
            if (f.atom().stage != Stage::Current) reject("primed variable in a state formula");
            lits.push_back({f.atom().bit, !negated});
            return true;
        case Op::Not: return collect_or(f.child(0), !negated, lits);
        case Op::Or:
        case Op::And:
            if ((f.op() == Op::Or) == negated) reject("conjunction below a disjunction");
            for (const auto & k : f.children())
                if (!collect_or(k, negated, lits)) return false;
            return true;
        case Op::Implies:
            if (negated) reject("conjunction below a disjunction");
            return collect_or(f.child(0), true, lits) && collect_or(f.child(1), false, lits);
        case Op::Iff: reject("equivalence has no auxiliary-free clause form");
        }
        return true;
    }

    void conjunction(const Formula & f, bool negated, std::vector<Clause> & out) const
    {
        const bool is_and = (f.op() == Op::And && !negated) || (f.op() == Op::Or && negated);
        if (is_and) {
            for (const auto & k : f.children()) conjunction(k, negated, out);
            return;
        }
        if (f.op() == Op::Not) {
            conjunction(f.child(0), !negated, out);
            return;
        }
        if (f.op() == Op::Implies && negated) {
            conjunction(f.child(0), false, out);
            conjunction(f.child(1), true, out);
            return;
        }
        if (auto lits = disjunction(f, negated)) out.push_back(Clause{std::move(*lits)});
    }
};

TimedFormula at_step(const Formula & f, unsigned t) { return instantiate(f, t); }

} // namespace

std::vector<Clause> clausal_form(const Formula & state_formula, unsigned width)
{
    std::vector<Clause> out;
    Clausifier{width}.conjunction(state_formula, false, out);
    for (const auto & c : out)
        for (const auto & l : c.lits)
            if (l.bit >= width) throw Error(ErrorKind::BitOutOfRange, "bit beyond width");
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

FrameSeq init_frames(const TransitionSystem & sys)
{
    const auto clauses = clausal_form(sys.prop(), sys.width());
    FrameSeq frames;
    frames.push({clauses.begin(), clauses.end()});
    return frames;
}

std::optional<BadCube> find_bad_cube(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys,
                                     const SolverConfig & solver)
{
    if (k > frames.top()) throw std::out_of_range("find_bad_cube past the top frame");
    const auto body = !TimedFormula::make_and(
        {at_step(frames.denotation(k, sys.init()), 0), at_step(sys.trans(), 0), !at_step(sys.prop(), 1)});
    const QueryOutcome o = validity(body, 1, sys.width(), solver, "pdr.bad.k" + std::to_string(k));
    if (o.valid()) return std::nullopt;
    return BadCube{Cube::of_state(o.witness->at(0), sys.width()), o.witness->at(1)};
}

namespace {

bool initiation(const TransitionSystem & sys, const Clause & c, const SolverConfig & solver)
{
    return is_valid(implies(at_step(sys.init(), 0), at_step(c.formula(), 0)), 0, sys.width(), solver,
                    "pdr.initiation");
}

bool relatively_inductive(const FrameSeq & frames, std::size_t i, const TransitionSystem & sys, const Clause & c,
                          const SolverConfig & solver)
{
    const auto body = implies(TimedFormula::make_and({at_step(frames.denotation(i, sys.init()), 0),
                                                      at_step(c.formula(), 0), at_step(sys.trans(), 0)}),
                              at_step(c.formula(), 1));
    return is_valid(body, 1, sys.width(), solver, "pdr.consecution.i" + std::to_string(i));
}

} // namespace

Clause generalize(const FrameSeq & frames, std::size_t i, const Cube & cube, const TransitionSystem & sys,
                  const SolverConfig & solver)
{
    Clause c = negate(cube);
    std::size_t pos = 0;
    while (pos < c.lits.size() && c.lits.size() > 1) {
        Clause candidate = c;
        candidate.lits.erase(candidate.lits.begin() + static_cast<std::ptrdiff_t>(pos));
        if (initiation(sys, candidate, solver) && relatively_inductive(frames, i, sys, candidate, solver))
            c = std::move(candidate);
        else
            ++pos;
    }
    return c;
}

FrameSeq refine(FrameSeq frames, std::size_t i, const Clause & c)
{
    frames.refine(i, c);
    return frames;
}

bool converged_syntactic(const FrameSeq & frames, std::size_t k)
{
    if (k == 0 || k + 1 > frames.top()) return false;
    const auto & lo = frames.clauses(k);
    const auto & hi = frames.clauses(k + 1);
    return std::includes(hi.begin(), hi.end(), lo.begin(), lo.end());
}

bool converged(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys, const SolverConfig & solver)
{
    const Formula rk = frames.denotation(k, sys.init());
    const Formula rk1 = frames.denotation(k + 1, sys.init());
    const bool semantic =
        is_valid(implies(at_step(rk, 0), at_step(rk1, 0)), 0, sys.width(), solver, "pdr.converged.fwd") &&
        is_valid(implies(at_step(rk1, 0), at_step(rk, 0)), 0, sys.width(), solver, "pdr.converged.bwd");
    if (converged_syntactic(frames, k) && !semantic)
        throw std::logic_error("syntactic convergence without semantic equivalence");
    return semantic;
}

// ---------------------------------------------------------------------------

bool TruePostReport::all_pass() const
{
    return std::all_of(items.begin(), items.end(), [](const ItemReport & r) { return r.pass; });
}

bool FalsePostReport::all_pass() const
{
    return std::all_of(items.begin(), items.end(), [](const ItemReport & r) { return r.pass; });
}

namespace {

// Decides one state-level implication either by enumeration or by the solver.
class ItemChecker {
public:
    ItemChecker(const TransitionSystem & sys, bool enumerate, const SolverConfig & solver)
        : sys_(sys), enumerate_(enumerate), solver_(solver)
    {
    }

    // forall s. lhs(s) -> rhs(s)
    std::optional<StateSeq> entails(const Formula & lhs, const Formula & rhs) const
    {
        if (enumerate_) {
            for (std::uint64_t v = 0; v < sys_.num_states(); ++v) {
                const State s{v};
                if (eval(lhs, s, std::nullopt, sys_.width()) && !eval(rhs, s, std::nullopt, sys_.width()))
                    return StateSeq(sys_.width(), {s});
            }
            return std::nullopt;
        }
        QueryOutcome o = validity(implies(at_step(lhs, 0), at_step(rhs, 0)), 0, sys_.width(), solver_, "pdr.post");
        if (o.valid()) return std::nullopt;
        return o.witness;
    }

    // forall s, s'. lhs(s) & T(s, s') -> rhs(s')
    std::optional<StateSeq> consecution(const Formula & lhs, const Formula & rhs) const
    {
        if (enumerate_) {
            for (std::uint64_t v = 0; v < sys_.num_states(); ++v) {
                const State s{v};
                if (!eval(lhs, s, std::nullopt, sys_.width())) continue;
                for (State t : oracle::successors(sys_, s))
                    if (!eval(rhs, t, std::nullopt, sys_.width())) return StateSeq(sys_.width(), {s, t});
            }
            return std::nullopt;
        }
        const auto body =
            implies(TimedFormula::make_and({at_step(lhs, 0), at_step(sys_.trans(), 0)}), at_step(rhs, 1));
        QueryOutcome o = validity(body, 1, sys_.width(), solver_, "pdr.post");
        if (o.valid()) return std::nullopt;
        return o.witness;
    }

private:
    const TransitionSystem & sys_;
    bool enumerate_;
    const SolverConfig & solver_;
};

void record(ItemReport & item, std::size_t i, std::optional<StateSeq> witness)
{
    if (!witness || !item.pass) return;
    item.pass = false;
    item.index = i;
    item.witness = std::move(witness);
}

} // namespace

TruePostReport check_true_postcondition(const FrameSeq & frames, std::size_t k, const TransitionSystem & sys,
                                        CheckMethod method, const SolverConfig & solver)
{
    const bool enumerate =
        method == CheckMethod::Enumerate || (method == CheckMethod::Auto && sys.width() <= kEnumerateWidth);
    const ItemChecker check(sys, enumerate, solver);
    auto r = [&](std::size_t i) { return frames.denotation(i, sys.init()); };

    TruePostReport report;
    for (std::size_t n = 0; n < report.items.size(); ++n) report.items[n].item = static_cast<char>('a' + n);
    auto & [a, b, c, d, e] = report.items;

    // Frames past k+1 repeat R_{k+1}: with (e), R_{k+1} = R_k, so the
    // represented indices cover every i.
    for (std::size_t i = 0; i <= k + 1; ++i) {
        record(a, i, check.entails(sys.init(), r(i)));
        record(b, i, check.entails(r(i), sys.prop()));
    }
    for (std::size_t i = 0; i <= k; ++i) {
        record(c, i, check.entails(r(i), r(i + 1)));
        record(d, i, check.consecution(r(i), r(i + 1)));
    }
    record(e, k, check.entails(r(k), r(k + 1)));
    record(e, k, check.entails(r(k + 1), r(k)));

    for (std::size_t i = 0; i <= k && !report.exists_form; ++i)
        report.exists_form = !check.entails(r(i), r(i + 1)) && !check.entails(r(i + 1), r(i));
    return report;
}

// ---------------------------------------------------------------------------

namespace {

TimedFormula initial_path(const TransitionSystem & sys, unsigned k)
{
    return TimedFormula::make_and({at_step(sys.init(), 0), unrolled_path(sys, 0, k)});
}

} // namespace

bool false_c_true_reading(const TransitionSystem & sys, unsigned k, const SolverConfig & solver)
{
    return is_valid(implies(initial_path(sys, k), at_step(sys.prop(), k)), k, sys.width(), solver, "pdr.false.c");
}

bool false_c_universal_reading(const TransitionSystem & sys, unsigned k, const SolverConfig & solver)
{
    if (sys.width() >= kMaxWidth) throw Error(ErrorKind::WidthTooLarge, "no spare bit for the quantified frames");
    // Bit `width` at step i stands for R_i(s_i).
    std::vector<TimedFormula> parts{at_step(sys.init(), 0)};
    for (unsigned i = 0; i < k; ++i) {
        parts.push_back(at(sys.width(), i));
        parts.push_back(at_step(sys.trans(), i));
    }
    const auto body = implies(TimedFormula::make_and(std::move(parts)), at_step(sys.prop(), k));
    return is_valid(body, k, sys.width() + 1, solver, "pdr.false.c.universal");
}

bool false_c_instance(const TransitionSystem & sys, const FrameSeq & frames, unsigned k, const SolverConfig & solver)
{
    std::vector<TimedFormula> parts{at_step(sys.init(), 0)};
    for (unsigned i = 0; i < k; ++i) {
        parts.push_back(at_step(frames.denotation(i, sys.init()), i));
        parts.push_back(at_step(sys.trans(), i));
    }
    const auto body = implies(TimedFormula::make_and(std::move(parts)), at_step(sys.prop(), k));
    return is_valid(body, k, sys.width(), solver, "pdr.false.c.instance");
}

bool false_c_universal_enumerated(const TransitionSystem & sys, unsigned k)
{
    if (sys.width() > 2 || k > 3) throw Error(ErrorKind::WidthTooLarge, "explicit frame quantification is capped");
    const std::uint64_t n = sys.num_states();
    const std::uint64_t sets = std::uint64_t{1} << n; // subsets of the state space

    // Every initial path s_0 .. s_k, as state tuples.
    std::vector<std::vector<std::uint64_t>> paths;
    std::vector<std::uint64_t> cur;
    auto extend = [&](auto & self) -> void {
        if (cur.size() == k + 1) {
            paths.push_back(cur);
            return;
        }
        for (State t : oracle::successors(sys, State{cur.back()})) {
            cur.push_back(t.value);
            self(self);
            cur.pop_back();
        }
    };
    for (State s : oracle::models(sys.init(), sys.width())) {
        cur = {s.value};
        extend(extend);
    }

    std::uint64_t tuples = 1;
    for (unsigned i = 0; i < k; ++i) tuples *= sets;
    for (std::uint64_t code = 0; code < tuples; ++code) {
        for (const auto & p : paths) {
            bool premise = true;
            std::uint64_t rest = code;
            for (unsigned i = 0; i < k && premise; ++i) {
                const std::uint64_t r = rest % sets;
                rest /= sets;
                premise = ((r >> p[i]) & 1U) != 0;
            }
            if (premise && !sys.is_safe(State{p[k]})) return false;
        }
    }
    return true;
}

FalsePostReport check_false_postcondition(const TransitionSystem & sys, unsigned k, const SolverConfig & solver)
{
    FalsePostReport report;
    report.items[0].item = 'a';
    report.items[1].item = 'b';
    report.items[2].item = 'c';

    auto run = [&](ItemReport & item, const TimedFormula & body, unsigned steps) {
        QueryOutcome o = validity(body, steps, sys.width(), solver, "pdr.false");
        if (!o.valid()) record(item, 0, std::move(o.witness));
    };
    run(report.items[0], implies(at_step(sys.init(), 0), at_step(sys.prop(), 0)), 0);
    run(report.items[1], implies(initial_path(sys, 1), at_step(sys.prop(), 1)), 1);
    run(report.items[2], implies(initial_path(sys, k), at_step(sys.prop(), k)), k);
    return report;
}

// ---------------------------------------------------------------------------

namespace {

class PdrEngine {
public:
    PdrEngine(const TransitionSystem & sys, const PdrOptions & options) : sys_(sys), options_(options) {}

    Verdict run()
    {
        // Counterexamples of length 0 and 1.
        const FalsePostReport shallow = check_false_postcondition(sys_, 0, options_.solver);
        if (!shallow.items[0].pass) return unsafe(*shallow.items[0].witness);
        if (!shallow.items[1].pass) return unsafe(*shallow.items[1].witness);

        frames_ = init_frames(sys_);
        for (std::size_t n = 1; n <= static_cast<std::size_t>(options_.k_max) + 1; ++n) {
            while (auto bad = find_bad_cube(frames_, n, sys_, options_.solver)) {
                if (auto trace = block(*bad, n)) return unsafe(*trace);
            }
            propagate(n);
            for (std::size_t i = 0; i < n; ++i)
                if (converged(frames_, i, sys_, options_.solver)) return safe(i);
            frames_.push(property_clauses());
        }
        return Verdict::unknown(options_.k_max, "frames did not converge up to k=" + std::to_string(options_.k_max));
    }

private:
    struct Obligation {
        State state;
        std::size_t level;
        std::optional<std::size_t> next; // obligation of the successor state
    };

    std::set<Clause> property_clauses() const
    {
        const auto clauses = clausal_form(sys_.prop(), sys_.width());
        return {clauses.begin(), clauses.end()};
    }

    std::optional<StateSeq> trace_from(std::size_t id, std::optional<State> first = std::nullopt) const
    {
        std::vector<State> states;
        if (first) states.push_back(*first);
        for (std::optional<std::size_t> cur = id; cur; cur = store_[*cur].next) states.push_back(store_[*cur].state);
        states.push_back(bad_successor_);
        return StateSeq(sys_.width(), std::move(states));
    }

    // Blocks a bad state at level n; a counterexample when the obligation
    // chain reaches the initial states.
    std::optional<StateSeq> block(const BadCube & bad, std::size_t n)
    {
        store_.clear();
        bad_successor_ = bad.successor;
        std::set<std::pair<std::size_t, std::size_t>> queue; // (level, insertion)
        auto enqueue = [&](Obligation o) {
            if (store_.size() >= options_.max_obligations)
                throw Error(ErrorKind::ResourceLimit, "proof obligation budget exhausted");
            store_.push_back(o);
            queue.emplace(o.level, store_.size() - 1);
        };
        State root{0};
        for (const auto & l : bad.cube.lits)
            if (l.positive) root.value |= std::uint64_t{1} << l.bit;
        enqueue({root, n, std::nullopt});

        while (!queue.empty()) {
            const auto [level, id] = *queue.begin();
            const Obligation ob = store_[id];
            if (sys_.is_initial(ob.state)) return trace_from(id);

            const Cube cube = Cube::of_state(ob.state, sys_.width());
            const Formula not_cube = negate(cube).formula();
            const auto body = !TimedFormula::make_and({at_step(frames_.denotation(level - 1, sys_.init()), 0),
                                                       at_step(not_cube, 0), at_step(sys_.trans(), 0),
                                                       at_step(cube.formula(), 1)});
            const QueryOutcome o = validity(body, 1, sys_.width(), options_.solver, "pdr.block");
            if (!o.valid()) {
                const State pred = o.witness->at(0);
                if (level - 1 == 0) return trace_from(id, pred);
                enqueue({pred, level - 1, id});
                continue;
            }
            queue.erase(queue.begin());
            const Clause c = generalize(frames_, level - 1, cube, sys_, options_.solver);
            frames_.refine(level - 1, c);
        }
        return std::nullopt;
    }

    void propagate(std::size_t n)
    {
        for (std::size_t i = 1; i < n; ++i) {
            const auto lower = frames_.clauses(i);
            const auto & upper = frames_.clauses(i + 1);
            for (const auto & c : lower) {
                if (upper.count(c)) continue;
                const auto body = implies(
                    TimedFormula::make_and({at_step(frames_.denotation(i, sys_.init()), 0), at_step(sys_.trans(), 0)}),
                    at_step(c.formula(), 1));
                if (is_valid(body, 1, sys_.width(), options_.solver, "pdr.propagate")) frames_.add_at(i + 1, c);
            }
        }
    }

    Verdict safe(std::size_t k)
    {
        FrameSeq cert;
        for (std::size_t i = 1; i <= k + 1; ++i) cert.push(frames_.clauses(i));
        const TruePostReport report = check_true_postcondition(cert, k, sys_, CheckMethod::Auto, options_.solver);
        if (!report.all_pass()) throw std::logic_error("PDR certificate fails its post-condition");
        Verdict v = Verdict::safe(static_cast<unsigned>(k));
        v.certificate = std::move(cert);
        return v;
    }

    Verdict unsafe(StateSeq trace) const
    {
        if (!oracle::validate_trace(sys_, trace)) throw std::logic_error("PDR produced an invalid counterexample");
        const auto k = static_cast<unsigned>(trace.size() - 1);
        return Verdict::unsafe(k, std::move(trace));
    }

    const TransitionSystem & sys_;
    const PdrOptions & options_;
    FrameSeq frames_;
    std::vector<Obligation> store_;
    State bad_successor_{};
};

} // namespace

Verdict run_pdr(const TransitionSystem & sys, const PdrOptions & options)
{
    try {
        return PdrEngine(sys, options).run();
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::ResourceLimit) throw;
        return Verdict::unknown(0, e.what());
    }
}

} // namespace smckit
