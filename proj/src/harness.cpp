/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "smckit/error.hpp"
#include "smckit/oracle.hpp"
#include "smckit/pdr.hpp"

namespace smckit::harness {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint64_t stream)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

std::uint64_t pick(std::mt19937_64 & rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

Formula literal(std::mt19937_64 & rng, unsigned width)
{
    const Formula v = cur(static_cast<unsigned>(pick(rng, width)));
    return pick(rng, 2) ? v : !v;
}

Formula cube(std::mt19937_64 & rng, unsigned width, unsigned size)
{
    std::vector<unsigned> bits(width);
    for (unsigned b = 0; b < width; ++b) bits[b] = b;
    std::vector<Formula> lits;
    for (unsigned n = 0; n < size && !bits.empty(); ++n) {
        const auto at = pick(rng, bits.size());
        const Formula v = cur(bits[at]);
        lits.push_back(pick(rng, 2) ? v : !v);
        bits.erase(bits.begin() + static_cast<std::ptrdiff_t>(at));
    }
    return Formula::make_and(std::move(lits));
}

} // namespace

Formula gen_formula(std::mt19937_64 & rng, unsigned width, unsigned depth, bool with_next)
{
    if (depth == 0 || pick(rng, 3) == 0) {
        if (pick(rng, 16) == 0) return Formula::constant(pick(rng, 2) == 1);
        const auto bit = static_cast<unsigned>(pick(rng, width));
        return with_next && pick(rng, 2) ? nxt(bit) : cur(bit);
    }
    switch (pick(rng, 5)) {
    case 0: return !gen_formula(rng, width, depth - 1, with_next);
    case 1:
    case 2: {
        std::vector<Formula> kids;
        const auto n = 2 + pick(rng, 2);
        for (std::uint64_t i = 0; i < n; ++i) kids.push_back(gen_formula(rng, width, depth - 1, with_next));
        return pick(rng, 2) ? Formula::make_and(std::move(kids)) : Formula::make_or(std::move(kids));
    }
    case 3:
        return implies(gen_formula(rng, width, depth - 1, with_next), gen_formula(rng, width, depth - 1, with_next));
    default:
        return iff(gen_formula(rng, width, depth - 1, with_next), gen_formula(rng, width, depth - 1, with_next));
    }
}

TransitionSystem gen_system(const CorpusSpec & spec, std::size_t index)
{
    if (spec.min_width < 1 || spec.max_width < spec.min_width || spec.max_width > oracle::kLoopFreeWidthCap)
        throw std::invalid_argument("corpus width range outside the oracle caps");
    auto rng = seeded(spec.seed, index);
    const unsigned depth = std::min(spec.max_depth, 6U);
    const auto width = static_cast<unsigned>(spec.min_width + pick(rng, spec.max_width - spec.min_width + 1));

    Formula init;
    switch (pick(rng, 4)) {
    case 0: init = cube(rng, width, width); break;
    case 1: init = literal(rng, width); break;
    case 2: init = gen_formula(rng, width, 2, false); break;
    default: init = cube(rng, width, 1 + static_cast<unsigned>(pick(rng, width))); break;
    }

    std::vector<Formula> trans;
    for (unsigned b = 0; b < width; ++b) {
        if (pick(rng, 100) < spec.functional_percent)
            trans.push_back(iff(nxt(b), gen_formula(rng, width, depth > 0 ? depth - 1 : 0, false)));
        else if (pick(rng, 2))
            trans.push_back(gen_formula(rng, width, 2, true));
    }
    if (pick(rng, 4) == 0) trans.push_back(gen_formula(rng, width, 2, true));

    std::vector<Formula> clauses;
    const auto n_clauses = 1 + pick(rng, std::max(1U, spec.prop_clauses));
    for (std::uint64_t c = 0; c < n_clauses; ++c) {
        std::vector<Formula> lits;
        const auto n_lits = 1 + pick(rng, std::max(1U, spec.clause_literals));
        for (std::uint64_t l = 0; l < n_lits; ++l) lits.push_back(literal(rng, width));
        clauses.push_back(Formula::make_or(std::move(lits)));
    }

    return TransitionSystem("gen" + std::to_string(spec.seed) + "_" + std::to_string(index), width, std::move(init),
                            Formula::make_and(std::move(trans)), Formula::make_and(std::move(clauses)));
}

// ---------------------------------------------------------------------------

std::string_view to_string(Engine e)
{
    switch (e) {
    case Engine::Forward: return "forward";
    case Engine::Backward: return "backward";
    case Engine::Sheeran1: return "sheeran1";
    case Engine::KInduction: return "kind";
    case Engine::Pdr: return "pdr";
    case Engine::Bmc: return "bmc";
    case Engine::Liar: return "liar";
    }
    return "?";
}

std::vector<Engine> default_engines()
{
    return {Engine::Forward, Engine::Backward, Engine::Sheeran1, Engine::KInduction, Engine::Pdr, Engine::Bmc};
}

Verdict run_engine(Engine e, const TransitionSystem & sys, const DiffOptions & options)
{
    SolverConfig solver;
    solver.options.conflict_budget = options.conflict_budget;
    UnboundedOptions lasso{options.lasso_k_max, solver, 1};
    switch (e) {
    case Engine::Forward: return run_unbounded(sys, Method::Forward, lasso);
    case Engine::Backward: return run_unbounded(sys, Method::Backward, lasso);
    case Engine::Sheeran1: return run_unbounded(sys, Method::Sheeran1, lasso);
    case Engine::KInduction: return run_unbounded(sys, Method::KInduction, lasso);
    case Engine::Bmc: return run_bmc(sys, UnboundedOptions{options.bmc_k_max, solver, 1});
    case Engine::Pdr: {
        PdrOptions p;
        p.k_max = options.pdr_k_max;
        p.solver = solver;
        return run_pdr(sys, p);
    }
    case Engine::Liar: return Verdict::safe(0);
    }
    throw std::invalid_argument("unknown engine");
}

namespace {

struct SystemResult {
    bool oracle_safe = true;
    bool loopfree_mismatch = false;
    std::vector<Verdict::Outcome> outcomes;
    std::size_t validated = 0;
    std::size_t certificates = 0;
    std::vector<Violation> violations;
};

SystemResult check_system(const CorpusSpec & spec, std::size_t index, const std::vector<Engine> & engines,
                          const DiffOptions & options)
{
    SystemResult r;
    const TransitionSystem sys = gen_system(spec, index);
    const oracle::ReachReport truth = oracle::reach(sys);
    r.oracle_safe = truth.safe;
    auto violate = [&](std::string_view engine, std::string detail) {
        r.violations.push_back({index, std::string(engine), std::move(detail)});
    };

    try {
        if (oracle::loopfree_safety(sys) != truth.safe) {
            r.loopfree_mismatch = true;
            violate("oracle", "loop-free safety disagrees with reachability");
        }
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::ResourceLimit) throw;
        r.loopfree_mismatch = true;
        violate("oracle", "loop-free path enumeration exhausted its budget");
    }

    for (Engine e : engines) {
        Verdict v;
        try {
            v = run_engine(e, sys, options);
        } catch (const std::logic_error & ex) {
            // Internal soundness assertions surface here.
            r.outcomes.push_back(Verdict::Outcome::Unknown);
            violate(to_string(e), ex.what());
            continue;
        }
        r.outcomes.push_back(v.outcome);
        switch (v.outcome) {
        case Verdict::Outcome::Safe:
            if (!truth.safe) violate(to_string(e), "Safe(k=" + std::to_string(v.k) + ") but the oracle finds a counterexample");
            if (e == Engine::Pdr) {
                ++r.certificates;
                const auto report = check_true_postcondition(*v.certificate, v.k, sys, CheckMethod::Enumerate);
                for (const auto & item : report.items)
                    if (!item.pass) violate(to_string(e), std::string("certificate fails item (") + item.item + ")");
            }
            break;
        case Verdict::Outcome::Unsafe:
            if (truth.safe) violate(to_string(e), "Unsafe but the oracle proves safety");
            if (!oracle::validate_trace(sys, *v.trace))
                violate(to_string(e), "Unsafe trace rejected by validate_trace");
            else
                ++r.validated;
            if (e == Engine::Bmc && truth.shortest_cex && v.trace->size() != truth.shortest_cex->size())
                violate(to_string(e), "counterexample length " + std::to_string(v.trace->size() - 1) +
                                          " differs from the BFS length " +
                                          std::to_string(truth.shortest_cex->size() - 1));
            break;
        case Verdict::Outcome::Unknown: break;
        }
    }
    return r;
}

} // namespace

SoundnessReport differential_soundness(const CorpusSpec & spec, const DiffOptions & options)
{
    std::vector<Engine> engines = options.engines;
    if (options.inject_liar) engines.push_back(Engine::Liar);

    std::vector<SystemResult> results(spec.count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < spec.count; i = next++) {
            try {
                results[i] = check_system(spec, i, engines, options);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const unsigned jobs = std::max(1U, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto & t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    SoundnessReport report;
    report.seed = spec.seed;
    report.systems = spec.count;
    for (Engine e : engines) report.engines.push_back({std::string(to_string(e))});
    for (const auto & r : results) {
        (r.oracle_safe ? report.oracle_safe : report.oracle_unsafe) += 1;
        report.loopfree_mismatches += r.loopfree_mismatch ? 1 : 0;
        report.unsafe_traces_validated += r.validated;
        report.certificates_checked += r.certificates;
        for (std::size_t e = 0; e < r.outcomes.size(); ++e) {
            auto & stats = report.engines[e];
            switch (r.outcomes[e]) {
            case Verdict::Outcome::Safe: ++stats.safe; break;
            case Verdict::Outcome::Unsafe: ++stats.unsafe; break;
            case Verdict::Outcome::Unknown: ++stats.unknown; break;
            }
        }
        report.violations.insert(report.violations.end(), r.violations.begin(), r.violations.end());
    }
    return report;
}

// ---------------------------------------------------------------------------

std::size_t SspReport::failures() const
{
    std::size_t n = 0;
    for (const auto & l : lemmas) n += l.failures;
    return n;
}

namespace {

struct Instance {
    unsigned width;
    TransitionSystem sys; // only trans matters
    StateSeq ss;
};

// Random walk along T with occasional jumps and revisits, so that both paths
// and repeats show up often.
Instance random_instance(std::mt19937_64 & rng, std::size_t min_len)
{
    const auto width = static_cast<unsigned>(1 + pick(rng, 3));
    TransitionSystem sys("ssp", width, Formula::top(), gen_formula(rng, width, 3, true), Formula::top());
    const std::size_t len = min_len + pick(rng, 8);
    std::vector<State> states{State{pick(rng, sys.num_states())}};
    while (states.size() < len) {
        const auto roll = pick(rng, 100);
        std::vector<State> succ = oracle::successors(sys, states.back());
        if (roll < 15)
            states.push_back(states[pick(rng, states.size())]);
        else if (roll < 85 && !succ.empty())
            states.push_back(succ[pick(rng, succ.size())]);
        else
            states.push_back(State{pick(rng, sys.num_states())});
    }
    return {width, sys, StateSeq(width, std::move(states))};
}

class Tally {
public:
    explicit Tally(std::string name) { stats_.lemma = std::move(name); }

    void implication(bool premise, bool conclusion)
    {
        ++stats_.trials;
        if (!premise)
            ++stats_.vacuous;
        else if (!conclusion)
            ++stats_.failures;
    }

    void equivalence(bool lhs, bool rhs)
    {
        ++stats_.trials;
        if (lhs != rhs) ++stats_.failures;
        if (!lhs && !rhs) ++stats_.vacuous;
    }

    LemmaStats take() { return std::move(stats_); }

private:
    LemmaStats stats_;
};

} // namespace

SspReport ssp_suite(std::uint64_t seed, std::size_t trials, std::size_t converse_trials)
{
    SspReport report;
    report.seed = seed;

    {
        auto rng = seeded(seed, 1);
        Tally t("ssp1");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 1);
            const Formula p = gen_formula(rng, in.width, 3, false);
            const std::size_t i = pick(rng, in.ss.size());
            const std::size_t j = pick(rng, i + 1);
            const bool premise = eval(p, in.ss.at(i), std::nullopt, in.width);
            t.implication(premise, eval(p, skipn(i - j, in.ss).at(j), std::nullopt, in.width));
        }
        report.lemmas.push_back(t.take());
    }
    {
        auto rng = seeded(seed, 2);
        Tally t("ssp2");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 1);
            const std::size_t j = pick(rng, in.ss.size());
            const std::size_t k = pick(rng, in.ss.size() - j);
            t.implication(path(in.sys.trans(), in.ss, j, k), path(in.sys.trans(), skipn(j, in.ss), 0, k));
        }
        report.lemmas.push_back(t.take());
    }
    {
        auto rng = seeded(seed, 3);
        Tally t("ssp3");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 1);
            const std::size_t j = pick(rng, in.ss.size());
            const std::size_t k = pick(rng, in.ss.size() - j);
            t.implication(no_loop(in.ss, j, k), no_loop(skipn(j, in.ss), 0, k));
        }
        report.lemmas.push_back(t.take());
    }
    {
        auto rng = seeded(seed, 4);
        Tally t("ssp4");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 1);
            const std::size_t j = pick(rng, in.ss.size());
            const std::size_t k = pick(rng, in.ss.size() - j);
            const auto & tr = in.sys.trans();
            t.equivalence(path(tr, in.ss, 0, j + k), path(tr, in.ss, 0, j) && path(tr, in.ss, j, k));
        }
        report.lemmas.push_back(t.take());
    }
    {
        auto rng = seeded(seed, 5);
        Tally t("ssp5");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 1);
            const std::size_t j = pick(rng, in.ss.size());
            const std::size_t k = pick(rng, in.ss.size() - j);
            const auto & tr = in.sys.trans();
            t.implication(loop_free(tr, in.ss, 0, j + k), loop_free(tr, in.ss, 0, j) && loop_free(tr, in.ss, j, k));
        }
        report.lemmas.push_back(t.take());
    }
    {
        auto rng = seeded(seed, 6);
        Tally t("ssp6");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 2);
            const std::size_t i = pick(rng, in.ss.size() - 1);
            const std::size_t j = pick(rng, in.ss.size() - i - 1);
            const auto & tr = in.sys.trans();
            const bool step = eval(tr, in.ss.at(i), in.ss.at(i + 1), in.width);
            t.equivalence(step && path(tr, in.ss, i + 1, j), path(tr, in.ss, i, j + 1));
        }
        report.lemmas.push_back(t.take());
    }
    {
        // A repeat s_m = s_n is cut out: s' = s_[0..m] ++ s_[(n+1)..i].
        auto rng = seeded(seed, 7);
        Tally t("deletion");
        for (std::size_t n = 0; n < trials; ++n) {
            Instance in = random_instance(rng, 2);
            std::vector<State> s = in.ss.states();
            const std::size_t i = s.size() - 1;
            const std::size_t hi = 1 + pick(rng, i);
            const std::size_t lo = pick(rng, hi);
            s[hi] = s[lo];
            const StateSeq looped(in.width, s);
            std::vector<State> cut(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(lo + 1));
            cut.insert(cut.end(), s.begin() + static_cast<std::ptrdiff_t>(hi + 1), s.end());
            const StateSeq shortened(in.width, std::move(cut));
            const std::size_t k = lo;
            const std::size_t d = hi - lo;
            t.implication(true, k + d <= i && d > 0 && shorter_ss(0, k, d, looped, shortened) &&
                                    looped.at(i) == shortened.at(i - d));
        }
        report.lemmas.push_back(t.take());
    }

    auto rng = seeded(seed, 8);
    for (std::size_t n = 0; n < converse_trials && !report.converse; ++n) {
        ++report.converse_trials;
        Instance in = random_instance(rng, 3);
        const std::size_t j = pick(rng, in.ss.size());
        const std::size_t k = pick(rng, in.ss.size() - j);
        const auto & tr = in.sys.trans();
        if (loop_free(tr, in.ss, 0, j) && loop_free(tr, in.ss, j, k) && !loop_free(tr, in.ss, 0, j + k))
            report.converse = ConverseWitness{to_string(tr), in.width, in.ss.values(), j, k, n + 1};
    }
    return report;
}

} // namespace smckit::harness
