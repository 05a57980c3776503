/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/encoders.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "smckit/error.hpp"
#include "smckit/oracle.hpp"

namespace smckit {

EncodedFormula EncodedFormula::leaf(ValidityQuery q)
{
    EncodedFormula f;
    f.kind = Kind::Leaf;
    f.query = std::move(q);
    return f;
}

EncodedFormula EncodedFormula::negation(EncodedFormula g)
{
    EncodedFormula f;
    f.kind = Kind::Not;
    f.children.push_back(std::move(g));
    return f;
}

EncodedFormula EncodedFormula::conjunction(std::vector<EncodedFormula> fs)
{
    if (fs.size() == 1) return std::move(fs.front());
    EncodedFormula f;
    f.kind = Kind::And;
    f.children = std::move(fs);
    return f;
}

EncodedFormula EncodedFormula::disjunction(std::vector<EncodedFormula> fs)
{
    if (fs.size() == 1) return std::move(fs.front());
    EncodedFormula f;
    f.kind = Kind::Or;
    f.children = std::move(fs);
    return f;
}

namespace {

void collect_leaves(const EncodedFormula & f, std::vector<const ValidityQuery *> & out)
{
    if (f.kind == EncodedFormula::Kind::Leaf) {
        out.push_back(&f.query);
        return;
    }
    for (const auto & c : f.children) collect_leaves(c, out);
}

std::size_t count_leaves(const EncodedFormula & f)
{
    if (f.kind == EncodedFormula::Kind::Leaf) return 1;
    std::size_t n = 0;
    for (const auto & c : f.children) n += count_leaves(c);
    return n;
}

} // namespace

std::vector<const ValidityQuery *> EncodedFormula::leaves() const
{
    std::vector<const ValidityQuery *> out;
    collect_leaves(*this, out);
    return out;
}

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::Bounded: return "bmc";
    case Method::Forward: return "forward";
    case Method::Backward: return "backward";
    case Method::Sheeran1: return "sheeran1";
    case Method::KInduction: return "kind";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : {Method::Bounded, Method::Forward, Method::Backward, Method::Sheeran1, Method::KInduction})
        if (to_string(m) == name) return m;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

// Conjunction without the `true` left by empty unrollings.
TimedFormula conj(std::vector<TimedFormula> parts)
{
    std::erase_if(parts, [](const TimedFormula & f) { return f.op() == Op::True; });
    return TimedFormula::make_and(std::move(parts));
}

} // namespace

TimedFormula unrolled_path(const TransitionSystem & sys, unsigned o, unsigned len)
{
    std::vector<TimedFormula> steps;
    steps.reserve(len);
    for (unsigned j = o; j < o + len; ++j) steps.push_back(instantiate(sys.trans(), j));
    return TimedFormula::make_and(std::move(steps));
}

TimedFormula states_differ(unsigned width, unsigned i, unsigned j)
{
    std::vector<TimedFormula> bits;
    bits.reserve(width);
    for (unsigned b = 0; b < width; ++b) bits.push_back(!iff(at(b, i), at(b, j)));
    return TimedFormula::make_or(std::move(bits));
}

TimedFormula unrolled_loop_free(const TransitionSystem & sys, unsigned o, unsigned len)
{
    std::vector<TimedFormula> parts{unrolled_path(sys, o, len)};
    for (unsigned i = o; i <= o + len; ++i)
        for (unsigned j = i + 1; j <= o + len; ++j) parts.push_back(states_differ(sys.width(), i, j));
    return conj(std::move(parts));
}

ValidityQuery bounded_query(const TransitionSystem & sys, unsigned i)
{
    auto body = !conj(
        {instantiate(sys.init(), 0), unrolled_path(sys, 0, i), !instantiate(sys.prop(), i)});
    return {i, std::move(body), "bounded.i" + std::to_string(i)};
}

ValidityQuery forward_query(const TransitionSystem & sys, unsigned k)
{
    auto body = !conj({instantiate(sys.init(), 0), unrolled_loop_free(sys, 0, k)});
    return {k, std::move(body), "forward.k" + std::to_string(k)};
}

ValidityQuery backward_query(const TransitionSystem & sys, unsigned k)
{
    auto body = !conj({unrolled_loop_free(sys, 0, k), !instantiate(sys.prop(), k)});
    return {k, std::move(body), "backward.k" + std::to_string(k)};
}

ValidityQuery induction_query(const TransitionSystem & sys, unsigned k)
{
    std::vector<TimedFormula> parts{unrolled_path(sys, 0, k + 1)};
    for (unsigned i = 0; i <= k; ++i) parts.push_back(instantiate(sys.prop(), i));
    parts.push_back(!instantiate(sys.prop(), k + 1));
    return {k + 1, !conj(std::move(parts)), "induction.k" + std::to_string(k)};
}

EncodedFormula encode_bounded(const TransitionSystem & sys, unsigned k)
{
    std::vector<EncodedFormula> conj;
    conj.reserve(k + 1);
    for (unsigned i = 0; i <= k; ++i) conj.push_back(EncodedFormula::leaf(bounded_query(sys, i)));
    return EncodedFormula::conjunction(std::move(conj));
}

EncodedFormula encode_forward(const TransitionSystem & sys, unsigned k)
{
    return EncodedFormula::conjunction({encode_bounded(sys, k), EncodedFormula::leaf(forward_query(sys, k))});
}

EncodedFormula encode_backward(const TransitionSystem & sys, unsigned k)
{
    return EncodedFormula::conjunction({encode_bounded(sys, k), EncodedFormula::leaf(backward_query(sys, k))});
}

EncodedFormula encode_sheeran1(const TransitionSystem & sys, unsigned k)
{
    return EncodedFormula::conjunction(
        {encode_bounded(sys, k), EncodedFormula::disjunction({EncodedFormula::leaf(forward_query(sys, k)),
                                                              EncodedFormula::leaf(backward_query(sys, k))})});
}

EncodedFormula encode_kinduction(const TransitionSystem & sys, unsigned k)
{
    return EncodedFormula::conjunction({encode_bounded(sys, k), EncodedFormula::leaf(induction_query(sys, k))});
}

EncodedFormula encode(Method m, const TransitionSystem & sys, unsigned k)
{
    switch (m) {
    case Method::Bounded: return encode_bounded(sys, k);
    case Method::Forward: return encode_forward(sys, k);
    case Method::Backward: return encode_backward(sys, k);
    case Method::Sheeran1: return encode_sheeran1(sys, k);
    case Method::KInduction: return encode_kinduction(sys, k);
    }
    throw std::invalid_argument("unknown method");
}

// ---------------------------------------------------------------------------

std::string_view to_string(Truth t)
{
    switch (t) {
    case Truth::False: return "false";
    case Truth::True: return "true";
    case Truth::Unknown: return "unknown";
    }
    return "?";
}

LeafChecker make_checker(unsigned width, const SolverConfig & config)
{
    return [width, config](const ValidityQuery & q) { return check_validity(q, width, config); };
}

namespace {

struct LeafResult {
    LeafReport::Status status = LeafReport::Status::Skipped;
    std::optional<StateSeq> witness;
};

LeafResult run_leaf(const ValidityQuery & q, const LeafChecker & checker)
{
    LeafResult r;
    try {
        QueryOutcome o = checker(q);
        r.status = o.valid() ? LeafReport::Status::Valid : LeafReport::Status::Refuted;
        r.witness = std::move(o.witness);
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::ResourceLimit) throw;
        r.status = LeafReport::Status::ResourceLimit;
    }
    return r;
}

class Evaluator {
public:
    Evaluator(std::vector<LeafResult> & results, const std::vector<const ValidityQuery *> & leaves,
              const LeafChecker * checker)
        : results_(results), leaves_(leaves), checker_(checker)
    {
    }

    Truth eval(const EncodedFormula & f)
    {
        switch (f.kind) {
        case EncodedFormula::Kind::Leaf: {
            const std::size_t i = next_++;
            if (checker_) results_[i] = run_leaf(*leaves_[i], *checker_);
            switch (results_[i].status) {
            case LeafReport::Status::Valid: return Truth::True;
            case LeafReport::Status::Refuted: return Truth::False;
            default: return Truth::Unknown;
            }
        }
        case EncodedFormula::Kind::Not: {
            const Truth t = eval(f.children.at(0));
            return t == Truth::Unknown ? t : (t == Truth::True ? Truth::False : Truth::True);
        }
        case EncodedFormula::Kind::And:
        case EncodedFormula::Kind::Or: {
            const Truth absorbing = f.kind == EncodedFormula::Kind::And ? Truth::False : Truth::True;
            const Truth neutral = f.kind == EncodedFormula::Kind::And ? Truth::True : Truth::False;
            Truth acc = neutral;
            for (std::size_t c = 0; c < f.children.size(); ++c) {
                const Truth t = eval(f.children[c]);
                if (t == absorbing) {
                    for (std::size_t rest = c + 1; rest < f.children.size(); ++rest) skip(f.children[rest]);
                    return absorbing;
                }
                if (t == Truth::Unknown) acc = Truth::Unknown;
            }
            return acc;
        }
        }
        return Truth::Unknown;
    }

private:
    void skip(const EncodedFormula & f)
    {
        const std::size_t n = count_leaves(f);
        if (checker_)
            for (std::size_t i = next_; i < next_ + n; ++i) results_[i].status = LeafReport::Status::Skipped;
        next_ += n;
    }

    std::vector<LeafResult> & results_;
    const std::vector<const ValidityQuery *> & leaves_;
    const LeafChecker * checker_;
    std::size_t next_ = 0;
};

} // namespace

Discharge discharge(const EncodedFormula & f, const LeafChecker & checker, unsigned jobs)
{
    const auto leaves = f.leaves();
    std::vector<LeafResult> results(leaves.size());
    Discharge out;

    if (jobs > 1 && leaves.size() > 1) {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (std::size_t i = next++; i < leaves.size(); i = next++) {
                try {
                    results[i] = run_leaf(*leaves[i], checker);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const unsigned n = std::min<unsigned>(jobs, static_cast<unsigned>(leaves.size()));
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto & t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
        out.value = Evaluator(results, leaves, nullptr).eval(f);
    } else {
        out.value = Evaluator(results, leaves, &checker).eval(f);
    }

    for (std::size_t i = 0; i < leaves.size(); ++i) {
        out.leaves.push_back({i, leaves[i]->label, results[i].status});
        if (results[i].status == LeafReport::Status::Refuted && results[i].witness)
            out.witnesses.emplace(i, *results[i].witness);
    }
    return out;
}

// ---------------------------------------------------------------------------

Verdict Verdict::safe(unsigned k)
{
    Verdict v;
    v.outcome = Outcome::Safe;
    v.k = k;
    return v;
}

Verdict Verdict::unsafe(unsigned k, StateSeq trace)
{
    Verdict v;
    v.outcome = Outcome::Unsafe;
    v.k = k;
    v.trace = std::move(trace);
    return v;
}

Verdict Verdict::unknown(unsigned k, std::string reason)
{
    Verdict v;
    v.outcome = Outcome::Unknown;
    v.k = k;
    v.reason = std::move(reason);
    return v;
}

std::string_view to_string(Verdict::Outcome o)
{
    switch (o) {
    case Verdict::Outcome::Safe: return "SAFE";
    case Verdict::Outcome::Unsafe: return "UNSAFE";
    case Verdict::Outcome::Unknown: return "UNKNOWN";
    }
    return "?";
}

namespace {

// Leaf results are reused across iterations: the depth-i bounded conjunct is
// the same query at every k >= i.
class CachingChecker {
public:
    explicit CachingChecker(LeafChecker inner) : inner_(std::move(inner)) {}

    QueryOutcome operator()(const ValidityQuery & q)
    {
        {
            std::lock_guard lock(mutex_);
            if (auto it = cache_.find(q.label); it != cache_.end()) {
                if (!it->second) throw Error(ErrorKind::ResourceLimit, "cached limit for " + q.label);
                return *it->second;
            }
        }
        std::optional<QueryOutcome> result;
        try {
            result = inner_(q);
        } catch (const Error & e) {
            if (e.kind() != ErrorKind::ResourceLimit) throw;
            std::lock_guard lock(mutex_);
            cache_.emplace(q.label, std::nullopt);
            throw;
        }
        std::lock_guard lock(mutex_);
        cache_.emplace(q.label, result);
        return *result;
    }

private:
    LeafChecker inner_;
    std::mutex mutex_;
    std::map<std::string, std::optional<QueryOutcome>> cache_;
};

enum class Refutation { None, Found, Limit };

// Alg1_False restricted to the depth-k conjunct.
Refutation refute_at(const TransitionSystem & sys, unsigned k, CachingChecker & checker, std::optional<StateSeq> & trace)
{
    try {
        QueryOutcome o = checker(bounded_query(sys, k));
        if (o.valid()) return Refutation::None;
        trace = std::move(o.witness);
        return Refutation::Found;
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::ResourceLimit) throw;
        return Refutation::Limit;
    }
}

Verdict confirmed_unsafe(const TransitionSystem & sys, unsigned k, StateSeq trace)
{
    if (!oracle::validate_trace(sys, trace))
        throw std::logic_error("bounded refutation produced an invalid counterexample");
    return Verdict::unsafe(k, std::move(trace));
}

} // namespace

Verdict run_unbounded(const TransitionSystem & sys, Method true_method, const UnboundedOptions & options)
{
    if (true_method == Method::Bounded) return run_bmc(sys, options);
    auto cache = std::make_shared<CachingChecker>(make_checker(sys.width(), options.solver));
    LeafChecker checker = [cache](const ValidityQuery & q) { return (*cache)(q); };

    for (unsigned k = 0; k <= options.k_max; ++k) {
        const Discharge d = discharge(encode(true_method, sys, k), checker, options.jobs);
        if (d.value == Truth::True) return Verdict::safe(k);

        std::optional<StateSeq> trace;
        switch (refute_at(sys, k, *cache, trace)) {
        case Refutation::Found: return confirmed_unsafe(sys, k, std::move(*trace));
        case Refutation::Limit: return Verdict::unknown(k, "resource limit on the bounded check at k=" + std::to_string(k));
        case Refutation::None: break;
        }
    }
    return Verdict::unknown(options.k_max, "no decision up to k=" + std::to_string(options.k_max));
}

Verdict run_bmc(const TransitionSystem & sys, const UnboundedOptions & options)
{
    CachingChecker checker(make_checker(sys.width(), options.solver));
    for (unsigned k = 0; k <= options.k_max; ++k) {
        std::optional<StateSeq> trace;
        switch (refute_at(sys, k, checker, trace)) {
        case Refutation::Found: return confirmed_unsafe(sys, k, std::move(*trace));
        case Refutation::Limit: return Verdict::unknown(k, "resource limit on the bounded check at k=" + std::to_string(k));
        case Refutation::None: break;
        }
    }
    return Verdict::unknown(options.k_max, "no counterexample up to k=" + std::to_string(options.k_max));
}

Verdict check_at(const TransitionSystem & sys, Method true_method, unsigned k, const UnboundedOptions & options)
{
    const LeafChecker checker = make_checker(sys.width(), options.solver);
    if (true_method != Method::Bounded) {
        const Discharge d = discharge(encode(true_method, sys, k), checker, options.jobs);
        if (d.value == Truth::True) return Verdict::safe(k);
    }
    const Discharge bounded = discharge(encode_bounded(sys, k), checker, options.jobs);
    if (bounded.value == Truth::False) {
        // Leaf index equals depth in the bounded conjunction; take the shallowest.
        auto & [depth, trace] = *bounded.witnesses.begin();
        return confirmed_unsafe(sys, static_cast<unsigned>(depth), trace);
    }
    if (bounded.value == Truth::Unknown) return Verdict::unknown(k, "resource limit at k=" + std::to_string(k));
    return Verdict::unknown(k, "no decision at k=" + std::to_string(k));
}

} // namespace smckit
