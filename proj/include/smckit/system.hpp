/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_SYSTEM_HPP
#define SMCKIT_SYSTEM_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "smckit/formula.hpp"

namespace smckit {

inline constexpr unsigned kMaxWidth = 63;

/// A finite-state transition system (I, T) with safety property P. Widths are
/// bounded so that every state fits a 64-bit word.
class TransitionSystem {
public:
    /// Validates the invariants: 1 <= width <= kMaxWidth, init and prop are
    /// state formulas, all bits are declared.
    TransitionSystem(std::string name, unsigned width, Formula init, Formula trans, Formula prop);

    const std::string & name() const noexcept { return name_; }
    unsigned width() const noexcept { return width_; }
    const Formula & init() const noexcept { return init_; }
    const Formula & trans() const noexcept { return trans_; }
    const Formula & prop() const noexcept { return prop_; }

    std::uint64_t num_states() const noexcept { return std::uint64_t{1} << width_; }

    bool is_initial(State s) const { return eval(init_, s, std::nullopt, width_); }
    bool is_safe(State s) const { return eval(prop_, s, std::nullopt, width_); }
    bool has_transition(State from, State to) const { return eval(trans_, from, to, width_); }

    TransitionSystem with_init(Formula init) const { return {name_, width_, std::move(init), trans_, prop_}; }
    TransitionSystem with_trans(Formula trans) const { return {name_, width_, init_, std::move(trans), prop_}; }
    TransitionSystem with_prop(Formula prop) const { return {name_, width_, init_, trans_, std::move(prop)}; }

private:
    std::string name_;
    unsigned width_;
    Formula init_;
    Formula trans_;
    Formula prop_;
};

/// Finite window of a state sequence. Index `i` of the window addresses
/// `states()[i - origin()]`; any access outside throws IndexOutOfWindow.
class StateSeq {
public:
    StateSeq(unsigned width, std::vector<State> states, std::size_t origin = 0);
    StateSeq(unsigned width, std::initializer_list<std::uint64_t> values, std::size_t origin = 0);

    unsigned width() const noexcept { return width_; }
    std::size_t origin() const noexcept { return origin_; }
    std::size_t size() const noexcept { return states_.size(); }
    /// One past the last covered index.
    std::size_t end() const noexcept { return origin_ + states_.size(); }
    bool covers(std::size_t i) const noexcept { return i >= origin_ && i < end(); }

    State at(std::size_t i) const;
    const std::vector<State> & states() const noexcept { return states_; }
    State back() const { return states_.back(); }

    std::vector<std::uint64_t> values() const;

    friend bool operator==(const StateSeq &, const StateSeq &) = default;

private:
    unsigned width_;
    std::vector<State> states_;
    std::size_t origin_;
};

/// Binary rendering of a state, most significant bit first ("100" for 4).
std::string format_state(State s, unsigned width);

/// Parses the line-oriented `.smc` format. Throws ParseError.
TransitionSystem parse_system(std::string_view text);
TransitionSystem load_system(const std::string & path);
std::string format_system(const TransitionSystem & sys);

/// Parses one formula of the DSL grammar against a declared width.
Formula parse_formula(std::string_view text, unsigned width);

// Path predicates use the (offset, length) convention: they constrain the
// window indices o .. o+len.

/// T holds between every adjacent pair in o .. o+len; len == 0 is true.
bool path(const Formula & trans, const StateSeq & ss, std::size_t o, std::size_t len);

/// The states at o .. o+len are pairwise distinct.
bool no_loop(const StateSeq & ss, std::size_t o, std::size_t len);

/// path and no_loop together.
bool loop_free(const Formula & trans, const StateSeq & ss, std::size_t o, std::size_t len);

/// Suffix shift: index m of the result is index m+j of `ss`.
StateSeq skipn(std::size_t j, const StateSeq & ss);

/// `shortened` is `ss` with the fragment after index k removed so that
/// ss[k+d+i] lines up with shortened[k+i]. Compares o..k on the left and every
/// tail index of `ss` from k+d on the right.
bool shorter_ss(std::size_t o, std::size_t k, std::size_t d, const StateSeq & ss, const StateSeq & shortened);

} // namespace smckit

#endif // SMCKIT_SYSTEM_HPP
