/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/frames.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "smckit/error.hpp"

namespace smckit {

bool normalize(std::vector<BitLit> & lits)
{
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (std::size_t i = 1; i < lits.size(); ++i)
        if (lits[i].bit == lits[i - 1].bit) return false;
    return true;
}

Cube Cube::of_state(State s, unsigned width)
{
    Cube c;
    c.lits.reserve(width);
    for (unsigned b = 0; b < width; ++b) c.lits.push_back({b, s.bit(b)});
    return c;
}

bool Cube::contains(State s) const
{
    return std::all_of(lits.begin(), lits.end(), [&](const BitLit & l) { return s.bit(l.bit) == l.positive; });
}

namespace {

Formula literal(const BitLit & l) { return l.positive ? cur(l.bit) : !cur(l.bit); }

} // namespace

Formula Cube::formula() const
{
    std::vector<Formula> parts;
    for (const auto & l : lits) parts.push_back(literal(l));
    return Formula::make_and(std::move(parts));
}

bool Clause::holds(State s) const
{
    return std::any_of(lits.begin(), lits.end(), [&](const BitLit & l) { return s.bit(l.bit) == l.positive; });
}

Formula Clause::formula() const
{
    std::vector<Formula> parts;
    for (const auto & l : lits) parts.push_back(literal(l));
    return Formula::make_or(std::move(parts));
}

std::string Clause::to_string() const { return smckit::to_string(formula()); }

Clause negate(const Cube & cube)
{
    Clause c;
    for (const auto & l : cube.lits) c.lits.push_back({l.bit, !l.positive});
    return c;
}

Cube negate(const Clause & clause)
{
    Cube c;
    for (const auto & l : clause.lits) c.lits.push_back({l.bit, !l.positive});
    return c;
}

// ---------------------------------------------------------------------------

void FrameSeq::push(std::set<Clause> clauses) { clauses_.push_back(std::move(clauses)); }

const std::set<Clause> & FrameSeq::clauses(std::size_t i) const
{
    if (i == 0 || i > top()) throw std::out_of_range("frame index " + std::to_string(i) + " has no clause set");
    return clauses_[i - 1];
}

void FrameSeq::refine(std::size_t i, const Clause & c)
{
    if (i + 1 > top()) throw std::out_of_range("refine past the top frame");
    for (std::size_t j = 1; j <= i + 1; ++j) clauses_[j - 1].insert(c);
}

void FrameSeq::add_at(std::size_t i, const Clause & c)
{
    if (i == 0 || i > top()) throw std::out_of_range("frame index " + std::to_string(i) + " has no clause set");
    clauses_[i - 1].insert(c);
}

Formula FrameSeq::denotation(std::size_t i, const Formula & init) const
{
    const std::size_t j = std::min(i, top());
    if (j == 0) return init;
    std::vector<Formula> parts;
    for (const auto & c : clauses_[j - 1]) parts.push_back(c.formula());
    return Formula::make_and(std::move(parts));
}

bool FrameSeq::syntactically_monotone() const
{
    for (std::size_t i = 1; i < clauses_.size(); ++i)
        if (!std::includes(clauses_[i - 1].begin(), clauses_[i - 1].end(), clauses_[i].begin(), clauses_[i].end()))
            return false;
    return true;
}

// ---------------------------------------------------------------------------

std::string write_certificate(const FrameSeq & frames)
{
    std::ostringstream out;
    out << "frame 0\n";
    for (std::size_t i = 1; i <= frames.top(); ++i) {
        out << "frame " << i << '\n';
        for (const auto & c : frames.clauses(i)) {
            for (const auto & l : c.lits) out << (l.positive ? "" : "-") << l.bit + 1 << ' ';
            out << "0\n";
        }
    }
    return out.str();
}

FrameSeq parse_certificate(std::string_view text, unsigned width)
{
    FrameSeq frames;
    bool seen_header = false;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    auto fail = [&](const std::string & what) {
        throw ParseError(ErrorKind::CertificateParseError, line_no, 1, what);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream words(line);
        std::string first;
        if (!(words >> first) || first[0] == 'c' || first[0] == '#') continue;

        if (first == "frame") {
            std::size_t index = 0;
            if (!(words >> index)) fail("expected a frame index");
            const std::size_t expected = seen_header ? frames.top() + 1 : 0;
            if (index != expected)
                fail("frame " + std::to_string(index) + " out of order, expected " + std::to_string(expected));
            if (index > 0) frames.push({});
            seen_header = true;
            std::string extra;
            if (words >> extra) fail("trailing text after frame header");
            continue;
        }

        if (!seen_header) fail("clause before the first frame header");
        if (frames.top() == 0) fail("frame 0 denotes the initial states and takes no clauses");

        std::vector<BitLit> lits;
        bool terminated = false;
        std::string tok = first;
        do {
            if (terminated) fail("literal after the terminating 0");
            long value = 0;
            const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
            if (ec != std::errc() || ptr != tok.data() + tok.size()) fail("bad literal '" + tok + "'");
            if (value == 0) {
                terminated = true;
                continue;
            }
            const unsigned long bit = static_cast<unsigned long>(value < 0 ? -value : value) - 1;
            if (bit >= width) fail("literal " + tok + " outside width " + std::to_string(width));
            lits.push_back({static_cast<unsigned>(bit), value > 0});
        } while (words >> tok);
        if (!terminated) fail("clause not terminated by 0");
        if (!normalize(lits)) fail("clause contains a complementary pair");
        frames.add_at(frames.top(), Clause{std::move(lits)});
    }
    return frames;
}

} // namespace smckit
