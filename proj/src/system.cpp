/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include "smckit/system.hpp"

#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include "smckit/error.hpp"

namespace smckit {

namespace {

void check_bits(const Formula & f, unsigned width, const char * what)
{
    f.for_each_atom([&](const VarRef & v) {
        if (v.bit >= width)
            throw Error(ErrorKind::UndeclaredVariable,
                        std::string(what) + " uses b" + std::to_string(v.bit) + " beyond width " + std::to_string(width));
    });
}

} // namespace

TransitionSystem::TransitionSystem(std::string name, unsigned width, Formula init, Formula trans, Formula prop)
    : name_(std::move(name)), width_(width), init_(std::move(init)), trans_(std::move(trans)), prop_(std::move(prop))
{
    if (width_ == 0 || width_ > kMaxWidth)
        throw Error(ErrorKind::WidthMismatch, "width must be in [1, " + std::to_string(kMaxWidth) + "]");
    if (has_next_vars(init_)) throw Error(ErrorKind::NextInInit, "init refers to next-state bits");
    if (has_next_vars(prop_)) throw Error(ErrorKind::NextInInit, "prop refers to next-state bits");
    check_bits(init_, width_, "init");
    check_bits(trans_, width_, "trans");
    check_bits(prop_, width_, "prop");
}

StateSeq::StateSeq(unsigned width, std::vector<State> states, std::size_t origin)
    : width_(width), states_(std::move(states)), origin_(origin)
{
    if (states_.empty()) throw Error(ErrorKind::IndexOutOfWindow, "state sequence must be non-empty");
    if (width_ == 0 || width_ > kMaxWidth) throw Error(ErrorKind::WidthMismatch, "bad sequence width");
    for (State s : states_)
        if (s.value >> width_) throw Error(ErrorKind::BitOutOfRange, "state exceeds sequence width");
}

StateSeq::StateSeq(unsigned width, std::initializer_list<std::uint64_t> values, std::size_t origin)
    : StateSeq(width,
               [&] {
                   std::vector<State> v;
                   for (auto x : values) v.push_back(State{x});
                   return v;
               }(),
               origin)
{
}

State StateSeq::at(std::size_t i) const
{
    if (!covers(i))
        throw Error(ErrorKind::IndexOutOfWindow, "index " + std::to_string(i) + " outside [" + std::to_string(origin_) +
                                                      ", " + std::to_string(end()) + ")");
    return states_[i - origin_];
}

std::vector<std::uint64_t> StateSeq::values() const
{
    std::vector<std::uint64_t> out;
    out.reserve(states_.size());
    for (State s : states_) out.push_back(s.value);
    return out;
}

std::string format_state(State s, unsigned width)
{
    std::string out(width, '0');
    for (unsigned i = 0; i < width; ++i)
        if (s.bit(i)) out[width - 1 - i] = '1';
    return out;
}

// ---------------------------------------------------------------------------
// Path predicates

bool path(const Formula & trans, const StateSeq & ss, std::size_t o, std::size_t len)
{
    ss.at(o);
    ss.at(o + len);
    for (std::size_t j = o; j < o + len; ++j)
        if (!eval(trans, ss.at(j), ss.at(j + 1), ss.width())) return false;
    return true;
}

bool no_loop(const StateSeq & ss, std::size_t o, std::size_t len)
{
    ss.at(o);
    ss.at(o + len);
    for (std::size_t i = o; i <= o + len; ++i)
        for (std::size_t j = i + 1; j <= o + len; ++j)
            if (ss.at(i) == ss.at(j)) return false;
    return true;
}

bool loop_free(const Formula & trans, const StateSeq & ss, std::size_t o, std::size_t len)
{
    return path(trans, ss, o, len) && no_loop(ss, o, len);
}

StateSeq skipn(std::size_t j, const StateSeq & ss)
{
    if (j >= ss.end())
        throw Error(ErrorKind::IndexOutOfWindow, "skipn " + std::to_string(j) + " leaves no state of the window");
    // Indices below j in the result would come from negative source indices.
    const std::size_t first = ss.origin() > j ? ss.origin() : j;
    std::vector<State> states(ss.states().begin() + static_cast<std::ptrdiff_t>(first - ss.origin()),
                              ss.states().end());
    return StateSeq(ss.width(), std::move(states), first - j);
}

bool shorter_ss(std::size_t o, std::size_t k, std::size_t d, const StateSeq & ss, const StateSeq & shortened)
{
    for (std::size_t idx = o; idx <= k; ++idx)
        if (ss.at(idx) != shortened.at(idx)) return false;
    for (std::size_t src = k + d; src < ss.end(); ++src)
        if (ss.at(src) != shortened.at(src - d)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// DSL parser

namespace {

enum class Tok { Var, True, False, Not, And, Or, Implies, Iff, LParen, RParen, End };

struct Token {
    Tok kind;
    std::size_t column;
    unsigned bit = 0;
    bool primed = false;
};

class FormulaParser {
public:
    FormulaParser(std::string_view text, std::size_t line, std::size_t column0, unsigned width, bool allow_next)
        : text_(text), line_(line), column0_(column0), width_(width), allow_next_(allow_next)
    {
        tokenize();
    }

    Formula parse()
    {
        if (tokens_.front().kind == Tok::End) fail(tokens_.front(), "empty formula");
        Formula f = parse_iff();
        if (peek().kind != Tok::End) fail(peek(), "unexpected token");
        return f;
    }

private:
    [[noreturn]] void fail(const Token & t, const std::string & msg, ErrorKind kind = ErrorKind::SyntaxError) const
    {
        throw ParseError(kind, line_, column0_ + t.column, msg);
    }

    void tokenize()
    {
        std::size_t i = 0;
        while (i < text_.size()) {
            const char c = text_[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            Token t{Tok::End, i};
            auto starts = [&](std::string_view s) { return text_.substr(i, s.size()) == s; };
            if (c == '(') { t.kind = Tok::LParen; ++i; }
            else if (c == ')') { t.kind = Tok::RParen; ++i; }
            else if (c == '!') { t.kind = Tok::Not; ++i; }
            else if (c == '&') { t.kind = Tok::And; ++i; }
            else if (c == '|') { t.kind = Tok::Or; ++i; }
            else if (starts("<->")) { t.kind = Tok::Iff; i += 3; }
            else if (starts("->")) { t.kind = Tok::Implies; i += 2; }
            else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t j = i;
                while (j < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_')) ++j;
                const std::string_view word = text_.substr(i, j - i);
                if (word == "true") t.kind = Tok::True;
                else if (word == "false") t.kind = Tok::False;
                else if (word.size() >= 2 && word[0] == 'b' &&
                         word.find_first_not_of("0123456789", 1) == std::string_view::npos) {
                    if (word.size() > 4) fail(t, "bit index too large", ErrorKind::UndeclaredVariable);
                    t.kind = Tok::Var;
                    t.bit = static_cast<unsigned>(std::stoul(std::string(word.substr(1))));
                    if (j < text_.size() && text_[j] == '\'') {
                        t.primed = true;
                        ++j;
                    }
                    if (t.bit >= width_)
                        fail(t, "b" + std::to_string(t.bit) + " is not declared (width " + std::to_string(width_) + ")",
                             ErrorKind::UndeclaredVariable);
                    if (t.primed && !allow_next_) fail(t, "next-state variable in a state formula", ErrorKind::NextInInit);
                } else {
                    fail(t, "unknown identifier '" + std::string(word) + "'", ErrorKind::UndeclaredVariable);
                }
                i = j;
            } else {
                fail(t, std::string("unexpected character '") + c + "'");
            }
            tokens_.push_back(t);
        }
        tokens_.push_back(Token{Tok::End, text_.size()});
    }

    const Token & peek() const { return tokens_[pos_]; }
    const Token & advance() { return tokens_[pos_++]; }

    Formula parse_iff()
    {
        Formula lhs = parse_implies();
        while (peek().kind == Tok::Iff) {
            advance();
            lhs = iff(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_implies()
    {
        Formula lhs = parse_or();
        if (peek().kind == Tok::Implies) {
            advance();
            return implies(lhs, parse_implies());
        }
        return lhs;
    }

    Formula parse_or()
    {
        std::vector<Formula> ops{parse_and()};
        while (peek().kind == Tok::Or) {
            advance();
            ops.push_back(parse_and());
        }
        return Formula::make_or(std::move(ops));
    }

    Formula parse_and()
    {
        std::vector<Formula> ops{parse_unary()};
        while (peek().kind == Tok::And) {
            advance();
            ops.push_back(parse_unary());
        }
        return Formula::make_and(std::move(ops));
    }

    Formula parse_unary()
    {
        const Token & t = advance();
        switch (t.kind) {
        case Tok::Not: return !parse_unary();
        case Tok::True: return Formula::top();
        case Tok::False: return Formula::bottom();
        case Tok::Var: return Formula::var({t.bit, t.primed ? Stage::Next : Stage::Current});
        case Tok::LParen: {
            Formula f = parse_iff();
            if (peek().kind != Tok::RParen) fail(peek(), "expected ')'");
            advance();
            return f;
        }
        default: fail(t, "expected an operand");
        }
    }

    std::string_view text_;
    std::size_t line_;
    std::size_t column0_;
    unsigned width_;
    bool allow_next_;
    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

struct Field {
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0; // 1-based column where `text` starts
};

} // namespace

Formula parse_formula(std::string_view text, unsigned width)
{
    return FormulaParser(text, 1, 1, width, true).parse();
}

TransitionSystem parse_system(std::string_view text)
{
    std::optional<Field> name, width, init, trans, prop;
    std::size_t line_no = 0;
    std::size_t last_line = 1;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto begin = raw.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        last_line = line_no;
        auto kw_end = raw.find_first_of(" \t", begin);
        if (kw_end == std::string::npos) kw_end = raw.size();
        const std::string keyword = raw.substr(begin, kw_end - begin);
        const auto rest_begin = raw.find_first_not_of(" \t", kw_end);
        Field field;
        field.line = line_no;
        field.column = (rest_begin == std::string::npos ? raw.size() : rest_begin) + 1;
        if (rest_begin != std::string::npos) {
            field.text = raw.substr(rest_begin);
            while (!field.text.empty() && (field.text.back() == ' ' || field.text.back() == '\t')) field.text.pop_back();
        }

        std::optional<Field> *slot = nullptr;
        if (keyword == "system") slot = &name;
        else if (keyword == "width") slot = &width;
        else if (keyword == "init") slot = &init;
        else if (keyword == "trans") slot = &trans;
        else if (keyword == "prop") slot = &prop;
        else throw ParseError(ErrorKind::SyntaxError, line_no, begin + 1, "unknown declaration '" + keyword + "'");
        if (*slot) throw ParseError(ErrorKind::SyntaxError, line_no, begin + 1, "duplicate '" + keyword + "'");
        if (field.text.empty())
            throw ParseError(ErrorKind::SyntaxError, line_no, field.column, "'" + keyword + "' needs an argument");
        *slot = std::move(field);
    }

    if (!name && !width && !init && !trans && !prop) throw ParseError(ErrorKind::SyntaxError, 1, 1, "empty document");
    auto require = [&](const std::optional<Field> & f, const char * what) {
        if (!f) throw ParseError(ErrorKind::SyntaxError, last_line, 1, std::string("missing '") + what + "' declaration");
    };
    require(name, "system");
    require(width, "width");
    require(init, "init");
    require(trans, "trans");
    require(prop, "prop");

    for (std::size_t i = 0; i < name->text.size(); ++i) {
        const char c = name->text[i];
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            throw ParseError(ErrorKind::SyntaxError, name->line, name->column + i, "bad system name");
    }

    if (width->text.find_first_not_of("0123456789") != std::string::npos || width->text.size() > 6)
        throw ParseError(ErrorKind::SyntaxError, width->line, width->column, "width must be a decimal integer");
    const unsigned w = static_cast<unsigned>(std::stoul(width->text));
    if (w == 0 || w > kMaxWidth)
        throw ParseError(ErrorKind::WidthMismatch, width->line, width->column,
                         "width " + width->text + " outside [1, " + std::to_string(kMaxWidth) + "]");

    auto formula = [&](const Field & f, bool allow_next) {
        return FormulaParser(f.text, f.line, f.column, w, allow_next).parse();
    };
    return TransitionSystem(name->text, w, formula(*init, false), formula(*trans, true), formula(*prop, false));
}

TransitionSystem load_system(const std::string & path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_system(buf.str());
}

std::string format_system(const TransitionSystem & sys)
{
    std::ostringstream out;
    out << "system " << sys.name() << "\n"
        << "width " << sys.width() << "\n"
        << "init  " << to_string(sys.init()) << "\n"
        << "trans " << to_string(sys.trans()) << "\n"
        << "prop  " << to_string(sys.prop()) << "\n";
    return out.str();
}

} // namespace smckit
