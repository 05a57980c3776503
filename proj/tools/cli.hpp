/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_CLI_HPP
#define SMCKIT_CLI_HPP

#include <iosfwd>

namespace smckit::cli {

// Exit codes.
inline constexpr int kSafe = 0;
inline constexpr int kUnsafe = 1;
inline constexpr int kUnknown = 2;
inline constexpr int kUsage = 64;
inline constexpr int kParse = 65;
inline constexpr int kInternal = 70;

/// Whole command line, with argv[0] the program name.
int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err);

} // namespace smckit::cli

#endif // SMCKIT_CLI_HPP
