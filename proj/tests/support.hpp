/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_TESTS_SUPPORT_HPP
#define SMCKIT_TESTS_SUPPORT_HPP

#include <string>

#include "smckit/system.hpp"

namespace smckit::test {

inline std::string model_path(const std::string & file) { return std::string(SMCKIT_MODELS_DIR) + "/" + file; }

inline TransitionSystem shift3() { return load_system(model_path("shift3.smc")); }
inline TransitionSystem mutant() { return load_system(model_path("mutant.smc")); }

inline TransitionSystem make_system(unsigned width, const std::string & init, const std::string & trans,
                                    const std::string & prop, const std::string & name = "t")
{
    return parse_system("system " + name + "\nwidth " + std::to_string(width) + "\ninit " + init + "\ntrans " +
                        trans + "\nprop " + prop + "\n");
}

} // namespace smckit::test

#endif // SMCKIT_TESTS_SUPPORT_HPP
