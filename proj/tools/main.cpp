/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#include <iostream>

#include "cli.hpp"

int main(int argc, char ** argv) { return smckit::cli::run_cli(argc, argv, std::cout, std::cerr); }
