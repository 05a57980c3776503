/*
 * Copyright (c) 2026, The smckit authors
 *
 * SPDX-License-Identifier: MIT
 */

#ifndef SMCKIT_REPORT_HPP
#define SMCKIT_REPORT_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smckit/harness.hpp"

// Structured CLI output. Every document is one JSON object carrying
// "schema": "1" and a "kind" tag.

namespace smckit::report {

inline constexpr std::string_view kSchema = "1";

struct CheckReport {
    std::string system;
    std::string engine;
    std::string verdict; // SAFE, UNSAFE, UNKNOWN
    unsigned k = 0;
    std::vector<std::string> trace; // binary states, MSB first
    std::optional<std::string> certificate;
    std::string reason;

    friend bool operator==(const CheckReport &, const CheckReport &) = default;
};

struct CertifyItem {
    char item = 'a';
    bool pass = true;
    std::optional<std::size_t> index;
    std::vector<std::string> witness;

    friend bool operator==(const CertifyItem &, const CertifyItem &) = default;
};

struct CertifyReport {
    std::string system;
    unsigned k = 0;
    std::vector<CertifyItem> items;
    bool exists_form = false;

    friend bool operator==(const CertifyReport &, const CertifyReport &) = default;
};

struct FuzzReport {
    harness::SoundnessReport soundness;
    harness::SspReport ssp;
    bool passed = false;

    friend bool operator==(const FuzzReport &, const FuzzReport &) = default;
};

std::string to_json(const CheckReport & r);
std::string to_json(const CertifyReport & r);
std::string to_json(const FuzzReport & r);

/// Throw std::invalid_argument on a schema or shape mismatch.
CheckReport parse_check(std::string_view json);
CertifyReport parse_certify(std::string_view json);
FuzzReport parse_fuzz(std::string_view json);

std::string text_table(const FuzzReport & r);

} // namespace smckit::report

#endif // SMCKIT_REPORT_HPP
