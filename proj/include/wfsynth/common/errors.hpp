// Copyright 2026 The wfsynth Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exception hierarchy shared by every module. Findings that are data (validation
// reports, failing tests, wrong answers) are never thrown.

#pragma once

#include <stdexcept>
#include <string>

namespace wfsynth {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or missing configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input data: datasets, trajectory stores, registries (CLI exit code 3).
class DataError : public Error {
public:
    using Error::Error;
};

/// A model completion did not have the required shape. Carries the raw text
/// so it can be logged verbatim as evidence.
class FormatError : public Error {
public:
    FormatError(const std::string& msg, std::string raw) : Error(msg), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

}  // namespace wfsynth
