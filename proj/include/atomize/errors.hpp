// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace atomize {

/// Bad domain input: empty word, out-of-alphabet character, multi-character target.
struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed text that should have followed a known format (spaced sequences,
/// JSONL lines, config files).
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Unknown strategy/task/behavior names, unusable run configuration.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Caller sequenced a multi-stage pipeline incorrectly (e.g. stage 2 without
/// the stage 1 output).
struct pipeline_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Records that do not join to dataset instances. Carries the offending ids.
struct join_error : std::runtime_error {
    join_error(const std::string& what, std::vector<std::string> ids)
        : std::runtime_error(what), offending_ids(std::move(ids)) {}
    std::vector<std::string> offending_ids;
};

}  // namespace atomize
