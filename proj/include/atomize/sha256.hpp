// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace atomize {

/// SHA-256 digest of the input, as 64 lowercase hex characters.
std::string sha256_hex(std::string_view data);

}  // namespace atomize
