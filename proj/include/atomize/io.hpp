// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace atomize {

std::string read_file(const std::filesystem::path& path);

/// Write via a temp file in the same directory, then rename over the target.
/// Readers never observe a half-written file; concurrent writers of identical
/// content are benign.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Non-empty lines of a text file, \r\n tolerated.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace atomize
