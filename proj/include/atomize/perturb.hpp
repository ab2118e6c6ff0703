// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0
//
// Orthographic perturbation: insert single spaces into a fraction of a word's
// adjacent character gaps. Degree 100 is the fully atomized form consumed by
// the first pipeline stage.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "atomize/core_ops.hpp"

namespace atomize {

struct PerturbSpec {
    int degree_percent = 0;  // k in [0, 100]
    std::uint64_t seed = 0;  // drives the gap selection
};

/// Number of gaps that receive a space: floor((length - 1) * degree / 100).
std::size_t separator_count(std::size_t length, int degree_percent);

/// Spaces inserted into separator_count() distinct gaps, chosen uniformly
/// without replacement from a generator seeded with spec.seed. Identical
/// (word, spec) pairs produce identical output on every platform.
std::string perturb_word(const Word& word, const PerturbSpec& spec);

/// Single space between every adjacent pair; equals perturb_word at degree 100.
std::string atomize(const Word& word);
std::string atomize(std::string_view text);

/// Inverse of the spaced forms: removes the separators. Rejects anything that
/// is not letters separated by single spaces (no leading/trailing/double
/// spaces) with a parse_error.
std::string deatomize(std::string_view spaced);

}  // namespace atomize
