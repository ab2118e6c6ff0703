// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace atomize {

/// Entry point behind the atomize-bench binary. Returns the process exit
/// code: 0 success, 2 configuration/validation problems, 3 data-join
/// problems, 1 anything unexpected.
int cli_main(int argc, const char* const* argv);

}  // namespace atomize
