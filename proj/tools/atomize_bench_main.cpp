// Copyright 2025 the atomize-bench authors
// SPDX-License-Identifier: Apache-2.0

#include "atomize/cli.hpp"

int main(int argc, char** argv) { return atomize::cli_main(argc, argv); }
