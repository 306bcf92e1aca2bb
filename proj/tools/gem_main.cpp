// SPDX-License-Identifier: Apache-2.0
#include "gem/cli.hpp"

int main(int argc, char** argv) { return gem::run_cli(argc, argv); }
