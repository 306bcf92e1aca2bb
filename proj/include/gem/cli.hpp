// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace gem {

/// Command-line entry point. Exit codes: 0 success, 2 usage/config error,
/// 3 numerical failure.
int run_cli(int argc, const char* const* argv);

} // namespace gem
