#pragma once

namespace clpqr {

// Command-line entry point. Exit codes: 0 ok, 2 usage, 3 data error,
// 4 numeric failure.
int run_cli(int argc, const char* const* argv);

}  // namespace clpqr
