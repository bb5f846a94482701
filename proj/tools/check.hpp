#pragma once

namespace advlab::tool {

/// Cross-module invariant suite; prints one pass/fail line per invariant.
/// Returns the number of failures.
int run_check(int threads);

}  // namespace advlab::tool
