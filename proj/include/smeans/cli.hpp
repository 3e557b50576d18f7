#pragma once

namespace smeans {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitMonotoneViolation = 3;

/// Subcommands: converge, converge-dist, equivalence, conditions, norm, apply.
/// Returns 0 on success, 2 on config or usage errors, 3 when a run whose
/// hypotheses all pass has errors that do not decrease to the floor.
int cli_main(int argc, const char* const* argv);

}  // namespace smeans
