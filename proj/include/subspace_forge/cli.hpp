#pragma once

// Command-line front end: spectrum, generate, certify, compare, wild.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sforge::cli {

enum ExitCode : int {
  kPass = 0,
  kCheckFailure = 1,
  kInputError = 2,
  kDomainError = 3,
};

inline constexpr const char* kSeedEnv = "SUBSPACE_FORGE_SEED";

/// Explicit flag first, then the environment value, then the library default.
/// Throws InputError when the environment value is not an unsigned integer.
std::uint64_t resolve_seed(std::optional<std::uint64_t> flag, const char* env_value);

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sforge::cli
