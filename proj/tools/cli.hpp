#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>

namespace pathqv::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitUnsupported = 3;
inline constexpr int kExitResource = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Exact-identity sweep over random path quadruples drawn from the jump models.
struct IdentitySuite {
  std::size_t cases = 0;
  double max_ibp_residual = 0.0;
  double max_polarization_residual = 0.0;
  std::size_t triangle_violations = 0;
  std::size_t doubleup_violations = 0;
};

IdentitySuite run_identity_suite(std::size_t cases, int level, std::uint64_t seed);

}  // namespace pathqv::cli
