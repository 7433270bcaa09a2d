#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cvnn::cli {

/// Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 not
/// applicable, 4 I/O error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailure = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNotApplicable = 3;
inline constexpr int kExitIo = 4;

/// Runs one command (`cost`, `sweep`, `verify`, `reproduce`, `asym`) given the
/// argument list without the program name. CVNN_SEED provides the default seed
/// for `verify`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cvnn::cli
