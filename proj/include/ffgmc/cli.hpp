/**
 * Copyright ffgmc authors
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ffgmc::cli {

  // Exit codes shared by every subcommand.
  inline constexpr int kOk = 0;            // holds / found / unsat
  inline constexpr int kViolated = 1;      // counterexample / not found / sat
  inline constexpr int kInputError = 2;
  inline constexpr int kInconclusive = 3;  // budget, unknown, no solver

  /// Solver command template used by `solve`: $FFGMC_SOLVER if set,
  /// otherwise the bundled cvc5 driver.
  std::string default_solver_command();

  /// Runs one command line (without the program name). Reports go to
  /// `out` unless --out names a file; diagnostics go to `err`.
  int run(const std::vector<std::string> &args,
          std::ostream &out,
          std::ostream &err);

}  // namespace ffgmc::cli
