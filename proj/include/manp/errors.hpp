#pragma once

#include <stdexcept>
#include <string>

namespace manp {

/// Base for runtime failures of the numerical scheme. `code` is the stable
/// machine-readable identifier emitted by the CLI error record; `step` is
/// filled in by the driver when the failure occurs inside the time loop.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const { return code_; }
  int step() const { return step_; }
  void set_step(int n) { step_ = n; }

 private:
  std::string code_;
  int step_ = -1;
};

struct NonPositiveSolvent : NumericalError {
  explicit NonPositiveSolvent(const std::string& what)
      : NumericalError("non_positive_solvent", what) {}
};

struct NonPositiveConcentration : NumericalError {
  explicit NonPositiveConcentration(const std::string& what)
      : NumericalError("non_positive_concentration", what) {}
};

struct PositivityLost : NumericalError {
  explicit PositivityLost(const std::string& what)
      : NumericalError("positivity_lost", what) {}
};

struct SolverDiverged : NumericalError {
  explicit SolverDiverged(const std::string& what)
      : NumericalError("solver_diverged", what) {}
};

struct NotConverged : NumericalError {
  explicit NotConverged(const std::string& what)
      : NumericalError("relaxation_not_converged", what) {}
};

struct NonNeutral : NumericalError {
  explicit NonNeutral(const std::string& what)
      : NumericalError("non_neutral", what) {}
};

/// Configuration problems map to exit code 2, numerical failures to 3.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace manp
