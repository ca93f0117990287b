#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kaczmarz/linalg.hpp"
#include "kaczmarz/signal.hpp"
#include "kaczmarz/solvers.hpp"

namespace kaczmarz {

enum class SolverKind { rk, srk, rk_oracle };

std::string_view to_string(SolverKind kind) noexcept;
/// Accepts "rk", "srk", "rk-oracle"; throws ParameterError otherwise.
SolverKind parse_solver_kind(std::string_view token);

enum class Regime { overdetermined, underdetermined };

std::string_view to_string(Regime regime) noexcept;
Regime parse_regime(std::string_view token);

/// Support floor given either as a count or as a fraction of the true
/// sparsity k (rounded up, at least 1).
struct KhatRule {
  struct Count {
    std::size_t value;
  };
  struct RatioOfK {
    double ratio;
  };
  std::variant<Count, RatioOfK> rule = Count{1};

  std::size_t resolve(std::size_t k, std::size_t n) const;
};

struct ExperimentSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  Regime regime = Regime::overdetermined;
  /// k/n when overdetermined, k/m when underdetermined.
  double sparsity_ratio = 0.1;
  KhatRule khat;
  std::size_t trials = 1;
  std::vector<SolverKind> solvers;
  std::uint64_t seed = 0;
  /// 0 selects the default budget (10n overdetermined, 100m underdetermined).
  std::size_t max_iterations = 0;
  /// 0 selects max_iterations / 100 (at least 1).
  std::size_t trace_stride = 0;
  /// Draw A once and share it across trials instead of a fresh A per trial.
  bool fixed_matrix = false;
  double success_threshold = 1e-4;

  std::size_t sparsity() const;
  std::size_t support_floor() const { return khat.resolve(sparsity(), n); }
  std::size_t iteration_budget() const;
  std::size_t stride() const;

  /// Throws ParameterError on inconsistent settings.
  void validate() const;
};

struct TrialFailure {
  std::size_t trial = 0;
  std::string solver;
  std::string message;
};

struct SolverSummary {
  SolverKind kind = SolverKind::rk;
  std::vector<std::size_t> iterations;
  Vector mean_error, min_error, max_error;
  Vector mean_residual, min_residual, max_residual;
  /// Completed trial indices and their traces, in trial order.
  std::vector<std::size_t> trial_ids;
  std::vector<IterationTrace> traces;
  Vector final_errors;
  std::vector<double> wall_seconds;
  double success_rate = 0.0;

  double mean_final_error() const;
};

struct ExperimentSummary {
  ExperimentSpec spec;
  std::vector<SolverSummary> solvers;
  std::vector<TrialFailure> failures;

  const SolverSummary* find(SolverKind kind) const noexcept;
};

/// Aggregates already-computed traces (trial ids 0..N-1) into a summary.
SolverSummary summarize_traces(SolverKind kind, std::vector<IterationTrace> traces, double success_threshold);

/// One generated problem instance.
struct Problem {
  DenseMatrix a;
  SparseSignal truth;
  Vector b;
};

/// Problem for a trial; trial seed = spec.seed + trial.
Problem make_problem(const ExperimentSpec& spec, std::size_t trial);

/// Runs every selected solver on every trial and aggregates pointwise
/// statistics. `jobs` worker threads (0 = hardware concurrency); the result
/// does not depend on it. `on_trial_done(completed, total)` is invoked from
/// the worker threads under a lock.
ExperimentSummary run_experiment(const ExperimentSpec& spec, unsigned jobs = 1,
                                 const std::function<void(std::size_t, std::size_t)>& on_trial_done = {});

/// Iteration budget for an external l1 solver at matched vector-product
/// cost: floor(srk_iterations / m).
std::size_t matched_work_budget(std::size_t srk_iterations, std::size_t m);

}  // namespace kaczmarz
