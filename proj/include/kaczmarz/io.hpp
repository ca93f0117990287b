#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kaczmarz/experiment.hpp"
#include "kaczmarz/linalg.hpp"
#include "kaczmarz/signal.hpp"

namespace kaczmarz::io {

// ---- MatrixMarket ---------------------------------------------------------
//
// Only `matrix {array|coordinate} real general` is accepted. Array bodies are
// column-major; coordinate indices are 1-based and unlisted entries are zero.

DenseMatrix read_matrix_market(const std::filesystem::path& path);
DenseMatrix parse_matrix_market(std::istream& in, const std::string& source = "<stream>");

/// Array format, column-major, 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a);
void write_matrix_market(std::ostream& out, const DenseMatrix& a);

/// A vector is an m x 1 matrix; reading accepts either m x 1 or 1 x m.
Vector read_vector(const std::filesystem::path& path);
void write_vector(const std::filesystem::path& path, std::span<const double> v);

// ---- trace CSV ------------------------------------------------------------

inline constexpr const char* kTraceHeader = "solver,trial,iteration,rel_error,rel_residual";

/// One row of the trace CSV. `trial` is a trial index or one of
/// "mean", "min", "max" for aggregate series.
struct TraceRecord {
  std::string solver;
  std::string trial;
  std::size_t iteration = 0;
  double rel_error = 0.0;
  double rel_residual = 0.0;
};

/// Per-trial rows for every solver (trial order), each followed by the
/// solver's mean/min/max aggregate series. `only` restricts to one solver.
void write_trace_csv(const ExperimentSummary& summary, const std::filesystem::path& path,
                     std::optional<SolverKind> only = std::nullopt);
void write_trace_csv(const ExperimentSummary& summary, std::ostream& out,
                     std::optional<SolverKind> only = std::nullopt);

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path);
std::vector<TraceRecord> parse_trace_csv(std::istream& in, const std::string& source = "<stream>");
void write_trace_records(std::ostream& out, const std::vector<TraceRecord>& records);

/// Shortest-safe real rendering used by every writer: "%.17g".
std::string format_real(double v);

// ---- experiment config / summary -----------------------------------------

/// Strict flat JSON object; see README for the schema. Unknown or missing
/// keys and constraint violations raise ConfigError naming the key.
ExperimentSpec read_experiment_config(const std::filesystem::path& path);
ExperimentSpec parse_experiment_config(const std::string& text);

/// Deterministic JSON summary (no timing data) of a finished experiment.
std::string summary_json(const ExperimentSummary& summary);
/// Wall-clock times per solver and trial.
std::string timing_json(const ExperimentSummary& summary);

}  // namespace kaczmarz::io
