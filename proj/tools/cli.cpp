#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/experiment.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/signal.hpp"
#include "kaczmarz/solvers.hpp"
#include "kaczmarz/svd.hpp"

namespace kaczmarz::cli {

namespace {

namespace fs = std::filesystem;

// Thrown for argument problems that CLI11 cannot express declaratively.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolveOptions {
  std::string matrix, rhs, algorithm, trace_out, solution_out;
  std::size_t khat = 0;
  std::size_t max_iters = 1000;
  std::size_t trace_stride = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
};

struct GenerateOptions {
  std::size_t m = 0, n = 0, k = 0;
  std::uint64_t seed = 0;
  std::string matrix_out, rhs_out, signal_out;
};

struct ReproduceOptions {
  std::string config, out_dir;
  bool fixed_matrix = false;
  unsigned jobs = 0;
};

struct DiagnoseOptions {
  std::string matrix, columns;
};

std::string join_path(const fs::path& dir, const std::string& name) { return (dir / name).string(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw WriteError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw WriteError("write to '" + path.string() + "' failed");
}

int cmd_solve(const SolveOptions& o, std::ostream& out, std::ostream& err) {
  if (o.algorithm == "srk" && o.khat == 0) throw UsageError("--khat is required when --algorithm srk");

  const DenseMatrix a = io::read_matrix_market(o.matrix);
  const Vector b = io::read_vector(o.rhs);

  SolverConfig cfg;
  cfg.max_iterations = o.max_iters;
  cfg.support_floor = o.khat;
  cfg.seed = o.seed;
  cfg.residual_tolerance = o.tol;
  cfg.trace_stride = o.trace_stride > 0 ? o.trace_stride : std::max<std::size_t>(1, o.max_iters / 100);
  cfg.progress = [&err](std::size_t j, std::size_t total) {
    err << "progress: iteration " << j << " / " << total << '\n';
  };

  err << "kaczmarz solve: algorithm=" << o.algorithm << " seed=" << o.seed << " khat=" << o.khat
      << " max_iters=" << o.max_iters << " tol=" << io::format_real(o.tol) << " trace_stride=" << cfg.trace_stride
      << " matrix=" << o.matrix << " (" << a.rows() << "x" << a.cols() << ") rhs=" << o.rhs << '\n';

  const SolverKind kind = o.algorithm == "srk" ? SolverKind::srk : SolverKind::rk;
  IterationTrace trace = kind == SolverKind::srk ? solve_srk(a, b, cfg) : solve_rk(a, b, cfg);
  const double residual = relative_residual(a, trace.solution, b);

  if (!o.solution_out.empty()) io::write_vector(o.solution_out, trace.solution);
  if (!o.trace_out.empty()) {
    ExperimentSummary summary;
    summary.solvers.push_back(summarize_traces(kind, {trace}, 0.0));
    io::write_trace_csv(summary, fs::path(o.trace_out));
  }

  out << "iterations " << trace.iterations_used << '\n';
  out << "final_relative_residual " << io::format_real(residual) << '\n';
  return kExitOk;
}

int cmd_generate(const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  if (o.m < 1 || o.n < 1) throw UsageError("--m and --n must be >= 1");
  if (o.k < 1 || o.k > o.n) throw UsageError("--k must lie in [1, n]");

  err << "kaczmarz generate: m=" << o.m << " n=" << o.n << " k=" << o.k << " seed=" << o.seed << '\n';

  // same stream layout as trial 0 of an experiment with this seed
  Rng rng(o.seed, kProblemStream);
  const DenseMatrix a = gaussian_matrix(o.m, o.n, rng);
  const SparseSignal x = gen_sparse_signal(o.n, o.k, rng);
  const Vector b = a.multiply(x.dense());

  io::write_matrix_market(o.matrix_out, a);
  io::write_vector(o.rhs_out, b);
  io::write_vector(o.signal_out, x.dense());
  out << "wrote " << o.matrix_out << ' ' << o.rhs_out << ' ' << o.signal_out << '\n';
  return kExitOk;
}

unsigned resolve_jobs(unsigned flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("KACZMARZ_JOBS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("KACZMARZ_JOBS must be a positive integer, got '") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_reproduce(const ReproduceOptions& o, std::ostream& out, std::ostream& err) {
  const unsigned jobs = resolve_jobs(o.jobs);
  ExperimentSpec spec;
  try {
    spec = io::read_experiment_config(o.config);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (o.fixed_matrix) spec.fixed_matrix = true;

  err << "kaczmarz reproduce: config=" << o.config << " m=" << spec.m << " n=" << spec.n
      << " regime=" << to_string(spec.regime) << " sparsity_ratio=" << io::format_real(spec.sparsity_ratio)
      << " k=" << spec.sparsity() << " khat=" << spec.support_floor() << " trials=" << spec.trials
      << " seed=" << spec.seed << " max_iterations=" << spec.iteration_budget()
      << " trace_stride=" << spec.stride() << " fixed_matrix=" << (spec.fixed_matrix ? "true" : "false")
      << " jobs=" << jobs << '\n';

  const std::size_t report_every = std::max<std::size_t>(1, spec.trials / 10);
  const ExperimentSummary summary = run_experiment(spec, jobs, [&err, report_every](std::size_t done, std::size_t total) {
    if (done % report_every == 0 || done == total) err << "progress: trial " << done << " / " << total << '\n';
  });

  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  for (const auto& s : summary.solvers) {
    io::write_trace_csv(summary, fs::path(join_path(dir, std::string(to_string(s.kind)) + ".csv")), s.kind);
  }
  write_text(dir / "summary.json", io::summary_json(summary));
  write_text(dir / "timing.json", io::timing_json(summary));

  for (const auto& s : summary.solvers) {
    out << to_string(s.kind) << " success_rate " << io::format_real(s.success_rate) << " mean_final_error "
        << io::format_real(s.mean_final_error()) << '\n';
  }
  if (!summary.failures.empty()) {
    for (const auto& f : summary.failures)
      err << "failed: trial " << f.trial << " solver " << f.solver << ": " << f.message << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

std::vector<std::size_t> parse_columns(const std::string& text, std::size_t n) {
  std::vector<std::size_t> cols;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(tok, &pos);
    } catch (const std::exception&) {
      throw UsageError("--columns: invalid index '" + tok + "'");
    }
    if (pos != tok.size() || v < 1 || v > n) throw UsageError("--columns: index '" + tok + "' outside [1, n]");
    cols.push_back(static_cast<std::size_t>(v - 1));
  }
  if (cols.empty()) throw UsageError("--columns: empty list");
  return cols;
}

int cmd_diagnose(const DiagnoseOptions& o, std::ostream& out, std::ostream& err) {
  const DenseMatrix a = io::read_matrix_market(o.matrix);
  err << "kaczmarz diagnose: matrix=" << o.matrix << " (" << a.rows() << "x" << a.cols() << ")"
      << (o.columns.empty() ? "" : " columns=" + o.columns) << '\n';
  std::vector<std::size_t> cols;
  if (!o.columns.empty()) cols = parse_columns(o.columns, a.cols());

  const ConditionReport full = condition_report(a);
  out << "frobenius_norm " << io::format_real(full.frobenius_norm) << '\n';
  out << "sigma_min " << io::format_real(full.sigma_min) << '\n';
  out << "kappa " << io::format_real(full.kappa) << '\n';
  if (!cols.empty()) {
    const ConditionReport sub = condition_report(a.select_columns(cols));
    out << "kappa_subset " << io::format_real(sub.kappa) << '\n';
    out << "ratio " << io::format_real(sub.kappa / full.kappa) << '\n';
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Randomized and sparse randomized Kaczmarz solvers", "kaczmarz"};
  app.require_subcommand(1);

  SolveOptions solve;
  auto* sc_solve = app.add_subcommand("solve", "Solve Ax = b with RK or SRK");
  sc_solve->add_option("--matrix", solve.matrix, "MatrixMarket file holding A")->required();
  sc_solve->add_option("--rhs", solve.rhs, "MatrixMarket m x 1 file holding b")->required();
  sc_solve->add_option("--algorithm", solve.algorithm, "rk or srk")->required()->check(CLI::IsMember({"rk", "srk"}));
  sc_solve->add_option("--khat", solve.khat, "SRK support floor")->check(CLI::PositiveNumber);
  sc_solve->add_option("--max-iters", solve.max_iters, "Iteration budget")->check(CLI::PositiveNumber);
  sc_solve->add_option("--seed", solve.seed, "Row sampling seed (default 0)");
  sc_solve->add_option("--tol", solve.tol, "Relative residual stopping tolerance (0 disables)")->check(CLI::NonNegativeNumber);
  sc_solve->add_option("--trace-stride", solve.trace_stride, "Iterations between trace records")->check(CLI::PositiveNumber);
  sc_solve->add_option("--trace-out", solve.trace_out, "Trace CSV output path");
  sc_solve->add_option("--solution-out", solve.solution_out, "Final iterate output path (MatrixMarket)");

  GenerateOptions gen;
  auto* sc_gen = app.add_subcommand("generate", "Write a Gaussian system with a sparse solution");
  sc_gen->add_option("--m", gen.m, "Rows")->required();
  sc_gen->add_option("--n", gen.n, "Columns")->required();
  sc_gen->add_option("--k", gen.k, "Sparsity")->required();
  sc_gen->add_option("--seed", gen.seed, "Seed (default 0)");
  sc_gen->add_option("--matrix-out", gen.matrix_out, "A output path")->required();
  sc_gen->add_option("--rhs-out", gen.rhs_out, "b output path")->required();
  sc_gen->add_option("--signal-out", gen.signal_out, "x output path")->required();

  ReproduceOptions rep;
  auto* sc_rep = app.add_subcommand("reproduce", "Run a multi-trial experiment from a JSON config");
  sc_rep->add_option("--config", rep.config, "Experiment config (JSON)")->required();
  sc_rep->add_option("--out-dir", rep.out_dir, "Output directory")->required();
  sc_rep->add_flag("--fixed-matrix", rep.fixed_matrix, "Share one matrix across trials");
  sc_rep->add_option("--jobs", rep.jobs, "Worker threads (default KACZMARZ_JOBS or all cores)")->check(CLI::PositiveNumber);

  DiagnoseOptions diag;
  auto* sc_diag = app.add_subcommand("diagnose", "Scaled condition number of A (and of a column subset)");
  sc_diag->add_option("--matrix", diag.matrix, "MatrixMarket file holding A")->required();
  sc_diag->add_option("--columns", diag.columns, "Comma-separated 1-based column indices");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("kaczmarz");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    err << app.help();
    return kExitUsage;
  }

  try {
    if (sc_solve->parsed()) return cmd_solve(solve, out, err);
    if (sc_gen->parsed()) return cmd_generate(gen, out, err);
    if (sc_rep->parsed()) return cmd_reproduce(rep, out, err);
    if (sc_diag->parsed()) return cmd_diagnose(diag, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace kaczmarz::cli
