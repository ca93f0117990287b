#include "kaczmarz/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/random.hpp"

namespace kaczmarz {

std::string_view to_string(SolverKind kind) noexcept {
  switch (kind) {
    case SolverKind::rk: return "rk";
    case SolverKind::srk: return "srk";
    case SolverKind::rk_oracle: return "rk-oracle";
  }
  return "?";
}

SolverKind parse_solver_kind(std::string_view token) {
  if (token == "rk") return SolverKind::rk;
  if (token == "srk") return SolverKind::srk;
  if (token == "rk-oracle") return SolverKind::rk_oracle;
  throw ParameterError("unknown solver '" + std::string(token) + "' (expected rk, srk or rk-oracle)");
}

std::string_view to_string(Regime regime) noexcept {
  return regime == Regime::overdetermined ? "overdetermined" : "underdetermined";
}

Regime parse_regime(std::string_view token) {
  if (token == "overdetermined" || token == "over") return Regime::overdetermined;
  if (token == "underdetermined" || token == "under") return Regime::underdetermined;
  throw ParameterError("unknown regime '" + std::string(token) + "'");
}

std::size_t KhatRule::resolve(std::size_t k, std::size_t n) const {
  std::size_t value = 0;
  if (const auto* c = std::get_if<Count>(&rule)) {
    value = c->value;
  } else {
    const double r = std::get<RatioOfK>(rule).ratio;
    if (!(r > 0.0)) throw ParameterError("khat ratio must be positive");
    // the small slack keeps exact products such as 0.2 * 20 from rounding up
    value = static_cast<std::size_t>(std::ceil(r * static_cast<double>(k) - 1e-9));
    value = std::max<std::size_t>(value, 1);
  }
  if (value < 1) throw ParameterError("khat must be >= 1");
  return std::min(value, n);
}

std::size_t ExperimentSpec::sparsity() const {
  const std::size_t base = regime == Regime::overdetermined ? n : m;
  const auto k = static_cast<std::size_t>(std::llround(sparsity_ratio * static_cast<double>(base)));
  return k;
}

std::size_t ExperimentSpec::iteration_budget() const {
  if (max_iterations > 0) return max_iterations;
  return regime == Regime::overdetermined ? 10 * n : 100 * m;
}

std::size_t ExperimentSpec::stride() const {
  if (trace_stride > 0) return trace_stride;
  return std::max<std::size_t>(1, iteration_budget() / 100);
}

void ExperimentSpec::validate() const {
  if (m < 1 || n < 1) throw ParameterError("m and n must be >= 1");
  if (regime == Regime::overdetermined && m < n) throw ParameterError("overdetermined regime requires m >= n");
  if (regime == Regime::underdetermined && m >= n) throw ParameterError("underdetermined regime requires m < n");
  if (!(sparsity_ratio > 0.0)) throw ParameterError("sparsity_ratio must be positive");
  const std::size_t k = sparsity();
  if (k < 1) throw ParameterError("sparsity_ratio yields k = 0");
  if (k > n) throw ParameterError("sparsity_ratio yields k > n");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  (void)support_floor();
  if (!(success_threshold >= 0.0)) throw ParameterError("success_threshold must be >= 0");
}

double SolverSummary::mean_final_error() const {
  if (final_errors.empty()) return std::nan("");
  double s = 0.0;
  for (double e : final_errors) s += e;
  return s / static_cast<double>(final_errors.size());
}

const SolverSummary* ExperimentSummary::find(SolverKind kind) const noexcept {
  for (const auto& s : solvers)
    if (s.kind == kind) return &s;
  return nullptr;
}

std::size_t matched_work_budget(std::size_t srk_iterations, std::size_t m) {
  if (m < 1) throw ParameterError("matched_work_budget: m must be >= 1");
  return srk_iterations / m;
}

namespace {

Problem assemble(DenseMatrix a, SparseSignal truth) {
  Vector b = a.multiply(truth.dense());
  return {std::move(a), std::move(truth), std::move(b)};
}

Problem make_problem_with(const ExperimentSpec& spec, std::size_t trial, const DenseMatrix* shared) {
  Rng rng(spec.seed + trial, kProblemStream);
  DenseMatrix a = shared ? *shared : gaussian_matrix(spec.m, spec.n, rng);
  SparseSignal x = gen_sparse_signal(spec.n, spec.sparsity(), rng);
  return assemble(std::move(a), std::move(x));
}

DenseMatrix shared_matrix(const ExperimentSpec& spec) {
  Rng rng(spec.seed, kSharedMatrixStream);
  return gaussian_matrix(spec.m, spec.n, rng);
}

struct SolverOutcome {
  std::optional<IterationTrace> trace;
  double seconds = 0.0;
  std::string error;
};

IterationTrace run_solver(SolverKind kind, const Problem& p, const SolverConfig& cfg) {
  switch (kind) {
    case SolverKind::rk: return solve_rk(p.a, p.b, cfg, &p.truth);
    case SolverKind::srk: return solve_srk(p.a, p.b, cfg, &p.truth);
    case SolverKind::rk_oracle: return solve_rk_reduced(p.a, p.b, p.truth.support, cfg, &p.truth);
  }
  throw ParameterError("unhandled solver kind");
}

void aggregate(SolverSummary& s, double threshold) {
  if (s.traces.empty()) return;
  s.iterations = s.traces.front().iterations;
  const std::size_t points = s.iterations.size();
  for (const auto& t : s.traces) {
    if (t.iterations != s.iterations) {
      throw Error("aggregate: trials of solver '" + std::string(to_string(s.kind)) +
                  "' recorded different iteration grids");
    }
  }
  auto reduce = [&](auto member, Vector& mean, Vector& lo, Vector& hi) {
    mean.assign(points, 0.0);
    lo.assign(points, 0.0);
    hi.assign(points, 0.0);
    for (std::size_t p = 0; p < points; ++p) {
      double sum = 0.0;
      double mn = (s.traces.front().*member)[p];
      double mx = mn;
      for (const auto& t : s.traces) {
        const double v = (t.*member)[p];
        sum += v;
        mn = std::min(mn, v);
        mx = std::max(mx, v);
      }
      // a mean of equal values can round off the common value by one ulp
      mean[p] = std::clamp(sum / static_cast<double>(s.traces.size()), mn, mx);
      lo[p] = mn;
      hi[p] = mx;
    }
  };
  reduce(&IterationTrace::relative_error, s.mean_error, s.min_error, s.max_error);
  reduce(&IterationTrace::relative_residual, s.mean_residual, s.min_residual, s.max_residual);

  std::size_t ok = 0;
  for (const auto& t : s.traces) {
    const double e = t.relative_error.empty() ? std::nan("") : t.relative_error.back();
    s.final_errors.push_back(e);
    if (e <= threshold) ++ok;
  }
  s.success_rate = static_cast<double>(ok) / static_cast<double>(s.traces.size());
}

}  // namespace

SolverSummary summarize_traces(SolverKind kind, std::vector<IterationTrace> traces, double success_threshold) {
  SolverSummary s;
  s.kind = kind;
  for (std::size_t t = 0; t < traces.size(); ++t) s.trial_ids.push_back(t);
  s.traces = std::move(traces);
  s.wall_seconds.assign(s.traces.size(), 0.0);
  aggregate(s, success_threshold);
  return s;
}

Problem make_problem(const ExperimentSpec& spec, std::size_t trial) {
  spec.validate();
  if (spec.fixed_matrix) {
    const DenseMatrix a = shared_matrix(spec);
    return make_problem_with(spec, trial, &a);
  }
  return make_problem_with(spec, trial, nullptr);
}

ExperimentSummary run_experiment(const ExperimentSpec& spec, unsigned jobs,
                                 const std::function<void(std::size_t, std::size_t)>& on_trial_done) {
  spec.validate();
  const std::size_t trials = spec.trials;
  const std::size_t nsolvers = spec.solvers.size();

  std::optional<DenseMatrix> shared;
  if (spec.fixed_matrix) shared = shared_matrix(spec);

  SolverConfig base;
  base.max_iterations = spec.iteration_budget();
  base.trace_stride = spec.stride();
  base.support_floor = spec.support_floor();
  base.residual_tolerance = 0.0;

  std::vector<std::vector<SolverOutcome>> outcomes(trials, std::vector<SolverOutcome>(nsolvers));

  std::atomic<std::size_t> next{0};
  std::size_t completed = 0;
  std::mutex progress_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= trials) return;
      auto& row = outcomes[t];
      std::optional<Problem> problem;
      try {
        problem = make_problem_with(spec, t, shared ? &*shared : nullptr);
      } catch (const std::exception& e) {
        for (auto& o : row) o.error = std::string("problem generation: ") + e.what();
      }
      if (problem) {
        SolverConfig cfg = base;
        cfg.seed = spec.seed + t;
        for (std::size_t s = 0; s < nsolvers; ++s) {
          const auto start = std::chrono::steady_clock::now();
          try {
            row[s].trace = run_solver(spec.solvers[s], *problem, cfg);
          } catch (const std::exception& e) {
            row[s].error = e.what();
          }
          row[s].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
      }
      if (on_trial_done) {
        std::lock_guard lock(progress_mutex);
        on_trial_done(++completed, trials);
      }
    }
  };

  unsigned workers = jobs == 0 ? std::max(1u, std::thread::hardware_concurrency()) : jobs;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  ExperimentSummary summary;
  summary.spec = spec;
  for (std::size_t s = 0; s < nsolvers; ++s) {
    SolverSummary ss;
    ss.kind = spec.solvers[s];
    for (std::size_t t = 0; t < trials; ++t) {
      auto& o = outcomes[t][s];
      if (o.trace) {
        ss.trial_ids.push_back(t);
        ss.traces.push_back(std::move(*o.trace));
        ss.wall_seconds.push_back(o.seconds);
      } else {
        summary.failures.push_back({t, std::string(to_string(ss.kind)), o.error});
      }
    }
    aggregate(ss, spec.success_threshold);
    summary.solvers.push_back(std::move(ss));
  }
  return summary;
}

}  // namespace kaczmarz
