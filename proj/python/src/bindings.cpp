#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "kaczmarz/errors.hpp"
#include "kaczmarz/experiment.hpp"
#include "kaczmarz/io.hpp"
#include "kaczmarz/random.hpp"
#include "kaczmarz/signal.hpp"
#include "kaczmarz/solvers.hpp"
#include "kaczmarz/svd.hpp"

namespace py = pybind11;
using namespace kaczmarz;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Vector to_vector(const Array& v) {
  if (v.ndim() != 1) throw DimensionError("expected a 1-D array");
  return Vector(v.data(), v.data() + v.size());
}

Array to_array(const Vector& v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

Array to_array(const DenseMatrix& a) {
  Array out({static_cast<py::ssize_t>(a.rows()), static_cast<py::ssize_t>(a.cols())});
  std::copy(a.entries().begin(), a.entries().end(), out.mutable_data());
  return out;
}

SparseSignal to_signal(const Vector& x) {
  SparseSignal s;
  s.dimension = x.size();
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0.0) {
      s.support.push_back(i);
      s.values.push_back(x[i]);
    }
  }
  return s;
}

py::dict trace_dict(const IterationTrace& t) {
  py::dict d;
  d["iterations"] = t.iterations;
  d["relative_error"] = to_array(t.relative_error);
  d["relative_residual"] = to_array(t.relative_residual);
  d["solution"] = to_array(t.solution);
  d["iterations_used"] = t.iterations_used;
  if (!t.support_sizes.empty()) d["support_sizes"] = t.support_sizes;
  return d;
}

SolverConfig make_config(std::size_t max_iterations, std::size_t khat, std::uint64_t seed, double tol,
                         std::size_t trace_stride, bool record_support_sizes) {
  SolverConfig cfg;
  cfg.max_iterations = max_iterations;
  cfg.support_floor = khat;
  cfg.seed = seed;
  cfg.residual_tolerance = tol;
  cfg.trace_stride = trace_stride;
  cfg.record_support_sizes = record_support_sizes;
  return cfg;
}

template <class Solve>
py::dict run_solver(Solve solve, const Array& a, const Array& b, const std::optional<Array>& truth) {
  const DenseMatrix m = to_matrix(a);
  const Vector rhs = to_vector(b);
  std::optional<SparseSignal> sig;
  if (truth) sig = to_signal(to_vector(*truth));
  IterationTrace t;
  {
    py::gil_scoped_release release;
    t = solve(m, rhs, sig ? &*sig : nullptr);
  }
  return trace_dict(t);
}

py::dict summary_dict(const ExperimentSummary& s) {
  py::dict out;
  for (const auto& sol : s.solvers) {
    py::dict d;
    d["iterations"] = sol.iterations;
    d["mean_error"] = to_array(sol.mean_error);
    d["min_error"] = to_array(sol.min_error);
    d["max_error"] = to_array(sol.max_error);
    d["mean_residual"] = to_array(sol.mean_residual);
    d["final_errors"] = to_array(sol.final_errors);
    d["success_rate"] = sol.success_rate;
    d["mean_final_error"] = sol.mean_final_error();
    out[py::str(std::string(to_string(sol.kind)))] = d;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Randomized and sparse randomized Kaczmarz solvers";

  py::register_exception<Error>(m, "KaczmarzError", PyExc_ValueError);

  m.def(
      "rk_step", [](const Array& x, const Array& row, double rhs) { return to_array(rk_step(to_vector(x), to_vector(row), rhs)); },
      py::arg("x"), py::arg("row"), py::arg("rhs"), "One projection step onto the row hyperplane.");
  m.def(
      "srk_step",
      [](const Array& x, const Array& row, double rhs, const Array& w) {
        return to_array(srk_step(to_vector(x), to_vector(row), rhs, to_vector(w)));
      },
      py::arg("x"), py::arg("row"), py::arg("rhs"), py::arg("weights"), "Projection onto the reweighted row.");
  m.def("support_size", &support_size, py::arg("khat"), py::arg("iteration"), py::arg("n"));
  m.def(
      "support_estimate",
      [](const Array& x, std::size_t khat, std::size_t j) { return support_estimate(to_vector(x), khat, j).indices; },
      py::arg("x"), py::arg("khat"), py::arg("iteration"), "0-based indices of the estimated support.");
  m.def(
      "weight_vector",
      [](const std::vector<std::size_t>& support, std::size_t j, std::size_t n) {
        return to_array(weight_vector(SupportEstimate{support, j}, j, n));
      },
      py::arg("support"), py::arg("iteration"), py::arg("n"));

  m.def(
      "solve_rk",
      [](const Array& a, const Array& b, std::size_t max_iterations, std::uint64_t seed, double tol,
         std::size_t trace_stride, const std::optional<Array>& truth) {
        const auto cfg = make_config(max_iterations, 0, seed, tol, trace_stride, false);
        return run_solver([&](const DenseMatrix& m, const Vector& r, const SparseSignal* s) { return solve_rk(m, r, cfg, s); },
                          a, b, truth);
      },
      py::arg("a"), py::arg("b"), py::arg("max_iterations") = 1000, py::arg("seed") = 0, py::arg("tol") = 0.0,
      py::arg("trace_stride") = 1, py::arg("truth") = py::none());
  m.def(
      "solve_srk",
      [](const Array& a, const Array& b, std::size_t khat, std::size_t max_iterations, std::uint64_t seed, double tol,
         std::size_t trace_stride, const std::optional<Array>& truth, bool record_support_sizes) {
        const auto cfg = make_config(max_iterations, khat, seed, tol, trace_stride, record_support_sizes);
        return run_solver([&](const DenseMatrix& m, const Vector& r, const SparseSignal* s) { return solve_srk(m, r, cfg, s); },
                          a, b, truth);
      },
      py::arg("a"), py::arg("b"), py::arg("khat"), py::arg("max_iterations") = 1000, py::arg("seed") = 0,
      py::arg("tol") = 0.0, py::arg("trace_stride") = 1, py::arg("truth") = py::none(),
      py::arg("record_support_sizes") = false);
  m.def(
      "solve_rk_reduced",
      [](const Array& a, const Array& b, const std::vector<std::size_t>& columns, std::size_t max_iterations,
         std::uint64_t seed, double tol, std::size_t trace_stride, const std::optional<Array>& truth) {
        const auto cfg = make_config(max_iterations, 0, seed, tol, trace_stride, false);
        return run_solver(
            [&](const DenseMatrix& m, const Vector& r, const SparseSignal* s) {
              return solve_rk_reduced(m, r, columns, cfg, s);
            },
            a, b, truth);
      },
      py::arg("a"), py::arg("b"), py::arg("columns"), py::arg("max_iterations") = 1000, py::arg("seed") = 0,
      py::arg("tol") = 0.0, py::arg("trace_stride") = 1, py::arg("truth") = py::none());

  m.def(
      "singular_values", [](const Array& a) { return to_array(singular_values(to_matrix(a))); }, py::arg("a"));
  m.def(
      "scaled_condition_number", [](const Array& a) { return scaled_condition_number(to_matrix(a)); }, py::arg("a"),
      "|A|_F / sigma_min(A) for a full-column-rank matrix.");

  m.def(
      "gaussian_matrix",
      [](std::size_t rows, std::size_t cols, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return to_array(gaussian_matrix(rows, cols, rng));
      },
      py::arg("m"), py::arg("n"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def(
      "gen_sparse_signal",
      [](std::size_t n, std::size_t k, std::uint64_t seed, std::uint64_t stream) {
        Rng rng(seed, stream);
        return to_array(gen_sparse_signal(n, k, rng).dense());
      },
      py::arg("n"), py::arg("k"), py::arg("seed") = 0, py::arg("stream") = 0);
  m.def(
      "relative_error", [](const Array& x, const Array& truth) { return relative_error(to_vector(x), to_signal(to_vector(truth))); },
      py::arg("x"), py::arg("truth"));

  m.def(
      "read_matrix_market", [](const std::string& path) { return to_array(io::read_matrix_market(path)); },
      py::arg("path"));
  m.def(
      "write_matrix_market", [](const std::string& path, const Array& a) { io::write_matrix_market(path, to_matrix(a)); },
      py::arg("path"), py::arg("a"));

  m.def(
      "run_experiment",
      [](const std::string& config_path, unsigned jobs, bool fixed_matrix) {
        ExperimentSpec spec = io::read_experiment_config(config_path);
        if (fixed_matrix) spec.fixed_matrix = true;
        ExperimentSummary s;
        {
          py::gil_scoped_release release;
          s = run_experiment(spec, jobs);
        }
        return summary_dict(s);
      },
      py::arg("config"), py::arg("jobs") = 1, py::arg("fixed_matrix") = false,
      "Run an experiment config and return per-solver aggregate curves.");
}
