#include "kaczmarz/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "kaczmarz/errors.hpp"

namespace kaczmarz::io {

namespace {

using ordered_json = nlohmann::ordered_json;

// Largest dense matrix we are willing to allocate (entries).
constexpr std::size_t kMaxEntries = std::size_t{1} << 31;

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::optional<double> to_double(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

std::optional<std::size_t> to_size(std::string_view s) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WriteError("cannot open '" + path.string() + "' for writing");
  fn(out);
  out.flush();
  if (!out) throw WriteError("write to '" + path.string() + "' failed");
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- MatrixMarket ---------------------------------------------------------

DenseMatrix parse_matrix_market(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw ParseError(source, 1, "empty file");
  ++lineno;
  const auto header = split_ws(line);
  if (header.size() != 5 || header[0] != "%%MatrixMarket") {
    throw ParseError(source, lineno, "expected '%%MatrixMarket matrix <format> <field> <symmetry>' header");
  }
  const std::string object = lower(header[1]);
  const std::string format = lower(header[2]);
  const std::string field = lower(header[3]);
  const std::string symmetry = lower(header[4]);
  if (object != "matrix") throw ParseError(source, lineno, "unsupported object '" + header[1] + "'");
  if (format != "array" && format != "coordinate") {
    throw ParseError(source, lineno, "unsupported format '" + header[2] + "'");
  }
  if (field != "real") {
    throw ParseError(source, lineno, "unsupported field '" + header[3] + "' (only real is supported)");
  }
  if (symmetry != "general") {
    throw ParseError(source, lineno, "unsupported symmetry '" + header[4] + "' (only general is supported)");
  }

  // next non-comment, non-blank line is the size line
  std::vector<std::string> size_tokens;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    size_tokens = split_ws(line);
    if (!size_tokens.empty()) break;
  }
  const bool coordinate = format == "coordinate";
  if (size_tokens.size() != (coordinate ? 3u : 2u)) {
    throw ParseError(source, lineno, coordinate ? "expected 'rows cols nnz'" : "expected 'rows cols'");
  }
  const auto rows = to_size(size_tokens[0]);
  const auto cols = to_size(size_tokens[1]);
  if (!rows || !cols || *rows == 0 || *cols == 0) throw ParseError(source, lineno, "invalid dimensions");
  if (*rows > kMaxEntries / *cols) throw ParseError(source, lineno, "dimension overflow");

  DenseMatrix a(*rows, *cols);

  auto next_data_line = [&](std::vector<std::string>& tokens) {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty() || line[0] == '%') continue;
      tokens = split_ws(line);
      if (!tokens.empty()) return true;
    }
    return false;
  };
  auto real_at = [&](const std::string& tok) {
    const auto v = to_double(tok);
    if (!v) throw ParseError(source, lineno, "invalid real value '" + tok + "'");
    if (!std::isfinite(*v)) throw ParseError(source, lineno, "non-finite value '" + tok + "'");
    return *v;
  };

  std::vector<std::string> tokens;
  if (!coordinate) {
    const std::size_t total = *rows * *cols;
    std::size_t filled = 0;
    while (filled < total && next_data_line(tokens)) {
      for (const auto& tok : tokens) {
        if (filled == total) throw ParseError(source, lineno, "more entries than declared");
        const std::size_t r = filled % *rows;
        const std::size_t c = filled / *rows;
        a(r, c) = real_at(tok);
        ++filled;
      }
    }
    if (filled < total) {
      throw ParseError(source, lineno, "expected " + std::to_string(total) + " entries, found " +
                                           std::to_string(filled));
    }
  } else {
    const auto nnz = to_size(size_tokens[2]);
    if (!nnz) throw ParseError(source, lineno, "invalid entry count");
    for (std::size_t e = 0; e < *nnz; ++e) {
      if (!next_data_line(tokens)) {
        throw ParseError(source, lineno, "expected " + std::to_string(*nnz) + " entries, found " +
                                             std::to_string(e));
      }
      if (tokens.size() != 3) throw ParseError(source, lineno, "expected 'row col value'");
      const auto i = to_size(tokens[0]);
      const auto j = to_size(tokens[1]);
      if (!i || !j || *i < 1 || *j < 1 || *i > *rows || *j > *cols) {
        throw ParseError(source, lineno, "entry index out of range");
      }
      a(*i - 1, *j - 1) += real_at(tokens[2]);
    }
  }
  if (next_data_line(tokens)) throw ParseError(source, lineno, "trailing data after last entry");
  return a;
}

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const DenseMatrix& a) {
  out << "%%MatrixMarket matrix array real general\n";
  out << a.rows() << ' ' << a.cols() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i) out << format_real(a(i, j)) << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a) {
  write_file(path, [&](std::ostream& out) { write_matrix_market(out, a); });
}

Vector read_vector(const std::filesystem::path& path) {
  const DenseMatrix a = read_matrix_market(path);
  if (a.cols() != 1 && a.rows() != 1) {
    throw ParseError(path.string(), 2, "expected a vector (m x 1), got " + std::to_string(a.rows()) + "x" +
                                           std::to_string(a.cols()));
  }
  return Vector(a.entries().begin(), a.entries().end());
}

void write_vector(const std::filesystem::path& path, std::span<const double> v) {
  write_matrix_market(path, DenseMatrix(v.size(), 1, Vector(v.begin(), v.end())));
}

// ---- trace CSV ------------------------------------------------------------

void write_trace_records(std::ostream& out, const std::vector<TraceRecord>& records) {
  out << kTraceHeader << '\n';
  for (const auto& r : records) {
    out << r.solver << ',' << r.trial << ',' << r.iteration << ',' << format_real(r.rel_error) << ','
        << format_real(r.rel_residual) << '\n';
  }
}

void write_trace_csv(const ExperimentSummary& summary, std::ostream& out, std::optional<SolverKind> only) {
  std::vector<TraceRecord> records;
  for (const auto& s : summary.solvers) {
    if (only && s.kind != *only) continue;
    const std::string name(to_string(s.kind));
    for (std::size_t k = 0; k < s.traces.size(); ++k) {
      const auto& t = s.traces[k];
      for (std::size_t p = 0; p < t.iterations.size(); ++p) {
        records.push_back({name, std::to_string(s.trial_ids[k]), t.iterations[p], t.relative_error[p],
                           t.relative_residual[p]});
      }
    }
    auto series = [&](const char* label, const Vector& err, const Vector& res) {
      for (std::size_t p = 0; p < s.iterations.size(); ++p)
        records.push_back({name, label, s.iterations[p], err[p], res[p]});
    };
    series("mean", s.mean_error, s.mean_residual);
    series("min", s.min_error, s.min_residual);
    series("max", s.max_error, s.max_residual);
  }
  write_trace_records(out, records);
}

void write_trace_csv(const ExperimentSummary& summary, const std::filesystem::path& path,
                     std::optional<SolverKind> only) {
  write_file(path, [&](std::ostream& out) { write_trace_csv(summary, out, only); });
}

std::vector<TraceRecord> parse_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || line != kTraceHeader) throw ParseError(source, 1, "missing trace header");
  std::vector<TraceRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 5) throw ParseError(source, lineno, "expected 5 fields");
    TraceRecord r;
    r.solver = fields[0];
    r.trial = fields[1];
    const auto it = to_size(fields[2]);
    const auto err = to_double(fields[3]);
    const auto res = to_double(fields[4]);
    if (!it || !err || !res) throw ParseError(source, lineno, "malformed numeric field");
    r.iteration = *it;
    r.rel_error = *err;
    r.rel_residual = *res;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<TraceRecord> read_trace_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse_trace_csv(in, path.string());
}

// ---- config ----------------------------------------------------------------

namespace {

const nlohmann::json& require(const nlohmann::json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(key, "missing required key");
  return *it;
}

std::uint64_t as_unsigned(const nlohmann::json& v, const char* key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected a non-negative integer");
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::int64_t>();
  if (s < 0) throw ConfigError(key, "expected a non-negative integer");
  return static_cast<std::uint64_t>(s);
}

double as_real(const nlohmann::json& v, const char* key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  return v.get<double>();
}

}  // namespace

ExperimentSpec parse_experiment_config(const std::string& text) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("<document>", std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<document>", "expected a JSON object");

  static const char* const kKeys[] = {"m",     "n",      "regime", "sparsity_ratio", "khat",        "trials",
                                      "solvers", "seed", "max_iterations", "trace_stride", "fixed_matrix"};
  for (const auto& [key, _] : root.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || key == k;
    if (!known) throw ConfigError(key, "unknown key");
  }

  ExperimentSpec spec;
  spec.m = as_unsigned(require(root, "m"), "m");
  spec.n = as_unsigned(require(root, "n"), "n");
  if (spec.m < 1) throw ConfigError("m", "must be >= 1");
  if (spec.n < 1) throw ConfigError("n", "must be >= 1");

  const auto& regime = require(root, "regime");
  if (!regime.is_string()) throw ConfigError("regime", "expected a string");
  try {
    spec.regime = parse_regime(regime.get<std::string>());
  } catch (const ParameterError& e) {
    throw ConfigError("regime", e.what());
  }
  if (spec.regime == Regime::overdetermined && spec.m < spec.n) throw ConfigError("regime", "overdetermined requires m >= n");
  if (spec.regime == Regime::underdetermined && spec.m >= spec.n) throw ConfigError("regime", "underdetermined requires m < n");

  spec.sparsity_ratio = as_real(require(root, "sparsity_ratio"), "sparsity_ratio");
  if (!(spec.sparsity_ratio > 0.0)) throw ConfigError("sparsity_ratio", "must be positive");
  const std::size_t k = spec.sparsity();
  if (k < 1 || k > spec.n) throw ConfigError("sparsity_ratio", "yields sparsity k = " + std::to_string(k) + " outside [1, n]");

  const auto& khat = require(root, "khat");
  if (khat.is_number_integer()) {
    const auto v = as_unsigned(khat, "khat");
    if (v < 1 || v > spec.n) throw ConfigError("khat", "count must lie in [1, n]");
    spec.khat.rule = KhatRule::Count{static_cast<std::size_t>(v)};
  } else if (khat.is_object()) {
    if (khat.size() != 1 || !khat.contains("ratio_of_k")) throw ConfigError("khat", "expected {\"ratio_of_k\": <number>}");
    const double r = as_real(khat["ratio_of_k"], "khat");
    if (!(r > 0.0)) throw ConfigError("khat", "ratio_of_k must be positive");
    spec.khat.rule = KhatRule::RatioOfK{r};
  } else {
    throw ConfigError("khat", "expected a count or {\"ratio_of_k\": <number>}");
  }

  spec.trials = as_unsigned(require(root, "trials"), "trials");
  if (spec.trials < 1) throw ConfigError("trials", "must be >= 1");

  const auto& solvers = require(root, "solvers");
  if (!solvers.is_array() || solvers.empty()) throw ConfigError("solvers", "expected a non-empty array");
  for (const auto& s : solvers) {
    if (!s.is_string()) throw ConfigError("solvers", "expected solver names");
    try {
      spec.solvers.push_back(parse_solver_kind(s.get<std::string>()));
    } catch (const ParameterError& e) {
      throw ConfigError("solvers", e.what());
    }
  }

  if (root.contains("seed")) spec.seed = as_unsigned(root["seed"], "seed");
  if (root.contains("max_iterations")) {
    spec.max_iterations = as_unsigned(root["max_iterations"], "max_iterations");
    if (spec.max_iterations < 1) throw ConfigError("max_iterations", "must be >= 1");
  }
  if (root.contains("trace_stride")) {
    spec.trace_stride = as_unsigned(root["trace_stride"], "trace_stride");
    if (spec.trace_stride < 1) throw ConfigError("trace_stride", "must be >= 1");
  }
  if (root.contains("fixed_matrix")) {
    if (!root["fixed_matrix"].is_boolean()) throw ConfigError("fixed_matrix", "expected a boolean");
    spec.fixed_matrix = root["fixed_matrix"].get<bool>();
  }
  return spec;
}

ExperimentSpec read_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<document>", "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str());
}

// ---- summary ----------------------------------------------------------------

namespace {

ordered_json real_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json parameters(const ExperimentSpec& spec) {
  ordered_json p;
  p["m"] = spec.m;
  p["n"] = spec.n;
  p["regime"] = std::string(to_string(spec.regime));
  p["sparsity_ratio"] = spec.sparsity_ratio;
  p["k"] = spec.sparsity();
  p["khat"] = spec.support_floor();
  if (const auto* r = std::get_if<KhatRule::RatioOfK>(&spec.khat.rule)) p["khat_ratio_of_k"] = r->ratio;
  p["trials"] = spec.trials;
  auto solvers = ordered_json::array();
  for (auto s : spec.solvers) solvers.push_back(std::string(to_string(s)));
  p["solvers"] = solvers;
  p["seed"] = spec.seed;
  p["max_iterations"] = spec.iteration_budget();
  p["trace_stride"] = spec.stride();
  p["fixed_matrix"] = spec.fixed_matrix;
  p["success_threshold"] = spec.success_threshold;
  return p;
}

}  // namespace

std::string summary_json(const ExperimentSummary& summary) {
  ordered_json root;
  root["parameters"] = parameters(summary.spec);
  auto solvers = ordered_json::object();
  for (const auto& s : summary.solvers) {
    ordered_json js;
    js["trials_completed"] = s.traces.size();
    js["success_rate"] = s.success_rate;
    js["mean_final_error"] = real_or_null(s.mean_final_error());
    auto finals = ordered_json::array();
    for (double e : s.final_errors) finals.push_back(real_or_null(e));
    js["final_errors"] = finals;
    js["final_mean_residual"] = s.mean_residual.empty() ? ordered_json(nullptr) : real_or_null(s.mean_residual.back());
    solvers[std::string(to_string(s.kind))] = js;
  }
  root["solvers"] = solvers;
  root["l1_matched_iterations"] = matched_work_budget(summary.spec.iteration_budget(), summary.spec.m);
  auto failures = ordered_json::array();
  for (const auto& f : summary.failures) failures.push_back({{"trial", f.trial}, {"solver", f.solver}, {"message", f.message}});
  root["failures"] = failures;
  return root.dump(2) + "\n";
}

std::string timing_json(const ExperimentSummary& summary) {
  ordered_json root;
  for (const auto& s : summary.solvers) {
    ordered_json js;
    js["trials"] = s.trial_ids;
    js["wall_seconds"] = s.wall_seconds;
    double total = 0.0;
    for (double w : s.wall_seconds) total += w;
    js["total_seconds"] = total;
    root[std::string(to_string(s.kind))] = js;
  }
  return root.dump(2) + "\n";
}

}  // namespace kaczmarz::io
