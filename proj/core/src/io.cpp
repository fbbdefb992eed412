#include "gnlr/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <vector>

namespace gnlr {

namespace {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Pulls the next non-blank, non-comment line; returns false at EOF.
bool next_content_line(std::istream& in, std::string& line, long& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '%') continue;
    line = t;
    return true;
  }
  return false;
}

long parse_index(std::istringstream& ss, const char* what, long lineno) {
  long v = 0;
  if (!(ss >> v)) throw ParseError(std::string("expected ") + what, lineno);
  return v;
}

double parse_value(std::istringstream& ss, long lineno) {
  double v = 0.0;
  if (!(ss >> v)) throw ParseError("expected a numeric value", lineno);
  return v;
}

void expect_line_end(std::istringstream& ss, long lineno) {
  std::string rest;
  if (ss >> rest) throw ParseError("unexpected trailing tokens", lineno);
}

}  // namespace

MatrixMarketData read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  {
    std::istringstream hs(line);
    std::string banner, object, fmt, field, symmetry;
    hs >> banner >> object >> fmt >> field >> symmetry;
    if (banner != "%%MatrixMarket" || object != "matrix" ||
        symmetry != "general") {
      throw ParseError("unsupported Matrix Market header", 1);
    }
    MatrixMarketData out;
    if (fmt == "coordinate" && field == "real") {
      out.format = MatrixMarketData::Format::coordinate_real;
    } else if (fmt == "coordinate" && field == "pattern") {
      out.format = MatrixMarketData::Format::coordinate_pattern;
    } else if (fmt == "array" && field == "real") {
      out.format = MatrixMarketData::Format::array;
    } else {
      throw ParseError("unsupported Matrix Market format '" + fmt + " " +
                           field + "'",
                       1);
    }
    expect_line_end(hs, 1);

    if (!next_content_line(in, line, lineno)) {
      throw ParseError("missing size line", lineno + 1);
    }
    std::istringstream ss(line);
    out.rows = parse_index(ss, "row count", lineno);
    out.cols = parse_index(ss, "column count", lineno);
    if (out.rows < 0 || out.cols < 0) {
      throw ParseError("negative dimension", lineno);
    }

    if (out.format == MatrixMarketData::Format::array) {
      expect_line_end(ss, lineno);
      out.array.resize(out.rows, out.cols);
      for (Index j = 0; j < out.cols; ++j) {
        for (Index i = 0; i < out.rows; ++i) {
          if (!next_content_line(in, line, lineno)) {
            throw ParseError("fewer entries than rows*cols", lineno + 1);
          }
          std::istringstream es(line);
          out.array(i, j) = parse_value(es, lineno);
          expect_line_end(es, lineno);
        }
      }
      if (next_content_line(in, line, lineno)) {
        throw ParseError("more entries than rows*cols", lineno);
      }
      check_finite(out.array, "read_matrix_market: array");
      return out;
    }

    const long nnz = parse_index(ss, "entry count", lineno);
    expect_line_end(ss, lineno);
    if (nnz < 0) throw ParseError("negative entry count", lineno);
    const bool has_values =
        out.format == MatrixMarketData::Format::coordinate_real;

    std::vector<IndexSet::Entry> entries;
    std::vector<double> values;
    std::vector<long> entry_lines;
    entries.reserve(static_cast<std::size_t>(nnz));
    for (long e = 0; e < nnz; ++e) {
      if (!next_content_line(in, line, lineno)) {
        throw ParseError("fewer entries than declared", lineno + 1);
      }
      std::istringstream es(line);
      const long i = parse_index(es, "row index", lineno);
      const long j = parse_index(es, "column index", lineno);
      if (i < 1 || i > out.rows || j < 1 || j > out.cols) {
        throw OutOfBoundsError("coordinate index out of bounds", lineno);
      }
      double v = 0.0;
      if (has_values) v = parse_value(es, lineno);
      expect_line_end(es, lineno);
      entries.emplace_back(i - 1, j - 1);
      entry_lines.push_back(lineno);
      if (has_values) values.push_back(v);
    }
    if (next_content_line(in, line, lineno)) {
      throw ParseError("more entries than declared", lineno);
    }

    // Sort into IndexSet order, carrying values along; reject duplicates.
    std::vector<std::size_t> perm(entries.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      return entries[a] < entries[b];
    });
    std::vector<IndexSet::Entry> sorted;
    sorted.reserve(entries.size());
    Vector vals(static_cast<Index>(values.size()));
    for (std::size_t k = 0; k < perm.size(); ++k) {
      if (k > 0 && entries[perm[k]] == entries[perm[k - 1]]) {
        throw DuplicateEntryError("duplicate coordinate entry",
                                  entry_lines[perm[k]]);
      }
      sorted.push_back(entries[perm[k]]);
      if (has_values) vals(static_cast<Index>(k)) = values[perm[k]];
    }
    out.omega = IndexSet(std::move(sorted), out.rows, out.cols);
    if (has_values) {
      check_finite(vals, "read_matrix_market: values");
      out.values = std::move(vals);
    }
    return out;
  }
}

void write_matrix_market(const std::string& path, const Matrix& dense) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix array real general\n";
  out << dense.rows() << " " << dense.cols() << "\n";
  for (Index j = 0; j < dense.cols(); ++j) {
    for (Index i = 0; i < dense.rows(); ++i) {
      out << fmt17(dense(i, j)) << "\n";
    }
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_matrix_market(const std::string& path, const IndexSet& omega,
                         const Vector& values) {
  if (values.size() != static_cast<Index>(omega.size())) {
    throw DimensionMismatchError("write_matrix_market: |values| != |omega|");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << omega.rows() << " " << omega.cols() << " " << omega.size() << "\n";
  Index k = 0;
  for (const auto& [i, j] : omega.entries()) {
    out << (i + 1) << " " << (j + 1) << " " << fmt17(values(k++)) << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_matrix_market(const std::string& path, const IndexSet& omega) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "%%MatrixMarket matrix coordinate pattern general\n";
  out << omega.rows() << " " << omega.cols() << " " << omega.size() << "\n";
  for (const auto& [i, j] : omega.entries()) {
    out << (i + 1) << " " << (j + 1) << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

Matrix read_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::vector<std::vector<double>> rows;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::istringstream cs(trim(cell));
      row.push_back(parse_value(cs, lineno));
      expect_line_end(cs, lineno);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("ragged CSV row", lineno);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("empty CSV file", lineno);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  check_finite(m, "read_dense_csv");
  return m;
}

void write_dense_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << fmt17(m(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_trace(const std::string& path, const IterationTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << trace.to_csv();
  if (!out) throw IoError("write failed for '" + path + "'");
}

// ---------------------------------------------------------------------------
// Run configuration.
// ---------------------------------------------------------------------------

namespace {

double to_double(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  double x = 0.0;
  std::string rest;
  if (!(ss >> x) || (ss >> rest)) {
    throw ValidationError(key, "not a number: '" + v + "'");
  }
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  long x = 0;
  std::string rest;
  if (!(ss >> x) || (ss >> rest)) {
    throw ValidationError(key, "not an integer: '" + v + "'");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::istringstream ss(v);
  std::uint64_t x = 0;
  std::string rest;
  if (!(ss >> x) || (ss >> rest)) {
    throw ValidationError(key, "not an unsigned integer: '" + v + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw ValidationError(key, "expected true or false, got '" + v + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError("expected key=value", lineno);
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", lineno);
    if (kv.count(key)) throw ValidationError(key, "duplicate key");
    kv[key] = value;
  }

  RunConfig c;
  const auto take = [&kv](const std::string& key) {
    std::string v;
    const auto it = kv.find(key);
    if (it != kv.end()) {
      v = it->second;
      kv.erase(it);
    }
    return v;
  };

  if (const auto v = take("max_iters"); !v.empty()) {
    const long x = to_long("max_iters", v);
    if (x < 1) throw ValidationError("max_iters", "must be >= 1");
    c.solver.max_iters = static_cast<int>(x);
  }
  if (const auto v = take("eps1"); !v.empty()) {
    c.solver.eps1 = to_double("eps1", v);
    if (c.solver.eps1 <= 0) throw ValidationError("eps1", "must be > 0");
  }
  if (const auto v = take("eps2"); !v.empty()) {
    c.solver.eps2 = to_double("eps2", v);
    if (c.solver.eps2 <= 0) throw ValidationError("eps2", "must be > 0");
  }
  if (const auto v = take("c1"); !v.empty()) {
    c.solver.c1 = to_double("c1", v);
    if (c.solver.c1 <= 0 || c.solver.c1 >= 1) {
      throw ValidationError("c1", "must be in (0, 1)");
    }
  }
  if (const auto v = take("beta"); !v.empty()) {
    c.solver.beta = to_double("beta", v);
    if (c.solver.beta <= 0 || c.solver.beta >= 1) {
      throw ValidationError("beta", "must be in (0, 1)");
    }
  }
  if (const auto v = take("alpha0"); !v.empty()) {
    c.solver.alpha0 = to_double("alpha0", v);
    if (c.solver.alpha0 <= 0) throw ValidationError("alpha0", "must be > 0");
  }
  if (const auto v = take("rho"); !v.empty()) {
    if (v == "auto") {
      c.rho_auto = true;
      c.solver.rho = 0.0;
    } else {
      c.rho_auto = false;
      c.solver.rho = to_double("rho", v);
      if (c.solver.rho <= 0) {
        throw ValidationError("rho", "must be > 0 when fixed");
      }
    }
  }
  if (const auto v = take("option"); !v.empty()) {
    if (v == "prox") {
      c.solver.option = SolverConfig::WStep::prox;
    } else if (v == "gradient") {
      c.solver.option = SolverConfig::WStep::gradient;
    } else {
      throw ValidationError("option", "expected prox or gradient");
    }
  }
  if (const auto v = take("gamma_u"); !v.empty()) {
    c.solver.gamma_u = to_double("gamma_u", v);
    if (c.solver.gamma_u <= 0) throw ValidationError("gamma_u", "must be > 0");
  }
  if (const auto v = take("gamma_v"); !v.empty()) {
    c.solver.gamma_v = to_double("gamma_v", v);
    if (c.solver.gamma_v <= 0) throw ValidationError("gamma_v", "must be > 0");
  }
  if (const auto v = take("linesearch_cap"); !v.empty()) {
    const long x = to_long("linesearch_cap", v);
    if (x < 1) throw ValidationError("linesearch_cap", "must be >= 1");
    c.solver.linesearch_cap = static_cast<int>(x);
  }
  if (const auto v = take("seed"); !v.empty()) {
    c.solver.seed = to_u64("seed", v);
  }
  if (const auto v = take("zero_residual_stop"); !v.empty()) {
    c.solver.zero_residual_stop = to_bool("zero_residual_stop", v);
  }
  if (const auto v = take("rho_adapt"); !v.empty()) {
    c.solver.rho_adapt = to_bool("rho_adapt", v);
  }
  if (const auto v = take("l1_rho_scaled_dual"); !v.empty()) {
    c.solver.l1_rho_scaled_dual = to_bool("l1_rho_scaled_dual", v);
  }

  if (const auto v = take("algorithm"); !v.empty()) {
    static const char* known[] = {"lsgn",     "fsgn",  "adm", "gn_admm",
                                  "rad_admm", "slsgn", "l1"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return v == k;
        }) == std::end(known)) {
      throw ValidationError("algorithm", "unknown algorithm '" + v + "'");
    }
    c.algorithm = v;
  }
  if (const auto v = take("generator"); !v.empty()) {
    static const char* known[] = {"mc_integer", "lowrank_clustered", "sensing"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return v == k;
        }) == std::end(known)) {
      throw ValidationError("generator", "unknown generator '" + v + "'");
    }
    c.generator = v;
  }
  const auto dim = [&](const char* key, long& out) {
    if (const auto v = take(key); !v.empty()) {
      out = to_long(key, v);
      if (out < 0) throw ValidationError(key, "must be >= 0");
    }
  };
  dim("m", c.m);
  dim("n", c.n);
  dim("r", c.r);
  dim("l", c.l);
  if (const auto v = take("fraction"); !v.empty()) {
    c.fraction = to_double("fraction", v);
    if (c.fraction <= 0 || c.fraction > 1) {
      throw ValidationError("fraction", "must be in (0, 1]");
    }
  }
  if (const auto v = take("sigma"); !v.empty()) {
    c.sigma = to_double("sigma", v);
    if (c.sigma < 0) throw ValidationError("sigma", "must be >= 0");
  }
  if (const auto v = take("kind"); !v.empty()) {
    if (v != "dense_gaussian" && v != "sparse_gaussian") {
      throw ValidationError("kind", "expected dense_gaussian or sparse_gaussian");
    }
    c.kind = v;
  }
  if (kv.count("b_path")) c.b_path = take("b_path");
  if (kv.count("mask_path")) c.mask_path = take("mask_path");
  if (kv.count("trace_out")) c.trace_out = take("trace_out");
  if (kv.count("result_out")) c.result_out = take("result_out");

  if (!kv.empty()) {
    throw ValidationError(kv.begin()->first, "unknown key");
  }
  return c;
}

RunConfig read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "max_iters=" << c.solver.max_iters << "\n";
  out << "eps1=" << fmt17(c.solver.eps1) << "\n";
  out << "eps2=" << fmt17(c.solver.eps2) << "\n";
  out << "c1=" << fmt17(c.solver.c1) << "\n";
  out << "beta=" << fmt17(c.solver.beta) << "\n";
  out << "alpha0=" << fmt17(c.solver.alpha0) << "\n";
  if (c.rho_auto) {
    out << "rho=auto\n";
  } else {
    out << "rho=" << fmt17(c.solver.rho) << "\n";
  }
  out << "option="
      << (c.solver.option == SolverConfig::WStep::prox ? "prox" : "gradient")
      << "\n";
  out << "gamma_u=" << fmt17(c.solver.gamma_u) << "\n";
  out << "gamma_v=" << fmt17(c.solver.gamma_v) << "\n";
  out << "linesearch_cap=" << c.solver.linesearch_cap << "\n";
  out << "seed=" << c.solver.seed << "\n";
  out << "zero_residual_stop="
      << (c.solver.zero_residual_stop ? "true" : "false") << "\n";
  out << "rho_adapt=" << (c.solver.rho_adapt ? "true" : "false") << "\n";
  out << "l1_rho_scaled_dual="
      << (c.solver.l1_rho_scaled_dual ? "true" : "false") << "\n";
  out << "algorithm=" << c.algorithm << "\n";
  if (!c.generator.empty()) out << "generator=" << c.generator << "\n";
  out << "m=" << c.m << "\n";
  out << "n=" << c.n << "\n";
  out << "r=" << c.r << "\n";
  out << "l=" << c.l << "\n";
  out << "fraction=" << fmt17(c.fraction) << "\n";
  out << "sigma=" << fmt17(c.sigma) << "\n";
  out << "kind=" << c.kind << "\n";
  if (!c.b_path.empty()) out << "b_path=" << c.b_path << "\n";
  if (!c.mask_path.empty()) out << "mask_path=" << c.mask_path << "\n";
  if (!c.trace_out.empty()) out << "trace_out=" << c.trace_out << "\n";
  if (!c.result_out.empty()) out << "result_out=" << c.result_out << "\n";
  return out.str();
}

}  // namespace gnlr
