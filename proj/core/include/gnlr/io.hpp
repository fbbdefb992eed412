#pragma once

#include <string>

#include "gnlr/linalg.hpp"
#include "gnlr/operators.hpp"
#include "gnlr/solvers.hpp"

namespace gnlr {

/// Payload of a Matrix Market file: either a dense array or a coordinate
/// list. Coordinate entries are held in IndexSet (sorted) order; pattern
/// files carry no values.
struct MatrixMarketData {
  enum class Format { array, coordinate_real, coordinate_pattern };
  Format format = Format::array;
  Index rows = 0;
  Index cols = 0;
  Matrix array;    // array format only
  IndexSet omega;  // coordinate formats
  Vector values;   // coordinate real only, aligned with omega.entries()
};

/// Reads `%%MatrixMarket matrix {coordinate real | coordinate pattern |
/// array real} general` files. 1-based file indices become 0-based;
/// coordinate entries are sorted into IndexSet order with values permuted
/// alongside. Throws ParseError (with line number), DuplicateEntryError,
/// OutOfBoundsError, IoError.
MatrixMarketData read_matrix_market(const std::string& path);

/// Array real general format, column-major entry order, 17 significant
/// digits.
void write_matrix_market(const std::string& path, const Matrix& dense);

/// Coordinate real general format, entries in IndexSet order.
void write_matrix_market(const std::string& path, const IndexSet& omega,
                         const Vector& values);

/// Coordinate pattern general format.
void write_matrix_market(const std::string& path, const IndexSet& omega);

/// Dense CSV: one row per line, comma separated, 17 significant digits.
Matrix read_dense_csv(const std::string& path);
void write_dense_csv(const std::string& path, const Matrix& m);

/// Writes trace.to_csv() verbatim.
void write_trace(const std::string& path, const IterationTrace& trace);

/// Full run description: solver settings plus problem selection and output
/// paths, as a flat key=value document.
struct RunConfig {
  SolverConfig solver;
  bool rho_auto = true;  // serialized as rho=auto

  std::string algorithm = "lsgn";  // lsgn|fsgn|adm|gn_admm|rad_admm|slsgn|l1
  std::string generator;           // ""|mc_integer|lowrank_clustered|sensing
  long m = 0, n = 0, r = 0, l = 0;
  double fraction = 0.5;
  double sigma = 0.0;
  std::string kind = "dense_gaussian";  // sensing operator kind

  std::string b_path;
  std::string mask_path;
  std::string trace_out;
  std::string result_out;

  bool operator==(const RunConfig&) const = default;
};

/// Parses key=value lines ('#' starts a comment; blank lines allowed),
/// applies documented defaults, validates every value. Throws ParseError
/// with a line number or ValidationError naming the key.
RunConfig read_config(const std::string& path);

/// Parses config text directly (same grammar as read_config).
RunConfig parse_config(const std::string& text);

/// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

}  // namespace gnlr
