#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <gnlr/io.hpp>

#include "test_util.hpp"

using namespace gnlr;
using testutil::gaussian_matrix;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& text = "")
      : path("io_test_" + name) {
    if (!text.empty()) {
      std::ofstream out(path);
      out << text;
    }
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_SUITE("io") {

TEST_CASE("read_matrix_market coordinate real pinned example") {
  TempFile f("coord.mtx",
             "%%MatrixMarket matrix coordinate real general\n"
             "2 2 1\n"
             "1 2 7.0\n");
  const MatrixMarketData d = read_matrix_market(f.path);
  CHECK(d.format == MatrixMarketData::Format::coordinate_real);
  CHECK(d.rows == 2);
  CHECK(d.cols == 2);
  REQUIRE(d.omega.size() == 1);
  CHECK(d.omega.entries()[0] == IndexSet::Entry{0, 1});
  REQUIRE(d.values.size() == 1);
  CHECK(d.values(0) == 7.0);
}

TEST_CASE("read_matrix_market array pinned example is column-major") {
  TempFile f("array.mtx",
             "%%MatrixMarket matrix array real general\n"
             "% a comment line\n"
             "2 2\n"
             "1\n3\n2\n4\n");
  const MatrixMarketData d = read_matrix_market(f.path);
  CHECK(d.format == MatrixMarketData::Format::array);
  Matrix expect(2, 2);
  expect << 1, 2, 3, 4;
  CHECK((d.array - expect).norm() == 0.0);
}

TEST_CASE("matrix market write and read round trips") {
  Rng rng(1);
  SUBCASE("array") {
    TempFile f("rt_array.mtx");
    const Matrix m = gaussian_matrix(rng, 4, 3);
    write_matrix_market(f.path, m);
    CHECK((read_matrix_market(f.path).array - m).norm() == 0.0);
  }
  SUBCASE("coordinate real") {
    TempFile f("rt_coord.mtx");
    const IndexSet omega = sample_index_set(5, 4, 0.4, 2);
    const Vector vals = testutil::gaussian_vector(rng, omega.size());
    write_matrix_market(f.path, omega, vals);
    const MatrixMarketData d = read_matrix_market(f.path);
    CHECK(d.omega == omega);
    CHECK((d.values - vals).norm() == 0.0);
  }
  SUBCASE("coordinate pattern") {
    TempFile f("rt_pat.mtx");
    const IndexSet omega = sample_index_set(6, 6, 0.3, 3);
    write_matrix_market(f.path, omega);
    const MatrixMarketData d = read_matrix_market(f.path);
    CHECK(d.format == MatrixMarketData::Format::coordinate_pattern);
    CHECK(d.omega == omega);
    CHECK(d.values.size() == 0);
  }
  SUBCASE("empty coordinate set") {
    TempFile f("rt_empty.mtx");
    write_matrix_market(f.path, IndexSet({}, 3, 3), Vector(0));
    const MatrixMarketData d = read_matrix_market(f.path);
    CHECK(d.omega.size() == 0);
    CHECK(d.rows == 3);
  }
}

TEST_CASE("read_matrix_market rejects corrupt files with line numbers") {
  const auto expect_parse_error = [](const std::string& name,
                                     const std::string& text) {
    TempFile f(name, text);
    try {
      read_matrix_market(f.path);
      FAIL_CHECK("expected ParseError for ", name);
    } catch (const ParseError& e) {
      CHECK(e.line() > 0);
    }
  };
  expect_parse_error("bad_banner.mtx",
                     "%%NotMatrixMarket matrix array real general\n2 2\n"
                     "1\n2\n3\n4\n");
  expect_parse_error("bad_format.mtx",
                     "%%MatrixMarket matrix coordinate complex general\n"
                     "2 2 1\n1 1 1.0\n");
  expect_parse_error("bad_symmetry.mtx",
                     "%%MatrixMarket matrix array real symmetric\n2 2\n"
                     "1\n2\n3\n4\n");
  expect_parse_error("missing_size.mtx",
                     "%%MatrixMarket matrix array real general\n");
  expect_parse_error("nonnumeric_dim.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "two 2 1\n1 1 1.0\n");
  expect_parse_error("negative_dim.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "-2 2 1\n1 1 1.0\n");
  expect_parse_error("trailing_tokens.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "2 2 1\n1 1 1.0 extra\n");
  expect_parse_error("too_few_entries.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "2 2 3\n1 1 1.0\n");
  expect_parse_error("too_many_entries.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "2 2 1\n1 1 1.0\n2 2 2.0\n");
  expect_parse_error("nonnumeric_value.mtx",
                     "%%MatrixMarket matrix coordinate real general\n"
                     "2 2 1\n1 1 xyz\n");
  expect_parse_error("short_array.mtx",
                     "%%MatrixMarket matrix array real general\n2 2\n"
                     "1\n2\n3\n");

  SUBCASE("out-of-bounds indices") {
    TempFile f("oob.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 1\n3 1 1.0\n");
    CHECK_THROWS_AS(read_matrix_market(f.path), OutOfBoundsError);
    TempFile g("zero_index.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 1\n0 1 1.0\n");
    try {
      read_matrix_market(g.path);
      FAIL_CHECK("expected OutOfBoundsError");
    } catch (const OutOfBoundsError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate entries carry the offending line") {
    TempFile f("dup.mtx",
               "%%MatrixMarket matrix coordinate real general\n"
               "2 2 3\n1 1 1.0\n2 2 2.0\n1 1 3.0\n");
    try {
      read_matrix_market(f.path);
      FAIL_CHECK("expected DuplicateEntryError");
    } catch (const DuplicateEntryError& e) {
      CHECK(e.line() > 0);
    }
  }
  CHECK_THROWS_AS(read_matrix_market("no_such_file_anywhere.mtx"), IoError);
}

TEST_CASE("dense CSV round trip and ragged rejection") {
  Rng rng(4);
  TempFile f("dense.csv");
  const Matrix m = gaussian_matrix(rng, 3, 5);
  write_dense_csv(f.path, m);
  CHECK((read_dense_csv(f.path) - m).norm() == 0.0);

  TempFile g("ragged.csv", "1,2,3\n4,5\n");
  try {
    read_dense_csv(g.path);
    FAIL_CHECK("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("parse_config empty text yields the documented defaults") {
  const RunConfig c = parse_config("");
  CHECK(c == RunConfig{});
  CHECK(c.solver.max_iters == 200);
  CHECK(c.solver.eps1 == 1e-6);
  CHECK(c.rho_auto);
  CHECK(c.algorithm == "lsgn");
}

TEST_CASE("parse_config accepts comments and blank lines") {
  const RunConfig c = parse_config(
      "# leading comment\n"
      "\n"
      "max_iters=50   # trailing comment\n"
      "algorithm=fsgn\n"
      "rho=auto\n");
  CHECK(c.solver.max_iters == 50);
  CHECK(c.algorithm == "fsgn");
  CHECK(c.rho_auto);
}

TEST_CASE("parse_config validation failures name the key") {
  try {
    parse_config("beta=1.5\n");
    FAIL_CHECK("expected ValidationError");
  } catch (const ValidationError& e) {
    CHECK(e.key() == "beta");
  }
  CHECK_THROWS_AS(parse_config("beta=0\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("max_iters=0\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("eps1=-1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("algorithm=unknown\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("no_such_key=1\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("max_iters=10\nmax_iters=20\n"),
                  ValidationError);
}

TEST_CASE("parse_config syntax failures carry the line number") {
  try {
    parse_config("max_iters=10\nthis is not a key-value line\n");
    FAIL_CHECK("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("serialize_config round trips a non-default configuration") {
  RunConfig c;
  c.solver.max_iters = 123;
  c.solver.eps1 = 1e-8;
  c.solver.beta = 0.5;
  c.solver.option = SolverConfig::WStep::gradient;
  c.solver.zero_residual_stop = true;
  c.solver.seed = 42;
  c.rho_auto = false;
  c.solver.rho = 2.5;
  c.algorithm = "gn_admm";
  c.generator = "mc_integer";
  c.m = 60;
  c.n = 80;
  c.r = 3;
  c.fraction = 0.4;
  c.sigma = 0.01;
  c.trace_out = "trace.csv";
  CHECK(parse_config(serialize_config(c)) == c);

  RunConfig d;  // defaults, rho=auto
  CHECK(parse_config(serialize_config(d)) == d);
}

TEST_CASE("read_config reads from disk and reports missing files") {
  TempFile f("run.cfg", "algorithm=adm\nmax_iters=7\n");
  const RunConfig c = read_config(f.path);
  CHECK(c.algorithm == "adm");
  CHECK(c.solver.max_iters == 7);
  CHECK_THROWS_AS(read_config("missing_config_file.cfg"), IoError);
}

TEST_CASE("write_trace emits to_csv verbatim") {
  IterationTrace trace;
  IterRecord rec;
  rec.k = 0;
  rec.objective = 1.5;
  rec.grad_norm = 0.25;
  rec.alpha = 1.0;
  trace.records.push_back(rec);
  trace.status = SolveStatus::converged;
  trace.rule = StopRule::cond1;
  TempFile f("trace.csv");
  write_trace(f.path, trace);
  std::ifstream in(f.path);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text == trace.to_csv());
}

}  // TEST_SUITE
