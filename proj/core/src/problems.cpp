#include "gnlr/problems.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gnlr/io.hpp"
#include "gnlr/rng.hpp"

namespace gnlr {

namespace {

// Separate stream for the observation mask so factor draws do not shift it.
constexpr std::uint64_t kOmegaSeedSalt = 0x9e3779b97f4a7c15ULL;

Matrix random_orthonormal(Index rows, Index r, Rng& rng) {
  Matrix g(rows, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < rows; ++i) g(i, j) = rng.gaussian();
  }
  return qr_economy(g).first;
}

}  // namespace

McInstance gen_mc_integer(Index m, Index n, Index r, double fraction,
                          double sigma, std::uint64_t seed) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw ValidationError("fraction", "must be in (0, 1]");
  }
  if (sigma < 0.0) throw ValidationError("sigma", "must be >= 0");
  Rng rng(seed);
  McInstance inst;
  inst.noise_sigma = sigma;
  inst.ground_truth.u.resize(m, r);
  inst.ground_truth.v.resize(n, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < m; ++i) {
      inst.ground_truth.u(i, j) = static_cast<double>(rng.randint(1, 5));
    }
  }
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < n; ++i) {
      inst.ground_truth.v(i, j) = static_cast<double>(rng.randint(1, 5));
    }
  }
  inst.omega = sample_index_set(m, n, fraction, seed ^ kOmegaSeedSalt);
  const Matrix product =
      inst.ground_truth.u * inst.ground_truth.v.transpose();
  inst.b.resize(static_cast<Index>(inst.omega.size()));
  Index k = 0;
  for (const auto& [i, j] : inst.omega.entries()) {
    inst.b(k++) = product(i, j) + sigma * rng.gaussian();
  }
  return inst;
}

ClusteredInstance gen_lowrank_clustered(Index m, Index n, Index r,
                                        std::uint64_t seed) {
  if (r < 1 || r > std::min(m, n)) {
    throw ValidationError("r", "must satisfy 1 <= r <= min(m, n)");
  }
  Rng rng(seed);
  ClusteredInstance out;
  out.sigma.resize(r);
  for (Index i = 0; i < r; ++i) {
    out.sigma(i) = std::pow(static_cast<double>(i + 1), -0.01);
  }
  const Matrix qu = random_orthonormal(m, r, rng);
  const Matrix qv = random_orthonormal(n, r, rng);
  out.clean = qu * out.sigma.asDiagonal() * qv.transpose();

  // Sparse Gaussian perturbation on 5% of the entries, rescaled so the
  // noise carries exactly 10% of the clean Frobenius mass.
  Matrix noise = Matrix::Zero(m, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < m; ++i) {
      if (rng.uniform() < 0.05) noise(i, j) = rng.gaussian();
    }
  }
  const double noise_norm = noise.norm();
  if (noise_norm > 0.0) {
    noise *= 0.1 * out.clean.norm() / noise_norm;
  }
  out.b = out.clean + noise;
  return out;
}

SensingInstance gen_sensing(Index m, Index n, Index r, Index l,
                            const std::string& kind, double sigma,
                            std::uint64_t seed) {
  if (l < 1) throw ValidationError("l", "must be >= 1");
  if (kind != "dense_gaussian" && kind != "sparse_gaussian") {
    throw ValidationError("kind",
                          "expected dense_gaussian or sparse_gaussian");
  }
  Rng rng(seed);
  SensingInstance inst;
  inst.ground_truth.u.resize(m, r);
  inst.ground_truth.v.resize(n, r);
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < m; ++i) inst.ground_truth.u(i, j) = rng.gaussian();
  }
  for (Index j = 0; j < r; ++j) {
    for (Index i = 0; i < n; ++i) inst.ground_truth.v(i, j) = rng.gaussian();
  }

  LinearOperator op = LinearOperator::identity(1, 1);
  if (kind == "dense_gaussian") {
    const double scale = 1.0 / std::sqrt(static_cast<double>(l));
    Matrix a(l, m * n);
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index i = 0; i < l; ++i) a(i, j) = rng.gaussian() * scale;
    }
    op = LinearOperator::dense(std::move(a), m, n);
  } else {
    op = make_sparse_gaussian(m, n, l, 0.1, seed ^ kOmegaSeedSalt);
  }

  Vector b = op.apply(inst.ground_truth.u * inst.ground_truth.v.transpose());
  if (sigma > 0.0) {
    for (Index i = 0; i < b.size(); ++i) b(i) += sigma * rng.gaussian();
  }
  inst.problem.op = std::move(op);
  inst.problem.b = std::move(b);
  inst.problem.phi = least_squares();
  inst.problem.rank = r;
  inst.problem.m = m;
  inst.problem.n = n;
  inst.underdetermined = l < r * (m + n);
  return inst;
}

Metrics evaluate(const FactorPair& x, const McInstance& inst) {
  const Index count = static_cast<Index>(inst.omega.size());
  if (count < 1) throw ValidationError("omega", "must be nonempty");
  if (inst.b.size() != count) {
    throw DimensionMismatchError("evaluate: |b| != |omega|");
  }
  Vector recovered(count);
  Index k = 0;
  for (const auto& [i, j] : inst.omega.entries()) {
    recovered(k++) = x.u.row(i).dot(x.v.row(j));
  }
  Metrics out;
  const double b_norm = inst.b.norm();
  out.delta_f = b_norm > 0.0 ? (recovered - inst.b).norm() / b_norm
                             : (recovered - inst.b).norm();
  const double range = inst.b.maxCoeff() - inst.b.minCoeff();
  if (range > 0.0) {
    out.nmae = (recovered - inst.b).lpNorm<1>() /
               (range * static_cast<double>(count));
  }
  double floored = 0.0;
  for (Index i = 0; i < count; ++i) {
    floored += std::abs(std::floor(recovered(i)) - inst.b(i));
  }
  out.delta_x = floored / static_cast<double>(count);
  return out;
}

void save_mc_instance(const McInstance& inst, const std::string& prefix) {
  write_matrix_market(prefix + ".obs.mtx", inst.omega, inst.b);
  write_dense_csv(prefix + ".u.csv", inst.ground_truth.u);
  write_dense_csv(prefix + ".v.csv", inst.ground_truth.v);
  std::ofstream meta(prefix + ".meta");
  if (!meta) throw IoError("cannot open '" + prefix + ".meta' for writing");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", inst.noise_sigma);
  meta << "noise_sigma=" << buf << "\n";
  if (!meta) throw IoError("write failed for '" + prefix + ".meta'");
}

McInstance load_mc_instance(const std::string& prefix) {
  const MatrixMarketData obs = read_matrix_market(prefix + ".obs.mtx");
  if (obs.format != MatrixMarketData::Format::coordinate_real) {
    throw ParseError("expected coordinate real observations");
  }
  McInstance inst;
  inst.omega = obs.omega;
  inst.b = obs.values;
  inst.ground_truth.u = read_dense_csv(prefix + ".u.csv");
  inst.ground_truth.v = read_dense_csv(prefix + ".v.csv");
  std::ifstream meta(prefix + ".meta");
  if (!meta) throw IoError("cannot open '" + prefix + ".meta' for reading");
  std::string line;
  long lineno = 0;
  while (std::getline(meta, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    const std::string key = line.substr(0, eq);
    if (key == "noise_sigma") {
      std::istringstream ss(line.substr(eq + 1));
      if (!(ss >> inst.noise_sigma)) {
        throw ParseError("bad noise_sigma value", lineno);
      }
    } else {
      throw ParseError("unknown meta key '" + key + "'", lineno);
    }
  }
  return inst;
}

}  // namespace gnlr
