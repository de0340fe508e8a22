#include "heyde/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <random>
#include <sstream>

namespace heyde {

namespace {

void validate_grid(const GridSpec& grid) {
  if (grid.axis_values.empty()) {
    raise(ErrorCode::invalid_argument, "grid needs at least one axis");
  }
  for (const auto& axis : grid.axis_values) {
    if (axis.empty()) {
      raise(ErrorCode::invalid_argument, "grid axis has no values");
    }
    for (double v : axis) {
      if (!std::isfinite(v)) {
        raise(ErrorCode::invalid_argument, "grid axis has non-finite values");
      }
    }
  }
  if (grid.pair_mode == GridSpec::PairMode::random_subsample &&
      grid.subsample_count < 1) {
    raise(ErrorCode::invalid_argument, "grid subsample count must be >= 1");
  }
}

/* decode a mixed-radix index into a grid point */
Eigen::VectorXd grid_point(const GridSpec& grid, long index) {
  const int n = grid.dim();
  Eigen::VectorXd point(n);
  for (int axis = n - 1; axis >= 0; --axis) {
    const long size = static_cast<long>(grid.axis_values[axis].size());
    point(axis) = grid.axis_values[axis][static_cast<std::size_t>(index % size)];
    index /= size;
  }
  return point;
}

using PairResidual =
    std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

ResidualReport sup_over_grid(const GridSpec& grid, const std::string& equation,
                             const PairResidual& residual_at) {
  validate_grid(grid);
  ResidualReport report;
  report.equation = equation;
  report.sup_residual = -1.0;

  if (grid.pair_mode == GridSpec::PairMode::full_product) {
    const long points = grid.point_count();
    for (long iu = 0; iu < points; ++iu) {
      const Eigen::VectorXd u = grid_point(grid, iu);
      for (long iv = 0; iv < points; ++iv) {
        const Eigen::VectorXd v = grid_point(grid, iv);
        const double r = residual_at(u, v);
        ++report.points_evaluated;
        if (r > report.sup_residual) {
          report.sup_residual = r;
          report.argmax_u = u;
          report.argmax_v = v;
        }
      }
    }
  } else {
    std::mt19937_64 rng(grid.subsample_seed);
    const int n = grid.dim();
    Eigen::VectorXd u(n);
    Eigen::VectorXd v(n);
    for (long k = 0; k < grid.subsample_count; ++k) {
      for (int axis = 0; axis < n; ++axis) {
        std::uniform_int_distribution<std::size_t> pick(
            0, grid.axis_values[axis].size() - 1);
        u(axis) = grid.axis_values[axis][pick(rng)];
      }
      for (int axis = 0; axis < n; ++axis) {
        std::uniform_int_distribution<std::size_t> pick(
            0, grid.axis_values[axis].size() - 1);
        v(axis) = grid.axis_values[axis][pick(rng)];
      }
      const double r = residual_at(u, v);
      ++report.points_evaluated;
      if (r > report.sup_residual) {
        report.sup_residual = r;
        report.argmax_u = u;
        report.argmax_v = v;
      }
    }
  }
  return report;
}

void validate_triple(const ModelDistribution& mu1, const ModelDistribution& mu2,
                     const LinearOperator& alpha, int grid_dim) {
  if (mu1.dim() != alpha.dim() || mu2.dim() != alpha.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "distributions do not match the operator dimension");
  }
  if (grid_dim != alpha.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "grid dimension does not match the operator");
  }
}

}  // namespace

long GridSpec::point_count() const {
  long count = 1;
  for (const auto& axis : axis_values) {
    count *= static_cast<long>(axis.size());
  }
  return count;
}

GridSpec GridSpec::regular(int dim, double step, double max_extent,
                           std::uint64_t subsample_seed) {
  if (dim < 1) {
    raise(ErrorCode::invalid_argument, "grid dimension must be >= 1");
  }
  if (!(step > 0.0) || !(max_extent >= 0.0) || !std::isfinite(step) ||
      !std::isfinite(max_extent)) {
    raise(ErrorCode::invalid_argument,
          "grid step must be positive and the extent nonnegative");
  }
  std::vector<double> axis;
  for (long k = 0;; ++k) {
    const double v = -max_extent + static_cast<double>(k) * step;
    if (v > max_extent + 1e-12 * std::max(1.0, max_extent)) break;
    axis.push_back(v);
  }
  GridSpec grid;
  grid.axis_values.assign(static_cast<std::size_t>(dim), axis);
  grid.pair_mode = dim <= 2 ? PairMode::full_product
                            : PairMode::random_subsample;
  grid.subsample_count = 10000;
  grid.subsample_seed = subsample_seed;
  return grid;
}

GridSpec GridSpec::defaults(int dim, std::uint64_t subsample_seed) {
  return regular(dim, 0.5, 2.0, subsample_seed);
}

ResidualReport heyde_residual(const ModelDistribution& mu1,
                              const ModelDistribution& mu2,
                              const LinearOperator& alpha,
                              const GridSpec& grid) {
  validate_triple(mu1, mu2, alpha, grid.dim());
  const Eigen::MatrixXd adj = alpha.entries().transpose();
  const PairResidual at = [&](const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
    const Eigen::VectorXd av = adj * v;
    const std::complex<double> lhs =
        cf_eval(mu1, u + v) * cf_eval(mu2, u + av);
    const std::complex<double> rhs =
        cf_eval(mu1, u - v) * cf_eval(mu2, u - av);
    return std::abs(lhs - rhs);
  };
  return sup_over_grid(grid, "heyde", at);
}

ResidualReport sd_residual(const ModelDistribution& mu1,
                           const ModelDistribution& mu2,
                           const LinearOperator& alpha,
                           const GridSpec& grid) {
  validate_triple(mu1, mu2, alpha, grid.dim());
  const Eigen::MatrixXd adj = alpha.entries().transpose();
  const PairResidual at = [&](const Eigen::VectorXd& u,
                              const Eigen::VectorXd& v) {
    const Eigen::VectorXd av = adj * v;
    const std::complex<double> lhs =
        cf_eval(mu1, u + v) * cf_eval(mu2, u + av);
    const std::complex<double> rhs = cf_eval(mu1, u) * cf_eval(mu2, u) *
                                     cf_eval(mu1, v) * cf_eval(mu2, av);
    return std::abs(lhs - rhs);
  };
  return sup_over_grid(grid, "skitovich_darmois", at);
}

SymmetryTestReport mc_symmetry_test(
    const ModelDistribution& mu1, const ModelDistribution& mu2,
    const LinearOperator& alpha, long sample_count,
    const std::vector<std::pair<Eigen::VectorXd, Eigen::VectorXd>>& test_points,
    std::uint64_t seed) {
  if (mu1.dim() != alpha.dim() || mu2.dim() != alpha.dim()) {
    raise(ErrorCode::dimension_mismatch,
          "distributions do not match the operator dimension");
  }
  if (sample_count < 10000) {
    raise(ErrorCode::invalid_argument,
          "symmetry test needs at least 10^4 samples");
  }
  if (test_points.empty()) {
    raise(ErrorCode::invalid_argument, "symmetry test needs test points");
  }
  for (const auto& [u, v] : test_points) {
    if (u.size() != alpha.dim() || v.size() != alpha.dim()) {
      raise(ErrorCode::dimension_mismatch,
            "test point does not match the operator dimension");
    }
  }

  std::mt19937_64 master(seed);
  const std::uint64_t seed1 = master();
  const std::uint64_t seed2 = master();
  const std::uint64_t seed_boot = master();

  const std::vector<Eigen::VectorXd> xi1 = sample(mu1, sample_count, seed1);
  const std::vector<Eigen::VectorXd> xi2 = sample(mu2, sample_count, seed2);

  const std::size_t n_points = test_points.size();
  const std::size_t n = static_cast<std::size_t>(sample_count);

  /* per test point: z_i = e^{i(a+b)} - e^{i(a-b)} = 2 sin(b) (i cos a - sin a)
   * with a = <u, L1_i>, b = <v, L2_i>; the observed statistic is
   * max_t |sum_i z_i| / N and a sign flip of b flips z_i. */
  std::vector<std::vector<double>> zre(n_points), zim(n_points);
  for (std::size_t t = 0; t < n_points; ++t) {
    zre[t].resize(n);
    zim[t].resize(n);
  }
  const Eigen::MatrixXd& a_entries = alpha.entries();
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::VectorXd l1 = xi1[i] + xi2[i];
    const Eigen::VectorXd l2 = xi1[i] + a_entries * xi2[i];
    for (std::size_t t = 0; t < n_points; ++t) {
      const double a = test_points[t].first.dot(l1);
      const double b = test_points[t].second.dot(l2);
      const double s2 = 2.0 * std::sin(b);
      zre[t][i] = -s2 * std::sin(a);
      zim[t][i] = s2 * std::cos(a);
    }
  }

  SymmetryTestReport report;
  report.sample_count = sample_count;
  report.seed = seed;
  report.test_points = test_points;
  report.bootstrap_resamples = 200;
  report.bootstrap_percentile = 0.99;

  double statistic = 0.0;
  for (std::size_t t = 0; t < n_points; ++t) {
    double sr = 0.0, si = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sr += zre[t][i];
      si += zim[t][i];
    }
    statistic = std::max(statistic, std::hypot(sr, si) /
                                        static_cast<double>(sample_count));
  }
  report.statistic = statistic;

  std::mt19937_64 boot(seed_boot);
  std::vector<double> null_stats;
  null_stats.reserve(static_cast<std::size_t>(report.bootstrap_resamples));
  std::vector<double> signs(n);
  for (int r = 0; r < report.bootstrap_resamples; ++r) {
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i % 64 == 0) word = boot();
      signs[i] = (word >> (i % 64)) & 1u ? 1.0 : -1.0;
    }
    double stat_r = 0.0;
    for (std::size_t t = 0; t < n_points; ++t) {
      double sr = 0.0, si = 0.0;
      const double* re = zre[t].data();
      const double* im = zim[t].data();
      for (std::size_t i = 0; i < n; ++i) {
        sr += signs[i] * re[i];
        si += signs[i] * im[i];
      }
      stat_r = std::max(stat_r, std::hypot(sr, si) /
                                    static_cast<double>(sample_count));
    }
    null_stats.push_back(stat_r);
  }
  std::sort(null_stats.begin(), null_stats.end());
  const std::size_t idx = static_cast<std::size_t>(std::ceil(
                              report.bootstrap_percentile *
                              static_cast<double>(null_stats.size()))) -
                          1;
  report.threshold = null_stats[std::min(idx, null_stats.size() - 1)];
  report.rejected = report.statistic > report.threshold;
  return report;
}

double finite_difference(const ScalarField& field, const Eigen::VectorXd& h,
                         int order, const Eigen::VectorXd& y) {
  if (order < 0) {
    raise(ErrorCode::invalid_argument, "difference order must be >= 0");
  }
  if (h.size() != y.size()) {
    raise(ErrorCode::dimension_mismatch,
          "step and base point have different dimensions");
  }
  /* binomial row computed once; order stays small in practice */
  std::vector<double> binom(static_cast<std::size_t>(order) + 1, 1.0);
  for (int k = 1; k <= order; ++k) {
    binom[static_cast<std::size_t>(k)] =
        binom[static_cast<std::size_t>(k - 1)] *
        static_cast<double>(order - k + 1) / static_cast<double>(k);
  }
  double acc = 0.0;
  for (int k = 0; k <= order; ++k) {
    const double sign = ((order - k) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binom[static_cast<std::size_t>(k)] *
           field(y + static_cast<double>(k) * h);
  }
  return acc;
}

DegreeProbeResult degree_probe(const ScalarField& field, int ambient_dim,
                               double region_radius, int max_degree,
                               int trial_count, std::uint64_t seed,
                               const Subspace* restrict_to) {
  if (ambient_dim < 1) {
    raise(ErrorCode::invalid_argument, "probe needs ambient dimension >= 1");
  }
  if (!(region_radius > 0.0) || max_degree < 0 || trial_count < 1) {
    raise(ErrorCode::invalid_argument,
          "probe needs positive radius, max_degree >= 0, trials >= 1");
  }
  if (restrict_to && restrict_to->ambient_dim() != ambient_dim) {
    raise(ErrorCode::dimension_mismatch,
          "restriction subspace does not match the ambient dimension");
  }

  const int k = restrict_to ? restrict_to->dim() : ambient_dim;
  if (k == 0) {
    /* restricted to the zero subspace every field is constant */
    field(Eigen::VectorXd::Zero(ambient_dim));
    return DegreeProbeResult{true, 0};
  }

  double max_abs = 0.0;
  const ScalarField tracked = [&](const Eigen::VectorXd& y) {
    const double v = field(y);
    max_abs = std::max(max_abs, std::abs(v));
    return v;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-region_radius, region_radius);
  const auto draw_in_ball = [&](bool nonzero) {
    Eigen::VectorXd c(k);
    for (;;) {
      for (int i = 0; i < k; ++i) c(i) = coord(rng);
      if (c.norm() > region_radius) continue;
      if (nonzero && c.norm() < 1e-8 * region_radius) continue;
      return c;
    }
  };
  const auto embed = [&](const Eigen::VectorXd& c) {
    return restrict_to ? Eigen::VectorXd(restrict_to->basis() * c) : c;
  };

  for (int m = 0; m <= max_degree; ++m) {
    bool vanished = true;
    for (int trial = 0; trial < trial_count; ++trial) {
      const Eigen::VectorXd y = embed(draw_in_ball(false));
      const Eigen::VectorXd h = embed(draw_in_ball(true));
      const double delta = finite_difference(tracked, h, m + 1, y);
      if (std::abs(delta) > 1e-8 * std::max(1.0, max_abs)) {
        vanished = false;
        break;
      }
    }
    if (vanished) return DegreeProbeResult{true, m};
  }
  return DegreeProbeResult{false, -1};
}

double log_symmetrized_cf(const ModelDistribution& mu,
                          const Eigen::VectorXd& y) {
  return log_symmetrized_cf_field(mu)(y);
}

ScalarField log_symmetrized_cf_field(const ModelDistribution& mu) {
  auto sym = std::make_shared<ModelDistribution>(symmetrize(mu));
  return [sym](const Eigen::VectorXd& y) {
    const double value = cf_eval(*sym, y).real();
    if (value <= kCfFloor) {
      std::ostringstream msg;
      msg << "symmetrized characteristic function too small (" << value
          << ") for a stable logarithm";
      raise(ErrorCode::domain_error, msg.str());
    }
    return std::log(value);
  };
}

}  // namespace heyde
