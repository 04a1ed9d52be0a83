#include "subpois/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <Eigen/Dense>

#include "subpois/error.hpp"
#include "subpois/philox.hpp"

namespace subpois::sampler {

namespace {

bool inside(const Box& b, double x, double y) {
  return x >= b.x0 && x <= b.x1 && y >= b.y0 && y <= b.y1;
}

void check_box(const Box& b) {
  if (!(std::isfinite(b.x0) && std::isfinite(b.x1) && std::isfinite(b.y0) && std::isfinite(b.y1)))
    throw DomainError("pair functional: support must be bounded");
  if (!(b.x0 <= b.x1 && b.y0 <= b.y1)) throw DomainError("pair functional: empty support box");
}

double grid_point(double lo, double hi, int i, int grid) {
  if (grid == 1 || hi == lo) return lo;
  return lo + (hi - lo) * i / (grid - 1);
}

// Draws one configuration of the projection DPP spanned by the columns of v.
std::vector<int> project_chain(Eigen::MatrixXd v, PhiloxStream& rng) {
  const Eigen::Index n = v.rows();
  Eigen::Index cols = v.cols();
  std::vector<int> picked;
  picked.reserve(cols);
  while (cols > 0) {
    const Eigen::VectorXd p = v.leftCols(cols).rowwise().squaredNorm();
    const double total = p.sum();
    const double u = rng.uniform() * total;
    double acc = 0.0;
    Eigen::Index i = n - 1;
    for (Eigen::Index r = 0; r < n; ++r) {
      acc += p[r];
      if (u < acc) {
        i = r;
        break;
      }
    }
    while (p[i] == 0.0 && i > 0) --i;
    picked.push_back(static_cast<int>(i));
    if (cols == 1) break;
    Eigen::Index j;
    v.row(i).head(cols).cwiseAbs().maxCoeff(&j);
    v.col(j).swap(v.col(cols - 1));
    const Eigen::VectorXd pivot = v.col(cols - 1);
    const double piv = pivot[i];
    for (Eigen::Index l = 0; l < cols - 1; ++l) v.col(l) -= (v(i, l) / piv) * pivot;
    --cols;
    for (Eigen::Index l = 0; l < cols; ++l) {
      for (Eigen::Index k = 0; k < l; ++k) v.col(l) -= v.col(k).dot(v.col(l)) * v.col(k);
      const double nrm = v.col(l).norm();
      if (nrm > 0.0) v.col(l) /= nrm;
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

double norm_1_inf(const PairFn& q, const Box& support, int grid,
                  std::map<std::pair<int, int>, double>* blocks) {
  check_box(support);
  if (grid < 2) throw DomainError("norm_1_inf: grid must be at least 2");
  const int k0 = static_cast<int>(std::ceil(support.x0 - 1.0)), k1 = static_cast<int>(std::floor(support.x1 + 1.0));
  const int l0 = static_cast<int>(std::ceil(support.y0 - 1.0)), l1 = static_cast<int>(std::floor(support.y1 + 1.0));
  double total = 0.0;
  for (int k = k0; k <= k1; ++k) {
    const double xa = std::max(k - 1.0, support.x0), xb = std::min(k + 1.0, support.x1);
    if (xa > xb) continue;
    for (int l = l0; l <= l1; ++l) {
      const double ya = std::max(l - 1.0, support.y0), yb = std::min(l + 1.0, support.y1);
      if (ya > yb) continue;
      double m = 0.0;
      for (int i = 0; i < grid; ++i) {
        const double x = grid_point(xa, xb, i, grid);
        for (int j = 0; j < grid; ++j) {
          const double y = grid_point(ya, yb, j, grid);
          if (x == y) continue;
          m = std::max(m, std::abs(q(x, y)));
        }
      }
      if (!std::isfinite(m)) throw DomainError("norm_1_inf: q is not bounded on its support");
      if (blocks) (*blocks)[{k, l}] = m;
      total += m;
    }
  }
  return total;
}

PairFunctional make_pair_functional(PairFn q, const Box& support, int grid) {
  check_box(support);
  PairFunctional f;
  f.support = support;
  f.grid = grid;
  f.q = [q = std::move(q), support](double x, double y) {
    if (x == y || !inside(support, x, y)) return 0.0;
    return q(x, y);
  };
  f.norm_1_inf = norm_1_inf(f.q, support, grid, &f.block_norms);
  f.refined_norm_1_inf = norm_1_inf(f.q, support, 256);
  return f;
}

PairFunctional zero_functional() {
  return make_pair_functional([](double, double) { return 0.0; }, Box{0.0, 1.0, 0.0, 1.0});
}

PairFunctional box_functional(double value, const Box& support) {
  return make_pair_functional([value](double, double) { return value; }, support);
}

PairFunctional gaussian_bump_functional(double amplitude, double cx, double cy, double width,
                                        const Box& support) {
  if (!(width > 0.0)) throw DomainError("gaussian_bump: width must be positive");
  return make_pair_functional(
      [=](double x, double y) {
        const double dx = x - cx, dy = y - cy;
        return amplitude * std::exp(-(dx * dx + dy * dy) / (width * width));
      },
      support);
}

PairFunctional custom_grid_functional(std::vector<std::vector<double>> values, const Box& support) {
  const std::size_t nx = values.size();
  if (nx < 2) throw DomainError("custom_grid: need at least a 2 x 2 table");
  const std::size_t ny = values[0].size();
  if (ny < 2) throw DomainError("custom_grid: need at least a 2 x 2 table");
  for (const auto& row : values)
    if (row.size() != ny) throw DomainError("custom_grid: ragged table");
  if (!(support.x0 < support.x1 && support.y0 < support.y1))
    throw DomainError("custom_grid: support must have positive area");
  return make_pair_functional(
      [values = std::move(values), support, nx, ny](double x, double y) {
        const double fx = (x - support.x0) / (support.x1 - support.x0) * (nx - 1);
        const double fy = (y - support.y0) / (support.y1 - support.y0) * (ny - 1);
        const std::size_t i = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(fx))), nx - 2);
        const std::size_t j = std::min(static_cast<std::size_t>(std::max(0.0, std::floor(fy))), ny - 2);
        const double tx = fx - i, ty = fy - j;
        return (1 - tx) * (1 - ty) * values[i][j] + tx * (1 - ty) * values[i + 1][j] +
               (1 - tx) * ty * values[i][j + 1] + tx * ty * values[i + 1][j + 1];
      },
      support);
}

double additive_functional(const std::vector<double>& config, const PairFn& q) {
  double s = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = 0; j < config.size(); ++j)
      if (i != j) s += q(config[i], config[j]);
  return s;
}

SampleBatch sample(const exact::DiscretizedKernel& d, int count, std::uint64_t seed, int workers) {
  if (count < 0) throw DomainError("sample: count must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(d.as_matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("sample: eigensolver failed");
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  SampleBatch batch;
  batch.seed = seed;
  batch.algorithm = Philox4x32::kAlgorithm;
  batch.kernel = d.kernel;
  batch.window = d.window;
  batch.order = d.n;
  batch.rule = d.rule;
  std::vector<Eigen::Index> order_desc;
  for (Eigen::Index k = evals.size() - 1; k >= 0; --k) {
    const double lam = evals[k];
    if (lam < -1e-6 || lam > 1.0 + 1e-6)
      throw SpectrumRangeError("sample: eigenvalue outside [-1e-6, 1 + 1e-6]");
    batch.eigenvalues.push_back(std::clamp(lam, 0.0, 1.0));
    order_desc.push_back(k);
  }
  batch.indices.assign(count, {});
  batch.configurations.assign(count, {});
  auto work = [&](int begin, int end) {
    for (int c = begin; c < end; ++c) {
      PhiloxStream rng(seed, static_cast<std::uint64_t>(c));
      std::vector<Eigen::Index> chosen;
      for (std::size_t r = 0; r < order_desc.size(); ++r) {
        const double lam = batch.eigenvalues[r];
        if (lam <= 1e-16) break;
        if (rng.uniform() < lam) chosen.push_back(order_desc[r]);
      }
      Eigen::MatrixXd v(evecs.rows(), static_cast<Eigen::Index>(chosen.size()));
      for (std::size_t j = 0; j < chosen.size(); ++j) v.col(j) = evecs.col(chosen[j]);
      batch.indices[c] = project_chain(std::move(v), rng);
      for (int i : batch.indices[c]) batch.configurations[c].push_back(d.rule.nodes[i]);
    }
  };
  workers = std::max(1, workers);
  if (workers == 1 || count < 2) {
    work(0, count);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int b = w * chunk, e = std::min(count, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return batch;
}

SampleBatch sample(const KernelSpec& spec, const Interval& window, int order, int count,
                   std::uint64_t seed, int workers) {
  return sample(exact::discretize(spec, window, order), count, seed, workers);
}

McEstimate mc_exp_moment(const SampleBatch& batch, const PairFn& q, double lambda) {
  McEstimate out;
  const std::size_t n = batch.configurations.size();
  out.samples = static_cast<int>(n);
  if (n == 0) return out;
  std::vector<double> s(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = additive_functional(batch.configurations[i], q);
    worst = std::max(worst, std::abs(lambda * s[i]));
  }
  if (worst >= 500.0) throw NumericalError("mc_exp_moment: lambda * S_q too large (overflow guard)");
  double mean = 0.0;
  for (double v : s) mean += std::exp(lambda * v);
  mean /= n;
  double var = 0.0;
  for (double v : s) {
    const double d = std::exp(lambda * v) - mean;
    var += d * d;
  }
  out.estimate = mean;
  out.stderr_ = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  return out;
}

int count_in(const std::vector<double>& config, const Interval& c) {
  int k = 0;
  for (double x : config)
    if (x >= c.a && x < c.b) ++k;
  return k;
}

NaProbe negative_association_probe(const SampleBatch& batch, const Interval& c1, const Interval& c2,
                                   int cap) {
  if (c1.b > c2.a && c2.b > c1.a) throw DomainError("negative_association_probe: windows overlap");
  if (cap < 1) throw DomainError("negative_association_probe: cap must be positive");
  NaProbe out;
  const std::size_t n = batch.configurations.size();
  out.samples = static_cast<int>(n);
  if (n == 0) return out;
  std::vector<double> f1(n), f2(n);
  double m1 = 0.0, m2 = 0.0, m12 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    f1[i] = std::min(count_in(batch.configurations[i], c1), cap);
    f2[i] = std::min(count_in(batch.configurations[i], c2), cap);
    m1 += f1[i];
    m2 += f2[i];
    m12 += f1[i] * f2[i];
  }
  m1 /= n;
  m2 /= n;
  m12 /= n;
  out.lhs = m12;
  out.rhs = m1 * m2;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = (f1[i] - m1) * (f2[i] - m2) - (m12 - m1 * m2);
    var += g * g;
  }
  out.stderr_ = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
  return out;
}

NaProbe negative_association_probe(const KernelSpec& spec, const Interval& window, const Interval& c1,
                                   const Interval& c2, int cap, int samples, std::uint64_t seed,
                                   int order) {
  if (c1.a < window.a || c1.b > window.b || c2.a < window.a || c2.b > window.b)
    throw DomainError("negative_association_probe: windows must lie in the sampling window");
  return negative_association_probe(sample(spec, window, order, samples, seed), c1, c2, cap);
}

}  // namespace subpois::sampler
