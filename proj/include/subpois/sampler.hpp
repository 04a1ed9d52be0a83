#ifndef SUBPOIS_SAMPLER_HPP
#define SUBPOIS_SAMPLER_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "subpois/exact.hpp"
#include "subpois/kernels.hpp"

namespace subpois::sampler {

using kernels::Interval;
using kernels::KernelSpec;
using PairFn = std::function<double(double, double)>;

struct Box {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

// q with a compact support box; q vanishes off the box and on the diagonal.
struct PairFunctional {
  PairFn q;
  Box support;
  std::map<std::pair<int, int>, double> block_norms;
  double norm_1_inf = 0.0;
  double refined_norm_1_inf = 0.0;  // 256 x 256 audit
  int grid = 64;
};

// Sum over lattice blocks [k-1,k+1] x [l-1,l+1] meeting the support of the
// block maximum of |q|, searched on a grid x grid lattice per block.
double norm_1_inf(const PairFn& q, const Box& support, int grid = 64,
                  std::map<std::pair<int, int>, double>* blocks = nullptr);

PairFunctional make_pair_functional(PairFn q, const Box& support, int grid = 64);

// Declarative families.  Each returned functional is already restricted to
// its box and zero on the diagonal.
PairFunctional zero_functional();
PairFunctional box_functional(double value, const Box& support);
PairFunctional gaussian_bump_functional(double amplitude, double cx, double cy, double width,
                                        const Box& support);
// Bilinear interpolation of values[i][j] at (x_i, y_j) on a uniform grid over the box.
PairFunctional custom_grid_functional(std::vector<std::vector<double>> values, const Box& support);

// Sum over ordered pairs of distinct particles.
double additive_functional(const std::vector<double>& config, const PairFn& q);

struct SampleBatch {
  std::uint64_t seed = 0;
  std::string algorithm;
  std::string kernel;
  Interval window;
  int order = 0;
  specfun::QuadratureRule rule;
  std::vector<double> eigenvalues;
  std::vector<std::vector<int>> indices;
  std::vector<std::vector<double>> configurations;
};

// Discrete DPP on the Nystrom nodes.
SampleBatch sample(const exact::DiscretizedKernel& d, int count, std::uint64_t seed, int workers = 1);
SampleBatch sample(const KernelSpec& spec, const Interval& window, int order, int count,
                   std::uint64_t seed, int workers = 1);

struct McEstimate {
  double estimate = 1.0;
  double stderr_ = 0.0;
  int samples = 0;
};

McEstimate mc_exp_moment(const SampleBatch& batch, const PairFn& q, double lambda);

struct NaProbe {
  double lhs = 0.0;
  double rhs = 0.0;
  double stderr_ = 0.0;
  int samples = 0;
};

NaProbe negative_association_probe(const SampleBatch& batch, const Interval& c1, const Interval& c2,
                                   int cap);
NaProbe negative_association_probe(const KernelSpec& spec, const Interval& window, const Interval& c1,
                                   const Interval& c2, int cap, int samples, std::uint64_t seed,
                                   int order = 512);

int count_in(const std::vector<double>& config, const Interval& c);

}  // namespace subpois::sampler

#endif  // SUBPOIS_SAMPLER_HPP
