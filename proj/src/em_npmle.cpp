#include "regmix/em_npmle.hpp"

#include <chrono>
#include <cmath>
#include <new>
#include <vector>

#include "regmix/errors.hpp"
#include "regmix/parallel.hpp"

namespace regmix {

namespace {

constexpr Eigen::Index kObsBlock = 128;
// Largest n * node_count for which the shifted likelihood matrix is kept in
// memory across iterations (3e8 doubles = 2.4 GB).
constexpr std::int64_t kPhiCacheLimit = 300000000;

// Likelihood matrix rows for one observation block, shifted per row by its
// maximum so the largest entry is exactly 1: Phi_i = exp(log phi_i - M_i).
struct PhiBlock {
  Eigen::MatrixXd phi;    // block_size x node_count
  Eigen::VectorXd shift;  // M_i
};

PhiBlock compute_phi_block(const Dataset& data, const Eigen::MatrixXd& nodes,
                           Eigen::Index i0, Eigen::Index bs) {
  const double sigma = data.sigma();
  const double inv2s2 = 1.0 / (2.0 * sigma * sigma);
  const double log_norm = -std::log(sigma) - 0.5 * std::log(2.0 * M_PI);
  PhiBlock out;
  Eigen::MatrixXd r = data.xs().middleRows(i0, bs) * nodes.transpose();
  r.colwise() -= data.ys().segment(i0, bs);
  Eigen::ArrayXXd lp = -r.array().square() * inv2s2 + log_norm;
  out.shift = lp.rowwise().maxCoeff();
  out.phi = (lp.colwise() - out.shift.array()).exp();
  return out;
}

// One EM pass. Computes z_i = sum_node Phi_i g vol, the log-likelihood of g,
// and (unless loglik_only) the averaged posterior g'. The cache, when present,
// holds the Phi blocks in block order.
class Engine {
 public:
  Engine(const Dataset& data, const QuadratureGrid& grid)
      : data_(data), nodes_(grid.node_matrix()), vol_(grid.cell_volume()) {
    const std::int64_t entries =
        static_cast<std::int64_t>(data.n()) * grid.node_count();
    if (entries <= kPhiCacheLimit) {
      try {
        const std::int64_t blocks = (data.n() + kObsBlock - 1) / kObsBlock;
        cache_.resize(static_cast<std::size_t>(blocks));
        parallel_chunks(blocks, [&](int, std::int64_t b0, std::int64_t b1) {
          for (std::int64_t b = b0; b < b1; ++b) {
            const Eigen::Index i0 = b * kObsBlock;
            const Eigen::Index bs = std::min<Eigen::Index>(kObsBlock, data_.n() - i0);
            cache_[static_cast<std::size_t>(b)] = compute_phi_block(data_, nodes_, i0, bs);
          }
        });
      } catch (const std::bad_alloc&) {
        cache_.clear();  // fall back to streaming
        cache_.shrink_to_fit();
      }
    }
  }

  struct PassResult {
    Eigen::VectorXd next;  // empty when loglik_only
    double loglik = 0.0;
  };

  PassResult pass(const Eigen::VectorXd& g_values, bool loglik_only) {
    const Eigen::Index n = data_.n();
    const Eigen::Index m = nodes_.rows();
    const Eigen::VectorXd gv = g_values * vol_;
    const std::int64_t blocks = (n + kObsBlock - 1) / kObsBlock;
    const int chunks = chunk_count(blocks);
    std::vector<Eigen::VectorXd> acc(static_cast<std::size_t>(std::max(1, chunks)));
    std::vector<double> ll(static_cast<std::size_t>(std::max(1, chunks)), 0.0);

    parallel_chunks(blocks, [&](int chunk, std::int64_t b0, std::int64_t b1) {
      Eigen::VectorXd local = Eigen::VectorXd::Zero(loglik_only ? 0 : m);
      double lsum = 0.0, lcomp = 0.0;
      for (std::int64_t b = b0; b < b1; ++b) {
        const Eigen::Index i0 = b * kObsBlock;
        const Eigen::Index bs = std::min<Eigen::Index>(kObsBlock, n - i0);
        PhiBlock tmp;
        if (cache_.empty()) tmp = compute_phi_block(data_, nodes_, i0, bs);
        const PhiBlock& blk = cache_.empty() ? tmp : cache_[static_cast<std::size_t>(b)];
        Eigen::VectorXd z = blk.phi * gv;
        for (Eigen::Index k = 0; k < bs; ++k) {
          if (!(z[k] > 0.0))
            throw normalization_error(
                i0 + k, "em-npmle: posterior normalizer vanished for observation " +
                            std::to_string(i0 + k));
          const double y = (blk.shift[k] + std::log(z[k])) - lcomp;
          const double t = lsum + y;
          lcomp = (t - lsum) - y;
          lsum = t;
        }
        if (!loglik_only)
          local.noalias() += blk.phi.transpose() * z.cwiseInverse();
      }
      ll[static_cast<std::size_t>(chunk)] = lsum;
      if (!loglik_only) acc[static_cast<std::size_t>(chunk)] = std::move(local);
    });

    PassResult out;
    for (double v : ll) out.loglik += v;
    if (!loglik_only) {
      Eigen::VectorXd total = Eigen::VectorXd::Zero(m);
      for (auto& a : acc)
        if (a.size() > 0) total += a;
      out.next = g_values.array() * total.array() / static_cast<double>(n);
    }
    return out;
  }

 private:
  const Dataset& data_;
  Eigen::MatrixXd nodes_;
  double vol_;
  std::vector<PhiBlock> cache_;
};

double l2_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double vol) {
  return std::sqrt((a - b).squaredNorm() * vol);
}

}  // namespace

GridDensity posterior_density(const GridDensity& g, const Eigen::VectorXd& x, double y,
                              double sigma, std::int64_t observation) {
  Dataset one(x.transpose(), Eigen::VectorXd::Constant(1, y), sigma);
  Engine engine(one, g.grid());
  try {
    // the single-observation average is the posterior itself
    return GridDensity(g.grid(), engine.pass(g.values(), false).next);
  } catch (const normalization_error& e) {
    throw normalization_error(observation, e.what());
  }
}

GridDensity em_npmle_step(const GridDensity& g, const Dataset& data) {
  Engine engine(data, g.grid());
  return GridDensity(g.grid(), engine.pass(g.values(), false).next);
}

FitReport run_em_npmle(const Dataset& data, const GridDensity& init,
                       const NpmleOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  Engine engine(data, init.grid());
  const double vol = init.grid().cell_volume();

  FitReport report;
  Eigen::VectorXd current = init.values();
  bool converged = false;
  int iters = 0;
  for (; iters < opts.max_iter; ++iters) {
    auto res = engine.pass(current, false);
    report.loglik_trace.push_back(res.loglik);
    const double dist = l2_distance(res.next, current, vol);
    current = std::move(res.next);
    if (dist < opts.l2_tol) {
      converged = true;
      ++iters;
      break;
    }
  }
  report.loglik_trace.push_back(engine.pass(current, true).loglik);
  report.grid = GridDensity(init.grid(), std::move(current));
  report.iterations = iters;
  report.converged = converged;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace regmix
