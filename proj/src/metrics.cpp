#include "regmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace regmix {

namespace {
double comb2(double x) { return 0.5 * x * (x - 1.0); }

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  std::map<int, int> fwd, bwd;
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto f = fwd.emplace(a[i], b[i]);
    if (!f.second && f.first->second != b[i]) return false;
    auto g = bwd.emplace(b[i], a[i]);
    if (!g.second && g.first->second != a[i]) return false;
  }
  return true;
}
}  // namespace

double adjusted_rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("adjusted_rand_index: need two labelings of equal length >= 2");
  std::map<std::pair<int, int>, double> cont;
  std::map<int, double> ra, rb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cont[{a[i], b[i]}] += 1.0;
    ra[a[i]] += 1.0;
    rb[b[i]] += 1.0;
  }
  double sum_ij = 0.0, sum_a = 0.0, sum_b = 0.0;
  for (const auto& kv : cont) sum_ij += comb2(kv.second);
  for (const auto& kv : ra) sum_a += comb2(kv.second);
  for (const auto& kv : rb) sum_b += comb2(kv.second);
  const double total = comb2(static_cast<double>(a.size()));
  const double expected = sum_a * sum_b / total;
  const double maximum = 0.5 * (sum_a + sum_b);
  if (maximum == expected) return same_partition(a, b) ? 1.0 : 0.0;
  return (sum_ij - expected) / (maximum - expected);
}

namespace {

struct BasisCell {
  int i, j;
  double flow;
};

// Transportation simplex over the complete bipartite graph. Nodes 0..K-1 are
// supplies, K..K+L-1 demands; the basis is a spanning tree of K+L-1 cells.
class TransportSimplex {
 public:
  TransportSimplex(const Eigen::MatrixXd& cost, Eigen::VectorXd a, Eigen::VectorXd b)
      : cost_(cost), k_(static_cast<int>(a.size())), l_(static_cast<int>(b.size())) {
    northwest_corner(a, b);
  }

  double solve() {
    const double scale = std::max(1.0, cost_.cwiseAbs().maxCoeff());
    const double eps = 1e-11 * scale;
    const long max_pivots = 1000L * (k_ + l_) + 10000L;
    const long bland_after = 50L * (k_ + l_) + 1000L;
    long degenerate_run = 0;

    for (long pivot = 0; pivot < max_pivots; ++pivot) {
      compute_potentials();
      int ei = -1, ej = -1;
      const bool bland = degenerate_run > bland_after;
      double best = -eps;
      for (int i = 0; i < k_ && (!bland || ei < 0); ++i) {
        for (int j = 0; j < l_; ++j) {
          const double rc = cost_(i, j) - u_[i] - v_[j];
          if (rc < best) {
            best = rc;
            ei = i;
            ej = j;
            if (bland) break;  // first eligible cell
          }
          if (bland && rc < -eps) {
            ei = i;
            ej = j;
            break;
          }
        }
      }
      if (ei < 0) return objective();
      degenerate_run = augment(ei, ej) ? degenerate_run + 1 : 0;
    }
    throw std::runtime_error("transport_min_cost: simplex failed to terminate");
  }

 private:
  void northwest_corner(Eigen::VectorXd a, Eigen::VectorXd b) {
    int i = 0, j = 0;
    basis_.reserve(static_cast<std::size_t>(k_ + l_ - 1));
    for (;;) {
      const double t = std::min(a[i], b[j]);
      basis_.push_back({i, j, t});
      a[i] -= t;
      b[j] -= t;
      if (i == k_ - 1 && j == l_ - 1) break;
      if ((a[i] <= b[j] && i < k_ - 1) || j == l_ - 1)
        ++i;
      else
        ++j;
    }
  }

  void compute_potentials() {
    const int nodes = k_ + l_;
    adj_.assign(static_cast<std::size_t>(nodes), {});
    for (std::size_t e = 0; e < basis_.size(); ++e) {
      adj_[static_cast<std::size_t>(basis_[e].i)].push_back(static_cast<int>(e));
      adj_[static_cast<std::size_t>(k_ + basis_[e].j)].push_back(static_cast<int>(e));
    }
    u_.assign(static_cast<std::size_t>(k_), 0.0);
    v_.assign(static_cast<std::size_t>(l_), 0.0);
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    std::vector<int> stack = {0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (int e : adj_[static_cast<std::size_t>(node)]) {
        const auto& cell = basis_[static_cast<std::size_t>(e)];
        const int other = node < k_ ? k_ + cell.j : cell.i;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        if (other >= k_)
          v_[static_cast<std::size_t>(other - k_)] =
              cost_(cell.i, cell.j) - u_[static_cast<std::size_t>(cell.i)];
        else
          u_[static_cast<std::size_t>(other)] =
              cost_(cell.i, cell.j) - v_[static_cast<std::size_t>(cell.j)];
        stack.push_back(other);
      }
    }
  }

  // Adds the entering cell, augments around the unique tree cycle, removes the
  // leaving cell. Returns true when the pivot was degenerate (theta == 0).
  bool augment(int ei, int ej) {
    // path from row node ei to col node k_+ej through the basis tree
    const int nodes = k_ + l_;
    std::vector<int> via_edge(static_cast<std::size_t>(nodes), -1);
    std::vector<int> prev(static_cast<std::size_t>(nodes), -1);
    std::vector<int> queue = {ei};
    std::vector<char> seen(static_cast<std::size_t>(nodes), 0);
    seen[static_cast<std::size_t>(ei)] = 1;
    for (std::size_t qh = 0; qh < queue.size(); ++qh) {
      const int node = queue[qh];
      if (node == k_ + ej) break;
      for (int e : adj_[static_cast<std::size_t>(node)]) {
        const auto& cell = basis_[static_cast<std::size_t>(e)];
        const int other = node < k_ ? k_ + cell.j : cell.i;
        if (seen[static_cast<std::size_t>(other)]) continue;
        seen[static_cast<std::size_t>(other)] = 1;
        via_edge[static_cast<std::size_t>(other)] = e;
        prev[static_cast<std::size_t>(other)] = node;
        queue.push_back(other);
      }
    }
    // walk back: cycle edges alternate -,+ starting from the one that closes
    // on the demand side (entering edge itself gets +theta)
    std::vector<int> path;  // edge indices from k_+ej back to ei
    for (int node = k_ + ej; node != ei; node = prev[static_cast<std::size_t>(node)])
      path.push_back(via_edge[static_cast<std::size_t>(node)]);

    double theta = std::numeric_limits<double>::infinity();
    int leaving = -1;
    for (std::size_t p = 0; p < path.size(); p += 2) {  // minus positions
      const double f = basis_[static_cast<std::size_t>(path[p])].flow;
      if (f < theta) {
        theta = f;
        leaving = path[p];
      }
    }
    for (std::size_t p = 0; p < path.size(); ++p) {
      basis_[static_cast<std::size_t>(path[p])].flow += (p % 2 == 0) ? -theta : theta;
    }
    basis_[static_cast<std::size_t>(leaving)] = {ei, ej, theta};
    return theta <= 0.0;
  }

  double objective() const {
    double acc = 0.0;
    for (const auto& c : basis_) acc += cost_(c.i, c.j) * c.flow;
    return acc;
  }

  const Eigen::MatrixXd& cost_;
  int k_, l_;
  std::vector<BasisCell> basis_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> u_, v_;
};

}  // namespace

double transport_min_cost(const Eigen::MatrixXd& cost, const Eigen::VectorXd& supply,
                          const Eigen::VectorXd& demand) {
  if (cost.rows() != supply.size() || cost.cols() != demand.size())
    throw std::invalid_argument("transport_min_cost: dimension mismatch");
  const double sa = supply.sum(), sb = demand.sum();
  if (std::abs(sa - sb) > 1e-9)
    throw std::invalid_argument("transport_min_cost: marginals differ by " +
                                std::to_string(sa - sb));
  if ((supply.array() <= 0.0).any() || (demand.array() <= 0.0).any())
    throw std::invalid_argument("transport_min_cost: marginals must be positive");
  // equalize the totals exactly so the simplex sees a balanced problem
  Eigen::VectorXd b = demand * (sa / sb);
  TransportSimplex simplex(cost, supply, b);
  return simplex.solve();
}

double wasserstein2(const DiscreteMeasure& p, const DiscreteMeasure& q) {
  if (p.dim() != q.dim())
    throw std::invalid_argument("wasserstein2: dimension mismatch");
  const auto kp = static_cast<Eigen::Index>(p.size());
  const auto kq = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXd cost(kp, kq);
  for (Eigen::Index i = 0; i < kp; ++i)
    for (Eigen::Index j = 0; j < kq; ++j)
      cost(i, j) =
          (p.atom(static_cast<std::size_t>(i)).beta - q.atom(static_cast<std::size_t>(j)).beta)
              .squaredNorm();
  const double opt = transport_min_cost(cost, p.weights(), q.weights());
  return std::sqrt(std::max(0.0, opt));
}

std::vector<int> match_atoms(const DiscreteMeasure& truth, const DiscreteMeasure& est) {
  if (truth.size() != est.size())
    throw std::invalid_argument("match_atoms: sizes differ");
  const int k = static_cast<int>(truth.size());
  Eigen::MatrixXd d2(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      d2(i, j) = (truth.atom(static_cast<std::size_t>(i)).beta -
                  est.atom(static_cast<std::size_t>(j)).beta)
                     .squaredNorm();
  std::vector<int> perm(static_cast<std::size_t>(k));
  std::iota(perm.begin(), perm.end(), 0);
  if (k <= 8) {
    std::vector<int> best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<int> cur = perm;
    std::sort(cur.begin(), cur.end());
    do {
      double c = 0.0;
      for (int i = 0; i < k; ++i) c += d2(i, cur[static_cast<std::size_t>(i)]);
      if (c < best_cost) {
        best_cost = c;
        best = cur;
      }
    } while (std::next_permutation(cur.begin(), cur.end()));
    return best;
  }
  // greedy nearest with pairwise-swap refinement for larger K
  std::vector<char> used(static_cast<std::size_t>(k), 0);
  for (int i = 0; i < k; ++i) {
    int arg = -1;
    for (int j = 0; j < k; ++j)
      if (!used[static_cast<std::size_t>(j)] &&
          (arg < 0 || d2(i, j) < d2(i, arg)))
        arg = j;
    perm[static_cast<std::size_t>(i)] = arg;
    used[static_cast<std::size_t>(arg)] = 1;
  }
  for (bool improved = true; improved;) {
    improved = false;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) {
        const double now = d2(i, perm[static_cast<std::size_t>(i)]) +
                           d2(j, perm[static_cast<std::size_t>(j)]);
        const double swapped = d2(i, perm[static_cast<std::size_t>(j)]) +
                               d2(j, perm[static_cast<std::size_t>(i)]);
        if (swapped + 1e-15 < now) {
          std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
          improved = true;
        }
      }
  }
  return perm;
}

namespace {
struct Moments {
  double mean = 0.0, sd = std::numeric_limits<double>::quiet_NaN();
};
Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double q = 0.0;
    for (double x : xs) q += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(q / (static_cast<double>(xs.size()) - 1.0));
  }
  return m;
}
std::string fmt(double x, int prec = 3) {
  if (std::isnan(x)) return "";
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(prec);
  os << x;
  return os.str();
}
std::string mean_sd(double mean, double sd) {
  std::string s = fmt(mean);
  if (!std::isnan(sd)) s += " (" + fmt(sd) + ")";
  return s;
}
}  // namespace

ExperimentSummary experiment_summary(const std::vector<ReplicationRecord>& runs,
                                     const DiscreteMeasure& truth) {
  if (runs.empty()) throw std::invalid_argument("experiment_summary: no runs");
  ExperimentSummary s;
  std::vector<double> ari, ario, w2, wall;
  const int k = static_cast<int>(truth.size());
  const int d = truth.dim();
  std::vector<std::vector<Eigen::VectorXd>> beta_err(static_cast<std::size_t>(k));
  std::vector<std::vector<double>> pi_err(static_cast<std::size_t>(k));
  int correct = 0, usable = 0;

  for (const auto& r : runs) {
    if (r.failed) {
      ++s.failures;
      continue;
    }
    ++usable;
    ari.push_back(r.ari);
    ario.push_back(r.ari_oracle);
    w2.push_back(r.w2);
    wall.push_back(r.wall_seconds);
    if (r.estimate && static_cast<int>(r.estimate->size()) == k) {
      ++correct;
      const auto perm = match_atoms(truth, *r.estimate);
      for (int j = 0; j < k; ++j) {
        const auto& est = r.estimate->atom(static_cast<std::size_t>(perm[static_cast<std::size_t>(j)]));
        beta_err[static_cast<std::size_t>(j)].push_back(
            est.beta - truth.atom(static_cast<std::size_t>(j)).beta);
        pi_err[static_cast<std::size_t>(j)].push_back(
            est.weight - truth.atom(static_cast<std::size_t>(j)).weight);
      }
    }
  }
  s.runs = static_cast<int>(runs.size());
  const Moments ma = moments(ari), mo = moments(ario), mw = moments(w2), mt = moments(wall);
  s.ari_mean = ma.mean;
  s.ari_sd = ma.sd;
  s.ari_oracle_mean = mo.mean;
  s.ari_oracle_sd = mo.sd;
  s.w2_mean = mw.mean;
  s.w2_sd = mw.sd;
  s.wall_mean = mt.mean;
  s.prop_true_components = usable > 0 ? static_cast<double>(correct) / usable : 0.0;

  for (int j = 0; j < k; ++j) {
    ComponentBias cb;
    cb.beta_bias = Eigen::VectorXd::Constant(d, std::numeric_limits<double>::quiet_NaN());
    cb.beta_sd = cb.beta_bias;
    const auto& errs = beta_err[static_cast<std::size_t>(j)];
    if (!errs.empty()) {
      for (int c = 0; c < d; ++c) {
        std::vector<double> coord;
        coord.reserve(errs.size());
        for (const auto& e : errs) coord.push_back(e[c]);
        const Moments m = moments(coord);
        cb.beta_bias[c] = m.mean;
        cb.beta_sd[c] = m.sd;
      }
      const Moments mp = moments(pi_err[static_cast<std::size_t>(j)]);
      cb.pi_bias = mp.mean;
      cb.pi_sd = mp.sd;
    }
    s.bias.push_back(std::move(cb));
  }
  return s;
}

std::string ExperimentSummary::to_text() const {
  std::ostringstream os;
  os << "runs: " << runs << " (failures: " << failures << ")\n"
     << "avg adjusted Rand index:        " << mean_sd(ari_mean, ari_sd) << "\n"
     << "avg adjusted Rand index, truth: " << mean_sd(ari_oracle_mean, ari_oracle_sd) << "\n"
     << "prop with true component count: " << fmt(prop_true_components) << "\n"
     << "avg W-2 distance:               " << mean_sd(w2_mean, w2_sd) << "\n"
     << "avg wall seconds:               " << fmt(wall_mean, 1) << "\n";
  for (std::size_t j = 0; j < bias.size(); ++j) {
    os << "component " << (j + 1) << ": beta bias (";
    for (Eigen::Index c = 0; c < bias[j].beta_bias.size(); ++c)
      os << (c ? ", " : "") << fmt(bias[j].beta_bias[c]);
    os << ") +- (";
    for (Eigen::Index c = 0; c < bias[j].beta_sd.size(); ++c)
      os << (c ? ", " : "") << fmt(bias[j].beta_sd[c]);
    os << "), pi bias " << fmt(bias[j].pi_bias) << " +- " << fmt(bias[j].pi_sd) << "\n";
  }
  return os.str();
}

std::string ExperimentSummary::to_csv() const {
  std::ostringstream os;
  os << "metric,mean,sd\n"
     << "ari," << fmt(ari_mean, 6) << "," << fmt(ari_sd, 6) << "\n"
     << "ari_truth," << fmt(ari_oracle_mean, 6) << "," << fmt(ari_oracle_sd, 6) << "\n"
     << "prop_true_components," << fmt(prop_true_components, 6) << ",\n"
     << "w2," << fmt(w2_mean, 6) << "," << fmt(w2_sd, 6) << "\n"
     << "wall_seconds," << fmt(wall_mean, 3) << ",\n";
  for (std::size_t j = 0; j < bias.size(); ++j) {
    for (Eigen::Index c = 0; c < bias[j].beta_bias.size(); ++c)
      os << "beta_bias_" << (j + 1) << "_" << (c + 1) << "," << fmt(bias[j].beta_bias[c], 6)
         << "," << fmt(bias[j].beta_sd[c], 6) << "\n";
    os << "pi_bias_" << (j + 1) << "," << fmt(bias[j].pi_bias, 6) << ","
       << fmt(bias[j].pi_sd, 6) << "\n";
  }
  return os.str();
}

}  // namespace regmix
