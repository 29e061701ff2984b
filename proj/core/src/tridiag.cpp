#include "airyproc/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "airyproc/random.hpp"

namespace airyproc {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxBisectionSteps = 2000;
constexpr int kMaxInverseIterations = 8;
// Eigenvalues closer than this fraction of the matrix scale are treated as a
// cluster and their eigenvectors are reorthogonalized.
constexpr double kClusterGap = 1e-3;
constexpr std::uint64_t kStartVectorSeed = 0x7e1d1a6e5eedULL;

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// LU factorization with partial pivoting of T - shift*I (LAPACK dgttrf layout).
class ShiftedLU {
 public:
  ShiftedLU(const TridiagSym& t, double shift) : m_(t.size()) {
    d_ = t.diag();
    for (double& x : d_) x -= shift;
    if (m_ > 1) {
      dl_ = t.offdiag();
      du_ = t.offdiag();
      du2_.assign(m_ > 2 ? m_ - 2 : 0, 0.0);
      swapped_.assign(m_ - 1, false);
    }
    for (std::size_t i = 0; i + 1 < m_; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != 0.0) {
          const double fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        } else {
          dl_[i] = 0.0;
        }
      } else {
        const double fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const double temp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = temp - fact * d_[i + 1];
        if (i + 2 < m_) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swapped_[i] = true;
      }
    }
    // Exactly singular pivots get a tiny perturbation; inverse iteration only
    // needs the direction of the solution.
    const double tiny = kEps * std::max(t.scale(), std::numeric_limits<double>::min());
    for (double& x : d_) {
      if (std::abs(x) < tiny) x = std::copysign(tiny, x == 0.0 ? 1.0 : x);
    }
  }

  void solve_in_place(std::vector<double>& b) const {
    for (std::size_t i = 0; i + 1 < m_; ++i) {
      if (!swapped_[i]) {
        b[i + 1] -= dl_[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl_[i] * b[i];
      }
    }
    b[m_ - 1] /= d_[m_ - 1];
    if (m_ > 1) b[m_ - 2] = (b[m_ - 2] - du_[m_ - 2] * b[m_ - 1]) / d_[m_ - 2];
    for (std::size_t r = m_ - 2; r-- > 0;) {
      b[r] = (b[r] - du_[r] * b[r + 1] - du2_[r] * b[r + 2]) / d_[r];
    }
  }

 private:
  std::size_t m_;
  std::vector<double> d_, dl_, du_, du2_;
  std::vector<bool> swapped_;
};

void orthogonalize(std::vector<double>& v, std::span<const std::vector<double>> basis) {
  for (const auto& u : basis) {
    const double c = dot(v, u);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * u[i];
  }
}

double residual_norm(const TridiagSym& t, std::span<const double> v, double lambda) {
  const auto tv = t.apply(v);
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double r = tv[i] - lambda * v[i];
    s += r * r;
  }
  return std::sqrt(s);
}

void fix_sign(std::vector<double>& v) {
  for (double x : v) {
    if (x == 0.0) continue;
    if (x < 0.0) {
      for (double& y : v) y = -y;
    }
    return;
  }
}

}  // namespace

TridiagSym::TridiagSym(std::vector<double> diag, std::vector<double> offdiag)
    : diag_(std::move(diag)), offdiag_(std::move(offdiag)) {
  if (diag_.empty()) throw std::invalid_argument("TridiagSym: dimension must be >= 1");
  if (offdiag_.size() + 1 != diag_.size()) {
    throw std::invalid_argument("TridiagSym: offdiag length must be diag length - 1");
  }
  const auto finite = [](double x) { return std::isfinite(x); };
  if (!std::all_of(diag_.begin(), diag_.end(), finite) ||
      !std::all_of(offdiag_.begin(), offdiag_.end(), finite)) {
    throw std::invalid_argument("TridiagSym: entries must be finite");
  }
  offdiag_sq_.resize(offdiag_.size());
  double max_sq = 1.0;
  for (std::size_t i = 0; i < offdiag_.size(); ++i) {
    offdiag_sq_[i] = offdiag_[i] * offdiag_[i];
    max_sq = std::max(max_sq, offdiag_sq_[i]);
  }
  pivmin_ = std::numeric_limits<double>::min() * max_sq;

  const std::size_t m = diag_.size();
  glo_ = std::numeric_limits<double>::infinity();
  ghi_ = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(offdiag_[i - 1]);
    if (i + 1 < m) radius += std::abs(offdiag_[i]);
    glo_ = std::min(glo_, diag_[i] - radius);
    ghi_ = std::max(ghi_, diag_[i] + radius);
  }
}

double TridiagSym::scale() const { return std::max(std::abs(glo_), std::abs(ghi_)); }

TridiagSym TridiagSym::principal(std::size_t first, std::size_t last) const {
  if (first >= last || last > size()) throw std::out_of_range("TridiagSym::principal");
  std::vector<double> d(diag_.begin() + static_cast<std::ptrdiff_t>(first),
                        diag_.begin() + static_cast<std::ptrdiff_t>(last));
  std::vector<double> e(offdiag_.begin() + static_cast<std::ptrdiff_t>(first),
                        offdiag_.begin() + static_cast<std::ptrdiff_t>(last - 1));
  return TridiagSym(std::move(d), std::move(e));
}

std::vector<double> TridiagSym::apply(std::span<const double> x) const {
  const std::size_t m = size();
  if (x.size() != m) throw std::invalid_argument("TridiagSym::apply: dimension mismatch");
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) {
    double s = diag_[i] * x[i];
    if (i > 0) s += offdiag_[i - 1] * x[i - 1];
    if (i + 1 < m) s += offdiag_[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

double default_tolerance(const TridiagSym& t) {
  return 1e-10 * std::max(t.scale(), std::numeric_limits<double>::min());
}

std::size_t sturm_count(const TridiagSym& t, double x) {
  const auto& d = t.diag_;
  const auto& e2 = t.offdiag_sq_;
  const double pivmin = t.pivmin_;
  std::size_t count = 0;
  double q = d[0] - x;
  // A vanishing pivot is nudged upward, which counts an eigenvalue equal to x
  // as not below it.
  if (std::abs(q) < pivmin) q = pivmin;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    q = (d[i] - x) - e2[i - 1] / q;
    if (std::abs(q) < pivmin) q = pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

EigenBrackets bracket_lowest(const TridiagSym& t, std::size_t k, double tol) {
  const std::size_t m = t.size();
  if (k == 0 || k > m) {
    throw std::invalid_argument("bracket_lowest: need 1 <= k <= m (k=" + std::to_string(k) +
                                ", m=" + std::to_string(m) + ")");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("bracket_lowest: tol must be positive");

  const double scale = std::max(t.scale(), std::numeric_limits<double>::min());
  const double slack = 4.0 * kEps * scale * static_cast<double>(m) + tol;
  const double lo = t.gershgorin_lower() - slack;
  double hi = t.gershgorin_upper() + slack;

  // Shrink the upper end to the first probe (growing geometrically from lo)
  // that has at least k eigenvalues below it.
  double step = std::max(tol, 1e-6 * scale);
  while (lo + step < hi) {
    if (sturm_count(t, lo + step) >= k) {
      hi = lo + step;
      break;
    }
    step *= 2.0;
  }

  std::vector<double> lower(k, lo);
  std::vector<double> upper(k, hi);
  int steps = 0;
  for (std::size_t j = 0; j < k; ++j) {
    double a = lower[j];
    double b = upper[j];
    while (b - a > tol) {
      const double mid = a + 0.5 * (b - a);
      if (mid <= a || mid >= b) break;  // bracket at machine resolution
      if (++steps > kMaxBisectionSteps * static_cast<int>(k)) {
        throw ConvergenceError("bracket_lowest: bisection failed to converge");
      }
      const std::size_t c = sturm_count(t, mid);
      if (c > j) {
        b = mid;
        for (std::size_t i = j + 1; i < std::min(c, k); ++i) upper[i] = std::min(upper[i], mid);
      } else {
        a = mid;
      }
      for (std::size_t i = std::max(c, j + 1); i < k; ++i) lower[i] = std::max(lower[i], mid);
    }
    if (!(a <= b)) throw ConvergenceError("bracket_lowest: invalid bracket (NaN input?)");
    lower[j] = a;
    upper[j] = b;
  }

  EigenBrackets out;
  out.lower = std::move(lower);
  out.upper = std::move(upper);
  out.values.resize(k);
  out.near_degenerate.assign(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    out.values[j] = 0.5 * (out.lower[j] + out.upper[j]);
    if (j > 0) {
      out.values[j] = std::max(out.values[j], out.values[j - 1]);
      if (out.values[j] - out.values[j - 1] < tol) {
        out.near_degenerate[j] = true;
        out.near_degenerate[j - 1] = true;
      }
    }
  }
  return out;
}

std::vector<double> lowest_eigenvalues(const TridiagSym& t, std::size_t k, double tol) {
  return bracket_lowest(t, k, tol).values;
}

std::vector<double> lowest_eigenvalues(const TridiagSym& t, std::size_t k) {
  return lowest_eigenvalues(t, k, default_tolerance(t));
}

SpectralPair eigenvector_for(const TridiagSym& t, double lambda, double tol,
                             std::span<const std::vector<double>> deflate) {
  const std::size_t m = t.size();
  if (!std::isfinite(lambda)) throw std::invalid_argument("eigenvector_for: lambda not finite");
  if (!(tol > 0.0)) throw std::invalid_argument("eigenvector_for: tol must be positive");
  SpectralPair pair;
  if (m == 1) {
    pair.eigenvalue = t.diag()[0];
    pair.eigenvector = {1.0};
    pair.first_entry = 1.0;
    pair.residual = 0.0;
    return pair;
  }

  const double scale = std::max(t.scale(), std::numeric_limits<double>::min());
  const double accept = 10.0 * tol + 1e3 * kEps * scale;

  std::vector<double> v(m);
  RngStream start(kStartVectorSeed, m);
  for (double& x : v) x = 2.0 * start.uniform() - 1.0;
  orthogonalize(v, deflate);
  double nv = norm2(v);
  for (double& x : v) x /= nv;

  const ShiftedLU lu(t, lambda);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < kMaxInverseIterations; ++it) {
    std::vector<double> y = v;
    lu.solve_in_place(y);
    orthogonalize(y, deflate);
    const double ny = norm2(y);
    if (!(ny > 0.0) || !std::isfinite(ny)) {
      throw ConvergenceError("eigenvector_for: inverse iteration broke down");
    }
    for (double& x : y) x /= ny;
    const double r = residual_norm(t, y, lambda);
    const bool improving = r < 0.5 * residual;
    v = std::move(y);
    residual = std::min(residual, r);
    if (r <= tol || (!improving && it >= 1)) break;
  }

  fix_sign(v);
  const double rq = rayleigh_quotient(t, v);
  pair.eigenvalue = std::abs(rq - lambda) <= tol ? rq : lambda;
  pair.residual = residual_norm(t, v, pair.eigenvalue);
  if (!(pair.residual <= accept)) {
    throw ConvergenceError("eigenvector_for: residual " + std::to_string(pair.residual) +
                           " exceeds " + std::to_string(accept) + " at lambda " +
                           std::to_string(lambda));
  }
  pair.first_entry = v[0];
  pair.eigenvector = std::move(v);
  return pair;
}

std::vector<SpectralPair> lowest_pairs(const TridiagSym& t, std::size_t k, double tol) {
  const auto brackets = bracket_lowest(t, k, tol);
  const double cluster = kClusterGap * t.scale();
  std::vector<SpectralPair> pairs;
  pairs.reserve(k);
  std::vector<std::vector<double>> cluster_vectors;
  for (std::size_t j = 0; j < k; ++j) {
    if (j == 0 || brackets.values[j] - brackets.values[j - 1] >= cluster) cluster_vectors.clear();
    // Inside a tight cluster a vector may not pin the bisection value to tol,
    // so the acceptance tolerance widens to the bracket width.
    const double width = std::max(tol, brackets.upper[j] - brackets.lower[j]);
    auto pair = eigenvector_for(t, brackets.values[j], width, cluster_vectors);
    pair.near_degenerate = brackets.near_degenerate[j];
    cluster_vectors.push_back(pair.eigenvector);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<SpectralPair> lowest_pairs(const TridiagSym& t, std::size_t k) {
  return lowest_pairs(t, k, default_tolerance(t));
}

double rayleigh_quotient(const TridiagSym& t, std::span<const double> v) {
  const double vv = dot(v, v);
  if (!(vv > 0.0)) throw std::invalid_argument("rayleigh_quotient: zero vector");
  const auto tv = t.apply(v);
  return dot(v, tv) / vv;
}

}  // namespace airyproc
