#pragma once

// Reference constructions written directly from the walk definition with
// dense matrices only. Nothing here calls into the library's walk code.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Mat = Eigen::MatrixXcd;
using cd = std::complex<double>;

inline Mat coin(double theta, double xi, double zeta) {
  const cd i(0.0, 1.0);
  Mat r(2, 2);
  r << std::exp(i * xi) * std::cos(theta), std::exp(i * zeta) * std::sin(theta),
      std::exp(-i * zeta) * std::sin(theta), -std::exp(-i * xi) * std::cos(theta);
  return r;
}

// U = S (I_N ⊗ R). Coin 0 moves x -> x-1, coin 1 moves x -> x+1.
inline Mat step(int n, double theta, double xi, double zeta) {
  const Mat r = coin(theta, xi, zeta);
  Mat u = Mat::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < 2; ++c)
      for (int c2 = 0; c2 < 2; ++c2) {
        const int x2 = c2 == 0 ? (x + n - 1) % n : (x + 1) % n;
        u(2 * x2 + c2, 2 * x + c) += r(c2, c);
      }
  return u;
}

inline Mat power(const Mat& u, long long t) {
  Mat base = t >= 0 ? u : Mat(u.adjoint());
  Mat out = Mat::Identity(u.rows(), u.cols());
  for (long long k = 0; k < std::llabs(t); ++k) out = base * out;
  return out;
}

inline Mat translation(int n, int y) {
  Mat t = Mat::Zero(2 * n, 2 * n);
  for (int x = 0; x < n; ++x)
    for (int c = 0; c < 2; ++c) t(2 * (((x + y) % n + n) % n) + c, 2 * x + c) = 1.0;
  return t;
}

// Flattened p(t_A, x_A, c_A, t_E, x_E, c_E).
inline std::vector<double> table_ir2(int n, int n_t, double theta, double xi, double zeta) {
  const Mat u = step(n, theta, xi, zeta);
  std::vector<Mat> fwd;
  std::vector<Mat> back;
  for (int t = 0; t < n_t; ++t) {
    fwd.push_back(power(u, t));
    back.push_back(power(u, -t));
  }
  const int dim = 2 * n;
  std::vector<double> p;
  for (int ta = 0; ta < n_t; ++ta)
    for (int a = 0; a < dim; ++a)
      for (int te = 0; te < n_t; ++te) {
        const Mat m = back[te] * fwd[ta];
        for (int e = 0; e < dim; ++e) p.push_back(std::norm(m(e, a)) / (dim * n_t * n_t));
      }
  return p;
}

// Flattened p(t_A, x_A, c_A, x_E, c_E).
inline std::vector<double> table_ir1(int n, int n_t, double theta, double xi, double zeta) {
  const Mat u = step(n, theta, xi, zeta);
  const int dim = 2 * n;
  std::vector<double> p;
  for (int ta = 0; ta < n_t; ++ta) {
    const Mat m = power(u, ta);
    for (int a = 0; a < dim; ++a)
      for (int e = 0; e < dim; ++e) p.push_back(std::norm(m(e, a)) / (dim * n_t));
  }
  return p;
}

inline double entropy(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p)
    if (v > 0.0) h -= v * std::log2(v);
  return h;
}

// Σ_k H(X_k) − H(X_1..X_m): the all-singles form of the mutual information.
inline double total_correlation(const std::vector<double>& p, const std::vector<int>& shape) {
  const int rank = static_cast<int>(shape.size());
  std::vector<std::vector<double>> singles(rank);
  for (int k = 0; k < rank; ++k) singles[k].assign(shape[k], 0.0);
  std::vector<int> idx(rank, 0);
  for (double v : p) {
    for (int k = 0; k < rank; ++k) singles[k][idx[k]] += v;
    for (int k = rank - 1; k >= 0; --k) {
      if (++idx[k] < shape[k]) break;
      idx[k] = 0;
    }
  }
  double h = -entropy(p);
  for (const auto& s : singles) h += entropy(s);
  return h;
}

inline double ir2_mi(int n, int n_t, double theta, double xi, double zeta) {
  return total_correlation(table_ir2(n, n_t, theta, xi, zeta), {n_t, n, 2, n_t, n, 2});
}

inline double ir1_mi(int n, int n_t, double theta, double xi, double zeta) {
  return total_correlation(table_ir1(n, n_t, theta, xi, zeta), {n_t, n, 2, n, 2});
}

// Per-state detection probabilities with a fixed public coin, written out as
// sums over Alice's and Eve's choices.
inline double detect_ir1(int n, int n_t, const Mat& u) {
  const int dim = 2 * n;
  double pass = 0.0;
  for (int t = 0; t < n_t; ++t) {
    const Mat m = power(u, t);
    for (int a = 0; a < dim; ++a)
      for (int e = 0; e < dim; ++e) {
        // Eve sees e, resends |e>; Bob undoes U^t and must find a.
        const Mat back = power(u, -t);
        pass += std::norm(m(e, a)) * std::norm(back(a, e));
      }
  }
  return 1.0 - pass / (dim * n_t);
}

inline double detect_ir2(int n, int n_t, const Mat& u) {
  const int dim = 2 * n;
  double pass = 0.0;
  for (int ta = 0; ta < n_t; ++ta)
    for (int te = 0; te < n_t; ++te) {
      const Mat eve_view = power(u, -te) * power(u, ta);
      const Mat bob_view = power(u, -ta) * power(u, te);
      for (int a = 0; a < dim; ++a)
        for (int e = 0; e < dim; ++e) pass += std::norm(eve_view(e, a)) * std::norm(bob_view(a, e));
    }
  return 1.0 - pass / (dim * n_t * n_t);
}

inline double detect_dos(int n, int n_t, const Mat& u) {
  const int dim = 2 * n;
  double pass = 0.0;
  for (int ta = 0; ta < n_t; ++ta)
    for (int te = 0; te < n_t; ++te) {
      const Mat m = power(u, -ta) * power(u, te);
      for (int a = 0; a < dim; ++a)
        for (int e = 0; e < dim; ++e) pass += std::norm(m(a, e)) / dim;
    }
  return 1.0 - pass / (dim * n_t * n_t);
}

}  // namespace oracle
