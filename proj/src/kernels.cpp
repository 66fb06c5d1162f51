#include "ergo/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "ergo/compensated.hpp"

namespace ergo::kernels {

PointTables build_tables(const BasisSet& basis, const Eigen::MatrixXd& pts, bool with_sin) {
  const int d = basis.space.dims();
  const int K = basis.modes_per_dim;
  const int P = static_cast<int>(pts.rows());
  if (pts.cols() != d) throw std::invalid_argument("build_tables: point dimension mismatch");

  PointTables t;
  t.n_points = P;
  t.modes_per_dim = K;
  t.has_sin = with_sin;
  t.cosT.resize(d);
  if (with_sin) t.sinT.resize(d);
  for (int i = 0; i < d; ++i) {
    t.cosT[i].resize(P, K);
    if (with_sin) t.sinT[i].resize(P, K);
  }

  for (int i = 0; i < d; ++i) {
    const double L = basis.space.lengths[i];
    Eigen::MatrixXd& C = t.cosT[i];
    Eigen::MatrixXd* S = with_sin ? &t.sinT[i] : nullptr;
#pragma omp parallel for schedule(static)
    for (int p = 0; p < P; ++p) {
      const double xi = std::min(std::max(pts(p, i), 0.0), L);
      const double th = M_PI * xi / L;
      const double c1 = std::cos(th);
      const double s1 = std::sin(th);
      C(p, 0) = 1.0;
      if (S) (*S)(p, 0) = 0.0;
      if (K > 1) {
        C(p, 1) = c1;
        if (S) (*S)(p, 1) = s1;
      }
      // Chebyshev-style angle addition: cos((k+1)t) = 2 cos t cos(kt) - cos((k-1)t).
      const double twoc = 2.0 * c1;
      for (int k = 2; k < K; ++k) {
        C(p, k) = twoc * C(p, k - 1) - C(p, k - 2);
        if (S) (*S)(p, k) = twoc * (*S)(p, k - 1) - (*S)(p, k - 2);
      }
    }
  }
  return t;
}

Eigen::VectorXd mode_values(const BasisSet& basis, const PointTables& tables, double scale) {
  const int d = basis.space.dims();
  const int M = basis.n_modes();
  const int P = tables.n_points;
  Eigen::VectorXd out(M);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    int k[3] = {0, 0, 0};
    for (int i = 0; i < d; ++i) k[i] = basis.indices(m, i);
    double acc = 0.0;
    for (int p = 0; p < P; ++p) {
      double v = tables.cosT[0](p, k[0]);
      for (int i = 1; i < d; ++i) v *= tables.cosT[i](p, k[i]);
      acc += v;
    }
    out[m] = scale * (acc / basis.normalizers[m]);
  }
  return out;
}

Eigen::VectorXd mode_values_weighted(const BasisSet& basis, const PointTables& tables,
                                     const Eigen::VectorXd& weights) {
  const int d = basis.space.dims();
  const int M = basis.n_modes();
  const int P = tables.n_points;
  if (weights.size() != P) throw std::invalid_argument("mode_values_weighted: weight count mismatch");
  Eigen::VectorXd out(M);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    int k[3] = {0, 0, 0};
    for (int i = 0; i < d; ++i) k[i] = basis.indices(m, i);
    CompensatedSum acc;
    for (int p = 0; p < P; ++p) {
      double v = tables.cosT[0](p, k[0]);
      for (int i = 1; i < d; ++i) v *= tables.cosT[i](p, k[i]);
      acc.add(weights[p] * v);
    }
    out[m] = acc.value() / basis.normalizers[m];
  }
  return out;
}

Eigen::MatrixXd mode_gradients(const BasisSet& basis, const PointTables& tables,
                               const PackedJacobians& jac, int state_dim, double scale) {
  const int d = basis.space.dims();
  const int M = basis.n_modes();
  const int P = tables.n_points;
  if (!tables.has_sin) throw std::invalid_argument("mode_gradients: tables built without sines");
  const int ndep = jac.n_dep();
  if (jac.blocks.rows() != static_cast<Eigen::Index>(P) * d || jac.blocks.cols() != ndep)
    throw std::invalid_argument("mode_gradients: jacobian block shape mismatch");
  if (ndep > 8) throw std::invalid_argument("mode_gradients: more than 8 dependent state dims");

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(M, state_dim);
#pragma omp parallel for schedule(static)
  for (int m = 0; m < M; ++m) {
    int k[3] = {0, 0, 0};
    double freq[3] = {0.0, 0.0, 0.0};
    for (int i = 0; i < d; ++i) {
      k[i] = basis.indices(m, i);
      freq[i] = k[i] * M_PI / basis.space.lengths[i];
    }
    double a[8];
    for (int c = 0; c < ndep; ++c) a[c] = 0.0;
    double cv[3], sv[3], g[3];
    for (int p = 0; p < P; ++p) {
      for (int i = 0; i < d; ++i) {
        cv[i] = tables.cosT[i](p, k[i]);
        sv[i] = tables.sinT[i](p, k[i]);
      }
      for (int i = 0; i < d; ++i) {
        double prod = 1.0;
        for (int j = 0; j < d; ++j)
          if (j != i) prod *= cv[j];
        g[i] = -freq[i] * sv[i] * prod;
      }
      const Eigen::Index r0 = static_cast<Eigen::Index>(p) * d;
      for (int c = 0; c < ndep; ++c) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += g[i] * jac.blocks(r0 + i, c);
        a[c] += s;
      }
    }
    for (int c = 0; c < ndep; ++c) A(m, jac.dep_dims[c]) = scale * (a[c] / basis.normalizers[m]);
  }
  return A;
}

}  // namespace ergo::kernels
