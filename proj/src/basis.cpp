#include "ergo/basis.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace ergo {

BasisSet build_basis(const SearchSpace& space, int modes_per_dim) {
  if (modes_per_dim < 1) {
    throw std::invalid_argument("build_basis: modes_per_dim must be >= 1");
  }
  const int d = space.dims();
  int n_modes = 1;
  for (int i = 0; i < d; ++i) n_modes *= modes_per_dim;

  BasisSet basis{space, modes_per_dim, Eigen::MatrixXi(n_modes, d),
                 Eigen::VectorXd(n_modes), Eigen::VectorXd(n_modes)};

  Eigen::VectorXi k = Eigen::VectorXi::Zero(d);
  for (int m = 0; m < n_modes; ++m) {
    basis.indices.row(m) = k.transpose();

    double c = 1.0;
    double ksq = 0.0;
    for (int i = 0; i < d; ++i) {
      c *= (k[i] == 0) ? space.lengths[i] : space.lengths[i] / 2.0;
      ksq += static_cast<double>(k[i]) * k[i];
    }
    basis.normalizers[m] = std::sqrt(c);
    basis.weights[m] =
        (m == 0) ? 1.0 : std::pow(1.0 + ksq, -0.5 * (d + 1));

    // lexicographic increment, last dimension fastest
    for (int i = d - 1; i >= 0; --i) {
      if (++k[i] < modes_per_dim) break;
      k[i] = 0;
    }
  }
  return basis;
}

int mode_flat_index(const BasisSet& basis, const Eigen::VectorXi& k) {
  if (k.size() != basis.space.dims()) {
    throw std::invalid_argument("mode_flat_index: index dimensionality mismatch");
  }
  int flat = 0;
  for (Eigen::Index i = 0; i < k.size(); ++i) {
    if (k[i] < 0 || k[i] >= basis.modes_per_dim) {
      throw std::invalid_argument("mode_flat_index: index not in basis");
    }
    flat = flat * basis.modes_per_dim + k[i];
  }
  return flat;
}

double eval_basis(const BasisSet& basis, int mode, const Eigen::VectorXd& x) {
  if (mode < 0 || mode >= basis.n_modes()) {
    throw std::invalid_argument("eval_basis: mode out of range");
  }
  const int d = basis.space.dims();
  double v = 1.0;
  for (int i = 0; i < d; ++i) {
    const double xi = std::min(std::max(x[i], 0.0), basis.space.lengths[i]);
    v *= std::cos(basis.indices(mode, i) * M_PI * xi / basis.space.lengths[i]);
  }
  return v / basis.normalizers[mode];
}

double eval_basis(const BasisSet& basis, const Eigen::VectorXi& k, const Eigen::VectorXd& x) {
  return eval_basis(basis, mode_flat_index(basis, k), x);
}

Eigen::VectorXd eval_basis_grad(const BasisSet& basis, int mode, const Eigen::VectorXd& x) {
  if (mode < 0 || mode >= basis.n_modes()) {
    throw std::invalid_argument("eval_basis_grad: mode out of range");
  }
  const int d = basis.space.dims();
  Eigen::VectorXd cosv(d), sinv(d), freq(d);
  for (int i = 0; i < d; ++i) {
    const double xi = std::min(std::max(x[i], 0.0), basis.space.lengths[i]);
    freq[i] = basis.indices(mode, i) * M_PI / basis.space.lengths[i];
    cosv[i] = std::cos(freq[i] * xi);
    sinv[i] = std::sin(freq[i] * xi);
  }
  Eigen::VectorXd g(d);
  for (int i = 0; i < d; ++i) {
    double v = -freq[i] * sinv[i];
    for (int j = 0; j < d; ++j) {
      if (j != i) v *= cosv[j];
    }
    g[i] = v / basis.normalizers[mode];
  }
  return g;
}

Eigen::VectorXd eval_basis_grad(const BasisSet& basis, const Eigen::VectorXi& k,
                                const Eigen::VectorXd& x) {
  return eval_basis_grad(basis, mode_flat_index(basis, k), x);
}

void export_basis_csv(const BasisSet& basis, const Eigen::VectorXd& values,
                      const std::string& path) {
  if (values.size() != basis.n_modes()) {
    throw std::invalid_argument("export_basis_csv: value vector length mismatch");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_basis_csv: cannot open " + path);
  const int d = basis.space.dims();
  for (int i = 0; i < d; ++i) out << "k" << (i + 1) << ",";
  out << "h,lambda,value\n";
  out.precision(17);
  for (int m = 0; m < basis.n_modes(); ++m) {
    for (int i = 0; i < d; ++i) out << basis.indices(m, i) << ",";
    out << basis.normalizers[m] << "," << basis.weights[m] << "," << values[m] << "\n";
  }
}

}  // namespace ergo
