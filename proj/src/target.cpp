#include "ergo/target.hpp"

#include <cmath>
#include <stdexcept>

#include "ergo/compensated.hpp"
#include "ergo/kernels.hpp"

namespace ergo {

GaussianMixture::GaussianMixture(std::vector<double> w, std::vector<Eigen::VectorXd> mu,
                                 std::vector<Eigen::MatrixXd> sigma)
    : weights(std::move(w)), means(std::move(mu)), covs(std::move(sigma)) {
  const size_t n = weights.size();
  if (n == 0 || means.size() != n || covs.size() != n)
    throw std::invalid_argument("GaussianMixture: component count mismatch");
  const int d = static_cast<int>(means[0].size());
  double wsum = 0.0;
  for (size_t j = 0; j < n; ++j) {
    if (weights[j] < 0.0) throw std::invalid_argument("GaussianMixture: negative weight");
    wsum += weights[j];
    if (means[j].size() != d || covs[j].rows() != d || covs[j].cols() != d)
      throw std::invalid_argument("GaussianMixture: dimension mismatch");
    Eigen::LLT<Eigen::MatrixXd> llt(covs[j]);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("GaussianMixture: covariance not positive definite");
    chol_.push_back(llt.matrixL());
    double det = 1.0;
    for (int i = 0; i < d; ++i) det *= chol_.back()(i, i);
    norm_.push_back(1.0 / (std::pow(2.0 * M_PI, 0.5 * d) * det));
  }
  if (std::abs(wsum - 1.0) > 1e-9) throw std::invalid_argument("GaussianMixture: weights must sum to 1");
}

double GaussianMixture::pdf(const Eigen::VectorXd& x) const {
  double p = 0.0;
  for (size_t j = 0; j < weights.size(); ++j) {
    Eigen::VectorXd z = chol_[j].triangularView<Eigen::Lower>().solve(x - means[j]);
    p += weights[j] * norm_[j] * std::exp(-0.5 * z.squaredNorm());
  }
  return p;
}

GridDensity::GridDensity(SearchSpace box, Eigen::MatrixXd cell_values)
    : space(std::move(box)), values(std::move(cell_values)) {
  if (space.dims() != 2) throw std::invalid_argument("GridDensity: 2-D only");
  if (values.rows() < 1 || values.cols() < 1) throw std::invalid_argument("GridDensity: empty grid");
  if ((values.array() < 0.0).any()) throw std::invalid_argument("GridDensity: negative cell value");
  const double cell_area =
      (space.lengths[0] / values.cols()) * (space.lengths[1] / values.rows());
  const double mass = values.sum() * cell_area;
  if (mass <= 0.0) throw std::invalid_argument("GridDensity: zero total mass");
  values /= mass;
}

double GridDensity::value_at(const Eigen::VectorXd& x) const {
  const int nx = static_cast<int>(values.cols());
  const int ny = static_cast<int>(values.rows());
  int c = static_cast<int>(std::floor(x[0] / space.lengths[0] * nx));
  int r = static_cast<int>(std::floor(x[1] / space.lengths[1] * ny));
  c = std::min(std::max(c, 0), nx - 1);
  r = std::min(std::max(r, 0), ny - 1);
  return values(r, c);
}

double target_density(const TargetDistribution& q, const Eigen::VectorXd& x) {
  if (const auto* g = std::get_if<GaussianMixture>(&q)) return g->pdf(x);
  return std::get<GridDensity>(q).value_at(x);
}

GridDensity uniform_density(const SearchSpace& space) {
  return GridDensity(space, Eigen::MatrixXd::Ones(1, 1));
}

Eigen::VectorXd target_coefficients(const BasisSet& basis, const TargetDistribution& q,
                                    int quad_cells_per_dim) {
  const int d = basis.space.dims();
  if (d != 2) throw std::invalid_argument("target_coefficients: 2-D only");
  if (quad_cells_per_dim < 2 * basis.modes_per_dim)
    throw std::invalid_argument("target_coefficients: quadrature grid under-resolved");

  const int n = quad_cells_per_dim;
  const double dx = basis.space.lengths[0] / n;
  const double dy = basis.space.lengths[1] / n;
  const double dA = dx * dy;
  const int M = basis.n_modes();
  const long total = static_cast<long>(n) * n;
  const int chunk = 1 << 16;

  std::vector<CompensatedSum> acc(M);
  CompensatedSum mass;
  Eigen::MatrixXd pts(chunk, 2);
  Eigen::VectorXd w(chunk);
  for (long start = 0; start < total; start += chunk) {
    const int count = static_cast<int>(std::min<long>(chunk, total - start));
#pragma omp parallel for schedule(static)
    for (int t = 0; t < count; ++t) {
      const long cell = start + t;
      const long i = cell / n;
      const long j = cell % n;
      pts(t, 0) = (i + 0.5) * dx;
      pts(t, 1) = (j + 0.5) * dy;
      w[t] = target_density(q, pts.row(t).transpose()) * dA;
    }
    for (int t = 0; t < count; ++t) mass.add(w[t]);
    auto tables = kernels::build_tables(basis, pts.topRows(count), false);
    Eigen::VectorXd partial = kernels::mode_values_weighted(basis, tables, w.head(count));
    for (int m = 0; m < M; ++m) acc[m].add(partial[m]);
  }

  const double total_mass = mass.value();
  if (!(total_mass > 0.0)) throw std::runtime_error("target_coefficients: non-positive mass");
  Eigen::VectorXd out(M);
  for (int m = 0; m < M; ++m) out[m] = acc[m].value() / total_mass;
  return out;
}

Eigen::MatrixXd sample_gmm(const GaussianMixture& q, const SearchSpace& space, int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("sample_gmm: n must be positive");
  const int d = q.dims();
  if (d != space.dims()) throw std::invalid_argument("sample_gmm: dimension mismatch");
  Eigen::MatrixXd out(n, d);
  std::vector<Eigen::MatrixXd> chol;
  for (const auto& cov : q.covs) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    chol.push_back(llt.matrixL());
  }
  for (int p = 0; p < n; ++p) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 1000)
        throw std::runtime_error("sample_gmm: rejection budget exhausted; mass far outside box");
      const double u = rng.uniform01();
      size_t j = 0;
      double cum = 0.0;
      for (; j < q.weights.size(); ++j) {
        cum += q.weights[j];
        if (u <= cum) break;
      }
      if (j == q.weights.size()) j = q.weights.size() - 1;
      Eigen::VectorXd x = q.means[j] + chol[j] * rng.normal_vector(d);
      if (space.contains(x)) {
        out.row(p) = x.transpose();
        break;
      }
    }
  }
  return out;
}

}  // namespace ergo
