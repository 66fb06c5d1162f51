#include "ergo/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

#include "ergo/io.hpp"

namespace ergo {

namespace {

// Grid-sample the indicator over its bounding box at a pitch chosen so the
// accepted count lands near n_target, then recenter on the bbox midpoint.
Eigen::MatrixXd grid_sample(double x0, double x1, double y0, double y1, double area, int n_target,
                            const std::function<bool(double, double)>& inside) {
  if (n_target < 1) throw std::invalid_argument("tool sampling: n_target must be >= 1");
  const double s = std::sqrt(area / static_cast<double>(n_target));
  const int nx = std::max(1, static_cast<int>(std::floor((x1 - x0) / s)));
  const int ny = std::max(1, static_cast<int>(std::floor((y1 - y0) / s)));
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<size_t>(nx) * ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      const double x = x0 + (i + 0.5) * (x1 - x0) / nx;
      const double y = y0 + (j + 0.5) * (y1 - y0) / ny;
      if (inside(x, y)) pts.emplace_back(x, y);
    }
  }
  if (pts.empty()) throw std::invalid_argument("tool sampling: shape produced no points");
  Eigen::MatrixXd out(pts.size(), 2);
  for (size_t i = 0; i < pts.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) =
        pts[i].transpose() - Eigen::RowVector2d(0.5 * (x0 + x1), 0.5 * (y0 + y1));
  return out;
}

Eigen::MatrixXd binary_mask(const Eigen::MatrixXd& raw) {
  const double thresh = 0.5 * raw.maxCoeff();
  return (raw.array() > thresh).cast<double>();
}

}  // namespace

Eigen::MatrixXd tool_disc(double radius, int n_target) {
  if (!(radius > 0.0)) throw std::invalid_argument("tool_disc: radius must be positive");
  const double r2 = radius * radius;
  return grid_sample(-radius, radius, -radius, radius, M_PI * r2, n_target,
                     [r2](double x, double y) { return x * x + y * y <= r2; });
}

Eigen::MatrixXd tool_bar(double length, int n_target) {
  if (!(length > 0.0)) throw std::invalid_argument("tool_bar: length must be positive");
  const double w = 0.3 * length;
  return grid_sample(-0.5 * length, 0.5 * length, -0.5 * w, 0.5 * w, length * w, n_target,
                     [](double, double) { return true; });
}

Eigen::MatrixXd tool_lshape(double arm, int n_target) {
  if (!(arm > 0.0)) throw std::invalid_argument("tool_lshape: arm must be positive");
  const double w = 0.35 * arm;
  const double area = w * (2.0 * arm - w);
  return grid_sample(0.0, arm, 0.0, arm, area, n_target,
                     [arm, w](double x, double y) { return y <= w || x <= w; });
}

Eigen::MatrixXd load_tool_csv(const std::string& path) {
  Eigen::MatrixXd pts = io::read_csv_matrix(path);
  if (pts.cols() != 2 || pts.rows() < 1)
    throw std::invalid_argument("load_tool_csv: expected rows of x,y");
  return pts;
}

double median_nn_spacing(const Eigen::MatrixXd& points) {
  const Eigen::Index n = points.rows();
  if (n < 2) throw std::invalid_argument("median_nn_spacing: need at least two points");
  std::vector<double> nn(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (points.row(i) - points.row(j)).squaredNorm());
    }
    nn[static_cast<size_t>(i)] = std::sqrt(best);
  }
  const size_t mid = nn.size() / 2;
  std::nth_element(nn.begin(), nn.begin() + mid, nn.end());
  return nn[mid];
}

namespace {

Eigen::MatrixXd mask_from_indicator(const SearchSpace& space, int cells,
                                    const std::function<bool(double, double)>& inside) {
  if (space.dims() != 2) throw std::invalid_argument("masks are 2-D");
  if (cells < 2) throw std::invalid_argument("mask: need at least 2 cells per side");
  Eigen::MatrixXd m(cells, cells);
  for (int r = 0; r < cells; ++r) {
    for (int c = 0; c < cells; ++c) {
      const double x = (c + 0.5) * space.lengths[0] / cells;
      const double y = (r + 0.5) * space.lengths[1] / cells;
      m(r, c) = inside(x, y) ? 1.0 : 0.0;
    }
  }
  if (m.sum() <= 0.0) throw std::invalid_argument("mask: shape covers no cells");
  return m;
}

}  // namespace

Eigen::MatrixXd mask_ring(const SearchSpace& space, int cells, double r_out_frac,
                          double r_in_frac) {
  if (!(r_out_frac > r_in_frac && r_in_frac >= 0.0))
    throw std::invalid_argument("mask_ring: need 0 <= r_in < r_out");
  const double L = space.min_length();
  const double cx = 0.5 * space.lengths[0], cy = 0.5 * space.lengths[1];
  const double ro2 = r_out_frac * L * r_out_frac * L, ri2 = r_in_frac * L * r_in_frac * L;
  return mask_from_indicator(space, cells, [=](double x, double y) {
    const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
    return d2 >= ri2 && d2 <= ro2;
  });
}

Eigen::MatrixXd mask_disc(const SearchSpace& space, int cells, double r_frac) {
  return mask_ring(space, cells, r_frac, 0.0);
}

Eigen::MatrixXd mask_bar(const SearchSpace& space, int cells, double len_frac, double wid_frac) {
  if (!(len_frac > 0.0 && wid_frac > 0.0)) throw std::invalid_argument("mask_bar: bad extents");
  const double hl = 0.5 * len_frac * space.lengths[0];
  const double hw = 0.5 * wid_frac * space.lengths[1];
  const double cx = 0.5 * space.lengths[0], cy = 0.5 * space.lengths[1];
  return mask_from_indicator(space, cells, [=](double x, double y) {
    return std::abs(x - cx) <= hl && std::abs(y - cy) <= hw;
  });
}

Eigen::MatrixXd load_mask(const std::string& path) {
  const bool pgm = path.size() >= 4 && path.compare(path.size() - 4, 4, ".pgm") == 0;
  if (pgm) {
    const Eigen::MatrixXd img = io::read_pgm(path);
    // Image rows run top-down; grid rows run bottom-up.
    return binary_mask(img.colwise().reverse());
  }
  Eigen::MatrixXd m = io::read_csv_matrix(path);
  if ((m.array() < 0.0).any()) throw std::invalid_argument("load_mask: negative cell values");
  return m;
}

Eigen::MatrixXd mask_cell_centers(const SearchSpace& space, const Eigen::MatrixXd& mask) {
  if (space.dims() != 2) throw std::invalid_argument("mask_cell_centers: 2-D only");
  const Eigen::Index ny = mask.rows(), nx = mask.cols();
  std::vector<Eigen::Vector2d> centers;
  for (Eigen::Index r = 0; r < ny; ++r) {
    for (Eigen::Index c = 0; c < nx; ++c) {
      if (mask(r, c) > 0.0)
        centers.emplace_back((c + 0.5) * space.lengths[0] / static_cast<double>(nx),
                             (r + 0.5) * space.lengths[1] / static_cast<double>(ny));
    }
  }
  if (centers.empty()) throw std::invalid_argument("mask_cell_centers: empty mask");
  Eigen::MatrixXd out(centers.size(), 2);
  for (size_t i = 0; i < centers.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = centers[i].transpose();
  return out;
}

}  // namespace ergo
