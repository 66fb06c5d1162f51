#pragma once

#include <string>

#include <Eigen/Dense>

#include "ergo/space.hpp"
#include "ergo/target.hpp"

namespace ergo {

/// Procedural 2-D tool point sets, sampled as the centers of a regular grid
/// restricted to the shape. `n_target` steers the grid pitch so the result
/// lands near that many points; `size` is the characteristic dimension in
/// meters (disc radius, bar length, L arm length). Points are centered on the
/// shape's own origin; subtract a pivot to get body-frame coordinates.
Eigen::MatrixXd tool_disc(double radius, int n_target);
Eigen::MatrixXd tool_bar(double length, int n_target);   // aspect 10:3
Eigen::MatrixXd tool_lshape(double arm, int n_target);   // two arms, width 0.35*arm

/// Point set from a CSV file with columns x,y (meters).
Eigen::MatrixXd load_tool_csv(const std::string& path);

/// Median nearest-neighbor distance of a point set; the natural "sample
/// spacing" for irregular sets and exactly the pitch for grid-sampled ones.
double median_nn_spacing(const Eigen::MatrixXd& points);

/// Occupancy masks over the search space, as cell grids for GridDensity.
/// Cells are 1 inside the shape and 0 outside; GridDensity renormalizes.
Eigen::MatrixXd mask_ring(const SearchSpace& space, int cells, double r_out_frac,
                          double r_in_frac);
Eigen::MatrixXd mask_disc(const SearchSpace& space, int cells, double r_frac);
Eigen::MatrixXd mask_bar(const SearchSpace& space, int cells, double len_frac, double wid_frac);

/// Mask from a file: PGM (nonzero = occupied, image rows scanned top-down are
/// mapped onto decreasing y) or CSV (row-major cell grid, row 0 at y = 0).
Eigen::MatrixXd load_mask(const std::string& path);

/// Centers of occupied cells of a mask laid over the space, one row per cell.
Eigen::MatrixXd mask_cell_centers(const SearchSpace& space, const Eigen::MatrixXd& mask);

}  // namespace ergo
