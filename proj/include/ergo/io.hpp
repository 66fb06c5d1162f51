#pragma once

#include <string>

#include <Eigen/Dense>

namespace ergo::io {

/// Portable graymap, P2 (ascii) or P5 (binary, 1 or 2 bytes per sample).
/// Rows are returned in file order; callers decide the row/axis convention.
Eigen::MatrixXd read_pgm(const std::string& path);

/// Comma-separated numeric matrix. A single leading non-numeric line is
/// treated as a header and skipped. All rows must have the same width.
Eigen::MatrixXd read_csv_matrix(const std::string& path);

/// Writes `header` (unless empty) then the matrix, 17 significant digits.
void write_csv_matrix(const std::string& path, const std::string& header, const Eigen::MatrixXd& m);

}  // namespace ergo::io
