#include "ergo/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ergo::io {

namespace {

// Next whitespace-separated token, skipping '#' comments to end of line.
std::string next_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return tok;
  }
  throw std::runtime_error("pgm: unexpected end of header");
}

}  // namespace

Eigen::MatrixXd read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string magic = next_token(in);
  if (magic != "P2" && magic != "P5") throw std::runtime_error("pgm: unsupported magic " + magic);
  const int w = std::stoi(next_token(in));
  const int h = std::stoi(next_token(in));
  const int maxval = std::stoi(next_token(in));
  if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) throw std::runtime_error("pgm: bad header");

  Eigen::MatrixXd m(h, w);
  if (magic == "P2") {
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) m(r, c) = std::stod(next_token(in));
  } else {
    in.get();  // single whitespace byte after maxval
    const int bytes = maxval > 255 ? 2 : 1;
    std::vector<unsigned char> buf(static_cast<size_t>(w) * h * bytes);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      throw std::runtime_error("pgm: truncated pixel data");
    size_t idx = 0;
    for (int r = 0; r < h; ++r)
      for (int c = 0; c < w; ++c) {
        unsigned v = buf[idx++];
        if (bytes == 2) v = (v << 8) | buf[idx++];
        m(r, c) = static_cast<double>(v);
      }
  }
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    bool ok = true;
    while (std::getline(ss, tok, ',')) {
      try {
        size_t used = 0;
        double v = std::stod(tok, &used);
        while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used]))) ++used;
        if (used != tok.size()) throw std::invalid_argument(tok);
        row.push_back(v);
      } catch (const std::exception&) {
        ok = false;
        break;
      }
    }
    if (!ok) {
      if (first) {
        first = false;
        continue;  // header line
      }
      throw std::runtime_error("csv: non-numeric row in " + path);
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error("csv: ragged rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv: no data rows in " + path);
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (size_t r = 0; r < rows.size(); ++r)
    for (size_t c = 0; c < rows[r].size(); ++c) m(r, c) = rows[r][c];
  return m;
}

void write_csv_matrix(const std::string& path, const std::string& header, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  if (!header.empty()) out << header << "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out << ",";
      out << m(r, c);
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("csv: write failed for " + path);
}

}  // namespace ergo::io
