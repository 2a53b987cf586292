#include "voi/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "voi/errors.hpp"

namespace voi {

Eigen::MatrixXd read_matrix_body(std::istream& in, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      double v;
      if (!(in >> v)) {
        throw ParseError("matrix " + what + ": expected " + std::to_string(rows * cols) + " values, stream ended at entry (" +
                         std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      if (!std::isfinite(v)) throw ParseError("matrix " + what + ": non-finite entry");
      m(i, j) = v;
    }
  }
  return m;
}

Eigen::MatrixXd read_matrix(std::istream& in) {
  long long rows = 0;
  long long cols = 0;
  if (!(in >> rows >> cols)) throw ParseError("matrix header: expected \"rows cols\"");
  if (rows < 1 || cols < 1) throw ParseError("matrix header: dimensions must be positive");
  Eigen::MatrixXd m = read_matrix_body(in, rows, cols, "body");
  std::string extra;
  if (in >> extra) throw ParseError("matrix: trailing data after " + std::to_string(rows * cols) + " values");
  return m;
}

Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << m.rows() << ' ' << m.cols() << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ' ';
      out << m(i, j);
    }
    out << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_matrix_file(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  write_matrix(out, m);
}

}  // namespace voi
