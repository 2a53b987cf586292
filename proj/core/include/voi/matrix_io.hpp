#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <string>

namespace voi {

/// Plain-text matrix: header "rows cols", then `rows` lines of `cols`
/// whitespace-separated decimals.
Eigen::MatrixXd read_matrix(std::istream& in);
Eigen::MatrixXd read_matrix_file(const std::filesystem::path& path);

/// Writes with 17 significant digits so values round-trip exactly.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
void write_matrix_file(const std::filesystem::path& path, const Eigen::MatrixXd& m);

/// Reads `rows` x `cols` numbers from `in`, row major.
Eigen::MatrixXd read_matrix_body(std::istream& in, Eigen::Index rows, Eigen::Index cols, const std::string& what);

}  // namespace voi
