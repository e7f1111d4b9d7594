#ifndef STE_IO_HPP
#define STE_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ste::io {

// Shortest round-trippable decimal representation; keeps CSV output
// byte-identical across runs.
std::string format_double(double value);

// CSV with '#'-prefixed header lines: first the provenance JSON, then the
// column names. NaNs are written as "nan".
void write_csv(const std::string& path, const std::string& header_json,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows);

// Binary dumps: one JSON header line, then raw row-major data.
void dump_complex_matrix(const std::string& path, const Eigen::MatrixXcd& m);
Eigen::MatrixXcd load_complex_matrix(const std::string& path);
void dump_real_matrix(const std::string& path, const Eigen::MatrixXd& m, double time);
Eigen::MatrixXd load_real_matrix(const std::string& path, double* time = nullptr);

}  // namespace ste::io

#endif
