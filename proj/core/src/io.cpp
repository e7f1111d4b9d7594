#include "ste/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ste::io {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buf[40];
    if (value == std::floor(value) && std::abs(value) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", value);
        return buf;
    }
    // Shortest representation that round-trips.
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return buf;
}

void write_csv(const std::string& path, const std::string& header_json,
               const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    if (!header_json.empty()) out << "# " << header_json << "\n";
    out << "# ";
    for (std::size_t c = 0; c < columns.size(); ++c)
        out << (c ? "," : "") << columns[c];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            out << (c ? "," : "") << format_double(row[c]);
        out << "\n";
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

void dump_complex_matrix(const std::string& path, const Eigen::MatrixXcd& m) {
    nlohmann::json header{{"rows", m.rows()},
                          {"cols", m.cols()},
                          {"layout", "row-major"},
                          {"scalar", "complex128"}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_complex_matrix: cannot open " + path);
    out << header.dump() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double re = m(i, j).real(), im = m(i, j).imag();
            out.write(reinterpret_cast<const char*>(&re), sizeof(double));
            out.write(reinterpret_cast<const char*>(&im), sizeof(double));
        }
    if (!out) throw std::runtime_error("dump_complex_matrix: write failed for " + path);
}

Eigen::MatrixXcd load_complex_matrix(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_complex_matrix: cannot open " + path);
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    Eigen::MatrixXcd m(header.at("rows").get<Eigen::Index>(),
                       header.at("cols").get<Eigen::Index>());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double re, im;
            in.read(reinterpret_cast<char*>(&re), sizeof(double));
            in.read(reinterpret_cast<char*>(&im), sizeof(double));
            m(i, j) = {re, im};
        }
    if (!in) throw std::runtime_error("load_complex_matrix: truncated file " + path);
    return m;
}

void dump_real_matrix(const std::string& path, const Eigen::MatrixXd& m, double time) {
    nlohmann::json header{{"rows", m.rows()},
                          {"cols", m.cols()},
                          {"layout", "row-major"},
                          {"scalar", "float64"},
                          {"time", time}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("dump_real_matrix: cannot open " + path);
    out << header.dump() << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            out.write(reinterpret_cast<const char*>(&v), sizeof(double));
        }
    if (!out) throw std::runtime_error("dump_real_matrix: write failed for " + path);
}

Eigen::MatrixXd load_real_matrix(const std::string& path, double* time) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_real_matrix: cannot open " + path);
    std::string line;
    std::getline(in, line);
    const auto header = nlohmann::json::parse(line);
    if (time) *time = header.value("time", 0.0);
    Eigen::MatrixXd m(header.at("rows").get<Eigen::Index>(),
                      header.at("cols").get<Eigen::Index>());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            double v;
            in.read(reinterpret_cast<char*>(&v), sizeof(double));
            m(i, j) = v;
        }
    if (!in) throw std::runtime_error("load_real_matrix: truncated file " + path);
    return m;
}

}  // namespace ste::io
