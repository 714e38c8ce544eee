#pragma once

#include "posnet/grid.hpp"

#include <string>
#include <vector>

namespace posnet {

/// Full-precision decimal form (17 significant digits, '.' separator).
std::string format_double(double v);

/// Trajectory snapshots, long form: t,edge,x,value (1-based edge).
void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<GridFunction>& states);

/// Spectral coefficient dump: edge,k,coeff (1-based edge).
void write_coefficients_csv(const std::string& path, const Matrix& coeffs);

/// Control samples with header t,u_1..u_n; rows must be uniformly spaced in
/// time starting at 0.
ControlSignal read_control_csv(const std::string& path, bool positive);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace posnet
