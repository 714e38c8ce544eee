#include "posnet/csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace posnet {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_trajectory_csv(const std::string& path, const std::vector<double>& times,
                          const std::vector<GridFunction>& states) {
    if (times.size() != states.size()) {
        throw std::invalid_argument("write_trajectory_csv: time/state count mismatch");
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,edge,x,value\n";
    for (std::size_t s = 0; s < times.size(); ++s) {
        const GridFunction& g = states[s];
        const double dx = g.dx();
        for (int j = 0; j < g.edges; ++j) {
            for (int p = 0; p < g.points; ++p) {
                out << format_double(times[s]) << ',' << (j + 1) << ','
                    << format_double(p * dx) << ',' << format_double(g.values(j, p)) << '\n';
            }
        }
    }
}

void write_coefficients_csv(const std::string& path, const Matrix& coeffs) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "edge,k,coeff\n";
    for (Eigen::Index j = 0; j < coeffs.rows(); ++j) {
        for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
            out << (j + 1) << ',' << k << ',' << format_double(coeffs(j, k)) << '\n';
        }
    }
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) table.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ": non-numeric cell '" + cell + "'");
            }
        }
        if (row.size() != table.header.size()) {
            throw std::runtime_error(path + ": ragged row");
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

ControlSignal read_control_csv(const std::string& path, bool positive) {
    CsvTable table = read_csv(path);
    if (table.header.empty() || table.header.front() != "t") {
        throw std::runtime_error(path + ": first column must be t");
    }
    const int n = static_cast<int>(table.header.size()) - 1;
    if (n < 1) throw std::runtime_error(path + ": no control columns");
    if (table.rows.empty()) throw std::runtime_error(path + ": no samples");
    if (std::abs(table.rows.front()[0]) > 1e-12) {
        throw std::runtime_error(path + ": samples must start at t = 0");
    }
    ControlSignal u;
    u.positive = positive;
    if (table.rows.size() > 1) {
        u.dt = table.rows[1][0] - table.rows[0][0];
        if (u.dt <= 0.0) throw std::runtime_error(path + ": times must increase");
        for (std::size_t r = 1; r < table.rows.size(); ++r) {
            const double expected = static_cast<double>(r) * u.dt;
            if (std::abs(table.rows[r][0] - expected) > 1e-9 * std::max(1.0, expected)) {
                throw std::runtime_error(path + ": samples must be uniformly spaced");
            }
        }
    }
    for (const auto& row : table.rows) {
        Vector s(n);
        for (int i = 0; i < n; ++i) s(i) = row[static_cast<std::size_t>(i) + 1];
        u.samples.push_back(std::move(s));
    }
    u.validate();
    return u;
}

}  // namespace posnet
