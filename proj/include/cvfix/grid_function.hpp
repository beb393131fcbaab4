#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "cvfix/complex_order.hpp"
#include "cvfix/rng.hpp"

namespace cvfix {

/// Uniform grid on [a, b]: `nodes` points, node i at a + i*(b-a)/(nodes-1),
/// with `dim` real components stored per node.
struct GridSpec {
    double a = 0.0;
    double b = 1.0;
    int nodes = 2;
    int dim = 1;

    double step() const { return (b - a) / static_cast<double>(nodes - 1); }

    double node(int i) const { return a + static_cast<double>(i) * step(); }

    void validate() const {
        detail::require(std::isfinite(a) && std::isfinite(b) && a < b,
                        "GridSpec: interval endpoints must be finite with a < b");
        detail::require(nodes >= 3, "GridSpec: nodes must be >= 3");
        detail::require(dim >= 1, "GridSpec: dim must be >= 1");
    }

    friend bool operator==(const GridSpec& x, const GridSpec& y) {
        return x.a == y.a && x.b == y.b && x.nodes == y.nodes && x.dim == y.dim;
    }
};

/// R^dim-valued function sampled on a uniform grid.  Values are stored
/// row-major (node-major) and are kept finite: any constructor or mutation
/// path that introduces NaN/Inf throws.
class GridFunction {
public:
    explicit GridFunction(GridSpec spec, double fill = 0.0)
        : spec_(spec), values_(static_cast<std::size_t>(spec.nodes) * spec.dim, fill) {
        spec_.validate();
        detail::require(std::isfinite(fill), "GridFunction: fill value must be finite");
    }

    GridFunction(GridSpec spec, std::vector<double> values)
        : spec_(spec), values_(std::move(values)) {
        spec_.validate();
        detail::require(
            values_.size() == static_cast<std::size_t>(spec_.nodes) * spec_.dim,
            "GridFunction: value count must equal nodes*dim");
        for (double v : values_)
            detail::require(std::isfinite(v), "GridFunction: values must be finite");
    }

    static GridFunction constant(GridSpec spec, double c) { return GridFunction(spec, c); }

    const GridSpec& spec() const { return spec_; }
    int nodes() const { return spec_.nodes; }
    int dim() const { return spec_.dim; }
    double step() const { return spec_.step(); }
    double node(int i) const { return spec_.node(i); }

    double at(int i, int c = 0) const {
        return values_[static_cast<std::size_t>(i) * spec_.dim + c];
    }
    double& at(int i, int c = 0) {
        return values_[static_cast<std::size_t>(i) * spec_.dim + c];
    }

    std::span<const double> node_values(int i) const {
        return {values_.data() + static_cast<std::size_t>(i) * spec_.dim,
                static_cast<std::size_t>(spec_.dim)};
    }
    std::span<double> node_values(int i) {
        return {values_.data() + static_cast<std::size_t>(i) * spec_.dim,
                static_cast<std::size_t>(spec_.dim)};
    }

    const std::vector<double>& values() const { return values_; }

    friend bool operator==(const GridFunction& u, const GridFunction& v) {
        return u.spec_ == v.spec_ && u.values_ == v.values_;
    }

private:
    GridSpec spec_;
    std::vector<double> values_;
};

inline bool same_grid(const GridFunction& u, const GridFunction& v) {
    return u.spec() == v.spec();
}

/// sup-norm of u - v: max over nodes of the max-abs component difference.
inline double sup_diff(const GridFunction& u, const GridFunction& v) {
    detail::require(same_grid(u, v), "sup_diff: grid mismatch");
    double m = 0.0;
    const std::vector<double>& a = u.values();
    const std::vector<double>& b = v.values();
    for (std::size_t k = 0; k < a.size(); ++k)
        m = std::max(m, std::fabs(a[k] - b[k]));
    return m;
}

inline double max_abs_component(const GridFunction& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::fabs(v));
    return m;
}

/// Random test function: low-order polynomial in the normalized coordinate
/// plus small per-node noise.  Used by the metric axiom checker on grid
/// domains; fully determined by the rng state.
inline GridFunction random_grid_function(SampleRng& rng, const GridSpec& spec,
                                         int degree = 3, double coeff_amp = 5.0,
                                         double noise_amp = 0.1) {
    spec.validate();
    GridFunction u(spec);
    std::vector<double> coeff(static_cast<std::size_t>(spec.dim) * (degree + 1));
    for (double& c : coeff) c = rng.uniform(-coeff_amp, coeff_amp);
    for (int i = 0; i < spec.nodes; ++i) {
        double s = (spec.node(i) - spec.a) / (spec.b - spec.a);
        for (int c = 0; c < spec.dim; ++c) {
            double acc = 0.0;
            double p = 1.0;
            for (int k = 0; k <= degree; ++k) {
                acc += coeff[static_cast<std::size_t>(c) * (degree + 1) + k] * p;
                p *= s;
            }
            u.at(i, c) = acc + rng.uniform(-noise_amp, noise_amp);
        }
    }
    return u;
}

/// CSV layout: header "t,u_1,...,u_n", one row per node, 17 significant digits.
inline void write_csv(std::ostream& os, const GridFunction& u) {
    os << "t";
    for (int c = 1; c <= u.dim(); ++c) os << ",u_" << c;
    os << "\n";
    for (int i = 0; i < u.nodes(); ++i) {
        os << detail::format_double(u.node(i));
        for (int c = 0; c < u.dim(); ++c) os << "," << detail::format_double(u.at(i, c));
        os << "\n";
    }
}

inline void write_csv(const std::string& path, const GridFunction& u) {
    std::ofstream os(path);
    detail::require(bool(os), "write_csv: cannot open " + path);
    write_csv(os, u);
}

/// Reads the layout produced by write_csv; grid geometry is reconstructed from
/// the first/last t values and the row count.
inline GridFunction read_csv(std::istream& is) {
    std::string line;
    detail::require(bool(std::getline(is, line)), "read_csv: missing header");
    int dim = static_cast<int>(std::count(line.begin(), line.end(), ','));
    detail::require(dim >= 1 && line.rfind("t,", 0) == 0, "read_csv: malformed header");

    std::vector<double> ts;
    std::vector<double> values;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        detail::require(bool(std::getline(row, cell, ',')), "read_csv: malformed row");
        ts.push_back(std::stod(cell));
        for (int c = 0; c < dim; ++c) {
            detail::require(bool(std::getline(row, cell, ',')), "read_csv: short row");
            values.push_back(std::stod(cell));
        }
    }
    detail::require(ts.size() >= 3, "read_csv: need at least 3 rows");
    GridSpec spec{ts.front(), ts.back(), static_cast<int>(ts.size()), dim};
    return GridFunction(spec, std::move(values));
}

inline GridFunction read_csv(const std::string& path) {
    std::ifstream is(path);
    detail::require(bool(is), "read_csv: cannot open " + path);
    return read_csv(is);
}

}  // namespace cvfix
