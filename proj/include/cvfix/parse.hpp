#pragma once

#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "cvfix/admissibility.hpp"
#include "cvfix/applications.hpp"
#include "cvfix/complex_order.hpp"
#include "cvfix/metrics.hpp"
#include "cvfix/simulation.hpp"

// String forms used by the CLI and JSON configs:
//
//   complex literal   "a+bi" / "a-bi"            e.g. "0+1i", "-1.5-2.25i"
//   metric            d1 | d2:k=<r> | d3
//                     | volterra:a=<r>,b=<r>,grid=<n>
//                     | periodic:a=<r>,grid=<n>,dim=<n>
//   simulation fn     xi1:lambda=<r> | xi2:psi=<cone>,phi=<cone> | xi3 | diff
//   cone map          identity | scale(<r>)
//   alpha map         one | upper_half | mod_le
//   complex map       identity | halfshift | double | conj | square
//                     | shift:c=<complex> | scale:c=<complex>
//                     | affine:a=<complex>,b=<complex>
//
// Every parser throws std::invalid_argument naming the offending text.

namespace cvfix {

namespace detail {

inline double parse_real(const std::string& text, const std::string& what) {
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    require(end != text.c_str() && *end == '\0', what + ": malformed number '" + text + "'");
    return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
    char* end = nullptr;
    long v = std::strtol(text.c_str(), &end, 10);
    require(end != text.c_str() && *end == '\0', what + ": malformed integer '" + text + "'");
    return static_cast<int>(v);
}

/// Splits "name:key=value,key=value" into the name and an argument map.
struct SpecString {
    std::string name;
    std::map<std::string, std::string> args;
};

inline SpecString split_spec(const std::string& text, const std::string& what) {
    SpecString out;
    std::string::size_type colon = text.find(':');
    out.name = text.substr(0, colon);
    require(!out.name.empty(), what + ": empty spec string");
    if (colon == std::string::npos) return out;
    std::string rest = text.substr(colon + 1);
    std::string::size_type pos = 0;
    while (pos < rest.size()) {
        std::string::size_type comma = rest.find(',', pos);
        std::string item = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
        std::string::size_type eq = item.find('=');
        require(eq != std::string::npos && eq > 0,
                what + ": expected key=value, got '" + item + "'");
        out.args[item.substr(0, eq)] = item.substr(eq + 1);
        pos = comma == std::string::npos ? rest.size() : comma + 1;
    }
    require(!out.args.empty(), what + ": empty argument list in '" + text + "'");
    return out;
}

inline std::string take_arg(SpecString& spec, const std::string& key,
                            const std::string& what) {
    auto it = spec.args.find(key);
    require(it != spec.args.end(), what + ": missing argument '" + key + "'");
    std::string v = it->second;
    spec.args.erase(it);
    return v;
}

inline void expect_no_args(const SpecString& spec, const std::string& what) {
    require(spec.args.empty(),
            what + ": unexpected argument '" +
                (spec.args.empty() ? "" : spec.args.begin()->first) + "'");
}

}  // namespace detail

/// Parses the literal form "a+bi" / "a-bi" with decimal components.
inline ComplexScalar parse_complex(const std::string& text) {
    const char* begin = text.c_str();
    char* mid = nullptr;
    double re = std::strtod(begin, &mid);
    detail::require(mid != begin && (*mid == '+' || *mid == '-'),
                    "complex literal: expected 'a+bi' form, got '" + text + "'");
    char* end = nullptr;
    double im = std::strtod(mid, &end);  // consumes the sign
    detail::require(end != mid && *end == 'i' && *(end + 1) == '\0',
                    "complex literal: expected 'a+bi' form, got '" + text + "'");
    return {re, im};
}

inline ComplexMetric parse_metric(const std::string& text) {
    detail::SpecString spec = detail::split_spec(text, "metric");
    if (spec.name == "d1") {
        detail::expect_no_args(spec, "metric d1");
        return ComplexMetric::d1();
    }
    if (spec.name == "d2") {
        double k = detail::parse_real(detail::take_arg(spec, "k", "metric d2"), "metric d2");
        detail::expect_no_args(spec, "metric d2");
        return ComplexMetric::d2(k);
    }
    if (spec.name == "d3") {
        detail::expect_no_args(spec, "metric d3");
        return ComplexMetric::d3();
    }
    if (spec.name == "volterra") {
        double a = detail::parse_real(detail::take_arg(spec, "a", "metric"), "metric");
        double b = detail::parse_real(detail::take_arg(spec, "b", "metric"), "metric");
        int grid = detail::parse_int(detail::take_arg(spec, "grid", "metric"), "metric");
        detail::expect_no_args(spec, "metric volterra");
        return volterra_metric(a, b, grid);
    }
    if (spec.name == "periodic") {
        double a = detail::parse_real(detail::take_arg(spec, "a", "metric"), "metric");
        int grid = detail::parse_int(detail::take_arg(spec, "grid", "metric"), "metric");
        int dim = detail::parse_int(detail::take_arg(spec, "dim", "metric"), "metric");
        detail::expect_no_args(spec, "metric periodic");
        return periodic_metric(a, grid, dim);
    }
    throw std::invalid_argument("metric: unknown kind '" + spec.name + "'");
}

inline ConeMap parse_cone_map(const std::string& text) {
    if (text == "identity") return ConeMap::identity();
    if (text.rfind("scale(", 0) == 0 && text.back() == ')')
        return ConeMap::scale(
            detail::parse_real(text.substr(6, text.size() - 7), "cone map scale"));
    throw std::invalid_argument("cone map: expected 'identity' or 'scale(c)', got '" +
                                text + "'");
}

inline SimulationFn parse_simulation(const std::string& text) {
    detail::SpecString spec = detail::split_spec(text, "simulation fn");
    if (spec.name == "xi1") {
        double lambda =
            detail::parse_real(detail::take_arg(spec, "lambda", "xi1"), "xi1");
        detail::expect_no_args(spec, "xi1");
        return SimulationFn::linear(lambda);
    }
    if (spec.name == "xi2") {
        ConeMap psi = parse_cone_map(detail::take_arg(spec, "psi", "xi2"));
        ConeMap phi = parse_cone_map(detail::take_arg(spec, "phi", "xi2"));
        detail::expect_no_args(spec, "xi2");
        return SimulationFn::psi_phi(psi, phi);
    }
    if (spec.name == "xi3") {
        detail::expect_no_args(spec, "xi3");
        return SimulationFn::imag_penalty();
    }
    if (spec.name == "diff") {
        detail::expect_no_args(spec, "diff");
        return SimulationFn::difference();
    }
    throw std::invalid_argument("simulation fn: unknown kind '" + spec.name + "'");
}

inline AlphaMap parse_alpha(const std::string& text) {
    if (text == "one") return AlphaMap::one();
    if (text == "upper_half") return AlphaMap::upper_half();
    if (text == "mod_le") return AlphaMap::modulus_ordered();
    throw std::invalid_argument("alpha map: unknown kind '" + text + "'");
}

inline ComplexMap parse_map(const std::string& text) {
    detail::SpecString spec = detail::split_spec(text, "map");
    if (spec.name == "identity") {
        detail::expect_no_args(spec, "map identity");
        return [](const ComplexScalar& z) { return z; };
    }
    if (spec.name == "halfshift") {
        detail::expect_no_args(spec, "map halfshift");
        return [](const ComplexScalar& z) {
            return (z + ComplexScalar{0.0, 1.0}) / 2.0;
        };
    }
    if (spec.name == "double") {
        detail::expect_no_args(spec, "map double");
        return [](const ComplexScalar& z) { return 2.0 * z; };
    }
    if (spec.name == "conj") {
        detail::expect_no_args(spec, "map conj");
        return [](const ComplexScalar& z) { return ComplexScalar{z.re, -z.im}; };
    }
    if (spec.name == "square") {
        detail::expect_no_args(spec, "map square");
        return [](const ComplexScalar& z) { return z * z; };
    }
    if (spec.name == "shift") {
        ComplexScalar c = parse_complex(detail::take_arg(spec, "c", "map shift"));
        detail::expect_no_args(spec, "map shift");
        return [c](const ComplexScalar& z) { return z + c; };
    }
    if (spec.name == "scale") {
        ComplexScalar c = parse_complex(detail::take_arg(spec, "c", "map scale"));
        detail::expect_no_args(spec, "map scale");
        return [c](const ComplexScalar& z) { return c * z; };
    }
    if (spec.name == "affine") {
        ComplexScalar a = parse_complex(detail::take_arg(spec, "a", "map affine"));
        ComplexScalar b = parse_complex(detail::take_arg(spec, "b", "map affine"));
        detail::expect_no_args(spec, "map affine");
        return [a, b](const ComplexScalar& z) { return a * z + b; };
    }
    throw std::invalid_argument("map: unknown kind '" + spec.name + "'");
}

inline ContractionVariant parse_variant(const std::string& text) {
    if (text == "plain") return ContractionVariant::plain;
    if (text == "m_type") return ContractionVariant::m_type;
    if (text == "n_type") return ContractionVariant::n_type;
    throw std::invalid_argument("contraction variant: unknown kind '" + text + "'");
}

}  // namespace cvfix
