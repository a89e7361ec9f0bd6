#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

namespace mastudy {

/// `digits` significant digits, never scientific notation, trailing zeros
/// stripped.
inline std::string significant(double value, int digits) {
    if (std::isnan(value)) return "NaN";
    if (std::isinf(value)) return value > 0 ? "Inf" : "-Inf";
    if (value == 0.0) return "0";
    int exponent = static_cast<int>(std::floor(std::log10(std::fabs(value))));
    int decimals = digits - 1 - exponent;
    // Rounding can carry into the next decade (9.999996 -> 10.0000).
    char probe[64];
    std::snprintf(probe, sizeof probe, "%.*e", digits - 1, value);
    const char* e = probe;
    while (*e && *e != 'e') ++e;
    if (*e) exponent = std::atoi(e + 1);
    decimals = digits - 1 - exponent;
    if (decimals < 0) {
        const double scale = std::pow(10.0, -decimals);
        value = std::round(value / scale) * scale;
        decimals = 0;
    }
    std::string out(static_cast<std::size_t>(std::snprintf(nullptr, 0, "%.*f", decimals, value)), '\0');
    std::snprintf(out.data(), out.size() + 1, "%.*f", decimals, value);
    if (out.find('.') != std::string::npos) {
        while (!out.empty() && out.back() == '0') out.pop_back();
        if (!out.empty() && out.back() == '.') out.pop_back();
    }
    if (out == "-0") out = "0";
    return out;
}

/// Six significant digits; every machine-readable statistic uses this.
inline std::string fmt6(double value) { return significant(value, 6); }

inline std::string fmt6(const std::optional<double>& value) { return value ? fmt6(*value) : std::string(); }

inline std::string fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
    std::string out = buf;
    // -0.000 is printed as in the source tables
    return out;
}

inline std::string percent(double fraction, int decimals = 3) { return fixed(fraction * 100.0, decimals) + "%"; }

/// * p<0.10, ** p<0.05, *** p<0.01
inline std::string stars(double p) {
    if (!(p >= 0.0)) return "";
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.10) return "*";
    return "";
}

} // namespace mastudy
