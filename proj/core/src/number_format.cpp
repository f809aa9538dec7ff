#include "wm/number_format.hpp"

#include <array>
#include <cerrno>
#include <charconv>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace wm {

std::string shortest(double x) {
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), end);
}

std::string fortran_real(double x) {
    if (x == 0.0) x = 0.0;  // drop the sign of -0
    std::array<char, 64> buf{};
    const double a = std::abs(x);
    if (x == 0.0 || !std::isfinite(x) || a < 0.1 || a >= 1e7) {
        std::snprintf(buf.data(), buf.size(), "%.7E", x);
        return buf.data();
    }
    int digits = a < 1.0 ? 0 : static_cast<int>(std::floor(std::log10(a))) + 1;
    std::snprintf(buf.data(), buf.size(), "%.*f", std::max(0, 7 - digits), x);
    // Rounding may carry into a new decade (9.9999999 -> 10.000000).
    const double rounded = std::abs(std::strtod(buf.data(), nullptr));
    if (rounded >= std::pow(10.0, digits)) {
        if (rounded >= 1e7) {
            std::snprintf(buf.data(), buf.size(), "%.7E", x);
            return buf.data();
        }
        ++digits;
        std::snprintf(buf.data(), buf.size(), "%.*f", std::max(0, 7 - digits), x);
    }
    return buf.data();
}

std::string fortran_complex(std::complex<double> z) {
    return "(" + fortran_real(z.real()) + "," + fortran_real(z.imag()) + ")";
}

bool parse_double_prefix(std::string_view text, double& out) {
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) return false;
    out = v;
    return true;
}

bool parse_int_prefix(std::string_view text, int& out) {
    const std::string s(text);
    char* end = nullptr;
    errno = 0;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str()) return false;
    if (errno == ERANGE || v > INT_MAX || v < INT_MIN) return false;
    out = static_cast<int>(v);
    return true;
}

}  // namespace wm
