#include "grid_spec.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string>

#include "wm/errors.hpp"
#include "wm/reflection.hpp"

namespace wm {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    for (;;) {
        const auto pos = s.find(sep);
        parts.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return parts;
}

template <typename T>
T number(std::string_view text, std::string_view spec) {
    T value{};
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
        throw DomainError("bad number '" + std::string(text) + "' in grid spec '" + std::string(spec) + "'");
    return value;
}

}  // namespace

std::vector<double> parse_angle_spec(std::string_view spec) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw DomainError("angle grid must be MIN:MAX:STEP, got '" + std::string(spec) + "'");
    return angle_grid(number<double>(p[0], spec), number<double>(p[1], spec), number<double>(p[2], spec));
}

std::vector<double> parse_eta_spec(std::string_view spec) {
    const auto p = split(spec, ':');
    if (p.size() != 4) throw DomainError("eta grid must be log|lin:MIN:MAX:N, got '" + std::string(spec) + "'");
    std::string kind(p[0]);
    std::transform(kind.begin(), kind.end(), kind.begin(), [](unsigned char c) { return std::tolower(c); });
    const double lo = number<double>(p[1], spec);
    const double hi = number<double>(p[2], spec);
    const auto count = number<std::size_t>(p[3], spec);
    if (kind == "log") return log_grid(lo, hi, count);
    if (kind == "lin") return linear_grid(lo, hi, count);
    throw DomainError("eta grid kind must be log or lin, got '" + std::string(p[0]) + "'");
}

}  // namespace wm
