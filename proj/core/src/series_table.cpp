#include "wm/series_table.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wm/errors.hpp"

namespace wm {

SeriesTable::SeriesTable(std::string name, std::string x_label, std::vector<std::string> labels)
    : name(std::move(name)), x_label(std::move(x_label)) {
    series.reserve(labels.size());
    for (auto& l : labels) series.push_back({std::move(l), {}});
}

void SeriesTable::add_row(double xv, const std::vector<double>& values) {
    if (values.size() != series.size())
        throw FormatError(0, "row width " + std::to_string(values.size()) + " does not match " +
                                 std::to_string(series.size()) + " series in table " + name);
    x.push_back(xv);
    for (std::size_t i = 0; i < values.size(); ++i) series[i].values.push_back(values[i]);
}

void SeriesTable::add_gap(double xv) {
    x.push_back(xv);
    for (auto& s : series) s.values.push_back(std::numeric_limits<double>::quiet_NaN());
}

bool SeriesTable::is_gap(std::size_t row) const {
    if (series.empty()) return false;
    return std::all_of(series.begin(), series.end(),
                       [row](const Series& s) { return std::isnan(s.values.at(row)); });
}

std::size_t SeriesTable::gap_count() const {
    std::size_t count = 0;
    for (std::size_t r = 0; r < rows(); ++r) count += is_gap(r) ? 1 : 0;
    return count;
}

const Series& SeriesTable::column(const std::string& label) const {
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == label; });
    if (it == series.end()) throw std::out_of_range("no column '" + label + "' in table " + name);
    return *it;
}

void SeriesTable::check() const {
    for (const auto& s : series)
        if (s.values.size() != x.size())
            throw FormatError(0, "column '" + s.label + "' length differs from x in table " + name);
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw FormatError(i + 1, "x is not strictly increasing in table " + name);
}

}  // namespace wm
