#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace wm {

struct Series {
    std::string label;
    std::vector<double> values;

    friend bool operator==(const Series&, const Series&) = default;
};

/// Column-labeled numeric table: x plus any number of data series.
///
/// A row whose series are all NaN is a gap (solver failure); it keeps its x
/// value in memory and is written to disk as a blank line.
struct SeriesTable {
    std::string name;
    std::string x_label;
    std::vector<double> x;
    std::vector<Series> series;
    /// Row indices preceded by a blank line when read back from disk.
    std::vector<std::size_t> breaks;

    SeriesTable() = default;
    SeriesTable(std::string name, std::string x_label, std::vector<std::string> labels);

    std::size_t rows() const { return x.size(); }
    std::size_t columns() const { return series.size(); }
    bool empty() const { return x.empty(); }

    /// Append one row; `values` must hold one entry per series.
    void add_row(double xv, const std::vector<double>& values);
    void add_gap(double xv);
    bool is_gap(std::size_t row) const;
    std::size_t gap_count() const;

    const Series& column(const std::string& label) const;

    /// Throws FormatError when lengths disagree or x is not strictly increasing.
    void check() const;
};

}  // namespace wm
