#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wm/poroelastic.hpp"
#include "wm/reflection.hpp"
#include "wm/series_table.hpp"

namespace wm {

inline constexpr std::array<std::string_view, 6> kOutputFiles = {
    "check.out", "cofec1.out", "freq_cof.out", "freq_disp.out", "stresses.out", "displace.out"};

inline constexpr std::string_view kManifestFile = "tables.manifest";

/// Headerless text: x first, then each series, separated by two spaces, in
/// shortest round-trip notation. Gap rows become blank lines.
std::string format_table(const SeriesTable& table);

/// Writes to `<path>.tmp` and renames over `path`.
void write_table(const SeriesTable& table, const std::filesystem::path& path);

/// One role per file column. roles[0] names x; nullopt there means x is the
/// row index. A nullopt role elsewhere skips the column. Every non-blank row
/// must have exactly roles.size() numbers.
SeriesTable parse_table(std::string_view text, std::span<const std::optional<std::string>> roles,
                        std::string name = {});
SeriesTable read_table(const std::filesystem::path& path, std::span<const std::optional<std::string>> roles);

/// Run log in the legacy `key= value` layout. Complex values print as (re,im).
std::string render_log(const InputVariant& v, const ReflectionSolution& sol, const BiotConstants& bc,
                       const DensityMatrix& dm);

struct RunOutputs {
    InputVariant variant;
    SeriesTable cofec1;
    SeriesTable displace;
    SeriesTable stresses;
    SeriesTable freq_cof;
    SeriesTable freq_disp;
    std::string check;
    std::string log_text;

    /// The five tables, in kOutputFiles order (check excluded).
    std::array<const SeriesTable*, 5> tables() const {
        return {&cofec1, &freq_cof, &freq_disp, &stresses, &displace};
    }
};

struct RunManifest {
    std::filesystem::path folder;
    std::vector<std::filesystem::path> outputs;  ///< the six .out files
    std::filesystem::path log;
    std::filesystem::path manifest;
};

/// Writes the six .out files, the log `log_name` and the manifest sidecar.
/// Every file is attempted; failures are collected into one IoError naming
/// each file that could not be written. Empty tables are refused up front.
RunManifest write_run_outputs(const RunOutputs& run, const std::filesystem::path& folder,
                              const std::string& log_name);

}  // namespace wm
