#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wm/poroelastic.hpp"

namespace wm {

/// A line the tolerant parser skipped, for strict-mode reporting.
struct ParseDiagnostic {
    std::size_t line = 0;
    std::string text;
    std::string reason;
};

struct ParseResult {
    std::vector<InputVariant> variants;
    std::vector<ParseDiagnostic> ignored;
};

/// Reads the `.dat` variant grammar: `key=value` lines, '/' comments,
/// `VariantIdent` opening a new defaults-initialized variant. Never throws on
/// content; anything it cannot use lands in `ignored`.
ParseResult parse_variants(std::string_view text);

/// Writes variants in the legacy key order. Empty input yields nullopt
/// (the legacy editor refuses to save an empty set).
std::optional<std::string> serialize_variants(std::span<const InputVariant> variants);

/// Ordered, editable collection of variants with a selection and a dirty flag.
class VariantSet {
public:
    VariantSet() = default;
    explicit VariantSet(std::vector<InputVariant> variants,
                        std::optional<std::filesystem::path> path = std::nullopt);

    const std::vector<InputVariant>& variants() const { return variants_; }
    const InputVariant& at(std::size_t idx) const;
    std::size_t size() const { return variants_.size(); }
    bool empty() const { return variants_.empty(); }

    std::optional<std::size_t> selected() const { return selected_; }
    bool modified() const { return modified_; }
    const std::optional<std::filesystem::path>& path() const { return path_; }

    void select(std::size_t idx);
    /// Appends and selects the new entry.
    void add(InputVariant v);
    void update(std::size_t idx, InputVariant v);
    /// Deep copy appended at the end with "~Clone" added to the ident; selects the clone.
    void clone_variant(std::size_t idx);
    /// Removes an entry; the selection stays on the same index, clamped to the last entry.
    void delete_variant(std::size_t idx);

    void mark_saved(std::filesystem::path path);

private:
    void check_index(std::size_t idx) const;

    std::optional<std::filesystem::path> path_;
    std::vector<InputVariant> variants_;
    std::optional<std::size_t> selected_;
    bool modified_ = false;
};

/// Loads a `.dat` file; the set is unmodified with the last variant selected.
VariantSet load_variants(const std::filesystem::path& path, std::vector<ParseDiagnostic>* ignored = nullptr);

/// Renames an existing file to `.bak` (dropping an older backup) and writes
/// the set. Returns false without touching disk when the set is empty.
bool save_with_backup(const std::filesystem::path& path, VariantSet& set);

/// Legacy engine input. Mode 1 omits eta and permeabil; mode 2 carries both.
std::string emit_legacy_input(const InputVariant& v, int mode);

/// `QQ.dat` -> `QQ~SEE-REF.txt` (mode 1) or `QQ~REF_COF.txt` (mode 2).
std::filesystem::path legacy_input_path(const std::filesystem::path& input, int mode);

/// `QQ.dat` -> `QQ~Log.txt`.
std::filesystem::path log_path_for(const std::filesystem::path& input);

std::filesystem::path write_legacy_input(const InputVariant& v, const std::filesystem::path& input, int mode);

/// Stable content hash over every field, used for cache keys.
std::size_t variant_hash(const InputVariant& v);

}  // namespace wm
