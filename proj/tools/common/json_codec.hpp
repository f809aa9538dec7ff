#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wm/poroelastic.hpp"
#include "wm/series_table.hpp"
#include "wm/variant_store.hpp"

namespace wm::codec {

using nlohmann::json;

json to_json(const InputVariant& v);

/// Fields missing from `j` keep their value in `base`. With `strict`, keys
/// outside the variant schema raise FormatError; otherwise they are ignored.
InputVariant variant_from_json(const json& j, const InputVariant& base = {}, bool strict = false);

json to_json(const ValidationReport& r);
json to_json(const ParseDiagnostic& d);

/// `{"variants": [...]}`
json variants_to_json(std::span<const InputVariant> variants);
/// Accepts `{"variants": [...]}` or a bare array.
std::vector<InputVariant> variants_from_json(const json& j, bool strict = false);

/// Rows [offset, offset + limit) of a table; NaN (gap) values become null.
json table_to_json(const SeriesTable& t, std::size_t offset, std::size_t limit);

}  // namespace wm::codec
