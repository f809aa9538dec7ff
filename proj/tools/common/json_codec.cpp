#include "json_codec.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wm/errors.hpp"

namespace wm::codec {

namespace {

const std::set<std::string, std::less<>> kVariantKeys = {
    "ident", "comment", "n", "eta", "kf", "rhof", "anus", "viscosity", "permeabil",
    "i_sealed", "i_seepage", "i_eta", "iDrawGraph"};

template <typename T>
void take(const json& j, const char* key, T& out) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    try {
        out = it->get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(0, std::string("field '") + key + "' has the wrong type");
    }
}

void take_int(const json& j, const char* key, int& out) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return;
    if (it->is_number_integer()) {
        out = it->get<int>();
    } else if (it->is_boolean()) {
        out = it->get<bool>() ? 1 : 0;
    } else {
        throw FormatError(0, std::string("field '") + key + "' must be an integer");
    }
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

json to_json(const InputVariant& v) {
    return {{"ident", v.ident},         {"comment", v.comment},     {"n", v.n},
            {"eta", v.eta},             {"kf", v.kf},               {"rhof", v.rhof},
            {"anus", v.anus},           {"viscosity", v.viscosity}, {"permeabil", v.permeabil},
            {"i_sealed", v.i_sealed},   {"i_seepage", v.i_seepage}, {"i_eta", v.i_eta},
            {"iDrawGraph", v.iDrawGraph}};
}

InputVariant variant_from_json(const json& j, const InputVariant& base, bool strict) {
    if (!j.is_object()) throw FormatError(0, "variant must be a JSON object");
    if (strict) {
        for (const auto& [key, value] : j.items())
            if (!kVariantKeys.contains(key)) throw FormatError(0, "unknown variant key '" + key + "'");
    }
    InputVariant v = base;
    take(j, "ident", v.ident);
    take(j, "comment", v.comment);
    take(j, "n", v.n);
    take(j, "eta", v.eta);
    take(j, "kf", v.kf);
    take(j, "rhof", v.rhof);
    take(j, "anus", v.anus);
    take(j, "viscosity", v.viscosity);
    take(j, "permeabil", v.permeabil);
    take_int(j, "i_sealed", v.i_sealed);
    take_int(j, "i_seepage", v.i_seepage);
    take_int(j, "i_eta", v.i_eta);
    take_int(j, "iDrawGraph", v.iDrawGraph);
    return v;
}

json to_json(const ValidationReport& r) {
    return {{"valid", r.valid()}, {"violations", r.violations}, {"warnings", r.warnings}};
}

json to_json(const ParseDiagnostic& d) { return {{"line", d.line}, {"text", d.text}, {"reason", d.reason}}; }

json variants_to_json(std::span<const InputVariant> variants) {
    json arr = json::array();
    for (const auto& v : variants) arr.push_back(to_json(v));
    return {{"variants", std::move(arr)}};
}

std::vector<InputVariant> variants_from_json(const json& j, bool strict) {
    const json* arr = &j;
    if (j.is_object()) {
        if (strict) {
            for (const auto& [key, value] : j.items())
                if (key != "variants") throw FormatError(0, "unknown top-level key '" + key + "'");
        }
        const auto it = j.find("variants");
        if (it == j.end()) throw FormatError(0, "missing 'variants' array");
        arr = &*it;
    }
    if (!arr->is_array()) throw FormatError(0, "'variants' must be an array");
    std::vector<InputVariant> out;
    for (const auto& item : *arr) out.push_back(variant_from_json(item, {}, strict));
    return out;
}

json table_to_json(const SeriesTable& t, std::size_t offset, std::size_t limit) {
    const std::size_t begin = std::min(offset, t.rows());
    const std::size_t end = begin + std::min(limit, t.rows() - begin);

    json x = json::array();
    for (std::size_t r = begin; r < end; ++r) x.push_back(number_or_null(t.x[r]));
    json series = json::array();
    for (const auto& s : t.series) {
        json values = json::array();
        for (std::size_t r = begin; r < end; ++r) values.push_back(number_or_null(s.values[r]));
        series.push_back({{"label", s.label}, {"values", std::move(values)}});
    }
    return {{"name", t.name},
            {"x_label", t.x_label},
            {"rows", t.rows()},
            {"offset", begin},
            {"count", end - begin},
            {"next_offset", end < t.rows() ? json(end) : json(nullptr)},
            {"x", std::move(x)},
            {"series", std::move(series)}};
}

}  // namespace wm::codec
