#include "wm/variant_store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "wm/errors.hpp"
#include "wm/number_format.hpp"

namespace wm {

namespace {

// Legacy AnsiString::Trim: strip everything <= ' ' at both ends.
std::string_view trim(std::string_view s) {
    while (!s.empty() && static_cast<unsigned char>(s.front()) <= ' ') s.remove_prefix(1);
    while (!s.empty() && static_cast<unsigned char>(s.back()) <= ' ') s.remove_suffix(1);
    return s;
}

double* real_field(InputVariant& v, std::string_view key) {
    if (key == "n") return &v.n;
    if (key == "eta") return &v.eta;
    if (key == "kf") return &v.kf;
    if (key == "rhof") return &v.rhof;
    if (key == "anus") return &v.anus;
    if (key == "viscosity") return &v.viscosity;
    if (key == "permeabil") return &v.permeabil;
    return nullptr;
}

int* int_field(InputVariant& v, std::string_view key) {
    if (key == "i_sealed") return &v.i_sealed;
    if (key == "i_seepage") return &v.i_seepage;
    if (key == "iDrawGraph") return &v.iDrawGraph;
    if (key == "i_eta") return &v.i_eta;
    return nullptr;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path.string(), "cannot open for writing");
    out << content;
    out.flush();
    if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

ParseResult parse_variants(std::string_view text) {
    ParseResult result;
    InputVariant* current = nullptr;
    std::size_t line_no = 0;

    auto ignore = [&](std::string_view line, std::string reason) {
        result.ignored.push_back({line_no, std::string(line), std::move(reason)});
    };

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        std::string_view p = line;
        while (!p.empty() && (p.front() == ' ' || p.front() == '\t')) p.remove_prefix(1);
        if (!p.empty() && p.front() == '/') continue;
        if (trim(p).empty()) continue;

        const auto key_end = p.find_first_of(" \t=");
        if (key_end == std::string_view::npos) {
            ignore(line, "no '=' separator");
            continue;
        }
        const auto eq = p.find('=', key_end);
        if (eq == std::string_view::npos) {
            ignore(line, "no '=' separator");
            continue;
        }
        const std::string_view key = trim(p.substr(0, key_end));
        const std::string_view value = trim(p.substr(eq + 1));

        if (key == "VariantIdent") {
            result.variants.emplace_back();
            current = &result.variants.back();
            current->ident = std::string(value);
            if (current->ident.empty()) {
                current->ident = "Variant" + std::to_string(result.variants.size());
                ignore(line, "empty VariantIdent replaced by " + current->ident);
            }
            continue;
        }
        if (!current) {
            ignore(line, "key before first VariantIdent");
            continue;
        }
        if (key == "VariantComment") {
            current->comment = std::string(value);
            continue;
        }
        if (double* d = real_field(*current, key)) {
            if (!parse_double_prefix(value, *d)) ignore(line, "value is not numeric");
            continue;
        }
        if (int* i = int_field(*current, key)) {
            if (!parse_int_prefix(value, *i)) ignore(line, "value is not an integer");
            continue;
        }
        ignore(line, "unknown key '" + std::string(key) + "'");
    }
    return result;
}

std::optional<std::string> serialize_variants(std::span<const InputVariant> variants) {
    if (variants.empty()) return std::nullopt;
    std::string out;
    for (const auto& v : variants) {
        out += "\n//-----";
        out += "\nVariantIdent=" + v.ident;
        out += "\nVariantComment=" + v.comment;
        out += "\neta=" + shortest(v.eta);
        out += "\nkf=" + shortest(v.kf);
        out += "\nrhof=" + shortest(v.rhof);
        out += "\nanus=" + shortest(v.anus);
        out += "\nn=" + shortest(v.n);
        out += "\nviscosity=" + shortest(v.viscosity);
        out += "\npermeabil=" + shortest(v.permeabil);
        out += "\ni_sealed=" + std::to_string(v.i_sealed);
        out += "\ni_seepage=" + std::to_string(v.i_seepage);
        out += "\ni_eta=" + std::to_string(v.i_eta);
        out += "\n";
        out += "\niDrawGraph=" + std::to_string(v.iDrawGraph);
        out += "\n";
    }
    return out;
}

VariantSet::VariantSet(std::vector<InputVariant> variants, std::optional<std::filesystem::path> path)
    : path_(std::move(path)), variants_(std::move(variants)) {
    if (!variants_.empty()) selected_ = variants_.size() - 1;
}

void VariantSet::check_index(std::size_t idx) const {
    if (idx >= variants_.size())
        throw std::out_of_range("variant index " + std::to_string(idx) + " out of range (size " +
                                std::to_string(variants_.size()) + ")");
}

const InputVariant& VariantSet::at(std::size_t idx) const {
    check_index(idx);
    return variants_[idx];
}

void VariantSet::select(std::size_t idx) {
    check_index(idx);
    selected_ = idx;
}

void VariantSet::add(InputVariant v) {
    variants_.push_back(std::move(v));
    selected_ = variants_.size() - 1;
    modified_ = true;
}

void VariantSet::update(std::size_t idx, InputVariant v) {
    check_index(idx);
    if (variants_[idx] == v) return;
    variants_[idx] = std::move(v);
    modified_ = true;
}

void VariantSet::clone_variant(std::size_t idx) {
    check_index(idx);
    InputVariant copy = variants_[idx];
    copy.ident += "~Clone";
    add(std::move(copy));
}

void VariantSet::delete_variant(std::size_t idx) {
    check_index(idx);
    variants_.erase(variants_.begin() + static_cast<std::ptrdiff_t>(idx));
    if (variants_.empty())
        selected_.reset();
    else
        selected_ = std::min(idx, variants_.size() - 1);
    modified_ = true;
}

void VariantSet::mark_saved(std::filesystem::path path) {
    path_ = std::move(path);
    modified_ = false;
}

VariantSet load_variants(const std::filesystem::path& path, std::vector<ParseDiagnostic>* ignored) {
    ParseResult parsed = parse_variants(read_file(path));
    if (ignored) *ignored = std::move(parsed.ignored);
    return VariantSet(std::move(parsed.variants), path);
}

bool save_with_backup(const std::filesystem::path& path, VariantSet& set) {
    const auto text = serialize_variants(set.variants());
    if (!text) return false;

    std::filesystem::path bak = path;
    bak.replace_extension(".bak");
    std::error_code ec;
    std::filesystem::remove(bak, ec);
    if (ec) throw IoError(bak.string(), "cannot remove old backup (" + ec.message() + ")");
    if (std::filesystem::exists(path, ec)) {
        std::filesystem::rename(path, bak, ec);
        if (ec) throw IoError(path.string(), "cannot rename to " + bak.string() + " (" + ec.message() + ")");
    }
    write_file(path, *text);
    set.mark_saved(path);
    return true;
}

std::string emit_legacy_input(const InputVariant& v, int mode) {
    if (mode < 1 || mode > 2) throw SelectorError("legacy input mode must be 1 or 2, got " + std::to_string(mode));
    const std::string flags =
        std::to_string(v.i_sealed) + " " + std::to_string(v.i_seepage) + " " + std::to_string(v.i_eta) + "\n";
    std::string out;
    if (mode == 1) {
        out += shortest(v.n) + " " + shortest(v.kf) + " " + shortest(v.rhof) + " " + shortest(v.anus) + "\n";
        out += shortest(v.viscosity) + " ";
        out += flags;
        out += "\n";
        out += "\n// n, kf, rhof, anus";
        out += "\n// viscosity, j";
        out += "\n// i_sealed, i_seepage, i_eta";
    } else {
        out += shortest(v.n) + " " + shortest(v.eta) + " " + shortest(v.kf) + " " + shortest(v.rhof) + " " +
               shortest(v.anus) + "\n";
        out += shortest(v.viscosity) + " " + shortest(v.permeabil) + "\n";
        out += flags;
        out += "\n";
        out += "\n// n, eta, kf, rhof, anus";
        out += "\n// viscosity, permeabil";
        out += "\n// i_sealed, i_seepage, i_eta";
    }
    return out;
}

std::filesystem::path legacy_input_path(const std::filesystem::path& input, int mode) {
    if (mode < 1 || mode > 2) throw SelectorError("legacy input mode must be 1 or 2, got " + std::to_string(mode));
    std::filesystem::path out = input;
    out.replace_extension();
    out += mode == 1 ? "~SEE-REF.txt" : "~REF_COF.txt";
    return out;
}

std::filesystem::path log_path_for(const std::filesystem::path& input) {
    std::filesystem::path out = input;
    out.replace_extension();
    out += "~Log.txt";
    return out;
}

std::filesystem::path write_legacy_input(const InputVariant& v, const std::filesystem::path& input, int mode) {
    const std::string text = emit_legacy_input(v, mode);
    const auto path = legacy_input_path(input, mode);
    write_file(path, text);
    return path;
}

std::size_t variant_hash(const InputVariant& v) {
    const InputVariant one[] = {v};
    const std::string text = *serialize_variants(one);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

}  // namespace wm
