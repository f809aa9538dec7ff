#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <httplib.h>

#include "api_service.hpp"
#include "grid_spec.hpp"
#include "json_codec.hpp"
#include "wm/errors.hpp"
#include "wm/run.hpp"
#include "wm/variant_store.hpp"

namespace wm::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string input;
    std::string variant = "all";
    std::string out;
    std::string incidence = "P";
    std::string angles;
    std::string etas;
    double angle = 30.0;
    bool strict = false;
    std::string kind;
    std::string to;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string data_dir;
    std::string ui_dir;
};

/// A failure that maps straight to an exit code.
struct Failure {
    int code;
    std::string message;
};

fs::path samples_dir() {
    if (const char* env = std::getenv("WM_SAMPLES_DIR"); env && *env) return env;
    return "samples";
}

fs::path input_path(const Options& o) { return o.input.empty() ? samples_dir() / "QQ.dat" : fs::path(o.input); }

bool is_json_path(const fs::path& p) { return p.extension() == ".json"; }

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError(p.string(), "cannot open for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(p.string(), "cannot open for writing");
    out << text;
    if (!out.flush()) throw IoError(p.string(), "write failed");
}

VariantSet load(const Options& o, std::ostream& err) {
    const fs::path path = input_path(o);
    if (is_json_path(path)) {
        const auto j = codec::json::parse(read_text(path), nullptr, false);
        if (j.is_discarded()) throw FormatError(0, path.string() + ": not valid JSON");
        return VariantSet(codec::variants_from_json(j, o.strict), path);
    }
    std::vector<ParseDiagnostic> ignored;
    VariantSet set = load_variants(path, &ignored);
    if (o.strict && !ignored.empty()) {
        for (const auto& d : ignored)
            err << path.string() << ":" << d.line << ": " << d.reason << ": " << d.text << "\n";
        throw Failure{kValidation, "strict parse rejected " + std::to_string(ignored.size()) + " line(s)"};
    }
    return set;
}

std::vector<std::size_t> select(const VariantSet& set, const std::string& selector) {
    if (selector.empty() || selector == "all") {
        std::vector<std::size_t> all(set.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
    }
    for (std::size_t i = 0; i < set.size(); ++i)
        if (set.at(i).ident == selector) return {i};
    if (!selector.empty() && std::all_of(selector.begin(), selector.end(), ::isdigit)) {
        const std::size_t idx = std::stoul(selector);
        if (idx < set.size()) return {idx};
    }
    std::string names;
    for (const auto& v : set.variants()) names += (names.empty() ? "" : ", ") + v.ident;
    throw Failure{kValidation, "unknown variant '" + selector + "'; available: " + (names.empty() ? "(none)" : names)};
}

// One folder per variant; idents are sanitized and made unique.
std::vector<std::string> folder_names(const VariantSet& set, const std::vector<std::size_t>& picked) {
    std::vector<std::string> names;
    std::set<std::string> used;
    for (std::size_t idx : picked) {
        std::string name = set.at(idx).ident;
        for (char& c : name)
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.' && c != '~') c = '_';
        if (name.empty() || name == "." || name == "..") name = "variant";
        if (used.contains(name)) name += "_" + std::to_string(idx);
        used.insert(name);
        names.push_back(name);
    }
    return names;
}

RunConfig config_of(const Options& o) {
    RunConfig cfg;
    cfg.incidence = parse_incidence(o.incidence);
    if (!o.angles.empty()) cfg.angles = parse_angle_spec(o.angles);
    if (!o.etas.empty()) cfg.etas = parse_eta_spec(o.etas);
    cfg.fixed_angle = o.angle;
    return cfg;
}

bool report_validation(const InputVariant& v, std::ostream& out, std::ostream& err) {
    const ValidationReport r = validate_variant(v);
    for (const auto& w : r.warnings) err << v.ident << ": warning: " << w << "\n";
    for (const auto& e : r.violations) out << v.ident << ": invalid: " << e << "\n";
    return r.valid();
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
    const VariantSet set = load(o, err);
    if (set.empty()) {
        err << "warning: " << input_path(o).string() << " holds no variants\n";
        return kOk;
    }
    int rc = kOk;
    for (std::size_t i : select(set, o.variant)) {
        if (report_validation(set.at(i), out, err))
            out << set.at(i).ident << ": ok\n";
        else
            rc = kValidation;
    }
    return rc;
}

int cmd_compute(const Options& o, std::ostream& out, std::ostream& err) {
    const VariantSet set = load(o, err);
    const auto picked = select(set, o.variant);
    const auto folders = folder_names(set, picked);
    const RunConfig cfg = config_of(o);
    const fs::path root = o.out.empty() ? fs::path("out") : fs::path(o.out);
    const std::string log_name = log_path_for(input_path(o)).filename().string();

    int rc = kOk;
    for (std::size_t k = 0; k < picked.size(); ++k) {
        const InputVariant& v = set.at(picked[k]);
        if (!report_validation(v, out, err)) {
            rc = rc ? rc : kValidation;
            continue;
        }
        try {
            const RunOutputs run = compute_run(v, cfg);
            const RunManifest m = write_run_outputs(run, root / folders[k], log_name);
            out << v.ident << ": wrote " << m.folder.string() << "\n";
        } catch (const NearCriticalError& e) {
            err << v.ident << ": " << e.what() << "\n";
            rc = rc ? rc : kNumeric;
        } catch (const SingularMediumError& e) {
            err << v.ident << ": " << e.what() << "\n";
            rc = rc ? rc : kNumeric;
        }
    }
    return rc;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
    const VariantSet set = load(o, err);
    const auto picked = select(set, o.variant);
    const auto folders = folder_names(set, picked);
    const RunConfig cfg = config_of(o);

    int rc = kOk;
    for (std::size_t k = 0; k < picked.size(); ++k) {
        const InputVariant& v = set.at(picked[k]);
        if (!report_validation(v, out, err)) {
            rc = rc ? rc : kValidation;
            continue;
        }
        std::vector<SeriesTable> tables;
        try {
            if (o.kind == "angle") {
                SweepResult r = sweep_angle(v, cfg.incidence, cfg.angles);
                tables = {std::move(r.coefficients), std::move(r.displacements)};
            } else if (o.kind == "frequency") {
                SweepResult r = sweep_frequency(v, cfg.incidence, cfg.fixed_angle, cfg.etas);
                tables = {std::move(r.coefficients), std::move(r.displacements)};
            } else {
                SeriesTable t = normalized_velocities(v, cfg.etas);
                t.name = "velocities";
                tables = {std::move(t)};
            }
        } catch (const SingularMediumError& e) {
            err << v.ident << ": " << e.what() << "\n";
            rc = rc ? rc : kNumeric;
            continue;
        }
        for (const auto& t : tables) {
            if (o.out.empty()) {
                out << "# " << v.ident << " " << t.name << ": " << t.x_label;
                for (const auto& s : t.series) out << " " << s.label;
                out << "\n" << format_table(t);
            } else {
                const fs::path dir = fs::path(o.out) / folders[k];
                fs::create_directories(dir);
                write_table(t, dir / (t.name + ".out"));
                out << v.ident << ": wrote " << (dir / (t.name + ".out")).string() << "\n";
            }
        }
    }
    return rc;
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream& err) {
    const fs::path in = input_path(o);
    VariantSet set = load(o, err);
    if (set.empty()) throw Failure{kValidation, "nothing to convert: the variant set is empty"};

    std::string text;
    fs::path target;
    if (o.to == "json") {
        text = codec::variants_to_json(set.variants()).dump(2) + "\n";
        target = fs::path(in).replace_extension(".json");
    } else if (o.to == "dat") {
        text = *serialize_variants(set.variants());
        target = fs::path(in).replace_extension(".dat");
    } else {
        const int mode = o.to == "legacy1" ? 1 : 2;
        std::size_t idx = *set.selected();
        if (o.variant != "all") {
            const auto picked = select(set, o.variant);
            idx = picked.front();
        }
        text = emit_legacy_input(set.at(idx), mode);
        target = legacy_input_path(in, mode);
    }
    if (!o.out.empty()) target = o.out;

    if (target == "-") {
        out << text;
    } else if (o.to == "dat") {
        if (fs::exists(target) && fs::equivalent(target, in) && !is_json_path(in)) {
            save_with_backup(target, set);
        } else {
            VariantSet copy(set.variants());
            save_with_backup(target, copy);
        }
        out << "wrote " << target.string() << "\n";
    } else {
        write_text(target, text);
        out << "wrote " << target.string() << "\n";
    }
    return kOk;
}

int cmd_serve(const Options& o, std::ostream& out, std::ostream&) {
    service::ServiceOptions so;
    so.data_dir = o.data_dir.empty() ? samples_dir() : fs::path(o.data_dir);
    if (!o.ui_dir.empty()) so.ui_dir = fs::path(o.ui_dir);
    service::ApiService api(so);
    httplib::Server server;
    api.mount(server);
    if (!server.bind_to_port(o.host, o.port))
        throw IoError(o.host + ":" + std::to_string(o.port), "cannot bind");
    out << "listening on http://" << o.host << ":" << o.port << "\n" << std::flush;
    server.listen_after_bind();
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Plane-wave reflection at the free surface of a poroelastic half-space"};
    app.require_subcommand(1);
    Options o;

    auto add_input = [&](CLI::App* c) {
        c->add_option("--input,-i", o.input, "Variant file (.dat or .json); default $WM_SAMPLES_DIR/QQ.dat");
        c->add_flag("--strict", o.strict, "Reject unknown keys and unparsable lines instead of skipping them");
        c->add_option("--variant,-v", o.variant, "Variant ident, 0-based index, or 'all'")->capture_default_str();
    };
    auto add_grids = [&](CLI::App* c) {
        c->add_option("--incidence", o.incidence, "Incident wave: P or SV")->capture_default_str();
        c->add_option("--angles", o.angles, "Angle grid MIN:MAX:STEP in degrees (default 1:89:1)");
        c->add_option("--etas", o.etas, "Frequency grid log|lin:MIN:MAX:N (default log:0.01:100:40)");
        c->add_option("--angle", o.angle, "Reference angle for the frequency sweep, stresses and log")
            ->capture_default_str();
    };

    auto* validate = app.add_subcommand("validate", "Check every variant; exit 1 if any is invalid");
    add_input(validate);

    auto* compute = app.add_subcommand("compute", "Write the six .out tables and the log per variant");
    add_input(compute);
    add_grids(compute);
    compute->add_option("--out,-o", o.out, "Output root; one subfolder per variant (default ./out)");

    auto* sweep = app.add_subcommand("sweep", "Print or write one kind of sweep table");
    add_input(sweep);
    add_grids(sweep);
    sweep->add_option("kind", o.kind, "angle | frequency | velocity")
        ->required()
        ->check(CLI::IsMember({"angle", "frequency", "velocity"}));
    sweep->add_option("--out,-o", o.out, "Output root; tables go to stdout when omitted");

    auto* convert = app.add_subcommand("convert", "Convert between .dat, JSON and the legacy engine inputs");
    add_input(convert);
    convert->add_option("--to", o.to, "json | dat | legacy1 | legacy2")
        ->required()
        ->check(CLI::IsMember({"json", "dat", "legacy1", "legacy2"}));
    convert->add_option("--out,-o", o.out, "Target file, '-' for stdout");

    auto* serve = app.add_subcommand("serve", "Run the HTTP API");
    serve->add_option("--port,-p", o.port, "TCP port")->capture_default_str();
    serve->add_option("--host", o.host, "Bind address")->capture_default_str();
    serve->add_option("--data-dir", o.data_dir, "Folder for open/save (default $WM_SAMPLES_DIR or ./samples)");
    serve->add_option("--ui-dir", o.ui_dir, "Static UI bundle served at /");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        if (*validate) return cmd_validate(o, out, err);
        if (*compute) return cmd_compute(o, out, err);
        if (*sweep) return cmd_sweep(o, out, err);
        if (*convert) return cmd_convert(o, out, err);
        if (*serve) return cmd_serve(o, out, err);
    } catch (const Failure& f) {
        err << "error: " << f.message << "\n";
        return f.code;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const SelectorError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const NearCriticalError& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const SingularMediumError& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
    return kValidation;
}

}  // namespace wm::cli
