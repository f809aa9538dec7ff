#include "wm/result_tables.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "wm/errors.hpp"
#include "wm/number_format.hpp"

namespace wm {

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open for writing");
        out << content;
        out.flush();
        if (!out) throw IoError(path.string(), "write failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError(path.string(), "cannot replace file");
    }
}

std::string labels_of(const SeriesTable& t) {
    std::string s = t.x_label;
    for (const auto& c : t.series) s += " " + c.label;
    return s;
}

}  // namespace

std::string format_table(const SeriesTable& table) {
    table.check();
    std::string out;
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (table.is_gap(r)) {
            out += "\n";
            continue;
        }
        out += shortest(table.x[r]);
        for (const auto& c : table.series) {
            out += "  ";
            out += shortest(c.values[r]);
        }
        out += "\n";
    }
    return out;
}

void write_table(const SeriesTable& table, const std::filesystem::path& path) {
    write_atomically(path, format_table(table));
}

SeriesTable parse_table(std::string_view text, std::span<const std::optional<std::string>> roles,
                        std::string name) {
    if (roles.empty()) throw FormatError(0, "no column roles given");
    SeriesTable t;
    t.name = std::move(name);
    t.x_label = roles[0].value_or("row");
    for (std::size_t c = 1; c < roles.size(); ++c)
        if (roles[c]) t.series.push_back({*roles[c], {}});

    std::size_t line_no = 0;
    bool pending_break = false;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string line(text.substr(0, nl));
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            pending_break = true;
            continue;
        }

        std::istringstream in(line);
        std::vector<double> row;
        std::string tok;
        while (in >> tok) {
            double v = 0.0;
            std::size_t used = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::out_of_range&) {
                v = std::strtod(tok.c_str(), nullptr);
                used = tok.size();
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw FormatError(line_no, "not a number: '" + tok + "'");
            row.push_back(v);
        }
        if (row.size() != roles.size())
            throw FormatError(line_no, "expected " + std::to_string(roles.size()) + " columns, found " +
                                           std::to_string(row.size()));

        if (pending_break && !t.x.empty()) t.breaks.push_back(t.x.size());
        pending_break = false;
        t.x.push_back(roles[0] ? row[0] : static_cast<double>(t.x.size()));
        std::size_t s = 0;
        for (std::size_t c = 1; c < roles.size(); ++c)
            if (roles[c]) t.series[s++].values.push_back(row[c]);
    }
    return t;
}

SeriesTable read_table(const std::filesystem::path& path, std::span<const std::optional<std::string>> roles) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_table(ss.str(), roles, path.stem().string());
    } catch (const FormatError& e) {
        throw FormatError(e.line(), path.string() + ": " + e.what());
    }
}

std::string render_log(const InputVariant& v, const ReflectionSolution& sol, const BiotConstants& bc,
                       const DensityMatrix& dm) {
    std::string out;
    auto real = [&](std::string_view key, double x) {
        out.append(key).append("= ").append(fortran_real(x)).append("\n");
    };
    auto integer = [&](std::string_view key, int x) {
        out.append(key).append("= ").append(std::to_string(x)).append("\n");
    };
    auto complex = [&](std::string_view key, cplx z) {
        out.append(key).append("= ").append(fortran_complex(z)).append("\n");
    };
    auto text = [&](std::string_view key, std::string_view s) { out.append(key).append("= ").append(s).append("\n"); };

    out += "Log: " + v.ident + " (" + v.comment + ")\n";
    real("kf", v.kf);
    real("rhof", v.rhof);
    real("anus", v.anus);
    real("viscosity", v.viscosity);
    real("permeabil", v.permeabil);
    integer("i_sealed", v.i_sealed);
    integer("i_seepage", v.i_seepage);
    integer("i_eta", v.i_eta);
    out += "\n// Output values:\n";

    real("freq", sol.medium.waves.omega);
    complex("g111", sol.g[0][0]);
    complex("g112", sol.g[0][1]);
    complex("g12", sol.g[0][2]);
    complex("g211", sol.g[1][0]);
    complex("g212", sol.g[1][1]);
    complex("g22", sol.g[1][2]);
    complex("g411", sol.g4[0]);
    complex("g412", sol.g4[1]);
    complex("g42", sol.g4[2]);
    complex("g611", sol.g6[0]);
    complex("g612", sol.g6[1]);
    complex(sol.incidence == Incidence::SV ? "c_inc_S" : "c_inc_P", sol.c_inc);
    complex("c_ref_Pf", sol.c_ref_Pf);
    complex("c_ref_Ps", sol.c_ref_Ps);
    complex("coeslow", sol.coeslow);
    complex("c_ref_S", sol.c_ref_S);
    real("Q", bc.Q);
    real("R", bc.R);
    const ComplexDensities& cd = sol.medium.complex_densities;
    // The complex densities reduce to dm when b = 0.
    complex("rho11", cd.b == 0.0 ? cplx(dm.rho11, 0.0) : cd.cr11);
    complex("rho12", cd.b == 0.0 ? cplx(dm.rho12, 0.0) : cd.cr12);
    complex("rho22", cd.b == 0.0 ? cplx(dm.rho22, 0.0) : cd.cr22);
    real("P", bc.P);
    real("A", bc.A_biot);

    out += "\n// A is the Biot constant lambda + Q^2/R (lambda alone when R = 0)\n";
    real("lambda", bc.lambda);
    real("n", v.n);
    real("eta", v.eta);
    text("incidence", to_string(sol.incidence));
    real("angle", sol.angle_deg);
    text("drainage", to_string(sol.drainage));
    return out;
}

RunManifest write_run_outputs(const RunOutputs& run, const std::filesystem::path& folder,
                              const std::string& log_name) {
    const auto tables = run.tables();
    for (const SeriesTable* t : tables)
        if (t->empty()) throw FormatError(0, "refusing to write empty table '" + t->name + "'");
    if (run.check.empty()) throw FormatError(0, "refusing to write empty check report");

    std::error_code ec;
    std::filesystem::create_directories(folder, ec);
    if (ec) throw IoError(folder.string(), "cannot create folder (" + ec.message() + ")");

    RunManifest m;
    m.folder = folder;
    std::string failures;
    auto attempt = [&](const std::filesystem::path& p, const std::string& content) {
        try {
            write_atomically(p, content);
        } catch (const std::exception& e) {
            failures += (failures.empty() ? "" : "; ") + p.filename().string() + ": " + e.what();
        }
    };

    std::string manifest;
    for (std::string_view file : kOutputFiles) {
        const auto p = folder / file;
        if (file == "check.out") {
            attempt(p, run.check);
            manifest += "check.out: text report\n";
        } else {
            const std::string stem(file.substr(0, file.size() - 4));
            const SeriesTable* t = nullptr;
            for (const SeriesTable* c : tables)
                if (c->name == stem) t = c;
            if (!t) throw FormatError(0, "run has no table named '" + stem + "'");
            attempt(p, format_table(*t));
            manifest += std::string(file) + ": " + labels_of(*t) + "\n";
        }
        m.outputs.push_back(p);
    }
    m.log = folder / log_name;
    attempt(m.log, run.log_text);
    manifest += "log: " + log_name + "\n";
    m.manifest = folder / kManifestFile;
    attempt(m.manifest, manifest);

    if (!failures.empty()) throw IoError(folder.string(), "partial write: " + failures);
    return m;
}

}  // namespace wm
