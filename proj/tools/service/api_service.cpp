#include "api_service.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include <httplib.h>

#include "grid_spec.hpp"
#include "json_codec.hpp"
#include "wm/errors.hpp"
#include "wm/number_format.hpp"

namespace wm::service {

using nlohmann::json;

struct StoredRun {
    std::size_t index = 0;
    std::size_t hash = 0;
    std::string cache_key;
    RunOutputs outputs;
};

struct ApiService::Session {
    std::mutex mu;
    VariantSet set;
    std::map<std::string, StoredRun> runs;
    std::deque<std::string> order;
    std::map<std::string, std::string> cache;
    std::uint64_t next_run = 1;
};

namespace {

class HttpError : public std::runtime_error {
public:
    HttpError(int status, json body) : std::runtime_error(body.value("error", "")), status(status), body(std::move(body)) {}
    int status;
    json body;
};

[[noreturn]] void fail(int status, const std::string& message, json extra = json::object()) {
    extra["error"] = message;
    throw HttpError(status, std::move(extra));
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

// Maps library errors onto status codes so handlers can just throw.
Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
        try {
            h(req, res);
        } catch (const HttpError& e) {
            send_json(res, e.body, e.status);
        } catch (const DomainError& e) {
            send_json(res, {{"error", e.what()}}, 400);
        } catch (const SelectorError& e) {
            send_json(res, {{"error", e.what()}}, 400);
        } catch (const FormatError& e) {
            send_json(res, {{"error", e.what()}, {"line", e.line()}}, 400);
        } catch (const nlohmann::json::exception& e) {
            send_json(res, {{"error", std::string("bad JSON: ") + e.what()}}, 400);
        } catch (const NearCriticalError& e) {
            send_json(res, {{"error", e.what()}, {"angle", e.angle_deg()}, {"condition", e.condition()}}, 422);
        } catch (const SingularMediumError& e) {
            send_json(res, {{"error", e.what()}}, 422);
        } catch (const IoError& e) {
            send_json(res, {{"error", e.what()}, {"path", e.path()}}, 500);
        } catch (const std::exception& e) {
            send_json(res, {{"error", e.what()}}, 500);
        }
    };
}

json parse_body(const httplib::Request& req) {
    if (req.body.empty()) return json::object();
    return json::parse(req.body);
}

bool looks_like_json(const httplib::Request& req) {
    if (req.get_header_value("Content-Type").find("json") != std::string::npos) return true;
    const auto pos = req.body.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && (req.body[pos] == '{' || req.body[pos] == '[');
}

std::size_t index_param(const httplib::Request& req, const VariantSet& set) {
    const std::string text = req.matches[1];
    std::size_t idx = 0;
    try {
        idx = std::stoul(text);
    } catch (const std::exception&) {
        fail(404, "bad variant index '" + text + "'");
    }
    if (idx >= set.size()) fail(404, "no variant at index " + text, {{"size", set.size()}});
    return idx;
}

json list_json(const VariantSet& set) {
    json j = codec::variants_to_json(set.variants());
    json reports = json::array();
    for (const auto& v : set.variants()) reports.push_back(codec::to_json(validate_variant(v)));
    j["validation"] = std::move(reports);
    j["selected"] = set.selected() ? json(*set.selected()) : json(nullptr);
    j["modified"] = set.modified();
    j["path"] = set.path() ? json(set.path()->filename().string()) : json(nullptr);
    return j;
}

std::vector<double> grid_from(const json& j, bool angles) {
    if (j.is_string()) return angles ? parse_angle_spec(j.get<std::string>()) : parse_eta_spec(j.get<std::string>());
    if (j.is_array()) return j.get<std::vector<double>>();
    fail(400, std::string(angles ? "angles" : "etas") + " must be a grid spec string or an array");
}

RunConfig config_from(const json& body) {
    RunConfig cfg;
    if (const auto it = body.find("incidence"); it != body.end()) cfg.incidence = parse_incidence(it->get<std::string>());
    if (const auto it = body.find("angles"); it != body.end()) cfg.angles = grid_from(*it, true);
    if (const auto it = body.find("etas"); it != body.end()) cfg.etas = grid_from(*it, false);
    if (const auto it = body.find("angle"); it != body.end()) cfg.fixed_angle = it->get<double>();
    if (const auto it = body.find("radius"); it != body.end()) cfg.contact.radius = it->get<double>();
    if (const auto it = body.find("amplitude"); it != body.end()) cfg.contact.amplitude = it->get<double>();
    return cfg;
}

std::string cache_key(std::size_t hash, const RunConfig& cfg) {
    std::string key = std::to_string(hash) + "|" + std::string(to_string(cfg.incidence)) + "|" +
                      shortest(cfg.fixed_angle) + "|" + shortest(cfg.contact.radius) + "|" +
                      shortest(cfg.contact.amplitude);
    for (const auto* grid : {&cfg.angles, &cfg.etas, &cfg.arc}) {
        key += "|";
        for (double x : *grid) key += shortest(x) + ",";
    }
    return key;
}

const SeriesTable& table_named(const RunOutputs& run, std::string name) {
    if (name.size() > 4 && name.ends_with(".out")) name.resize(name.size() - 4);
    for (const SeriesTable* t : run.tables())
        if (t->name == name) return *t;
    fail(404, "no table named '" + name + "'");
}

std::filesystem::path data_file(const ServiceOptions& opt, const std::string& name) {
    const std::filesystem::path p(name);
    if (name.empty() || p.filename() != p || name == "." || name == ".." || p.extension() != ".dat")
        fail(400, "file name must be a plain *.dat name inside the data folder");
    return opt.data_dir / p;
}

}  // namespace

ApiService::ApiService(ServiceOptions options) : options_(std::move(options)) {}
ApiService::~ApiService() = default;

std::shared_ptr<ApiService::Session> ApiService::session(const std::string& token) {
    std::lock_guard lock(sessions_mu_);
    auto& s = sessions_[token.empty() ? "default" : token];
    if (!s) s = std::make_shared<Session>();
    return s;
}

void ApiService::mount(httplib::Server& server) {
    auto with_session = [this](auto body) {
        return guarded([this, body](const httplib::Request& req, httplib::Response& res) {
            auto s = session(req.get_header_value("X-Session-Token"));
            body(*s, req, res);
        });
    };

    server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, {{"status", "ok"}});
    });

    server.Get("/api/variants", with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        send_json(res, list_json(s.set));
    }));

    server.Post("/api/variants", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
        if (!looks_like_json(req)) {
            ParseResult parsed = parse_variants(req.body);
            std::lock_guard lock(s.mu);
            s.set = VariantSet(std::move(parsed.variants));
            json j = list_json(s.set);
            json ignored = json::array();
            for (const auto& d : parsed.ignored) ignored.push_back(codec::to_json(d));
            j["ignored"] = std::move(ignored);
            send_json(res, j);
            return;
        }
        const json body = parse_body(req);
        if (body.is_object() && !body.contains("variants")) {
            InputVariant v = codec::variant_from_json(body, {}, true);
            std::lock_guard lock(s.mu);
            s.set.add(std::move(v));
            json j = list_json(s.set);
            j["index"] = s.set.size() - 1;
            send_json(res, j, 201);
            return;
        }
        auto variants = codec::variants_from_json(body, true);
        std::lock_guard lock(s.mu);
        s.set = VariantSet(std::move(variants));
        send_json(res, list_json(s.set));
    }));

    server.Put(R"(/api/variants/(\d+))", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        std::lock_guard lock(s.mu);
        const std::size_t idx = index_param(req, s.set);
        InputVariant v = codec::variant_from_json(body, s.set.at(idx), true);
        const ValidationReport report = validate_variant(v);
        if (!report.valid()) fail(400, "variant is invalid", {{"report", codec::to_json(report)}});
        s.set.update(idx, v);
        send_json(res, {{"index", idx}, {"variant", codec::to_json(v)}, {"report", codec::to_json(report)},
                        {"modified", s.set.modified()}});
    }));

    server.Post(R"(/api/variants/(\d+)/clone)", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        s.set.clone_variant(index_param(req, s.set));
        json j = list_json(s.set);
        j["index"] = s.set.size() - 1;
        send_json(res, j, 201);
    }));

    server.Post(R"(/api/variants/(\d+)/select)", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        s.set.select(index_param(req, s.set));
        send_json(res, list_json(s.set));
    }));

    server.Delete(R"(/api/variants/(\d+))", with_session([](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        s.set.delete_variant(index_param(req, s.set));
        send_json(res, list_json(s.set));
    }));

    server.Post("/api/compute", with_session([this](Session& s, const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        const RunConfig cfg = config_from(body);

        InputVariant v;
        std::size_t idx = 0;
        bool unsaved = false;
        {
            std::lock_guard lock(s.mu);
            if (s.set.empty()) fail(404, "no variants loaded");
            if (const auto it = body.find("variant"); it != body.end()) {
                idx = it->get<std::size_t>();
                if (idx >= s.set.size()) fail(404, "no variant at index " + std::to_string(idx));
            } else {
                idx = s.set.selected().value_or(0);
            }
            v = s.set.at(idx);
            unsaved = s.set.modified();
        }
        const ValidationReport report = validate_variant(v);
        if (!report.valid()) fail(400, "variant is invalid", {{"report", codec::to_json(report)}});

        const std::size_t hash = variant_hash(v);
        const std::string key = cache_key(hash, cfg);
        json reply = {{"variant", idx}, {"ident", v.ident}, {"unsaved", unsaved}, {"warnings", report.warnings},
                      {"tables", {"cofec1", "displace", "stresses", "freq_cof", "freq_disp"}}};
        {
            std::lock_guard lock(s.mu);
            if (const auto it = s.cache.find(key); it != s.cache.end() && s.runs.contains(it->second)) {
                StoredRun& run = s.runs.at(it->second);
                run.index = idx;
                reply["run_id"] = it->second;
                reply["cached"] = true;
                send_json(res, reply);
                return;
            }
        }

        RunOutputs outputs = compute_run(v, cfg);

        std::lock_guard lock(s.mu);
        const std::string id = "run-" + std::to_string(s.next_run++);
        s.runs[id] = StoredRun{idx, hash, key, std::move(outputs)};
        s.order.push_back(id);
        s.cache[key] = id;
        while (s.order.size() > options_.max_runs) {
            const auto it = s.runs.find(s.order.front());
            if (it != s.runs.end()) {
                s.cache.erase(it->second.cache_key);
                s.runs.erase(it);
            }
            s.order.pop_front();
        }
        reply["run_id"] = id;
        reply["cached"] = false;
        send_json(res, reply, 201);
    }));

    // Resolves a run id and rejects it when its variant has changed since.
    auto fresh_run = [](Session& s, const std::string& id) -> const StoredRun& {
        const auto it = s.runs.find(id);
        if (it == s.runs.end()) fail(404, "unknown run '" + id + "'", {{"stale", false}});
        const StoredRun& run = it->second;
        if (run.index >= s.set.size() || variant_hash(s.set.at(run.index)) != run.hash)
            fail(404, "run '" + id + "' is stale: its variant changed", {{"stale", true}});
        return run;
    };

    server.Get(R"(/api/runs/([^/]+)/tables/([^/]+))",
               with_session([this, fresh_run](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        const StoredRun& run = fresh_run(s, req.matches[1]);
        const SeriesTable& t = table_named(run.outputs, req.matches[2]);
        const std::size_t per_row = t.columns() + 1;
        const std::size_t max_rows = std::max<std::size_t>(1, options_.max_points / per_row);
        std::size_t offset = 0, limit = max_rows;
        if (req.has_param("offset")) offset = std::stoul(req.get_param_value("offset"));
        if (req.has_param("limit")) limit = std::min(max_rows, std::stoul(req.get_param_value("limit")));
        send_json(res, codec::table_to_json(t, offset, limit));
    }));

    server.Get(R"(/api/runs/([^/]+)/log)", with_session([fresh_run](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        res.set_content(fresh_run(s, req.matches[1]).outputs.log_text, "text/plain");
    }));

    server.Get(R"(/api/runs/([^/]+)/check)", with_session([fresh_run](Session& s, const httplib::Request& req, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        res.set_content(fresh_run(s, req.matches[1]).outputs.check, "text/plain");
    }));

    server.Get("/api/files/dat", with_session([](Session& s, const httplib::Request&, httplib::Response& res) {
        std::lock_guard lock(s.mu);
        const auto text = serialize_variants(s.set.variants());
        if (!text) fail(409, "nothing to save: the variant set is empty");
        const std::string name = s.set.path() ? s.set.path()->filename().string() : "variants.dat";
        res.set_header("Content-Disposition", "attachment; filename=\"" + name + "\"");
        res.set_content(*text, "text/plain");
    }));

    server.Get("/api/files", guarded([this](const httplib::Request&, httplib::Response& res) {
        json names = json::array();
        std::error_code ec;
        std::vector<std::string> found;
        for (const auto& e : std::filesystem::directory_iterator(options_.data_dir, ec))
            if (e.is_regular_file() && e.path().extension() == ".dat") found.push_back(e.path().filename().string());
        std::sort(found.begin(), found.end());
        for (auto& f : found) names.push_back(std::move(f));
        send_json(res, {{"files", std::move(names)}});
    }));

    server.Post("/api/files/open", with_session([this](Session& s, const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        const auto path = data_file(options_, body.value("name", std::string{}));
        if (!std::filesystem::exists(path)) fail(404, "no such file '" + path.filename().string() + "'");
        std::vector<ParseDiagnostic> ignored;
        VariantSet set = load_variants(path, &ignored);
        std::lock_guard lock(s.mu);
        s.set = std::move(set);
        json j = list_json(s.set);
        json diag = json::array();
        for (const auto& d : ignored) diag.push_back(codec::to_json(d));
        j["ignored"] = std::move(diag);
        send_json(res, j);
    }));

    server.Post("/api/files/save", with_session([this](Session& s, const httplib::Request& req, httplib::Response& res) {
        const json body = parse_body(req);
        std::lock_guard lock(s.mu);
        std::string name = body.value("name", std::string{});
        if (name.empty() && s.set.path()) name = s.set.path()->filename().string();
        const auto path = data_file(options_, name);
        if (!save_with_backup(path, s.set)) fail(409, "nothing to save: the variant set is empty");
        send_json(res, {{"saved", path.filename().string()}, {"modified", s.set.modified()}});
    }));

    if (options_.ui_dir && std::filesystem::is_directory(*options_.ui_dir))
        server.set_mount_point("/", options_.ui_dir->string());
}

}  // namespace wm::service
