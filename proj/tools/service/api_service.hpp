#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "wm/run.hpp"
#include "wm/variant_store.hpp"

namespace httplib {
class Server;
}

namespace wm::service {

struct ServiceOptions {
    /// Folder the open/save endpoints are confined to.
    std::filesystem::path data_dir = "samples";
    /// Static UI bundle served at "/" when present.
    std::optional<std::filesystem::path> ui_dir;
    /// Upper bound on points (rows x columns) per table response.
    std::size_t max_points = 100000;
    /// Runs kept per session before the oldest is evicted.
    std::size_t max_runs = 64;
};

/// HTTP facade over the variant store and the run pipeline. State lives in
/// per-token sessions (header X-Session-Token, "default" when absent); every
/// request on a session holds that session's lock except the compute itself.
class ApiService {
public:
    explicit ApiService(ServiceOptions options = {});
    ~ApiService();

    ApiService(const ApiService&) = delete;
    ApiService& operator=(const ApiService&) = delete;

    void mount(httplib::Server& server);

    const ServiceOptions& options() const { return options_; }

    struct Session;

private:
    std::shared_ptr<Session> session(const std::string& token);

    ServiceOptions options_;
    std::mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
};

}  // namespace wm::service
