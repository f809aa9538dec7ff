#include <gtest/gtest.h>

#include <filesystem>
#include <memory>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "api_service.hpp"
#include "oracles.hpp"
#include "wm/variant_store.hpp"

namespace wm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kSample = fs::path(WM_SAMPLES_DIR) / "QQ.dat";

const char* kQuickGrids = R"("angles": "1:89:4", "etas": "log:0.1:10:5")";

class Api : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = test::temp_dir("api");
        service::ServiceOptions opt;
        opt.data_dir = dir_;
        opt.max_points = 40;
        service_ = std::make_unique<service::ApiService>(opt);
        service_->mount(server_);
        port_ = server_.bind_to_any_port("127.0.0.1");
        ASSERT_GT(port_, 0);
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    }

    void TearDown() override {
        server_.stop();
        thread_.join();
        fs::remove_all(dir_);
    }

    httplib::Result post(const std::string& path, const std::string& body, const char* type = "application/json") {
        return client_->Post(path, headers_, body, type);
    }
    httplib::Result put(const std::string& path, const std::string& body) {
        return client_->Put(path, headers_, body, "application/json");
    }
    httplib::Result get(const std::string& path) { return client_->Get(path, headers_); }
    httplib::Result del(const std::string& path) { return client_->Delete(path, headers_); }

    json load_sample() {
        auto r = post("/api/variants", test::read_file(kSample), "text/plain");
        EXPECT_EQ(r->status, 200);
        return json::parse(r->body);
    }

    std::string compute(const std::string& extra = "") {
        auto r = post("/api/compute", std::string("{") + kQuickGrids + extra + "}");
        EXPECT_TRUE(r->status == 200 || r->status == 201) << r->body;
        return json::parse(r->body).at("run_id").get<std::string>();
    }

    fs::path dir_;
    std::unique_ptr<service::ApiService> service_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
    std::unique_ptr<httplib::Client> client_;
    httplib::Headers headers_ = {{"X-Session-Token", "test"}};
};

TEST_F(Api, Health) {
    auto r = get("/api/health");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(json::parse(r->body).at("status"), "ok");
}

TEST_F(Api, LoadDatBodyListsTwoVariants) {
    const json j = load_sample();
    ASSERT_EQ(j.at("variants").size(), 2u);
    EXPECT_EQ(j["variants"][0]["ident"], "VariantA");
    EXPECT_EQ(j["variants"][1]["ident"], "VariantB");
    EXPECT_EQ(j["selected"], 1);
    EXPECT_TRUE(j["ignored"].empty());
    EXPECT_EQ(json::parse(get("/api/variants")->body).at("variants").size(), 2u);
}

TEST_F(Api, SessionsAreIsolated) {
    load_sample();
    auto other = client_->Get("/api/variants", {{"X-Session-Token", "someone-else"}});
    EXPECT_TRUE(json::parse(other->body).at("variants").empty());
}

TEST_F(Api, AddCloneSelectDelete) {
    load_sample();
    auto added = post("/api/variants", R"({"ident": "C", "kf": 2})");
    EXPECT_EQ(added->status, 201);
    EXPECT_EQ(json::parse(added->body).at("index"), 2);

    auto cloned = post("/api/variants/0/clone", "");
    EXPECT_EQ(cloned->status, 201);
    const json c = json::parse(cloned->body);
    EXPECT_EQ(c["variants"][3]["ident"], "VariantA~Clone");
    EXPECT_EQ(c["selected"], 3);
    EXPECT_TRUE(c["modified"]);

    auto removed = del("/api/variants/3");
    EXPECT_EQ(json::parse(removed->body).at("selected"), 2);
    EXPECT_EQ(del("/api/variants/9")->status, 404);
    EXPECT_EQ(post("/api/variants/1/select", "")->status, 200);
    EXPECT_EQ(json::parse(get("/api/variants")->body).at("selected"), 1);
}

TEST_F(Api, PutValidatesAndRejectsUnknownKeys) {
    load_sample();
    auto bad = put("/api/variants/0", R"({"anus": 0.5})");
    EXPECT_EQ(bad->status, 400);
    const json b = json::parse(bad->body);
    EXPECT_FALSE(b.at("report").at("violations").empty());
    EXPECT_EQ(json::parse(get("/api/variants")->body)["variants"][0]["anus"], 0.35);

    EXPECT_EQ(put("/api/variants/0", R"({"colour": 1})")->status, 400);
    EXPECT_EQ(put("/api/variants/0", "{not json")->status, 400);

    auto ok = put("/api/variants/0", R"({"kf": 2})");
    EXPECT_EQ(ok->status, 200);
    EXPECT_TRUE(json::parse(ok->body).at("modified"));
}

TEST_F(Api, ComputeTablesAndCache) {
    load_sample();
    auto first = post("/api/compute", std::string(R"({"variant": 0, )") + kQuickGrids + "}");
    ASSERT_EQ(first->status, 201) << first->body;
    const json f = json::parse(first->body);
    EXPECT_EQ(f.at("ident"), "VariantA");
    EXPECT_FALSE(f.at("cached"));
    const std::string id = f.at("run_id");

    auto again = post("/api/compute", std::string(R"({"variant": 0, )") + kQuickGrids + "}");
    EXPECT_EQ(again->status, 200);
    EXPECT_TRUE(json::parse(again->body).at("cached"));
    EXPECT_EQ(json::parse(again->body).at("run_id"), id);

    // 40 points per response with 4 columns: 10 rows per chunk.
    const json t = json::parse(get("/api/runs/" + id + "/tables/cofec1")->body);
    EXPECT_EQ(t.at("rows"), 23);
    EXPECT_EQ(t.at("count"), 10);
    EXPECT_EQ(t.at("next_offset"), 10);
    EXPECT_EQ(t.at("series").size(), 3u);
    const json tail = json::parse(get("/api/runs/" + id + "/tables/cofec1.out?offset=20")->body);
    EXPECT_EQ(tail.at("count"), 3);
    EXPECT_TRUE(tail.at("next_offset").is_null());

    auto log = get("/api/runs/" + id + "/log");
    EXPECT_EQ(log->body.rfind("Log: VariantA (Comment for VariantA)", 0), 0u);
    EXPECT_NE(get("/api/runs/" + id + "/check")->body.find("residual: "), std::string::npos);
    EXPECT_EQ(get("/api/runs/" + id + "/tables/nothing")->status, 404);
}

TEST_F(Api, EditMakesRunStale) {
    load_sample();
    const std::string id = compute(R"(, "variant": 1)");
    EXPECT_EQ(get("/api/runs/" + id + "/tables/displace")->status, 200);
    ASSERT_EQ(put("/api/variants/1", R"({"kf": 3})")->status, 200);
    auto stale = get("/api/runs/" + id + "/tables/displace");
    EXPECT_EQ(stale->status, 404);
    EXPECT_TRUE(json::parse(stale->body).at("stale"));

    auto unknown = get("/api/runs/run-999/log");
    EXPECT_EQ(unknown->status, 404);
    EXPECT_FALSE(json::parse(unknown->body).at("stale"));

    auto fresh = post("/api/compute", std::string(R"({"variant": 1, )") + kQuickGrids + "}");
    EXPECT_EQ(fresh->status, 201);
    EXPECT_TRUE(json::parse(fresh->body).at("unsaved"));
}

TEST_F(Api, ComputeErrors) {
    EXPECT_EQ(post("/api/compute", "{}")->status, 404);
    load_sample();
    EXPECT_EQ(post("/api/compute", R"({"variant": 5})")->status, 404);
    EXPECT_EQ(post("/api/compute", R"({"incidence": "Q"})")->status, 400);
    EXPECT_EQ(post("/api/compute", R"({"angles": "1:95:1"})")->status, 400);
    post("/api/variants", R"({"ident": "Massless", "rhof": 0, "kf": 1, "i_seepage": 0, "i_eta": 1})");
    EXPECT_EQ(post("/api/compute", std::string(R"({"variant": 2, )") + kQuickGrids + "}")->status, 422);
}

TEST_F(Api, DownloadParsesBack) {
    EXPECT_EQ(get("/api/files/dat")->status, 409);
    load_sample();
    auto r = get("/api/files/dat");
    ASSERT_EQ(r->status, 200);
    EXPECT_NE(r->get_header_value("Content-Disposition").find("attachment"), std::string::npos);
    EXPECT_EQ(parse_variants(r->body).variants, load_variants(kSample).variants());
}

TEST_F(Api, SaveAndOpenInsideDataDir) {
    load_sample();
    EXPECT_EQ(post("/api/files/save", R"({"name": "../escape.dat"})")->status, 400);
    EXPECT_EQ(post("/api/files/save", R"({"name": "notes.txt"})")->status, 400);
    auto saved = post("/api/files/save", R"({"name": "mine.dat"})");
    ASSERT_EQ(saved->status, 200) << saved->body;
    EXPECT_FALSE(json::parse(saved->body).at("modified"));
    EXPECT_TRUE(fs::exists(dir_ / "mine.dat"));
    ASSERT_EQ(post("/api/files/save", R"({"name": "mine.dat"})")->status, 200);
    EXPECT_TRUE(fs::exists(dir_ / "mine.bak"));

    const json files = json::parse(get("/api/files")->body);
    EXPECT_EQ(files.at("files"), json::array({"mine.dat"}));

    del("/api/variants/0");
    auto opened = post("/api/files/open", R"({"name": "mine.dat"})");
    ASSERT_EQ(opened->status, 200);
    EXPECT_EQ(json::parse(opened->body).at("variants").size(), 2u);
    EXPECT_EQ(post("/api/files/open", R"({"name": "missing.dat"})")->status, 404);
}

}  // namespace
}  // namespace wm
