#include "linknet/fetch.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>

namespace linknet {

namespace fs = std::filesystem;

std::int64_t SystemClock::now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_ms(std::int64_t ms) {
    if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

CorpusFetcher::CorpusFetcher(std::string corpus_dir) : dir_(std::move(corpus_dir)) {}

std::string CorpusFetcher::file_name_for_path(const std::string& path) {
    return percent_encode(path.empty() ? "/" : path) + ".html";
}

FetchResponse CorpusFetcher::fetch(const Url& url) {
    fs::path host_dir = fs::path(dir_) / url.host;
    std::string path = url.path.empty() ? "/" : url.path;

    if (path == "/robots.txt") {
        std::ifstream in(host_dir / "robots.txt", std::ios::binary);
        if (!in) return FetchResponse{404, "text/plain", "", std::nullopt};
        std::stringstream buf;
        buf << in.rdbuf();
        return FetchResponse{200, "text/plain", buf.str(), std::nullopt};
    }

    std::string stem = percent_encode(path);
    fs::path redirect_file = host_dir / (stem + ".redirect");
    if (fs::exists(redirect_file)) {
        std::ifstream in(redirect_file);
        std::string location;
        std::getline(in, location);
        return FetchResponse{301, "text/html", "", location};
    }

    std::ifstream in(host_dir / (stem + ".html"), std::ios::binary);
    if (!in) return FetchResponse{404, "text/html", "", std::nullopt};
    std::stringstream buf;
    buf << in.rdbuf();
    return FetchResponse{200, "text/html", buf.str(), std::nullopt};
}

HttpFetcher::HttpFetcher(std::string user_agent, std::int64_t timeout_ms)
    : user_agent_(std::move(user_agent)), timeout_ms_(timeout_ms) {}

FetchResponse HttpFetcher::fetch(const Url& url) {
    if (url.scheme != "http")
        return FetchResponse{0, "", "", std::nullopt};

    std::string host_port = url.host;
    if (url.port) host_port += ":" + std::to_string(*url.port);
    httplib::Client client("http://" + host_port);
    client.set_follow_location(false);  // the crawler follows redirects itself
    client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
    client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));

    std::string target = url.path.empty() ? "/" : url.path;
    if (!url.query.empty()) target += "?" + url.query;

    httplib::Headers headers{{"User-Agent", user_agent_}};
    auto res = client.Get(target, headers);
    if (!res) return FetchResponse{0, "", "", std::nullopt};

    FetchResponse out;
    out.status = res->status;
    out.content_type = res->get_header_value("Content-Type");
    out.body = res->body;
    if (res->has_header("Location")) out.redirect_location = res->get_header_value("Location");
    return out;
}

}  // namespace linknet
