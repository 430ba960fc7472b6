#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "linknet/url.hpp"

namespace linknet {

// Millisecond clock used for politeness delays and timestamps. The virtual
// implementation advances instantly so crawls over fixture corpora are
// deterministic and fast.
class Clock {
  public:
    virtual ~Clock() = default;
    virtual std::int64_t now_ms() = 0;
    virtual void sleep_ms(std::int64_t ms) = 0;
};

class SystemClock final : public Clock {
  public:
    std::int64_t now_ms() override;
    void sleep_ms(std::int64_t ms) override;
};

class VirtualClock final : public Clock {
  public:
    explicit VirtualClock(std::int64_t start_ms = 0) : now_(start_ms) {}
    std::int64_t now_ms() override { return now_; }
    void sleep_ms(std::int64_t ms) override { now_ += ms; }

  private:
    std::int64_t now_;
};

struct FetchResponse {
    int status = 0;  // HTTP status, or 0 for transport failure
    std::string content_type;
    std::string body;
    std::optional<std::string> redirect_location;

    bool ok() const { return status >= 200 && status < 300; }
    bool is_redirect() const { return status >= 300 && status < 400 && redirect_location; }
};

class Fetcher {
  public:
    virtual ~Fetcher() = default;
    virtual FetchResponse fetch(const Url& url) = 0;
    virtual std::string name() const = 0;
};

// Serves http://<host>/<path> from `corpus_dir/<host>/<percent-encoded-path>.html`;
// a missing file yields 404. Two sidecar conventions:
//   <host>/robots.txt                      — served for /robots.txt
//   <host>/<percent-encoded-path>.redirect — 301 whose body is the location
class CorpusFetcher final : public Fetcher {
  public:
    explicit CorpusFetcher(std::string corpus_dir);
    FetchResponse fetch(const Url& url) override;
    std::string name() const override { return "corpus:" + dir_; }

    static std::string file_name_for_path(const std::string& path);

  private:
    std::string dir_;
};

// Live HTTP fetcher (no TLS; https URLs are refused with a transport error).
class HttpFetcher final : public Fetcher {
  public:
    HttpFetcher(std::string user_agent, std::int64_t timeout_ms);
    FetchResponse fetch(const Url& url) override;
    std::string name() const override { return "http"; }

  private:
    std::string user_agent_;
    std::int64_t timeout_ms_;
};

}  // namespace linknet
