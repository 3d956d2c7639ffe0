#include "specrag/http_client.hpp"

#include "specrag/error.hpp"

#include <atomic>
#include <cstddef>

#include <httplib.h>

namespace specrag {

namespace {

std::atomic<std::uint64_t> g_request_counter{0};

struct SplitUrl {
    std::string base;        // scheme://host[:port]
    std::string path_prefix; // possibly empty, no trailing slash
};

SplitUrl split_endpoint(const std::string& endpoint) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        raise(ErrorCode::InvalidConfig, "endpoint must include a scheme: " + endpoint);
    }
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, ""};
    }
    std::string prefix = endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {endpoint.substr(0, path_start), prefix};
}

} // namespace

HttpReply http_post_json(const std::string& endpoint, const std::string& path,
                         const std::string& body, std::size_t timeout_ms) {
    HttpReply reply;
    reply.request_id = ++g_request_counter;
    const std::string tag = reply.tag();

    const SplitUrl url = split_endpoint(endpoint);
    httplib::Client client(url.base);
    client.set_connection_timeout(0, static_cast<long>(timeout_ms) * 1000);
    client.set_read_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);
    client.set_write_timeout(timeout_ms / 1000, (timeout_ms % 1000) * 1000);

    auto res = client.Post(url.path_prefix + path, body, "application/json");
    if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
            err == httplib::Error::Write) {
            raise(ErrorCode::Timeout, "no response from " + endpoint + path + tag);
        }
        raise(ErrorCode::BadStatus,
              "transport failure against " + endpoint + path + ": " + httplib::to_string(err) + tag);
    }
    if (res->status != 200) {
        raise(ErrorCode::BadStatus,
              "HTTP " + std::to_string(res->status) + " from " + endpoint + path + tag);
    }
    reply.body = std::move(res->body);
    return reply;
}

} // namespace specrag
