#pragma once

#include <cstdint>
#include <string>

namespace specrag {

struct HttpReply {
    std::string body;
    std::uint64_t request_id = 0;

    /// Suffix for error messages so Timeout/BadStatus/MalformedResponse all
    /// carry the same correlation id.
    std::string tag() const { return " (request " + std::to_string(request_id) + ")"; }
};

/// Shared POST-JSON helper for the embed/rerank/generate service contracts.
/// Throws Error{Timeout | BadStatus}; both carry the request id, and the
/// returned reply exposes it for MalformedResponse errors raised by callers.
HttpReply http_post_json(const std::string& endpoint, const std::string& path,
                         const std::string& body, std::size_t timeout_ms);

} // namespace specrag
