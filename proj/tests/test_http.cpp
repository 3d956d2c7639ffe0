// Exercises the three HTTP service contracts against a local in-process
// server. Skipped gracefully if the sandbox forbids binding a socket.

#include "specrag/embedder.hpp"
#include "specrag/error.hpp"
#include "specrag/generator.hpp"
#include "specrag/reranker.hpp"

#include <doctest.h>

#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

using namespace specrag;

namespace {

class LocalServices {
public:
    LocalServices() {
        server_.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = nlohmann::json::parse(req.body);
            nlohmann::json out;
            out["vectors"] = nlohmann::json::array();
            for (const auto& text : body["texts"]) {
                // Length-keyed direction, deliberately NOT unit norm: the
                // client must normalize.
                const double raw = 1.0 + static_cast<double>(text.get<std::string>().size() % 7);
                std::vector<double> v(16, 0.0);
                v[text.get<std::string>().size() % 16] = raw;
                v[0] += 0.5;
                out["vectors"].push_back(v);
            }
            res.set_content(out.dump(), "application/json");
        });
        server_.Post("/score", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = nlohmann::json::parse(req.body);
            nlohmann::json out;
            out["scores"] = nlohmann::json::array();
            for (const auto& text : body["texts"]) {
                out["scores"].push_back(static_cast<double>(text.get<std::string>().size()));
            }
            res.set_content(out.dump(), "application/json");
        });
        server_.Post("/generate", [](const httplib::Request& req, httplib::Response& res) {
            const auto body = nlohmann::json::parse(req.body);
            (void)body;
            res.set_content(nlohmann::json{{"text", "option 2"}}.dump(), "application/json");
        });
        server_.Post("/broken", [](const httplib::Request&, httplib::Response& res) {
            res.status = 500;
            res.set_content("boom", "text/plain");
        });
        server_.Post("/notjson/embed", [](const httplib::Request&, httplib::Response& res) {
            res.set_content("this is not json", "application/json");
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ > 0) {
            thread_ = std::thread([this] { server_.listen_after_bind(); });
            server_.wait_until_ready();
        }
    }

    ~LocalServices() {
        if (running()) {
            server_.stop();
            thread_.join();
        }
    }

    bool running() const { return port_ > 0; }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = -1;
    std::thread thread_;
};

} // namespace

TEST_CASE("http providers round-trip through a local service") {
    LocalServices services;
    if (!services.running()) {
        MESSAGE("socket binding unavailable; skipping HTTP contract tests");
        return;
    }

    SUBCASE("embedder normalizes and preserves order") {
        EmbedderConfig config;
        config.provider = EmbedderProvider::Http;
        config.endpoint = services.endpoint();
        config.dims = 16;
        config.batch_size = 2; // forces multiple batches
        HttpEmbedder embedder(config);

        const std::vector<std::string> texts = {"a", "bb", "ccc", "dddd", "eeeee"};
        const auto vectors = embedder.embed(texts);
        REQUIRE(vectors.size() == texts.size());
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            CHECK(vectors[i].dims() == 16);
            CHECK(vectors[i].norm() == doctest::Approx(1.0).epsilon(1e-6));
        }
        // Same text twice embeds identically even across batches.
        const auto again = embedder.embed({"ccc"});
        CHECK(again[0].values == vectors[2].values);
    }

    SUBCASE("scorer returns one score per text") {
        HttpScorer scorer(services.endpoint());
        const auto scores = scorer.score("q", {"aa", "bbbb"});
        REQUIRE(scores.size() == 2);
        CHECK(scores[0] == doctest::Approx(2.0));
        CHECK(scores[1] == doctest::Approx(4.0));
    }

    SUBCASE("generator returns the text field and flags oversize prompts") {
        HttpGenerator gen(services.endpoint(), 16, /*assumed_window=*/4);
        AssembledPrompt prompt;
        prompt.text = "one two three four five six";
        prompt.token_estimate = 6;
        const auto result = gen.generate(prompt);
        CHECK(result.text == "option 2");
        CHECK(result.window_warning); // 6 tokens > assumed window of 4
    }

    SUBCASE("non-200 responses raise BadStatus with a request id") {
        // No handler is registered under this prefix, so the server answers 404.
        HttpScorer scorer(services.endpoint() + "/missing");
        try {
            scorer.score("q", {"t"});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::BadStatus);
            CHECK(std::string(e.what()).find("request") != std::string::npos);
        }
    }

    SUBCASE("malformed bodies raise MalformedResponse") {
        EmbedderConfig config;
        config.provider = EmbedderProvider::Http;
        config.endpoint = services.endpoint() + "/notjson";
        config.dims = 16;
        HttpEmbedder embedder(config);
        try {
            embedder.embed({"text"});
            CHECK(false);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::MalformedResponse);
            CHECK(std::string(e.what()).find("request") != std::string::npos);
        }
    }

    SUBCASE("unreachable hosts raise transport errors") {
        HttpScorer scorer("http://127.0.0.1:1", 300);
        CHECK_THROWS_AS(scorer.score("q", {"t"}), Error);
    }
}
