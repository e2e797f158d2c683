#include <httplib.h>
#include <json.hpp>

#include <thread>

#include "dgot/errors.hpp"
#include "dgot/gateway.hpp"

namespace dgot {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty())
        throw ConfigError("wire backend needs a base URL (set DGOT_API_BASE)");
    if (options_.max_attempts < 1)
        throw ConfigError("wire backend needs max_attempts >= 1");

    std::size_t scheme_end = options_.base_url.find("://");
    std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
    std::size_t path_start = options_.base_url.find('/', host_start);
    if (path_start == std::string::npos) {
        origin_ = options_.base_url;
    } else {
        origin_ = options_.base_url.substr(0, path_start);
        path_prefix_ = options_.base_url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
}

CompletionResult HttpBackend::complete(const CompletionRequest& request) {
    request.validate();

    json body;
    body["model"] = options_.model;
    body["messages"] = json::array({json{{"role", "user"}, {"content", request.prompt}}});
    body["temperature"] = request.temperature;
    body["top_p"] = request.top_p;
    body["max_tokens"] = request.max_response_tokens;
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (!options_.api_key.empty())
        headers.emplace("Authorization", "Bearer " + options_.api_key);

    std::string last_error;
    for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        if (attempt > 1)
            std::this_thread::sleep_for(options_.backoff_base * (1 << (attempt - 2)));

        httplib::Client client(origin_);
        client.set_connection_timeout(options_.timeout);
        client.set_read_timeout(options_.timeout);
        client.set_write_timeout(options_.timeout);

        auto res = client.Post(path_prefix_ + "/chat/completions", headers, payload,
                               "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error HTTP " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200)
            throw BackendError("backend rejected request: HTTP " +
                                   std::to_string(res->status) + " " + res->body,
                               attempt);

        json reply;
        try {
            reply = json::parse(res->body);
        } catch (const json::exception& e) {
            throw BackendError(std::string("malformed backend response: ") + e.what(),
                               attempt);
        }
        if (!reply.contains("choices") || !reply["choices"].is_array() ||
            reply["choices"].empty())
            throw BackendError("backend response has no choices", attempt);
        const json& message = reply["choices"][0].value("message", json::object());
        if (!message.contains("content") || !message["content"].is_string())
            throw BackendError("backend response has no message content", attempt);

        CompletionResult result;
        result.text = message["content"].get<std::string>();
        if (reply.contains("usage") && reply["usage"].is_object()) {
            const json& usage = reply["usage"];
            result.prompt_tokens =
                usage.value("prompt_tokens", approx_token_count(request.prompt));
            result.response_tokens =
                usage.value("completion_tokens", approx_token_count(result.text));
        } else {
            result.prompt_tokens = approx_token_count(request.prompt);
            result.response_tokens = approx_token_count(result.text);
        }
        return result;
    }
    throw BackendError(last_error + " (after " + std::to_string(options_.max_attempts) +
                           " attempts)",
                       options_.max_attempts);
}

} // namespace dgot
