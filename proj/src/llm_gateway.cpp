#include "lm4opt/llm_gateway.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <thread>

#include "lm4opt/hash.hpp"
#include "lm4opt/jsonl.hpp"
#include "lm4opt/prompts.hpp"

#include <httplib.h>

namespace lm4opt {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string concat_contents(const ChatRequest& req) {
    std::string all;
    for (const auto& m : req.messages) {
        all += m.content;
    }
    return all;
}

}  // namespace

std::string hex64(std::uint64_t value) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xF];
        value >>= 4;
    }
    return out;
}

std::uint64_t request_fingerprint(const ChatRequest& req) {
    return fnv1a64(concat_contents(req));
}

// ---------------------------------------------------------------- schema --

std::string ResponseSchema::prompt_instruction() const {
    std::string shape = "{";
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const auto& f = fields[i];
        if (i > 0) {
            shape += ", ";
        }
        shape += "\"" + f.name + "\": ";
        if (f.type == Field::Type::Integer) {
            if (f.min_value && f.max_value) {
                shape += "<integer between " + std::to_string(*f.min_value) + " and " +
                         std::to_string(*f.max_value) + ">";
            } else {
                shape += "<integer>";
            }
        } else {
            shape += f.require_nonempty ? "\"<nonempty text>\"" : "\"<text>\"";
        }
    }
    shape += "}";
    std::string out = "Respond ONLY with a single JSON object of the form\n" + shape + "\n";
    if (!semantic_rule_text.empty()) {
        out += "Rules: " + semantic_rule_text + "\n";
    }
    out += "Do not include any text outside the JSON object.";
    return out;
}

std::optional<std::string> ResponseSchema::validate(const nlohmann::json& value,
                                                    nlohmann::json& normalized) const {
    if (!value.is_object()) {
        return "response is not a JSON object";
    }
    normalized = nlohmann::json::object();
    for (const auto& f : fields) {
        const nlohmann::json* found = nullptr;
        std::string want = lower(f.name);
        for (auto it = value.begin(); it != value.end(); ++it) {
            if (lower(it.key()) == want) {
                found = &it.value();
                break;
            }
        }
        if (!found) {
            return "missing field \"" + f.name + "\"";
        }
        if (f.type == Field::Type::Integer) {
            if (!found->is_number_integer()) {
                return "field \"" + f.name + "\" is not an integer";
            }
            long v = found->get<long>();
            if ((f.min_value && v < *f.min_value) || (f.max_value && v > *f.max_value)) {
                return "field \"" + f.name + "\" value " + std::to_string(v) +
                       " is outside [" + std::to_string(f.min_value.value_or(0)) + ", " +
                       std::to_string(f.max_value.value_or(0)) + "]";
            }
            normalized[f.name] = v;
        } else {
            if (!found->is_string()) {
                return "field \"" + f.name + "\" is not a string";
            }
            auto s = found->get<std::string>();
            if (f.require_nonempty && s.find_first_not_of(" \t\r\n") == std::string::npos) {
                return "field \"" + f.name + "\" must be nonempty";
            }
            normalized[f.name] = s;
        }
    }
    if (semantic_check) {
        if (auto err = semantic_check(normalized)) {
            return err;
        }
    }
    return std::nullopt;
}

std::optional<nlohmann::json> extract_json_object(std::string_view text) {
    for (std::size_t start = text.find('{'); start != std::string_view::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            char c = text[i];
            if (in_string) {
                if (c == '\\') {
                    ++i;
                } else if (c == '"') {
                    in_string = false;
                }
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    auto candidate = text.substr(start, i - start + 1);
                    nlohmann::json parsed = nlohmann::json::parse(candidate, nullptr, false);
                    if (!parsed.is_discarded()) {
                        return parsed;
                    }
                    break;
                }
            }
        }
    }
    return std::nullopt;
}

// --------------------------------------------------------------- backend --

struct Backend::Limiter {
    explicit Limiter(int max) : max_in_flight(max) {}
    std::mutex mu;
    std::condition_variable cv;
    int max_in_flight;
    int in_flight = 0;
    int high_water = 0;
};

Backend::Backend(int max_concurrent)
    : limiter_(std::make_shared<Limiter>(std::max(1, max_concurrent))) {}

ChatResponse Backend::complete_once(const ChatRequest& req) {
    {
        std::unique_lock lock(limiter_->mu);
        limiter_->cv.wait(lock, [&] { return limiter_->in_flight < limiter_->max_in_flight; });
        ++limiter_->in_flight;
        limiter_->high_water = std::max(limiter_->high_water, limiter_->in_flight);
    }
    try {
        ChatResponse resp = do_complete(req);
        {
            std::lock_guard lock(limiter_->mu);
            --limiter_->in_flight;
        }
        limiter_->cv.notify_one();
        return resp;
    } catch (...) {
        {
            std::lock_guard lock(limiter_->mu);
            --limiter_->in_flight;
        }
        limiter_->cv.notify_one();
        throw;
    }
}

int Backend::in_flight_high_water() const {
    std::lock_guard lock(limiter_->mu);
    return limiter_->high_water;
}

// ------------------------------------------------------------------ mock --

MockScript MockScript::load(const std::filesystem::path& path) {
    MockScript script;
    jsonl::for_each_record(
        path,
        [&](std::size_t line_no, const nlohmann::json& rec) {
            Entry e;
            if (rec.contains("error")) {
                e.error = rec["error"].get<std::string>();
                if (e.error != "transport" && e.error != "timeout") {
                    throw GatewayError(GatewayError::Kind::Script,
                                       "mock script line " + std::to_string(line_no) +
                                           ": unknown error kind '" + e.error + "'");
                }
            } else if (rec.contains("response")) {
                e.response = rec["response"].get<std::string>();
            } else {
                throw GatewayError(GatewayError::Kind::Script,
                                   "mock script line " + std::to_string(line_no) +
                                       ": needs 'response' or 'error'");
            }
            if (rec.contains("fingerprint")) {
                auto hexstr = rec["fingerprint"].get<std::string>();
                script.by_fingerprint[std::stoull(hexstr, nullptr, 16)].push_back(std::move(e));
            } else if (rec.contains("match")) {
                script.by_fingerprint[fnv1a64(rec["match"].get<std::string>())].push_back(
                    std::move(e));
            } else {
                script.queue.push_back(std::move(e));
            }
        },
        [](std::string msg) {
            return GatewayError(GatewayError::Kind::Script, std::move(msg));
        });
    return script;
}

MockBackend::MockBackend(MockScript script, int max_concurrent, long simulated_latency_sleep_ms)
    : Backend(max_concurrent), script_(std::move(script)), sleep_ms_(simulated_latency_sleep_ms) {}

std::size_t MockBackend::remaining() const {
    std::lock_guard lock(mu_);
    std::size_t n = script_.queue.size();
    for (const auto& [_, q] : script_.by_fingerprint) {
        n += q.size();
    }
    return n;
}

ChatResponse MockBackend::do_complete(const ChatRequest& req) {
    MockScript::Entry entry;
    {
        std::lock_guard lock(mu_);
        auto fp = request_fingerprint(req);
        auto it = script_.by_fingerprint.find(fp);
        if (it != script_.by_fingerprint.end() && !it->second.empty()) {
            entry = std::move(it->second.front());
            it->second.pop_front();
        } else if (!script_.queue.empty()) {
            entry = std::move(script_.queue.front());
            script_.queue.pop_front();
        } else {
            throw GatewayError(GatewayError::Kind::Script,
                               "mock script exhausted (tag " + req.request_tag + ")",
                               req.request_tag);
        }
    }
    if (sleep_ms_ > 0) {
        std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms_));
    }
    if (entry.error == "transport") {
        throw GatewayError(GatewayError::Kind::Transport, "scripted transport failure",
                           req.request_tag);
    }
    if (entry.error == "timeout") {
        throw GatewayError(GatewayError::Kind::Timeout, "scripted timeout", req.request_tag);
    }
    ChatResponse resp;
    resp.text = std::move(entry.response);
    resp.latency_ms = 0;  // fixed so mock runs are byte-reproducible
    resp.backend_id = id();
    return resp;
}

// ------------------------------------------------------------------ http --

HttpBackend::HttpBackend(const BackendConfig& cfg) : Backend(cfg.max_concurrent_requests), cfg_(cfg) {
    std::string url = cfg.endpoint_url;
    if (url.rfind("https://", 0) == 0) {
        tls_ = true;
        url = url.substr(8);
        port_ = 443;
    } else if (url.rfind("http://", 0) == 0) {
        url = url.substr(7);
        port_ = 80;
    } else {
        throw GatewayError(GatewayError::Kind::Config,
                           "endpoint_url must start with http:// or https://: " +
                               cfg.endpoint_url);
    }
    auto slash = url.find('/');
    std::string hostport = slash == std::string::npos ? url : url.substr(0, slash);
    path_ = slash == std::string::npos ? "/v1/chat/completions" : url.substr(slash);
    auto colon = hostport.find(':');
    if (colon != std::string::npos) {
        host_ = hostport.substr(0, colon);
        port_ = std::stoi(hostport.substr(colon + 1));
    } else {
        host_ = hostport;
    }
    id_ = cfg.backend_id.empty() ? cfg.model_name + "@" + host_ : cfg.backend_id;
}

ChatResponse HttpBackend::do_complete(const ChatRequest& req) {
    nlohmann::json body;
    body["model"] = cfg_.model_name;
    body["temperature"] = req.temperature;
    body["max_tokens"] = req.max_output_tokens;
    body["messages"] = nlohmann::json::array();
    for (const auto& m : req.messages) {
        body["messages"].push_back({{"role", m.role}, {"content", m.content}});
    }

    httplib::Headers headers;
    if (!cfg_.auth_token_env_var.empty()) {
        const char* token = std::getenv(cfg_.auth_token_env_var.c_str());
        if (!token || !*token) {
            throw GatewayError(GatewayError::Kind::Auth,
                               "auth token env var " + cfg_.auth_token_env_var + " is not set",
                               req.request_tag);
        }
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    auto started = std::chrono::steady_clock::now();
    httplib::Result result(nullptr, httplib::Error::Unknown);
    auto configure = [&](auto& client) {
        client.set_connection_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_read_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        client.set_write_timeout(std::chrono::milliseconds(cfg_.timeout_ms));
        result = client.Post(path_, headers, body.dump(), "application/json");
    };
    if (tls_) {
        httplib::SSLClient client(host_, port_);
        client.enable_server_certificate_verification(true);
        configure(client);
    } else {
        httplib::Client client(host_, port_);
        configure(client);
    }
    auto elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - started)
                          .count();

    if (!result) {
        auto err = result.error();
        bool timed_out = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read ||
                         err == httplib::Error::Write;
        throw GatewayError(timed_out ? GatewayError::Kind::Timeout
                                     : GatewayError::Kind::Transport,
                           "request to " + host_ + path_ + " failed: " + httplib::to_string(err),
                           req.request_tag);
    }
    if (result->status == 401 || result->status == 403) {
        throw GatewayError(GatewayError::Kind::Auth,
                           "authentication rejected (HTTP " + std::to_string(result->status) + ")",
                           req.request_tag);
    }
    if (result->status == 429 || result->status >= 500) {
        throw GatewayError(GatewayError::Kind::Transport,
                           "server busy or failing (HTTP " + std::to_string(result->status) + ")",
                           req.request_tag);
    }
    if (result->status != 200) {
        throw GatewayError(GatewayError::Kind::BadRequest,
                           "HTTP " + std::to_string(result->status) + ": " + result->body,
                           req.request_tag);
    }

    nlohmann::json parsed = nlohmann::json::parse(result->body, nullptr, false);
    if (parsed.is_discarded() || !parsed.contains("choices") || parsed["choices"].empty()) {
        throw GatewayError(GatewayError::Kind::BadRequest,
                           "response body is not a chat completion", req.request_tag);
    }
    ChatResponse resp;
    const auto& choice = parsed["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
        resp.text = choice["message"]["content"].get<std::string>();
    } else if (choice.contains("text") && choice["text"].is_string()) {
        resp.text = choice["text"].get<std::string>();
    }
    resp.latency_ms = elapsed_ms;
    resp.backend_id = id_;
    return resp;
}

// ------------------------------------------------------------ transcript --

void TranscriptSink::record(TranscriptEntry entry) {
    std::lock_guard lock(mu_);
    entries_.push_back(std::move(entry));
}

std::vector<TranscriptEntry> TranscriptSink::entries() const {
    std::lock_guard lock(mu_);
    return entries_;
}

std::size_t TranscriptSink::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

nlohmann::ordered_json to_json(const TranscriptEntry& e) {
    nlohmann::ordered_json rec;
    rec["request_tag"] = e.request_tag;
    rec["backend_id"] = e.backend_id;
    rec["model"] = e.model;
    rec["temperature"] = e.temperature;
    rec["prompt_checksum"] = e.prompt_checksum;
    rec["attempts"] = e.attempts;
    if (!e.error.empty()) {
        rec["error"] = e.error;
    } else {
        rec["response"] = e.response_text;
    }
    if (!e.rejected_texts.empty()) {
        rec["rejected_texts"] = e.rejected_texts;
    }
    rec["latency_ms"] = e.latency_ms;
    return rec;
}

// --------------------------------------------------------------- gateway --

Gateway::Gateway(std::shared_ptr<Backend> backend, BackendConfig cfg, TranscriptSink* sink)
    : backend_(std::move(backend)), cfg_(std::move(cfg)), sink_(sink) {}

ChatResponse Gateway::complete_with_retries(const ChatRequest& req, int& attempts_used) {
    int attempt = 0;
    for (;;) {
        ++attempt;
        try {
            ChatResponse resp = backend_->complete_once(req);
            attempts_used += attempt;
            resp.attempts = attempt;
            return resp;
        } catch (GatewayError& e) {
            if (!e.retryable() || attempt > cfg_.max_retries) {
                attempts_used += attempt;
                e.attempts = attempts_used;
                if (e.request_tag.empty()) {
                    e.request_tag = req.request_tag;
                }
                throw;
            }
            if (cfg_.backoff_initial_ms > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(cfg_.backoff_initial_ms << (attempt - 1)));
            }
        }
    }
}

ChatResponse Gateway::complete(const ChatRequest& req) {
    if (req.messages.empty()) {
        throw GatewayError(GatewayError::Kind::BadRequest, "request has no messages",
                           req.request_tag);
    }
    if (req.temperature < 0.0 || req.temperature > 2.0) {
        throw GatewayError(GatewayError::Kind::BadRequest,
                           "temperature must lie in [0, 2]", req.request_tag);
    }
    TranscriptEntry entry;
    entry.request_tag = req.request_tag;
    entry.backend_id = backend_->id();
    entry.model = cfg_.model_name;
    entry.temperature = req.temperature;
    entry.prompt_checksum = hex64(request_fingerprint(req));

    int attempts_used = 0;
    try {
        ChatResponse resp = complete_with_retries(req, attempts_used);
        resp.attempts = attempts_used;
        entry.attempts = attempts_used;
        entry.response_text = resp.text;
        entry.latency_ms = resp.latency_ms;
        if (sink_) {
            sink_->record(std::move(entry));
        }
        return resp;
    } catch (const GatewayError& e) {
        entry.attempts = attempts_used;
        entry.error = e.what();
        if (sink_) {
            sink_->record(std::move(entry));
        }
        throw;
    }
}

ChatResponse Gateway::complete_structured(const ChatRequest& req) {
    if (!req.response_schema) {
        throw GatewayError(GatewayError::Kind::BadRequest,
                           "complete_structured requires a response schema", req.request_tag);
    }
    const ResponseSchema& schema = *req.response_schema;

    ChatRequest working = req;
    if (working.messages.empty()) {
        throw GatewayError(GatewayError::Kind::BadRequest, "request has no messages",
                           req.request_tag);
    }
    working.messages.back().content += "\n\n" + schema.prompt_instruction();

    TranscriptEntry entry;
    entry.request_tag = req.request_tag;
    entry.backend_id = backend_->id();
    entry.model = cfg_.model_name;
    entry.temperature = req.temperature;
    entry.prompt_checksum = hex64(request_fingerprint(working));

    int attempts_used = 0;
    std::string last_raw;
    std::string last_problem;
    try {
        for (int ask = 0; ask <= cfg_.max_retries; ++ask) {
            ChatResponse resp = complete_with_retries(working, attempts_used);
            last_raw = resp.text;

            auto parsed = extract_json_object(resp.text);
            std::string problem;
            if (!parsed) {
                problem = "no JSON object found in response";
            } else {
                nlohmann::json normalized;
                if (auto err = schema.validate(*parsed, normalized)) {
                    problem = *err;
                } else {
                    resp.structured_value = normalized;
                    resp.attempts = attempts_used;
                    entry.attempts = attempts_used;
                    entry.response_text = resp.text;
                    entry.latency_ms = resp.latency_ms;
                    if (sink_) {
                        sink_->record(std::move(entry));
                    }
                    return resp;
                }
            }
            last_problem = problem;
            entry.rejected_texts.push_back(resp.text);
            if (ask < cfg_.max_retries) {
                working.messages.push_back({"assistant", resp.text});
                working.messages.push_back(
                    {"user", std::string(corrective_retry_text()) + "\n" +
                                 schema.prompt_instruction()});
            }
        }
    } catch (const GatewayError& e) {
        entry.attempts = attempts_used;
        entry.error = e.what();
        if (sink_) {
            sink_->record(std::move(entry));
        }
        throw;
    }

    entry.attempts = attempts_used;
    entry.error = "schema violation: " + last_problem;
    if (sink_) {
        sink_->record(std::move(entry));
    }
    throw GatewayError(GatewayError::Kind::SchemaViolation,
                       "schema \"" + schema.name + "\" violated after " +
                           std::to_string(attempts_used) + " attempts: " + last_problem,
                       req.request_tag, attempts_used, last_raw);
}

std::shared_ptr<Backend> make_backend(const BackendConfig& cfg,
                                      const std::filesystem::path& mock_script) {
    if (cfg.endpoint_url == "mock" || cfg.endpoint_url.rfind("mock:", 0) == 0) {
        MockScript script;
        if (!mock_script.empty()) {
            script = MockScript::load(mock_script);
        }
        return std::make_shared<MockBackend>(std::move(script), cfg.max_concurrent_requests);
    }
    return std::make_shared<HttpBackend>(cfg);
}

}  // namespace lm4opt
