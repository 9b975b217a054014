#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "lm4opt/errors.hpp"

namespace lm4opt {

struct Message {
    std::string role;
    std::string content;
};

// Declarative shape of a structured response: flat object, integer and text
// fields, optional cross-field rule. Doubles as the source of the
// schema-in-prompt instruction for backends without constrained decoding.
struct ResponseSchema {
    struct Field {
        enum class Type { Integer, Text };
        std::string name;
        Type type = Type::Text;
        std::optional<long> min_value;
        std::optional<long> max_value;
        bool require_nonempty = false;
    };

    std::string name;
    std::vector<Field> fields;
    // Human-readable cross-field rule, embedded in the prompt instruction.
    std::string semantic_rule_text;
    // Returns an error description, or nullopt when the value is acceptable.
    std::function<std::optional<std::string>(const nlohmann::json&)> semantic_check;

    std::string prompt_instruction() const;

    // Validates `value` against the fields and the semantic check. Keys are
    // matched case-insensitively and the result is re-keyed to the schema's
    // field names. Returns the normalized object or an error description.
    std::optional<std::string> validate(const nlohmann::json& value,
                                        nlohmann::json& normalized) const;
};

struct ChatRequest {
    std::vector<Message> messages;
    double temperature = 0.0;
    int max_output_tokens = 2048;
    std::optional<ResponseSchema> response_schema;
    std::string request_tag;
};

struct ChatResponse {
    std::string text;
    std::optional<nlohmann::json> structured_value;
    long latency_ms = 0;
    std::string backend_id;
    int attempts = 1;
};

struct BackendConfig {
    std::string endpoint_url;            // http(s)://host:port/path, or "mock"
    std::string model_name;
    std::string auth_token_env_var;      // empty: no auth header
    long timeout_ms = 30000;
    int max_retries = 2;
    int max_concurrent_requests = 4;
    long backoff_initial_ms = 250;       // doubles per retry; 0 disables sleeping
    std::string backend_id;              // defaults to model_name@endpoint
};

class GatewayError : public Error {
  public:
    enum class Kind { Transport, Timeout, Auth, BadRequest, SchemaViolation, Script, Config };

    GatewayError(Kind kind, const std::string& msg, std::string request_tag = {},
                 int attempts = 0, std::string raw_text = {})
        : Error(msg),
          kind(kind),
          request_tag(std::move(request_tag)),
          attempts(attempts),
          raw_text(std::move(raw_text)) {}

    bool retryable() const { return kind == Kind::Transport || kind == Kind::Timeout; }

    Kind kind;
    std::string request_tag;
    int attempts = 0;
    std::string raw_text;  // last model output for schema violations
};

// Scripted responses for the mock backend. Entries are either canned texts
// or injected failures. Lookup prefers the fingerprint map (fingerprint =
// FNV-1a 64 over the concatenated message contents); the ordered queue is
// the fallback, so collision or no key both degrade to queue order.
struct MockScript {
    struct Entry {
        std::string response;
        std::string error;  // "" | "transport" | "timeout"
    };

    std::deque<Entry> queue;
    std::unordered_map<std::uint64_t, std::deque<Entry>> by_fingerprint;

    static MockScript load(const std::filesystem::path& path);
};

std::uint64_t request_fingerprint(const ChatRequest& req);

// A chat-completion endpoint. Implementations are thread-safe; the
// per-backend in-flight bound is enforced here so it holds across all
// gateways sharing the backend.
class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string id() const = 0;

    // Single attempt, no retries. Blocks while max_concurrent_requests
    // calls are already in flight.
    ChatResponse complete_once(const ChatRequest& req);

    int in_flight_high_water() const;

  protected:
    explicit Backend(int max_concurrent);
    virtual ChatResponse do_complete(const ChatRequest& req) = 0;

  private:
    struct Limiter;
    std::shared_ptr<Limiter> limiter_;
};

class MockBackend : public Backend {
  public:
    explicit MockBackend(MockScript script, int max_concurrent = 64,
                         long simulated_latency_sleep_ms = 0);

    std::string id() const override { return "mock"; }
    std::size_t remaining() const;

  protected:
    ChatResponse do_complete(const ChatRequest& req) override;

  private:
    mutable std::mutex mu_;
    MockScript script_;
    long sleep_ms_;
};

class HttpBackend : public Backend {
  public:
    explicit HttpBackend(const BackendConfig& cfg);

    std::string id() const override { return id_; }

  protected:
    ChatResponse do_complete(const ChatRequest& req) override;

  private:
    BackendConfig cfg_;
    std::string id_;
    std::string host_;
    int port_ = 80;
    std::string path_;
    bool tls_ = false;
};

// One record per public gateway call. Corrective re-asks of a structured
// call stay inside the record; auth material never enters it.
struct TranscriptEntry {
    std::string request_tag;
    std::string backend_id;
    std::string model;
    double temperature = 0.0;
    std::string prompt_checksum;
    int attempts = 1;
    std::string response_text;
    std::vector<std::string> rejected_texts;  // structured attempts that failed validation
    std::string error;
    long latency_ms = 0;
};

class TranscriptSink {
  public:
    void record(TranscriptEntry entry);
    std::vector<TranscriptEntry> entries() const;
    std::size_t size() const;

  private:
    mutable std::mutex mu_;
    std::vector<TranscriptEntry> entries_;
};

nlohmann::ordered_json to_json(const TranscriptEntry& e);

// Retry/backoff and structured-output handling over a Backend.
class Gateway {
  public:
    Gateway(std::shared_ptr<Backend> backend, BackendConfig cfg, TranscriptSink* sink = nullptr);

    // Completion with transport-level retries (exponential backoff, at most
    // cfg.max_retries re-attempts). Model output is never retried here.
    ChatResponse complete(const ChatRequest& req);

    // Completion whose output must satisfy req.response_schema. Responses
    // failing parse or validation are re-asked with a corrective
    // instruction up to cfg.max_retries times; the final failure carries
    // the raw text.
    ChatResponse complete_structured(const ChatRequest& req);

    const BackendConfig& config() const { return cfg_; }
    Backend& backend() { return *backend_; }

  private:
    ChatResponse complete_with_retries(const ChatRequest& req, int& attempts_used);

    std::shared_ptr<Backend> backend_;
    BackendConfig cfg_;
    TranscriptSink* sink_;
};

// Builds the backend named by cfg.endpoint_url: "mock" (with the script
// loaded from mock_script) or an HTTP(S) chat-completion endpoint.
std::shared_ptr<Backend> make_backend(const BackendConfig& cfg,
                                      const std::filesystem::path& mock_script = {});

// First balanced JSON object embedded in free text, if any parses.
std::optional<nlohmann::json> extract_json_object(std::string_view text);

}  // namespace lm4opt
