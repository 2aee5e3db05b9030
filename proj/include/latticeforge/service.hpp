#pragma once

#include "latticeforge/algorithm_grid.hpp"
#include "latticeforge/graph_state.hpp"
#include "latticeforge/lattice.hpp"
#include "latticeforge/qasm.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace latticeforge::service {

// ---- submission ---------------------------------------------------------------

inline constexpr const char* kEndpointVariable = "TUQ_QASM_ENDPOINT";

enum class BodyFormat { PlainText, Json };

struct SubmitOptions {
    std::optional<std::string> endpoint;  // overrides TUQ_QASM_ENDPOINT
    BodyFormat format = BodyFormat::PlainText;
    std::chrono::seconds timeout{30};
};

struct SubmissionResult {
    std::string endpoint;
    int status = 0;
    std::string body;
    std::string submitted_at;  // ISO-8601 UTC

    bool ok() const { return status >= 200 && status < 300; }
    std::optional<std::string> warning() const;
};

/// Flag first, then the environment; throws Error(Configuration) naming the
/// variable when neither is set.
std::string resolve_endpoint(const std::optional<std::string>& flag);

/// POSTs once. Non-2xx responses are returned, not thrown; transport failures
/// throw Error(Transport).
SubmissionResult submit(std::string_view qasm_text, const SubmitOptions& options);
inline SubmissionResult submit(const qasm::QasmProgram& program, const SubmitOptions& options) {
    return submit(program.text, options);
}

nlohmann::json to_json(const SubmissionResult& result);

// ---- sessions -------------------------------------------------------------------

std::string utc_timestamp();

struct HistoryEntry {
    std::uint64_t seq = 0;
    std::string op;  // grid | graph | layout | measure | lc | minimize-cz
    nlohmann::json payload;
    std::string timestamp;
};

struct SessionState {
    AlgorithmGrid grid;
    std::optional<Lattice> lattice;
    GraphState graph;
    std::uint64_t version = 0;  // bumped on every graph change
};

/// Apply one mutating operation to a copy of `state`; the returned JSON is the
/// endpoint's response body. Throws on failure and leaves `state` untouched.
nlohmann::json apply_operation(SessionState& state, const std::string& op, const nlohmann::json& payload);

/// Rebuild a session from an empty one by re-applying its history.
SessionState replay_history(const std::vector<HistoryEntry>& history);

struct Response {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

class SessionService {
   public:
    SessionService();
    ~SessionService();
    SessionService(const SessionService&) = delete;
    SessionService& operator=(const SessionService&) = delete;

    /// Routes one request. Thread-safe: distinct sessions run in parallel,
    /// requests for one session are serialised.
    Response handle(std::string_view method, std::string_view path, std::string_view body);

    /// Copy of a session's state and history, for inspection.
    std::optional<std::pair<SessionState, std::vector<HistoryEntry>>> snapshot(const std::string& id) const;

    /// Bind and serve in the background; port 0 picks a free port. Returns the
    /// bound port.
    int start(const std::string& host, int port);
    /// Bind and serve on the calling thread until stop().
    void run(const std::string& host, int port);
    /// Blocks until a started server stops.
    void wait();
    void stop();

   private:
    struct Session;
    struct Http;

    std::shared_ptr<Session> find(const std::string& id) const;
    Response create_session();

    mutable std::shared_mutex sessions_mu_;
    std::map<std::string, std::shared_ptr<Session>> sessions_;
    std::unique_ptr<Http> http_;
};

}  // namespace latticeforge::service
