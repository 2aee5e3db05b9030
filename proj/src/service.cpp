#include "latticeforge/service.hpp"

#include "latticeforge/reduction.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <regex>
#include <thread>

#include <unistd.h>

namespace latticeforge::service {

// ---- submission ---------------------------------------------------------------

std::string utc_timestamp() {
    using namespace std::chrono;
    const auto now = system_clock::now();
    const auto secs = system_clock::to_time_t(now);
    const auto millis = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&secs, &tm);
    char buf[40];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[48];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(millis));
    return out;
}

std::optional<std::string> SubmissionResult::warning() const {
    if (ok()) return std::nullopt;
    return "endpoint " + endpoint + " answered HTTP " + std::to_string(status);
}

std::string resolve_endpoint(const std::optional<std::string>& flag) {
    if (flag && !flag->empty()) return *flag;
    if (const char* env = std::getenv(kEndpointVariable); env && *env) return env;
    throw Error(ErrorKind::Configuration,
                std::string("no submission endpoint: pass one explicitly or set ") + kEndpointVariable,
                {{"variable", kEndpointVariable}});
}

SubmissionResult submit(std::string_view qasm_text, const SubmitOptions& options) {
    const auto endpoint = resolve_endpoint(options.endpoint);
    if (qasm_text.empty()) throw Error(ErrorKind::Domain, "refusing to submit an empty program");

    static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(endpoint, m, url)) {
        throw Error(ErrorKind::Configuration, "endpoint '" + endpoint + "' is not an http(s) URL",
                    {{"endpoint", endpoint}});
    }
    const std::string origin = m[1];
    const std::string path = m[2].matched ? std::string(m[2]) : "/";

    httplib::Client client(origin);
    client.set_connection_timeout(options.timeout);
    client.set_read_timeout(options.timeout);
    client.set_write_timeout(options.timeout);

    std::string body;
    std::string content_type;
    if (options.format == BodyFormat::Json) {
        body = nlohmann::json{{"qasm", std::string(qasm_text)}}.dump();
        content_type = "application/json";
    } else {
        body = std::string(qasm_text);
        content_type = "text/plain";
    }

    SubmissionResult result;
    result.endpoint = endpoint;
    result.submitted_at = utc_timestamp();
    auto res = client.Post(path, body, content_type);
    if (!res) {
        throw Error(ErrorKind::Transport, "POST " + endpoint + " failed: " + httplib::to_string(res.error()),
                    {{"endpoint", endpoint}, {"cause", httplib::to_string(res.error())}});
    }
    result.status = res->status;
    result.body = res->body;
    return result;
}

nlohmann::json to_json(const SubmissionResult& result) {
    nlohmann::json out{{"endpoint", result.endpoint},
                       {"status", result.status},
                       {"body", result.body},
                       {"submitted_at", result.submitted_at}};
    if (auto w = result.warning()) out["warning"] = *w;
    return out;
}

// ---- session operations -----------------------------------------------------------

namespace {

void check_version(const SessionState& state, const nlohmann::json& payload) {
    if (!payload.is_object() || !payload.contains("version") || payload["version"].is_null()) return;
    if (!payload["version"].is_number_unsigned() || payload["version"].get<std::uint64_t>() != state.version) {
        throw Error(ErrorKind::Conflict, "graph version " + payload["version"].dump() + " is stale",
                    {{"version", state.version}});
    }
}

ReductionStep step_from(const std::string& op, const nlohmann::json& payload) {
    if (!payload.is_object()) throw Error(ErrorKind::Parse, "$: expected an object", {{"path", "$"}});
    nlohmann::json step = payload;
    step.erase("version");
    step["op"] = op;
    return parse_reduction_script(nlohmann::json::array({step})).front();
}

std::size_t budget_from(const nlohmann::json& payload) {
    constexpr std::size_t kDefaultBudget = 100'000;
    if (!payload.is_object() || !payload.contains("budget")) return kDefaultBudget;
    const auto& b = payload["budget"];
    if (!b.is_number_unsigned() || b.get<std::uint64_t>() == 0) {
        throw Error(ErrorKind::Parse, "$.budget: expected a positive integer", {{"path", "$.budget"}});
    }
    return b.get<std::size_t>();
}

}  // namespace

nlohmann::json apply_operation(SessionState& state, const std::string& op, const nlohmann::json& payload) {
    SessionState next = state;
    nlohmann::json response;
    if (op == "grid") {
        auto grid = grid_from_json(payload);
        const auto diagnostics = validate(grid);
        if (has_errors(diagnostics)) {
            throw Error(ErrorKind::Validation, "algorithm grid does not validate", to_json(diagnostics));
        }
        next.grid = std::move(grid);
        next.lattice.reset();
        next.graph = GraphState{};
        ++next.version;
        response = {{"grid", to_json(next.grid)},
                    {"metrics", to_json(metrics(next.grid))},
                    {"diagnostics", to_json(diagnostics)}};
    } else if (op == "graph") {
        next.graph = graph_from_json(payload);
        next.lattice.reset();
        ++next.version;
        response = {{"graph", to_json(next.graph)}};
    } else if (op == "layout") {
        next.lattice = prepare(open_algorithm(next.grid));
        next.graph = to_graph_state(*next.lattice);
        ++next.version;
        response = to_json(*next.lattice);
    } else if (op == "measure" || op == "lc") {
        check_version(state, payload);
        const auto step = step_from(op, payload);
        std::optional<MeasurementRecord> record;
        next.graph = apply_step(std::move(next.graph), step, &record);
        ++next.version;
        response = {{"graph", to_json(next.graph)}};
        if (record) response["record"] = to_json(*record);
    } else if (op == "minimize-cz") {
        check_version(state, payload);
        auto result = minimize_cz(next.graph, budget_from(payload));
        next.graph = std::move(result.graph);
        ++next.version;
        response = {{"graph", to_json(next.graph)},
                    {"sequence", result.sequence},
                    {"cz_count", cz_count(next.graph)},
                    {"explored", result.explored},
                    {"proven_minimal", result.proven_minimal}};
    } else {
        throw Error(ErrorKind::NotFound, "unknown operation '" + op + "'");
    }
    response["version"] = next.version;
    state = std::move(next);
    return response;
}

SessionState replay_history(const std::vector<HistoryEntry>& history) {
    SessionState state;
    for (const auto& entry : history) apply_operation(state, entry.op, entry.payload);
    return state;
}

// ---- SessionService -----------------------------------------------------------------

struct SessionService::Session {
    std::string id;
    std::mutex mu;
    SessionState state;
    std::vector<HistoryEntry> history;
};

struct SessionService::Http {
    httplib::Server server;
    std::thread thread;
};

namespace {

std::string new_token() {
    static std::mutex mu;
    static std::mt19937_64 rng{std::random_device{}()};
    std::lock_guard lock(mu);
    char buf[33];
    std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(rng()),
                  static_cast<unsigned long long>(rng()));
    return buf;
}

Response json_response(int status, const nlohmann::json& body) { return {status, body.dump(), "application/json"}; }

Response error_response(const Error& e, bool graph_op, std::uint64_t version) {
    int status = 422;
    switch (e.kind()) {
        case ErrorKind::Parse: status = 400; break;
        case ErrorKind::Conflict: status = 409; break;
        case ErrorKind::NotFound: status = graph_op ? 409 : 404; break;
        case ErrorKind::Transport: status = 502; break;
        case ErrorKind::File: status = 500; break;
        default: status = 422; break;
    }
    auto body = e.to_json();
    if (status == 409) body["version"] = version;
    return json_response(status, body);
}

std::vector<std::string> split_path(std::string_view path) {
    if (auto q = path.find('?'); q != std::string_view::npos) path = path.substr(0, q);
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string_view::npos) end = path.size();
        if (end > start) parts.emplace_back(path.substr(start, end - start));
        start = end + 1;
    }
    return parts;
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp-" + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << text << '\n';
        if (!out) throw Error(ErrorKind::File, "cannot write " + path.string(), {{"path", path.string()}});
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::File, "cannot write " + path.string(), {{"path", path.string()}});
    }
}

nlohmann::json history_json(const std::vector<HistoryEntry>& history) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& h : history) {
        out.push_back({{"seq", h.seq}, {"op", h.op}, {"payload", h.payload}, {"timestamp", h.timestamp}});
    }
    return out;
}

}  // namespace

SessionService::SessionService() = default;

SessionService::~SessionService() { stop(); }

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
    std::shared_lock lock(sessions_mu_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

Response SessionService::create_session() {
    auto session = std::make_shared<Session>();
    session->id = new_token();
    {
        std::unique_lock lock(sessions_mu_);
        sessions_[session->id] = session;
    }
    return json_response(201, {{"id", session->id}, {"version", session->state.version}});
}

std::optional<std::pair<SessionState, std::vector<HistoryEntry>>> SessionService::snapshot(const std::string& id) const {
    auto session = find(id);
    if (!session) return std::nullopt;
    std::lock_guard lock(session->mu);
    return std::make_pair(session->state, session->history);
}

Response SessionService::handle(std::string_view method, std::string_view path, std::string_view body) {
    const auto parts = split_path(path);
    const auto not_found = json_response(404, {{"error", "not-found"}, {"message", "no route for " + std::string(path)}});
    const auto bad_method = json_response(405, {{"error", "method"}, {"message", "method not allowed"}});

    if (parts.size() == 1 && parts[0] == "health") return json_response(200, {{"status", "ok"}});
    if (parts.empty() || parts[0] != "sessions") return not_found;

    if (parts.size() == 1) {
        if (method == "POST") return create_session();
        if (method == "GET") {
            std::shared_lock lock(sessions_mu_);
            nlohmann::json ids = nlohmann::json::array();
            for (const auto& [id, _] : sessions_) ids.push_back(id);
            return json_response(200, {{"sessions", ids}});
        }
        return bad_method;
    }

    auto session = find(parts[1]);
    if (!session) {
        return json_response(404, {{"error", "not-found"}, {"message", "unknown session " + parts[1]}});
    }
    if (parts.size() == 2) {
        if (method == "DELETE") {
            std::unique_lock lock(sessions_mu_);
            sessions_.erase(parts[1]);
            return json_response(200, {{"deleted", parts[1]}});
        }
        if (method == "GET") {
            std::lock_guard lock(session->mu);
            return json_response(200, {{"id", session->id},
                                       {"version", session->state.version},
                                       {"history_length", session->history.size()},
                                       {"has_lattice", session->state.lattice.has_value()}});
        }
        return bad_method;
    }
    if (parts.size() != 3) return not_found;
    const std::string& action = parts[2];

    std::lock_guard lock(session->mu);
    auto& state = session->state;

    nlohmann::json payload = nlohmann::json::object();
    if (!body.empty()) {
        payload = nlohmann::json::parse(body, nullptr, false);
        if (payload.is_discarded()) {
            return json_response(400, {{"error", "parse"}, {"message", "request body is not valid JSON"}});
        }
    }

    static const std::map<std::pair<std::string_view, std::string_view>, std::string> kMutations{
        {{"PUT", "grid"}, "grid"},          {{"PUT", "graph"}, "graph"}, {{"POST", "layout"}, "layout"},
        {{"POST", "measure"}, "measure"},   {{"POST", "lc"}, "lc"},      {{"POST", "minimize-cz"}, "minimize-cz"},
    };
    const bool graph_op = action == "measure" || action == "lc" || action == "minimize-cz";

    try {
        if (auto it = kMutations.find({method, action}); it != kMutations.end()) {
            auto response = apply_operation(state, it->second, payload);
            session->history.push_back({session->history.size() + 1, it->second, payload, utc_timestamp()});
            return json_response(200, response);
        }
        if (method == "GET" && action == "grid") return json_response(200, to_json(state.grid));
        if (method == "GET" && action == "graph") {
            auto g = to_json(state.graph);
            g["version"] = state.version;
            return json_response(200, g);
        }
        if (method == "GET" && action == "metrics") return json_response(200, to_json(metrics(state.grid)));
        if (method == "GET" && action == "lattice") {
            if (!state.lattice) return json_response(404, {{"error", "not-found"}, {"message", "no layout yet"}});
            return json_response(200, to_json(*state.lattice));
        }
        if (method == "GET" && action == "history") return json_response(200, {{"history", history_json(session->history)}});
        if (method == "POST" && action == "compile") {
            const auto program = qasm::emit(state.grid, qasm::bindings_from_json(payload));
            nlohmann::json bindings = nlohmann::json::array();
            for (const auto& b : program.bindings) bindings.push_back(qasm::to_json(b));
            return json_response(200, {{"qasm", program.text}, {"qubit_count", program.qubit_count}, {"bindings", bindings}});
        }
        if (method == "POST" && action == "submit") {
            const auto program = qasm::emit(state.grid, qasm::bindings_from_json(payload));
            SubmitOptions options;
            if (payload.contains("endpoint") && payload["endpoint"].is_string()) {
                options.endpoint = payload["endpoint"].get<std::string>();
            }
            if (payload.value("format", std::string("text")) == "json") options.format = BodyFormat::Json;
            return json_response(200, to_json(submit(program, options)));
        }
        if (method == "POST" && action == "save") {
            if (!payload.contains("path") || !payload["path"].is_string()) {
                throw Error(ErrorKind::Parse, "$.path: expected a string", {{"path", "$.path"}});
            }
            nlohmann::json snap{{"id", session->id},
                                {"version", state.version},
                                {"grid", to_json(state.grid)},
                                {"graph", to_json(state.graph)},
                                {"history", history_json(session->history)}};
            if (state.lattice) snap["lattice"] = to_json(*state.lattice);
            const auto target = payload["path"].get<std::string>();
            write_atomically(target, snap.dump(2));
            return json_response(200, {{"path", target}});
        }
    } catch (const Error& e) {
        return error_response(e, graph_op, state.version);
    } catch (const nlohmann::json::exception& e) {
        return json_response(400, {{"error", "parse"}, {"message", e.what()}});
    }
    return not_found;
}

int SessionService::start(const std::string& host, int port) {
    stop();
    http_ = std::make_unique<Http>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        auto out = handle(req.method, req.path, req.body);
        res.status = out.status;
        res.set_content(out.body, out.content_type);
    };
    http_->server.Get(".*", route);
    http_->server.Post(".*", route);
    http_->server.Put(".*", route);
    http_->server.Delete(".*", route);
    int bound = port;
    if (port == 0) {
        bound = http_->server.bind_to_any_port(host);
    } else if (!http_->server.bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound < 0) {
        http_.reset();
        throw Error(ErrorKind::Transport, "cannot bind " + host + ":" + std::to_string(port));
    }
    http_->thread = std::thread([http = http_.get()] { http->server.listen_after_bind(); });
    // stop() is a no-op until the listener is running
    http_->server.wait_until_ready();
    return bound;
}

void SessionService::run(const std::string& host, int port) {
    start(host, port);
    wait();
}

void SessionService::wait() {
    if (http_ && http_->thread.joinable()) http_->thread.join();
}

void SessionService::stop() {
    if (!http_) return;
    http_->server.stop();
    if (http_->thread.joinable()) http_->thread.join();
    http_.reset();
}

}  // namespace latticeforge::service
