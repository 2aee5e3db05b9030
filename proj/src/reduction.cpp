#include "latticeforge/reduction.hpp"

namespace latticeforge {

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
    throw Error(ErrorKind::Parse, path + ": " + what, {{"path", path}});
}

}  // namespace

std::vector<ReductionStep> parse_reduction_script(const nlohmann::json& doc) {
    const nlohmann::json* list = &doc;
    std::string base = "$";
    if (doc.is_object()) {
        if (!doc.contains("steps")) schema_error("$.steps", "missing");
        list = &doc["steps"];
        base = "$.steps";
    }
    if (!list->is_array()) schema_error(base, "expected an array");

    std::vector<ReductionStep> steps;
    for (std::size_t i = 0; i < list->size(); ++i) {
        const auto path = base + "[" + std::to_string(i) + "]";
        const auto& s = (*list)[i];
        if (!s.is_object()) schema_error(path, "expected an object");
        if (!s.contains("op") || !s["op"].is_string()) schema_error(path + ".op", "expected a string");
        if (!s.contains("vertex") || !s["vertex"].is_number_integer()) schema_error(path + ".vertex", "expected an integer");
        ReductionStep step;
        step.vertex = s["vertex"].get<VertexId>();
        const auto op = s["op"].get<std::string>();
        if (op == "lc") {
            step.op = ReductionStep::Op::LocalComplement;
        } else if (op == "measure") {
            step.op = ReductionStep::Op::Measure;
            if (!s.contains("basis") || !s["basis"].is_string()) schema_error(path + ".basis", "expected X, Y or Z");
            try {
                step.basis.axis = parse_axis(s["basis"].get<std::string>());
            } catch (const Error&) {
                schema_error(path + ".basis", "expected X, Y or Z");
            }
            if (s.contains("sign") && !s["sign"].is_null()) {
                const auto sign = s["sign"].is_string() ? s["sign"].get<std::string>() : std::string();
                if (sign != "+" && sign != "-") schema_error(path + ".sign", "expected '+' or '-'");
                step.basis.sign = sign == "+" ? Sign::Plus : Sign::Minus;
            }
            if (s.contains("b0") && !s["b0"].is_null()) {
                if (!s["b0"].is_number_integer()) schema_error(path + ".b0", "expected an integer");
                step.b0 = s["b0"].get<VertexId>();
            }
        } else {
            schema_error(path + ".op", "unknown op '" + op + "'");
        }
        steps.push_back(step);
    }
    return steps;
}

nlohmann::json to_json(const ReductionStep& step) {
    if (step.op == ReductionStep::Op::LocalComplement) return {{"op", "lc"}, {"vertex", step.vertex}};
    nlohmann::json out{{"op", "measure"},
                       {"vertex", step.vertex},
                       {"basis", std::string(1, to_char(step.basis.axis))},
                       {"sign", step.basis.sign == Sign::Plus ? "+" : "-"}};
    if (step.b0) out["b0"] = *step.b0;
    return out;
}

GraphState apply_step(GraphState g, const ReductionStep& step, std::optional<MeasurementRecord>* record) {
    if (step.op == ReductionStep::Op::LocalComplement) {
        g.local_complement(step.vertex);
        return g;
    }
    auto [next, rec] = measure(std::move(g), step.vertex, step.basis, step.b0);
    if (record) *record = std::move(rec);
    return std::move(next);
}

ReductionResult replay(GraphState g, const std::vector<ReductionStep>& steps) {
    ReductionResult out;
    out.graph = std::move(g);
    for (const auto& step : steps) {
        std::optional<MeasurementRecord> record;
        out.graph = apply_step(std::move(out.graph), step, &record);
        out.log.push_back({step, std::move(record)});
    }
    return out;
}

nlohmann::json to_json(const ReductionLogEntry& entry) {
    nlohmann::json out{{"step", to_json(entry.step)}};
    if (entry.record) out["record"] = to_json(*entry.record);
    return out;
}

}  // namespace latticeforge
