#pragma once

#include "latticeforge/graph_state.hpp"

#include <optional>
#include <vector>

namespace latticeforge {

struct ReductionStep {
    enum class Op { Measure, LocalComplement };

    Op op = Op::Measure;
    VertexId vertex = 0;
    MeasurementBasis basis;          // Measure only
    std::optional<VertexId> b0;      // Measure on X only
};

/// Accepts {"steps": [...]} or a bare array of
/// {"op": "measure"|"lc", "vertex": id, "basis"?: "X"|"Y"|"Z", "sign"?: "+"|"-", "b0"?: id}.
std::vector<ReductionStep> parse_reduction_script(const nlohmann::json& doc);
nlohmann::json to_json(const ReductionStep& step);

struct ReductionLogEntry {
    ReductionStep step;
    std::optional<MeasurementRecord> record;  // measurements only
};

struct ReductionResult {
    GraphState graph;
    std::vector<ReductionLogEntry> log;
};

/// Apply one step; vertices are checked at execution time.
GraphState apply_step(GraphState g, const ReductionStep& step, std::optional<MeasurementRecord>* record = nullptr);

ReductionResult replay(GraphState g, const std::vector<ReductionStep>& steps);

nlohmann::json to_json(const ReductionLogEntry& entry);

}  // namespace latticeforge
