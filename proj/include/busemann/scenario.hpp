#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "busemann/io.hpp"

namespace busemann {

// An expectation compares the value at a JSON pointer inside one step's result.
// source is "claim" (a statement being reproduced) or "oracle" (an independently derived value).
struct Expectation {
    std::string id;
    std::string step;
    std::string path;
    std::string op;  // eq | lt | le | gt | ge
    json value;
    std::optional<double> tol;
    std::string source;
    std::string basis;
};

struct Scenario {
    std::string name;
    std::string description;
    json space;
    std::uint64_t seed = 0;
    json steps = json::array();
    std::vector<Expectation> expectations;
};

Scenario scenario_from_json(const json& doc);
std::vector<std::string> scenario_names();
Scenario find_scenario(const std::string& name);

// Problems found in the scenario file; empty when it is well formed.
std::vector<std::string> lint_scenario(const Scenario& s);

struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;      // default tolerance of expectations without their own
    std::optional<double> horizon;  // ray horizon for relation checks
    std::optional<int> grid;        // grid for classification and semiplane sweeps
};

struct RunResult {
    json report;
    bool passed = false;
    std::vector<std::pair<std::string, IdealHoroball>> classifications;
    std::vector<std::pair<std::string, Polyline>> polylines;
};

struct StepContext {
    std::uint64_t seed = 0;
    std::optional<double> horizon;
    std::optional<int> grid;
    RunResult* sink = nullptr;  // receives artifacts when set
};

json run_step(const ModelSpace& space, const json& step, const StepContext& ctx);
RunResult run_scenario(const Scenario& s, const RunOverrides& overrides = {});

enum class ReportFormat { json, csv, plot_points };
std::optional<ReportFormat> report_format_from_string(const std::string& s);

// Writes <out_dir>/<scenario>.json, .csv or .points; returns the path written.
std::string emit_report(const RunResult& r, ReportFormat format, const std::string& out_dir);

}  // namespace busemann
