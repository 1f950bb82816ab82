#pragma once

#include <json.hpp>

#include "kerlab/saitoh.hpp"

namespace kerlab {

using ojson = nlohmann::ordered_json;

// One run of the front end: a command plus the configuration it needs.
// Mirrors the JSON config document one-to-one; unknown keys are rejected.
struct RunConfig {
    std::string command;  // kernel | verify | theorem | sweep | suite

    std::string theorem_id = "thm1.3";
    std::string identity = "3:E8";

    std::vector<Domain> domains;
    std::vector<Domain> fiber;
    std::vector<cd> z0;
    std::vector<cd> u0;
    std::vector<double> p;
    CFunction c = CFunction::one();
    std::vector<HarmonicField> phi;
    std::vector<HarmonicField> gamma_exponent;
    double gamma_scale = 1.0;
    std::optional<JetSpec> jets;

    int basis = 12;
    int quad = 192;
    int radial = 20;
    int angular = 48;
    double tol = 1e-6;
    std::uint64_t seed = 1;
    int samples = 5;

    std::string sweep_axis = "p1";
    double sweep_from = 2.0;
    double sweep_to = 4.0;
    int sweep_count = 5;

    std::string kernel_space = "area";
    std::vector<cd> kernel_z;
    std::vector<cd> kernel_w;

    std::string out_dir;
    std::vector<std::string> formats{"json"};
};

// Throws std::invalid_argument on schema violations (unknown keys included).
RunConfig parse_run_config(const ojson& doc);
RunConfig parse_run_config_text(const std::string& text);

ojson report_to_json(const InequalityReport& rep);
ojson report_to_json(const VerificationReport& rep);

struct RunOutcome {
    int exit_code = 0;       // 0 ok, 2 config error, 3 numerical failure
    ojson report;            // array of report objects
    std::string error;       // failing operation, when exit_code != 0
    std::string csv;         // populated for sweeps when requested
    std::string svg;
};

RunOutcome run_config(const RunConfig& config);

// Build the WeightField described by a RunConfig (defaults filled in).
WeightField field_from_config(const RunConfig& config);

std::string sweep_csv(const std::vector<InequalityReport>& reports);
std::string sweep_svg(const std::vector<InequalityReport>& reports, const std::string& title);

}  // namespace kerlab
