#pragma once

#include <optional>

#include "kerlab/products.hpp"

namespace kerlab {

// Catalog of comparison statements. Each pairs a boundary-type kernel against
// a constant multiple of an area-type (or coarser boundary-type) kernel.
enum class TheoremId {
    Thm1_2,   // conjugate Hardy vs pi * Bergman
    Thm1_3,   // weighted single domain
    Thm1_6,   // single domain, fibered
    Thm1_8,   // product boundary vs Bergman on M
    Thm1_10,  // product boundary, fibered
    Thm1_9,   // jet ideals on M
    Thm1_11,  // jet ideals, fibered
    Thm1_13,  // distinguished boundary vs product boundary
    Thm1_15,  // distinguished boundary, fibered
    Thm1_16,  // jet ideals on S vs bd(M)
    Thm1_19   // jet ideals on S x U vs bd(M) x U
};

TheoremId theorem_from_string(const std::string& name);
std::string theorem_name(TheoremId id);

enum class Verdict { Equality, Strict, ViolationFlag };
std::string verdict_name(Verdict v);

struct InequalityReport {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    double constant_used = 0.0;
    int basis_degree = 0;
    int quad_nodes = 0;
    double refinement_delta = 0.0;
    Verdict verdict = Verdict::Strict;
    std::optional<double> parameter;  // set by sweeps
};

struct TheoremConfig {
    TheoremId id = TheoremId::Thm1_2;
    WeightField field;
    std::optional<JetSpec> jets;

    int basis_degree = 16;
    int boundary_nodes = 256;
    int radial_nodes = 24;
    int angular_nodes = 64;

    double tol_equality = 1e-4;   // |ratio - 1| below this reads as equality
    double tol_violation = 1e-6;  // ratio < 1 - tol flags an artifact bug
    bool refine = true;           // recompute at doubled resolution
};

InequalityReport eval_theorem(const TheoremConfig& config);

// A WeightField satisfying the cited equality conditions: phi = 0 on discs;
// on annulus factors the harmonic log generator is tuned so the conjugate
// periods match those of the Green function (flux proxy for condition (3)).
WeightField equality_case_config(TheoremId id, std::vector<Domain> factors, std::vector<cd> z0,
                                 std::vector<double> p);

struct ProbeReport {
    InequalityReport base;
    InequalityReport perturbed;
};

// Perturbs one equality condition (p_0 for single domains, the harmonic log
// coefficient on annuli, p_1 on products) and reports both ratios.
ProbeReport strictness_probe(const TheoremConfig& base_config, double perturbation);

enum class SweepAxis { AnnulusInnerRadius, ExponentP1, HarmonicLogCoeff };
SweepAxis sweep_axis_from_string(const std::string& name);
std::string sweep_axis_name(SweepAxis a);

struct SweepResult {
    std::vector<InequalityReport> reports;
    std::vector<std::string> errors;  // per-point failures, collected
};

SweepResult sweep(const TheoremConfig& base_config, SweepAxis axis, const std::vector<double>& grid);

}  // namespace kerlab
