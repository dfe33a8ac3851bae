#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subcurv/chen.hpp"

namespace subcurv {

// A complete run description: the submersion data as expression strings, the
// optional structure / model, evaluation points, plane choices (1-based frame
// indices), the theorems to verify, and tolerance overrides.
struct StructureConfig {
    StructureKind kind = StructureKind::Complex;
    std::vector<std::vector<std::string>> J;  // full n x n
    std::vector<std::string> xi, eta;
};

struct ModelConfig {
    std::string family;  // real | complex | generalized-sasakian | sasakian |
                         // kenmotsu | cosymplectic | c-alpha
    double c = 0, c1 = 0, c2 = 0, c3 = 0, alpha = 0;
};

struct RunConfig {
    std::string name;  // catalog entries carry one; loaded files may set it
    int n = 0, m = 0;
    std::vector<std::vector<std::string>> g1, g2;  // full symmetric matrices
    std::vector<std::string> map;
    std::optional<StructureConfig> structure;
    std::optional<ModelConfig> model;
    std::vector<Point> points;
    int pi_v1 = 1, pi_v2 = 2;  // vertical plane: frame indices
    int pp_h1 = 1, pp_h2 = 2;  // horizontal plane
    std::vector<std::string> theorems;
    CheckTols tols;
    double struct_tol = tol::structure;
    std::string out_path;
    std::string out_format = "json";
};

// Parse a config from JSON text / a file.  Unknown theorem ids, missing
// metric diagonals, and dimension mismatches are rejected here.
RunConfig load_config_text(const std::string& text);
RunConfig load_config(const std::string& path);

// Semantic fingerprint: stable under whitespace changes inside expressions
// and key ordering, changes when any field changes.
std::string config_hash(const RunConfig& cfg);

// Instantiate the geometry (analytic derivatives).
SubmersionSetup setup_from(const RunConfig& cfg);
std::optional<SpaceFormModel> model_from(const RunConfig& cfg);

// Canonical JSON text of the config (used by the hash and by report output).
std::string config_canonical(const RunConfig& cfg);

}  // namespace subcurv
