// config.hpp - pipeline configuration: every tunable constant in one
// key = value file that round-trips losslessly.
#pragma once

#include <filesystem>
#include <string>

#include "pwc3d/evaluate.hpp"
#include "pwc3d/skeleton.hpp"

namespace pwc3d {

struct PipelineConfig {
    // resampling
    int k = 200;  // points per view / per curve

    // skeleton ordering
    double tau_tip = 10.0;      // px; junction-to-tip distance treated as negligible
    int n_line_fit = 10;        // points per direction-line fit
    double epsilon_angle = 1e-3;  // rad; direction ties below this are ambiguous
    double gap_jump = 3.0;      // px; max traversal jump across skeleton gaps

    // segmentation
    std::string fit_norm = "l1_of_l2fit";  // or "pure_l2"
    int min_segment_len = 3;
    double eps_kappa = 100.0;  // fixed-penalty fit
    double eps_tau = 100.0;

    // grid search
    double eps_kappa_max = 1350.0;
    double eps_tau_max = 3450.0;
    int grid = 10;
    int max_iters = 6;
    bool use_grid_search = false;

    // correspondence / integration
    bool refine_triangulation = false;
    bool midpoint_integration = false;

    // evaluation
    double section_fraction = 0.25;  // base/tip section size

    // sequence processing
    int workers = 1;

    void validate() const;

    OrderingParams ordering_params() const;
    FitParams fit_params() const;
    GridSearchOptions grid_search_options() const;

    std::string serialize() const;
    static PipelineConfig parse(const std::string& text);
    static PipelineConfig load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    bool operator==(const PipelineConfig&) const = default;
};

/// FNV-1a hash of the canonical serialized form, as a hex string.
std::string config_hash(const PipelineConfig& config);

}  // namespace pwc3d
