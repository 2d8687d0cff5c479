// pipeline.hpp - end-to-end driver: order -> match -> fit -> reconstruct ->
// evaluate, with a run directory of artifacts and a reproducible manifest.
#pragma once

#include <array>
#include <filesystem>
#include <optional>

#include "pwc3d/config.hpp"
#include "pwc3d/correspondence.hpp"
#include "pwc3d/io.hpp"
#include "pwc3d/pipeline.hpp"

namespace pwc3d {

struct SkeletonSource {
    std::filesystem::path path;
    bool ordered = true;              // false: unordered pixels (CSV or mask)
    Pixel start_hint = Pixel::Zero();  // base pixel for unordered sources
};

struct PipelineInputs {
    std::array<SkeletonSource, 3> skeletons;
    std::filesystem::path cameras;
};

struct PipelineResult {
    std::filesystem::path run_dir;
    Polyline3D observed;
    Polyline3D reconstructed;
    PwcModel model;
    FitMetrics metrics;
    double rms = 0.0;
    std::optional<GridSearchResult> grid;
};

/// Runs every stage, writing each intermediate artifact under run_dir plus a
/// manifest (config echo + hash, stage statuses, metrics). Stage failures
/// are recorded in the manifest and rethrown with the stage name attached.
PipelineResult run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs,
                            const std::filesystem::path& run_dir);

struct SequenceResult {
    std::filesystem::path out_dir;
    std::vector<bool> frame_ok;
    std::vector<std::string> frame_errors;
};

/// Per-frame pipeline runs over frame directories (each holding v1.csv,
/// v2.csv, v3.csv ordered skeletons) plus tip-trajectory and
/// breakpoint-density aggregates. Frame failures are recorded and the
/// sequence continues.
SequenceResult run_sequence(const PipelineConfig& config,
                            const std::vector<std::filesystem::path>& frame_dirs,
                            const std::filesystem::path& cameras,
                            const std::filesystem::path& out_dir);

}  // namespace pwc3d
