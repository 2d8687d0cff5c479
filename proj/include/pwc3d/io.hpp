// io.hpp - file formats: polyline CSV/JSON, camera JSON, pixel-set CSV,
// PGM/PNG binary masks, model/coupling/metrics JSON.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "pwc3d/correspondence.hpp"
#include "pwc3d/evaluate.hpp"
#include "pwc3d/pwc_fit.hpp"
#include "pwc3d/skeleton.hpp"

namespace pwc3d::io {

namespace fs = std::filesystem;

// --- polylines: CSV with header "x,y" / "x,y,z", one point per row ---
void write_csv(const fs::path& path, const OrderedPolyline2D& poly);
void write_csv(const fs::path& path, const Polyline3D& poly);
OrderedPolyline2D read_polyline2(const fs::path& path);
Polyline3D read_polyline3(const fs::path& path);

// --- polylines: JSON documents with "points" and "arclength" ---
std::string to_json(const Polyline3D& poly);
void write_json(const fs::path& path, const Polyline3D& poly);
Polyline3D read_polyline3_json(const fs::path& path);

// --- cameras: row-major K (9), Rt (12), H (9); files hold a camera list ---
std::string to_json(const CameraModel& camera);
CameraModel camera_from_json(const std::string& text);
void write_cameras(const fs::path& path, const std::vector<CameraModel>& cameras);
std::vector<CameraModel> read_cameras(const fs::path& path);

// --- pixel sets: CSV of "u,v" rows, or a PGM/PNG binary mask ---
void write_pixels_csv(const fs::path& path, const PixelSet& ps);
PixelSet read_pixels_csv(const fs::path& path, const Pixel& start_hint);
PixelSet read_mask(const fs::path& path, const Pixel& start_hint);

// --- fitted model ---
std::string to_json(const PwcModel& model);
void write_model(const fs::path& path, const PwcModel& model);
PwcModel read_model(const fs::path& path);

// --- coupling and metrics ---
std::string to_json(const Coupling& coupling);
void write_coupling(const fs::path& path, const Coupling& coupling);
std::string to_json(const FitMetrics& metrics);
void write_metrics(const fs::path& path, const std::string& json_text);

std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);

}  // namespace pwc3d::io
