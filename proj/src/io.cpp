// io.cpp - serialization for every pipeline artifact.
#include "pwc3d/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#ifdef PWC3D_HAS_PNG
#include <png.h>
#endif

namespace pwc3d::io {
namespace {

using nlohmann::json;

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.precision(17);
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    return in;
}

std::vector<std::vector<double>> read_csv_rows(const fs::path& path, std::size_t columns) {
    std::ifstream in = open_in(path);
    std::string line;
    std::vector<std::vector<double>> rows;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line.back() == '\r') {
            if (!line.empty()) line.pop_back();
            if (line.empty()) continue;
        }
        if (first) {
            first = false;
            if (!line.empty() && !(std::isdigit(static_cast<unsigned char>(line[0])) ||
                                   line[0] == '-' || line[0] == '+' || line[0] == '.'))
                continue;  // header row
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != columns)
            throw IoError(path.string() + ": expected " + std::to_string(columns) +
                          " columns, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

json matrix_json(const double* data, int rows, int cols) {
    json arr = json::array();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) arr.push_back(data[r * cols + c]);
    return arr;
}

template <typename Mat>
void matrix_from_json(const json& arr, Mat& m) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != m.rows() * m.cols())
        throw IoError("camera JSON: wrong matrix size");
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c)
            m(r, c) = arr[static_cast<std::size_t>(r * m.cols() + c)].get<double>();
}

json camera_json(const CameraModel& cam) {
    Eigen::Matrix<double, 3, 3, Eigen::RowMajor> k = cam.intrinsics;
    Eigen::Matrix<double, 3, 4, Eigen::RowMajor> rt = cam.extrinsics;
    Eigen::Matrix<double, 3, 3, Eigen::RowMajor> h = cam.homography_to_ref;
    json j;
    j["K"] = matrix_json(k.data(), 3, 3);
    j["Rt"] = matrix_json(rt.data(), 3, 4);
    j["H"] = matrix_json(h.data(), 3, 3);
    return j;
}

CameraModel camera_from(const json& j) {
    CameraModel cam;
    matrix_from_json(j.at("K"), cam.intrinsics);
    matrix_from_json(j.at("Rt"), cam.extrinsics);
    matrix_from_json(j.at("H"), cam.homography_to_ref);
    cam.validate();
    return cam;
}

json segments_json(const std::vector<LinearSegment>& segments) {
    json arr = json::array();
    for (const auto& seg : segments) {
        arr.push_back({{"s_start", seg.s_start},
                       {"s_end", seg.s_end},
                       {"alpha", seg.alpha},
                       {"beta", seg.beta},
                       {"start_index", seg.start_index},
                       {"end_index", seg.end_index}});
    }
    return arr;
}

std::vector<LinearSegment> segments_from(const json& arr) {
    std::vector<LinearSegment> out;
    for (const auto& j : arr) {
        LinearSegment seg;
        seg.s_start = j.at("s_start").get<double>();
        seg.s_end = j.at("s_end").get<double>();
        seg.alpha = j.at("alpha").get<double>();
        seg.beta = j.at("beta").get<double>();
        seg.start_index = j.value("start_index", 0);
        seg.end_index = j.value("end_index", 0);
        out.push_back(seg);
    }
    return out;
}

PixelSet pixels_from_image(std::vector<std::uint8_t> img, int width, int height,
                           const Pixel& start_hint) {
    PixelSet ps;
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            if (img[static_cast<std::size_t>(y) * width + x] > 0) ps.pixels.emplace_back(x, y);
    ps.start_hint = start_hint;
    return ps;
}

PixelSet read_pgm(const fs::path& path, const Pixel& start_hint) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open mask: " + path.string());
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5") throw IoError("unsupported PGM type: " + magic);
    auto next_int = [&in]() {
        int v;
        while (true) {
            in >> std::ws;
            if (in.peek() == '#') {
                std::string comment;
                std::getline(in, comment);
                continue;
            }
            if (!(in >> v)) throw IoError("truncated PGM header");
            return v;
        }
    };
    const int width = next_int();
    const int height = next_int();
    const int maxval = next_int();
    if (maxval <= 0 || maxval > 255) throw IoError("unsupported PGM maxval");
    std::vector<std::uint8_t> img(static_cast<std::size_t>(width) * height);
    if (magic == "P5") {
        in.get();  // single whitespace after maxval
        in.read(reinterpret_cast<char*>(img.data()), static_cast<std::streamsize>(img.size()));
        if (!in) throw IoError("truncated PGM data");
    } else {
        for (auto& px : img) {
            int v;
            if (!(in >> v)) throw IoError("truncated PGM data");
            px = static_cast<std::uint8_t>(v);
        }
    }
    return pixels_from_image(std::move(img), width, height, start_hint);
}

#ifdef PWC3D_HAS_PNG
PixelSet read_png(const fs::path& path, const Pixel& start_hint) {
    FILE* fp = std::fopen(path.string().c_str(), "rb");
    if (!fp) throw IoError("cannot open mask: " + path.string());
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info || setjmp(png_jmpbuf(png))) {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        std::fclose(fp);
        throw IoError("failed to decode PNG: " + path.string());
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_strip_alpha(png);
    if (png_get_color_type(png, info) & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray(png, 1, -1, -1);
    png_read_update_info(png, info);
    const int width = static_cast<int>(png_get_image_width(png, info));
    const int height = static_cast<int>(png_get_image_height(png, info));
    std::vector<std::uint8_t> img(static_cast<std::size_t>(width) * height);
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[y] = img.data() + static_cast<std::size_t>(y) * width;
    png_read_image(png, rows.data());
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return pixels_from_image(std::move(img), width, height, start_hint);
}
#endif

}  // namespace

void write_csv(const fs::path& path, const OrderedPolyline2D& poly) {
    std::ofstream out = open_out(path);
    out << "x,y\n";
    for (const auto& p : poly.points) out << p.x() << ',' << p.y() << '\n';
}

void write_csv(const fs::path& path, const Polyline3D& poly) {
    std::ofstream out = open_out(path);
    out << "x,y,z\n";
    for (const auto& p : poly.points) out << p.x() << ',' << p.y() << ',' << p.z() << '\n';
}

OrderedPolyline2D read_polyline2(const fs::path& path) {
    std::vector<Point2> pts;
    for (const auto& row : read_csv_rows(path, 2)) pts.emplace_back(row[0], row[1]);
    return OrderedPolyline2D(std::move(pts));
}

Polyline3D read_polyline3(const fs::path& path) {
    std::vector<Point3> pts;
    for (const auto& row : read_csv_rows(path, 3)) pts.emplace_back(row[0], row[1], row[2]);
    return Polyline3D(std::move(pts));
}

std::string to_json(const Polyline3D& poly) {
    json j;
    j["points"] = json::array();
    for (const auto& p : poly.points) j["points"].push_back({p.x(), p.y(), p.z()});
    j["arclength"] = poly.cumulative_arclength;
    return j.dump(2);
}

void write_json(const fs::path& path, const Polyline3D& poly) {
    open_out(path) << to_json(poly) << '\n';
}

Polyline3D read_polyline3_json(const fs::path& path) {
    const json j = json::parse(read_text(path));
    std::vector<Point3> pts;
    for (const auto& p : j.at("points"))
        pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
    return Polyline3D(std::move(pts));
}

std::string to_json(const CameraModel& camera) { return camera_json(camera).dump(2); }

CameraModel camera_from_json(const std::string& text) { return camera_from(json::parse(text)); }

void write_cameras(const fs::path& path, const std::vector<CameraModel>& cameras) {
    json j;
    j["cameras"] = json::array();
    for (const auto& cam : cameras) j["cameras"].push_back(camera_json(cam));
    open_out(path) << j.dump(2) << '\n';
}

std::vector<CameraModel> read_cameras(const fs::path& path) {
    const json j = json::parse(read_text(path));
    std::vector<CameraModel> cams;
    for (const auto& cj : j.at("cameras")) cams.push_back(camera_from(cj));
    return cams;
}

void write_pixels_csv(const fs::path& path, const PixelSet& ps) {
    std::ofstream out = open_out(path);
    out << "u,v\n";
    for (const auto& p : ps.pixels) out << p.x() << ',' << p.y() << '\n';
}

PixelSet read_pixels_csv(const fs::path& path, const Pixel& start_hint) {
    PixelSet ps;
    for (const auto& row : read_csv_rows(path, 2))
        ps.pixels.emplace_back(static_cast<int>(std::llround(row[0])),
                               static_cast<int>(std::llround(row[1])));
    ps.start_hint = start_hint;
    return ps;
}

PixelSet read_mask(const fs::path& path, const Pixel& start_hint) {
    const std::string ext = path.extension().string();
    if (ext == ".pgm" || ext == ".PGM") return read_pgm(path, start_hint);
#ifdef PWC3D_HAS_PNG
    if (ext == ".png" || ext == ".PNG") return read_png(path, start_hint);
#endif
    throw IoError("unsupported mask format: " + path.string());
}

std::string to_json(const PwcModel& model) {
    json j;
    j["kappa_segments"] = segments_json(model.kappa_segments);
    j["tau_segments"] = segments_json(model.tau_segments);
    j["arclength"] = model.arclength;
    j["initial_frame"] = {
        {"T", {model.initial_frame.tangent.x(), model.initial_frame.tangent.y(),
               model.initial_frame.tangent.z()}},
        {"N", {model.initial_frame.normal.x(), model.initial_frame.normal.y(),
               model.initial_frame.normal.z()}},
        {"B", {model.initial_frame.binormal.x(), model.initial_frame.binormal.y(),
               model.initial_frame.binormal.z()}}};
    j["initial_point"] = {model.initial_point.x(), model.initial_point.y(),
                          model.initial_point.z()};
    j["penalties"] = {{"eps_kappa", model.eps_kappa}, {"eps_tau", model.eps_tau}};
    return j.dump(2);
}

void write_model(const fs::path& path, const PwcModel& model) {
    open_out(path) << to_json(model) << '\n';
}

PwcModel read_model(const fs::path& path) {
    const json j = json::parse(read_text(path));
    PwcModel model;
    model.kappa_segments = segments_from(j.at("kappa_segments"));
    model.tau_segments = segments_from(j.at("tau_segments"));
    model.arclength = j.at("arclength").get<std::vector<double>>();
    auto vec3 = [](const json& a) {
        return Point3(a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>());
    };
    model.initial_frame.tangent = vec3(j.at("initial_frame").at("T"));
    model.initial_frame.normal = vec3(j.at("initial_frame").at("N"));
    model.initial_frame.binormal = vec3(j.at("initial_frame").at("B"));
    model.initial_point = vec3(j.at("initial_point"));
    model.eps_kappa = j.at("penalties").at("eps_kappa").get<double>();
    model.eps_tau = j.at("penalties").at("eps_tau").get<double>();
    return model;
}

std::string to_json(const Coupling& coupling) {
    json j;
    j["pairs"] = json::array();
    for (const auto& [a, b] : coupling.pairs) j["pairs"].push_back({a, b});
    j["frechet_distance"] = coupling.frechet_distance;
    return j.dump(2);
}

void write_coupling(const fs::path& path, const Coupling& coupling) {
    open_out(path) << to_json(coupling) << '\n';
}

std::string to_json(const FitMetrics& metrics) {
    json j;
    j["r_squared"] = metrics.r_squared;
    j["sse"] = metrics.sse;
    for (const auto& [name, st] : metrics.per_section)
        j["sections"][name] = {{"mean_error", st.mean_error}, {"std_dev", st.std_dev}};
    return j.dump(2);
}

void write_metrics(const fs::path& path, const std::string& json_text) {
    open_out(path) << json_text << '\n';
}

std::string read_text(const fs::path& path) {
    std::ifstream in = open_in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) { open_out(path) << text; }

}  // namespace pwc3d::io
