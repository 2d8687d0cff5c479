// pwc3d_main.cpp - command-line driver for the reconstruction pipeline.
#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

#include "pwc3d/pipeline.hpp"
#include "pwc3d/synthetic.hpp"

namespace {

using namespace pwc3d;
namespace fs = std::filesystem;
using nlohmann::json;

PipelineConfig load_config(const std::string& path) {
    return path.empty() ? PipelineConfig{} : PipelineConfig::load(path);
}

PwlProfile parse_profile(const std::vector<double>& flat, const char* what) {
    if (flat.size() < 4 || flat.size() % 2 != 0)
        throw ConfigError(std::string(what) + ": expected knot,value pairs (>= 2 pairs)");
    PwlProfile p;
    for (std::size_t i = 0; i < flat.size(); i += 2) {
        p.at.push_back(flat[i]);
        p.value.push_back(flat[i + 1]);
    }
    return p;
}

int cmd_synth(const std::string& out_dir, const std::vector<double>& kappa,
              const std::vector<double>& tau, double length, int n, double noise,
              std::uint64_t seed, bool rasterize, bool translated_rig) {
    const PwlProfile kp = parse_profile(kappa, "--kappa");
    const PwlProfile tp = parse_profile(tau, "--tau");
    Polyline3D truth = gen_pwc_curve(kp, tp, length, static_cast<std::size_t>(n));

    SceneOptions opt;
    opt.pixel_noise_sigma = noise;
    opt.seed = seed;
    if (translated_rig) opt.rig = CameraRig::translated;
    SyntheticScene scene = make_scene(std::move(truth), opt);
    ProjectOptions popt;
    popt.rasterize = rasterize;
    ProjectedScene projected = project_scene(scene, popt);

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    io::write_csv(dir / "truth.csv", scene.truth_curve);
    io::write_cameras(dir / "cameras.json", scene.cameras);
    for (int v = 0; v < 3; ++v) {
        io::write_csv(dir / ("v" + std::to_string(v + 1) + ".csv"), projected.skeletons[v]);
        if (projected.pixels[v])
            io::write_pixels_csv(dir / ("pixels_v" + std::to_string(v + 1) + ".csv"),
                                 *projected.pixels[v]);
    }
    std::cout << "scene written to " << dir.string() << "\n";
    return 0;
}

int cmd_order(const std::string& input, const std::string& output, int start_u, int start_v,
              const std::string& config_path) {
    const PipelineConfig config = load_config(config_path);
    const fs::path in(input);
    const Pixel hint(start_u, start_v);
    PixelSet ps = in.extension() == ".csv" ? io::read_pixels_csv(in, hint)
                                           : io::read_mask(in, hint);
    const OrderedPolyline2D ordered = order_skeleton(ps, config.ordering_params());
    io::write_csv(output, ordered);
    std::cout << "ordered " << ordered.size() << " points -> " << output << "\n";
    return 0;
}

int cmd_match(const std::vector<std::string>& skeletons, const std::string& cameras,
              const std::string& out_dir, const std::string& config_path) {
    const PipelineConfig config = load_config(config_path);
    std::vector<OrderedPolyline2D> views;
    for (const auto& path : skeletons) views.push_back(io::read_polyline2(path));
    const std::vector<CameraModel> cams = io::read_cameras(cameras);
    CorrespondenceOptions opt;
    opt.k = static_cast<std::size_t>(config.k);
    opt.refine = config.refine_triangulation;
    const CorrespondenceResult corr = correspond_and_triangulate(views, cams, opt);
    const fs::path dir(out_dir);
    io::write_coupling(dir / "coupling_v1.json", corr.coupling_1_to_ref);
    io::write_coupling(dir / "coupling_v3.json", corr.coupling_3_to_ref);
    io::write_csv(dir / "curve.csv", corr.curve);
    std::cout << "triangulated " << corr.curve.size() << " points -> "
              << (dir / "curve.csv").string() << "\n";
    return 0;
}

int cmd_frenet(const std::string& curve, const std::string& out_dir) {
    const Polyline3D poly = io::read_polyline3(curve);
    const FrenetSeries series = discrete_curvature_torsion(poly);
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    std::ofstream out(dir / "kappa_tau.csv");
    out.precision(17);
    out << "s,kappa,tau\n";
    for (const auto& smp : series.samples)
        out << smp.s << ',' << smp.kappa << ',' << smp.tau << '\n';

    json frames = json::array();
    for (const auto& smp : series.samples)
        frames.push_back({{"s", smp.s},
                          {"T", {smp.tangent.x(), smp.tangent.y(), smp.tangent.z()}},
                          {"N", {smp.normal.x(), smp.normal.y(), smp.normal.z()}},
                          {"B", {smp.binormal.x(), smp.binormal.y(), smp.binormal.z()}},
                          {"status", smp.status == SampleStatus::interior      ? "interior"
                                     : smp.status == SampleStatus::propagated ? "propagated"
                                                                              : "extrapolated"}});
    io::write_text(dir / "frames.json", json{{"frames", frames}}.dump(2) + "\n");
    std::cout << "frenet series -> " << (dir / "kappa_tau.csv").string() << "\n";
    return 0;
}

int cmd_fit(const std::string& curve, const std::string& output, double eps_kappa,
            double eps_tau, const std::string& config_path) {
    const PipelineConfig config = load_config(config_path);
    const Polyline3D poly = io::read_polyline3(curve);
    const PwcModel model = fit_pwc(poly, eps_kappa, eps_tau, config.fit_params());
    io::write_model(output, model);
    std::cout << "fit: " << model.kappa_segments.size() << " kappa segments, "
              << model.tau_segments.size() << " tau segments -> " << output << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& model_path, const std::string& observed_path,
                    const std::string& out_dir, const std::string& config_path) {
    const PipelineConfig config = load_config(config_path);
    const PwcModel model = io::read_model(model_path);
    const Polyline3D observed = io::read_polyline3(observed_path);
    IntegrationOptions opt;
    opt.midpoint_eval = config.midpoint_integration;
    const ReconstructionResult rec = reconstruct(model, observed, opt);
    const FitMetrics metrics = goodness(rec.curve, observed, {config.section_fraction});
    const fs::path dir(out_dir);
    io::write_csv(dir / "reconstructed.csv", rec.curve);
    json j = json::parse(io::to_json(metrics));
    j["rms"] = rec.rms;
    io::write_metrics(dir / "metrics.json", j.dump(2));
    std::cout << "reconstruct: rms " << rec.rms << ", R^2 " << metrics.r_squared << " -> "
              << (dir / "reconstructed.csv").string() << "\n";
    return 0;
}

int cmd_evaluate(const std::string& fitted, const std::string& observed,
                 const std::string& out_dir, const std::string& config_path) {
    const PipelineConfig config = load_config(config_path);
    const Polyline3D f = io::read_polyline3(fitted);
    const Polyline3D o = io::read_polyline3(observed);
    const FitMetrics metrics = goodness(f, o, {config.section_fraction});
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    io::write_metrics(dir / "metrics.json", io::to_json(metrics));
    std::ofstream out(dir / "sections.csv");
    out.precision(17);
    out << "section,mean_error,std_dev\n";
    for (const auto& [name, st] : metrics.per_section)
        out << name << ',' << st.mean_error << ',' << st.std_dev << '\n';
    std::cout << "R^2 " << metrics.r_squared << ", SSE " << metrics.sse << " -> "
              << (dir / "metrics.json").string() << "\n";
    return 0;
}

int cmd_gridsearch(const std::string& curve, const std::string& out_dir, double eps_kappa_max,
                   double eps_tau_max, int grid, int max_iters,
                   const std::string& config_path) {
    PipelineConfig config = load_config(config_path);
    config.eps_kappa_max = eps_kappa_max;
    config.eps_tau_max = eps_tau_max;
    config.grid = grid;
    config.max_iters = max_iters;
    config.validate();
    const Polyline3D observed = io::read_polyline3(curve);
    const GridSearchResult result = grid_search(observed, config.grid_search_options());

    const fs::path dir(out_dir);
    fs::create_directories(dir);
    json j;
    j["best_eps_kappa"] = result.best_eps_kappa;
    j["best_eps_tau"] = result.best_eps_tau;
    j["converged"] = result.converged;
    j["best"] = {{"r_squared", result.best_cell.r_squared},
                 {"sse", result.best_cell.sse},
                 {"kappa_segments", result.best_cell.kappa_segments},
                 {"tau_segments", result.best_cell.tau_segments}};
    io::write_text(dir / "gridsearch.json", j.dump(2) + "\n");
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        std::ofstream out(dir / ("heatmap_iter" + std::to_string(i + 1) + ".csv"));
        out.precision(17);
        out << "eps_kappa,eps_tau,r_squared,sse,kappa_segments,tau_segments\n";
        for (const auto& c : result.history[i].cells)
            out << c.eps_kappa << ',' << c.eps_tau << ',' << c.r_squared << ',' << c.sse << ','
                << c.kappa_segments << ',' << c.tau_segments << '\n';
    }
    std::cout << (result.converged ? "converged" : "not converged") << " at eps_kappa "
              << result.best_eps_kappa << ", eps_tau " << result.best_eps_tau << "\n";
    return result.converged ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"3D centerline reconstruction and piecewise clothoid fitting"};
    app.require_subcommand(1);

    std::string config_path, out_dir, output, cameras, curve, model_path, observed_path;
    std::vector<std::string> skeleton_paths;

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic scene directory");
    std::vector<double> synth_kappa{0.0, 0.02, 1.0, 0.02};
    std::vector<double> synth_tau{0.0, 0.01, 1.0, 0.01};
    double synth_length = 200.0, synth_noise = 0.0;
    int synth_n = 2000;
    std::uint64_t synth_seed = 1;
    bool synth_rasterize = false, synth_translated = false;
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--kappa", synth_kappa,
                      "curvature profile as knot,value pairs over normalized arc length");
    synth->add_option("--tau", synth_tau, "torsion profile as knot,value pairs");
    synth->add_option("--length", synth_length, "curve length");
    synth->add_option("--n", synth_n, "generated sample count");
    synth->add_option("--noise", synth_noise, "pixel noise sigma");
    synth->add_option("--seed", synth_seed, "random seed");
    synth->add_flag("--rasterize", synth_rasterize, "emit shuffled pixel sets too");
    synth->add_flag("--translated-rig", synth_translated, "parallel cameras on a baseline");

    // order
    auto* order = app.add_subcommand("order", "order an unordered skeleton pixel set");
    std::string order_input;
    int start_u = 0, start_v = 0;
    order->add_option("--input", order_input, "pixel CSV or PGM/PNG mask")->required();
    order->add_option("--output", output, "ordered CSV")->required();
    order->add_option("--start-u", start_u, "base pixel u")->required();
    order->add_option("--start-v", start_v, "base pixel v")->required();
    order->add_option("--config", config_path, "config file");

    // match
    auto* match = app.add_subcommand("match", "correspond three views and triangulate");
    match->add_option("--skeletons", skeleton_paths, "three ordered skeleton CSVs")
        ->expected(3)
        ->required();
    match->add_option("--cameras", cameras, "camera JSON")->required();
    match->add_option("--out", out_dir, "output directory")->required();
    match->add_option("--config", config_path, "config file");

    // frenet
    auto* frenet = app.add_subcommand("frenet", "discrete frames, curvature, torsion");
    frenet->add_option("--curve", curve, "curve CSV")->required();
    frenet->add_option("--out", out_dir, "output directory")->required();

    // fit
    auto* fit = app.add_subcommand("fit", "fit the piecewise model");
    double eps_kappa = 100.0, eps_tau = 100.0;
    fit->add_option("--curve", curve, "curve CSV")->required();
    fit->add_option("--output", output, "model JSON")->required();
    fit->add_option("--eps-kappa", eps_kappa, "curvature penalty");
    fit->add_option("--eps-tau", eps_tau, "torsion penalty");
    fit->add_option("--config", config_path, "config file");

    // reconstruct
    auto* rec = app.add_subcommand("reconstruct", "integrate a model and register it");
    rec->add_option("--model", model_path, "model JSON")->required();
    rec->add_option("--observed", observed_path, "observed curve CSV")->required();
    rec->add_option("--out", out_dir, "output directory")->required();
    rec->add_option("--config", config_path, "config file");

    // evaluate
    auto* eval = app.add_subcommand("evaluate", "metrics between two curves");
    std::string fitted_path;
    eval->add_option("--fitted", fitted_path, "fitted curve CSV")->required();
    eval->add_option("--observed", observed_path, "observed curve CSV")->required();
    eval->add_option("--out", out_dir, "output directory")->required();
    eval->add_option("--config", config_path, "config file");

    // gridsearch
    auto* gs = app.add_subcommand("gridsearch", "penalty grid search");
    double eps_kappa_max = 1350.0, eps_tau_max = 3450.0;
    int grid = 10, max_iters = 6;
    gs->add_option("--curve", curve, "observed curve CSV")->required();
    gs->add_option("--out", out_dir, "output directory")->required();
    gs->add_option("--eps-kappa-max", eps_kappa_max, "curvature penalty upper bound");
    gs->add_option("--eps-tau-max", eps_tau_max, "torsion penalty upper bound");
    gs->add_option("--grid", grid, "grid resolution per iteration");
    gs->add_option("--max-iters", max_iters, "refinement iterations");
    gs->add_option("--config", config_path, "config file");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "run every stage into a run directory");
    bool pipe_unordered = false;
    std::vector<int> pipe_starts;
    pipe->add_option("--skeletons", skeleton_paths, "three skeleton files")
        ->expected(3)
        ->required();
    pipe->add_option("--cameras", cameras, "camera JSON")->required();
    pipe->add_option("--out", out_dir, "run directory")->required();
    pipe->add_flag("--unordered", pipe_unordered, "skeletons are unordered pixel sets");
    pipe->add_option("--starts", pipe_starts, "base pixels u1 v1 u2 v2 u3 v3 for --unordered")
        ->expected(6);
    pipe->add_option("--config", config_path, "config file");

    // sequence
    auto* seq = app.add_subcommand("sequence", "per-frame pipeline over frame directories");
    std::vector<std::string> frame_dirs;
    seq->add_option("--frames", frame_dirs, "frame directories with v1.csv v2.csv v3.csv")
        ->required();
    seq->add_option("--cameras", cameras, "camera JSON")->required();
    seq->add_option("--out", out_dir, "output directory")->required();
    seq->add_option("--config", config_path, "config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(out_dir, synth_kappa, synth_tau, synth_length, synth_n, synth_noise,
                             synth_seed, synth_rasterize, synth_translated);
        if (order->parsed())
            return cmd_order(order_input, output, start_u, start_v, config_path);
        if (match->parsed()) return cmd_match(skeleton_paths, cameras, out_dir, config_path);
        if (frenet->parsed()) return cmd_frenet(curve, out_dir);
        if (fit->parsed()) return cmd_fit(curve, output, eps_kappa, eps_tau, config_path);
        if (rec->parsed())
            return cmd_reconstruct(model_path, observed_path, out_dir, config_path);
        if (eval->parsed()) return cmd_evaluate(fitted_path, observed_path, out_dir, config_path);
        if (gs->parsed())
            return cmd_gridsearch(curve, out_dir, eps_kappa_max, eps_tau_max, grid, max_iters,
                                  config_path);
        if (pipe->parsed()) {
            const PipelineConfig config = load_config(config_path);
            PipelineInputs inputs;
            for (int v = 0; v < 3; ++v) {
                inputs.skeletons[v].path = skeleton_paths[static_cast<std::size_t>(v)];
                inputs.skeletons[v].ordered = !pipe_unordered;
                if (pipe_unordered) {
                    if (pipe_starts.size() != 6)
                        throw ConfigError("--unordered requires --starts u1 v1 u2 v2 u3 v3");
                    inputs.skeletons[v].start_hint =
                        Pixel(pipe_starts[2 * v], pipe_starts[2 * v + 1]);
                }
            }
            inputs.cameras = cameras;
            const PipelineResult result = run_pipeline(config, inputs, out_dir);
            std::cout << "pipeline done: R^2 " << result.metrics.r_squared << ", rms "
                      << result.rms << " -> " << result.run_dir.string() << "\n";
            return 0;
        }
        if (seq->parsed()) {
            const PipelineConfig config = load_config(config_path);
            std::vector<std::filesystem::path> dirs(frame_dirs.begin(), frame_dirs.end());
            const SequenceResult result = run_sequence(config, dirs, cameras, out_dir);
            int failures = 0;
            for (std::size_t f = 0; f < result.frame_ok.size(); ++f)
                if (!result.frame_ok[f]) {
                    ++failures;
                    std::cerr << "frame " << f + 1 << " failed: " << result.frame_errors[f]
                              << "\n";
                }
            std::cout << result.frame_ok.size() - failures << "/" << result.frame_ok.size()
                      << " frames ok -> " << result.out_dir.string() << "\n";
            return failures == static_cast<int>(result.frame_ok.size()) ? 2 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
