// pipeline.cpp - stage orchestration, artifact layout, and run manifests.
#include "pwc3d/pipeline.hpp"

#include <fstream>
#include <future>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "pwc3d/svg.hpp"

namespace pwc3d {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

OrderedPolyline2D load_skeleton(const SkeletonSource& src, const PipelineConfig& config) {
    if (src.ordered) return io::read_polyline2(src.path);
    const std::string ext = src.path.extension().string();
    PixelSet ps = (ext == ".csv" || ext == ".CSV") ? io::read_pixels_csv(src.path, src.start_hint)
                                                   : io::read_mask(src.path, src.start_hint);
    return order_skeleton(ps, config.ordering_params());
}

void write_kappa_tau_csv(const fs::path& path, const FrenetSeries& series) {
    std::ofstream out(path);
    out.precision(17);
    out << "s,kappa,tau\n";
    for (const auto& smp : series.samples)
        out << smp.s << ',' << smp.kappa << ',' << smp.tau << '\n';
}

void write_fit_plot(const fs::path& path, const FrenetSeries& series, const PwcModel& model) {
    svg::SeriesPlot kappa{"kappa", {}, {}, "#1f77b4"};
    svg::SeriesPlot kappa_fit{"kappa fit", {}, {}, "#d62728"};
    svg::SeriesPlot tau{"tau", {}, {}, "#2ca02c"};
    svg::SeriesPlot tau_fit{"tau fit", {}, {}, "#ff7f0e"};
    for (const auto& smp : series.samples) {
        kappa.x.push_back(smp.s);
        kappa.y.push_back(smp.kappa);
        kappa_fit.x.push_back(smp.s);
        kappa_fit.y.push_back(model.kappa_at(smp.s));
        tau.x.push_back(smp.s);
        tau.y.push_back(smp.tau);
        tau_fit.x.push_back(smp.s);
        tau_fit.y.push_back(model.tau_at(smp.s));
    }
    svg::write_line_chart(path, {kappa, kappa_fit, tau, tau_fit}, "arc length",
                          "curvature / torsion");
}

json grid_history_json(const GridSearchResult& grid) {
    json iters = json::array();
    for (const auto& it : grid.history) {
        json cells = json::array();
        for (const auto& c : it.cells)
            cells.push_back({{"eps_kappa", c.eps_kappa},
                             {"eps_tau", c.eps_tau},
                             {"r_squared", c.r_squared},
                             {"sse", c.sse},
                             {"kappa_segments", c.kappa_segments},
                             {"tau_segments", c.tau_segments}});
        iters.push_back({{"eps_kappa_lo", it.eps_kappa_lo},
                         {"eps_kappa_hi", it.eps_kappa_hi},
                         {"eps_tau_lo", it.eps_tau_lo},
                         {"eps_tau_hi", it.eps_tau_hi},
                         {"cells", cells}});
    }
    return iters;
}

void write_grid_artifacts(const fs::path& dir, const GridSearchResult& grid) {
    json j;
    j["best_eps_kappa"] = grid.best_eps_kappa;
    j["best_eps_tau"] = grid.best_eps_tau;
    j["converged"] = grid.converged;
    j["iterations"] = grid_history_json(grid);
    io::write_text(dir / "gridsearch.json", j.dump(2) + "\n");
    for (std::size_t i = 0; i < grid.history.size(); ++i) {
        std::ofstream out(dir / ("heatmap_iter" + std::to_string(i + 1) + ".csv"));
        out.precision(17);
        out << "eps_kappa,eps_tau,r_squared,sse,kappa_segments,tau_segments\n";
        for (const auto& c : grid.history[i].cells)
            out << c.eps_kappa << ',' << c.eps_tau << ',' << c.r_squared << ',' << c.sse << ','
                << c.kappa_segments << ',' << c.tau_segments << '\n';
    }
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& config, const PipelineInputs& inputs,
                            const fs::path& run_dir) {
    config.validate();
    fs::create_directories(run_dir);
    config.save(run_dir / "config.txt");

    json manifest;
    manifest["config_hash"] = config_hash(config);
    manifest["inputs"] = {{"cameras", inputs.cameras.string()},
                          {"skeletons",
                           {inputs.skeletons[0].path.string(), inputs.skeletons[1].path.string(),
                            inputs.skeletons[2].path.string()}}};
    manifest["version"] = "0.1.0";
    json stages = json::array();

    auto record = [&](const std::string& name, const std::string& status,
                      const std::string& error = "") {
        json s = {{"name", name}, {"status", status}};
        if (!error.empty()) s["error"] = error;
        stages.push_back(s);
    };
    auto finish_manifest = [&]() {
        manifest["stages"] = stages;
        io::write_text(run_dir / "manifest.json", manifest.dump(2) + "\n");
    };
    auto run_stage = [&](const std::string& name, auto&& fn) {
        try {
            fn();
            record(name, "ok");
        } catch (const std::exception& e) {
            record(name, "failed", e.what());
            finish_manifest();
            throw Error("[" + name + "] " + e.what());
        }
    };

    PipelineResult result;
    result.run_dir = run_dir;

    std::vector<OrderedPolyline2D> skeletons;
    run_stage("order", [&] {
        for (int v = 0; v < 3; ++v) {
            skeletons.push_back(load_skeleton(inputs.skeletons[v], config));
            io::write_csv(run_dir / "order" / ("skeleton_v" + std::to_string(v + 1) + ".csv"),
                          skeletons.back());
        }
    });

    std::vector<CameraModel> cameras;
    run_stage("match", [&] {
        cameras = io::read_cameras(inputs.cameras);
        if (cameras.size() != 3) throw InvalidInput("expected 3 cameras");
        CorrespondenceOptions opt;
        opt.k = static_cast<std::size_t>(config.k);
        opt.refine = config.refine_triangulation;
        CorrespondenceResult corr = correspond_and_triangulate(skeletons, cameras, opt);
        io::write_coupling(run_dir / "match" / "coupling_v1.json", corr.coupling_1_to_ref);
        io::write_coupling(run_dir / "match" / "coupling_v3.json", corr.coupling_3_to_ref);
        io::write_csv(run_dir / "match" / "curve.csv", corr.curve);
        result.observed = std::move(corr.curve);
    });

    FrenetSeries series;
    run_stage("frenet", [&] {
        series = discrete_curvature_torsion(result.observed);
        write_kappa_tau_csv(run_dir / "frenet" / "kappa_tau.csv", series);
    });

    run_stage(config.use_grid_search ? "gridsearch" : "fit", [&] {
        fs::create_directories(run_dir / "fit");
        double ek = config.eps_kappa, et = config.eps_tau;
        if (config.use_grid_search) {
            GridSearchResult grid = grid_search(result.observed, config.grid_search_options());
            write_grid_artifacts(run_dir / "fit", grid);
            ek = grid.best_eps_kappa;
            et = grid.best_eps_tau;
            result.grid = std::move(grid);
        }
        result.model = fit_pwc(result.observed, series, ek, et, config.fit_params());
        io::write_model(run_dir / "fit" / "model.json", result.model);
        write_fit_plot(run_dir / "fit" / "kappa_tau_fit.svg", series, result.model);
    });

    run_stage("reconstruct", [&] {
        IntegrationOptions opt;
        opt.midpoint_eval = config.midpoint_integration;
        ReconstructionResult rec = reconstruct(result.model, result.observed, opt);
        io::write_csv(run_dir / "reconstruct" / "reconstructed.csv", rec.curve);
        result.reconstructed = std::move(rec.curve);
        result.rms = rec.rms;
    });

    run_stage("evaluate", [&] {
        SectionOptions sopt{config.section_fraction};
        result.metrics = goodness(result.reconstructed, result.observed, sopt);
        json j = json::parse(io::to_json(result.metrics));
        j["rms"] = result.rms;
        ReprojectionOptions ropt;
        ropt.k = static_cast<std::size_t>(config.k);
        ropt.section_fraction = config.section_fraction;
        json reproj = json::object();
        for (int v = 0; v < 3; ++v) {
            const auto sections =
                reprojection_error(result.reconstructed, skeletons[v], cameras[v], ropt);
            json sj;
            for (const auto& [name, st] : sections)
                sj[name] = {{"mean_error", st.mean_error}, {"std_dev", st.std_dev}};
            reproj["v" + std::to_string(v + 1)] = sj;
        }
        j["reprojection"] = reproj;
        io::write_metrics(run_dir / "evaluate" / "metrics.json", j.dump(2));

        std::ofstream out(run_dir / "evaluate" / "sections.csv");
        out.precision(17);
        out << "section,mean_error,std_dev\n";
        for (const auto& [name, st] : result.metrics.per_section)
            out << name << ',' << st.mean_error << ',' << st.std_dev << '\n';
    });

    manifest["metrics"] = {{"r_squared", result.metrics.r_squared},
                           {"sse", result.metrics.sse},
                           {"rms", result.rms}};
    finish_manifest();
    return result;
}

SequenceResult run_sequence(const PipelineConfig& config,
                            const std::vector<fs::path>& frame_dirs, const fs::path& cameras,
                            const fs::path& out_dir) {
    if (frame_dirs.empty()) throw InvalidInput("run_sequence: no frames");
    fs::create_directories(out_dir);

    SequenceResult result;
    result.out_dir = out_dir;
    result.frame_ok.assign(frame_dirs.size(), false);
    result.frame_errors.assign(frame_dirs.size(), "");
    std::vector<std::optional<PipelineResult>> runs(frame_dirs.size());

    auto run_frame = [&](std::size_t f) {
        PipelineInputs inputs;
        for (int v = 0; v < 3; ++v)
            inputs.skeletons[v] = {frame_dirs[f] / ("v" + std::to_string(v + 1) + ".csv"), true,
                                   Pixel::Zero()};
        inputs.cameras = cameras;
        try {
            runs[f] = run_pipeline(config, inputs,
                                   out_dir / ("frame_" + std::to_string(f + 1)));
            result.frame_ok[f] = true;
        } catch (const std::exception& e) {
            result.frame_errors[f] = e.what();
        }
    };

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = config.workers > 0 ? static_cast<std::size_t>(config.workers)
                                                   : std::min<std::size_t>(hw, frame_dirs.size());
    if (workers <= 1) {
        for (std::size_t f = 0; f < frame_dirs.size(); ++f) run_frame(f);
    } else {
        std::vector<std::future<void>> futures;
        for (std::size_t w = 0; w < workers; ++w)
            futures.push_back(std::async(std::launch::async, [&, w] {
                for (std::size_t f = w; f < frame_dirs.size(); f += workers) run_frame(f);
            }));
        for (auto& f : futures) f.get();
    }

    // aggregates over the successful frames
    std::vector<Polyline3D> curves;
    std::vector<PwcModel> models;
    std::vector<std::size_t> ok_frames;
    for (std::size_t f = 0; f < runs.size(); ++f)
        if (runs[f]) {
            curves.push_back(runs[f]->reconstructed);
            models.push_back(runs[f]->model);
            ok_frames.push_back(f);
        }

    json manifest;
    manifest["config_hash"] = config_hash(config);
    manifest["frames"] = json::array();
    for (std::size_t f = 0; f < frame_dirs.size(); ++f)
        manifest["frames"].push_back({{"dir", frame_dirs[f].string()},
                                      {"ok", static_cast<bool>(result.frame_ok[f])},
                                      {"error", result.frame_errors[f]}});

    if (!curves.empty()) {
        const TipTrajectory tips = tip_trajectory(curves);
        std::ofstream out(out_dir / "tip_trajectory.csv");
        out.precision(17);
        out << "frame,x,y,z\n";
        for (std::size_t i = 0; i < tips.tips.size(); ++i)
            out << ok_frames[i] + 1 << ',' << tips.tips[i].x() << ',' << tips.tips[i].y() << ','
                << tips.tips[i].z() << '\n';
        svg::SeriesPlot xy{"x-y", {}, {}, "#ff7f0e"}, yz{"y-z", {}, {}, "#2ca02c"},
            xz{"x-z", {}, {}, "#1f77b4"};
        for (std::size_t i = 0; i < tips.tips.size(); ++i) {
            xy.x.push_back(tips.xy[i].x());
            xy.y.push_back(tips.xy[i].y());
            yz.x.push_back(tips.yz[i].x());
            yz.y.push_back(tips.yz[i].y());
            xz.x.push_back(tips.xz[i].x());
            xz.y.push_back(tips.xz[i].y());
        }
        svg::write_line_chart(out_dir / "tip_trajectory.svg", {xy, yz, xz}, "axis 1", "axis 2");

        const BreakpointDensity density = breakpoint_density(models);
        auto write_breakpoints = [&](const fs::path& path,
                                     const std::vector<std::vector<int>>& rows) {
            std::ofstream bp(path);
            bp << "frame,indices\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                bp << ok_frames[i] + 1;
                for (int idx : rows[i]) bp << ',' << idx;
                bp << '\n';
            }
        };
        write_breakpoints(out_dir / "breakpoints_kappa.csv", density.kappa);
        write_breakpoints(out_dir / "breakpoints_tau.csv", density.tau);

        // curvature/torsion heat strips over the sequence
        std::vector<std::vector<double>> kappa_rows, tau_rows;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const FrenetSeries fs_series = discrete_curvature_torsion(curves[i]);
            std::vector<double> kr, tr;
            for (const auto& smp : fs_series.samples) {
                kr.push_back(smp.kappa);
                tr.push_back(smp.tau);
            }
            kappa_rows.push_back(std::move(kr));
            tau_rows.push_back(std::move(tr));
        }
        svg::write_heat_strip(out_dir / "kappa_evolution.svg", kappa_rows,
                              "curvature along length per frame");
        svg::write_heat_strip(out_dir / "tau_evolution.svg", tau_rows,
                              "torsion along length per frame");
    }
    io::write_text(out_dir / "sequence_manifest.json", manifest.dump(2) + "\n");
    return result;
}

}  // namespace pwc3d
