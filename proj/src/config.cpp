// config.cpp - key = value config parsing and serialization.
#include "pwc3d/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "pwc3d/io.hpp"

namespace pwc3d {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string format_double(double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
}

}  // namespace

void PipelineConfig::validate() const {
    if (k < 2) throw ConfigError("config: k must be >= 2");
    if (n_line_fit < 2) throw ConfigError("config: n_line_fit must be >= 2");
    if (min_segment_len < 2) throw ConfigError("config: min_segment_len must be >= 2");
    if (grid < 2) throw ConfigError("config: grid must be >= 2");
    if (max_iters < 1) throw ConfigError("config: max_iters must be >= 1");
    if (eps_kappa < 0 || eps_tau < 0 || eps_kappa_max < 0 || eps_tau_max < 0)
        throw ConfigError("config: penalties must be >= 0");
    if (!(section_fraction > 0.0 && section_fraction <= 0.5))
        throw ConfigError("config: section_fraction must be in (0, 0.5]");
    if (fit_norm != "l1_of_l2fit" && fit_norm != "pure_l2")
        throw ConfigError("config: fit_norm must be l1_of_l2fit or pure_l2");
    if (workers < 0) throw ConfigError("config: workers must be >= 0");
    if (tau_tip < 0 || gap_jump < 0 || epsilon_angle < 0)
        throw ConfigError("config: ordering thresholds must be >= 0");
}

OrderingParams PipelineConfig::ordering_params() const {
    OrderingParams p;
    p.tau_tip = tau_tip;
    p.n_line_fit = n_line_fit;
    p.epsilon_angle = epsilon_angle;
    p.gap_jump = gap_jump;
    return p;
}

FitParams PipelineConfig::fit_params() const {
    FitParams p;
    p.segmentation.norm = fit_norm == "pure_l2" ? FitNorm::pure_l2 : FitNorm::l1_of_l2fit;
    p.segmentation.min_segment_len = min_segment_len;
    return p;
}

GridSearchOptions PipelineConfig::grid_search_options() const {
    GridSearchOptions o;
    o.eps_kappa_hi = eps_kappa_max;
    o.eps_tau_hi = eps_tau_max;
    o.grid = grid;
    o.max_iters = max_iters;
    o.fit = fit_params();
    o.integration.midpoint_eval = midpoint_integration;
    o.workers = workers;
    return o;
}

std::string PipelineConfig::serialize() const {
    std::ostringstream out;
    out << "# pipeline configuration\n";
    out << "\n[resample]\n";
    out << "k = " << k << "                # sample count per view and per curve\n";
    out << "\n[ordering]\n";
    out << "tau_tip = " << format_double(tau_tip)
        << "        # px; junction-to-tip distance treated as negligible\n";
    out << "n_line_fit = " << n_line_fit << "        # points per direction-line fit\n";
    out << "epsilon_angle = " << format_double(epsilon_angle)
        << "  # rad; smaller direction gaps are ambiguous\n";
    out << "gap_jump = " << format_double(gap_jump)
        << "        # px; traversal jump allowed across skeleton gaps\n";
    out << "\n[fit]\n";
    out << "fit_norm = " << fit_norm << "   # l1_of_l2fit | pure_l2\n";
    out << "min_segment_len = " << min_segment_len << "\n";
    out << "eps_kappa = " << format_double(eps_kappa) << "   # fixed curvature penalty\n";
    out << "eps_tau = " << format_double(eps_tau) << "     # fixed torsion penalty\n";
    out << "\n[gridsearch]\n";
    out << "use_grid_search = " << (use_grid_search ? "true" : "false") << "\n";
    out << "eps_kappa_max = " << format_double(eps_kappa_max) << "\n";
    out << "eps_tau_max = " << format_double(eps_tau_max) << "\n";
    out << "grid = " << grid << "\n";
    out << "max_iters = " << max_iters << "\n";
    out << "\n[reconstruction]\n";
    out << "refine_triangulation = " << (refine_triangulation ? "true" : "false") << "\n";
    out << "midpoint_integration = " << (midpoint_integration ? "true" : "false") << "\n";
    out << "\n[evaluation]\n";
    out << "section_fraction = " << format_double(section_fraction)
        << "  # base/tip section size as a fraction of arc length\n";
    out << "\n[sequence]\n";
    out << "workers = " << workers << "          # 0 = hardware concurrency\n";
    return out.str();
}

PipelineConfig PipelineConfig::parse(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value: " + line);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }

    PipelineConfig c;
    auto get_int = [&](const std::string& key, int& dst) {
        if (kv.count(key)) dst = std::stoi(kv[key]);
    };
    auto get_double = [&](const std::string& key, double& dst) {
        if (kv.count(key)) dst = std::stod(kv[key]);
    };
    auto get_bool = [&](const std::string& key, bool& dst) {
        if (!kv.count(key)) return;
        const std::string& v = kv[key];
        if (v == "true" || v == "1") dst = true;
        else if (v == "false" || v == "0") dst = false;
        else throw ConfigError("config: bad boolean for " + key + ": " + v);
    };
    get_int("k", c.k);
    get_double("tau_tip", c.tau_tip);
    get_int("n_line_fit", c.n_line_fit);
    get_double("epsilon_angle", c.epsilon_angle);
    get_double("gap_jump", c.gap_jump);
    if (kv.count("fit_norm")) c.fit_norm = kv["fit_norm"];
    get_int("min_segment_len", c.min_segment_len);
    get_double("eps_kappa", c.eps_kappa);
    get_double("eps_tau", c.eps_tau);
    get_bool("use_grid_search", c.use_grid_search);
    get_double("eps_kappa_max", c.eps_kappa_max);
    get_double("eps_tau_max", c.eps_tau_max);
    get_int("grid", c.grid);
    get_int("max_iters", c.max_iters);
    get_bool("refine_triangulation", c.refine_triangulation);
    get_bool("midpoint_integration", c.midpoint_integration);
    get_double("section_fraction", c.section_fraction);
    get_int("workers", c.workers);
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    return parse(io::read_text(path));
}

void PipelineConfig::save(const std::filesystem::path& path) const {
    io::write_text(path, serialize());
}

std::string config_hash(const PipelineConfig& config) {
    const std::string text = config.serialize();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pwc3d
