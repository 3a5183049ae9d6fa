#include "boltzlp/experiments.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef BOLTZLP_VERSION
#define BOLTZLP_VERSION "0.0.0"
#endif

namespace boltzlp {

namespace pt = boost::property_tree;

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        if (b == std::string::npos) continue;
        std::size_t used = 0;
        const double v = std::stod(item.substr(b), &used);
        if (item.find_first_not_of(" \t", b + used) != std::string::npos)
            throw std::invalid_argument("config: bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Vec3 parse_vec3(const std::string& s) {
    const auto v = parse_list(s);
    if (v.size() != 3) throw std::invalid_argument("config: expected three comma separated values, got '" + s + "'");
    return {v[0], v[1], v[2]};
}

bool parse_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw std::invalid_argument("config: bad boolean '" + s + "'");
}

template <class E, std::size_t N>
E parse_enum(const std::string& s, const std::pair<const char*, E> (&table)[N], const char* what) {
    for (const auto& [name, value] : table)
        if (s == name) return value;
    throw std::invalid_argument(std::string("config: unknown ") + what + " '" + s + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    pt::ini_parser::read_ini(is, tree);
    ExperimentConfig c;
    auto get = [&](const char* key, auto fallback) { return tree.get<decltype(fallback)>(key, fallback); };

    c.name = get("run.name", c.name);
    c.experiment = get("run.experiment", c.experiment);
    c.kernel.gamma = get("kernel.gamma", c.kernel.gamma);
    c.kernel.s = get("kernel.s", c.kernel.s);
    c.kernel.b0 = get("kernel.b0", c.kernel.b0);
    c.kernel.eps_theta = get("kernel.eps_theta", c.kernel.eps_theta);

    c.quadrature.n_theta = get("quadrature.n_theta", c.quadrature.n_theta);
    c.quadrature.n_phi = get("quadrature.n_phi", c.quadrature.n_phi);
    c.quadrature.grading = get("quadrature.grading", c.quadrature.grading);

    c.n = get("grid.n", c.n);
    c.radius = get("grid.radius", c.radius);
    // delta defaults to half the grid spacing
    c.kernel.delta_rel = get("kernel.delta_rel", c.radius / c.n);

    static const std::pair<const char*, InitialKind> kinds[] = {{"maxwellian", InitialKind::maxwellian},
                                                                {"bump", InitialKind::bump},
                                                                {"two_bumps", InitialKind::two_bumps},
                                                                {"spike", InitialKind::spike},
                                                                {"file", InitialKind::file}};
    c.initial.kind = parse_enum(get("initial.kind", std::string("bump")), kinds, "initial kind");
    if (auto v = tree.get_optional<std::string>("initial.center")) c.initial.center = parse_vec3(*v);
    if (auto v = tree.get_optional<std::string>("initial.center2")) c.initial.center2 = parse_vec3(*v);
    c.initial.width = get("initial.width", c.initial.width);
    c.initial.mass = get("initial.mass", c.initial.mass);
    c.initial.temperature = get("initial.temperature", c.initial.temperature);
    if (auto v = tree.get_optional<std::string>("initial.node")) {
        const Vec3 nd = parse_vec3(*v);
        c.initial.node = {static_cast<int>(nd[0]), static_cast<int>(nd[1]), static_cast<int>(nd[2])};
    }
    c.initial.path = get("initial.path", c.initial.path);

    if (auto v = tree.get_optional<std::string>("run.p_list")) c.p_list = parse_list(*v);
    c.w = get("run.w", c.w);
    c.t_star = get("run.t_star", c.t_star);
    c.T = get("run.T", c.T);
    const std::string dt = get("run.dt", std::string("adaptive"));
    c.dt = dt == "adaptive" ? 0.0 : std::stod(dt);
    c.safety = get("run.safety", c.safety);
    c.snapshot_cadence = get("run.snapshot_cadence", c.snapshot_cadence);
    c.tail_snapshots = get("run.tail_snapshots", c.tail_snapshots);
    static const std::pair<const char*, SolverKind> solvers[] = {{"direct", SolverKind::direct},
                                                                 {"fast", SolverKind::fast},
                                                                 {"fast_with_oracle", SolverKind::fast_with_oracle}};
    c.solver = parse_enum(get("run.solver", std::string("fast")), solvers, "solver");
    c.oracle_every = get("run.oracle_every", c.oracle_every);
    static const std::pair<const char*, Scheme> schemes[] = {{"euler", Scheme::euler}, {"rk3_ssp", Scheme::rk3_ssp}};
    c.scheme = parse_enum(get("run.scheme", std::string("rk3_ssp")), schemes, "scheme");
    c.seed = get("run.seed", c.seed);
    c.output_dir = get("run.output_dir", c.output_dir);
    c.max_steps = get("run.max_steps", c.max_steps);

    if (auto v = tree.get_optional<std::string>("fast.compress")) c.fast.compress = parse_bool(*v);
    c.fast.r_nodes = get("fast.r_nodes", c.fast.r_nodes);
    c.fast.max_table_mb = get("fast.max_table_mb", c.fast.max_table_mb);

    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path, std::string* text_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    if (text_out) *text_out = ss.str();
    return parse_config(ss.str());
}

const char* version_string() { return BOLTZLP_VERSION; }

std::string grid_hash(const VelocityGrid& g) {
    // FNV-1a over (n, radius)
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const void* p, std::size_t len) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < len; ++i) {
            h ^= b[i];
            h *= 1099511628211ULL;
        }
    };
    const std::int64_t n = g.n;
    mix(&n, sizeof n);
    mix(&g.radius, sizeof g.radius);
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& config_text, const ExperimentReport* report) {
    if (cfg.output_dir.empty()) return;
    std::filesystem::create_directories(cfg.output_dir);
    nlohmann::json j;
    j["name"] = cfg.name;
    j["version"] = version_string();
    j["grid_hash"] = grid_hash(cfg.grid());
    j["config"] = config_text;
    if (report) {
        j["pass"] = report->pass;
        j["report"] = report->to_string();
    }
    std::ofstream(std::filesystem::path(cfg.output_dir) / "manifest.json") << j.dump(2) << '\n';
}

}  // namespace boltzlp
