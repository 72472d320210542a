#ifndef ZK_EXPERIMENT_HPP
#define ZK_EXPERIMENT_HPP

#include "zk/approx_solution.hpp"
#include "zk/csv.hpp"
#include "zk/illposedness.hpp"
#include "zk/resonance.hpp"
#include "zk/solver.hpp"
#include "zk/strichartz.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#ifndef ZK_VERSION
#define ZK_VERSION "0.0.0-dev"
#endif

namespace zk {

inline std::string code_version() { return ZK_VERSION; }

// ---------------------------------------------------------------------------
// INI-style configuration: "key = value" lines grouped under [section] headers.
// '#' and ';' start comments on their own line.

class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string source, int line, std::string field, const std::string& message)
        : std::runtime_error(format(source, line, field, message)),
          source_(std::move(source)),
          line_(line),
          field_(std::move(field)) {}

    const std::string& source() const { return source_; }
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    static std::string format(const std::string& source, int line, const std::string& field, const std::string& msg) {
        std::string out = source;
        if (line > 0) out += ":" + std::to_string(line);
        if (!field.empty()) out += ": " + field;
        return out + ": " + msg;
    }

    std::string source_;
    int line_;
    std::string field_;
};

struct IniEntry {
    std::string section;
    std::string key;
    std::string value;
    std::string source;
    int line = 0;

    std::string field() const { return section + "." + key; }
};

namespace detail {
inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline bool valid_name(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    });
}
}  // namespace detail

inline std::vector<IniEntry> parse_ini(std::istream& in, const std::string& source) {
    std::vector<IniEntry> out;
    std::set<std::pair<std::string, std::string>> seen;
    std::string section, raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string text = detail::trim(raw);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text[0] == '[') {
            if (text.back() != ']') throw ConfigError(source, line, "", "unterminated section header");
            section = detail::trim(std::string_view(text).substr(1, text.size() - 2));
            if (!detail::valid_name(section)) throw ConfigError(source, line, "", "invalid section name '" + section + "'");
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) throw ConfigError(source, line, "", "expected 'key = value'");
        const std::string key = detail::trim(std::string_view(text).substr(0, eq));
        const std::string value = detail::trim(std::string_view(text).substr(eq + 1));
        if (!detail::valid_name(key)) throw ConfigError(source, line, "", "invalid key '" + key + "'");
        if (section.empty()) throw ConfigError(source, line, key, "key outside of any [section]");
        if (!seen.insert({section, key}).second) throw ConfigError(source, line, section + "." + key, "duplicate key");
        out.push_back({section, key, value, source, line});
    }
    return out;
}

inline std::vector<IniEntry> parse_ini_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "", "cannot open configuration file");
    return parse_ini(in, path);
}

// ---------------------------------------------------------------------------
// Value parsing

namespace detail {

template <class T>
T parse_number(const std::string& s) {
    T v{};
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw std::invalid_argument("not a valid number: '" + s + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) throw std::invalid_argument("not a finite number: '" + s + "'");
    }
    return v;
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
    std::vector<T> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(trim(item)));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

inline bool parse_bool(const std::string& s) {
    if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
    if (s == "false" || s == "no" || s == "0" || s == "off") return false;
    throw std::invalid_argument("not a boolean: '" + s + "'");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Experiment configuration

struct ExperimentConfig {
    std::string command;

    // [run]
    std::string out = "out";
    std::uint64_t seed = 20240601;
    // [grid]
    int mx = 256, my = 256, oversample = 4;
    // [solver]
    double dt = 5e-4, T = 1.0;
    int observer_stride = 100;
    bool dealias = true;
    std::vector<double> hs{2.0};
    // [solve]
    std::string initial = "approx";
    double solve_theta = 1.0;
    long long solve_m = 16;
    double solve_s = 2.0;
    long long solve_band = 4;
    double solve_amplitude = 0.1;
    // [illposed]
    double ill_s = 2.0;
    std::vector<long long> ill_m{16, 32, 64};
    double ill_t_min = 0.1;
    double ill_fraction = 0.5;
    // [residual]
    double res_theta = 1.0;
    double res_s = 2.0;
    std::vector<long long> res_m{8, 16, 32, 64};
    std::vector<double> res_times = default_residual_times();
    // [strichartz]
    std::vector<long long> str_N{4, 8, 16, 32, 64};
    int str_ensemble = 64;
    int str_time_samples = 64;
    double str_s_prime = 0.75;
    std::vector<long long> str_global_bands{2, 4, 8, 16};
    std::vector<double> str_commutator_s{1.0, 2.0};
    std::vector<long long> str_commutator_bands{4, 8};
    int str_commutator_pairs = 200;
    // [kernel]
    std::vector<long long> ker_N{4, 8, 16};
    int ker_t_points = 8;
    int ker_grid = 64;
    int ker_truncation = 0;   ///< 0 picks poisson_truncation_for
    std::vector<long long> airy_N{4, 8, 16, 32, 64};
    double airy_x_max = 10.0;
    // [resonance]
    long long res_bound = 10;

    /// Configuration files read (in order), for the manifest.
    std::vector<std::string> sources;
};

namespace detail {

struct ConfigField {
    std::string section, key;
    std::function<void(ExperimentConfig&, const std::string&)> set;
    std::function<nlohmann::json(const ExperimentConfig&)> get;
};

template <class T>
ConfigField number_field(std::string sec, std::string key, T ExperimentConfig::*member) {
    return {std::move(sec), std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_number<T>(v); },
            [member](const ExperimentConfig& c) { return nlohmann::json(c.*member); }};
}

template <class T>
ConfigField list_field(std::string sec, std::string key, std::vector<T> ExperimentConfig::*member) {
    return {std::move(sec), std::move(key), [member](ExperimentConfig& c, const std::string& v) { c.*member = parse_list<T>(v); },
            [member](const ExperimentConfig& c) { return nlohmann::json(c.*member); }};
}

inline const std::vector<ConfigField>& config_schema() {
    using C = ExperimentConfig;
    static const std::vector<ConfigField> schema = {
        {"run", "out", [](C& c, const std::string& v) {
             if (v.empty()) throw std::invalid_argument("output directory must not be empty");
             c.out = v;
         },
         [](const C& c) { return nlohmann::json(c.out); }},
        number_field("run", "seed", &C::seed),
        number_field("grid", "mx", &C::mx),
        number_field("grid", "my", &C::my),
        number_field("grid", "oversample", &C::oversample),
        number_field("solver", "dt", &C::dt),
        number_field("solver", "T", &C::T),
        number_field("solver", "observer_stride", &C::observer_stride),
        {"solver", "dealias", [](C& c, const std::string& v) { c.dealias = parse_bool(v); },
         [](const C& c) { return nlohmann::json(c.dealias); }},
        list_field("solver", "hs", &C::hs),
        {"solve", "initial", [](C& c, const std::string& v) {
             if (v != "approx" && v != "random") throw std::invalid_argument("expected 'approx' or 'random', got '" + v + "'");
             c.initial = v;
         },
         [](const C& c) { return nlohmann::json(c.initial); }},
        number_field("solve", "theta", &C::solve_theta),
        number_field("solve", "m", &C::solve_m),
        number_field("solve", "s", &C::solve_s),
        number_field("solve", "band", &C::solve_band),
        number_field("solve", "amplitude", &C::solve_amplitude),
        number_field("illposed", "s", &C::ill_s),
        list_field("illposed", "m", &C::ill_m),
        number_field("illposed", "t_min", &C::ill_t_min),
        number_field("illposed", "distance_fraction", &C::ill_fraction),
        number_field("residual", "theta", &C::res_theta),
        number_field("residual", "s", &C::res_s),
        list_field("residual", "m", &C::res_m),
        list_field("residual", "times", &C::res_times),
        list_field("strichartz", "N", &C::str_N),
        number_field("strichartz", "ensemble", &C::str_ensemble),
        number_field("strichartz", "time_samples", &C::str_time_samples),
        number_field("strichartz", "s_prime", &C::str_s_prime),
        list_field("strichartz", "global_bands", &C::str_global_bands),
        list_field("strichartz", "commutator_s", &C::str_commutator_s),
        list_field("strichartz", "commutator_bands", &C::str_commutator_bands),
        number_field("strichartz", "commutator_pairs", &C::str_commutator_pairs),
        list_field("kernel", "N", &C::ker_N),
        number_field("kernel", "t_points", &C::ker_t_points),
        number_field("kernel", "grid", &C::ker_grid),
        number_field("kernel", "truncation", &C::ker_truncation),
        list_field("kernel", "airy_N", &C::airy_N),
        number_field("kernel", "airy_x_max", &C::airy_x_max),
        number_field("resonance", "bound", &C::res_bound),
    };
    return schema;
}

}  // namespace detail

/// Applies parsed entries; unknown keys and bad values are reported with the
/// source, line and section.key they came from.
inline void apply_entries(ExperimentConfig& cfg, const std::vector<IniEntry>& entries) {
    const auto& schema = detail::config_schema();
    for (const auto& e : entries) {
        const auto it = std::find_if(schema.begin(), schema.end(),
                                     [&](const auto& f) { return f.section == e.section && f.key == e.key; });
        if (it == schema.end()) {
            const bool known_section = std::any_of(schema.begin(), schema.end(), [&](const auto& f) { return f.section == e.section; });
            throw ConfigError(e.source, e.line, e.field(), known_section ? "unknown key" : "unknown section '" + e.section + "'");
        }
        try {
            it->set(cfg, e.value);
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(e.source, e.line, e.field(), ex.what());
        }
    }
}

inline void load_config_file(ExperimentConfig& cfg, const std::string& path) {
    apply_entries(cfg, parse_ini_file(path));
    cfg.sources.push_back(path);
}

/// Resolved configuration, grouped by section, every default included.
inline nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& f : detail::config_schema()) j[f.section][f.key] = f.get(cfg);
    return j;
}

inline std::vector<std::string> config_fields() {
    std::vector<std::string> out;
    for (const auto& f : detail::config_schema()) out.push_back(f.section + "." + f.key);
    return out;
}

/// Range checks that do not depend on the command.
inline void validate_config(const ExperimentConfig& c) {
    auto fail = [](const std::string& field, const std::string& msg) { throw ConfigError("config", 0, field, msg); };
    try {
        Grid(c.mx, c.my, c.oversample);
    } catch (const std::invalid_argument& e) {
        fail("grid", e.what());
    }
    if (!(c.dt > 0.0)) fail("solver.dt", "must be positive");
    if (!(c.T > 0.0)) fail("solver.T", "must be positive");
    if (c.dt > c.T) fail("solver.dt", "must not exceed solver.T");
    if (c.observer_stride < 1) fail("solver.observer_stride", "must be positive");
    if (c.str_ensemble < 1) fail("strichartz.ensemble", "must be positive");
    if (c.str_time_samples < 64) fail("strichartz.time_samples", "must be at least 64");
    if (c.str_commutator_pairs < 1) fail("strichartz.commutator_pairs", "must be positive");
    for (long long N : c.str_N)
        if (N != 0 && !is_power_of_two(N)) fail("strichartz.N", "entries must be 0 or powers of two");
    for (long long N : c.ker_N)
        if (N < 1 || !is_power_of_two(N)) fail("kernel.N", "entries must be powers of two");
    for (long long N : c.airy_N)
        if (N < 1) fail("kernel.airy_N", "entries must be positive");
    if (c.ker_t_points < 2) fail("kernel.t_points", "must be at least 2");
    if (c.ker_truncation != 0 && c.ker_truncation < 4) fail("kernel.truncation", "must be 0 (automatic) or >= 4");
    if (c.ker_grid < 8) fail("kernel.grid", "must be at least 8");
    if (c.res_bound < 1 || c.res_bound > 200) fail("resonance.bound", "must lie in [1, 200]");
}

// ---------------------------------------------------------------------------
// Manifest

inline std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest failed");
    std::ostringstream os;
    for (unsigned int j = 0; j < len; ++j) os << std::hex << std::setw(2) << std::setfill('0') << int(md[j]);
    return os.str();
}

inline std::string sha256_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("sha256: cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return sha256_hex(ss.str());
}

struct CriterionResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct FileRecord {
    std::string path;   ///< relative to the run directory for outputs
    std::string sha256;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string command;
    std::string version = code_version();
    nlohmann::json config;
    std::vector<FileRecord> inputs;
    std::vector<FileRecord> outputs;
    std::vector<CriterionResult> criteria;
    std::vector<std::pair<std::string, double>> timings;
    nlohmann::json summary = nlohmann::json::object();

    bool all_pass() const {
        return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.pass; });
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["code_version"] = version;
        j["config"] = config;
        auto files = [](const std::vector<FileRecord>& v) {
            nlohmann::json a = nlohmann::json::array();
            for (const auto& f : v) a.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
            return a;
        };
        j["inputs"] = files(inputs);
        j["outputs"] = files(outputs);
        nlohmann::json cr = nlohmann::json::array();
        for (const auto& c : criteria) cr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
        j["criteria"] = cr;
        j["all_pass"] = all_pass();
        nlohmann::json tm = nlohmann::json::object();
        for (const auto& [k, v] : timings) tm[k] = v;
        j["timings_seconds"] = tm;
        j["summary"] = summary;
        return j;
    }
};

/// Output directory of one run; every file written through it is hashed into the manifest.
class RunDirectory {
public:
    RunDirectory(const ExperimentConfig& cfg, std::string command) : root_(cfg.out), start_(clock::now()) {
        std::filesystem::create_directories(root_);
        manifest_.command = std::move(command);
        manifest_.config = config_to_json(cfg);
        for (const auto& src : cfg.sources)
            manifest_.inputs.push_back({src, sha256_file(src), std::filesystem::file_size(src)});
    }

    template <class Writer>
    void write(const std::string& name, Writer&& writer) {
        const auto path = root_ / name;
        {
            std::ofstream os(path, std::ios::binary);
            if (!os) throw std::runtime_error("cannot write " + path.string());
            writer(os);
        }
        manifest_.outputs.push_back({name, sha256_file(path), std::filesystem::file_size(path)});
    }

    void criterion(std::string name, bool pass, std::string detail) {
        manifest_.criteria.push_back({std::move(name), pass, std::move(detail)});
    }

    /// Times fn() under `label`.
    template <class Fn>
    auto timed(const std::string& label, Fn&& fn) {
        const auto t0 = clock::now();
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            manifest_.timings.push_back({label, seconds_since(t0)});
        } else {
            auto r = fn();
            manifest_.timings.push_back({label, seconds_since(t0)});
            return r;
        }
    }

    nlohmann::json& summary() { return manifest_.summary; }

    /// Writes manifest.json (listing every other output) and returns the manifest.
    RunManifest finish() {
        manifest_.timings.push_back({"total", seconds_since(start_)});
        std::ofstream os(root_ / "manifest.json", std::ios::binary);
        os << manifest_.to_json().dump(2) << '\n';
        return manifest_;
    }

    const std::filesystem::path& root() const { return root_; }

private:
    using clock = std::chrono::steady_clock;
    static double seconds_since(clock::time_point t0) {
        return std::chrono::duration<double>(clock::now() - t0).count();
    }

    std::filesystem::path root_;
    clock::time_point start_;
    RunManifest manifest_;
};

// ---------------------------------------------------------------------------
// Commands

inline Grid config_grid(const ExperimentConfig& c) { return Grid(c.mx, c.my, c.oversample); }

inline SolverConfig solver_config(const ExperimentConfig& c) {
    SolverConfig s;
    s.dt = c.dt;
    s.T = c.T;
    s.observer_stride = c.observer_stride;
    s.dealias = c.dealias;
    s.hs_indices = c.hs;
    return s;
}

inline RunManifest run_solve(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "solve");
    const Grid grid = config_grid(cfg);
    SpectralField w0(grid);
    if (cfg.initial == "approx") {
        w0 = build({cfg.solve_theta, cfg.solve_m, cfg.solve_s}, grid, 0.0);
    } else {
        std::mt19937_64 rng(cfg.seed);
        w0 = random_real_field(grid, cfg.solve_band, rng);
        w0 *= cplx(cfg.solve_amplitude / l2_norm(w0) * two_pi, 0.0);
    }
    const Trajectory traj = run.timed("solve", [&] { return solve(w0, solver_config(cfg)); });
    run.write("observers.csv", [&](std::ostream& os) { write_observers_csv(traj, os); });

    run.criterion("run completed", traj.completed(), std::string(to_string(traj.status)) + (traj.message.empty() ? "" : ": " + traj.message));
    const DriftReport d = drift_report(traj);
    run.criterion("conservation drift <= 1e-8", d.worst() <= 1e-8,
                  "mass " + format_double(d.mass) + ", l2 " + format_double(d.l2) + ", energy " + format_double(d.energy) +
                      ", x-mean " + format_double(d.x_mean));
    auto& s = run.summary();
    s["status"] = to_string(traj.status);
    s["steps_dt"] = traj.dt;
    s["drift"] = {{"mass", d.mass}, {"l2", d.l2}, {"energy", d.energy}, {"x_mean", d.x_mean}};
    if (traj.observers.size() >= 2) s["g_T"] = gT_diagnostic(traj);
    return run.finish();
}

inline RunManifest run_illposedness(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "illposed");
    IllposednessParams p;
    p.s = cfg.ill_s;
    p.ms = cfg.ill_m;
    p.mx = cfg.mx;
    p.my = cfg.my;
    p.dt = cfg.dt;
    p.T = cfg.T;
    p.observer_stride = cfg.observer_stride;
    p.t_min = cfg.ill_t_min;
    p.distance_fraction = cfg.ill_fraction;
    const IllposednessReport rep = run.timed("study", [&] { return illposedness_study(p); });
    run.write("illposed.csv", [&](std::ostream& os) { write_illposedness_csv(rep, os); });
    for (const auto& c : rep.checks) run.criterion(c.name, c.pass, c.detail);
    auto& s = run.summary();
    s["uniform_bound_C"] = rep.uniform_bound;
    s["initial_distance_slope"] = rep.initial_distance_fit.slope;
    s["gap_epsilon"] = -rep.gap_fit.slope;
    nlohmann::json per_m = nlohmann::json::array();
    for (const auto& r : rep.runs)
        per_m.push_back({{"m", r.m},
                         {"status_u", to_string(r.status_u)},
                         {"status_v", to_string(r.status_v)},
                         {"sup_norm_sum", r.sup_norm_sum()},
                         {"initial_distance", r.initial_distance()},
                         {"fitted_c", r.fitted_c(p.t_min)},
                         {"sup_gap", r.sup_gap()}});
    s["runs"] = per_m;
    return run.finish();
}

/// Largest coefficient of the resonant part of G at (+-m, +-1), relative to the
/// size of the terms that cancel there (the time derivative of u).
inline double resonant_cancellation(const ApproxSolutionParams& p, const std::vector<double>& ts) {
    const Grid g = residual_grid(p.m);
    double worst = 0.0;
    for (double t : ts) {
        const ResidualSplit sp = residual_split(p, g, t);
        const double scale = std::max(time_derivative(p, g, t).max_abs(), 1e-300);
        for (long long a : {-1LL, 1LL})
            for (long long b : {-1LL, 1LL}) worst = std::max(worst, std::abs(sp.resonant.coeff(int(a * p.m), int(b))) / scale);
    }
    return worst;
}

inline RunManifest run_residual_scan(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "residual-scan");
    const ResidualScan scan = run.timed("scan", [&] { return residual_norm_scan(cfg.res_theta, cfg.res_s, cfg.res_m, cfg.res_times); });
    run.write("residual_scan.csv", [&](std::ostream& os) { write_residual_scan_csv(scan, os); });
    const long long mmax = *std::max_element(cfg.res_m.begin(), cfg.res_m.end());
    std::vector<double> ts;
    for (int j = 0; j <= 20; ++j) ts.push_back(0.05 * j);
    const auto prof = distance_profile(mmax, cfg.res_s, ts);
    run.write("distance_profile.csv", [&](std::ostream& os) { write_distance_profile_csv(prof, os); });

    const double expected = cfg.res_theta == 0.0 ? 1.0 - 2.0 * cfg.res_s : scan.predicted_l2_slope;
    run.criterion("L2 residual slope within 0.15", std::abs(scan.l2_fit.slope - expected) <= 0.15,
                  "fitted " + format_double(scan.l2_fit.slope) + ", expected " + format_double(expected));
    double cancel = 0.0;
    for (long long m : cfg.res_m) cancel = std::max(cancel, resonant_cancellation({cfg.res_theta, m, cfg.res_s}, cfg.res_times));
    run.criterion("resonant coefficients at (+-m,+-1) vanish", cancel <= 1e-12, "max relative " + format_double(cancel));
    auto& s = run.summary();
    s["l2_slope"] = scan.l2_fit.slope;
    s["l2_fit_residual"] = scan.l2_fit.residual;
    s["hs_slope"] = scan.hs_fit.slope;
    s["expected_l2_slope"] = expected;
    return run.finish();
}

inline RunManifest run_strichartz(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "strichartz");
    auto& s = run.summary();

    const ShortTimeStudy st = run.timed("short_time", [&] {
        return short_time_study(cfg.str_N, cfg.str_ensemble, cfg.seed, cfg.str_time_samples);
    });
    double c_short = 0.0;
    for (const auto& x : st.stats) c_short = std::max(c_short, x.max_ratio * std::cbrt(double(std::max<long long>(x.N, 1))));
    run.write("strichartz_short.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"N", "t", "value", "bound"});
        for (const auto& x : st.stats)
            csv.write_row({std::to_string(x.N), format_double(x.interval), format_double(x.max_ratio),
                           format_double(c_short / std::cbrt(double(std::max<long long>(x.N, 1))))});
    });
    if (st.stats.size() >= 2)
        run.criterion("short-time slope <= -0.2", st.fit.slope <= -0.2, "fitted " + format_double(st.fit.slope));
    run.criterion("L2 conserved along time quadrature (1e-12)", st.max_l2_deviation() <= 1e-12,
                  "max deviation " + format_double(st.max_l2_deviation()));
    s["short_time_slope"] = st.fit.slope;
    s["short_time_constant"] = c_short;

    std::vector<StrichartzStats> global;
    run.timed("global", [&] {
        for (long long B : cfg.str_global_bands)
            global.push_back(global_strichartz(cfg.str_s_prime, {cfg.str_ensemble, cfg.seed, B}, 128, cfg.oversample));
    });
    run.write("strichartz_global.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"N", "t", "value", "bound"});
        double c = 0.0;
        for (const auto& x : global) c = std::max(c, x.max_ratio);
        for (const auto& x : global)
            csv.write_row({std::to_string(x.N), format_double(x.interval), format_double(x.max_ratio), format_double(c)});
    });
    nlohmann::json g = nlohmann::json::array();
    for (const auto& x : global) g.push_back({{"N", x.N}, {"max_ratio", x.max_ratio}});
    s["global"] = {{"s_prime", cfg.str_s_prime}, {"bands", g}};

    const CommutatorStudy cs = run.timed("commutator", [&] {
        return commutator_study(cfg.str_commutator_s, cfg.str_commutator_bands, cfg.str_commutator_pairs, cfg.seed);
    });
    run.write("commutator.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"band", "s", "max_ratio"});
        for (const auto& x : cs.stats) csv.write_row({std::to_string(x.band), format_double(x.s), format_double(x.max_ratio)});
    });
    if (cfg.str_commutator_bands.size() >= 2)
        run.criterion("commutator ratio stable under band doubling (10%)", cs.worst_growth <= 1.1,
                      "worst growth " + format_double(cs.worst_growth));
    s["commutator_worst_growth"] = cs.worst_growth;
    return run.finish();
}

inline RunManifest run_kernel(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "kernel");
    auto& s = run.summary();

    const long long N0 = cfg.ker_N.front();
    const double t0 = 1.0 / double(N0 * N0);
    const int trunc = cfg.ker_truncation > 0 ? cfg.ker_truncation : poisson_truncation_for(N0, t0);
    const PoissonCheck pc = run.timed("poisson", [&] { return poisson_check({N0, t0, trunc}); });
    run.write("kernel_poisson.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"x", "y", "direct_re", "direct_im", "poisson_re", "poisson_im", "abs_diff"});
        for (std::size_t j = 0; j < pc.points.size(); ++j)
            csv.write_numbers({pc.points[j][0], pc.points[j][1], pc.direct[j].real(), pc.direct[j].imag(),
                               pc.poisson[j].real(), pc.poisson[j].imag(), std::abs(pc.direct[j] - pc.poisson[j])});
    });
    run.criterion("direct vs Poisson within 1e-4 relative", pc.relative_error() <= 1e-4,
                  "N=" + std::to_string(N0) + " t=" + format_double(t0) + " truncation " + std::to_string(trunc) +
                      ": " + format_double(pc.relative_error()));
    s["poisson"] = {{"N", N0}, {"t", t0}, {"truncation", trunc}, {"relative_error", pc.relative_error()}};

    const KernelDecayStudy kd = run.timed("kernel_decay", [&] { return kernel_decay_study(cfg.ker_N, cfg.ker_t_points, cfg.ker_grid); });
    run.write("kernel_decay.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"N", "t", "value", "bound"});
        for (const auto& scan : kd.scans)
            for (const auto& p : scan)
                csv.write_row({std::to_string(p.N), format_double(p.t), format_double(p.value),
                               format_double(kd.reference_constant() * std::pow(p.t, -2.0 / 3.0))});
    });
    run.criterion("kernel constant reused within 2x", kd.worst_constant_ratio() <= 2.0,
                  "max C_N / C_" + std::to_string(N0) + " = " + format_double(kd.worst_constant_ratio()));
    run.criterion("kernel t-exponent <= -0.55", kd.worst_exponent() <= -0.55,
                  "worst per-N exponent " + format_double(kd.worst_exponent()));
    nlohmann::json kj = nlohmann::json::array();
    for (std::size_t j = 0; j < kd.Ns.size(); ++j)
        kj.push_back({{"N", kd.Ns[j]}, {"exponent", kd.fits[j].slope}, {"fit_residual", kd.fits[j].residual}, {"C", kd.constants[j]}});
    s["kernel_decay"] = {{"per_N", kj}, {"pooled_exponent", kd.pooled.slope}};

    const AiryDecayStudy ad = run.timed("airy_decay", [&] { return airy_decay_study(cfg.airy_N, cfg.ker_t_points, cfg.airy_x_max); });
    const double ca = *std::max_element(ad.constants.begin(), ad.constants.end());
    run.write("airy_decay.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"N", "t", "value", "bound"});
        for (const auto& scan : ad.scans)
            for (const auto& p : scan)
                csv.write_row({std::to_string(p.N), format_double(p.t), format_double(p.value),
                               format_double(ca * std::pow(p.t, -1.0 / 3.0))});
    });
    run.write("airy_far_field.csv", [&](std::ostream& os) {
        CsvWriter csv(os, {"N", "t", "X", "value", "bound"});
        const double cf = ad.far_constant();
        for (const auto& p : ad.far)
            csv.write_row({std::to_string(p.N), format_double(p.t), format_double(p.X), format_double(p.value),
                           format_double(cf / (double(p.N) * double(p.N) * std::pow(std::abs(p.X), 3)))});
    });
    run.criterion("Airy sup exponent <= -0.28", ad.worst_exponent() <= -0.28, "worst " + format_double(ad.worst_exponent()));
    run.criterion("Airy constant stable across N (2x)", ad.constant_spread() <= 2.0, "max/min " + format_double(ad.constant_spread()));
    run.criterion("Airy far field <= N^-2 |X|^-3", ad.far_constant() <= 1.0, "C' = " + format_double(ad.far_constant()));
    nlohmann::json aj = nlohmann::json::array();
    for (std::size_t j = 0; j < ad.Ns.size(); ++j)
        aj.push_back({{"N", ad.Ns[j]}, {"exponent", ad.fits[j].slope}, {"C", ad.constants[j]}});
    s["airy_decay"] = {{"per_N", aj}, {"far_field_constant", ad.far_constant()}};
    return run.finish();
}

inline RunManifest run_resonance(const ExperimentConfig& cfg) {
    validate_config(cfg);
    RunDirectory run(cfg, "resonance");
    const auto zeros = run.timed("enumerate", [&] { return enumerate_resonances(cfg.res_bound); });
    run.write("resonances.csv", [&](std::ostream& os) { write_resonances_csv(zeros, os); });

    const long long B = cfg.res_bound;
    auto contains = [&](long long m, long long m1, long long n, long long n1) {
        return std::binary_search(zeros.begin(), zeros.end(), ResonanceQuadruple{m, m1, n, n1, 0});
    };
    bool family = true;
    for (long long m = -B; m <= B; ++m)
        for (long long n = -B; n <= B; ++n)
            if (std::abs(2 * n) <= B) family = family && contains(m, 0, n, 2 * n);
    bool closed = true;
    for (const auto& q : zeros)
        if (std::abs(q.m - q.m1) <= B && std::abs(q.n - q.n1) <= B)
            closed = closed && contains(q.m, q.m - q.m1, q.n, q.n - q.n1);
    run.criterion("family (m,0,n,2n) present", family, std::to_string(zeros.size()) + " zeros");
    run.criterion("closed under (m1,n1) -> (m-m1,n-n1)", closed, "");
    run.summary()["count"] = zeros.size();
    return run.finish();
}

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"solve", "illposed", "residual-scan", "strichartz", "kernel", "resonance"};
    return names;
}

inline RunManifest run_command(const ExperimentConfig& cfg) {
    if (cfg.command == "solve") return run_solve(cfg);
    if (cfg.command == "illposed") return run_illposedness(cfg);
    if (cfg.command == "residual-scan") return run_residual_scan(cfg);
    if (cfg.command == "strichartz") return run_strichartz(cfg);
    if (cfg.command == "kernel") return run_kernel(cfg);
    if (cfg.command == "resonance") return run_resonance(cfg);
    throw std::invalid_argument("unknown command '" + cfg.command + "'");
}

}  // namespace zk

#endif
