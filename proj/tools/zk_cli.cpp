#include "zk/experiment.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out, seed, grid, dt, s, m, N;
};

// Where --s, --m and --N land for each command.
const std::map<std::string, std::map<std::string, std::string>> flag_targets = {
    {"solve", {{"s", "solve.s"}, {"m", "solve.m"}}},
    {"illposed", {{"s", "illposed.s"}, {"m", "illposed.m"}}},
    {"residual-scan", {{"s", "residual.s"}, {"m", "residual.m"}}},
    {"strichartz", {{"s", "strichartz.s_prime"}, {"N", "strichartz.N"}}},
    {"kernel", {{"N", "kernel.N"}}},
    {"resonance", {}},
};

zk::IniEntry flag_entry(const std::string& field, const std::string& value, const std::string& flag) {
    const auto dot = field.find('.');
    return {field.substr(0, dot), field.substr(dot + 1), value, "--" + flag, 0};
}

std::vector<zk::IniEntry> flag_overrides(const std::string& command, const Flags& f) {
    std::vector<zk::IniEntry> out;
    if (f.out) out.push_back(flag_entry("run.out", *f.out, "out"));
    if (f.seed) out.push_back(flag_entry("run.seed", *f.seed, "seed"));
    if (f.dt) out.push_back(flag_entry("solver.dt", *f.dt, "dt"));
    if (f.grid) {
        const auto x = f.grid->find('x');
        if (x == std::string::npos) throw zk::ConfigError("--grid", 0, "grid", "expected <Mx>x<My>, got '" + *f.grid + "'");
        out.push_back(flag_entry("grid.mx", f.grid->substr(0, x), "grid"));
        out.push_back(flag_entry("grid.my", f.grid->substr(x + 1), "grid"));
    }
    const auto& targets = flag_targets.at(command);
    for (const auto& [name, value] : {std::pair{"s", f.s}, std::pair{"m", f.m}, std::pair{"N", f.N}}) {
        if (!value) continue;
        const auto it = targets.find(name);
        if (it == targets.end())
            throw zk::ConfigError(std::string("--") + name, 0, "", "flag is not used by '" + command + "'");
        out.push_back(flag_entry(it->second, *value, name));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pseudo-spectral Zakharov-Kuznetsov toolkit on the 2-torus"};
    app.require_subcommand(1);
    app.set_version_flag("--version", zk::code_version());

    const std::map<std::string, std::string> descriptions = {
        {"solve", "integrate the ZK equation and record observers"},
        {"illposed", "two-sequence ill-posedness experiment"},
        {"residual-scan", "residual norms of the approximate solutions vs m"},
        {"strichartz", "short-time and global Strichartz ratios, commutator estimate"},
        {"kernel", "dispersive kernel decay, Poisson cross-check, Airy profile"},
        {"resonance", "enumerate zeros of the resonance function"},
    };

    Flags flags;
    std::string chosen;
    for (const auto& name : zk::command_names()) {
        auto* sub = app.add_subcommand(name, descriptions.at(name));
        sub->add_option("--config", flags.config, "INI configuration file")->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out, "output directory");
        sub->add_option("--seed", flags.seed, "random seed (u64)");
        sub->add_option("--grid", flags.grid, "grid size <Mx>x<My>");
        sub->add_option("--dt", flags.dt, "time step");
        sub->add_option("--s", flags.s, "Sobolev index");
        sub->add_option("--m", flags.m, "comma separated m list");
        sub->add_option("--N", flags.N, "comma separated dyadic N list");
        sub->callback([&chosen, name] { chosen = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        zk::ExperimentConfig cfg;
        cfg.command = chosen;
        if (!flags.config.empty()) zk::load_config_file(cfg, flags.config);
        zk::apply_entries(cfg, flag_overrides(chosen, flags));
        const zk::RunManifest m = zk::run_command(cfg);
        for (const auto& c : m.criteria)
            std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : " (" + c.detail + ")") << '\n';
        std::cout << "manifest: " << (std::filesystem::path(cfg.out) / "manifest.json").string() << '\n';
        return 0;
    } catch (const zk::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
