#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "app.hpp"
#include "mbgk/parallel.hpp"

namespace {

using namespace mbgk;
namespace fs = std::filesystem;

struct RunFlags {
    std::string preset;
    std::string config;
    std::string out;
    std::string frequency;
    std::string scheme;
    std::optional<int> cells;
    std::optional<int> vnodes;
    std::optional<double> dt;
    std::optional<double> t_end;
    std::optional<int> snapshot_every;
    std::optional<int> threads;
    std::optional<int> flux_order;
    int levels = 0;
};

ScenarioConfig load_config(const RunFlags& f) {
    ScenarioConfig c;
    if (!f.config.empty()) {
        std::ifstream is(f.config);
        if (!is) throw InvalidInput("cannot read config " + f.config);
        std::stringstream ss;
        ss << is.rdbuf();
        c = config_from_json(ss.str());
    } else if (!f.preset.empty()) {
        c = preset(f.preset);
    } else {
        throw InvalidInput("one of --preset or --config is required");
    }
    if (!f.frequency.empty()) apply_frequency_tag(c, f.frequency);
    if (!f.scheme.empty()) c.scheme = parse_scheme(f.scheme);
    if (f.flux_order) c.flux_order = *f.flux_order;
    if (f.cells) c.mesh.cells = *f.cells;
    if (f.vnodes) c.velocity_nodes = *f.vnodes;
    if (f.dt) c.dt = *f.dt;
    if (f.t_end) c.t_end = *f.t_end;
    if (f.snapshot_every) c.snapshot_every = *f.snapshot_every;
    c.threads = f.threads ? *f.threads : default_threads();
    // Slice cells of a preset may fall outside a reduced mesh.
    std::erase_if(c.slice_cells, [&](int k) { return k >= c.mesh.cells; });
    c.validate();
    return c;
}

template <class F>
int guarded(F&& body) {
    try {
        body();
        return app::Success;
    } catch (const InvalidInput& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return app::ConfigError;
    } catch (const SolverFailure& e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return app::SolverError;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return app::IoFailure;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "i/o error: " << e.what() << '\n';
        return app::IoFailure;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return app::ConfigError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Multi-species BGK solver with velocity-dependent collision frequencies"};
    cli.require_subcommand(1);

    RunFlags rf;
    auto* run = cli.add_subcommand("run", "Run a scenario and write CSV outputs");
    auto* src = run->add_option_group("source");
    src->add_option("--preset", rf.preset, "Preset name")->check(CLI::IsMember(preset_names()));
    src->add_option("--config", rf.config, "JSON config file")->check(CLI::ExistingFile);
    src->require_option(1);
    run->add_option("--out", rf.out, "Output directory")->required();
    run->add_option("--frequency", rf.frequency, "Frequency variant, e.g. veldep, vhat, coulomb_thermal");
    run->add_option("--scheme", rf.scheme, "splitting1 or ars222");
    run->add_option("--flux-order", rf.flux_order, "1 or 2");
    run->add_option("--cells", rf.cells, "Spatial cells (base cells with --levels)");
    run->add_option("--vnodes", rf.vnodes, "Velocity nodes per axis");
    run->add_option("--dt", rf.dt, "Fixed time step");
    run->add_option("--t-end", rf.t_end, "Final time");
    run->add_option("--snapshot-every", rf.snapshot_every, "Steps between moment snapshots");
    run->add_option("--threads", rf.threads, "Worker threads (default from MBGK_THREADS)");
    run->add_option("--levels", rf.levels, "Run a self-convergence study over this many levels");

    std::string dir_a, dir_b, cmp_out;
    auto* cmp = cli.add_subcommand("compare", "Relative differences between two runs");
    cmp->add_option("run_a", dir_a)->required()->check(CLI::ExistingDirectory);
    cmp->add_option("run_b", dir_b)->required()->check(CLI::ExistingDirectory);
    cmp->add_option("--out", cmp_out, "Output directory")->required();

    auto* list = cli.add_subcommand("presets", "List preset names, or print one as JSON");
    std::string show;
    list->add_option("name", show);

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::ConfigError;
    }

    if (*run) {
        return guarded([&] {
            const ScenarioConfig c = load_config(rf);
            if (rf.levels > 0) {
                const auto rows = app::convergence(c, rf.levels, rf.out, &std::cout);
                std::cout << "level,cells,error_1,error_2,order_1,order_2\n";
                for (const auto& r : rows)
                    std::cout << r.level << ',' << r.cells << ',' << r.error[0] << ',' << r.error[1] << ','
                              << r.order[0] << ',' << r.order[1] << '\n';
            } else {
                app::run(c, rf.out, &std::cout);
            }
        });
    }
    if (*cmp) return guarded([&] { app::compare(dir_a, dir_b, cmp_out, &std::cout); });
    return guarded([&] {
        if (show.empty()) {
            for (const auto& n : preset_names()) std::cout << n << '\n';
        } else {
            std::cout << to_json(preset(show)) << '\n';
        }
    });
}
