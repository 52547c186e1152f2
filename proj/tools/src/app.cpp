#include "app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mbgk/diagnostics.hpp"

#ifndef MBGK_VERSION
#define MBGK_VERSION "unknown"
#endif

namespace mbgk::app {

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::ofstream open_out(const fs::path& file) {
    std::ofstream os(file);
    if (!os) throw IoError("cannot write " + file.string());
    os << std::setprecision(17);
    return os;
}

std::string numbered(const char* stem, int index) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%04d.csv", stem, index);
    return buf;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

void write_json(const fs::path& file, const json& j) {
    auto os = open_out(file);
    os << j.dump(2) << '\n';
    if (!os) throw IoError("failed writing " + file.string());
}

class TotalsWriter {
public:
    explicit TotalsWriter(const fs::path& file) : os_(open_out(file)) {
        os_ << "step,time,dt,mass_1,mass_2,momentum_x,momentum_y,momentum_z,energy,H,dH_dt,"
               "max_newton_iterations,u_mix_x,T_mix,guard_triggers\n";
    }
    void row(long step, double time, double dt, const ConservedTotals& t, const EntropyRecord& h, int iters,
             const MixtureState& mix, double T_scale, int guards) {
        os_ << step << ',' << time << ',' << dt << ',' << t.mass[0] << ',' << t.mass[1] << ',' << t.momentum[0] << ','
            << t.momentum[1] << ',' << t.momentum[2] << ',' << t.energy << ',' << h.H << ',' << h.dH_dt << ','
            << iters << ',' << mix.u[0] << ',' << mix.T / T_scale << ',' << guards << '\n';
        if (!os_) throw IoError("failed writing totals.csv");
    }

private:
    std::ofstream os_;
};

const char* temperature_unit(const ScenarioConfig& c) { return c.units == Units::Cgs ? "eV" : "code"; }

void write_moments(const fs::path& file, const Scenario& sc) {
    const auto& st = *sc.stepper;
    const auto m = cell_moments(sc.state.f, st.grid_ptrs(), st.species());
    auto os = open_out(file);
    os << "# scenario=" << sc.config.name << "\n# step=" << sc.state.step << "\n# time=" << sc.state.time
       << "\n# temperature_unit=" << temperature_unit(sc.config) << '\n';
    os << "cell,x,n_1,u1_1,T_1,n_2,u1_2,T_2\n";
    const double scale = sc.config.temperature_scale();
    for (std::size_t k = 0; k < m.size(); ++k) {
        os << k << ',' << st.mesh().center(static_cast<int>(k));
        for (int i = 0; i < 2; ++i) os << ',' << m[k][i].n << ',' << m[k][i].u[0] << ',' << m[k][i].T / scale;
        os << '\n';
    }
    if (!os) throw IoError("failed writing " + file.string());
}

/// f_i(v1, c2, c3) with (c2, c3) the grid center; bilinear between the four central nodes for even N.
void write_slice(const fs::path& file, const Scenario& sc) {
    const auto& st = *sc.stepper;
    auto os = open_out(file);
    os << "# scenario=" << sc.config.name << "\n# step=" << sc.state.step << "\n# time=" << sc.state.time << '\n';
    os << "species,cell,v1,f\n";
    for (int i = 0; i < 2; ++i) {
        const auto& g = st.grid(i);
        const int N = g.nodes_per_axis();
        const int hi = N / 2, lo = N % 2 == 0 ? hi - 1 : hi;
        for (int k : sc.config.slice_cells) {
            const auto f = sc.state.f[i].cell(static_cast<std::size_t>(k));
            for (int a = 0; a < N; ++a) {
                const double v = 0.25 * (f[g.index(a, lo, lo)] + f[g.index(a, lo, hi)] + f[g.index(a, hi, lo)] +
                                         f[g.index(a, hi, hi)]);
                os << i + 1 << ',' << k << ',' << g.coords(0)[static_cast<std::size_t>(a)] << ',' << v << '\n';
            }
        }
    }
    if (!os) throw IoError("failed writing " + file.string());
}

json grid_json(const VelocityGrid& g) {
    return {{"nodes_per_axis", g.nodes_per_axis()},
            {"axis_min", {g.axis_min()[0], g.axis_min()[1], g.axis_min()[2]}},
            {"axis_max", {g.axis_max()[0], g.axis_max()[1], g.axis_max()[2]}},
            {"dv", {g.dv()[0], g.dv()[1], g.dv()[2]}}};
}

/// Advances to t_end; the last step is shortened to land on it.
template <class OnStep>
void advance(Scenario& sc, OnStep&& on_step) {
    auto& st = *sc.stepper;
    const double t_end = sc.config.t_end;
    const double dt0 = st.default_dt();
    while (sc.state.time < t_end * (1.0 - 1e-12)) {
        const double dt = std::min(dt0, t_end - sc.state.time);
        const StepReport rep = st.step(sc.state, dt);
        on_step(rep);
    }
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunSummary run(const ScenarioConfig& config, const fs::path& out, std::ostream* log) {
    const auto t0 = Clock::now();
    ensure_dir(out);
    Scenario sc = build_scenario(config);
    const double setup = seconds_since(t0);
    const auto& st = *sc.stepper;
    const auto grids = st.grid_ptrs();
    const double T_scale = config.temperature_scale();

    const std::string cfg_text = to_json(config);
    json manifest = {{"scenario", config.name},
                     {"config_hash", fnv1a_hex(cfg_text)},
                     {"code_version", MBGK_VERSION},
                     {"config", json::parse(cfg_text)},
                     {"grids", {grid_json(st.grid(0)), grid_json(st.grid(1))}},
                     {"grid_mixture", {{"u", {sc.mixture.u[0], sc.mixture.u[1], sc.mixture.u[2]}},
                                       {"T", sc.mixture.T / T_scale}}},
                     {"time_step", st.default_dt()},
                     {"outputs", {{"totals", "totals.csv"}, {"moments", json::array()}, {"slices", json::array()}}},
                     {"status", "running"},
                     {"timings", {{"setup_seconds", setup}}}};
    write_json(out / "manifest.json", manifest);

    TotalsWriter totals(out / "totals.csv");
    EntropyTracker tracker;
    const ConservedTotals initial = conserved_totals(sc.state.f, st.mesh(), grids, st.species());
    totals.row(0, 0.0, 0.0, initial, tracker.record(entropy(sc.state.f, st.mesh(), grids), 0.0), 0,
               global_mixture(initial, st.species()), T_scale, 0);

    RunSummary summary;
    auto snapshot = [&] {
        const int idx = summary.snapshots++;
        const auto mname = numbered("moments", idx);
        write_moments(out / mname, sc);
        manifest["outputs"]["moments"].push_back(mname);
        if (!config.slice_cells.empty()) {
            const auto sname = numbered("slice", idx);
            write_slice(out / sname, sc);
            manifest["outputs"]["slices"].push_back(sname);
        }
        if (log) *log << "  snapshot " << idx << " step " << sc.state.step << " t=" << sc.state.time << '\n';
    };
    snapshot();
    long last_snapshot = 0;

    const auto t_loop = Clock::now();
    advance(sc, [&](const StepReport& rep) {
        const ConservedTotals t = conserved_totals(sc.state.f, st.mesh(), grids, st.species());
        const auto h = tracker.record(entropy(sc.state.f, st.mesh(), grids), rep.dt);
        totals.row(sc.state.step, sc.state.time, rep.dt, t, h, rep.relax.max_iterations, global_mixture(t, st.species()),
                   T_scale, rep.guard_triggers);
        summary.guard_triggers += rep.guard_triggers;
        summary.max_drift = std::max(summary.max_drift, max_relative_drift(initial, t));
        if (config.snapshot_every > 0 && sc.state.step % config.snapshot_every == 0) {
            snapshot();
            last_snapshot = sc.state.step;
        }
    });
    if (last_snapshot != sc.state.step) snapshot();

    summary.steps = sc.state.step;
    summary.time = sc.state.time;
    summary.seconds = seconds_since(t0);
    manifest["status"] = "complete";
    manifest["steps"] = summary.steps;
    manifest["final_time"] = summary.time;
    manifest["guard_triggers"] = summary.guard_triggers;
    manifest["timings"]["loop_seconds"] = seconds_since(t_loop);
    manifest["timings"]["total_seconds"] = summary.seconds;
    write_json(out / "manifest.json", manifest);
    if (log)
        *log << config.name << ": " << summary.steps << " steps to t=" << summary.time << " in " << summary.seconds
             << " s\n";
    return summary;
}

std::vector<ConvergenceRow> convergence(const ScenarioConfig& config, int levels, const fs::path& out,
                                        std::ostream* log) {
    if (levels < 2) throw InvalidInput("a convergence study needs at least two levels");
    ensure_dir(out);
    const MixtureState grid_mix = initial_mixture(config);

    // Step counts double with the level so every run lands on t_end with a uniform step.
    long steps0 = 0;
    {
        Scenario probe = build_scenario(config, grid_mix);
        const double dt = probe.stepper->default_dt();
        steps0 = std::max(1L, static_cast<long>(std::ceil(config.t_end / dt * (1.0 - 1e-12))));
    }

    std::vector<ConvergenceRow> rows;
    FieldPair previous;
    SpatialMesh previous_mesh;
    std::array<const VelocityGrid*, 2> grids{};
    std::unique_ptr<Stepper> keep;
    for (int l = 0; l < levels; ++l) {
        ScenarioConfig c = config;
        c.mesh.cells = config.mesh.cells << l;
        c.dt = config.t_end / static_cast<double>(steps0 << l);
        c.slice_cells.clear();
        Scenario sc = build_scenario(c, grid_mix);
        const auto t0 = Clock::now();
        advance(sc, [](const StepReport&) {});
        if (log) *log << "level " << l << ": " << c.mesh.cells << " cells, " << sc.state.step << " steps, "
                      << seconds_since(t0) << " s\n";
        if (l > 0) {
            const auto e = l1_self_error(previous, sc.state.f, previous_mesh, grids);
            ConvergenceRow r;
            r.level = l - 1;
            r.cells = previous_mesh.cells;
            r.dt = config.t_end / static_cast<double>(steps0 << (l - 1));
            r.error = e;
            for (int i = 0; i < 2; ++i)
                r.order[i] = rows.empty() ? std::numeric_limits<double>::quiet_NaN()
                                          : std::log2(rows.back().error[i] / e[i]);
            rows.push_back(r);
        }
        previous = std::move(sc.state.f);
        previous_mesh = c.mesh;
        keep = std::move(sc.stepper);
        grids = keep->grid_ptrs();
    }

    auto os = open_out(out / "convergence.csv");
    os << "# scenario=" << config.name << "\n# scheme=" << to_string(config.scheme)
       << "\n# flux_order=" << config.flux_order << '\n';
    os << "level,cells,dt,error_1,error_2,order_1,order_2\n";
    for (const auto& r : rows)
        os << r.level << ',' << r.cells << ',' << r.dt << ',' << r.error[0] << ',' << r.error[1] << ',' << r.order[0]
           << ',' << r.order[1] << '\n';
    if (!os) throw IoError("failed writing convergence.csv");
    return rows;
}

MomentTable read_moments(const fs::path& file) {
    std::ifstream is(file);
    if (!is) throw IoError("cannot read " + file.string());
    MomentTable t;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# time=", 0) == 0) t.time = std::stod(line.substr(7));
            if (line.rfind("# step=", 0) == 0) t.step = std::stol(line.substr(7));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!header) {
            while (std::getline(ss, cell, ',')) t.columns.push_back(cell);
            header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw IoError("malformed number in " + file.string());
            }
        }
        if (row.size() != t.columns.size()) throw IoError("ragged row in " + file.string());
        t.rows.push_back(std::move(row));
    }
    if (!header) throw IoError("missing header in " + file.string());
    return t;
}

std::vector<std::string> reldiff_columns() { return {"r_n_1", "r_u1_1", "r_T_1", "r_n_2", "r_u1_2", "r_T_2"}; }

std::vector<double> compare(const fs::path& run_a, const fs::path& run_b, const fs::path& out, std::ostream* log) {
    std::map<std::string, fs::path> files;
    std::error_code ec;
    for (const auto& e : fs::directory_iterator(run_a, ec)) {
        const auto name = e.path().filename().string();
        if (name.rfind("moments_", 0) == 0 && e.path().extension() == ".csv") files[name] = e.path();
    }
    if (ec) throw IoError("cannot list " + run_a.string());
    ensure_dir(out);
    const auto cols = reldiff_columns();
    std::vector<double> worst(cols.size(), 0.0);
    int matched = 0;
    for (const auto& [name, path_a] : files) {
        const fs::path path_b = run_b / name;
        if (!fs::exists(path_b)) continue;
        const MomentTable a = read_moments(path_a), b = read_moments(path_b);
        if (a.columns != b.columns || a.rows.size() != b.rows.size())
            throw InvalidInput("runs have different meshes (" + name + ")");
        if (std::abs(a.time - b.time) > 1e-9 * std::max(std::abs(a.time), std::abs(b.time)))
            throw InvalidInput("snapshot times differ (" + name + ")");
        auto os = open_out(out / ("reldiff_" + name.substr(8)));
        os << "# time=" << a.time << '\n' << "cell,x";
        for (const auto& c : cols) os << ',' << c;
        os << '\n';
        for (std::size_t k = 0; k < a.rows.size(); ++k) {
            const double xa = a.rows[k][1], xb = b.rows[k][1];
            if (std::abs(xa - xb) > 1e-12 * (std::abs(xa) + std::abs(xb)))
                throw InvalidInput("runs have different cell centers (" + name + ")");
            os << k << ',' << a.rows[k][1];
            for (std::size_t c = 0; c < cols.size(); ++c) {
                const double r = relative_difference(a.rows[k][2 + c], b.rows[k][2 + c]);
                worst[c] = std::max(worst[c], std::abs(r));
                os << ',' << r;
            }
            os << '\n';
        }
        if (!os) throw IoError("failed writing reldiff for " + name);
        ++matched;
    }
    if (matched == 0) throw InvalidInput("no common snapshots between the two runs");
    if (log) {
        *log << "compared " << matched << " snapshots; max |r|:";
        for (std::size_t c = 0; c < cols.size(); ++c) *log << ' ' << cols[c] << '=' << worst[c];
        *log << '\n';
    }
    return worst;
}

}  // namespace mbgk::app
