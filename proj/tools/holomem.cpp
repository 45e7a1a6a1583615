// holomem: config-driven runs of the dark-polariton memory model.
//
//   holomem holonomy --config run.json --out dir
//   holomem protocol --config run.json --out dir [--mode adiabatic|exact|both]
//   holomem verify   --config run.json --out dir [--seed N]
//   holomem sweep    --config run.json --out dir
//
// Exit codes: 0 success, 1 verify check failed, 2 invalid config or a
// protocol/design precondition, 3 unexpected internal error.
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include <holomem/config.hpp>
#include <holomem/finite_n.hpp>
#include <holomem/holomem.hpp>

#include "output.hpp"

namespace fs = std::filesystem;
using namespace holomem;
using holomem::tools::CsvWriter;
using holomem::tools::fmt;
using holomem::tools::Json;
using holomem::tools::matrix_json;
using holomem::tools::to_json;

namespace {

constexpr const char* kVersion = "1.0.0";
constexpr std::uint64_t kDefaultSeed = 20240917;

struct Invocation {
    std::string command;
    std::string config_path;
    fs::path out = "holomem_out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> mode;
};

std::uint64_t seed_of(const Invocation& inv, const config::RunConfig& rc)
{
    return inv.seed.value_or(rc.command.seed.value_or(kDefaultSeed));
}

std::string mode_of(const Invocation& inv, const config::RunConfig& rc)
{
    return inv.mode.value_or(rc.command.mode);
}

std::vector<RunMode> modes_of(const std::string& m)
{
    if (m == "adiabatic")
        return {RunMode::adiabatic};
    if (m == "exact")
        return {RunMode::exact};
    return {RunMode::adiabatic, RunMode::exact};
}

void write_meta(const Invocation& inv, const config::RunConfig& rc, const Json& extra = Json::object())
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    Json meta{{"tool", "holomem"},
              {"version", kVersion},
              {"command", inv.command},
              {"config", fs::absolute(inv.config_path).string()},
              {"seed", seed_of(inv, rc)},
              {"mode", mode_of(inv, rc)},
              {"max_sector", max_sector()},
              {"timestamp", stamp}};
    for (auto it = extra.begin(); it != extra.end(); ++it)
        meta[it.key()] = it.value();
    tools::write_json(inv.out / "meta.json", meta);
}

Json system_json(const SystemParams& p)
{
    return {{"g_sqrt_n", p.g_sqrt_n}, {"delta_p", p.delta_p}, {"delta_1", p.delta_1}, {"delta_2", p.delta_2}};
}

Json retrieval_json(const RetrievalCondition& r)
{
    return {{"phi", r.phi}, {"j", r.j}, {"deviation", r.deviation}};
}

PhotonState input_state(const config::RunConfig& rc, std::uint64_t seed)
{
    std::vector<Complex> c = rc.command.input;
    if (rc.command.random_sectors > 0) {
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> n01;
        c.assign(static_cast<std::size_t>(rc.command.random_sectors), Complex{});
        for (auto& x : c)
            x = {n01(rng), n01(rng)};
        return PhotonState::normalized(std::move(c));
    }
    double n = 0.0;
    for (const auto& x : c)
        n += std::norm(x);
    if (std::abs(n - 1.0) > 1e-6)
        throw config::ConfigError("command.input: amplitudes must be normalized (sum |c|^2 = " + fmt(n) + ")");
    return PhotonState::normalized(std::move(c));
}

// ---------------------------------------------------------------------------
// holonomy

int cmd_holonomy(const Invocation& inv, const config::RunConfig& rc)
{
    const auto& p = rc.system;
    const auto s = config::build_schedule(p, rc.schedule);
    validate_schedule(p, s);
    const double T = s.duration();
    const auto ret = retrieval_condition(p, s);

    Json out{{"system", system_json(p)},
             {"duration", T},
             {"resonant", p.resonant()},
             {"phi_T", ret.phi},
             {"retrieval", retrieval_json(ret)},
             {"max_margin", max_adiabatic_margin(p, s)}};
    Json sectors = Json::array();
    for (int l : rc.command.sectors) {
        const auto w = holonomy_integrate(p, s, l, 0.0, T);
        const auto closed = holonomy_closed_form(l, ret.phi);
        const CMatrix v = basis_change_matrix(l);
        const CMatrix primed = v.adjoint() * w.w * v;
        CVector diag = primed.diagonal();
        CMatrix off = primed;
        off.diagonal().setZero();
        sectors.push_back({{"l", l},
                           {"w_integrated", matrix_json(w.w)},
                           {"w_closed_form", matrix_json(closed.w)},
                           {"norm_difference", linalg::operator_norm(w.w - closed.w)},
                           {"unitarity_defect", linalg::unitarity_defect(w.w)},
                           {"primed_diagonal", to_json(diag)},
                           {"primed_offdiagonal_max", off.size() ? off.cwiseAbs().maxCoeff() : 0.0},
                           {"steps", w.stats.accepted}});
    }
    out["sectors"] = sectors;
    tools::write_json(inv.out / "holonomy.json", out);

    std::vector<std::string> header{"t",           "theta",         "kappa",         "kappa_dot",
                                    "phi",         "margin_rate_1", "margin_rate_2", "margin_detuning_1",
                                    "margin_detuning_2", "margin_max"};
    for (int l : rc.command.sectors)
        header.push_back("norm_K_" + std::to_string(l));
    CsvWriter csv(inv.out / "holonomy_timeseries.csv", header);
    const int n = rc.command.samples;
    double phi = 0.0, t_prev = 0.0;
    for (int k = 0; k < n; ++k) {
        const double t = k + 1 == n ? T : T * k / (n - 1);
        const auto m = mixing_angles(p, s, t);
        const auto mg = adiabatic_margins(p, s, t);
        phi += phi_between(p, s, t_prev, t);
        t_prev = t;
        std::vector<std::string> row{fmt(t),          fmt(m.theta),       fmt(m.kappa),         fmt(m.kappa_dot),
                                     fmt(phi),        fmt(mg.rate[0]),    fmt(mg.rate[1]),      fmt(mg.detuning[0]),
                                     fmt(mg.detuning[1]), fmt(mg.max)};
        for (int l : rc.command.sectors)
            row.push_back(fmt(linalg::operator_norm(connection_analytic(p, s, t, l).k)));
        csv.write_row(row);
    }
    write_meta(inv, rc);
    return 0;
}

// ---------------------------------------------------------------------------
// protocol

Json cycle_json(const CycleReport& r)
{
    Json sectors = Json::array();
    for (const auto& s : r.sectors) {
        const auto last = s.trace.empty() ? CVector() : s.trace.back().dark;
        sectors.push_back({{"l", s.l},
                           {"weight", s.weight},
                           {"holonomy", matrix_json(s.holonomy)},
                           {"overlap", to_json(s.overlap)},
                           {"sector_fidelity", std::norm(s.overlap)},
                           {"leakage", s.leakage},
                           {"final_dark_coefficients", to_json(last)}});
    }
    return {{"mode", mode_name(r.mode)},
            {"fidelity", r.fidelity},
            {"max_margin", r.max_margin},
            {"retrieval", retrieval_json(r.retrieval)},
            {"steps", r.stats.accepted},
            {"sectors", sectors}};
}

Json storage_json(const StorageReport& r)
{
    Json sectors = Json::array();
    for (const auto& s : r.sectors)
        sectors.push_back({{"l", s.l},
                           {"weight", s.weight},
                           {"dark_coefficients", to_json(s.dark)},
                           {"leakage", s.leakage},
                           {"photon_occupancy", s.occupancy.photon},
                           {"atomic_occupancy", s.occupancy.atomic()}});
    return {{"mode", mode_name(r.mode)},
            {"tau", r.tau},
            {"photon_occupancy", r.photon_occupancy},
            {"atomic_occupancy", r.atomic_occupancy},
            {"fidelity_to_adiabatic", r.fidelity_to_adiabatic},
            {"max_margin", r.max_margin},
            {"sectors", sectors}};
}

int cmd_protocol(const Invocation& inv, const config::RunConfig& rc)
{
    const auto& p = rc.system;
    const auto s = config::build_schedule(p, rc.schedule);
    const auto input = input_state(rc, seed_of(inv, rc));
    RunOptions opt;
    opt.evolution.tolerance = rc.command.tolerance;
    opt.evolution.samples = rc.command.samples;

    Json out{{"system", system_json(p)},
             {"duration", s.duration()},
             {"input", to_json(Eigen::Map<const CVector>(input.coefficients.data(),
                                                         static_cast<Eigen::Index>(input.coefficients.size())))},
             {"retrieval", retrieval_json(retrieval_condition(p, s))}};
    Json runs = Json::object();
    Json storage = Json::object();

    const int lmax = input.l_max();
    std::vector<std::string> header{"mode", "l", "t", "leakage", "photon_occupancy"};
    for (int m = 0; m <= lmax; ++m) {
        header.push_back("c" + std::to_string(m) + "_re");
        header.push_back("c" + std::to_string(m) + "_im");
    }
    CsvWriter csv(inv.out / "protocol_timeseries.csv", header);
    for (RunMode mode : modes_of(mode_of(inv, rc))) {
        const auto st = run_storage(p, s, input, mode, opt);
        storage[mode_name(mode)] = storage_json(st);
        const auto rep = run_cycle(p, s, input, mode, opt);
        runs[mode_name(mode)] = cycle_json(rep);
        for (const auto& sec : rep.sectors)
            for (const auto& tr : sec.trace) {
                std::vector<std::string> row{mode_name(mode), std::to_string(sec.l), fmt(tr.t), fmt(tr.leakage),
                                             fmt(tr.photon)};
                for (Eigen::Index m = 0; m < tr.dark.size(); ++m) {
                    row.push_back(fmt(tr.dark(m).real()));
                    row.push_back(fmt(tr.dark(m).imag()));
                }
                csv.write_row(row);
            }
    }
    out["storage"] = storage;
    out["cycle"] = runs;

    if (lmax >= 1) {
        Json gate{{"ideal", matrix_json(qubit_gate(p, s, opt.thresholds))},
                  {"integrated", matrix_json(qubit_gate_integrated(p, s, opt))}};
        if (rc.command.qubit_exact) {
            const auto ex = qubit_gate_exact(p, s, opt);
            gate["exact"] = matrix_json(ex.gate);
            gate["exact_gate_fidelity"] = ex.gate_fidelity;
            gate["exact_leakage"] = ex.leakage;
        }
        out["qubit_gate"] = gate;
    }
    tools::write_json(inv.out / "protocol.json", out);
    write_meta(inv, rc);
    return 0;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
    std::string suite;
    std::string name;
    double value;
    double threshold;
    bool pass;
};

/// Random valid system + waypoint schedule + interior time.
struct RandomSetup {
    SystemParams p;
    PulseSchedule s;
    double t;
};

RandomSetup random_setup(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    SystemParams p;
    p.g_sqrt_n = 0.5 + 1.5 * u(rng);
    p.delta_p = -1.0 + 2.0 * u(rng);
    p.delta_1 = 0.05 * p.g_sqrt_n * (2.0 * u(rng) - 1.0);
    p.delta_2 = 0.05 * p.g_sqrt_n * (2.0 * u(rng) - 1.0);
    const int knots = 3 + static_cast<int>(3 * u(rng));
    std::vector<Waypoint> pts;
    double t = 0.0;
    for (int k = 0; k < knots; ++k) {
        pts.push_back({t, 0.05 + 5.0 * u(rng), kPi / 2 * u(rng)});
        t += 5.0 + 50.0 * u(rng);
    }
    auto s = PulseSchedule::from_waypoints(std::move(pts), 0.2 + 2.0 * u(rng));
    const double T = s.duration();
    return {p, s, T * (0.05 + 0.9 * u(rng))};
}

void suite_darkness(const config::RunConfig& rc, std::mt19937_64& rng, std::vector<Check>& out)
{
    double worst = 0.0;
    for (int i = 0; i < rc.command.random_samples; ++i) {
        const auto r = random_setup(rng);
        for (int l = 0; l <= 3; ++l) {
            const double h = linalg::hermitian_norm(sector_h(r.p, r.s, r.t, l));
            const double res = darkness_residual(r.p, r.s, r.t, l);
            if (h > 0.0)
                worst = std::max(worst, res / h);
        }
    }
    out.push_back({"darkness", "max residual / ||H_l||, l <= 3", worst, 1e-10, worst < 1e-10});
}

void suite_connection(const config::RunConfig& rc, std::mt19937_64& rng, std::vector<Check>& out)
{
    double worst = 0.0, worst_ratio = std::numeric_limits<double>::infinity();
    const double sign = rc.command.corrupt_connection_sign ? -1.0 : 1.0;
    for (int i = 0; i < rc.command.random_samples; ++i) {
        const auto r = random_setup(rng);
        const double dt = 1e-4 * r.s.duration();
        for (int l = 1; l <= 3; ++l) {
            const CMatrix ka = sign * connection_analytic(r.p, r.s, r.t, l).k;
            const double e1 = (ka - connection_numeric(r.p, r.s, r.t, l, dt).k).cwiseAbs().maxCoeff();
            const double e2 = (ka - connection_numeric(r.p, r.s, r.t, l, dt / 2).k).cwiseAbs().maxCoeff();
            worst = std::max(worst, e1);
            if (e1 > 1e-10)
                worst_ratio = std::min(worst_ratio, e1 / e2);
        }
    }
    out.push_back({"connection", "max |K_analytic - K_numeric|, dt = 1e-4 T", worst, 1e-6, worst < 1e-6});
    const bool conv = !std::isfinite(worst_ratio) || worst_ratio > 3.0;
    out.push_back({"connection", "min error ratio on halving dt (expect 4)",
                   std::isfinite(worst_ratio) ? worst_ratio : 4.0, 3.0, conv});
}

void suite_unitarity(const config::RunConfig& rc, std::vector<Check>& out)
{
    const auto& p = rc.system;
    const auto s = config::build_schedule(p, rc.schedule);
    double worst = 0.0;
    for (int l : rc.command.sectors)
        worst = std::max(worst, linalg::unitarity_defect(holonomy_integrate(p, s, l, 0.0, s.duration()).w));
    out.push_back({"unitarity", "max ||W^+ W - 1|| over configured sectors", worst, 1e-10, worst < 1e-10});
}

void suite_closed_form(const config::RunConfig& rc, std::vector<Check>& out)
{
    SystemParams p = rc.system;
    p.delta_1 = p.delta_2 = 0.0;
    auto sc = rc.schedule;
    sc.family.check_detuning = false;
    const auto s = config::build_schedule(p, sc);
    const double phi = phi_of_t(p, s, s.duration());
    double worst = 0.0;
    for (int l : rc.command.sectors)
        worst = std::max(worst, linalg::operator_norm(holonomy_integrate(p, s, l, 0.0, s.duration()).w -
                                                      holonomy_closed_form(l, phi).w));
    out.push_back({"closed_form", "max ||W_int - exp(-phi K0)|| at delta = 0", worst, 1e-8, worst < 1e-8});
}

void suite_diagonalization(const config::RunConfig& rc, std::vector<Check>& out)
{
    double worst = 0.0;
    for (int l : rc.command.sectors) {
        const CMatrix v = basis_change_matrix(l);
        for (double phi : {0.3, 1.0, kPi})
            worst = std::max(worst, linalg::operator_norm(v * primed_holonomy(l, phi).w * v.adjoint() -
                                                          holonomy_closed_form(l, phi).w));
    }
    out.push_back({"diagonalization", "max ||V W' V^+ - W|| for phi in {0.3, 1, pi}", worst, 1e-10,
                   worst < 1e-10});
}

void suite_finite_n(const config::RunConfig& rc, std::vector<Check>& out)
{
    const auto& p = rc.system;
    for (int n : rc.command.finite_n_atoms) {
        const finite_n::FiniteSystem sys(n, std::max(1, rc.command.finite_n_photons));
        const std::string tag = "N = " + std::to_string(n) + ": ";
        double comm = 0.0;
        for (int k = 1; k <= 2; ++k) {
            comm = std::max(comm, finite_n::frobenius(finite_n::commutator(sys.A(), sys.T_plus(k)) - sys.C(k)));
            comm = std::max(comm, finite_n::frobenius(finite_n::commutator(sys.C(k), sys.T_minus(k)) - sys.A()));
        }
        comm = std::max(comm, finite_n::frobenius(finite_n::commutator(sys.T_plus(1), sys.T_plus(2))));
        out.push_back({"finite_n", tag + "commutator identities", comm, 1e-12, comm < 1e-12});

        const double defect = finite_n::commutator_defect(sys, finite_n::StateSpec::one_excitation, 1);
        const double dd = std::abs(defect + 2.0 / n);
        out.push_back({"finite_n", tag + "|defect + 2/N|", dd, 1e-10, dd < 1e-10});

        const auto d1 = finite_n::dark_degeneracy_check(sys, p, 0.7, 1.3, 0.5, 1);
        out.push_back({"finite_n", tag + "l = 1 spectrum vs boson sector", d1.max_delta, 1e-10, d1.max_delta < 1e-10});
        out.push_back({"finite_n", tag + "l = 1 zero modes (expect 2)", static_cast<double>(d1.zero_modes), 2.0,
                       d1.zero_modes == 2});
    }
}

int cmd_verify(const Invocation& inv, const config::RunConfig& rc)
{
    std::mt19937_64 rng(seed_of(inv, rc));
    std::vector<Check> checks;
    for (const auto& suite : rc.command.suites) {
        if (suite == "darkness")
            suite_darkness(rc, rng, checks);
        else if (suite == "connection")
            suite_connection(rc, rng, checks);
        else if (suite == "unitarity")
            suite_unitarity(rc, checks);
        else if (suite == "closed_form")
            suite_closed_form(rc, checks);
        else if (suite == "diagonalization")
            suite_diagonalization(rc, checks);
        else if (suite == "finite_n")
            suite_finite_n(rc, checks);
    }
    bool all = true;
    Json arr = Json::array();
    for (const auto& c : checks) {
        all = all && c.pass;
        arr.push_back({{"suite", c.suite}, {"check", c.name}, {"value", c.value}, {"threshold", c.threshold},
                       {"pass", c.pass}});
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.suite << ": " << c.name << " = " << fmt(c.value) << '\n';
    }
    tools::write_json(inv.out / "verify.json", {{"pass", all}, {"checks", arr}});
    write_meta(inv, rc);
    return all ? 0 : 1;
}

// ---------------------------------------------------------------------------
// sweep

struct GridPoint {
    std::vector<double> knobs;
    std::vector<double> metrics;
    std::string status = "ok";
};

void apply_knob(const std::string& knob, double v, SystemParams& p, config::ScheduleConfig& sc)
{
    const bool family = sc.type == "designed" || sc.type == "cycle";
    if (knob == "time_scale")
        sc.time_scale *= v;
    else if (knob == "delta_1")
        p.delta_1 = v;
    else if (knob == "delta_2")
        p.delta_2 = v;
    else if (knob == "delta_antisym")
        p.delta_1 = v, p.delta_2 = -v;
    else if (knob == "delta_p")
        p.delta_p = v;
    else if (!family)
        throw config::ConfigError("command.grid: knob '" + knob + "' needs a designed or cycle schedule");
    else if (knob == "omega_low")
        sc.family.omega_low = v;
    else if (knob == "max_margin")
        sc.family.max_margin = v;
    else if (knob == "target_phi") {
        if (sc.type != "designed")
            throw config::ConfigError("command.grid: knob 'target_phi' needs a designed schedule");
        sc.target_phi = v;
    }
}

double metric(const std::string& name, const config::RunConfig& rc, const SystemParams& p,
              const config::ScheduleConfig& sc, const PulseSchedule& s, const PhotonState& input)
{
    const int l = rc.command.metric_sector;
    const double T = s.duration();
    if (name == "phi")
        return phi_of_t(p, s, T);
    if (name == "max_margin")
        return max_adiabatic_margin(p, s);
    if (name == "duration")
        return T;
    RunOptions opt;
    opt.evolution.tolerance = rc.command.tolerance;
    opt.evolution.samples = 2;
    if (name == "cycle_fidelity")
        return run_cycle(p, s, input, RunMode::exact, opt).fidelity;
    if (name == "holonomy_deviation") {
        const auto ev = evolve_sector(p, s, l, dark_basis(p, s, 0.0, l).column(0), 0.0, T, opt.evolution);
        const CVector pred = holonomy_integrate(p, s, l, 0.0, T).w.col(0);
        return (ev.samples.back().dark - pred).norm();
    }
    if (name == "closed_form_difference")
        return linalg::operator_norm(holonomy_integrate(p, s, l, 0.0, T).w -
                                     holonomy_closed_form(l, phi_of_t(p, s, T)).w);
    // path_dependence: same phi through a companion loop with another omega_low.
    if (sc.type != "designed" && sc.type != "cycle")
        throw config::ConfigError("command.metrics: 'path_dependence' needs a designed or cycle schedule");
    CycleFamily f = sc.family;
    f.omega_low = rc.command.companion_omega_low;
    f.check_detuning = false;
    auto companion = design_phase_schedule(p, phi_of_t(p, s, T), f).schedule;
    if (sc.time_scale != 1.0)
        companion = companion.time_scaled(sc.time_scale);
    return linalg::operator_norm(holonomy_integrate(p, s, l, 0.0, T).w -
                                 holonomy_integrate(p, companion, l, 0.0, companion.duration()).w);
}

int cmd_sweep(const Invocation& inv, const config::RunConfig& rc)
{
    const auto& grid = rc.command.grid;
    std::size_t total = grid.empty() ? 0 : 1;
    for (const auto& ax : grid)
        total *= ax.values.size();
    if (total == 0)
        throw config::ConfigError("command.grid: empty grid (no axes or an axis without values)");
    const auto input = input_state(rc, seed_of(inv, rc));

    std::vector<GridPoint> points(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::size_t r = i;
        std::vector<double> k(grid.size());
        for (std::size_t a = grid.size(); a-- > 0;) {
            k[a] = grid[a].values[r % grid[a].values.size()];
            r /= grid[a].values.size();
        }
        points[i].knobs = k;
    }
    // Validate knob/schedule combinations before spawning work.
    {
        SystemParams p = rc.system;
        auto sc = rc.schedule;
        for (std::size_t a = 0; a < grid.size(); ++a)
            apply_knob(grid[a].knob, grid[a].values.front(), p, sc);
        if ((sc.type != "designed" && sc.type != "cycle"))
            for (const auto& m : rc.command.metrics)
                if (m == "path_dependence")
                    throw config::ConfigError("command.metrics: 'path_dependence' needs a designed or cycle schedule");
    }

    auto work = [&](GridPoint& gp) {
        try {
            SystemParams p = rc.system;
            auto sc = rc.schedule;
            for (std::size_t a = 0; a < grid.size(); ++a)
                apply_knob(grid[a].knob, gp.knobs[a], p, sc);
            const auto s = config::build_schedule(p, sc);
            validate_schedule(p, s);
            for (const auto& m : rc.command.metrics)
                gp.metrics.push_back(metric(m, rc, p, sc, s, input));
        } catch (const Error& e) {
            gp.metrics.assign(rc.command.metrics.size(), std::numeric_limits<double>::quiet_NaN());
            gp.status = e.what();
        }
    };
    unsigned nthreads = rc.command.threads > 0 ? static_cast<unsigned>(rc.command.threads)
                                               : std::max(1u, std::thread::hardware_concurrency());
    nthreads = std::min<unsigned>(nthreads, static_cast<unsigned>(total));
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < nthreads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < total; i = next++)
                work(points[i]);
        });
    for (auto& th : pool)
        th.join();

    std::vector<std::string> header;
    for (const auto& ax : grid)
        header.push_back(ax.knob);
    for (const auto& m : rc.command.metrics)
        header.push_back(m);
    header.push_back("status");
    CsvWriter csv(inv.out / "sweep.csv", header);
    for (const auto& gp : points) {
        std::vector<std::string> row;
        for (double k : gp.knobs)
            row.push_back(fmt(k));
        for (double m : gp.metrics)
            row.push_back(fmt(m));
        std::string status = gp.status;
        for (auto& ch : status)
            if (ch == ',' || ch == '\n' || ch == '"')
                ch = ' ';
        row.push_back(status);
        csv.write_row(row);
    }
    write_meta(inv, rc, {{"grid_points", total}, {"threads", nthreads}});
    return 0;
}

int dispatch(const Invocation& inv)
{
    const auto rc = config::load_config(inv.config_path);
    fs::create_directories(inv.out);
    if (inv.command == "holonomy")
        return cmd_holonomy(inv, rc);
    if (inv.command == "protocol")
        return cmd_protocol(inv, rc);
    if (inv.command == "verify")
        return cmd_verify(inv, rc);
    return cmd_sweep(inv, rc);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dark-polariton holonomy and quantum-memory simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Invocation inv;
    std::uint64_t seed = 0;
    std::string mode;
    const std::vector<std::pair<std::string, std::string>> commands{
        {"holonomy", "integrated and closed-form holonomies plus a time series of angles and margins"},
        {"protocol", "storage and full cycle of a photonic input state"},
        {"verify", "invariant suites; exit 1 when any check fails"},
        {"sweep", "grid over one or two knobs, one CSV row per point"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", inv.config_path, "JSON run configuration")->required();
        sub->add_option("--out", inv.out, "output directory")->capture_default_str();
        sub->add_option("--seed", seed, "random seed (u64)");
        sub->add_option("--mode", mode, "adiabatic, exact or both")
            ->check(CLI::IsMember({"adiabatic", "exact", "both"}));
        sub->callback([&inv, name = name] { inv.command = name; });
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    for (auto* sub : app.get_subcommands()) {
        if (sub->count("--seed"))
            inv.seed = seed;
        if (sub->count("--mode"))
            inv.mode = mode;
    }

    try {
        return dispatch(inv);
    } catch (const config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const ProtocolError& e) {
        std::cerr << "protocol precondition failed: " << e.what() << '\n';
        return 2;
    } catch (const DesignError& e) {
        std::cerr << "design failed: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
