// kickrot: experiment runner for the kicked-rotator laboratory.
//
// Every command writes its artifacts plus a manifest.json echoing the full
// configuration, so a run can be reproduced from its output directory alone.
// Exit codes: 0 success, 2 configuration error, 3 numerical-validity failure.

#include "kickrot/classical.hpp"
#include "kickrot/gs_circuit.hpp"
#include "kickrot/io.hpp"
#include "kickrot/observables.hpp"
#include "kickrot/reference.hpp"
#include "kickrot/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kickrot;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr double kNormTolerance = 1e-8;

json g_file_config;

// Config file values fill in anything the command line left at its default;
// explicit flags always win.
template <typename T>
void fill_from_config(const CLI::App& cmd, const std::string& flag, const std::string& key,
                      T& field) {
    if (cmd.count(flag) == 0 && g_file_config.contains(key)) {
        field = g_file_config.at(key).get<T>();
    }
}

struct Manifest {
    std::string command;
    json params = json::object();
    std::vector<std::string> outputs;

    void save(const fs::path& dir) const {
        json j{{"command", command}, {"params", params}, {"outputs", outputs}};
        io::write_json_atomic(dir / "manifest.json", j);
    }
};

double series_norm_drift(const reference::Wavefunction& psi) {
    return std::abs(psi.norm() - 1.0);
}

int fail_numerical(const std::string& what) {
    std::cerr << "numerical validity failure: " << what << "\n";
    return kExitNumerical;
}

obs::MomentumDistribution distribution_of(const reference::Wavefunction& psi, std::size_t n0) {
    return obs::MomentumDistribution::from_amplitudes(psi.amps, n0);
}

// --- classical commands -----------------------------------------------------

struct ClassicalTrajParams {
    double k = 5.0, T = 1.0, n0 = 0.0, theta0 = 1.0;
    std::int64_t t = 1000;
    std::string out = "out-classical-traj";
};

int run_classical_traj(const ClassicalTrajParams& p) {
    const classical::MapParams mp(p.k, p.T);
    classical::ClassicalState s{p.n0, classical::reduce_angle(p.theta0)};
    io::CsvWriter csv({"t", "n", "theta"});
    csv.row({0.0, s.n, s.theta});
    for (std::int64_t t = 1; t <= p.t; ++t) {
        s = classical::standard_map_step(s, mp);
        csv.row({static_cast<double>(t), s.n, s.theta});
    }
    const fs::path dir(p.out);
    csv.save(dir / "trajectory.csv");
    Manifest m{"classical-traj",
               {{"k", p.k}, {"T", p.T}, {"n0", p.n0}, {"theta0", p.theta0}, {"t", p.t}},
               {"trajectory.csv"}};
    m.save(dir);
    return kExitOk;
}

struct ClassicalDiffusionParams {
    double K = 5.0, T = 1.0;
    std::int64_t orbits = 10000, t = 1000;
    std::string out = "out-classical-diffusion";
};

int run_classical_diffusion(const ClassicalDiffusionParams& p) {
    const auto mp = classical::MapParams::from_K(p.K, p.T);
    const auto series =
        classical::evolve_ensemble(classical::uniform_angle_ensemble(p.orbits), mp, p.t);
    io::CsvWriter csv({"t", "mean_n", "var_n"});
    for (std::size_t t = 0; t < series.mean_n.size(); ++t)
        csv.row({static_cast<double>(t), series.mean_n[t], series.var_n[t]});
    const double D = classical::fit_diffusion_rate(series);

    const fs::path dir(p.out);
    csv.save(dir / "moments.csv");
    io::write_json_atomic(dir / "fit.json",
                          {{"D", D}, {"D_quasilinear", mp.k * mp.k / 2.0}});
    Manifest m{"classical-diffusion",
               {{"K", p.K}, {"T", p.T}, {"orbits", p.orbits}, {"t", p.t}},
               {"moments.csv", "fit.json"}};
    m.save(dir);
    std::cout << "D = " << D << " (k^2/2 = " << mp.k * mp.k / 2.0 << ")\n";
    return kExitOk;
}

struct LyapunovParams {
    double K = 5.0, T = 1.0;
    std::int64_t t = 200000;
    std::uint64_t seed = 1;
    std::string out = "out-lyapunov";
};

int run_lyapunov(const LyapunovParams& p) {
    const auto r = classical::lyapunov_exponent(classical::MapParams::from_K(p.K, p.T), p.t, p.seed);
    const fs::path dir(p.out);
    io::write_json_atomic(dir / "lyapunov.json", {{"lambda", r.lambda},
                                                  {"degenerate", r.degenerate},
                                                  {"ln_K_over_2", std::log(p.K / 2.0)}});
    Manifest m{"lyapunov",
               {{"K", p.K}, {"T", p.T}, {"t", p.t}, {"seed", p.seed}},
               {"lyapunov.json"}};
    m.save(dir);
    std::cout << "lambda = " << r.lambda << (r.degenerate ? " (degenerate orbit)" : "") << "\n";
    return kExitOk;
}

struct LatticeMapParams {
    std::int64_t N = 256;
    double K = 5.0;
    std::int64_t t = 50;
    std::string init = "line"; // line | delta
    std::int64_t X = 0, Y = 0;
    std::string out = "out-lattice-map";
};

int run_lattice_map(const LatticeMapParams& p) {
    classical::DensityGrid d = p.init == "delta"
                                   ? classical::DensityGrid::delta(p.N, p.X, p.Y)
                                   : classical::DensityGrid::line_at_Y(p.N, p.Y);
    const double before = d.total();
    d = classical::density_evolve(d, p.K, p.t);
    if (d.total() != before) return fail_numerical("density transport lost weight");

    const fs::path dir(p.out);
    io::write_grid(dir / "density.f64", d.weights, {{"N", p.N}, {"K", p.K}, {"t", p.t}});
    io::CsvWriter csv({"Y", "weight"});
    const auto marginal = d.marginal_Y();
    for (std::size_t y = 0; y < marginal.size(); ++y)
        csv.row({static_cast<double>(y), marginal[y]});
    csv.save(dir / "marginal_Y.csv");
    Manifest m{"lattice-map",
               {{"N", p.N}, {"K", p.K}, {"t", p.t}, {"init", p.init}, {"X", p.X}, {"Y", p.Y}},
               {"density.f64", "density.f64.json", "marginal_Y.csv"}};
    m.save(dir);
    return kExitOk;
}

// --- quantum reference commands ----------------------------------------------

reference::PotentialKind make_potential(const std::string& name, double E, int poly_degree) {
    if (name == "cosine") return reference::PotentialKind::cosine();
    if (name == "arctan") return reference::PotentialKind::arctan_band(E);
    if (name == "polynomial")
        return reference::PotentialKind::polynomial(gs::chebyshev_coeffs(poly_degree, 16).coeffs);
    throw CLI::ValidationError("--potential", "unknown potential kind: " + name);
}

struct QuantumEvolveParams {
    int nq = 11;
    double k = 10.0, T = 0.5;
    std::int64_t t = 1000, record_every = 10;
    std::string potential = "cosine";
    double E = 0.0;
    int poly_degree = 14;
    std::int64_t n_init = -1; // default N/2
    std::string out = "out-quantum-evolve";
};

int run_quantum_evolve(const QuantumEvolveParams& p) {
    reference::QuantumParams qp;
    qp.k = p.k;
    qp.T = p.T;
    qp.N = std::size_t(1) << p.nq;
    qp.potential = make_potential(p.potential, p.E, p.poly_degree);
    const std::size_t n0 = p.n_init < 0 ? qp.N / 2 : static_cast<std::size_t>(p.n_init);

    const auto snaps =
        reference::evolve(reference::Wavefunction::basis_state(qp.N, n0), qp, p.t, p.record_every);
    if (series_norm_drift(snaps.back().psi) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");

    io::CsvWriter csv({"t", "mean_n", "var_n", "ipr"});
    for (const auto& s : snaps) {
        const auto dist = distribution_of(s.psi, n0);
        const auto mom = obs::momentum_moments(dist);
        csv.row({static_cast<double>(s.t), mom.mean, mom.variance, obs::ipr(dist)});
    }
    const fs::path dir(p.out);
    csv.save(dir / "moments.csv");
    io::write_wavefunction(dir / "final_psi.bin", snaps.back().psi.amps,
                           {{"N", qp.N},
                            {"k", qp.k},
                            {"T", qp.T},
                            {"potential", qp.potential.name()},
                            {"t", snaps.back().t}});
    Manifest m{"quantum-evolve",
               {{"nq", p.nq},
                {"k", p.k},
                {"T", p.T},
                {"t", p.t},
                {"record_every", p.record_every},
                {"potential", p.potential},
                {"E", p.E},
                {"poly_degree", p.poly_degree},
                {"n_init", static_cast<std::int64_t>(n0)}},
               {"moments.csv", "final_psi.bin", "final_psi.bin.json"}};
    m.save(dir);
    return kExitOk;
}

struct LocalizationFitParams {
    int nq = 11;
    double k = 10.0, T = 0.5;
    std::int64_t t = 10000, record_every = 50;
    std::string out = "out-localization-fit";
};

int run_localization_fit(const LocalizationFitParams& p) {
    reference::QuantumParams qp;
    qp.k = p.k;
    qp.T = p.T;
    qp.N = std::size_t(1) << p.nq;
    const std::size_t n0 = qp.N / 2;
    const auto snaps =
        reference::evolve(reference::Wavefunction::basis_state(qp.N, n0), qp, p.t, p.record_every);
    if (series_norm_drift(snaps.back().psi) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");

    // envelope: time average over the last 20% of snapshots
    std::vector<obs::MomentumDistribution> tail;
    for (std::size_t i = snaps.size() - snaps.size() / 5; i < snaps.size(); ++i)
        tail.push_back(distribution_of(snaps[i].psi, n0));
    const auto avg = obs::time_average(tail);
    const auto fit = obs::localization_length_fit(avg, obs::WindowPolicy::auto_window());

    const fs::path dir(p.out);
    io::CsvWriter csv({"n", "prob"});
    for (std::size_t n = 0; n < avg.size(); ++n) csv.row({static_cast<double>(n), avg.probs[n]});
    csv.save(dir / "avg_distribution.csv");
    // l uses the fit's eigenstate-envelope convention (P ~ exp(-2|d|/l));
    // l_packet = l/2 is the saturated wavepacket's decay length, the quantity
    // that tracks D/2 = k^2/4.
    io::write_json_atomic(dir / "fit.json", {{"l", fit.l},
                                             {"l_packet", fit.l / 2.0},
                                             {"slope", fit.slope},
                                             {"r2", fit.r_squared},
                                             {"window", {fit.window_lo, fit.window_hi}},
                                             {"valid", fit.valid}});
    Manifest m{"localization-fit",
               {{"nq", p.nq}, {"k", p.k}, {"T", p.T}, {"t", p.t}, {"record_every", p.record_every}},
               {"avg_distribution.csv", "fit.json"}};
    m.save(dir);
    std::cout << "l = " << fit.l << " (packet " << fit.l / 2.0 << "), r2 = " << fit.r_squared
              << (fit.valid ? "" : " [invalid]") << "\n";
    return kExitOk;
}

struct AndersonParams {
    int nq = 11;
    std::vector<double> ks{0.3, 0.7};
    double T = 2.0;
    std::int64_t t = 4000, probe_t = 1000;
    std::string out = "out-anderson";
};

int run_anderson(const AndersonParams& p) {
    reference::QuantumParams base;
    base.T = p.T;
    base.N = std::size_t(1) << p.nq;
    base.potential = reference::PotentialKind::arctan_band(0.0);
    base.drive = reference::DriveKind::incommensurate_pair();
    const std::size_t n0 = base.N / 2;

    const fs::path dir(p.out);
    json summary = json::object();
    std::vector<std::string> outputs;
    for (double k : p.ks) {
        reference::QuantumParams qp = base;
        qp.k = k;
        auto psi = reference::Wavefunction::basis_state(qp.N, n0);
        io::CsvWriter csv({"t", "var_n"});
        // trailing-10%-window means around the probe times smooth out the
        // breathing of a localized packet
        double early_sum = 0.0, late_sum = 0.0;
        std::int64_t early_cnt = 0, late_cnt = 0;
        for (std::int64_t t = 1; t <= p.t; ++t) {
            reference::evolve_step(psi, qp, t - 1);
            const double var = obs::momentum_moments(distribution_of(psi, n0)).variance;
            if (t % 10 == 0) csv.row({static_cast<double>(t), var});
            if (t > p.probe_t - p.probe_t / 10 && t <= p.probe_t) {
                early_sum += var;
                ++early_cnt;
            }
            if (t > p.t - p.t / 10) {
                late_sum += var;
                ++late_cnt;
            }
        }
        if (series_norm_drift(psi) > kNormTolerance)
            return fail_numerical("norm drift exceeds tolerance");
        const std::string name = "var_k" + io::format_double(k) + ".csv";
        csv.save(dir / name);
        outputs.push_back(name);
        const double ratio = (late_sum / late_cnt) / (early_sum / early_cnt);
        summary[io::format_double(k)] = {{"var_early", early_sum / early_cnt},
                                         {"var_late", late_sum / late_cnt},
                                         {"growth_ratio", ratio}};
        std::cout << "k = " << k << ": growth ratio = " << ratio << "\n";
    }
    io::write_json_atomic(dir / "summary.json", summary);
    outputs.push_back("summary.json");
    Manifest m{"anderson",
               {{"nq", p.nq}, {"ks", p.ks}, {"T", p.T}, {"t", p.t}, {"probe_t", p.probe_t}},
               outputs};
    m.save(dir);
    return kExitOk;
}

struct Evolve2DParams {
    int nq = 4;
    double k = 1.1, T = 0.83, g = 1.0;
    std::int64_t t = 3;
    std::string out = "out-evolve-2d";
};

int run_evolve_2d(const Evolve2DParams& p) {
    const std::size_t N = std::size_t(1) << p.nq;
    reference::QuantumParams qp;
    qp.k = p.k;
    qp.T = p.T;
    qp.N = N;
    qp.potential = reference::PotentialKind::dsum(2);
    auto psi = reference::Wavefunction2D::product(reference::Wavefunction::basis_state(N, N / 2),
                                                  reference::Wavefunction::basis_state(N, N / 2),
                                                  p.g);
    reference::evolve_2d(psi, qp, p.t);
    if (std::abs(psi.norm() - 1.0) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");

    const fs::path dir(p.out);
    io::write_wavefunction(dir / "final_psi2d.bin", psi.amps,
                           {{"N", N}, {"k", p.k}, {"T", p.T}, {"g", p.g}, {"t", p.t}});
    Manifest m{"evolve-2d",
               {{"nq", p.nq}, {"k", p.k}, {"T", p.T}, {"g", p.g}, {"t", p.t}},
               {"final_psi2d.bin", "final_psi2d.bin.json"}};
    m.save(dir);
    return kExitOk;
}

// --- circuit commands ---------------------------------------------------------

gs::AlgorithmConfig make_circuit_config(int nq, int p, double k, double T,
                                        const std::string& mode, int degree) {
    gs::AlgorithmConfig cfg;
    cfg.n_q = nq;
    cfg.p = p > 0 ? p : 2 * nq;
    cfg.k = k;
    cfg.T = T;
    if (mode == "polynomial") {
        cfg.kick_mode = gs::KickMode::PolynomialRegister;
        cfg.poly_degree = degree;
    } else if (mode != "cosine") {
        throw CLI::ValidationError("--mode", "unknown kick mode: " + mode);
    }
    if (!cfg.layout().precision_in_recommended_range())
        std::cerr << "warning: p = " << cfg.p << " outside the recommended range [n_q, 2 n_q]\n";
    return cfg;
}

struct CircuitEvolveParams {
    int nq = 8, p = 0;
    double k = 5.0, T = 0.5;
    std::int64_t t = 10;
    std::string mode = "cosine";
    int degree = 18;
    std::string rep = "ca"; // ca | dense
    std::string out = "out-circuit-evolve";
};

int run_circuit_evolve(const CircuitEvolveParams& pr) {
    const auto cfg = make_circuit_config(pr.nq, pr.p, pr.k, pr.T, pr.mode, pr.degree);
    const auto rep = pr.rep == "dense" ? circuit::Representation::Dense
                                       : circuit::Representation::CorrelatedAncilla;
    auto state = gs::prepare_initial(cfg, rep, cfg.N() / 2);
    for (std::int64_t t = 0; t < pr.t; ++t) gs::kick_cycle(state, cfg, t);
    if (std::abs(state.norm() - 1.0) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");
    if (!state.ancillas_zero()) return fail_numerical("ancilla registers not erased");

    const fs::path dir(pr.out);
    io::CsvWriter csv({"n", "prob"});
    const auto probs = state.momentum_probabilities();
    for (std::size_t n = 0; n < probs.size(); ++n) csv.row({static_cast<double>(n), probs[n]});
    csv.save(dir / "momentum_probs.csv");
    io::write_json_atomic(dir / "ledger.json", io::ledger_to_json(state.ledger()));
    Manifest m{"circuit-evolve",
               {{"n_q", cfg.n_q},
                {"p", cfg.p},
                {"k", cfg.k},
                {"T", cfg.T},
                {"kick_mode", pr.mode},
                {"degree", pr.degree},
                {"t", pr.t},
                {"rep", pr.rep},
                {"qubit_budget", cfg.layout().total_qubit_budget()}},
               {"momentum_probs.csv", "ledger.json"}};
    m.save(dir);
    return kExitOk;
}

struct CircuitCompareParams {
    int nq = 8, p = 0;
    double k = 5.0, T = 0.5;
    std::int64_t t = 10;
    std::string out = "out-circuit-compare";
};

int run_circuit_compare(const CircuitCompareParams& pr) {
    const auto cfg = make_circuit_config(pr.nq, pr.p, pr.k, pr.T, "cosine", 0);
    auto state = gs::prepare_initial(cfg, circuit::Representation::CorrelatedAncilla, cfg.N() / 2);
    reference::QuantumParams qp;
    qp.k = cfg.k;
    qp.T = cfg.T;
    qp.N = cfg.N();
    auto psi = reference::Wavefunction::basis_state(qp.N, qp.N / 2);

    io::CsvWriter csv({"t", "fidelity"});
    double final_fidelity = 1.0;
    for (std::int64_t t = 1; t <= pr.t; ++t) {
        gs::kick_cycle(state, cfg, t - 1);
        reference::evolve_step(psi, qp);
        std::complex<double> overlap = 0.0;
        const auto amps = state.primary_amplitudes();
        for (std::size_t n = 0; n < amps.size(); ++n) overlap += std::conj(psi.amps[n]) * amps[n];
        final_fidelity = std::abs(overlap);
        csv.row({static_cast<double>(t), final_fidelity});
    }
    if (std::abs(state.norm() - 1.0) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");

    const fs::path dir(pr.out);
    csv.save(dir / "fidelity.csv");
    io::write_json_atomic(dir / "ledger.json", io::ledger_to_json(state.ledger()));
    Manifest m{"circuit-compare",
               {{"n_q", cfg.n_q}, {"p", cfg.p}, {"k", cfg.k}, {"T", cfg.T}, {"t", pr.t}},
               {"fidelity.csv", "ledger.json"}};
    m.save(dir);
    std::cout << "fidelity after " << pr.t << " kicks: " << final_fidelity << "\n";
    return kExitOk;
}

struct GateCountParams {
    int nq_min = 4, nq_max = 12;
    std::string out = "out-gate-count";
};

int run_gate_count(const GateCountParams& pr) {
    const fs::path dir(pr.out);
    std::vector<double> ns, totals;
    std::vector<std::string> outputs;
    json per_nq = json::object();
    for (int nq = pr.nq_min; nq <= pr.nq_max; ++nq) {
        gs::AlgorithmConfig cfg;
        cfg.n_q = nq;
        cfg.p = 2 * nq;
        cfg.k = 5.0;
        cfg.T = 0.5;
        auto state = gs::prepare_initial(cfg, circuit::Representation::CorrelatedAncilla, cfg.N() / 2);
        gs::kick_cycle(state, cfg);
        const auto j = io::ledger_to_json(state.ledger());
        per_nq[std::to_string(nq)] = j;
        const double total =
            static_cast<double>(state.ledger().total().elementary_estimate -
                                state.ledger().steps().at("step_I").elementary_estimate);
        ns.push_back(nq);
        totals.push_back(total);
    }
    io::write_json_atomic(dir / "ledgers.json", per_nq);
    outputs.push_back("ledgers.json");

    // least-squares fit total ~ c3 n^3 + c2 n^2 + c1 n
    const std::size_t m = ns.size();
    double A[3][4] = {};
    for (std::size_t i = 0; i < m; ++i) {
        const double n1 = ns[i], n2 = n1 * n1, n3 = n2 * n1;
        const double basis[3] = {n3, n2, n1};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) A[r][c] += basis[r] * basis[c];
            A[r][3] += basis[r] * totals[i];
        }
    }
    for (int col = 0; col < 3; ++col) { // Gaussian elimination
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(A[col][c], A[piv][c]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = A[r][col] / A[col][col];
            for (int c = 0; c < 4; ++c) A[r][c] -= f * A[col][c];
        }
    }
    const double c3 = A[0][3] / A[0][0], c2 = A[1][3] / A[1][1], c1 = A[2][3] / A[2][2];
    double max_resid = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double n1 = ns[i];
        const double fit = c3 * n1 * n1 * n1 + c2 * n1 * n1 + c1 * n1;
        max_resid = std::max(max_resid, std::abs(fit - totals[i]) / totals[i]);
    }
    io::write_json_atomic(dir / "cubic_fit.json",
                          {{"c3", c3}, {"c2", c2}, {"c1", c1}, {"max_relative_residual", max_resid}});
    outputs.push_back("cubic_fit.json");
    Manifest man{"gate-count", {{"nq_min", pr.nq_min}, {"nq_max", pr.nq_max}, {"p", "2nq"}}, outputs};
    man.save(dir);
    std::cout << "cubic fit: " << c3 << " n^3 + " << c2 << " n^2 + " << c1
              << " n, max residual " << max_resid * 100.0 << "%\n";
    return kExitOk;
}

struct MeasureParams {
    int nq = 8, p = 0;
    double k = 5.0, T = 0.5;
    std::int64_t t = 10, shots = 10000;
    std::uint64_t seed = 1;
    std::string out = "out-measure";
};

int run_measure(const MeasureParams& pr) {
    const auto cfg = make_circuit_config(pr.nq, pr.p, pr.k, pr.T, "cosine", 0);
    auto state = gs::prepare_initial(cfg, circuit::Representation::CorrelatedAncilla, cfg.N() / 2);
    for (std::int64_t t = 0; t < pr.t; ++t) gs::kick_cycle(state, cfg, t);
    if (std::abs(state.norm() - 1.0) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");
    const auto hist = gs::measure_momentum(state, pr.shots, pr.seed);

    const fs::path dir(pr.out);
    io::CsvWriter csv({"n", "count"});
    for (std::size_t n = 0; n < hist.counts.size(); ++n)
        csv.row({static_cast<double>(n), static_cast<double>(hist.counts[n])});
    csv.save(dir / "histogram.csv");
    Manifest m{"measure",
               {{"n_q", cfg.n_q},
                {"p", cfg.p},
                {"k", cfg.k},
                {"T", cfg.T},
                {"t", pr.t},
                {"shots", pr.shots},
                {"seed", pr.seed}},
               {"histogram.csv"}};
    m.save(dir);
    return kExitOk;
}

struct HarmonicsParams {
    int nq = 8;
    double k = 10.0, T = 0.5;
    std::int64_t t = 1000;
    std::int64_t m = 8;
    std::string out = "out-harmonics";
};

int run_harmonics(const HarmonicsParams& pr) {
    reference::QuantumParams qp;
    qp.k = pr.k;
    qp.T = pr.T;
    qp.N = std::size_t(1) << pr.nq;
    const std::size_t n0 = qp.N / 2;
    auto psi = reference::Wavefunction::basis_state(qp.N, n0);
    for (std::int64_t t = 0; t < pr.t; ++t) reference::evolve_step(psi, qp, t);
    if (series_norm_drift(psi) > kNormTolerance)
        return fail_numerical("norm drift exceeds tolerance");

    const auto comps = obs::harmonics(distribution_of(psi, n0), static_cast<std::size_t>(pr.m));
    const fs::path dir(pr.out);
    io::CsvWriter csv({"index", "re", "im", "magnitude"});
    for (const auto& h : comps)
        csv.row({static_cast<double>(h.index), h.value.real(), h.value.imag(), h.magnitude});
    csv.save(dir / "harmonics.csv");
    Manifest m{"harmonics",
               {{"nq", pr.nq}, {"k", pr.k}, {"T", pr.T}, {"t", pr.t}, {"m", pr.m}},
               {"harmonics.csv"}};
    m.save(dir);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kicked-rotator laboratory"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file; explicit flags override it")
        ->check(CLI::ExistingFile);

    ClassicalTrajParams traj;
    auto* c_traj = app.add_subcommand("classical-traj", "iterate one standard-map orbit");
    c_traj->add_option("--k", traj.k);
    c_traj->add_option("--T", traj.T);
    c_traj->add_option("--n0", traj.n0);
    c_traj->add_option("--theta0", traj.theta0);
    c_traj->add_option("--t", traj.t);
    c_traj->add_option("--out", traj.out);

    ClassicalDiffusionParams diff;
    auto* c_diff = app.add_subcommand("classical-diffusion", "ensemble diffusion of the standard map");
    c_diff->add_option("--K", diff.K);
    c_diff->add_option("--T", diff.T);
    c_diff->add_option("--orbits", diff.orbits);
    c_diff->add_option("--t", diff.t);
    c_diff->add_option("--out", diff.out);

    LyapunovParams lyap;
    auto* c_lyap = app.add_subcommand("lyapunov", "largest Lyapunov exponent by tangent iteration");
    c_lyap->add_option("--K", lyap.K);
    c_lyap->add_option("--T", lyap.T);
    c_lyap->add_option("--t", lyap.t);
    c_lyap->add_option("--seed", lyap.seed);
    c_lyap->add_option("--out", lyap.out);

    LatticeMapParams lat;
    auto* c_lat = app.add_subcommand("lattice-map", "density transport on the symplectic lattice map");
    c_lat->add_option("--N", lat.N);
    c_lat->add_option("--K", lat.K);
    c_lat->add_option("--t", lat.t);
    c_lat->add_option("--init", lat.init)->check(CLI::IsMember({"line", "delta"}));
    c_lat->add_option("--X", lat.X);
    c_lat->add_option("--Y", lat.Y);
    c_lat->add_option("--out", lat.out);

    QuantumEvolveParams qev;
    auto* c_qev = app.add_subcommand("quantum-evolve", "split-operator evolution of the kicked rotator");
    c_qev->add_option("--nq", qev.nq);
    c_qev->add_option("--k", qev.k);
    c_qev->add_option("--T", qev.T);
    c_qev->add_option("--t", qev.t);
    c_qev->add_option("--record-every", qev.record_every);
    c_qev->add_option("--potential", qev.potential)
        ->check(CLI::IsMember({"cosine", "arctan", "polynomial"}));
    c_qev->add_option("--E", qev.E);
    c_qev->add_option("--poly-degree", qev.poly_degree);
    c_qev->add_option("--n-init", qev.n_init);
    c_qev->add_option("--out", qev.out);

    LocalizationFitParams loc;
    auto* c_loc = app.add_subcommand("localization-fit", "evolve, time-average, fit the envelope");
    c_loc->add_option("--nq", loc.nq);
    c_loc->add_option("--k", loc.k);
    c_loc->add_option("--T", loc.T);
    c_loc->add_option("--t", loc.t);
    c_loc->add_option("--record-every", loc.record_every);
    c_loc->add_option("--out", loc.out);

    AndersonParams and_p;
    auto* c_and = app.add_subcommand("anderson", "quasiperiodic drive sweep across the transition");
    c_and->add_option("--nq", and_p.nq);
    c_and->add_option("--ks", and_p.ks)->delimiter(',');
    c_and->add_option("--T", and_p.T);
    c_and->add_option("--t", and_p.t);
    c_and->add_option("--probe-t", and_p.probe_t);
    c_and->add_option("--out", and_p.out);

    Evolve2DParams e2d;
    auto* c_e2d = app.add_subcommand("evolve-2d", "two interacting kicked rotators");
    c_e2d->add_option("--nq", e2d.nq);
    c_e2d->add_option("--k", e2d.k);
    c_e2d->add_option("--T", e2d.T);
    c_e2d->add_option("--g", e2d.g);
    c_e2d->add_option("--t", e2d.t);
    c_e2d->add_option("--out", e2d.out);

    CircuitEvolveParams cev;
    auto* c_cev = app.add_subcommand("circuit-evolve", "gate-level kicked-rotator evolution");
    c_cev->add_option("--nq", cev.nq);
    c_cev->add_option("--p", cev.p);
    c_cev->add_option("--k", cev.k);
    c_cev->add_option("--T", cev.T);
    c_cev->add_option("--t", cev.t);
    c_cev->add_option("--mode", cev.mode)->check(CLI::IsMember({"cosine", "polynomial"}));
    c_cev->add_option("--degree", cev.degree);
    c_cev->add_option("--rep", cev.rep)->check(CLI::IsMember({"ca", "dense"}));
    c_cev->add_option("--out", cev.out);

    CircuitCompareParams ccm;
    auto* c_ccm = app.add_subcommand("circuit-compare", "fidelity of the circuit against the reference");
    c_ccm->add_option("--nq", ccm.nq);
    c_ccm->add_option("--p", ccm.p);
    c_ccm->add_option("--k", ccm.k);
    c_ccm->add_option("--T", ccm.T);
    c_ccm->add_option("--t", ccm.t);
    c_ccm->add_option("--out", ccm.out);

    GateCountParams gc;
    auto* c_gc = app.add_subcommand("gate-count", "per-kick gate totals and the cubic fit");
    c_gc->add_option("--nq-min", gc.nq_min);
    c_gc->add_option("--nq-max", gc.nq_max);
    c_gc->add_option("--out", gc.out);

    MeasureParams mea;
    auto* c_mea = app.add_subcommand("measure", "shot sampling of the circuit's momentum distribution");
    c_mea->add_option("--nq", mea.nq);
    c_mea->add_option("--p", mea.p);
    c_mea->add_option("--k", mea.k);
    c_mea->add_option("--T", mea.T);
    c_mea->add_option("--t", mea.t);
    c_mea->add_option("--shots", mea.shots);
    c_mea->add_option("--seed", mea.seed);
    c_mea->add_option("--out", mea.out);

    HarmonicsParams har;
    auto* c_har = app.add_subcommand("harmonics", "largest Fourier components of P(n)");
    c_har->add_option("--nq", har.nq);
    c_har->add_option("--k", har.k);
    c_har->add_option("--T", har.T);
    c_har->add_option("--t", har.t);
    c_har->add_option("--m", har.m);
    c_har->add_option("--out", har.out);

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            in >> g_file_config;
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (c_traj->parsed()) {
            fill_from_config(*c_traj, "--k", "k", traj.k);
            fill_from_config(*c_traj, "--T", "T", traj.T);
            fill_from_config(*c_traj, "--n0", "n0", traj.n0);
            fill_from_config(*c_traj, "--theta0", "theta0", traj.theta0);
            fill_from_config(*c_traj, "--t", "t", traj.t);
            fill_from_config(*c_traj, "--out", "out", traj.out);
            return run_classical_traj(traj);
        }
        if (c_diff->parsed()) {
            fill_from_config(*c_diff, "--K", "K", diff.K);
            fill_from_config(*c_diff, "--T", "T", diff.T);
            fill_from_config(*c_diff, "--orbits", "orbits", diff.orbits);
            fill_from_config(*c_diff, "--t", "t", diff.t);
            fill_from_config(*c_diff, "--out", "out", diff.out);
            return run_classical_diffusion(diff);
        }
        if (c_lyap->parsed()) {
            fill_from_config(*c_lyap, "--K", "K", lyap.K);
            fill_from_config(*c_lyap, "--T", "T", lyap.T);
            fill_from_config(*c_lyap, "--t", "t", lyap.t);
            fill_from_config(*c_lyap, "--seed", "seed", lyap.seed);
            fill_from_config(*c_lyap, "--out", "out", lyap.out);
            return run_lyapunov(lyap);
        }
        if (c_lat->parsed()) {
            fill_from_config(*c_lat, "--N", "N", lat.N);
            fill_from_config(*c_lat, "--K", "K", lat.K);
            fill_from_config(*c_lat, "--t", "t", lat.t);
            fill_from_config(*c_lat, "--init", "init", lat.init);
            fill_from_config(*c_lat, "--X", "X", lat.X);
            fill_from_config(*c_lat, "--Y", "Y", lat.Y);
            fill_from_config(*c_lat, "--out", "out", lat.out);
            return run_lattice_map(lat);
        }
        if (c_qev->parsed()) {
            fill_from_config(*c_qev, "--nq", "nq", qev.nq);
            fill_from_config(*c_qev, "--k", "k", qev.k);
            fill_from_config(*c_qev, "--T", "T", qev.T);
            fill_from_config(*c_qev, "--t", "t", qev.t);
            fill_from_config(*c_qev, "--record-every", "record_every", qev.record_every);
            fill_from_config(*c_qev, "--potential", "potential", qev.potential);
            fill_from_config(*c_qev, "--E", "E", qev.E);
            fill_from_config(*c_qev, "--poly-degree", "poly_degree", qev.poly_degree);
            fill_from_config(*c_qev, "--n-init", "n_init", qev.n_init);
            fill_from_config(*c_qev, "--out", "out", qev.out);
            return run_quantum_evolve(qev);
        }
        if (c_loc->parsed()) {
            fill_from_config(*c_loc, "--nq", "nq", loc.nq);
            fill_from_config(*c_loc, "--k", "k", loc.k);
            fill_from_config(*c_loc, "--T", "T", loc.T);
            fill_from_config(*c_loc, "--t", "t", loc.t);
            fill_from_config(*c_loc, "--record-every", "record_every", loc.record_every);
            fill_from_config(*c_loc, "--out", "out", loc.out);
            return run_localization_fit(loc);
        }
        if (c_and->parsed()) {
            fill_from_config(*c_and, "--nq", "nq", and_p.nq);
            fill_from_config(*c_and, "--ks", "ks", and_p.ks);
            fill_from_config(*c_and, "--T", "T", and_p.T);
            fill_from_config(*c_and, "--t", "t", and_p.t);
            fill_from_config(*c_and, "--probe-t", "probe_t", and_p.probe_t);
            fill_from_config(*c_and, "--out", "out", and_p.out);
            return run_anderson(and_p);
        }
        if (c_e2d->parsed()) {
            fill_from_config(*c_e2d, "--nq", "nq", e2d.nq);
            fill_from_config(*c_e2d, "--k", "k", e2d.k);
            fill_from_config(*c_e2d, "--T", "T", e2d.T);
            fill_from_config(*c_e2d, "--g", "g", e2d.g);
            fill_from_config(*c_e2d, "--t", "t", e2d.t);
            fill_from_config(*c_e2d, "--out", "out", e2d.out);
            return run_evolve_2d(e2d);
        }
        if (c_cev->parsed()) {
            fill_from_config(*c_cev, "--nq", "nq", cev.nq);
            fill_from_config(*c_cev, "--p", "p", cev.p);
            fill_from_config(*c_cev, "--k", "k", cev.k);
            fill_from_config(*c_cev, "--T", "T", cev.T);
            fill_from_config(*c_cev, "--t", "t", cev.t);
            fill_from_config(*c_cev, "--mode", "kick_mode", cev.mode);
            fill_from_config(*c_cev, "--degree", "degree", cev.degree);
            fill_from_config(*c_cev, "--rep", "rep", cev.rep);
            fill_from_config(*c_cev, "--out", "out", cev.out);
            return run_circuit_evolve(cev);
        }
        if (c_ccm->parsed()) {
            fill_from_config(*c_ccm, "--nq", "nq", ccm.nq);
            fill_from_config(*c_ccm, "--p", "p", ccm.p);
            fill_from_config(*c_ccm, "--k", "k", ccm.k);
            fill_from_config(*c_ccm, "--T", "T", ccm.T);
            fill_from_config(*c_ccm, "--t", "t", ccm.t);
            fill_from_config(*c_ccm, "--out", "out", ccm.out);
            return run_circuit_compare(ccm);
        }
        if (c_gc->parsed()) {
            fill_from_config(*c_gc, "--nq-min", "nq_min", gc.nq_min);
            fill_from_config(*c_gc, "--nq-max", "nq_max", gc.nq_max);
            fill_from_config(*c_gc, "--out", "out", gc.out);
            return run_gate_count(gc);
        }
        if (c_mea->parsed()) {
            fill_from_config(*c_mea, "--nq", "nq", mea.nq);
            fill_from_config(*c_mea, "--p", "p", mea.p);
            fill_from_config(*c_mea, "--k", "k", mea.k);
            fill_from_config(*c_mea, "--T", "T", mea.T);
            fill_from_config(*c_mea, "--t", "t", mea.t);
            fill_from_config(*c_mea, "--shots", "shots", mea.shots);
            fill_from_config(*c_mea, "--seed", "seed", mea.seed);
            fill_from_config(*c_mea, "--out", "out", mea.out);
            return run_measure(mea);
        }
        if (c_har->parsed()) {
            fill_from_config(*c_har, "--nq", "nq", har.nq);
            fill_from_config(*c_har, "--k", "k", har.k);
            fill_from_config(*c_har, "--T", "T", har.T);
            fill_from_config(*c_har, "--t", "t", har.t);
            fill_from_config(*c_har, "--m", "m", har.m);
            fill_from_config(*c_har, "--out", "out", har.out);
            return run_harmonics(har);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitConfig;
}
