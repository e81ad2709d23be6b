#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kickrot/gs_circuit.hpp"
#include "kickrot/reference.hpp"
#include "oracles.hpp"

#include <cmath>
#include <complex>

using namespace kickrot;
using namespace kickrot::gs;
using circuit::FixedPoint;
using circuit::RegId;
using circuit::Representation;

namespace {

AlgorithmConfig config(int n_q, int p, double k, double T) {
    AlgorithmConfig c;
    c.n_q = n_q;
    c.p = p;
    c.k = k;
    c.T = T;
    return c;
}

double fidelity(const std::vector<std::complex<double>>& a,
                const std::vector<std::complex<double>>& b) {
    std::complex<double> o = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) o += std::conj(a[i]) * b[i];
    return std::abs(o);
}

} // namespace

TEST_CASE("step I: preparation cost and fidelity") {
    auto cfg = config(4, 8, 5.0, 0.5);

    auto mid = prepare_initial(cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
    CHECK(std::abs(mid.primary_amplitude(cfg.N() / 2) - 1.0) < 1e-15);
    CHECK(mid.ledger().steps().at("step_I").one_qubit == 1); // one rotation for |N/2>

    auto ground = prepare_initial(cfg, Representation::CorrelatedAncilla, 0);
    CHECK(ground.ledger().total().one_qubit == 0);

    auto cfg3 = config(3, 6, 1.0, 0.5);
    const auto amps = oracle::random_state(8, 9);
    auto s = prepare_initial(cfg3, Representation::CorrelatedAncilla, amps);
    const auto out = s.primary_amplitudes();
    for (int i = 0; i < 8; ++i) CHECK(std::abs(out[i] - amps[i]) < 1e-14);

    std::vector<std::complex<double>> bad(8, {0.5, 0.0});
    CHECK_THROWS_AS(prepare_initial(cfg3, Representation::CorrelatedAncilla, bad),
                    std::invalid_argument);

    // p below n_q and polynomial mode without a degree are config errors
    CHECK_THROWS_AS(config(6, 4, 1.0, 0.5).validate(), std::invalid_argument);
    auto poly_bad = config(4, 8, 1.0, 0.5);
    poly_bad.kick_mode = KickMode::PolynomialRegister;
    CHECK_THROWS_AS(poly_bad.validate(), std::invalid_argument);
}

TEST_CASE("step II applies exactly exp(-i T n^2 / 2)") {
    auto cfg = config(8, 16, 5.0, 0.5);
    const std::size_t N = cfg.N();
    // uniform input: the output amplitudes read off the applied diagonal
    std::vector<std::complex<double>> uni(N, {1.0 / std::sqrt(double(N)), 0.0});
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, uni);
    step_free_rotation(s, cfg);
    const auto out = s.primary_amplitudes();
    for (std::size_t n = 0; n < N; ++n) {
        const double nn = static_cast<double>(n);
        const auto expect = std::polar(1.0 / std::sqrt(double(N)), -cfg.T * nn * nn / 2.0);
        CHECK(std::abs(out[n] - expect) < 1e-12);
    }
    // n = 3, T = 0.5: phase -9/4
    CHECK(std::arg(out[3] / std::abs(out[3])) ==
          doctest::Approx(std::arg(std::polar(1.0, -2.25))).epsilon(1e-12));
    // gate count: n_q diagonal + n_q(n_q-1)/2 pair gates
    const auto c = s.ledger().steps().at("step_II");
    CHECK(c.one_qubit == cfg.n_q);
    CHECK(c.two_qubit == cfg.n_q * (cfg.n_q - 1) / 2);
}

TEST_CASE("rotation table entries are within 2^-p of the true values") {
    const auto t1 = precompute_rotation_table(2, 12);
    CHECK(t1.cos_j[0].to_real() == -1.0); // j=1: cos(pi)
    CHECK(t1.sin_j[0].to_real() == 0.0);
    CHECK(t1.cos_j[1].to_real() == 0.0);  // j=2: cos(pi/2)
    CHECK(t1.sin_j[1].to_real() == 1.0);

    const int p = 20;
    const auto t = precompute_rotation_table(5, p);
    CHECK(std::abs(t.cos_j[4].to_real() - std::cos(oracle::PI / 16.0)) < std::ldexp(1.0, -p));
    CHECK(std::abs(t.sin_j[4].to_real() - std::sin(oracle::PI / 16.0)) < std::ldexp(1.0, -p));
}

TEST_CASE("step IV: cosine register error bounded by (n_q + 2) 2^-p, exhaustive") {
    auto cfg = config(8, 16, 5.0, 0.5);
    const std::size_t N = cfg.N();
    // angle-representation basis states enumerate theta_i directly
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, 0);
    std::vector<std::complex<double>> uni(N, {1.0 / std::sqrt(double(N)), 0.0});
    s.set_primary_amplitudes(uni);
    step_build_cosine(s, cfg);

    const double bound = (cfg.n_q + 2) * std::ldexp(1.0, -cfg.p);
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        const double theta = 2.0 * oracle::PI * double(i) / double(N);
        const double reg = std::ldexp(double(s.ancilla_mantissa(RegId::A, i)), -cfg.p);
        const double sin_reg = std::ldexp(double(s.ancilla_mantissa(RegId::B, i)), -cfg.p);
        worst = std::max(worst, std::abs(reg - std::cos(theta)));
        CHECK(std::abs(reg - std::cos(theta)) <= bound);
        CHECK(std::abs(sin_reg - std::sin(theta)) <= bound);
    }
    INFO("worst cosine-register error ", worst, " vs bound ", bound);

    // theta_0 = 0 -> cos exactly +1; theta_{N/4} = pi/2 -> exactly 0
    CHECK(s.ancilla_mantissa(RegId::A, 0) == (1 << cfg.p));
    CHECK(s.ancilla_mantissa(RegId::A, N / 4) == 0);
    CHECK(s.ancilla_mantissa(RegId::B, N / 4) == (1 << cfg.p));

    s.ledger().set_step("step_IV_uncompute");
    s.uncompute_ancillas();
    CHECK(s.ancillas_zero());
}

TEST_CASE("step V applies exp(-ik cos theta) within the phase budget, exhaustive") {
    auto cfg = config(8, 16, 5.0, 0.5);
    const std::size_t N = cfg.N();
    std::vector<std::complex<double>> uni(N, {1.0 / std::sqrt(double(N)), 0.0});
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, 0);
    s.set_primary_amplitudes(uni);

    step_build_cosine(s, cfg);
    step_kick(s, cfg);
    CHECK(s.ancillas_zero());

    const auto out = s.primary_amplitudes();
    const double budget = std::abs(cfg.k) * (cfg.n_q + 2) * std::ldexp(1.0, -cfg.p);
    for (std::size_t i = 0; i < N; ++i) {
        const double theta = 2.0 * oracle::PI * double(i) / double(N);
        const auto ratio = out[i] / uni[i];
        // phase distance between applied and ideal kick
        const double err = std::abs(std::arg(ratio * std::polar(1.0, cfg.k * std::cos(theta))));
        CHECK(err <= budget);
    }

    // ledger: step V = p fractional-bit gates exactly, sign bits separate
    CHECK(s.ledger().steps().at("step_V").one_qubit == cfg.p);
    CHECK(s.ledger().steps().at("step_V_sign").one_qubit == 2);
}

TEST_CASE("step V trivial cases") {
    // k = 0: identity
    auto cfg = config(4, 8, 0.0, 0.5);
    const auto amps = oracle::random_state(16, 3);
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, amps);
    step_build_cosine(s, cfg);
    step_kick(s, cfg);
    const auto out = s.primary_amplitudes();
    for (int i = 0; i < 16; ++i) CHECK(std::abs(out[i] - amps[i]) < 1e-14);

    // register holding exactly 1 with k = 3: phase e^{-3i} on theta_0
    auto cfg3 = config(4, 8, 3.0, 0.5);
    auto s3 = prepare_initial(cfg3, Representation::CorrelatedAncilla, amps);
    step_build_cosine(s3, cfg3);
    step_kick(s3, cfg3);
    const auto out3 = s3.primary_amplitudes();
    CHECK(std::abs(out3[0] - amps[0] * std::polar(1.0, -3.0)) < 1e-14);
}

TEST_CASE("kick cycle with k = 0 keeps momentum probabilities bitwise") {
    auto cfg = config(5, 10, 0.0, 0.7);
    const auto amps = oracle::random_state(32, 8);
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, amps);
    const auto before = s.momentum_probabilities();
    kick_cycle(s, cfg);
    const auto after = s.momentum_probabilities();
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(std::abs(after[i] - before[i]) < 1e-13);
    CHECK(s.ancillas_zero());
}

TEST_CASE("ten kicks track the split-operator reference") {
    auto cfg = config(8, 16, 5.0, 0.5);
    const std::size_t N = cfg.N();

    auto state = prepare_initial(cfg, Representation::CorrelatedAncilla, N / 2);
    reference::QuantumParams rp;
    rp.k = cfg.k;
    rp.T = cfg.T;
    rp.N = N;
    auto psi = reference::Wavefunction::basis_state(N, N / 2);

    for (int t = 1; t <= 10; ++t) {
        kick_cycle(state, cfg, t - 1);
        reference::evolve_step(psi, rp);
        CHECK(fidelity(psi.amps, state.primary_amplitudes()) >= 0.9999);
    }
    CHECK(std::abs(state.norm() - 1.0) < 1e-10);
    CHECK(state.ancillas_zero());

    // ledger sanity after the run
    const auto& steps = state.ledger().steps();
    CHECK(steps.at("step_III").one_qubit == steps.at("step_VI").one_qubit);
    CHECK(steps.at("step_III").two_qubit == steps.at("step_VI").two_qubit);
    CHECK(steps.at("step_V").one_qubit == 10 * cfg.p);
    CHECK(steps.at("step_IV").arithmetic_blocks == 10 * cfg.n_q);
    CHECK(steps.at("step_IV_uncompute").arithmetic_blocks == 10 * cfg.n_q);
}

TEST_CASE("per-kick fidelity obeys the phase-error budget bound") {
    for (int n_q : {4, 6, 8, 10}) {
        auto cfg = config(n_q, 2 * n_q, 5.0, 0.5);
        auto state = prepare_initial(cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
        reference::QuantumParams rp;
        rp.k = cfg.k;
        rp.T = cfg.T;
        rp.N = cfg.N();
        auto psi = reference::Wavefunction::basis_state(rp.N, rp.N / 2);
        kick_cycle(state, cfg);
        reference::evolve_step(psi, rp);
        const double budget = cfg.k * (cfg.n_q + 2) * std::ldexp(1.0, -cfg.p);
        CHECK(fidelity(psi.amps, state.primary_amplitudes()) >= 1.0 - budget * budget);
    }
}

TEST_CASE("dense and correlated kick cycles agree at n_q=3, p=4") {
    auto cfg = config(3, 4, 2.0, 0.5);
    auto dense = prepare_initial(cfg, Representation::Dense, cfg.N() / 2);
    auto ca = prepare_initial(cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
    for (int t = 0; t < 3; ++t) {
        kick_cycle(dense, cfg);
        kick_cycle(ca, cfg);
    }
    const auto va = dense.primary_amplitudes();
    const auto vb = ca.primary_amplitudes();
    for (std::size_t i = 0; i < va.size(); ++i) CHECK(std::abs(va[i] - vb[i]) < 1e-10);
    CHECK(dense.ancillas_zero());
    CHECK(dense.ledger().total().elementary_estimate == ca.ledger().total().elementary_estimate);
}

TEST_CASE("chebyshev approximation of cos") {
    // a degree meeting 2^-16 exists at <= 20
    int degree_needed = -1;
    double prev = 1e9;
    for (int d = 2; d <= 20; ++d) {
        const auto fit = chebyshev_coeffs(d, 16);
        CHECK(fit.max_error <= prev + 1e-14); // non-increasing with degree
        prev = fit.max_error;
        if (degree_needed < 0 && fit.max_error <= std::ldexp(1.0, -16)) degree_needed = d;
    }
    REQUIRE(degree_needed > 0);
    CHECK(degree_needed <= 20);

    // evaluation at theta = pi sits within the reported error of -1
    const auto fit = chebyshev_coeffs(14, 16);
    double acc = 0.0, power = 1.0;
    const double x = 0.0; // x(theta=pi) = 0
    for (double c : fit.coeffs) {
        acc += c * power;
        power *= x;
    }
    CHECK(std::abs(acc - (-1.0)) <= fit.max_error + 1e-15);

    CHECK_THROWS_AS(chebyshev_coeffs(0, 16), std::invalid_argument);
}

TEST_CASE("polynomial kick mode matches the cosine-register mode") {
    auto cfg = config(8, 16, 5.0, 0.5);
    auto poly_cfg = cfg;
    poly_cfg.kick_mode = KickMode::PolynomialRegister;
    poly_cfg.poly_degree = 18;

    auto a = prepare_initial(cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
    auto b = prepare_initial(poly_cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
    for (int t = 0; t < 10; ++t) {
        kick_cycle(a, cfg);
        kick_cycle(b, poly_cfg);
    }
    CHECK(fidelity(a.primary_amplitudes(), b.primary_amplitudes()) >= 0.999);
    CHECK(b.ancillas_zero());
    // arithmetic blocks: degree per kick
    CHECK(b.ledger().steps().at("step_IV").arithmetic_blocks == 10 * poly_cfg.poly_degree);

    // k = 0 with a polynomial register is still the identity on probabilities
    auto zero_cfg = poly_cfg;
    zero_cfg.k = 0.0;
    const auto amps = oracle::random_state(zero_cfg.N(), 4);
    auto z = prepare_initial(zero_cfg, Representation::CorrelatedAncilla, amps);
    const auto before = z.momentum_probabilities();
    kick_cycle(z, zero_cfg);
    const auto after = z.momentum_probabilities();
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(after[i] - before[i]) < 1e-13);
}

TEST_CASE("gate totals stay polynomial: cubic dominance ratio") {
    auto total_for = [](int n_q) {
        auto cfg = config(n_q, 2 * n_q, 5.0, 0.5);
        auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, cfg.N() / 2);
        kick_cycle(s, cfg);
        return static_cast<double>(s.ledger().total().elementary_estimate) -
               static_cast<double>(s.ledger().steps().at("step_I").elementary_estimate);
    };
    for (int n_q : {4, 6, 8}) {
        const double r = total_for(2 * n_q) / total_for(n_q);
        CHECK(r >= 6.0);
        CHECK(r <= 10.0);
    }
}

TEST_CASE("measurement histograms") {
    auto cfg = config(4, 8, 5.0, 0.5);

    // deterministic basis state: every shot identical
    auto s = prepare_initial(cfg, Representation::CorrelatedAncilla, 5);
    const auto h = measure_momentum(s, 1000, 42);
    CHECK(h.counts[5] == 1000);
    std::int64_t total = 0;
    for (auto c : h.counts) total += c;
    CHECK(total == h.shots);

    // uniform state: chi-square against uniform at significance 1e-3
    auto cfg8 = config(8, 16, 5.0, 0.5);
    std::vector<std::complex<double>> uni(cfg8.N(), {1.0 / 16.0, 0.0});
    auto u = prepare_initial(cfg8, Representation::CorrelatedAncilla, uni);
    const std::int64_t shots = 100000;
    const auto hu = measure_momentum(u, shots, 7);
    const double expect = static_cast<double>(shots) / double(cfg8.N());
    double chi2 = 0.0;
    for (auto c : hu.counts) {
        const double d = static_cast<double>(c) - expect;
        chi2 += d * d / expect;
    }
    CHECK(chi2 < oracle::chi_square_quantile(double(cfg8.N() - 1), 3.0902)); // z for 1 - 1e-3

    // reproducible and partition-independent for a fixed seed
    const auto hv = measure_momentum(u, shots, 7);
    for (std::size_t i = 0; i < hu.counts.size(); ++i) CHECK(hu.counts[i] == hv.counts[i]);
}
