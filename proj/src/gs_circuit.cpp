#include "kickrot/gs_circuit.hpp"

#include "kickrot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kickrot::gs {

using circuit::CircuitState;
using circuit::FixedPoint;
using circuit::FourierDirection;
using circuit::GateLedger;
using circuit::RegId;

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;
} // namespace

circuit::RegisterLayout AlgorithmConfig::layout() const {
    circuit::RegisterLayout l;
    l.n_q = n_q;
    l.p = p;
    if (kick_mode == KickMode::PolynomialRegister) {
        l.reg_a_name = "acc";
        l.reg_b_name = "power";
    }
    return l;
}

void AlgorithmConfig::validate() const {
    layout().validate();
    if (p < n_q) throw std::invalid_argument("AlgorithmConfig: p must be >= n_q");
    if (kick_mode == KickMode::PolynomialRegister && poly_degree < 1)
        throw std::invalid_argument("AlgorithmConfig: polynomial degree must be >= 1");
}

RotationTable precompute_rotation_table(int n_q, int p) {
    RotationTable t;
    t.cos_j.reserve(n_q);
    t.sin_j.reserve(n_q);
    for (int j = 1; j <= n_q; ++j) {
        const double ang = kTwoPi / static_cast<double>(std::size_t(1) << j);
        t.cos_j.push_back(FixedPoint::from_real(std::cos(ang), p));
        t.sin_j.push_back(FixedPoint::from_real(std::sin(ang), p));
    }
    return t;
}

CircuitState prepare_initial(const AlgorithmConfig& cfg, circuit::Representation rep,
                             std::size_t basis_index) {
    cfg.validate();
    if (basis_index >= cfg.N()) throw std::invalid_argument("prepare_initial: index out of range");
    CircuitState state(cfg.layout(), rep);
    state.ledger().set_step("step_I");
    for (int b = 0; b < cfg.n_q; ++b)
        if ((basis_index >> b) & 1u) state.apply_x(RegId::Primary, b);
    return state;
}

CircuitState prepare_initial(const AlgorithmConfig& cfg, circuit::Representation rep,
                             const std::vector<std::complex<double>>& amplitudes) {
    cfg.validate();
    CircuitState state(cfg.layout(), rep);
    state.ledger().set_step("step_I");
    state.set_primary_amplitudes(amplitudes);
    return state;
}

void step_free_rotation(CircuitState& state, const AlgorithmConfig& cfg) {
    state.ledger().set_step("step_II");
    // Diagonal terms: bit_j^2 = bit_j contributes T 2^{2j-1}; off-diagonal
    // pairs appear twice in the double sum, giving T 2^{j1+j2}. Scaling by a
    // power of two is exact, so each gate angle is exact in double precision.
    for (int j = 0; j < cfg.n_q; ++j)
        state.apply_phase(RegId::Primary, j, -std::ldexp(cfg.T, 2 * j - 1));
    for (int j1 = 0; j1 < cfg.n_q; ++j1)
        for (int j2 = j1 + 1; j2 < cfg.n_q; ++j2)
            state.apply_controlled_phase(j1, j2, -std::ldexp(cfg.T, j1 + j2));
}

void step_to_angle(CircuitState& state) {
    state.ledger().set_step("step_III");
    state.apply_qft(FourierDirection::Forward);
}

void step_to_momentum(CircuitState& state) {
    state.ledger().set_step("step_VI");
    state.apply_qft(FourierDirection::Inverse);
}

void step_build_cosine(CircuitState& state, const AlgorithmConfig& cfg) {
    state.ledger().set_step("step_IV");
    state.begin_uncompute_scope();
    state.init_ancilla_constant(RegId::A, FixedPoint::from_real(1.0, cfg.p));
    const RotationTable table = precompute_rotation_table(cfg.n_q, cfg.p);
    // theta_i = sum_j beta_ij 2*pi/2^j with beta_ij the j-th angle bit; bit
    // n_q - j of the basis index carries weight 2*pi/2^j.
    for (int j = 1; j <= cfg.n_q; ++j)
        state.controlled_rotation(cfg.n_q - j, table.cos_j[j - 1], table.sin_j[j - 1]);
}

namespace {

// exp(-ik v) decomposed over the two's-complement bits of the register: the
// fractional bits cost the paper's p gates; the integer and sign bits are two
// extra gates tallied separately.
void apply_register_phases(CircuitState& state, double k_eff, int p) {
    state.ledger().set_step("step_V");
    for (int b = 0; b < p; ++b)
        state.apply_phase(RegId::A, b, -k_eff * std::ldexp(1.0, b - p));
    state.ledger().set_step("step_V_sign");
    state.apply_phase(RegId::A, p, -k_eff);
    state.apply_phase(RegId::A, p + 1, 2.0 * k_eff);
}

} // namespace

void step_kick(CircuitState& state, const AlgorithmConfig& cfg) {
    apply_register_phases(state, cfg.k, cfg.p);
    state.ledger().set_step("step_IV_uncompute");
    state.uncompute_ancillas();
}

ChebyshevFit chebyshev_coeffs(int degree, int p) {
    if (degree < 1) throw std::invalid_argument("chebyshev_coeffs: degree must be >= 1");
    if (degree > 64) throw std::invalid_argument("chebyshev_coeffs: degree too large");

    // Chebyshev series of f(x) = cos(pi (x + 1)) on [-1, 1] by Gauss-Chebyshev
    // quadrature with a fixed node count, truncated at the requested degree.
    constexpr int kNodes = 512;
    std::vector<double> cheb(degree + 1, 0.0);
    for (int j = 0; j <= degree; ++j) {
        double s = 0.0;
        for (int n = 0; n < kNodes; ++n) {
            const double th = kPi * (n + 0.5) / kNodes;
            s += std::cos(kPi * (std::cos(th) + 1.0)) * std::cos(j * th);
        }
        cheb[j] = s * (j == 0 ? 1.0 : 2.0) / kNodes;
    }

    // Convert to monomial coefficients via the T recurrence.
    ChebyshevFit fit;
    fit.coeffs.assign(degree + 1, 0.0);
    std::vector<double> t_prev{1.0};       // T_0
    std::vector<double> t_cur{0.0, 1.0};   // T_1
    for (int j = 0; j <= degree; ++j) {
        const std::vector<double>& tj = (j == 0) ? t_prev : t_cur;
        for (std::size_t m = 0; m < tj.size(); ++m) fit.coeffs[m] += cheb[j] * tj[m];
        if (j >= 1) {
            std::vector<double> t_next(j + 2, 0.0);
            for (std::size_t m = 0; m < t_cur.size(); ++m) t_next[m + 1] += 2.0 * t_cur[m];
            for (std::size_t m = 0; m < t_prev.size(); ++m) t_next[m] -= t_prev[m];
            t_prev = std::move(t_cur);
            t_cur = std::move(t_next);
        }
    }

    // Sup-norm of the approximation error and of the monomial partial sums
    // (the order the register accumulates them in) over a dense grid.
    constexpr int kGrid = 8192;
    double max_err = 0.0;
    double max_partial = 0.0;
    for (int g = 0; g < kGrid; ++g) {
        const double theta = kTwoPi * g / kGrid;
        const double x = (theta - kPi) / kPi;
        double acc = 0.0;
        double power = 1.0;
        for (int m = 0; m <= degree; ++m) {
            acc += fit.coeffs[m] * power;
            power *= x;
            max_partial = std::max(max_partial, std::abs(acc));
        }
        max_err = std::max(max_err, std::abs(acc - std::cos(theta)));
    }
    fit.max_error = max_err;

    double need = max_partial;
    for (double c : fit.coeffs) need = std::max(need, std::abs(c));
    // Pick the scale so every scaled partial sum and coefficient fits the
    // register with headroom for the per-block rounding drift at p bits
    // (each transition rounds the power and the product once).
    const double drift = std::ldexp(static_cast<double>(2 * degree + 2), -p - 1);
    int s = 0;
    while (std::ldexp(need, -s) + drift >= 2.0) ++s;
    fit.accumulator_scale_log2 = s;
    return fit;
}

void build_polynomial_kick(CircuitState& state, const AlgorithmConfig& cfg) {
    if (cfg.kick_mode != KickMode::PolynomialRegister)
        throw std::invalid_argument("build_polynomial_kick: config is not in polynomial mode");
    if (cfg.poly_degree < 1) throw std::invalid_argument("build_polynomial_kick: degree must be >= 1");

    const ChebyshevFit fit = chebyshev_coeffs(cfg.poly_degree, cfg.p);
    const double scale = std::ldexp(1.0, fit.accumulator_scale_log2);

    // x_i = (theta_i - pi)/pi = (2i - N)/N, exactly representable for p >= n_q.
    const std::size_t N = cfg.N();
    std::vector<std::int64_t> x_mant(N);
    for (std::size_t i = 0; i < N; ++i) {
        const std::int64_t num = 2 * static_cast<std::int64_t>(i) - static_cast<std::int64_t>(N);
        x_mant[i] = num << (cfg.p - cfg.n_q);
    }

    state.ledger().set_step("step_IV");
    state.begin_uncompute_scope();
    // Register A accumulates P/scale, register B walks the powers of x.
    state.init_ancilla_constant(RegId::A, FixedPoint::from_real(fit.coeffs[0] / scale, cfg.p));
    state.init_ancilla_constant(RegId::B, FixedPoint::from_real(1.0, cfg.p));
    for (int m = 1; m <= cfg.poly_degree; ++m)
        state.poly_mac_step(FixedPoint::from_real(fit.coeffs[m] / scale, cfg.p), x_mant);

    // exp(-ik P) = exp(-i (k*scale) (P/scale)).
    apply_register_phases(state, cfg.k * scale, cfg.p);
    state.ledger().set_step("step_IV_uncompute");
    state.uncompute_ancillas();
}

void kick_cycle(CircuitState& state, const AlgorithmConfig& cfg, std::int64_t t_index) {
    (void)t_index;
    cfg.validate();
    step_free_rotation(state, cfg);
    step_to_angle(state);
    if (cfg.kick_mode == KickMode::CosineRegister) {
        step_build_cosine(state, cfg);
        step_kick(state, cfg);
    } else {
        build_polynomial_kick(state, cfg);
    }
    step_to_momentum(state);
}

MeasurementHistogram measure_momentum(const CircuitState& state, std::int64_t shots,
                                      std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("measure_momentum: shots must be >= 1");
    const std::vector<double> probs = state.momentum_probabilities();
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        cdf[i] = acc;
    }

    MeasurementHistogram h;
    h.shots = shots;
    h.counts.assign(probs.size(), 0);
    for (std::int64_t s = 0; s < shots; ++s) {
        const double u = rng::uniform01(seed, 0, static_cast<std::uint64_t>(s)) * acc;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t n = std::min<std::size_t>(it - cdf.begin(), probs.size() - 1);
        ++h.counts[n];
    }
    return h;
}

} // namespace kickrot::gs
