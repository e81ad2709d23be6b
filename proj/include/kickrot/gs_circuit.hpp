#pragma once

#include "kickrot/circuit.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace kickrot::gs {

enum class KickMode { CosineRegister, PolynomialRegister };

struct AlgorithmConfig {
    int n_q = 4;
    int p = 8; // fractional register bits; must be >= n_q
    double k = 5.0;
    double T = 0.5;
    KickMode kick_mode = KickMode::CosineRegister;
    int poly_degree = 0; // PolynomialRegister only

    std::size_t N() const { return std::size_t(1) << n_q; }
    circuit::RegisterLayout layout() const;
    void validate() const;
};

// The 2*n_q precomputed rotation constants cos(2*pi/2^j), sin(2*pi/2^j) for
// j = 1..n_q, rounded to the register precision (entry j at index j-1).
struct RotationTable {
    std::vector<circuit::FixedPoint> cos_j;
    std::vector<circuit::FixedPoint> sin_j;
};
RotationTable precompute_rotation_table(int n_q, int p);

// Step I. A basis-state preparation costs one X gate per set bit (|N/2>
// needs exactly one); a general amplitude list is loaded directly and its
// preparation cost is not modeled.
circuit::CircuitState prepare_initial(const AlgorithmConfig& cfg, circuit::Representation rep,
                                      std::size_t basis_index);
circuit::CircuitState prepare_initial(const AlgorithmConfig& cfg, circuit::Representation rep,
                                      const std::vector<std::complex<double>>& amplitudes);

// Step II: exp(-iT n^2/2) from pairwise phase gates,
// n^2 = sum_{j1,j2} bit_{j1} bit_{j2} 2^{j1+j2}.
void step_free_rotation(circuit::CircuitState& state, const AlgorithmConfig& cfg);

// Step III / Step VI.
void step_to_angle(circuit::CircuitState& state);
void step_to_momentum(circuit::CircuitState& state);

// Step IV: conditional rotations build |cos theta_i> (register A) and
// |sin theta_i> (register B) from (1, 0).
void step_build_cosine(circuit::CircuitState& state, const AlgorithmConfig& cfg);

// Step V: per-bit phases apply exp(-ik c_i) with the register's
// two's-complement weights (the sign and integer bits are tallied under
// step_V_sign; the paper's count of p gates is the fractional-bit tally),
// then the ancillas are reversibly erased.
void step_kick(circuit::CircuitState& state, const AlgorithmConfig& cfg);

// Polynomial variant of IV+V: builds |P(theta_i)> by monomial
// multiply-accumulate in x = (theta - pi)/pi, applies exp(-ik P) and erases.
void build_polynomial_kick(circuit::CircuitState& state, const AlgorithmConfig& cfg);

// One full kick: II, III, IV, V, VI. The state enters and leaves in the
// momentum representation. t_index is reserved for time-dependent drives
// (unused by the supported kick modes).
void kick_cycle(circuit::CircuitState& state, const AlgorithmConfig& cfg, std::int64_t t_index = 0);

// Uniform polynomial approximation of cos(theta) over [0, 2pi), as monomial
// coefficients in the mapped variable x = (theta - pi)/pi.
struct ChebyshevFit {
    std::vector<double> coeffs;
    double max_error = 0.0;     // sup-norm over a dense theta grid
    int accumulator_scale_log2 = 0; // partial sums / 2^s stay inside [-2, 2)
};
ChebyshevFit chebyshev_coeffs(int degree, int p);

struct MeasurementHistogram {
    std::vector<std::int64_t> counts;
    std::int64_t shots = 0;
};

// Shot sampling of the primary-register momentum distribution; reproducible
// for a fixed seed and independent of how shots are partitioned.
MeasurementHistogram measure_momentum(const circuit::CircuitState& state, std::int64_t shots,
                                      std::uint64_t seed);

} // namespace kickrot::gs
