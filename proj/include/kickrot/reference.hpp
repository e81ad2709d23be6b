#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace kickrot::reference {

// Phase-generating function of the kick, exp(-i V(theta)).
struct PotentialKind {
    enum class Tag { Cosine, ArctanBand, Polynomial, DSum };

    Tag tag = Tag::Cosine;
    double band_E = 0.0;                  // ArctanBand
    std::vector<double> poly_coeffs;      // Polynomial: monomial coeffs in x = (theta - pi)/pi
    int dims = 1;                         // DSum

    static PotentialKind cosine();
    static PotentialKind arctan_band(double E);
    static PotentialKind polynomial(std::vector<double> coeffs);
    static PotentialKind dsum(int d); // d in {1, 2}

    std::string name() const;
};

struct DriveKind {
    enum class Tag { Static, Quasiperiodic };

    Tag tag = Tag::Static;
    double omega1 = 0.0;
    double omega2 = 0.0;

    static DriveKind static_drive();
    static DriveKind quasiperiodic(double w1, double w2);
    // omega1 = 2*pi/phi, omega2 = 2*pi/phi^2 with phi the golden ratio. Note
    // that 1/phi + 1/phi^2 = 1, so sampled at integer kick times the two
    // cosines coincide: fine for evaluating E(t), unusable as the
    // quasiperiodic drive.
    static DriveKind golden();
    // Default drive for transition studies: omega1 = 2*pi*(sqrt(2)-1),
    // omega2 = 2*pi*(sqrt(3)-1). At integer kick times a drive needs
    // (omega1/2pi, omega2/2pi, 1) rationally independent, which this pair
    // satisfies.
    static DriveKind incommensurate_pair();
};

struct QuantumParams {
    double k = 1.0;
    double T = 1.0;
    std::size_t N = 0; // power of two
    PotentialKind potential = PotentialKind::cosine();
    DriveKind drive = DriveKind::static_drive();

    double classical_K() const { return k * T; }
    void validate() const;
};

struct Wavefunction {
    std::vector<std::complex<double>> amps; // amplitude per momentum level n = 0..N-1

    static Wavefunction basis_state(std::size_t N, std::size_t n0);
    static Wavefunction from_amplitudes(std::vector<std::complex<double>> a);

    std::size_t size() const { return amps.size(); }
    double norm() const;
    std::vector<double> probabilities() const;
};

// V(theta): Cosine -> k*cos(theta); ArctanBand(E) -> 2*atan(E - 2k*cos(theta));
// Polynomial -> k*P(theta); DSum -> per-axis cosine term k*cos(theta).
double potential_eval(const PotentialKind& kind, double theta, double k);

// E(t) = -2k cos(omega1 t) - 2k cos(omega2 t).
double quasiperiodic_band_param(double k, double omega1, double omega2, std::int64_t t);

// One period of Eq.-(2) dynamics: exp(-iT n^2/2) diagonal in momentum, DFT to
// the angle grid theta_i = 2*pi*i/N, exp(-i V(theta_i)) diagonal, DFT back.
// t_index selects E(t) under a quasiperiodic drive.
void evolve_step(Wavefunction& psi, const QuantumParams& p, std::int64_t t_index = 0);

struct Snapshot {
    std::int64_t t = 0;
    Wavefunction psi;
};

// Iterates evolve_step; records t = 0, every record_every-th kick, and the
// final state.
std::vector<Snapshot> evolve(const Wavefunction& psi0, const QuantumParams& p, std::int64_t kicks,
                             std::int64_t record_every);

// Two interacting rotators: U_T = exp(-iT(n1^2+n2^2)/2 - i g delta_{n1,n2}),
// U_k = exp(-ik(cos theta1 + cos theta2)).
struct Wavefunction2D {
    std::size_t N = 0; // levels per axis, power of two
    double g = 0.0;    // interaction strength on the diagonal n1 == n2
    std::vector<std::complex<double>> amps; // row-major, amps[n1*N + n2]

    static Wavefunction2D product(const Wavefunction& a, const Wavefunction& b, double g);
    double norm() const;
};

void evolve_2d(Wavefunction2D& psi, const QuantumParams& p, std::int64_t kicks);

} // namespace kickrot::reference
