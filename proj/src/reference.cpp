#include "kickrot/reference.hpp"

#include "kickrot/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace kickrot::reference {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kTwoPi = 2.0 * kPi;

bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::vector<double> angle_grid(std::size_t N) {
    std::vector<double> theta(N);
    for (std::size_t i = 0; i < N; ++i)
        theta[i] = kTwoPi * static_cast<double>(i) / static_cast<double>(N);
    return theta;
}

// exp(-i T n^2 / 2) for n = 0..N-1.
std::vector<std::complex<double>> free_phase_table(double T, std::size_t N) {
    std::vector<std::complex<double>> ph(N);
    for (std::size_t n = 0; n < N; ++n) {
        const double nn = static_cast<double>(n);
        ph[n] = std::polar(1.0, -T * nn * nn / 2.0);
    }
    return ph;
}
} // namespace

PotentialKind PotentialKind::cosine() { return {}; }

PotentialKind PotentialKind::arctan_band(double E) {
    PotentialKind p;
    p.tag = Tag::ArctanBand;
    p.band_E = E;
    return p;
}

PotentialKind PotentialKind::polynomial(std::vector<double> coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("Polynomial potential: empty coefficient list");
    PotentialKind p;
    p.tag = Tag::Polynomial;
    p.poly_coeffs = std::move(coeffs);
    return p;
}

PotentialKind PotentialKind::dsum(int d) {
    if (d < 1 || d > 2) throw std::invalid_argument("DSum potential: d must be 1 or 2");
    PotentialKind p;
    p.tag = Tag::DSum;
    p.dims = d;
    return p;
}

std::string PotentialKind::name() const {
    switch (tag) {
        case Tag::Cosine: return "cosine";
        case Tag::ArctanBand: return "arctan_band";
        case Tag::Polynomial: return "polynomial";
        case Tag::DSum: return dims == 1 ? "dsum1" : "dsum2";
    }
    return "unknown";
}

DriveKind DriveKind::static_drive() { return {}; }

DriveKind DriveKind::quasiperiodic(double w1, double w2) {
    DriveKind d;
    d.tag = Tag::Quasiperiodic;
    d.omega1 = w1;
    d.omega2 = w2;
    return d;
}

DriveKind DriveKind::golden() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    return quasiperiodic(kTwoPi / phi, kTwoPi / (phi * phi));
}

DriveKind DriveKind::incommensurate_pair() {
    return quasiperiodic(kTwoPi * (std::sqrt(2.0) - 1.0), kTwoPi * (std::sqrt(3.0) - 1.0));
}

void QuantumParams::validate() const {
    if (!power_of_two(N)) throw std::invalid_argument("QuantumParams: N must be a power of two");
    if (drive.tag == DriveKind::Tag::Quasiperiodic && potential.tag != PotentialKind::Tag::ArctanBand)
        throw std::invalid_argument("QuantumParams: quasiperiodic drive requires the arctan-band potential");
}

Wavefunction Wavefunction::basis_state(std::size_t N, std::size_t n0) {
    if (!power_of_two(N)) throw std::invalid_argument("Wavefunction: N must be a power of two");
    if (n0 >= N) throw std::invalid_argument("Wavefunction: basis index out of range");
    Wavefunction psi;
    psi.amps.assign(N, {0.0, 0.0});
    psi.amps[n0] = {1.0, 0.0};
    return psi;
}

Wavefunction Wavefunction::from_amplitudes(std::vector<std::complex<double>> a) {
    if (!power_of_two(a.size())) throw std::invalid_argument("Wavefunction: N must be a power of two");
    Wavefunction psi;
    psi.amps = std::move(a);
    return psi;
}

double Wavefunction::norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<double> Wavefunction::probabilities() const {
    std::vector<double> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
    return p;
}

double potential_eval(const PotentialKind& kind, double theta, double k) {
    switch (kind.tag) {
        case PotentialKind::Tag::Cosine:
            return k * std::cos(theta);
        case PotentialKind::Tag::ArctanBand:
            return 2.0 * std::atan(kind.band_E - 2.0 * k * std::cos(theta));
        case PotentialKind::Tag::Polynomial: {
            // Monomial evaluation in x = (theta - pi)/pi, lowest degree first,
            // mirroring the register construction.
            const double x = (theta - kPi) / kPi;
            double acc = 0.0;
            double power = 1.0;
            for (std::size_t m = 0; m < kind.poly_coeffs.size(); ++m) {
                acc += kind.poly_coeffs[m] * power;
                power *= x;
            }
            return k * acc;
        }
        case PotentialKind::Tag::DSum:
            return k * std::cos(theta); // per-axis term of the d-dimensional kick
    }
    throw std::logic_error("potential_eval: unreachable");
}

double quasiperiodic_band_param(double k, double omega1, double omega2, std::int64_t t) {
    const double td = static_cast<double>(t);
    return -2.0 * k * std::cos(omega1 * td) - 2.0 * k * std::cos(omega2 * td);
}

namespace {

// Kick phases exp(-i V(theta_i)) for the given kick index.
std::vector<std::complex<double>> kick_phase_table(const QuantumParams& p, std::int64_t t_index) {
    const auto theta = angle_grid(p.N);
    std::vector<std::complex<double>> ph(p.N);
    PotentialKind kind = p.potential;
    if (p.drive.tag == DriveKind::Tag::Quasiperiodic)
        kind.band_E = quasiperiodic_band_param(p.k, p.drive.omega1, p.drive.omega2, t_index);
    for (std::size_t i = 0; i < p.N; ++i)
        ph[i] = std::polar(1.0, -potential_eval(kind, theta[i], p.k));
    return ph;
}

void evolve_step_with_tables(Wavefunction& psi, const std::vector<std::complex<double>>& free_ph,
                             const std::vector<std::complex<double>>& kick_ph) {
    const std::size_t N = psi.amps.size();
    for (std::size_t n = 0; n < N; ++n) psi.amps[n] *= free_ph[n];
    fft::transform_plus(psi.amps);
    for (std::size_t i = 0; i < N; ++i) psi.amps[i] *= kick_ph[i];
    fft::transform_minus(psi.amps);
}

} // namespace

void evolve_step(Wavefunction& psi, const QuantumParams& p, std::int64_t t_index) {
    p.validate();
    if (psi.amps.size() != p.N) throw std::invalid_argument("evolve_step: size mismatch");
    evolve_step_with_tables(psi, free_phase_table(p.T, p.N), kick_phase_table(p, t_index));
}

std::vector<Snapshot> evolve(const Wavefunction& psi0, const QuantumParams& p, std::int64_t kicks,
                             std::int64_t record_every) {
    p.validate();
    if (psi0.amps.size() != p.N) throw std::invalid_argument("evolve: size mismatch");
    if (kicks < 0) throw std::invalid_argument("evolve: negative kick count");
    if (record_every < 1) record_every = kicks > 0 ? kicks : 1;

    const auto free_ph = free_phase_table(p.T, p.N);
    const bool static_kick = p.drive.tag == DriveKind::Tag::Static;
    std::vector<std::complex<double>> kick_ph;
    if (static_kick) kick_ph = kick_phase_table(p, 0);

    std::vector<Snapshot> out;
    out.push_back({0, psi0});
    Wavefunction psi = psi0;
    for (std::int64_t t = 1; t <= kicks; ++t) {
        if (static_kick) {
            evolve_step_with_tables(psi, free_ph, kick_ph);
        } else {
            evolve_step_with_tables(psi, free_ph, kick_phase_table(p, t - 1));
        }
        if (t % record_every == 0 || t == kicks) out.push_back({t, psi});
    }
    return out;
}

Wavefunction2D Wavefunction2D::product(const Wavefunction& a, const Wavefunction& b, double g) {
    if (a.size() != b.size()) throw std::invalid_argument("Wavefunction2D: size mismatch");
    Wavefunction2D psi;
    psi.N = a.size();
    psi.g = g;
    psi.amps.resize(psi.N * psi.N);
    for (std::size_t n1 = 0; n1 < psi.N; ++n1)
        for (std::size_t n2 = 0; n2 < psi.N; ++n2) psi.amps[n1 * psi.N + n2] = a.amps[n1] * b.amps[n2];
    return psi;
}

double Wavefunction2D::norm() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

void evolve_2d(Wavefunction2D& psi, const QuantumParams& p, std::int64_t kicks) {
    const std::size_t N = psi.N;
    if (!power_of_two(N)) throw std::invalid_argument("evolve_2d: N must be a power of two");
    if (N > 1024) throw std::invalid_argument("evolve_2d: N per axis limited to 1024");
    if (psi.amps.size() != N * N) throw std::invalid_argument("evolve_2d: size mismatch");
    if (p.potential.tag == PotentialKind::Tag::DSum && p.potential.dims > 2)
        throw std::invalid_argument("evolve_2d: d > 2 not supported");

    const auto theta = angle_grid(N);
    std::vector<std::complex<double>> kick_ph(N);
    for (std::size_t i = 0; i < N; ++i) kick_ph[i] = std::polar(1.0, -p.k * std::cos(theta[i]));

    std::vector<std::complex<double>> free_ph(N * N);
    for (std::size_t n1 = 0; n1 < N; ++n1) {
        for (std::size_t n2 = 0; n2 < N; ++n2) {
            const double a1 = static_cast<double>(n1);
            const double a2 = static_cast<double>(n2);
            double phase = -p.T * (a1 * a1 + a2 * a2) / 2.0;
            if (n1 == n2) phase -= psi.g;
            free_ph[n1 * N + n2] = std::polar(1.0, phase);
        }
    }

    std::vector<std::complex<double>> row(N);
    auto transform_axes = [&](bool plus) {
        // rows: n2 varies fastest
        for (std::size_t n1 = 0; n1 < N; ++n1) {
            for (std::size_t n2 = 0; n2 < N; ++n2) row[n2] = psi.amps[n1 * N + n2];
            plus ? fft::transform_plus(row) : fft::transform_minus(row);
            for (std::size_t n2 = 0; n2 < N; ++n2) psi.amps[n1 * N + n2] = row[n2];
        }
        // columns
        for (std::size_t n2 = 0; n2 < N; ++n2) {
            for (std::size_t n1 = 0; n1 < N; ++n1) row[n1] = psi.amps[n1 * N + n2];
            plus ? fft::transform_plus(row) : fft::transform_minus(row);
            for (std::size_t n1 = 0; n1 < N; ++n1) psi.amps[n1 * N + n2] = row[n1];
        }
    };

    for (std::int64_t t = 0; t < kicks; ++t) {
        for (std::size_t idx = 0; idx < N * N; ++idx) psi.amps[idx] *= free_ph[idx];
        transform_axes(true);
        for (std::size_t n1 = 0; n1 < N; ++n1)
            for (std::size_t n2 = 0; n2 < N; ++n2) psi.amps[n1 * N + n2] *= kick_ph[n1] * kick_ph[n2];
        transform_axes(false);
    }
}

} // namespace kickrot::reference
