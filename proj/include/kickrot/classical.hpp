#pragma once

#include <cstdint>
#include <vector>

namespace kickrot::classical {

// Point of the standard map: action n (unbounded) and angle theta in [0, 2pi).
struct ClassicalState {
    double n = 0.0;
    double theta = 0.0;
};

struct MapParams {
    double k; // kick strength
    double T; // period
    double K; // chaos parameter, K = k*T exactly as stored

    MapParams(double k_, double T_);
    static MapParams from_K(double K_, double T_ = 1.0);
};

double reduce_angle(double theta); // to [0, 2pi)

// One iteration: n' = n + k sin(theta); theta' = theta + T n' (mod 2pi).
// The momentum update happens first and the new momentum feeds the angle.
ClassicalState standard_map_step(const ClassicalState& s, const MapParams& p);

// Deterministic ensemble start: theta on the midpoint grid 2*pi*(i+1/2)/count,
// momentum n0 for every orbit. No RNG involved, so runs reproduce exactly.
std::vector<ClassicalState> uniform_angle_ensemble(std::size_t count, double n0 = 0.0);

// Per-kick ensemble moments: mean_n[t'] and var_n[t'] for t' = 0..kicks.
struct MomentSeries {
    std::vector<double> mean_n;
    std::vector<double> var_n;
    std::size_t kicks() const { return mean_n.empty() ? 0 : mean_n.size() - 1; }
};

// Orbits are partitioned into fixed-size chunks; each chunk accumulates its
// partial sums in orbit order and chunks reduce in index order, so the result
// is bitwise independent of the worker count. max_threads = 0 reads
// KICKROT_THREADS (default: hardware concurrency).
MomentSeries evolve_ensemble(const std::vector<ClassicalState>& initial, const MapParams& p,
                             std::size_t kicks, unsigned max_threads = 0);

// Least-squares slope of var_n over the second half of the series: the
// fitted diffusion rate D = var_n / t in the diffusive regime.
double fit_diffusion_rate(const MomentSeries& series);

struct LyapunovResult {
    double lambda = 0.0;
    bool degenerate = false; // orbit landed exactly on a fixed point
};

// Largest Lyapunov exponent by tangent-map iteration, renormalizing the
// tangent vector every 10 steps. The initial point comes from the seed. An
// orbit that lands exactly on a fixed point stops early and reports the
// accumulated estimate with the degenerate flag set.
LyapunovResult lyapunov_exponent(const MapParams& p, std::size_t steps, std::uint64_t seed);
LyapunovResult lyapunov_exponent_from(const MapParams& p, std::size_t steps, ClassicalState start);

// --- discretized symplectic map on the N x N lattice ---

struct LatticeState {
    std::int64_t X = 0;
    std::int64_t Y = 0;
    std::int64_t N = 1;
};

// Integer kick S_N(X) = trunc(N*K*sin(2*pi*X/N) / (2*pi)), truncation toward
// zero so S_N(-X) = -S_N(X) mirrors the antisymmetry of sin.
std::int64_t lattice_kick(std::int64_t X, std::int64_t N, double K);

// Y' = (Y + S_N(X)) mod N; X' = (X + Y') mod N. A permutation of the lattice.
LatticeState symplectic_map_step(const LatticeState& s, double K);

// Exact inverse: X = (X' - Y') mod N; Y = (Y' - S_N(X)) mod N.
LatticeState symplectic_map_inverse(const LatticeState& s, double K);

// Phase-space density on the lattice, cell weights w[X*N + Y].
struct DensityGrid {
    std::int64_t N = 0;
    std::vector<double> weights;

    static DensityGrid zero(std::int64_t N);
    static DensityGrid line_at_Y(std::int64_t N, std::int64_t Y, double weight_per_cell = 1.0);
    static DensityGrid delta(std::int64_t N, std::int64_t X, std::int64_t Y, double weight = 1.0);

    double& at(std::int64_t X, std::int64_t Y) { return weights[static_cast<std::size_t>(X * N + Y)]; }
    double at(std::int64_t X, std::int64_t Y) const { return weights[static_cast<std::size_t>(X * N + Y)]; }
    double total() const;
    // Marginal over X: weight per Y value.
    std::vector<double> marginal_Y() const;
};

// Transport the density along the lattice map for t steps. The map is a
// permutation of cells, so the total weight is conserved exactly; for t > 10
// the single-step permutation table is precomputed once and walked per step.
DensityGrid density_evolve(const DensityGrid& d, double K, std::size_t t);

} // namespace kickrot::classical
