#include "kickrot/classical.hpp"

#include "kickrot/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace kickrot::classical {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::int64_t imod(std::int64_t a, std::int64_t n) {
    std::int64_t r = a % n;
    return r < 0 ? r + n : r;
}

unsigned resolve_thread_cap(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("KICKROT_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}
} // namespace

MapParams::MapParams(double k_, double T_) : k(k_), T(T_), K(k_ * T_) {
    if (k < 0.0) throw std::invalid_argument("MapParams: k must be >= 0");
    if (T <= 0.0) throw std::invalid_argument("MapParams: T must be > 0");
}

MapParams MapParams::from_K(double K_, double T_) { return MapParams(K_ / T_, T_); }

double reduce_angle(double theta) {
    double r = std::fmod(theta, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    return r;
}

ClassicalState standard_map_step(const ClassicalState& s, const MapParams& p) {
    const double n_new = s.n + p.k * std::sin(s.theta);
    const double theta_new = reduce_angle(s.theta + p.T * n_new);
    return {n_new, theta_new};
}

std::vector<ClassicalState> uniform_angle_ensemble(std::size_t count, double n0) {
    std::vector<ClassicalState> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i].n = n0;
        out[i].theta = kTwoPi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    }
    return out;
}

MomentSeries evolve_ensemble(const std::vector<ClassicalState>& initial, const MapParams& p,
                             std::size_t kicks, unsigned max_threads) {
    if (initial.empty()) throw std::invalid_argument("evolve_ensemble: empty ensemble");

    constexpr std::size_t kChunk = 1024; // fixed partitioning, independent of worker count
    const std::size_t orbits = initial.size();
    const std::size_t chunks = (orbits + kChunk - 1) / kChunk;

    // Per-chunk partial sums of n and n^2 at every recorded time.
    std::vector<std::vector<double>> sum1(chunks, std::vector<double>(kicks + 1, 0.0));
    std::vector<std::vector<double>> sum2(chunks, std::vector<double>(kicks + 1, 0.0));

    auto run_chunk = [&](std::size_t c) {
        const std::size_t lo = c * kChunk;
        const std::size_t hi = std::min(orbits, lo + kChunk);
        for (std::size_t i = lo; i < hi; ++i) {
            ClassicalState s = initial[i];
            sum1[c][0] += s.n;
            sum2[c][0] += s.n * s.n;
            for (std::size_t t = 1; t <= kicks; ++t) {
                s = standard_map_step(s, p);
                sum1[c][t] += s.n;
                sum2[c][t] += s.n * s.n;
            }
        }
    };

    const unsigned workers =
        std::min<unsigned>(resolve_thread_cap(max_threads), static_cast<unsigned>(chunks));
    if (workers <= 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
            });
        }
        for (auto& th : pool) th.join();
    }

    MomentSeries series;
    series.mean_n.resize(kicks + 1);
    series.var_n.resize(kicks + 1);
    const double inv = 1.0 / static_cast<double>(orbits);
    for (std::size_t t = 0; t <= kicks; ++t) {
        double s1 = 0.0, s2 = 0.0;
        for (std::size_t c = 0; c < chunks; ++c) { // fixed reduction order
            s1 += sum1[c][t];
            s2 += sum2[c][t];
        }
        const double mean = s1 * inv;
        series.mean_n[t] = mean;
        series.var_n[t] = std::max(0.0, s2 * inv - mean * mean);
    }
    return series;
}

double fit_diffusion_rate(const MomentSeries& series) {
    const std::size_t t_max = series.kicks();
    if (t_max < 2) throw std::invalid_argument("fit_diffusion_rate: series too short");
    const std::size_t lo = t_max / 2;
    // Slope of var_n vs t over [t_max/2, t_max].
    double st = 0.0, sv = 0.0, stt = 0.0, stv = 0.0, m = 0.0;
    for (std::size_t t = lo; t <= t_max; ++t) {
        const double x = static_cast<double>(t);
        const double y = series.var_n[t];
        st += x;
        sv += y;
        stt += x * x;
        stv += x * y;
        m += 1.0;
    }
    const double denom = m * stt - st * st;
    return (m * stv - st * sv) / denom;
}

LyapunovResult lyapunov_exponent(const MapParams& p, std::size_t steps, std::uint64_t seed) {
    ClassicalState s;
    s.theta = kTwoPi * rng::uniform01(seed, 0, 0);
    s.n = rng::uniform01(seed, 0, 1);
    return lyapunov_exponent_from(p, steps, s);
}

LyapunovResult lyapunov_exponent_from(const MapParams& p, std::size_t steps, ClassicalState s) {
    // Tangent vector evolved with the map Jacobian
    //   [ dn'/dn  dn'/dtheta ]   [ 1        k cos(theta)     ]
    //   [ dth'/dn dth'/dtheta]   [ T    1 + T k cos(theta)   ]
    double vn = 1.0, vt = 0.0;
    double log_sum = 0.0;
    LyapunovResult res;

    constexpr std::size_t kRenorm = 10;
    for (std::size_t t = 0; t < steps; ++t) {
        const double c = p.k * std::cos(s.theta);
        const ClassicalState next = standard_map_step(s, p);
        if (next.n == s.n && next.theta == s.theta) {
            // Exactly stationary: the tangent dynamics is degenerate here.
            res.degenerate = true;
            break;
        }
        const double vn_new = vn + c * vt;
        const double vt_new = vt + p.T * vn_new;
        vn = vn_new;
        vt = vt_new;
        s = next;
        if ((t + 1) % kRenorm == 0) {
            const double norm = std::hypot(vn, vt);
            log_sum += std::log(norm);
            vn /= norm;
            vt /= norm;
        }
    }
    const double norm = std::hypot(vn, vt);
    if (norm > 0.0) log_sum += std::log(norm);
    res.lambda = log_sum / static_cast<double>(steps);
    return res;
}

std::int64_t lattice_kick(std::int64_t X, std::int64_t N, double K) {
    const double arg = kTwoPi * static_cast<double>(X) / static_cast<double>(N);
    return static_cast<std::int64_t>(
        std::trunc(static_cast<double>(N) * K * std::sin(arg) / kTwoPi));
}

LatticeState symplectic_map_step(const LatticeState& s, double K) {
    LatticeState out;
    out.N = s.N;
    out.Y = imod(s.Y + lattice_kick(s.X, s.N, K), s.N);
    out.X = imod(s.X + out.Y, s.N);
    return out;
}

LatticeState symplectic_map_inverse(const LatticeState& s, double K) {
    LatticeState out;
    out.N = s.N;
    out.X = imod(s.X - s.Y, s.N);
    out.Y = imod(s.Y - lattice_kick(out.X, s.N, K), s.N);
    return out;
}

DensityGrid DensityGrid::zero(std::int64_t N) {
    DensityGrid d;
    d.N = N;
    d.weights.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0.0);
    return d;
}

DensityGrid DensityGrid::line_at_Y(std::int64_t N, std::int64_t Y, double weight_per_cell) {
    DensityGrid d = zero(N);
    for (std::int64_t x = 0; x < N; ++x) d.at(x, Y) = weight_per_cell;
    return d;
}

DensityGrid DensityGrid::delta(std::int64_t N, std::int64_t X, std::int64_t Y, double weight) {
    DensityGrid d = zero(N);
    d.at(X, Y) = weight;
    return d;
}

double DensityGrid::total() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

std::vector<double> DensityGrid::marginal_Y() const {
    std::vector<double> m(static_cast<std::size_t>(N), 0.0);
    for (std::int64_t x = 0; x < N; ++x)
        for (std::int64_t y = 0; y < N; ++y) m[static_cast<std::size_t>(y)] += at(x, y);
    return m;
}

DensityGrid density_evolve(const DensityGrid& d, double K, std::size_t t) {
    const std::int64_t N = d.N;
    const std::size_t cells = static_cast<std::size_t>(N) * static_cast<std::size_t>(N);

    auto step_cell = [&](std::int64_t X, std::int64_t Y, const std::vector<std::int64_t>& SX) {
        const std::int64_t Y2 = imod(Y + SX[static_cast<std::size_t>(X)], N);
        const std::int64_t X2 = imod(X + Y2, N);
        return static_cast<std::size_t>(X2 * N + Y2);
    };

    std::vector<std::int64_t> SX(static_cast<std::size_t>(N));
    for (std::int64_t x = 0; x < N; ++x) SX[static_cast<std::size_t>(x)] = lattice_kick(x, N, K);

    DensityGrid cur = d;
    DensityGrid nxt = DensityGrid::zero(N);

    if (t > 10) {
        // One-step permutation table, then walk it: avoids re-evaluating the
        // kick for every step.
        std::vector<std::size_t> perm(cells);
        for (std::int64_t x = 0; x < N; ++x)
            for (std::int64_t y = 0; y < N; ++y)
                perm[static_cast<std::size_t>(x * N + y)] = step_cell(x, y, SX);
        for (std::size_t step = 0; step < t; ++step) {
            std::fill(nxt.weights.begin(), nxt.weights.end(), 0.0);
            for (std::size_t c = 0; c < cells; ++c) nxt.weights[perm[c]] = cur.weights[c];
            std::swap(cur, nxt);
        }
    } else {
        for (std::size_t step = 0; step < t; ++step) {
            std::fill(nxt.weights.begin(), nxt.weights.end(), 0.0);
            for (std::int64_t x = 0; x < N; ++x)
                for (std::int64_t y = 0; y < N; ++y)
                    nxt.weights[step_cell(x, y, SX)] = cur.at(x, y);
            std::swap(cur, nxt);
        }
    }
    return cur;
}

} // namespace kickrot::classical
