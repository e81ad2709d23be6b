#include "kickrot/observables.hpp"

#include "kickrot/fft.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kickrot::obs {

namespace {
bool power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
} // namespace

MomentumDistribution MomentumDistribution::from_probs(std::vector<double> p, std::size_t n0,
                                                      bool renormalize) {
    if (!power_of_two(p.size()))
        throw std::invalid_argument("MomentumDistribution: length must be a power of two");
    if (n0 >= p.size()) throw std::invalid_argument("MomentumDistribution: origin out of range");
    double total = 0.0;
    for (double x : p) {
        if (x < 0.0) throw std::invalid_argument("MomentumDistribution: negative probability");
        total += x;
    }
    if (renormalize) {
        if (total <= 0.0) throw std::invalid_argument("MomentumDistribution: zero total weight");
        for (double& x : p) x /= total;
    } else if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("MomentumDistribution: probabilities not normalized");
    }
    MomentumDistribution d;
    d.probs = std::move(p);
    d.n0 = n0;
    return d;
}

MomentumDistribution MomentumDistribution::from_amplitudes(
    const std::vector<std::complex<double>>& amps, std::size_t n0) {
    std::vector<double> p(amps.size());
    for (std::size_t i = 0; i < amps.size(); ++i) p[i] = std::norm(amps[i]);
    return from_probs(std::move(p), n0, true);
}

double MomentumDistribution::displacement(std::size_t n) const {
    const std::size_t N = probs.size();
    const std::size_t half = N / 2;
    // wrapped into [-N/2, N/2)
    const std::size_t shifted = (n + N - n0 + half) % N;
    return static_cast<double>(shifted) - static_cast<double>(half);
}

Moments momentum_moments(const MomentumDistribution& dist) {
    double mean = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) mean += dist.probs[n] * dist.displacement(n);
    double var = 0.0;
    for (std::size_t n = 0; n < dist.size(); ++n) {
        const double d = dist.displacement(n) - mean;
        var += dist.probs[n] * d * d;
    }
    return {mean, var};
}

namespace {

LocalizationFit fit_window(const MomentumDistribution& dist, std::size_t lo, std::size_t hi) {
    LocalizationFit fit;
    fit.window_lo = lo;
    fit.window_hi = hi;
    if (lo >= hi) return fit;

    // Points from both tails: |d| in [lo, hi], skipping empty cells.
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    std::size_t count = 0;
    for (std::size_t n = 0; n < dist.size(); ++n) {
        const double d = std::abs(dist.displacement(n));
        if (d < static_cast<double>(lo) || d > static_cast<double>(hi)) continue;
        if (dist.probs[n] <= 0.0) continue;
        const double y = std::log(dist.probs[n]);
        sx += d;
        sy += y;
        sxx += d * d;
        sxy += d * y;
        syy += y * y;
        ++count;
    }
    if (count < 16) return fit;

    const double m = static_cast<double>(count);
    const double denom = m * sxx - sx * sx;
    if (denom == 0.0) return fit;
    fit.slope = (m * sxy - sx * sy) / denom;
    const double ss_tot = syy - sy * sy / m;
    const double ss_res = ss_tot - fit.slope * (sxy - sx * sy / m);
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    if (fit.slope < 0.0 && fit.r_squared >= 0.9) {
        fit.l = -2.0 / fit.slope;
        fit.valid = true;
    }
    return fit;
}

} // namespace

LocalizationFit localization_length_fit(const MomentumDistribution& dist,
                                        const WindowPolicy& policy) {
    const std::size_t N = dist.size();
    if (!policy.automatic) return fit_window(dist, policy.lo, policy.hi);

    const std::size_t hi = N / 2 - N / 16;
    LocalizationFit first = fit_window(dist, 16, hi);
    if (!first.valid) return first;
    const std::size_t lo =
        std::min<std::size_t>(static_cast<std::size_t>(std::lround(2.0 * first.l)), hi / 2);
    return fit_window(dist, std::max<std::size_t>(lo, 1), hi);
}

double ipr(const MomentumDistribution& dist) {
    double s = 0.0;
    for (double p : dist.probs) s += p * p;
    return 1.0 / s;
}

std::vector<Harmonic> harmonics(const MomentumDistribution& dist, std::size_t m) {
    const std::size_t N = dist.size();
    if (m > N / 2) throw std::invalid_argument("harmonics: m must be <= N/2");

    fft::cvec f(N);
    for (std::size_t n = 0; n < N; ++n) f[n] = dist.probs[n];
    fft::transform_minus(f); // (1/sqrt N) sum P e^{-2 pi i jn/N}
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));

    std::vector<Harmonic> all(N);
    for (std::size_t j = 0; j < N; ++j) {
        all[j].index = j;
        all[j].value = f[j] * scale;
        all[j].magnitude = std::abs(all[j].value);
    }
    std::stable_sort(all.begin(), all.end(), [](const Harmonic& a, const Harmonic& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        return a.index < b.index;
    });
    all.resize(m);
    return all;
}

double growth_ratio_last_half(const std::vector<double>& variance_series) {
    const std::size_t n = variance_series.size();
    if (n < 8) throw std::invalid_argument("growth_ratio_last_half: series too short");
    auto window_mean = [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += variance_series[i];
        return s / static_cast<double>(hi - lo);
    };
    const std::size_t half = n / 2;
    const std::size_t three_q = 3 * n / 4;
    return window_mean(three_q, n) / window_mean(half, three_q);
}

MomentumDistribution time_average(const std::vector<MomentumDistribution>& dists) {
    if (dists.empty()) throw std::invalid_argument("time_average: empty input");
    std::vector<double> acc(dists.front().size(), 0.0);
    for (const auto& d : dists) {
        if (d.size() != acc.size()) throw std::invalid_argument("time_average: size mismatch");
        for (std::size_t n = 0; n < acc.size(); ++n) acc[n] += d.probs[n];
    }
    for (double& x : acc) x /= static_cast<double>(dists.size());
    return MomentumDistribution::from_probs(std::move(acc), dists.front().n0, true);
}

} // namespace kickrot::obs
