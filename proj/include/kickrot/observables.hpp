#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace kickrot::obs {

// Normalized momentum probabilities P(n), with the origin n0 the moments and
// fits are taken about. Displacements are circular: wrapped into
// [-N/2, N/2) about n0, since raw moments are ill-defined on the torus.
struct MomentumDistribution {
    std::vector<double> probs;
    std::size_t n0 = 0;

    static MomentumDistribution from_probs(std::vector<double> p, std::size_t n0,
                                           bool renormalize = false);
    static MomentumDistribution from_amplitudes(const std::vector<std::complex<double>>& amps,
                                                std::size_t n0);

    std::size_t size() const { return probs.size(); }
    // Circular displacement of level n about n0.
    double displacement(std::size_t n) const;
};

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};
Moments momentum_moments(const MomentumDistribution& dist);

struct WindowPolicy {
    bool automatic = true;
    std::size_t lo = 0;
    std::size_t hi = 0;

    // Two-pass tail selection: fit once over [16, N/2 - N/16] to estimate
    // l, refit over [2*l, N/2 - N/16].
    static WindowPolicy auto_window() { return {}; }
    static WindowPolicy explicit_window(std::size_t lo, std::size_t hi) {
        return {false, lo, hi};
    }
};

struct LocalizationFit {
    double l = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
    std::size_t window_lo = 0;
    std::size_t window_hi = 0;
    bool valid = false; // r^2 >= 0.9, >= 16 points, negative slope
};

// Least-squares line on ln P over both tails (|displacement| in the window);
// probability decays like exp(-2|n-m|/l), so l = -2/slope.
LocalizationFit localization_length_fit(const MomentumDistribution& dist,
                                        const WindowPolicy& policy);

// Inverse participation ratio 1 / sum P^2, in [1, N].
double ipr(const MomentumDistribution& dist);

struct Harmonic {
    std::size_t index = 0;
    std::complex<double> value;
    double magnitude = 0.0;
};

// The m largest-magnitude components of H_j = (1/N) sum_n P(n) e^{-2 pi i
// jn/N}, sorted by magnitude (ties broken by index).
std::vector<Harmonic> harmonics(const MomentumDistribution& dist, std::size_t m);

// Mean of the probability vectors (the stable envelope of a fluctuating
// localized distribution).
MomentumDistribution time_average(const std::vector<MomentumDistribution>& dists);

// Growth of a uniformly sampled variance series over the last half of the
// evolution: mean over the final quarter divided by mean over the third
// quarter. Localized dynamics breathes around 1 (instantaneous values
// fluctuate by factors of 2); diffusive growth gives 1.4.
double growth_ratio_last_half(const std::vector<double>& variance_series);

} // namespace kickrot::obs
