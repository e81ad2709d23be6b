#include "kickrot/fft.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace kickrot::fft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Plan {
    std::vector<std::size_t> bitrev;
    cvec twiddle_plus; // exp(+2*pi*I*j/N) for j < N/2
};

const Plan& plan_for(std::size_t n) {
    static std::unordered_map<std::size_t, Plan> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    Plan p;
    p.bitrev.resize(n);
    int log2n = 0;
    while ((std::size_t(1) << log2n) < n) ++log2n;
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < log2n; ++b)
            if (i & (std::size_t(1) << b)) r |= std::size_t(1) << (log2n - 1 - b);
        p.bitrev[i] = r;
    }
    p.twiddle_plus.resize(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
        p.twiddle_plus[j] = {std::cos(ang), std::sin(ang)};
    }
    return cache.emplace(n, std::move(p)).first->second;
}

void transform(cvec& a, bool plus) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: size must be a power of two");
    if (n == 1) return;

    const Plan& plan = plan_for(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = plan.bitrev[i];
        if (i < r) std::swap(a[i], a[r]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t base = 0; base < n; base += len) {
            for (std::size_t j = 0; j < half; ++j) {
                std::complex<double> w = plan.twiddle_plus[j * stride];
                if (!plus) w = std::conj(w);
                const auto u = a[base + j];
                const auto v = a[base + j + half] * w;
                a[base + j] = u + v;
                a[base + j + half] = u - v;
            }
        }
    }
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& x : a) x *= scale;
}

} // namespace

void transform_plus(cvec& a) { transform(a, true); }
void transform_minus(cvec& a) { transform(a, false); }

} // namespace kickrot::fft
