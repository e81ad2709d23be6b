#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace kickrot::circuit {

// Signed fixed-point number: two's complement, 2 integer bits + p fractional
// bits, representable range [-2, 2). This is the ancilla number format: wide
// enough for cos/sin values and for the intermediate sums of a planar
// rotation, with deterministic round-to-nearest-even so register contents are
// bit-reproducible.
class FixedPoint {
public:
    FixedPoint() : mant_(0), frac_bits_(0) {}

    static FixedPoint from_mantissa(std::int64_t mant, int frac_bits) {
        check_frac_bits(frac_bits);
        FixedPoint f;
        f.frac_bits_ = frac_bits;
        f.mant_ = mant;
        if (mant < f.min_mant() || mant > f.max_mant())
            throw std::overflow_error("FixedPoint: mantissa out of range");
        return f;
    }

    // Round-to-nearest-even conversion. Relies on the default FE_TONEAREST
    // mode of std::nearbyint.
    static FixedPoint from_real(double x, int frac_bits) {
        check_frac_bits(frac_bits);
        const double scaled = std::nearbyint(std::ldexp(x, frac_bits));
        FixedPoint f;
        f.frac_bits_ = frac_bits;
        if (scaled < static_cast<double>(f.min_mant()) ||
            scaled > static_cast<double>(f.max_mant()))
            throw std::overflow_error("FixedPoint: value outside [-2, 2)");
        f.mant_ = static_cast<std::int64_t>(scaled);
        return f;
    }

    double to_real() const { return std::ldexp(static_cast<double>(mant_), -frac_bits_); }

    std::int64_t mantissa() const { return mant_; }
    int frac_bits() const { return frac_bits_; }
    // Total register width: p fractional bits + 1 integer bit + sign bit.
    int width() const { return frac_bits_ + 2; }

    // Bit b of the two's-complement register, b = 0 the lowest fractional bit.
    bool bit(int b) const {
        if (b < 0 || b >= width()) throw std::out_of_range("FixedPoint::bit");
        return (static_cast<std::uint64_t>(mant_) >> b) & 1u;
    }

    // Two's-complement weight of bit b: the sign bit carries -2, the integer
    // bit +1, fractional bit b carries 2^{b-p}.
    double bit_weight(int b) const {
        if (b < 0 || b >= width()) throw std::out_of_range("FixedPoint::bit_weight");
        if (b == width() - 1) return -2.0;
        return std::ldexp(1.0, b - frac_bits_);
    }

    FixedPoint add(const FixedPoint& o) const {
        require_same_format(o);
        return from_mantissa(mant_ + o.mant_, frac_bits_);
    }

    FixedPoint sub(const FixedPoint& o) const {
        require_same_format(o);
        return from_mantissa(mant_ - o.mant_, frac_bits_);
    }

    FixedPoint negate() const { return from_mantissa(-mant_, frac_bits_); }

    bool operator==(const FixedPoint& o) const {
        return mant_ == o.mant_ && frac_bits_ == o.frac_bits_;
    }

    // Product rounded to nearest, ties to even. Uses 128-bit intermediates so
    // p up to 30 is exact.
    friend FixedPoint mul_rne(const FixedPoint& a, const FixedPoint& b) {
        a.require_same_format(b);
        const __int128 prod = static_cast<__int128>(a.mant_) * static_cast<__int128>(b.mant_);
        return from_mantissa(rshift_rne(prod, a.frac_bits_), a.frac_bits_);
    }

    // Mantissa after an arithmetic right shift with round-to-nearest-even.
    static std::int64_t rshift_rne(__int128 v, int shift) {
        if (shift == 0) return static_cast<std::int64_t>(v);
        __int128 fl = v >> shift;
        const __int128 rem = v - (fl << shift);
        const __int128 half = static_cast<__int128>(1) << (shift - 1);
        if (rem > half || (rem == half && (fl & 1))) fl += 1;
        return static_cast<std::int64_t>(fl);
    }

private:
    static void check_frac_bits(int p) {
        if (p < 1 || p > 40) throw std::invalid_argument("FixedPoint: frac_bits must be in [1, 40]");
    }
    void require_same_format(const FixedPoint& o) const {
        if (frac_bits_ != o.frac_bits_)
            throw std::invalid_argument("FixedPoint: mixed formats");
    }
    std::int64_t min_mant() const { return -(std::int64_t(1) << (frac_bits_ + 1)); }
    std::int64_t max_mant() const { return (std::int64_t(1) << (frac_bits_ + 1)) - 1; }

    std::int64_t mant_;
    int frac_bits_;
};

} // namespace kickrot::circuit
