#include "kickrot/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace kickrot::circuit {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;
constexpr double kInvSqrt2 = 0.70710678118654752440084436210485;
// Dense mode keeps the full tensor product in memory; cap the vector size.
constexpr int kDenseQubitCap = 26;
} // namespace

void RegisterLayout::validate() const {
    if (n_q < 1 || n_q > 30) throw std::invalid_argument("RegisterLayout: n_q out of range");
    if (p < 1 || p > 40) throw std::invalid_argument("RegisterLayout: p out of range");
}

GateCounts& GateCounts::operator+=(const GateCounts& o) {
    one_qubit += o.one_qubit;
    two_qubit += o.two_qubit;
    arithmetic_blocks += o.arithmetic_blocks;
    elementary_estimate += o.elementary_estimate;
    return *this;
}

void GateLedger::count_one_qubit(std::int64_t n) {
    auto& c = steps_[current_];
    c.one_qubit += n;
    c.elementary_estimate += n;
}

void GateLedger::count_two_qubit(std::int64_t n) {
    auto& c = steps_[current_];
    c.two_qubit += n;
    c.elementary_estimate += n;
}

void GateLedger::count_arith_block(std::int64_t elementary_cost, std::int64_t n) {
    auto& c = steps_[current_];
    c.arithmetic_blocks += n;
    c.elementary_estimate += n * elementary_cost;
}

GateCounts GateLedger::total() const {
    GateCounts t;
    for (const auto& [name, counts] : steps_) t += counts;
    return t;
}

CircuitState::CircuitState(const RegisterLayout& layout, Representation rep)
    : rep_(rep), layout_(layout) {
    layout_.validate();
    if (rep_ == Representation::Dense) {
        const int total = layout_.n_q + 2 * layout_.register_width();
        if (total > kDenseQubitCap)
            throw std::invalid_argument("CircuitState: dense representation limited to " +
                                        std::to_string(kDenseQubitCap) + " qubits");
        amps_.assign(std::size_t(1) << total, {0.0, 0.0});
    } else {
        if (layout_.n_q > 24)
            throw std::invalid_argument("CircuitState: correlated-ancilla representation limited to 24 primary qubits");
        amps_.assign(primary_dim(), {0.0, 0.0});
        vals_[0].assign(primary_dim(), 0);
        vals_[1].assign(primary_dim(), 0);
    }
    amps_[0] = {1.0, 0.0};
}

int CircuitState::reg_base(RegId reg) const {
    switch (reg) {
        case RegId::Primary: return 0;
        case RegId::A: return layout_.n_q;
        case RegId::B: return layout_.n_q + layout_.register_width();
    }
    throw std::logic_error("reg_base: unreachable");
}

std::uint64_t CircuitState::field_mask() const {
    return (std::uint64_t(1) << layout_.register_width()) - 1;
}

std::int64_t CircuitState::sign_extend(std::uint64_t raw) const {
    const int w = layout_.register_width();
    const std::uint64_t sign_bit = std::uint64_t(1) << (w - 1);
    if (raw & sign_bit) return static_cast<std::int64_t>(raw | ~field_mask());
    return static_cast<std::int64_t>(raw);
}

void CircuitState::trace(const std::string& line) const {
    if (trace_) (*trace_) << line << '\n';
}

void CircuitState::set_primary_basis(std::size_t i) {
    if (i >= primary_dim()) throw std::invalid_argument("set_primary_basis: index out of range");
    std::fill(amps_.begin(), amps_.end(), std::complex<double>{0.0, 0.0});
    amps_[i] = {1.0, 0.0};
    for (auto& v : vals_) std::fill(v.begin(), v.end(), 0);
}

void CircuitState::set_primary_amplitudes(const std::vector<std::complex<double>>& amps) {
    if (amps.size() != primary_dim())
        throw std::invalid_argument("set_primary_amplitudes: size mismatch");
    double n2 = 0.0;
    for (const auto& a : amps) n2 += std::norm(a);
    if (std::abs(n2 - 1.0) > 1e-9)
        throw std::invalid_argument("set_primary_amplitudes: amplitude list not normalized");
    std::fill(amps_.begin(), amps_.end(), std::complex<double>{0.0, 0.0});
    for (std::size_t i = 0; i < amps.size(); ++i) amps_[i] = amps[i];
    for (auto& v : vals_) std::fill(v.begin(), v.end(), 0);
}

void CircuitState::apply_phase(RegId reg, int bit, double phi) {
    const int width = reg == RegId::Primary ? layout_.n_q : layout_.register_width();
    if (bit < 0 || bit >= width) throw std::invalid_argument("apply_phase: bit out of range");
    const std::complex<double> ph = std::polar(1.0, phi);

    if (reg == RegId::Primary || rep_ == Representation::Dense) {
        const std::size_t mask = std::size_t(1) << (reg_base(reg) + bit);
        for (std::size_t idx = 0; idx < total_dim(); ++idx)
            if (idx & mask) amps_[idx] *= ph;
    } else {
        const auto& v = vals_[reg == RegId::A ? 0 : 1];
        for (std::size_t i = 0; i < amps_.size(); ++i)
            if ((static_cast<std::uint64_t>(v[i]) >> bit) & 1u) amps_[i] *= ph;
    }
    ledger_.count_one_qubit();
    if (trace_) {
        std::ostringstream os;
        os << "PHASE reg=" << static_cast<int>(reg) << " bit=" << bit << " phi=" << phi;
        trace(os.str());
    }
}

void CircuitState::apply_x(RegId reg, int bit) {
    const int width = reg == RegId::Primary ? layout_.n_q : layout_.register_width();
    if (bit < 0 || bit >= width) throw std::invalid_argument("apply_x: bit out of range");
    if (reg == RegId::Primary && scope_active_)
        throw std::logic_error("apply_x: primary register frozen inside an uncompute scope");

    if (reg == RegId::Primary || rep_ == Representation::Dense) {
        const std::size_t mask = std::size_t(1) << (reg_base(reg) + bit);
        ArithOp op;
        const bool journal = scope_active_ && reg != RegId::Primary;
        for (std::size_t idx = 0; idx < total_dim(); ++idx) {
            if (idx & mask) continue;
            std::swap(amps_[idx], amps_[idx | mask]);
            if (journal) {
                if (amps_[idx] != std::complex<double>{0.0, 0.0}) op.moves.emplace_back(idx | mask, idx);
                if (amps_[idx | mask] != std::complex<double>{0.0, 0.0}) op.moves.emplace_back(idx, idx | mask);
            }
        }
        if (reg == RegId::Primary && rep_ == Representation::CorrelatedAncilla) {
            for (auto& v : vals_)
                for (std::size_t idx = 0; idx < v.size(); ++idx)
                    if (!(idx & mask)) std::swap(v[idx], v[idx | mask]);
        }
        if (journal) {
            op.one_qubit = 1;
            op.elementary = 1;
            scope_ops_.push_back(std::move(op));
        }
    } else {
        auto& v = vals_[reg == RegId::A ? 0 : 1];
        const std::uint64_t flip = std::uint64_t(1) << bit;
        for (auto& m : v) m = sign_extend((static_cast<std::uint64_t>(m) ^ flip) & field_mask());
        if (scope_active_) {
            ArithOp op;
            op.one_qubit = 1;
            op.elementary = 1;
            scope_ops_.push_back(std::move(op));
        }
    }
    ledger_.count_one_qubit();
    if (trace_) {
        std::ostringstream os;
        os << "X reg=" << static_cast<int>(reg) << " bit=" << bit;
        trace(os.str());
    }
}

void CircuitState::apply_controlled_phase(int j1, int j2, double phi) {
    if (j1 == j2) throw std::invalid_argument("apply_controlled_phase: j1 == j2");
    if (j1 < 0 || j1 >= layout_.n_q || j2 < 0 || j2 >= layout_.n_q)
        throw std::invalid_argument("apply_controlled_phase: bit out of range");
    const std::size_t mask = (std::size_t(1) << j1) | (std::size_t(1) << j2);
    const std::complex<double> ph = std::polar(1.0, phi);
    for (std::size_t idx = 0; idx < total_dim(); ++idx)
        if ((idx & mask) == mask) amps_[idx] *= ph;
    ledger_.count_two_qubit();
    if (trace_) {
        std::ostringstream os;
        os << "CPHASE q1=" << j1 << " q2=" << j2 << " phi=" << phi;
        trace(os.str());
    }
}

void CircuitState::apply_hadamard(int primary_bit) {
    const std::size_t mask = std::size_t(1) << primary_bit;
    for (std::size_t idx = 0; idx < total_dim(); ++idx) {
        if (idx & mask) continue;
        const auto a0 = amps_[idx];
        const auto a1 = amps_[idx | mask];
        amps_[idx] = (a0 + a1) * kInvSqrt2;
        amps_[idx | mask] = (a0 - a1) * kInvSqrt2;
    }
    ledger_.count_one_qubit();
    if (trace_) {
        std::ostringstream os;
        os << "H q=" << primary_bit;
        trace(os.str());
    }
}

void CircuitState::apply_swap(int j1, int j2) {
    const std::size_t m1 = std::size_t(1) << j1;
    const std::size_t m2 = std::size_t(1) << j2;
    for (std::size_t idx = 0; idx < total_dim(); ++idx) {
        if ((idx & m1) && !(idx & m2)) {
            const std::size_t partner = (idx & ~m1) | m2;
            std::swap(amps_[idx], amps_[partner]);
        }
    }
    if (rep_ == Representation::CorrelatedAncilla) {
        for (auto& v : vals_) {
            for (std::size_t idx = 0; idx < v.size(); ++idx)
                if ((idx & m1) && !(idx & m2)) std::swap(v[idx], v[(idx & ~m1) | m2]);
        }
    }
    ledger_.count_two_qubit();
    if (trace_) {
        std::ostringstream os;
        os << "SWAP q1=" << j1 << " q2=" << j2;
        trace(os.str());
    }
}

void CircuitState::require_uniform_ancillas(const char* what) const {
    if (rep_ != Representation::CorrelatedAncilla) return;
    for (const auto& v : vals_) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] != v[0])
                throw std::logic_error(std::string(what) +
                                       ": ancilla registers are correlated with the primary index");
    }
}

void CircuitState::apply_qft(FourierDirection dir) {
    // Superposing gates act on the primary register only; in the correlated
    // representation that is legal only while ancillas carry no
    // index-dependent data.
    require_uniform_ancillas("apply_qft");
    if (scope_active_) throw std::logic_error("apply_qft: primary register frozen inside an uncompute scope");
    const int n = layout_.n_q;
    if (dir == FourierDirection::Forward) {
        for (int j = n - 1; j >= 0; --j) {
            apply_hadamard(j);
            for (int m = j - 1; m >= 0; --m)
                apply_controlled_phase(m, j, kPi / static_cast<double>(std::size_t(1) << (j - m)));
        }
        for (int j = 0; j < n / 2; ++j) apply_swap(j, n - 1 - j);
    } else {
        for (int j = 0; j < n / 2; ++j) apply_swap(j, n - 1 - j);
        for (int j = 0; j < n; ++j) {
            for (int m = 0; m < j; ++m)
                apply_controlled_phase(m, j, -kPi / static_cast<double>(std::size_t(1) << (j - m)));
            apply_hadamard(j);
        }
    }
}

void CircuitState::begin_uncompute_scope() {
    if (scope_active_) throw std::logic_error("begin_uncompute_scope: scope already open");
    scope_active_ = true;
    scope_ops_.clear();
    if (rep_ == Representation::CorrelatedAncilla) scope_saved_vals_ = vals_;
}

void CircuitState::init_ancilla_constant(RegId reg, const FixedPoint& v) {
    if (reg == RegId::Primary) throw std::invalid_argument("init_ancilla_constant: not an ancilla");
    if (v.frac_bits() != layout_.p) throw std::invalid_argument("init_ancilla_constant: format mismatch");
    const std::uint64_t raw = static_cast<std::uint64_t>(v.mantissa()) & field_mask();
    for (int b = 0; b < layout_.register_width(); ++b)
        if ((raw >> b) & 1u) apply_x(reg, b);
}

void CircuitState::apply_arith_block(const ArithFn& fn, std::int64_t arith_blocks,
                                     std::int64_t one_qubit, std::int64_t elementary,
                                     const char* what) {
    ArithOp op;
    op.arith_blocks = arith_blocks;
    op.one_qubit = one_qubit;
    op.elementary = elementary;

    if (rep_ == Representation::CorrelatedAncilla) {
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            std::int64_t a = vals_[0][i];
            std::int64_t b = vals_[1][i];
            if (fn(i, a, b)) {
                vals_[0][i] = a;
                vals_[1][i] = b;
            }
        }
    } else {
        const int wa = reg_base(RegId::A);
        const int wb = reg_base(RegId::B);
        const std::size_t pmask = primary_dim() - 1;
        // Gather populated sources, compute destinations, then move
        // amplitudes in two passes so overlapping source/destination slots
        // stay consistent.
        std::vector<std::pair<std::uint64_t, std::uint64_t>> moves;
        for (std::size_t idx = 0; idx < total_dim(); ++idx) {
            if (amps_[idx] == std::complex<double>{0.0, 0.0}) continue;
            const std::size_t i = idx & pmask;
            std::int64_t a = sign_extend((idx >> wa) & field_mask());
            std::int64_t b = sign_extend((idx >> wb) & field_mask());
            if (!fn(i, a, b)) continue;
            const std::uint64_t dst = i |
                ((static_cast<std::uint64_t>(a) & field_mask()) << wa) |
                ((static_cast<std::uint64_t>(b) & field_mask()) << wb);
            if (dst != idx) moves.emplace_back(idx, dst);
        }
        std::vector<std::complex<double>> staged(moves.size());
        for (std::size_t m = 0; m < moves.size(); ++m) {
            staged[m] = amps_[moves[m].first];
            amps_[moves[m].first] = {0.0, 0.0};
        }
        for (std::size_t m = 0; m < moves.size(); ++m) {
            if (amps_[moves[m].second] != std::complex<double>{0.0, 0.0})
                throw std::logic_error(std::string(what) +
                                       ": block is not injective on the populated basis states");
            amps_[moves[m].second] = staged[m];
        }
        op.moves = std::move(moves);
    }

    ledger_.count_arith_block(elementary, arith_blocks);
    if (one_qubit) ledger_.count_one_qubit(one_qubit);
    if (scope_active_) scope_ops_.push_back(std::move(op));
    trace(what);
}

void CircuitState::controlled_rotation(int control_qubit, const FixedPoint& cos_a,
                                       const FixedPoint& sin_a) {
    if (control_qubit < 0 || control_qubit >= layout_.n_q)
        throw std::invalid_argument("controlled_rotation: control qubit out of range");
    if (cos_a.frac_bits() != layout_.p || sin_a.frac_bits() != layout_.p)
        throw std::invalid_argument("controlled_rotation: table format mismatch");
    const std::size_t cmask = std::size_t(1) << control_qubit;
    const int p = layout_.p;

    auto fn = [cmask, cos_a, sin_a, p](std::size_t i, std::int64_t& a, std::int64_t& b) {
        if (!(i & cmask)) return false;
        const FixedPoint fa = FixedPoint::from_mantissa(a, p);
        const FixedPoint fb = FixedPoint::from_mantissa(b, p);
        const FixedPoint na = mul_rne(fa, cos_a).sub(mul_rne(fb, sin_a));
        const FixedPoint nb = mul_rne(fa, sin_a).add(mul_rne(fb, cos_a));
        a = na.mantissa();
        b = nb.mantissa();
        return true;
    };
    apply_arith_block(fn, 1, 0, GateLedger::rotation_block_cost(p), "ROT");
}

void CircuitState::poly_mac_step(const FixedPoint& coeff,
                                 const std::vector<std::int64_t>& x_mantissa) {
    if (coeff.frac_bits() != layout_.p) throw std::invalid_argument("poly_mac_step: format mismatch");
    if (x_mantissa.size() != primary_dim())
        throw std::invalid_argument("poly_mac_step: x table size mismatch");
    const int p = layout_.p;

    auto fn = [&coeff, &x_mantissa, p](std::size_t i, std::int64_t& a, std::int64_t& b) {
        const FixedPoint x = FixedPoint::from_mantissa(x_mantissa[i], p);
        const FixedPoint power = mul_rne(FixedPoint::from_mantissa(b, p), x);
        const FixedPoint acc = FixedPoint::from_mantissa(a, p).add(mul_rne(coeff, power));
        a = acc.mantissa();
        b = power.mantissa();
        return true;
    };
    apply_arith_block(fn, 1, 0, GateLedger::poly_block_cost(p), "POLYMAC");
}

void CircuitState::uncompute_ancillas() {
    if (!scope_active_) throw std::logic_error("uncompute_ancillas: no open scope");

    if (rep_ == Representation::CorrelatedAncilla) {
        vals_ = scope_saved_vals_;
    } else {
        for (auto it = scope_ops_.rbegin(); it != scope_ops_.rend(); ++it) {
            std::vector<std::complex<double>> staged(it->moves.size());
            for (std::size_t m = 0; m < it->moves.size(); ++m) {
                staged[m] = amps_[it->moves[m].second];
                amps_[it->moves[m].second] = {0.0, 0.0};
            }
            for (std::size_t m = 0; m < it->moves.size(); ++m) amps_[it->moves[m].first] = staged[m];
        }
    }
    // The reversed sequence costs exactly what the forward one did.
    for (auto it = scope_ops_.rbegin(); it != scope_ops_.rend(); ++it) {
        if (it->arith_blocks)
            ledger_.count_arith_block(it->elementary / it->arith_blocks, it->arith_blocks);
        else if (it->one_qubit)
            ledger_.count_one_qubit(it->one_qubit);
    }
    scope_active_ = false;
    scope_ops_.clear();
    trace("UNCOMPUTE");
}

double CircuitState::norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
}

std::vector<std::complex<double>> CircuitState::primary_amplitudes() const {
    if (rep_ == Representation::CorrelatedAncilla) return amps_;
    std::vector<std::complex<double>> out(primary_dim(), {0.0, 0.0});
    std::vector<std::int64_t> cfg(primary_dim(), -1);
    const std::size_t pmask = primary_dim() - 1;
    for (std::size_t idx = 0; idx < total_dim(); ++idx) {
        if (amps_[idx] == std::complex<double>{0.0, 0.0}) continue;
        const std::size_t i = idx & pmask;
        const std::int64_t anc = static_cast<std::int64_t>(idx >> layout_.n_q);
        if (cfg[i] >= 0 && cfg[i] != anc)
            throw std::logic_error("primary_amplitudes: ancillas entangled with the primary register");
        cfg[i] = anc;
        out[i] = amps_[idx];
    }
    return out;
}

std::complex<double> CircuitState::primary_amplitude(std::size_t i) const {
    if (i >= primary_dim()) throw std::invalid_argument("primary_amplitude: index out of range");
    if (rep_ == Representation::CorrelatedAncilla) return amps_[i];
    std::complex<double> found = {0.0, 0.0};
    bool have = false;
    for (std::size_t idx = i; idx < total_dim(); idx += primary_dim()) {
        if (amps_[idx] == std::complex<double>{0.0, 0.0}) continue;
        if (have) throw std::logic_error("primary_amplitude: ancillas entangled with the primary register");
        found = amps_[idx];
        have = true;
    }
    return found;
}

std::vector<double> CircuitState::momentum_probabilities() const {
    std::vector<double> probs(primary_dim(), 0.0);
    const std::size_t pmask = primary_dim() - 1;
    for (std::size_t idx = 0; idx < total_dim(); ++idx) probs[idx & pmask] += std::norm(amps_[idx]);
    return probs;
}

std::int64_t CircuitState::ancilla_mantissa(RegId reg, std::size_t i) const {
    if (reg == RegId::Primary) throw std::invalid_argument("ancilla_mantissa: not an ancilla");
    if (i >= primary_dim()) throw std::invalid_argument("ancilla_mantissa: index out of range");
    if (rep_ == Representation::CorrelatedAncilla) return vals_[reg == RegId::A ? 0 : 1][i];

    const int base = reg_base(reg);
    bool have = false;
    std::int64_t value = 0;
    for (std::size_t idx = i; idx < total_dim(); idx += primary_dim()) {
        if (amps_[idx] == std::complex<double>{0.0, 0.0}) continue;
        const std::int64_t m = sign_extend((idx >> base) & field_mask());
        if (have && m != value)
            throw std::logic_error("ancilla_mantissa: register superposed for this basis index");
        value = m;
        have = true;
    }
    return value;
}

bool CircuitState::ancillas_zero() const {
    if (rep_ == Representation::CorrelatedAncilla) {
        for (const auto& v : vals_)
            for (std::int64_t m : v)
                if (m != 0) return false;
        return true;
    }
    for (std::size_t idx = primary_dim(); idx < total_dim(); ++idx)
        if (amps_[idx] != std::complex<double>{0.0, 0.0}) return false;
    return true;
}

} // namespace kickrot::circuit
