#pragma once

#include "kickrot/fixed_point.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace kickrot::circuit {

// Dense simulates every qubit of primary + the two data registers explicitly.
// CorrelatedAncilla stores amplitudes over the primary register only and
// carries each ancilla register as a deterministic fixed-point value per
// primary basis index. That is exact for this algorithm: ancillas are only
// driven through basis-conditioned reversible arithmetic, so they never hold
// a superposition conditioned on a fixed primary basis state.
enum class Representation { Dense, CorrelatedAncilla };

// The two simulated fixed-point data registers. Cosine mode uses A = cos,
// B = sin; the polynomial variant uses A = accumulator, B = power.
enum class RegId { Primary, A, B };

enum class FourierDirection { Forward, Inverse };

struct RegisterLayout {
    int n_q = 1; // primary qubits
    int p = 4;   // fractional bits per fixed-point register
    std::string reg_a_name = "cos";
    std::string reg_b_name = "sin";

    // Each fixed-point register carries p fractional bits plus an integer and
    // a sign bit.
    int register_width() const { return p + 2; }
    // Full hardware budget: primary plus five p-bit registers (two data
    // registers and three scratch registers consumed inside the arithmetic
    // blocks, which the simulator models implicitly).
    std::int64_t total_qubit_budget() const { return n_q + 5LL * register_width(); }
    // The recommended precision range; outside it callers get a warning, not
    // an error.
    bool precision_in_recommended_range() const { return p >= n_q && p <= 2 * n_q; }
    void validate() const;
};

struct GateCounts {
    std::int64_t one_qubit = 0;
    std::int64_t two_qubit = 0;
    std::int64_t arithmetic_blocks = 0;
    // Elementary-gate estimate: 1 per one/two-qubit gate, plus the per-block
    // multiplier accounting below.
    std::int64_t elementary_estimate = 0;

    GateCounts& operator+=(const GateCounts& o);
};

// Per-step gate counters. Counters are only ever incremented.
class GateLedger {
public:
    // A planar rotation block runs 4 controlled multipliers (p^2 elementary
    // gates each) plus two p-bit additions.
    static std::int64_t rotation_block_cost(int p) { return 4LL * p * p + 2LL * p; }
    // A polynomial degree transition runs 2 multipliers plus one addition.
    static std::int64_t poly_block_cost(int p) { return 2LL * p * p + static_cast<std::int64_t>(p); }

    void set_step(std::string name) { current_ = std::move(name); }
    const std::string& current_step() const { return current_; }

    void count_one_qubit(std::int64_t n = 1);
    void count_two_qubit(std::int64_t n = 1);
    void count_arith_block(std::int64_t elementary_cost, std::int64_t n = 1);

    GateCounts total() const;
    const std::map<std::string, GateCounts>& steps() const { return steps_; }

private:
    std::map<std::string, GateCounts> steps_;
    std::string current_ = "init";
};

class CircuitState {
public:
    CircuitState(const RegisterLayout& layout, Representation rep);

    Representation representation() const { return rep_; }
    const RegisterLayout& layout() const { return layout_; }
    std::size_t primary_dim() const { return std::size_t(1) << layout_.n_q; }

    // Raw initializers (no gates counted): reset to |i>|0>|0> or to the given
    // primary amplitudes with zeroed ancillas.
    void set_primary_basis(std::size_t i);
    void set_primary_amplitudes(const std::vector<std::complex<double>>& amps);

    // --- gates ---
    // e^{i phi} on every basis state whose addressed bit is set.
    void apply_phase(RegId reg, int bit, double phi);
    void apply_x(RegId reg, int bit);
    // Primary-register pair phase: e^{i phi} where both bits are set. j1 != j2
    // (the diagonal case belongs to apply_phase).
    void apply_controlled_phase(int j1, int j2, double phi);
    // Gate-level QFT over the primary register, matching the project-wide
    // Fourier kernel (Forward: momentum -> angle with the e^{+2 pi i in/N}
    // kernel) including the final swap network.
    void apply_qft(FourierDirection dir);

    // --- reversible fixed-point arithmetic blocks ---
    // X gates on every set bit of v (the register must currently be zero for
    // the result to equal v).
    void init_ancilla_constant(RegId reg, const FixedPoint& v);
    // Where the primary control bit is 1:
    //   (a, b) <- (a cos - b sin, a sin + b cos), round-to-nearest-even per
    // multiply. Unit vectors stay in range; overflow throws.
    void controlled_rotation(int control_qubit, const FixedPoint& cos_a, const FixedPoint& sin_a);
    // One polynomial degree transition: B <- rne(B * x_i), A <- A + rne(coeff
    // * B). x_mantissa supplies the fixed-point value of the mapped angle per
    // primary basis index.
    void poly_mac_step(const FixedPoint& coeff, const std::vector<std::int64_t>& x_mantissa);

    // Arithmetic performed between begin_uncompute_scope() and
    // uncompute_ancillas() is journaled; uncompute_ancillas() restores the
    // ancilla registers exactly (running the reversible sequence backwards)
    // and charges the mirrored gate counts to the current ledger step.
    void begin_uncompute_scope();
    void uncompute_ancillas();

    // --- inspection ---
    double norm() const;
    std::complex<double> primary_amplitude(std::size_t i) const;
    std::vector<std::complex<double>> primary_amplitudes() const;
    std::vector<double> momentum_probabilities() const;
    // Mantissa of the addressed register for primary basis index i.
    std::int64_t ancilla_mantissa(RegId reg, std::size_t i) const;
    bool ancillas_zero() const;

    GateLedger& ledger() { return ledger_; }
    const GateLedger& ledger() const { return ledger_; }

    // Optional line-per-gate debug trace.
    void set_trace(std::ostream* sink) { trace_ = sink; }

private:
    struct ArithOp {
        std::int64_t one_qubit = 0;
        std::int64_t arith_blocks = 0;
        std::int64_t elementary = 0;
        std::vector<std::pair<std::uint64_t, std::uint64_t>> moves; // Dense only
    };

    // (a, b) -> (a', b') mantissa update of one arithmetic block, evaluated at
    // primary basis index i; returns false where the block leaves the pair
    // untouched.
    using ArithFn = std::function<bool(std::size_t i, std::int64_t& a, std::int64_t& b)>;

    std::size_t total_dim() const { return amps_.size(); }
    int reg_base(RegId reg) const; // Dense global bit offset
    void trace(const std::string& line) const;
    void apply_hadamard(int primary_bit);
    void apply_swap(int j1, int j2);
    void require_uniform_ancillas(const char* what) const;
    std::int64_t sign_extend(std::uint64_t raw) const;
    std::uint64_t field_mask() const;
    void apply_arith_block(const ArithFn& fn, std::int64_t arith_blocks, std::int64_t one_qubit,
                           std::int64_t elementary, const char* what);

    Representation rep_;
    RegisterLayout layout_;
    GateLedger ledger_;
    std::ostream* trace_ = nullptr;

    // Dense: size 2^{n_q + 2(p+2)}; CorrelatedAncilla: size 2^{n_q}.
    std::vector<std::complex<double>> amps_;
    // CorrelatedAncilla only: mantissa per primary index for registers A, B.
    std::array<std::vector<std::int64_t>, 2> vals_;

    bool scope_active_ = false;
    std::array<std::vector<std::int64_t>, 2> scope_saved_vals_;
    std::vector<ArithOp> scope_ops_;
};

} // namespace kickrot::circuit
