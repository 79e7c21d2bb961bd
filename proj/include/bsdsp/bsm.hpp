#pragma once

#include <cstdint>
#include <vector>

#include "bsdsp/fixedpoint.hpp"

namespace bsdsp {

// Geometry of the slicing multiplier: a total_bits operand is cut into
// slice_count little-endian slices of slice_bits each, so
// total_bits == slice_bits * slice_count. Totals are capped at 32 bits so
// products and shifted partials stay inside uint64.
struct SliceParams {
    int total_bits;  // width of one unsigned operand
    int slice_bits;  // width of one slice
    int slice_count; // slices per operand

    SliceParams(int total, int slice, int count);

    friend bool operator==(const SliceParams&, const SliceParams&) = default;
};

// Little-endian slice decomposition: slices[k] holds bits
// [k*slice_bits, (k+1)*slice_bits) of the operand.
struct SliceVector {
    std::vector<uint32_t> slices;
    SliceParams params;

    uint64_t reassemble() const;
};

SliceVector slice(uint64_t x, SliceParams params);

// slice_count^2 product tables, one per (operand-slice, operand-slice) pair,
// each mapping (a, b) with a, b < 2^slice_bits to the exact 2*slice_bits
// product. All tables are materialized at construction, ROM style: a lookup
// never multiplies. The tables carry identical contents; keeping one per
// slice pair mirrors a fully parallel bank where every pair owns its ROM.
class LutBank {
public:
    explicit LutBank(SliceParams params); // ArgumentError if slice_bits > 8

    const SliceParams& params() const { return params_; }
    int table_count() const { return params_.slice_count * params_.slice_count; }
    const std::vector<uint32_t>& table(int i, int k) const;

    uint32_t lookup(int i, int k, uint32_t a, uint32_t b) const {
        return table_at(i, k)[(a << params_.slice_bits) | b];
    }

private:
    const std::vector<uint32_t>& table_at(int i, int k) const {
        return tables_[static_cast<size_t>(i) * params_.slice_count + k];
    }

    SliceParams params_;
    std::vector<std::vector<uint32_t>> tables_;
};

LutBank build_lut_bank(SliceParams params);

// An unsigned product together with the shifted partials that summed to it:
// partials[i*t + k] = lut(x_slice[i], y_slice[k]) << (slice_bits*(i+k)).
struct BsmProduct {
    uint64_t value;
    std::vector<uint64_t> partials;
    SliceParams params;
};

// Exact unsigned multiply assembled purely from table lookups, shifts and
// adds. Operands must be below 2^total_bits.
BsmProduct bsm_mul_unsigned(uint64_t x, uint64_t y, const LutBank& bank);

// Signed 16x16 multiply as a sign-magnitude wrapper around the unsigned
// core: |x|*|y| through the bank, product negated when signs differ. The
// magnitude of -32768 still fits the 16-bit unsigned slicer, so the full
// int16 range is exact. Result format is {32, x.frac + y.frac}.
FixedWord bsm_mul_signed(const FixedWord& x, const FixedWord& y, const LutBank& bank);

// Process-wide immutable bank for the default 16-bit configuration
// (16 = 4 bits x 4 slices, 16 tables). LutBank is immutable after
// construction, so sharing one instance is safe.
const LutBank& lut_bank_16x16();

} // namespace bsdsp
