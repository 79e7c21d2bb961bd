#include "bsdsp/bsm.hpp"

#include <string>

namespace bsdsp {

SliceParams::SliceParams(int total, int slice, int count)
    : total_bits(total), slice_bits(slice), slice_count(count) {
    if (slice < 1 || count < 1)
        throw ArgumentError("slice geometry: slice_bits and slice_count must be positive");
    if (total != slice * count)
        throw ArgumentError("slice geometry: total_bits (" + std::to_string(total) +
                            ") != slice_bits * slice_count (" + std::to_string(slice * count) + ")");
    if (total > 32)
        throw ArgumentError("slice geometry: total_bits above 32 is not supported");
}

uint64_t SliceVector::reassemble() const {
    uint64_t v = 0;
    for (size_t k = 0; k < slices.size(); ++k)
        v |= static_cast<uint64_t>(slices[k]) << (params.slice_bits * k);
    return v;
}

SliceVector slice(uint64_t x, SliceParams params) {
    if (params.total_bits < 64 && (x >> params.total_bits) != 0)
        throw ArgumentError("slice: operand does not fit " +
                            std::to_string(params.total_bits) + " bits");
    SliceVector out{{}, params};
    out.slices.reserve(params.slice_count);
    uint32_t mask = (uint32_t{1} << params.slice_bits) - 1;
    for (int k = 0; k < params.slice_count; ++k)
        out.slices.push_back(static_cast<uint32_t>(x >> (params.slice_bits * k)) & mask);
    return out;
}

LutBank::LutBank(SliceParams params) : params_(params) {
    if (params.slice_bits > 8)
        throw ArgumentError("lut bank: slice_bits above 8 would need a table larger than 2^16");
    size_t side = size_t{1} << params.slice_bits;
    std::vector<uint32_t> contents(side * side);
    for (uint32_t a = 0; a < side; ++a)
        for (uint32_t b = 0; b < side; ++b)
            contents[(a << params.slice_bits) | b] = a * b;
    tables_.assign(static_cast<size_t>(table_count()), contents);
}

const std::vector<uint32_t>& LutBank::table(int i, int k) const {
    if (i < 0 || i >= params_.slice_count || k < 0 || k >= params_.slice_count)
        throw ArgumentError("lut bank: table index outside the slice grid");
    return table_at(i, k);
}

LutBank build_lut_bank(SliceParams params) { return LutBank(params); }

BsmProduct bsm_mul_unsigned(uint64_t x, uint64_t y, const LutBank& bank) {
    const SliceParams& p = bank.params();
    SliceVector xs = slice(x, p);
    SliceVector ys = slice(y, p);
    BsmProduct out{0, {}, p};
    out.partials.resize(static_cast<size_t>(p.slice_count) * p.slice_count);
    for (int i = 0; i < p.slice_count; ++i) {
        for (int k = 0; k < p.slice_count; ++k) {
            uint64_t partial = static_cast<uint64_t>(bank.lookup(i, k, xs.slices[i], ys.slices[k]))
                               << (p.slice_bits * (i + k));
            out.partials[static_cast<size_t>(i) * p.slice_count + k] = partial;
            out.value += partial;
        }
    }
    return out;
}

FixedWord bsm_mul_signed(const FixedWord& x, const FixedWord& y, const LutBank& bank) {
    if (x.fmt().total_bits != 16 || y.fmt().total_bits != 16)
        throw FormatError("bsm_mul_signed: operands must be 16-bit words");
    if (bank.params().total_bits != 16)
        throw ArgumentError("bsm_mul_signed: bank is not a 16-bit bank");
    // Magnitudes: |-32768| = 32768 needs an extra bit beyond int16, but it is
    // still below 2^16 and therefore a legal unsigned operand.
    uint64_t ux = static_cast<uint64_t>(x.raw() < 0 ? -x.raw() : x.raw());
    uint64_t uy = static_cast<uint64_t>(y.raw() < 0 ? -y.raw() : y.raw());
    uint64_t mag = bsm_mul_unsigned(ux, uy, bank).value;
    int64_t value = static_cast<int64_t>(mag);
    if ((x.raw() < 0) != (y.raw() < 0)) value = -value;
    Format out(32, x.fmt().frac_bits + y.fmt().frac_bits);
    return FixedWord(value, out);
}

const LutBank& lut_bank_16x16() {
    static const LutBank bank(SliceParams(16, 4, 4));
    return bank;
}

} // namespace bsdsp
