#include "bsdsp/fixedpoint.hpp"

#include <cmath>
#include <string>

namespace bsdsp {

// Internal factory used by the operations below; bypasses nothing, the
// checked constructor still runs.
FixedWord detail_make_with_flag(int64_t raw, Format fmt, bool saturated) {
    return FixedWord::with_flag(raw, fmt, saturated);
}

namespace {

// Exact for the magnitudes we deal with: x and floor(x) are both below 2^53,
// so the subtraction and comparison are free of double rounding.
double round_half_even(double x) {
    double fl = std::floor(x);
    double diff = x - fl;
    if (diff > 0.5) return fl + 1.0;
    if (diff < 0.5) return fl;
    return std::fmod(fl, 2.0) == 0.0 ? fl : fl + 1.0;
}

FixedWord fold_to_format(__int128 v, Format fmt, Overflow policy) {
    if (policy == Overflow::wrap)
        return detail_make_with_flag(wrap_to_width(v, fmt.total_bits), fmt, false);
    bool sat = false;
    int64_t raw = saturate_to_width(v, fmt.total_bits, sat);
    return detail_make_with_flag(raw, fmt, sat);
}

} // namespace

Format::Format(int total, int frac) : total_bits(total), frac_bits(frac) {
    if (total < kMinFormatBits || total > kMaxFormatBits)
        throw FormatError("format total_bits " + std::to_string(total) + " outside [" +
                          std::to_string(kMinFormatBits) + ", " + std::to_string(kMaxFormatBits) + "]");
    if (frac < 0 || frac > total - 1)
        throw FormatError("format frac_bits " + std::to_string(frac) + " outside [0, total_bits-1]");
}

FixedWord::FixedWord(int64_t raw, Format fmt) : raw_(raw), fmt_(fmt), saturated_(false) {
    if (raw < fmt.min_raw() || raw > fmt.max_raw())
        throw FormatError("raw count " + std::to_string(raw) + " does not fit a " +
                          std::to_string(fmt.total_bits) + "-bit format");
}

FixedWord FixedWord::with_flag(int64_t raw, Format fmt, bool saturated) {
    FixedWord w(raw, fmt);
    w.saturated_ = saturated;
    return w;
}

double FixedWord::to_double() const {
    return std::ldexp(static_cast<double>(raw_), -fmt_.frac_bits);
}

FixedWord make_fixed(double value, Format fmt, Rounding rounding) {
    if (std::isnan(value)) throw ArgumentError("make_fixed: value is NaN");
    // Scaling by a power of two is exact in binary floating point.
    double scaled = std::ldexp(value, fmt.frac_bits);
    double rounded = rounding == Rounding::truncate ? std::floor(scaled) : round_half_even(scaled);
    bool sat = false;
    int64_t raw;
    // Range comparison happens in double where both bounds are exact; only a
    // value already proven in range is converted to integer.
    if (rounded < static_cast<double>(fmt.min_raw())) {
        raw = fmt.min_raw();
        sat = true;
    } else if (rounded > static_cast<double>(fmt.max_raw())) {
        raw = fmt.max_raw();
        sat = true;
    } else {
        raw = static_cast<int64_t>(rounded);
    }
    return FixedWord::with_flag(raw, fmt, sat);
}

FixedWord resize(const FixedWord& x, Format to, Overflow overflow, Rounding narrowing) {
    int delta = to.frac_bits - x.fmt().frac_bits;
    __int128 v;
    if (delta >= 0) {
        v = static_cast<__int128>(x.raw()) << delta;
    } else {
        v = shift_right_rounded_wide(x.raw(), -delta, narrowing);
    }
    return fold_to_format(v, to, overflow);
}

FixedWord add(const FixedWord& a, const FixedWord& b, Overflow overflow) {
    if (!(a.fmt() == b.fmt())) throw FormatError("add: operand formats differ");
    __int128 v = static_cast<__int128>(a.raw()) + b.raw();
    return fold_to_format(v, a.fmt(), overflow);
}

FixedWord sub(const FixedWord& a, const FixedWord& b, Overflow overflow) {
    if (!(a.fmt() == b.fmt())) throw FormatError("sub: operand formats differ");
    __int128 v = static_cast<__int128>(a.raw()) - b.raw();
    return fold_to_format(v, a.fmt(), overflow);
}

FixedWord mul_full(const FixedWord& a, const FixedWord& b) {
    Format out(a.fmt().total_bits + b.fmt().total_bits,
               a.fmt().frac_bits + b.fmt().frac_bits);
    __int128 v = static_cast<__int128>(a.raw()) * b.raw();
    // |a| <= 2^(ta-1), |b| <= 2^(tb-1), so |v| <= 2^(ta+tb-2) which the
    // widened format holds with a bit to spare.
    return FixedWord(static_cast<int64_t>(v), out);
}

int64_t shift_right_rounded(int64_t v, int shift, Rounding mode) {
    return static_cast<int64_t>(shift_right_rounded_wide(v, shift, mode));
}

__int128 shift_right_rounded_wide(__int128 v, int shift, Rounding mode) {
    if (shift <= 0) return v;
    __int128 q = v >> shift; // arithmetic shift: floor
    if (mode == Rounding::truncate) return q;
    __int128 rem = v - (q << shift);
    __int128 half = static_cast<__int128>(1) << (shift - 1);
    if (rem > half) return q + 1;
    if (rem == half) return q + (q & 1);
    return q;
}

int64_t wrap_to_width(__int128 v, int total_bits) {
    uint64_t mask = (uint64_t{1} << total_bits) - 1;
    uint64_t u = static_cast<uint64_t>(static_cast<unsigned __int128>(v)) & mask;
    if (u >> (total_bits - 1) & 1) u |= ~mask;
    return static_cast<int64_t>(u);
}

FixedWord narrow_raw(__int128 v, int shift, Rounding mode, Format fmt) {
    __int128 q = shift_right_rounded_wide(v, shift, mode);
    return detail_make_with_flag(wrap_to_width(q, fmt.total_bits), fmt, false);
}

int64_t saturate_to_width(__int128 v, int total_bits, bool& saturated) {
    __int128 lo = -(static_cast<__int128>(1) << (total_bits - 1));
    __int128 hi = (static_cast<__int128>(1) << (total_bits - 1)) - 1;
    if (v < lo) {
        saturated = true;
        return static_cast<int64_t>(lo);
    }
    if (v > hi) {
        saturated = true;
        return static_cast<int64_t>(hi);
    }
    return static_cast<int64_t>(v);
}

ComplexFixed::ComplexFixed(FixedWord re_val, FixedWord im_val) : re(re_val), im(im_val) {
    if (!(re.fmt() == im.fmt()))
        throw FormatError("complex components must share one format");
}

} // namespace bsdsp
