#pragma once

#include <cstdint>

#include "bsdsp/errors.hpp"

namespace bsdsp {

// How low-order bits are dropped when a value is narrowed.
//   truncate:     discard the bits (rounds toward -inf in two's complement)
//   nearest_even: round to nearest, ties to the even result
enum class Rounding { truncate, nearest_even };

// What happens when a value leaves the representable range.
enum class Overflow { saturate, wrap };

inline constexpr int kMinFormatBits = 2;
inline constexpr int kMaxFormatBits = 48;

// Signed two's-complement fixed-point format, total_bits wide with frac_bits
// of fraction. Real value = raw / 2^frac_bits. Totals are capped at 48 bits
// so every raw count, and every full-width product of two formats, fits in
// an int64.
struct Format {
    int total_bits;
    int frac_bits;

    Format() : total_bits(16), frac_bits(0) {}
    Format(int total, int frac);

    int64_t min_raw() const { return -(int64_t{1} << (total_bits - 1)); }
    int64_t max_raw() const { return (int64_t{1} << (total_bits - 1)) - 1; }
    int integer_bits() const { return total_bits - frac_bits; }

    friend bool operator==(const Format&, const Format&) = default;
};

// A fixed-point scalar. Construction checks that the raw count fits the
// format. `saturated` marks results clipped by a saturating operation
// (quantization included); it rides along for inspection and is ignored by
// comparison.
class FixedWord {
public:
    FixedWord() : raw_(0), fmt_(), saturated_(false) {}
    FixedWord(int64_t raw, Format fmt);

    int64_t raw() const { return raw_; }
    const Format& fmt() const { return fmt_; }
    bool saturated() const { return saturated_; }
    double to_double() const;

    friend bool operator==(const FixedWord& a, const FixedWord& b) {
        return a.raw_ == b.raw_ && a.fmt_ == b.fmt_;
    }

private:
    static FixedWord with_flag(int64_t raw, Format fmt, bool saturated);
    friend FixedWord make_fixed(double, Format, Rounding);
    friend FixedWord detail_make_with_flag(int64_t, Format, bool);

    int64_t raw_;
    Format fmt_;
    bool saturated_;
};

// Quantize a real value: raw = round(value * 2^frac_bits) under `rounding`,
// clipped to the format's range (clipping sets the saturated flag; it is
// silent otherwise). NaN is rejected.
FixedWord make_fixed(double value, Format fmt, Rounding rounding);

// Rescale to a new format. Growing the fraction is exact (left shift);
// shrinking it drops bits under `narrowing`; a result outside the new range
// follows `overflow`.
FixedWord resize(const FixedWord& x, Format to, Overflow overflow, Rounding narrowing);

// Same-format add/subtract; the exact result is folded back into the operand
// format under `overflow`. Mismatched formats are an error.
FixedWord add(const FixedWord& a, const FixedWord& b, Overflow overflow);
FixedWord sub(const FixedWord& a, const FixedWord& b, Overflow overflow);

// Exact product at format {a.total + b.total, a.frac + b.frac}. Never rounds
// and never overflows: the widened format always holds the product.
FixedWord mul_full(const FixedWord& a, const FixedWord& b);

// Raw-count quantization helpers. Every datapath in this project that
// narrows a word funnels through these, so "same rounding" is one piece of
// code rather than a convention.
int64_t shift_right_rounded(int64_t v, int shift, Rounding mode);
__int128 shift_right_rounded_wide(__int128 v, int shift, Rounding mode);
int64_t wrap_to_width(__int128 v, int total_bits);
int64_t saturate_to_width(__int128 v, int total_bits, bool& saturated);

// The narrowing step after an exact sum or product: drop `shift` low bits of
// the wide raw count under `mode`, then wrap what is left into `fmt`, the
// way a fixed-width register would take it.
FixedWord narrow_raw(__int128 v, int shift, Rounding mode, Format fmt);

// Complex pair; both components share one format.
struct ComplexFixed {
    FixedWord re;
    FixedWord im;

    ComplexFixed() = default;
    ComplexFixed(FixedWord re_val, FixedWord im_val);

    const Format& fmt() const { return re.fmt(); }

    friend bool operator==(const ComplexFixed&, const ComplexFixed&) = default;
};

} // namespace bsdsp
