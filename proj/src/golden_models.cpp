#include "bsdsp/golden_models.hpp"

#include <cmath>
#include <string>

namespace bsdsp::golden {

namespace {

bool is_pow2(size_t v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(size_t v) {
    int bits = 0;
    while ((size_t{1} << bits) < v) ++bits;
    return bits;
}

} // namespace

std::vector<int64_t> direct_conv(std::span<const int64_t> x, std::span<const int64_t> h) {
    if (x.empty() || h.empty()) throw SizeError("direct_conv: empty operand");
    std::vector<int64_t> y(x.size() + h.size() - 1, 0);
    for (size_t j = 0; j < x.size(); ++j)
        for (size_t m = 0; m < h.size(); ++m)
            y[j + m] += x[j] * h[m];
    return y;
}

std::vector<ComplexF> dft_naive(std::span<const ComplexF> frame) {
    const size_t n = frame.size();
    if (n == 0) throw SizeError("dft_naive: empty frame");
    // e^(-j*2*pi*r/N) for r = 0..N-1; (n*k) mod N keeps every angle small.
    std::vector<ComplexF> twiddle(n);
    for (size_t r = 0; r < n; ++r) {
        double angle = -2.0 * M_PI * static_cast<double>(r) / static_cast<double>(n);
        twiddle[r] = ComplexF(std::cos(angle), std::sin(angle));
    }
    std::vector<ComplexF> out(n);
    for (size_t k = 0; k < n; ++k) {
        ComplexF acc(0.0, 0.0);
        for (size_t idx = 0; idx < n; ++idx)
            acc += frame[idx] * twiddle[(idx * k) % n];
        out[k] = acc;
    }
    return out;
}

std::vector<ComplexF> fft_dif_float(std::span<const ComplexF> frame) {
    const size_t n = frame.size();
    if (!is_pow2(n)) throw SizeError("fft_dif_float: length must be a power of two");
    std::vector<ComplexF> buf(frame.begin(), frame.end());
    for (size_t size = n; size >= 2; size /= 2) {
        const size_t half = size / 2;
        for (size_t start = 0; start < n; start += size) {
            for (size_t i = 0; i < half; ++i) {
                double angle = -2.0 * M_PI * static_cast<double>(i) / static_cast<double>(size);
                ComplexF w(std::cos(angle), std::sin(angle));
                ComplexF a = buf[start + i];
                ComplexF b = buf[start + i + half];
                buf[start + i] = a + b;
                buf[start + i + half] = (a - b) * w;
            }
        }
    }
    const int bits = log2_exact(n);
    std::vector<ComplexF> out(n);
    for (size_t i = 0; i < n; ++i)
        out[bit_reverse(static_cast<uint32_t>(i), bits)] = buf[i];
    return out;
}

std::vector<ComplexFixed> fixed_dif(std::span<const ComplexFixed> frame, const FftConfig& cfg) {
    cfg.validate();
    const size_t n = static_cast<size_t>(cfg.n_points);
    if (frame.size() != n)
        throw SizeError("fixed_dif: frame length " + std::to_string(frame.size()) +
                        " != n_points " + std::to_string(n));

    const Format& fmt = cfg.internal_fmt;
    const int scale_shift = cfg.scaling == Scaling::per_stage_half ? 1 : 0;

    std::vector<ComplexFixed> buf;
    buf.reserve(n);
    for (const ComplexFixed& s : frame) {
        if (!(s.fmt() == cfg.sample_fmt))
            throw FormatError("fixed_dif: sample does not carry the configured format");
        buf.emplace_back(resize(s.re, fmt, Overflow::wrap, Rounding::truncate),
                         resize(s.im, fmt, Overflow::wrap, Rounding::truncate));
    }

    for (size_t size = n; size >= 2; size /= 2) {
        const size_t half = size / 2;
        // Same quantized twiddles as the ROM: components rounded to nearest
        // even at the twiddle format.
        std::vector<ComplexFixed> w(half);
        for (size_t i = 0; i < half; ++i) {
            double angle = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(size);
            w[i] = ComplexFixed(
                make_fixed(std::cos(angle), cfg.twiddle_fmt, Rounding::nearest_even),
                make_fixed(-std::sin(angle), cfg.twiddle_fmt, Rounding::nearest_even));
        }
        for (size_t start = 0; start < n; start += size) {
            for (size_t i = 0; i < half; ++i) {
                const ComplexFixed& a = buf[start + i];
                const ComplexFixed& b = buf[start + i + half];
                // top = (a + b), bot = (a - b) * w[i]; exact until the one
                // narrowing per component, halved first under scaling.
                __int128 sum_re = static_cast<__int128>(a.re.raw()) + b.re.raw();
                __int128 sum_im = static_cast<__int128>(a.im.raw()) + b.im.raw();
                __int128 d_re = static_cast<__int128>(a.re.raw()) - b.re.raw();
                __int128 d_im = static_cast<__int128>(a.im.raw()) - b.im.raw();
                __int128 prod_re = d_re * w[i].re.raw() - d_im * w[i].im.raw();
                __int128 prod_im = d_re * w[i].im.raw() + d_im * w[i].re.raw();
                int drop = cfg.twiddle_fmt.frac_bits + scale_shift;
                ComplexFixed top(narrow_raw(sum_re, scale_shift, cfg.narrowing, fmt),
                                 narrow_raw(sum_im, scale_shift, cfg.narrowing, fmt));
                ComplexFixed bot(narrow_raw(prod_re, drop, cfg.narrowing, fmt),
                                 narrow_raw(prod_im, drop, cfg.narrowing, fmt));
                buf[start + i] = top;
                buf[start + i + half] = bot;
            }
        }
    }

    const int bits = log2_exact(n);
    std::vector<ComplexFixed> out(n);
    for (size_t i = 0; i < n; ++i) {
        ComplexFixed narrowed(resize(buf[i].re, cfg.sample_fmt, Overflow::wrap, cfg.narrowing),
                              resize(buf[i].im, cfg.sample_fmt, Overflow::wrap, cfg.narrowing));
        out[bit_reverse(static_cast<uint32_t>(i), bits)] = narrowed;
    }
    return out;
}

} // namespace bsdsp::golden
