#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "bsdsp/fft_pipeline.hpp"
#include "bsdsp/fixedpoint.hpp"

// Reference implementations the hardware-style modules are tested against.
// All of them are organized as plain loops over arrays; none of them share
// datapath code with the streaming engines, with one deliberate exception:
// fixed_dif narrows through the same fixedpoint helpers, because it defines
// the quantization the pipeline must reproduce bit for bit.
namespace bsdsp::golden {

using ComplexF = std::complex<double>;

// Exact full convolution y[t] = sum_m h[m] * x[t-m] in 64-bit integers.
// No size caps.
std::vector<int64_t> direct_conv(std::span<const int64_t> x, std::span<const int64_t> h);

// O(N^2) DFT in doubles; the twiddle for (n, k) is indexed by n*k mod N so
// large products never degrade the angle.
std::vector<ComplexF> dft_naive(std::span<const ComplexF> frame);

// Iterative decimation-in-frequency FFT in doubles, even/odd split per
// stage, bit-reversal reorder at the end. Power-of-two lengths only.
std::vector<ComplexF> fft_dif_float(std::span<const ComplexF> frame);

// Behavioral fixed-point DIF: widen, per-stage butterflies with the same
// scaling and narrowing as the pipeline, bit-reversal sort, narrow to the
// sample format. A textbook in-place loop nest; the streaming pipeline is a
// scheduling of exactly this arithmetic.
std::vector<ComplexFixed> fixed_dif(std::span<const ComplexFixed> frame, const FftConfig& cfg);

} // namespace bsdsp::golden
