#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <vector>

#include "bsdsp/bsm.hpp"
#include "bsdsp/fixedpoint.hpp"

namespace bsdsp {

inline constexpr int kConvMaxLen = 15;      // cap on input and kernel length
inline constexpr int kConvMaxOutputs = 29;  // n + m - 1 at the cap
inline constexpr int kConvRegFileSize = 32; // accumulator register file
inline constexpr int kConvAccBits = 32;     // accumulator width

// One product routed through the demux: destination register and the value
// added there. Also reused for (output index, output value) pairs.
struct RoutedValue {
    int index;
    int32_t value;

    friend bool operator==(const RoutedValue&, const RoutedValue&) = default;
};

struct ConvStepReport {
    std::vector<RoutedValue> products_routed; // this cycle's demux traffic
    bool rcv = false;                         // an output was handed over
    std::optional<RoutedValue> emitted;       // (t, y[t]) when rcv is high
    bool finished = false;
};

struct ConvResult {
    std::vector<int32_t> y;
    bool overflow_any = false;
    uint64_t cycles_used = 0;
};

// Streaming linear convolver. Each cycle consumes one input sample from the
// FIFO, multiplies it against every kernel tap in the 16-bit slicing
// multiplier, and routes the products through a 1x32 demux into 32-bit
// accumulators indexed by output position (sample j against tap m lands in
// register j+m). Accumulators wrap like hardware adders and keep a sticky
// overflow flag. Outputs are emitted in ascending position with rcv high,
// one per cycle; positions that finalize together drain on the following
// cycles. A full run takes exactly n + m - 1 cycles and raises rcv exactly
// n + m - 1 times.
class ConvEngine {
public:
    // Uses the shared 16-bit bank; a caller-owned bank may be supplied.
    ConvEngine();
    explicit ConvEngine(const LutBank& bank);

    // Presents a new input/kernel pair. Lengths must be 1..15; samples must
    // be 16-bit words. Resets all engine state.
    void load(std::span<const FixedWord> x, std::span<const FixedWord> h);

    // Advances one cycle. Stepping a finished engine reports finished and
    // changes nothing.
    ConvStepReport step();

    bool loaded() const { return !kernel_.empty(); }
    bool finished() const;
    uint64_t cycle() const { return cycle_; }
    int input_length() const { return input_len_; }
    int kernel_length() const { return static_cast<int>(kernel_.size()); }
    int output_length() const { return input_len_ + kernel_length() - 1; }
    int demux_select() const { return demux_select_; }
    bool rcv() const { return rcv_; }
    const std::array<int32_t, kConvRegFileSize>& regfile() const { return regfile_; }
    const std::array<bool, kConvRegFileSize>& overflow_flags() const { return overflow_; }

private:
    const LutBank& bank_;
    std::deque<FixedWord> input_fifo_;
    std::vector<FixedWord> kernel_;
    std::array<int32_t, kConvRegFileSize> regfile_{};
    std::array<bool, kConvRegFileSize> overflow_{};
    int input_len_ = 0;
    int consumed_ = 0;
    int next_emit_ = 0;
    int demux_select_ = 0;
    bool rcv_ = false;
    uint64_t cycle_ = 0;
};

// Loads, steps to completion, and collects outputs and flags.
ConvResult run_convolution(std::span<const FixedWord> x, std::span<const FixedWord> h);

} // namespace bsdsp
