#include "bsdsp/conv_engine.hpp"

#include <algorithm>
#include <string>

namespace bsdsp {

namespace {

void check_length(size_t len, const char* what) {
    if (len < 1 || len > static_cast<size_t>(kConvMaxLen))
        throw SizeError(std::string(what) + " length " + std::to_string(len) +
                        " outside 1.." + std::to_string(kConvMaxLen));
}

int32_t wrap_add32(int32_t acc, int32_t v, bool& overflow) {
    int64_t exact = static_cast<int64_t>(acc) + v;
    int32_t wrapped = static_cast<int32_t>(static_cast<uint32_t>(exact));
    if (wrapped != exact) overflow = true;
    return wrapped;
}

} // namespace

ConvEngine::ConvEngine() : bank_(lut_bank_16x16()) {}

ConvEngine::ConvEngine(const LutBank& bank) : bank_(bank) {
    if (bank.params().total_bits != 16)
        throw ArgumentError("conv engine needs a 16-bit multiplier bank");
}

void ConvEngine::load(std::span<const FixedWord> x, std::span<const FixedWord> h) {
    check_length(x.size(), "input");
    check_length(h.size(), "kernel");
    for (const FixedWord& w : x)
        if (w.fmt().total_bits != 16) throw FormatError("conv input samples must be 16-bit words");
    for (const FixedWord& w : h)
        if (w.fmt().total_bits != 16) throw FormatError("conv kernel taps must be 16-bit words");
    input_fifo_.assign(x.begin(), x.end());
    kernel_.assign(h.begin(), h.end());
    regfile_.fill(0);
    overflow_.fill(false);
    input_len_ = static_cast<int>(x.size());
    consumed_ = 0;
    next_emit_ = 0;
    demux_select_ = 0;
    rcv_ = false;
    cycle_ = 0;
}

bool ConvEngine::finished() const {
    return loaded() && next_emit_ >= output_length();
}

ConvStepReport ConvEngine::step() {
    ConvStepReport report;
    if (!loaded()) throw ArgumentError("conv engine stepped before load");
    if (finished()) {
        report.finished = true;
        rcv_ = false;
        return report;
    }

    if (!input_fifo_.empty()) {
        FixedWord sample = input_fifo_.front();
        input_fifo_.pop_front();
        int j = consumed_++;
        // One sliding position per cycle: this sample against every tap,
        // each product steered to the accumulator of its output position.
        for (int m = 0; m < kernel_length(); ++m) {
            int32_t p = static_cast<int32_t>(bsm_mul_signed(sample, kernel_[m], bank_).raw());
            demux_select_ = j + m;
            regfile_[demux_select_] =
                wrap_add32(regfile_[demux_select_], p, overflow_[demux_select_]);
            report.products_routed.push_back({demux_select_, p});
        }
    }

    // Output t has every contribution once inputs 0..min(t, n-1) are in; the
    // handover pointer walks ascending positions, one per cycle.
    int final_cycle = std::min(next_emit_, input_len_ - 1);
    if (consumed_ >= final_cycle + 1) {
        report.emitted = RoutedValue{next_emit_, regfile_[next_emit_]};
        report.rcv = true;
        ++next_emit_;
    }
    rcv_ = report.rcv;
    report.finished = finished();
    ++cycle_;
    return report;
}

ConvResult run_convolution(std::span<const FixedWord> x, std::span<const FixedWord> h) {
    ConvEngine engine;
    engine.load(x, h);
    ConvResult result;
    result.y.reserve(static_cast<size_t>(engine.output_length()));
    while (!engine.finished()) {
        ConvStepReport r = engine.step();
        if (r.emitted) result.y.push_back(r.emitted->value);
    }
    result.cycles_used = engine.cycle();
    const auto& flags = engine.overflow_flags();
    result.overflow_any = std::any_of(flags.begin(), flags.end(), [](bool f) { return f; });
    return result;
}

} // namespace bsdsp
