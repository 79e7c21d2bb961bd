#include "bsdsp/fft_pipeline.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace bsdsp {

namespace {

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(int v) {
    int bits = 0;
    while ((1 << bits) < v) ++bits;
    return bits;
}

} // namespace

void FftConfig::validate() const {
    if (!is_pow2(n_points) || n_points < 2 || n_points > kFftMaxPoints)
        throw SizeError("n_points must be a power of two in 2.." + std::to_string(kFftMaxPoints));
    // Widening a sample into the internal format must be exact, or the input
    // stage would already lose bits.
    if (internal_fmt.frac_bits < sample_fmt.frac_bits ||
        internal_fmt.integer_bits() < sample_fmt.integer_bits())
        throw ArgumentError("internal format must cover the sample format");
    if (twiddle_fmt.integer_bits() < 2)
        throw ArgumentError("twiddle format cannot represent +1.0");
}

int FftConfig::stage_count() const { return log2_exact(n_points); }

double FftConfig::scale_factor() const {
    return scaling == Scaling::per_stage_half ? 1.0 / n_points : 1.0;
}

uint32_t bit_reverse(uint32_t v, int bits) {
    uint32_t r = 0;
    for (int i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1u);
        v >>= 1;
    }
    return r;
}

TwiddleRom gen_twiddle_rom(int n_stage, Format fmt) {
    if (!is_pow2(n_stage) || n_stage < 2)
        throw ArgumentError("twiddle rom: n_stage must be a power of two >= 2");
    TwiddleRom rom;
    rom.n_stage = n_stage;
    rom.entries.reserve(static_cast<size_t>(n_stage / 2));
    for (int k = 0; k < n_stage / 2; ++k) {
        double angle = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n_stage);
        rom.entries.emplace_back(make_fixed(std::cos(angle), fmt, Rounding::nearest_even),
                                 make_fixed(-std::sin(angle), fmt, Rounding::nearest_even));
    }
    return rom;
}

ButterflyOut butterfly(const ComplexFixed& a, const ComplexFixed& b,
                       const ComplexFixed& w, const FftConfig& cfg) {
    const Format& fmt = cfg.internal_fmt;
    const int scale_shift = cfg.scaling == Scaling::per_stage_half ? 1 : 0;

    auto narrow = [&](__int128 v, int shift) {
        return narrow_raw(v, shift, cfg.narrowing, fmt);
    };

    // top = a + b: exact sum, then the single narrowing (a pure wrap check
    // when no scaling shift applies).
    __int128 sum_re = static_cast<__int128>(a.re.raw()) + b.re.raw();
    __int128 sum_im = static_cast<__int128>(a.im.raw()) + b.im.raw();
    ComplexFixed top(narrow(sum_re, scale_shift), narrow(sum_im, scale_shift));

    // bot = (a - b) * w: exact difference, four exact products, two exact
    // sums, then one narrowing per component dropping the twiddle fraction.
    __int128 d_re = static_cast<__int128>(a.re.raw()) - b.re.raw();
    __int128 d_im = static_cast<__int128>(a.im.raw()) - b.im.raw();
    __int128 prod_re = d_re * w.re.raw() - d_im * w.im.raw();
    __int128 prod_im = d_re * w.im.raw() + d_im * w.re.raw();
    int drop = w.re.fmt().frac_bits + scale_shift;
    ComplexFixed bot(narrow(prod_re, drop), narrow(prod_im, drop));

    return {top, bot};
}

FftStage::FftStage(int depth, TwiddleRom rom, Format internal_fmt)
    : depth_(depth), rom_(std::move(rom)) {
    assert(depth >= 1 && rom_.entries.size() == static_cast<size_t>(depth));
    FixedWord zero(0, internal_fmt);
    fifo_.assign(static_cast<size_t>(depth), ComplexFixed(zero, zero));
}

ComplexFixed FftStage::pop() {
    assert(count_ > 0);
    ComplexFixed v = fifo_[head_];
    head_ = (head_ + 1) % fifo_.size();
    --count_;
    return v;
}

void FftStage::push(const ComplexFixed& v) {
    assert(count_ < fifo_.size());
    fifo_[(head_ + count_) % fifo_.size()] = v;
    ++count_;
}

FftStage::Out FftStage::clock(const ComplexFixed& in, bool in_valid, const FftConfig& cfg) {
    Out out;
    if (in_valid) {
        if (rom_.counter < depth_) {
            // Buffering half: take the new sample; once the FIFO is at depth
            // the slot being displaced is a finished bottom result from the
            // previous block and continues downstream.
            if (count_ == static_cast<size_t>(depth_)) {
                out.value = pop();
                out.valid = true;
            }
            push(in);
        } else {
            // Butterfly half: the partner stored depth cycles ago meets the
            // sample arriving now.
            assert(count_ == static_cast<size_t>(depth_));
            ComplexFixed partner = pop();
            const ComplexFixed& w = rom_.entries[static_cast<size_t>(rom_.counter - depth_)];
            ButterflyOut b = butterfly(partner, in, w, cfg);
            push(b.bot);
            out.value = b.top;
            out.valid = true;
        }
        rom_.counter = (rom_.counter + 1) % (2 * depth_);
    } else if (rom_.counter == 0 && count_ > 0) {
        // Idle between blocks: flush pending bottom results, one per cycle.
        out.value = pop();
        out.valid = true;
    }
    // Idle mid-block: hold everything; alignment within the block survives.
    return out;
}

SortBuffer::SortBuffer(int n_points) : n_(n_points), bits_(log2_exact(n_points)) {
    slots_.assign(static_cast<size_t>(n_), ComplexFixed());
}

void SortBuffer::write(const ComplexFixed& v) {
    bool reversed_map = (frames_written_ & 1) == 0;
    int addr = reversed_map ? static_cast<int>(bit_reverse(static_cast<uint32_t>(write_pos_), bits_))
                            : write_pos_;
    slots_[static_cast<size_t>(addr)] = v;
    ++writes_;
    if (++write_pos_ == n_) {
        write_pos_ = 0;
        ++frames_written_;
    }
}

std::optional<SortBuffer::Read> SortBuffer::read() {
    if (frames_read_ >= frames_written_) return std::nullopt;
    bool natural_map = (frames_read_ & 1) == 0;
    int addr = natural_map ? read_pos_
                           : static_cast<int>(bit_reverse(static_cast<uint32_t>(read_pos_), bits_));
    Read out{read_pos_, slots_[static_cast<size_t>(addr)]};
    ++reads_;
    if (++read_pos_ == n_) {
        read_pos_ = 0;
        ++frames_read_;
    }
    return out;
}

FftPipeline::FftPipeline(FftConfig cfg) : cfg_(cfg), sort_(1) {
    cfg_.validate();
    sort_ = SortBuffer(cfg_.n_points);
    stages_.reserve(static_cast<size_t>(cfg_.stage_count()));
    for (int size = cfg_.n_points; size >= 2; size /= 2)
        stages_.emplace_back(size / 2, gen_twiddle_rom(size, cfg_.twiddle_fmt), cfg_.internal_fmt);
}

PipelineReport FftPipeline::push_sample(const ComplexFixed& x) {
    if (!(x.fmt() == cfg_.sample_fmt))
        throw FormatError("push_sample: sample does not carry the configured format");
    return clock(x, true);
}

PipelineReport FftPipeline::push_idle() {
    FixedWord zero(0, cfg_.sample_fmt);
    return clock(ComplexFixed(zero, zero), false);
}

PipelineReport FftPipeline::clock(const ComplexFixed& x, bool valid) {
    PipelineReport report;
    report.stage_count = static_cast<int>(stages_.size());

    ComplexFixed cur;
    bool v = valid;
    if (valid) {
        // Exact widening into the internal format (validated in FftConfig).
        cur = ComplexFixed(
            resize(x.re, cfg_.internal_fmt, Overflow::wrap, Rounding::truncate),
            resize(x.im, cfg_.internal_fmt, Overflow::wrap, Rounding::truncate));
    }
    for (size_t i = 0; i < stages_.size(); ++i) {
        FftStage::Out out = stages_[i].clock(cur, v, cfg_);
        cur = out.value;
        v = out.valid;
        report.stage_valid_mask |= static_cast<uint32_t>(out.valid) << i;
    }
    report.final_stage_valid = v;

    // Read before write: while one frame drains in natural order, the next
    // frame's bit-reversed writes land in the slots just vacated.
    if (std::optional<SortBuffer::Read> r = sort_.read()) {
        ++emissions_;
        ComplexFixed narrowed(
            resize(r->value.re, cfg_.sample_fmt, Overflow::wrap, cfg_.narrowing),
            resize(r->value.im, cfg_.sample_fmt, Overflow::wrap, cfg_.narrowing));
        report.emitted = FftEmission{r->index, narrowed};
    }
    if (v) {
        sort_.write(cur);
        ++final_outputs_;
    }
    ++cycle_;
    return report;
}

FftFrameResult run_frame(FftPipeline& pipeline, std::span<const ComplexFixed> frame) {
    const FftConfig& cfg = pipeline.config();
    const int n = cfg.n_points;
    if (frame.size() != static_cast<size_t>(n))
        throw SizeError("run_frame: frame length " + std::to_string(frame.size()) +
                        " != n_points " + std::to_string(n));
    if (pipeline.final_output_count() % n != 0)
        throw ArgumentError("run_frame: pipeline is mid-frame");

    const uint64_t ordinal = pipeline.final_output_count() / n;
    const uint64_t first_cycle = pipeline.cycle();
    uint64_t first_output_cycle = 0;
    uint64_t first_emit_cycle = 0;
    bool saw_output = false;
    bool saw_emit = false;

    FftFrameResult result;
    result.spectrum.assign(static_cast<size_t>(n), ComplexFixed());
    result.scale_factor = cfg.scale_factor();
    int received = 0;

    auto absorb = [&](const PipelineReport& rep) {
        uint64_t now = pipeline.cycle() - 1; // cycle counter already advanced
        if (rep.final_stage_valid && !saw_output &&
            pipeline.final_output_count() == ordinal * n + 1) {
            first_output_cycle = now;
            saw_output = true;
        }
        if (rep.emitted) {
            uint64_t read_ordinal = (pipeline.emission_count() - 1) / n;
            if (read_ordinal == ordinal) {
                if (!saw_emit) {
                    first_emit_cycle = now;
                    saw_emit = true;
                }
                result.spectrum[static_cast<size_t>(rep.emitted->index)] = rep.emitted->value;
                ++received;
            }
        }
    };

    for (const ComplexFixed& s : frame) absorb(pipeline.push_sample(s));
    // Flush: worst case the tail needs the stage latency (n-1), the n sort
    // writes and the n drain reads.
    uint64_t guard = static_cast<uint64_t>(4 * n + 64);
    while (received < n && guard-- > 0) absorb(pipeline.push_idle());
    if (received != n)
        throw std::logic_error("run_frame: pipeline failed to drain a frame");

    result.latency_cycles = first_output_cycle - first_cycle;
    result.sort_cycles = first_emit_cycle - first_output_cycle;
    return result;
}

} // namespace bsdsp
