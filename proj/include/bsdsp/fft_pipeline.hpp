#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bsdsp/fixedpoint.hpp"

namespace bsdsp {

// Per-stage output treatment.
//   per_stage_half: both butterfly outputs are halved before narrowing, so
//                   the spectrum comes out divided by n_points and additions
//                   cannot overflow. scale_factor() reports the 1/N.
//   none_wrap:      no scaling; narrowing wraps like the underlying adders.
enum class Scaling { per_stage_half, none_wrap };

// Static pipeline configuration. Defaults model 12-bit samples against
// 24-bit twiddles with a 24-bit internal datapath.
struct FftConfig {
    int n_points = 64;
    Format sample_fmt{12, 11};
    Format twiddle_fmt{24, 22};
    Format internal_fmt{24, 22};
    Scaling scaling = Scaling::per_stage_half;
    Rounding narrowing = Rounding::truncate;

    void validate() const;
    int stage_count() const;
    double scale_factor() const;
};

inline constexpr int kFftMaxPoints = 4096;

// Reverses the low `bits` bits of v.
uint32_t bit_reverse(uint32_t v, int bits);

// Twiddle store for one stage: entries[k] holds
// W^k = e^(-j*2*pi*k/n_stage) for k = 0 .. n_stage/2 - 1, each component
// quantized round-to-nearest-even. The counter belongs to the owning stage's
// control: it starts on the first valid input and tracks the position inside
// the current block, selecting between the buffering half and the butterfly
// half (where this ROM feeds the multiplier).
struct TwiddleRom {
    int n_stage = 2;
    std::vector<ComplexFixed> entries;
    int counter = 0;
};

TwiddleRom gen_twiddle_rom(int n_stage, Format fmt);

struct ButterflyOut {
    ComplexFixed top;
    ComplexFixed bot;
};

// Radix-2 decimation-in-frequency kernel on internal-format words:
//   top = a + b,  bot = (a - b) * w
// The complex multiply is the four-multiply/two-add form; sums and products
// stay exact at full width and each component is narrowed back to the
// internal format exactly once (halved first under per_stage_half).
// Narrowing drops bits under cfg.narrowing and wraps on overflow.
ButterflyOut butterfly(const ComplexFixed& a, const ComplexFixed& b,
                       const ComplexFixed& w, const FftConfig& cfg);

// One feedback stage of the single-path delay pipeline. The FIFO is
// n_stage/2 deep. During the first half of a block the stage buffers
// arriving samples while streaming out the previous block's bottom results;
// during the second half it pops the buffered partner, runs the butterfly,
// sends the top downstream and feeds the bottom back into the FIFO. With
// idle input the stage flushes pending bottoms between blocks and otherwise
// holds still, so gaps between frames cannot skew alignment.
class FftStage {
public:
    FftStage(int depth, TwiddleRom rom, Format internal_fmt);

    struct Out {
        ComplexFixed value;
        bool valid = false;
    };

    Out clock(const ComplexFixed& in, bool in_valid, const FftConfig& cfg);

    int depth() const { return depth_; }
    size_t fifo_occupancy() const { return count_; }
    // True in the butterfly half of the current block.
    bool in_butterfly_half() const { return rom_.counter >= depth_; }
    const TwiddleRom& rom() const { return rom_; }

private:
    ComplexFixed pop();
    void push(const ComplexFixed& v);

    int depth_;
    TwiddleRom rom_; // rom_.counter doubles as the block position
    std::vector<ComplexFixed> fifo_;
    size_t head_ = 0;
    size_t count_ = 0;
};

// Reorder buffer turning the bit-reversed arrival order of the last stage
// into natural order. A single n-slot array carries gapless back-to-back
// frames: the write and read address maps swap between bit-reversed and
// natural on alternating frames, and within a cycle the read happens before
// the write, so an incoming frame always lands in just-freed slots. Values
// go in n writes and come out on the n cycles after the final write.
class SortBuffer {
public:
    explicit SortBuffer(int n_points);

    struct Read {
        int index;          // natural-order spectrum index
        ComplexFixed value; // still internal format
    };

    void write(const ComplexFixed& v);
    // One natural-order value per call while a completed frame is draining.
    std::optional<Read> read();

    int n_points() const { return n_; }
    uint64_t total_writes() const { return writes_; }
    uint64_t total_reads() const { return reads_; }
    bool idle() const { return writes_ == reads_ && write_pos_ == 0; }

private:
    int n_;
    int bits_;
    std::vector<ComplexFixed> slots_;
    int write_pos_ = 0;
    int read_pos_ = 0;
    uint64_t frames_written_ = 0;
    uint64_t frames_read_ = 0;
    uint64_t writes_ = 0;
    uint64_t reads_ = 0;
};

// A spectrum value leaving the pipeline, narrowed to the sample format. The
// only 24-to-12 style narrowing in the datapath happens here, at the sort
// buffer output.
struct FftEmission {
    int index;
    ComplexFixed value;
};

struct PipelineReport {
    uint32_t stage_valid_mask = 0; // bit i: stage i produced a valid output
    int stage_count = 0;
    bool final_stage_valid = false;
    std::optional<FftEmission> emitted;

    bool stage_valid(int i) const { return (stage_valid_mask >> i) & 1u; }
};

// Cycle-level streaming FFT: log2(n_points) feedback stages with FIFO depths
// n/2, n/4, ..., 1 followed by the reorder buffer. One push is one clock
// cycle; samples of a frame arrive on consecutive pushes, and frames may
// follow each other with no gap or any gap.
class FftPipeline {
public:
    explicit FftPipeline(FftConfig cfg);

    PipelineReport push_sample(const ComplexFixed& x); // valid sample
    PipelineReport push_idle();                        // clock without data

    const FftConfig& config() const { return cfg_; }
    uint64_t cycle() const { return cycle_; }
    uint64_t final_output_count() const { return final_outputs_; }
    uint64_t emission_count() const { return emissions_; }
    const FftStage& stage(int i) const { return stages_[static_cast<size_t>(i)]; }
    const SortBuffer& sorter() const { return sort_; }

private:
    PipelineReport clock(const ComplexFixed& x, bool valid);

    FftConfig cfg_;
    std::vector<FftStage> stages_;
    SortBuffer sort_;
    uint64_t cycle_ = 0;
    uint64_t final_outputs_ = 0;
    uint64_t emissions_ = 0;
};

struct FftFrameResult {
    std::vector<ComplexFixed> spectrum; // natural order, sample format
    uint64_t latency_cycles = 0;        // first input to first last-stage output
    uint64_t sort_cycles = 0;           // extra cycles before the sorted stream began
    double scale_factor = 1.0;          // multiply outputs by 1/this to undo scaling
};

// Feeds one frame and collects its sorted spectrum, pushing idle cycles as
// needed to flush the tail. The pipeline object keeps streaming state, so
// calling this repeatedly processes frames back to back.
FftFrameResult run_frame(FftPipeline& pipeline, std::span<const ComplexFixed> frame);

} // namespace bsdsp
