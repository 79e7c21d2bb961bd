// Acceptance harness: ten end-to-end criteria, one pass/fail line each.
// Every tolerance and time budget is pinned here, in code. The process
// exits nonzero if any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bsdsp/bsm.hpp"
#include "bsdsp/conv_engine.hpp"
#include "bsdsp/fft_pipeline.hpp"
#include "bsdsp/golden_models.hpp"
#include "bsdsp/io.hpp"
#include "bsdsp/metrics.hpp"

using namespace bsdsp;
namespace fs = std::filesystem;

namespace {

struct CriterionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& what) {
    if (!ok) throw CriterionFailure(what);
}

// Deterministic pair generator used everywhere a criterion says "seeded".
int64_t next_int16(std::mt19937_64& rng) {
    return static_cast<int64_t>(rng() & 0xFFFF) - 32768;
}

double next_pm(std::mt19937_64& rng, double amplitude) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return amplitude * (2.0 * u - 1.0);
}

std::vector<ComplexFixed> random_frame(std::mt19937_64& rng, const FftConfig& cfg,
                                       double amplitude) {
    std::vector<ComplexFixed> frame(static_cast<size_t>(cfg.n_points));
    for (ComplexFixed& v : frame)
        v = ComplexFixed(
            make_fixed(next_pm(rng, amplitude), cfg.sample_fmt, Rounding::nearest_even),
            make_fixed(next_pm(rng, amplitude), cfg.sample_fmt, Rounding::nearest_even));
    return frame;
}

// ---- criterion bodies ------------------------------------------------------

void criterion1_bsm_exhaustive_small() {
    LutBank bank{SliceParams(8, 4, 2)};
    for (uint64_t x = 0; x < 256; ++x)
        for (uint64_t y = 0; y < 256; ++y) {
            BsmProduct p = bsm_mul_unsigned(x, y, bank);
            check(p.value == x * y, "8-bit product mismatch at " + std::to_string(x) + "*" +
                                        std::to_string(y));
        }
}

void criterion2_bsm_paper_config() {
    const LutBank& bank = lut_bank_16x16();
    check(bank.params() == SliceParams(16, 4, 4), "bank geometry is not 16=4x4");
    Format i16(16, 0);

    auto verify_pair = [&](int64_t x, int64_t y) {
        FixedWord fx(x, i16), fy(y, i16);
        FixedWord sliced = bsm_mul_signed(fx, fy, bank);
        FixedWord wide = mul_full(fx, fy);
        check(sliced.raw() == wide.raw() && sliced.fmt() == wide.fmt(),
              "signed product mismatch at " + std::to_string(x) + "*" + std::to_string(y));
        uint64_t mx = static_cast<uint64_t>(x < 0 ? -x : x);
        uint64_t my = static_cast<uint64_t>(y < 0 ? -y : y);
        BsmProduct p = bsm_mul_unsigned(mx, my, bank);
        check(p.partials.size() == 16, "expected exactly 16 partial products");
        check(p.value == mx * my, "magnitude product mismatch");
    };

    std::mt19937_64 rng(0xB5D0);
    for (int i = 0; i < 1000000; ++i) verify_pair(next_int16(rng), next_int16(rng));

    const int64_t edges[] = {-32768, -32767, -1, 0, 1, 32767};
    for (int64_t x : edges)
        for (int64_t y : edges) verify_pair(x, y);
}

void criterion3_conv_oracle_sweep() {
    std::mt19937_64 rng(0xC04);
    ConvEngine engine;
    for (int n = 1; n <= 15; ++n) {
        for (int m = 1; m <= 15; ++m) {
            for (int trial = 0; trial < 10; ++trial) {
                std::vector<int64_t> x, h;
                std::vector<FixedWord> xw, hw;
                for (int i = 0; i < n; ++i) {
                    x.push_back(next_int16(rng));
                    xw.emplace_back(x.back(), Format(16, 0));
                }
                for (int i = 0; i < m; ++i) {
                    h.push_back(next_int16(rng));
                    hw.emplace_back(h.back(), Format(16, 0));
                }

                engine.load(xw, hw);
                std::vector<int32_t> y;
                int rcv_count = 0;
                while (!engine.finished()) {
                    ConvStepReport rep = engine.step();
                    if (rep.rcv) {
                        ++rcv_count;
                        y.push_back(rep.emitted->value);
                    }
                }
                check(rcv_count == n + m - 1,
                      "rcv fired " + std::to_string(rcv_count) + " times for n=" +
                          std::to_string(n) + " m=" + std::to_string(m));

                std::vector<int64_t> exact = golden::direct_conv(x, h);
                bool any_wrapped = false;
                for (size_t t = 0; t < exact.size(); ++t) {
                    int32_t wrapped = static_cast<int32_t>(static_cast<uint32_t>(exact[t]));
                    check(y[t] == wrapped, "output mismatch at t=" + std::to_string(t));
                    any_wrapped = any_wrapped || wrapped != exact[t];
                }
                bool flag = false;
                for (bool f : engine.overflow_flags()) flag = flag || f;
                check(!any_wrapped || flag, "wrapped output without an overflow flag");
            }
        }
    }
}

void criterion4_conv_size_gate() {
    ConvEngine engine;
    std::vector<FixedWord> len15(15, FixedWord(1, Format(16, 0)));
    std::vector<FixedWord> len16(16, FixedWord(1, Format(16, 0)));

    bool rejected_n = false, rejected_m = false;
    try {
        engine.load(len16, len15);
    } catch (const SizeError&) {
        rejected_n = true;
    }
    try {
        engine.load(len15, len16);
    } catch (const SizeError&) {
        rejected_m = true;
    }
    check(rejected_n, "n=16 was not rejected with a size error");
    check(rejected_m, "m=16 was not rejected with a size error");

    ConvResult r = run_convolution(len15, len15);
    check(r.y.size() == 29, "15x15 produced " + std::to_string(r.y.size()) + " outputs");
}

void criterion5_pipeline_equals_model() {
    std::mt19937_64 rng(0xF57);
    for (int n : {8, 64}) {
        FftConfig cfg;
        cfg.n_points = n;
        FftPipeline pipe(cfg);
        for (int frame_i = 0; frame_i < 200; ++frame_i) {
            std::vector<ComplexFixed> frame = random_frame(rng, cfg, 0.9);
            FftFrameResult res = run_frame(pipe, frame);
            std::vector<ComplexFixed> model = golden::fixed_dif(frame, cfg);
            check(res.spectrum == model, "pipeline != behavioral model at n=" +
                                             std::to_string(n) + " frame " +
                                             std::to_string(frame_i));
        }
    }
}

void criterion6_float_path() {
    std::mt19937_64 rng(0xF10A);
    for (int n = 2; n <= 4096; n *= 2) {
        for (int frame_i = 0; frame_i < 20; ++frame_i) {
            std::vector<golden::ComplexF> x(static_cast<size_t>(n));
            for (golden::ComplexF& v : x)
                v = golden::ComplexF(next_pm(rng, 1.0), next_pm(rng, 1.0));

            std::vector<golden::ComplexF> fast = golden::fft_dif_float(x);
            std::vector<golden::ComplexF> slow = golden::dft_naive(x);
            double worst = 0.0, scale = 0.0;
            double time_energy = 0.0, freq_energy = 0.0;
            for (size_t i = 0; i < x.size(); ++i) {
                worst = std::max(worst, std::abs(fast[i] - slow[i]));
                scale = std::max(scale, std::abs(slow[i]));
                time_energy += std::norm(x[i]);
                freq_energy += std::norm(slow[i]);
            }
            check(worst <= 1e-9 * std::max(1.0, scale),
                  "fft/dft relative error " + std::to_string(worst / scale) + " at n=" +
                      std::to_string(n));
            check(std::abs(freq_energy / n - time_energy) <= 1e-9 * time_energy,
                  "Parseval violated at n=" + std::to_string(n));
        }
    }
}

void criterion7_latency_contract() {
    FftConfig cfg; // 64-point default
    FftPipeline pipe(cfg);

    int depth_sum = 0;
    for (int i = 0; i < cfg.stage_count(); ++i) depth_sum += pipe.stage(i).depth();
    check(depth_sum == 63, "stage FIFO depths sum to " + std::to_string(depth_sum));

    std::mt19937_64 rng(7);
    std::vector<ComplexFixed> frame = random_frame(rng, cfg, 0.9);

    // Cycle trace: record when the last stage first validates and when the
    // sorted stream starts.
    int64_t first_final = -1, first_emit = -1;
    size_t emissions = 0;
    auto absorb = [&](const PipelineReport& rep) {
        int64_t now = static_cast<int64_t>(pipe.cycle()) - 1;
        if (rep.final_stage_valid && first_final < 0) first_final = now;
        if (rep.emitted) {
            if (first_emit < 0) first_emit = now;
            ++emissions;
        }
    };
    for (const ComplexFixed& s : frame) absorb(pipe.push_sample(s));
    for (int i = 0; i < 400 && emissions < 64; ++i) absorb(pipe.push_idle());

    check(emissions == 64, "frame did not drain");
    check(first_final == 63, "first final-stage output at cycle " +
                                 std::to_string(first_final) + ", expected 63");
    check(first_emit - first_final == 64, "sort consumed " +
                                              std::to_string(first_emit - first_final) +
                                              " cycles, expected 64");
}

void criterion8_snr_properties() {
    SnrBenchOptions base;
    base.trials = 100;
    base.seed = 2024;
    base.amplitude = 0.9;

    fs::path dump = fs::temp_directory_path() / "bsdsp_acceptance_snr";
    fs::create_directories(dump);
    SnrBenchOptions dumping = base;
    dumping.on_trial = [&dump](int trial, std::span<const golden::ComplexF> ref,
                               std::span<const ComplexFixed> test, double scale) {
        std::string bas = (dump / ("trial" + std::to_string(trial))).string();
        std::ofstream rf(bas + "_ref.txt");
        io::write_float_vector(rf, ref, scale);
        io::save_sample_file(bas + "_out.txt", io::from_complex(test));
    };

    SnrReport first = snr_bench(dumping);
    SnrReport second = snr_bench(base);
    check(snr_report_to_string(first) == snr_report_to_string(second),
          "report is not byte-deterministic for a fixed seed");

    SnrBenchOptions wide = base;
    wide.cfg.internal_fmt = Format(32, 30);
    SnrReport wide_report = snr_bench(wide);
    check(wide_report.mean_db >= first.mean_db - 0.1,
          "widening the datapath dropped mean SNR from " + std::to_string(first.mean_db) +
              " to " + std::to_string(wide_report.mean_db));

    SnrBenchOptions rounded = base;
    rounded.cfg.narrowing = Rounding::nearest_even;
    SnrReport rounded_report = snr_bench(rounded);
    check(rounded_report.mean_db >= first.mean_db - 0.1,
          "nearest-even narrowing dropped mean SNR from " + std::to_string(first.mean_db) +
              " to " + std::to_string(rounded_report.mean_db));

    // Recompute every trial from the files alone, with none of the library's
    // metric code in the loop.
    for (int trial = 0; trial < base.trials; ++trial) {
        std::string bas = (dump / ("trial" + std::to_string(trial))).string();
        io::FloatVector ref = io::load_float_vector(bas + "_ref.txt");
        io::SampleFile out = io::load_sample_file(bas + "_out.txt");
        check(ref.values.size() == 64 && out.re.size() == 64, "bad dump shape");
        double lsb = std::ldexp(1.0, -out.fmt.frac_bits);
        double sig = 0.0, err = 0.0;
        for (size_t i = 0; i < 64; ++i) {
            double re = static_cast<double>(out.re[i]) * lsb / ref.scale_factor;
            double im = static_cast<double>(out.im[i]) * lsb / ref.scale_factor;
            sig += std::norm(ref.values[i]);
            err += std::norm(ref.values[i] - golden::ComplexF(re, im));
        }
        double recomputed = 10.0 * std::log10(sig / err);
        double reported = first.per_trial_db[static_cast<size_t>(trial)];
        check(std::abs(recomputed - reported) < 1e-9,
              "trial " + std::to_string(trial) + " recomputed " +
                  std::to_string(recomputed) + " dB vs reported " +
                  std::to_string(reported) + " dB");
    }
}

void criterion9_twiddle_anchors() {
    Format q22(24, 22);
    TwiddleRom rom64 = gen_twiddle_rom(64, q22);
    check(rom64.entries[0].re.raw() == 0x400000 && rom64.entries[0].im.raw() == 0,
          "W^0 is not exactly +1.0");

    TwiddleRom rom8 = gen_twiddle_rom(8, q22);
    int64_t neg_one = rom8.entries[2].im.raw();
    check(rom8.entries[2].re.raw() == 0 &&
              (neg_one & 0xFFFFFF) == 0xC00000 && neg_one == -4194304,
          "W_8^2 is not exactly -j");

    const int64_t bound = int64_t{4194304 + 1} * int64_t{4194304 + 1};
    for (int n = 2; n <= 4096; n *= 2) {
        TwiddleRom rom = gen_twiddle_rom(n, q22);
        for (const ComplexFixed& w : rom.entries) {
            int64_t mag2 = w.re.raw() * w.re.raw() + w.im.raw() * w.im.raw();
            check(mag2 <= bound, "twiddle magnitude above 1 + 2^-22 at n=" +
                                     std::to_string(n));
        }
    }
}

void criterion10_throughput() {
    FftConfig cfg;
    FftPipeline pipe(cfg);
    std::mt19937_64 rng(0x7007);

    const int frames = 10000;
    std::vector<ComplexFixed> first_frame = random_frame(rng, cfg, 0.9);
    std::vector<ComplexFixed> last_frame;

    size_t emissions = 0;
    std::vector<ComplexFixed> first_got(64), last_got(64);
    auto absorb = [&](const PipelineReport& rep) {
        if (!rep.emitted) return;
        size_t frame_i = emissions / 64;
        if (frame_i == 0)
            first_got[static_cast<size_t>(rep.emitted->index)] = rep.emitted->value;
        if (frame_i == frames - 1)
            last_got[static_cast<size_t>(rep.emitted->index)] = rep.emitted->value;
        ++emissions;
    };

    for (int f = 0; f < frames; ++f) {
        std::vector<ComplexFixed> frame = f == 0 ? first_frame : random_frame(rng, cfg, 0.9);
        if (f == frames - 1) last_frame = frame;
        for (const ComplexFixed& s : frame) absorb(pipe.push_sample(s));
    }
    for (int i = 0; i < 400 && emissions < static_cast<size_t>(frames) * 64; ++i)
        absorb(pipe.push_idle());

    check(emissions == static_cast<size_t>(frames) * 64, "missing emissions: " +
                                                             std::to_string(emissions));
    check(first_got == golden::fixed_dif(first_frame, cfg), "first frame wrong");
    check(last_got == golden::fixed_dif(last_frame, cfg), "last frame wrong");
}

struct Criterion {
    int id;
    const char* label;
    double budget_seconds;
    std::function<void()> body;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "slicing multiplier exact for all 2^16 8-bit pairs", 5.0,
         criterion1_bsm_exhaustive_small},
        {2, "16-bit slicing multiplier matches wide multiply on 10^6 pairs + edges, "
            "16 partials each", 10.0, criterion2_bsm_paper_config},
        {3, "convolution engine equals direct sum for all sizes 1..15 x 1..15", 30.0,
         criterion3_conv_oracle_sweep},
        {4, "convolution size gate rejects 16 and emits 29 outputs at 15x15", 5.0,
         criterion4_conv_size_gate},
        {5, "streaming FFT bit-exact against behavioral model, 200 frames at n=8,64",
         30.0, criterion5_pipeline_equals_model},
        {6, "float FFT within 1e-9 of direct DFT for n=2..4096, Parseval holds", 60.0,
         criterion6_float_path},
        {7, "64-point latency exactly 63 cycles plus 64 sort cycles", 5.0,
         criterion7_latency_contract},
        {8, "SNR bench deterministic, monotone in width/rounding, recomputable", 60.0,
         criterion8_snr_properties},
        {9, "twiddle rom anchors exact and magnitudes bounded", 5.0,
         criterion9_twiddle_anchors},
        {10, "10^4 back-to-back 64-point frames", 5.0, criterion10_throughput},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        auto start = std::chrono::steady_clock::now();
        std::string failure;
        try {
            c.body();
        } catch (const std::exception& e) {
            failure = e.what();
        }
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (failure.empty() && elapsed >= c.budget_seconds)
            failure = "exceeded time budget of " + std::to_string(c.budget_seconds) + "s";
        if (failure.empty()) {
            std::printf("[PASS] criterion %d: %s (%.2fs)\n", c.id, c.label, elapsed);
        } else {
            std::printf("[FAIL] criterion %d: %s (%.2fs) — %s\n", c.id, c.label, elapsed,
                        failure.c_str());
            ++failures;
        }
    }
    if (failures == 0) {
        std::printf("all %zu criteria passed\n", criteria.size());
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
