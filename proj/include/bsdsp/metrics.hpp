#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsdsp/fft_pipeline.hpp"
#include "bsdsp/golden_models.hpp"

namespace bsdsp {

// 10*log10(signal power / error power) between a double-precision reference
// spectrum and a fixed-point spectrum. Fixed values are mapped to real
// through their format and divided by scale_factor first (undoing
// per-stage-half scaling). An exact match returns +infinity, rendered as
// "exact" in reports; an all-zero reference is degenerate and rejected.
double snr_db(std::span<const golden::ComplexF> reference,
              std::span<const ComplexFixed> test, double scale_factor);

// Per-trial hook: reference spectrum, pipeline spectrum, scale factor.
// Used to dump vectors for external recomputation.
using SnrTrialObserver = std::function<void(
    int trial, std::span<const golden::ComplexF> reference,
    std::span<const ComplexFixed> test, double scale_factor)>;

struct SnrBenchOptions {
    FftConfig cfg;
    int trials = 100;
    uint64_t seed = 0;
    double amplitude = 0.9;          // of full scale, in (0, 1]
    bool reference_quantized = true; // reference sees the already-quantized
                                     // frame, isolating datapath noise; false
                                     // compares against the raw real frame
    SnrTrialObserver on_trial;
};

struct SnrReport {
    std::vector<double> per_trial_db;
    double mean_db = 0.0;
    int trials = 0;
    uint64_t seed = 0;
    double amplitude = 0.0;
    bool reference_quantized = true;
    FftConfig cfg;
};

// Runs `trials` random frames through one streaming pipeline against the
// O(N^2) reference. Frames are uniform complex samples with |re|, |im| <=
// amplitude, drawn from a fixed-algorithm generator seeded by `seed`, so a
// report is reproducible bit for bit.
SnrReport snr_bench(const SnrBenchOptions& opts);

// Deterministic ASCII rendering: header line, one trial per line, mean last.
void write_snr_report(std::ostream& os, const SnrReport& report);
std::string snr_report_to_string(const SnrReport& report);

} // namespace bsdsp
