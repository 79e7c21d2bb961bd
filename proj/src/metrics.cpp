#include "bsdsp/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

namespace bsdsp {

namespace {

// Uniform double in [-1, 1) built directly from the top 53 bits of the
// engine output. std::uniform_real_distribution is implementation-defined;
// this mapping is pinned so reports stay identical across toolchains.
double uniform_pm1(std::mt19937_64& rng) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
    return 2.0 * u - 1.0;
}

const char* scaling_name(Scaling s) {
    return s == Scaling::per_stage_half ? "per-stage-half" : "none-wrap";
}

const char* rounding_name(Rounding r) {
    return r == Rounding::truncate ? "truncate" : "nearest-even";
}

void append_db(std::string& out, double db) {
    if (std::isinf(db) && db > 0) {
        out += "exact";
        return;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12f", db);
    out += buf;
}

} // namespace

double snr_db(std::span<const golden::ComplexF> reference,
              std::span<const ComplexFixed> test, double scale_factor) {
    if (reference.size() != test.size())
        throw ArgumentError("snr_db: reference and test lengths differ");
    if (reference.empty()) throw ArgumentError("snr_db: empty spectra");
    if (scale_factor == 0.0) throw ArgumentError("snr_db: zero scale factor");
    double signal = 0.0;
    double error = 0.0;
    for (size_t i = 0; i < reference.size(); ++i) {
        golden::ComplexF t(test[i].re.to_double() / scale_factor,
                           test[i].im.to_double() / scale_factor);
        signal += std::norm(reference[i]);
        error += std::norm(reference[i] - t);
    }
    if (signal == 0.0) throw ArgumentError("snr_db: reference power is zero");
    if (error == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / error);
}

SnrReport snr_bench(const SnrBenchOptions& opts) {
    opts.cfg.validate();
    if (opts.trials < 1) throw ArgumentError("snr_bench: trials must be positive");
    if (!(opts.amplitude > 0.0) || opts.amplitude > 1.0)
        throw ArgumentError("snr_bench: amplitude must be in (0, 1]");

    const int n = opts.cfg.n_points;
    std::mt19937_64 rng(opts.seed);
    FftPipeline pipeline(opts.cfg);

    SnrReport report;
    report.per_trial_db.reserve(static_cast<size_t>(opts.trials));
    report.trials = opts.trials;
    report.seed = opts.seed;
    report.amplitude = opts.amplitude;
    report.reference_quantized = opts.reference_quantized;
    report.cfg = opts.cfg;

    std::vector<ComplexFixed> frame(static_cast<size_t>(n));
    std::vector<golden::ComplexF> ref_input(static_cast<size_t>(n));
    double sum = 0.0;
    for (int trial = 0; trial < opts.trials; ++trial) {
        for (int i = 0; i < n; ++i) {
            double re = opts.amplitude * uniform_pm1(rng);
            double im = opts.amplitude * uniform_pm1(rng);
            FixedWord qre = make_fixed(re, opts.cfg.sample_fmt, Rounding::nearest_even);
            FixedWord qim = make_fixed(im, opts.cfg.sample_fmt, Rounding::nearest_even);
            frame[static_cast<size_t>(i)] = ComplexFixed(qre, qim);
            ref_input[static_cast<size_t>(i)] =
                opts.reference_quantized ? golden::ComplexF(qre.to_double(), qim.to_double())
                                         : golden::ComplexF(re, im);
        }
        std::vector<golden::ComplexF> reference = golden::dft_naive(ref_input);
        FftFrameResult res = run_frame(pipeline, frame);
        double db = snr_db(reference, res.spectrum, res.scale_factor);
        report.per_trial_db.push_back(db);
        sum += db;
        if (opts.on_trial) opts.on_trial(trial, reference, res.spectrum, res.scale_factor);
    }
    report.mean_db = sum / opts.trials;
    return report;
}

std::string snr_report_to_string(const SnrReport& report) {
    std::string out;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "# snr-bench n=%d trials=%d seed=%llu amplitude=%.6f sample=%d.%d "
                  "twiddle=%d.%d internal=%d.%d scaling=%s narrowing=%s reference=%s\n",
                  report.cfg.n_points, report.trials,
                  static_cast<unsigned long long>(report.seed), report.amplitude,
                  report.cfg.sample_fmt.total_bits, report.cfg.sample_fmt.frac_bits,
                  report.cfg.twiddle_fmt.total_bits, report.cfg.twiddle_fmt.frac_bits,
                  report.cfg.internal_fmt.total_bits, report.cfg.internal_fmt.frac_bits,
                  scaling_name(report.cfg.scaling), rounding_name(report.cfg.narrowing),
                  report.reference_quantized ? "quantized-input" : "raw-input");
    out += buf;
    for (size_t i = 0; i < report.per_trial_db.size(); ++i) {
        std::snprintf(buf, sizeof buf, "trial=%zu snr_db=", i);
        out += buf;
        append_db(out, report.per_trial_db[i]);
        out += '\n';
    }
    out += "mean_db=";
    append_db(out, report.mean_db);
    out += '\n';
    return out;
}

void write_snr_report(std::ostream& os, const SnrReport& report) {
    os << snr_report_to_string(report);
}

} // namespace bsdsp
