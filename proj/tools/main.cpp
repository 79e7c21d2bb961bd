// Command-line front end: multiply through the slicing LUT bank, convolve
// sample files through the streaming engine, FFT a frame through the
// single-path delay pipeline, dump twiddle ROMs, and run the SNR bench.
//
// Exit codes: 0 success, 1 internal error, 2 argument error, 3 format error,
// 4 size error, 5 self-check mismatch.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bsdsp/bsm.hpp"
#include "bsdsp/conv_engine.hpp"
#include "bsdsp/errors.hpp"
#include "bsdsp/fft_pipeline.hpp"
#include "bsdsp/golden_models.hpp"
#include "bsdsp/io.hpp"
#include "bsdsp/metrics.hpp"

namespace {

using namespace bsdsp;

struct MulArgs {
    int64_t x = 0;
    int64_t y = 0;
    bool partials = false;
};

struct ConvArgs {
    std::string x_path;
    std::string h_path;
    std::string out_path;
    std::string trace_path;
    bool oracle = false;
};

struct FftArgs {
    std::string frame_path;
    std::string out_path;
    std::string trace_path;
    std::string golden; // "", "fixed", "naive"
    std::string scaling = "per-stage-half";
    std::string narrowing = "truncate";
    int twiddle_total = 24;
    int twiddle_frac = 22;
    int internal_total = 24;
    int internal_frac = 22;
};

struct TwiddleArgs {
    int n = 64;
    int total = 24;
    int frac = 22;
    std::string out_path;
};

struct BenchArgs {
    int n = 64;
    int trials = 100;
    uint64_t seed = 0;
    double amplitude = 0.9;
    bool raw_reference = false;
    std::string scaling = "per-stage-half";
    std::string narrowing = "truncate";
    int sample_total = 12;
    int sample_frac = 11;
    int twiddle_total = 24;
    int twiddle_frac = 22;
    int internal_total = 24;
    int internal_frac = 22;
    std::string out_path;
    std::string dump_dir;
};

Scaling parse_scaling(const std::string& s) {
    if (s == "per-stage-half") return Scaling::per_stage_half;
    if (s == "none-wrap") return Scaling::none_wrap;
    throw ArgumentError("scaling must be per-stage-half or none-wrap, got '" + s + "'");
}

Rounding parse_narrowing(const std::string& s) {
    if (s == "truncate") return Rounding::truncate;
    if (s == "nearest-even") return Rounding::nearest_even;
    throw ArgumentError("narrowing must be truncate or nearest-even, got '" + s + "'");
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path);
    if (!os) throw ArgumentError("cannot open " + path + " for writing");
    os << text;
}

int run_mul(const MulArgs& args) {
    if (args.x < -32768 || args.x > 32767 || args.y < -32768 || args.y > 32767)
        throw ArgumentError("operands must fit a signed 16-bit word");
    Format i16(16, 0);
    FixedWord x(args.x, i16), y(args.y, i16);
    const LutBank& bank = lut_bank_16x16();
    if (args.partials) {
        uint64_t mag_x = static_cast<uint64_t>(args.x < 0 ? -args.x : args.x);
        uint64_t mag_y = static_cast<uint64_t>(args.y < 0 ? -args.y : args.y);
        BsmProduct p = bsm_mul_unsigned(mag_x, mag_y, bank);
        int t = p.params.slice_count;
        for (int i = 0; i < t; ++i)
            for (int k = 0; k < t; ++k)
                std::cout << "partial i=" << i << " k=" << k << " value="
                          << p.partials[static_cast<size_t>(i) * t + k] << "\n";
    }
    std::cout << bsm_mul_signed(x, y, bank).raw() << "\n";
    return 0;
}

int run_conv(const ConvArgs& args) {
    io::SampleFile xf = io::load_sample_file(args.x_path);
    io::SampleFile hf = io::load_sample_file(args.h_path);
    std::vector<FixedWord> x = io::to_words(xf);
    std::vector<FixedWord> h = io::to_words(hf);

    ConvEngine engine;
    engine.load(x, h);

    std::ostringstream trace;
    trace << "# cycle routed emit_idx emit rcv\n";
    std::vector<int32_t> y;
    while (!engine.finished()) {
        ConvStepReport rep = engine.step();
        trace << "cycle=" << engine.cycle() - 1 << " routed=";
        if (rep.products_routed.empty()) {
            trace << "-";
        } else {
            for (size_t i = 0; i < rep.products_routed.size(); ++i) {
                if (i) trace << ";";
                trace << rep.products_routed[i].index << ":" << rep.products_routed[i].value;
            }
        }
        if (rep.emitted) {
            trace << " emit_idx=" << rep.emitted->index << " emit=" << rep.emitted->value;
            y.push_back(rep.emitted->value);
        } else {
            trace << " emit_idx=- emit=0";
        }
        trace << " rcv=" << (rep.rcv ? 1 : 0) << "\n";
    }
    bool overflow = false;
    for (bool f : engine.overflow_flags()) overflow = overflow || f;

    if (args.oracle) {
        std::vector<int64_t> xr(xf.re), hr(hf.re);
        std::vector<int64_t> exact = golden::direct_conv(xr, hr);
        bool all_ok = true;
        for (size_t t = 0; t < y.size(); ++t) {
            int32_t wrapped = static_cast<int32_t>(static_cast<uint32_t>(exact[t]));
            bool ok = y[t] == wrapped;
            all_ok = all_ok && ok;
            std::cout << "t=" << t << " engine=" << y[t] << " oracle=" << exact[t]
                      << " ok=" << (ok ? 1 : 0) << "\n";
        }
        if (!all_ok) throw SelfCheckError("engine output differs from the direct sum");
        std::cout << "oracle=match\n";
    }

    io::SampleFile out;
    out.fmt = Format(kConvAccBits, xf.fmt.frac_bits + hf.fmt.frac_bits);
    out.complex = false;
    for (int32_t v : y) out.re.push_back(v);
    std::ostringstream body;
    io::write_sample_file(body, out);
    body << "# outputs=" << y.size() << " cycles=" << engine.cycle()
         << " overflow=" << (overflow ? 1 : 0) << "\n";

    if (!args.out_path.empty()) {
        write_text_file(args.out_path, body.str());
        std::cout << "outputs=" << y.size() << " cycles=" << engine.cycle()
                  << " overflow=" << (overflow ? 1 : 0) << "\n";
    } else {
        std::cout << body.str();
    }
    if (!args.trace_path.empty()) write_text_file(args.trace_path, trace.str());
    return 0;
}

int run_fft(const FftArgs& args) {
    io::SampleFile ff = io::load_sample_file(args.frame_path);
    std::vector<ComplexFixed> frame = io::to_complex(ff);

    FftConfig cfg;
    cfg.n_points = static_cast<int>(frame.size());
    cfg.sample_fmt = ff.fmt;
    cfg.twiddle_fmt = Format(args.twiddle_total, args.twiddle_frac);
    cfg.internal_fmt = Format(args.internal_total, args.internal_frac);
    cfg.scaling = parse_scaling(args.scaling);
    cfg.narrowing = parse_narrowing(args.narrowing);
    cfg.validate();

    const size_t n = frame.size();
    FftPipeline pipe(cfg);
    std::vector<ComplexFixed> spectrum(n);
    std::ostringstream trace;
    trace << "# cycle stage_valids emit_idx emit rcv\n";

    size_t got = 0;
    uint64_t first_output_cycle = 0, first_emit_cycle = 0;
    bool saw_output = false, saw_emit = false;
    auto absorb = [&](const PipelineReport& rep) {
        uint64_t now = pipe.cycle() - 1;
        if (rep.final_stage_valid && !saw_output) {
            first_output_cycle = now;
            saw_output = true;
        }
        trace << "cycle=" << now << " stage_valids=";
        for (int s = 0; s < rep.stage_count; ++s) trace << (rep.stage_valid(s) ? '1' : '0');
        if (rep.emitted) {
            if (!saw_emit) {
                first_emit_cycle = now;
                saw_emit = true;
            }
            spectrum[static_cast<size_t>(rep.emitted->index)] = rep.emitted->value;
            ++got;
            trace << " emit_idx=" << rep.emitted->index << " emit="
                  << rep.emitted->value.re.raw() << "," << rep.emitted->value.im.raw();
        } else {
            trace << " emit_idx=- emit=0,0";
        }
        trace << " rcv=" << (rep.emitted ? 1 : 0) << "\n";
    };

    for (const ComplexFixed& s : frame) absorb(pipe.push_sample(s));
    uint64_t guard = 4 * n + 64;
    while (got < n && guard-- > 0) absorb(pipe.push_idle());
    if (got != n) throw SelfCheckError("pipeline failed to drain the frame");

    uint64_t latency = first_output_cycle;
    uint64_t sort_cycles = first_emit_cycle - first_output_cycle;

    if (args.golden == "fixed") {
        std::vector<ComplexFixed> model = golden::fixed_dif(frame, cfg);
        if (!(spectrum == model))
            throw SelfCheckError("pipeline spectrum differs from the behavioral model");
        std::cout << "golden=fixed match\n";
    } else if (args.golden == "naive") {
        std::vector<golden::ComplexF> input(n);
        for (size_t i = 0; i < n; ++i)
            input[i] = golden::ComplexF(frame[i].re.to_double(), frame[i].im.to_double());
        double db = snr_db(golden::dft_naive(input), spectrum, cfg.scale_factor());
        char buf[64];
        if (std::isinf(db))
            std::snprintf(buf, sizeof buf, "snr_db=exact");
        else
            std::snprintf(buf, sizeof buf, "snr_db=%.12f", db);
        std::cout << buf << "\n";
    } else if (!args.golden.empty()) {
        throw ArgumentError("--golden must be fixed or naive, got '" + args.golden + "'");
    }

    std::ostringstream body;
    io::write_sample_file(body, io::from_complex(spectrum));
    char summary[128];
    std::snprintf(summary, sizeof summary,
                  "latency_cycles=%llu sort_cycles=%llu scale_factor=%.17g",
                  static_cast<unsigned long long>(latency),
                  static_cast<unsigned long long>(sort_cycles), cfg.scale_factor());
    body << "# " << summary << "\n";

    if (!args.out_path.empty()) {
        write_text_file(args.out_path, body.str());
        std::cout << summary << "\n";
    } else {
        std::cout << body.str();
    }
    if (!args.trace_path.empty()) write_text_file(args.trace_path, trace.str());
    return 0;
}

int run_twiddle_gen(const TwiddleArgs& args) {
    TwiddleRom rom = gen_twiddle_rom(args.n, Format(args.total, args.frac));
    std::ostringstream os;
    io::write_twiddle_rom(os, rom);
    if (!args.out_path.empty())
        write_text_file(args.out_path, os.str());
    else
        std::cout << os.str();
    return 0;
}

int run_snr_bench(const BenchArgs& args) {
    SnrBenchOptions opts;
    opts.cfg.n_points = args.n;
    opts.cfg.sample_fmt = Format(args.sample_total, args.sample_frac);
    opts.cfg.twiddle_fmt = Format(args.twiddle_total, args.twiddle_frac);
    opts.cfg.internal_fmt = Format(args.internal_total, args.internal_frac);
    opts.cfg.scaling = parse_scaling(args.scaling);
    opts.cfg.narrowing = parse_narrowing(args.narrowing);
    opts.trials = args.trials;
    opts.seed = args.seed;
    opts.amplitude = args.amplitude;
    opts.reference_quantized = !args.raw_reference;

    if (!args.dump_dir.empty()) {
        std::filesystem::create_directories(args.dump_dir);
        std::string dir = args.dump_dir;
        opts.on_trial = [dir](int trial, std::span<const golden::ComplexF> ref,
                              std::span<const ComplexFixed> test, double scale) {
            std::string base = dir + "/trial" + std::to_string(trial);
            std::ofstream rf(base + "_ref.txt");
            if (!rf) throw ArgumentError("cannot open " + base + "_ref.txt for writing");
            io::write_float_vector(rf, ref, scale);
            io::SampleFile tf = io::from_complex(test);
            io::save_sample_file(base + "_out.txt", tf);
        };
    }

    SnrReport report = snr_bench(opts);
    std::string text = snr_report_to_string(report);
    std::cout << text;
    if (!args.out_path.empty()) write_text_file(args.out_path, text);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-point DSP engines: slicing multiplier, streaming convolver, "
                 "pipelined FFT"};
    app.require_subcommand(1);

    MulArgs mul_args;
    CLI::App* mul = app.add_subcommand("mul", "multiply two signed 16-bit words");
    mul->add_option("x", mul_args.x, "first operand")->required();
    mul->add_option("y", mul_args.y, "second operand")->required();
    mul->add_flag("--partials", mul_args.partials, "print the shifted partial products");

    ConvArgs conv_args;
    CLI::App* conv = app.add_subcommand("conv", "convolve two real sample files");
    conv->add_option("input", conv_args.x_path, "input sample file")->required();
    conv->add_option("kernel", conv_args.h_path, "kernel sample file")->required();
    conv->add_option("-o,--out", conv_args.out_path, "output sample file");
    conv->add_option("--trace", conv_args.trace_path, "write a per-cycle trace");
    conv->add_flag("--oracle", conv_args.oracle, "check against the direct sum");

    FftArgs fft_args;
    CLI::App* fft = app.add_subcommand("fft", "transform one complex frame");
    fft->add_option("frame", fft_args.frame_path, "complex sample file")->required();
    fft->add_option("-o,--out", fft_args.out_path, "output spectrum file");
    fft->add_option("--trace", fft_args.trace_path, "write a per-cycle trace");
    fft->add_option("--golden", fft_args.golden, "self-check: fixed or naive");
    fft->add_option("--scaling", fft_args.scaling, "per-stage-half or none-wrap");
    fft->add_option("--narrowing", fft_args.narrowing, "truncate or nearest-even");
    fft->add_option("--twiddle-total", fft_args.twiddle_total, "twiddle word bits");
    fft->add_option("--twiddle-frac", fft_args.twiddle_frac, "twiddle fraction bits");
    fft->add_option("--internal-total", fft_args.internal_total, "datapath word bits");
    fft->add_option("--internal-frac", fft_args.internal_frac, "datapath fraction bits");

    TwiddleArgs tw_args;
    CLI::App* tw = app.add_subcommand("twiddle-gen", "dump a twiddle rom");
    tw->add_option("--n", tw_args.n, "transform size")->required();
    tw->add_option("--total", tw_args.total, "word bits");
    tw->add_option("--frac", tw_args.frac, "fraction bits");
    tw->add_option("-o,--out", tw_args.out_path, "output file");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("snr-bench", "run the pipeline SNR benchmark");
    bench->add_option("--n", bench_args.n, "transform size");
    bench->add_option("--trials", bench_args.trials, "number of random frames");
    bench->add_option("--seed", bench_args.seed, "generator seed");
    bench->add_option("--amplitude", bench_args.amplitude, "input amplitude in (0,1]");
    bench->add_flag("--raw-reference", bench_args.raw_reference,
                    "compare against the unquantized frame");
    bench->add_option("--scaling", bench_args.scaling, "per-stage-half or none-wrap");
    bench->add_option("--narrowing", bench_args.narrowing, "truncate or nearest-even");
    bench->add_option("--sample-total", bench_args.sample_total, "sample word bits");
    bench->add_option("--sample-frac", bench_args.sample_frac, "sample fraction bits");
    bench->add_option("--twiddle-total", bench_args.twiddle_total, "twiddle word bits");
    bench->add_option("--twiddle-frac", bench_args.twiddle_frac, "twiddle fraction bits");
    bench->add_option("--internal-total", bench_args.internal_total, "datapath word bits");
    bench->add_option("--internal-frac", bench_args.internal_frac, "datapath fraction bits");
    bench->add_option("--out", bench_args.out_path, "also write the report here");
    bench->add_option("--dump-vectors", bench_args.dump_dir,
                      "write per-trial reference/output vectors into this directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (mul->parsed()) return run_mul(mul_args);
        if (conv->parsed()) return run_conv(conv_args);
        if (fft->parsed()) return run_fft(fft_args);
        if (tw->parsed()) return run_twiddle_gen(tw_args);
        if (bench->parsed()) return run_snr_bench(bench_args);
    } catch (const SelfCheckError& e) {
        std::cerr << "self-check failed: " << e.what() << "\n";
        return 5;
    } catch (const SizeError& e) {
        std::cerr << "size error: " << e.what() << "\n";
        return 4;
    } catch (const FormatError& e) {
        std::cerr << "format error: " << e.what() << "\n";
        return 3;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
