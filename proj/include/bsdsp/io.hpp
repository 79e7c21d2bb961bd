#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "bsdsp/fft_pipeline.hpp"
#include "bsdsp/fixedpoint.hpp"
#include "bsdsp/golden_models.hpp"

// Text formats shared by the command-line tools and the tests.
//
// Sample file: first line "# fmt total=<B> frac=<F> complex=<0|1>", then one
// sample per line as signed decimal raw counts ("<re>" or "<re> <im>").
// Later '#' lines are comments. Every raw count must fit the header format.
//
// Twiddle dump: first line "# fmt total=<B> frac=<F> n=<N>", then one entry
// per line as "<index> <re_hex> <im_hex>" with two's-complement uppercase
// hex, ceil(B/4) digits.
//
// Float vector: first line "# vec n=<N> scale_factor=<...>", then "<re>
// <im>" per line printed with %.17g so doubles round-trip exactly.
namespace bsdsp::io {

struct SampleFile {
    Format fmt;
    bool complex = false;
    std::vector<int64_t> re;
    std::vector<int64_t> im; // empty for real files

    size_t size() const { return re.size(); }
};

SampleFile read_sample_file(std::istream& is);
SampleFile load_sample_file(const std::string& path);
void write_sample_file(std::ostream& os, const SampleFile& f);
void save_sample_file(const std::string& path, const SampleFile& f);

std::vector<FixedWord> to_words(const SampleFile& f);
std::vector<ComplexFixed> to_complex(const SampleFile& f);
SampleFile from_words(std::span<const FixedWord> words);
SampleFile from_complex(std::span<const ComplexFixed> samples);

void write_twiddle_rom(std::ostream& os, const TwiddleRom& rom);

struct FloatVector {
    double scale_factor = 1.0;
    std::vector<golden::ComplexF> values;
};

void write_float_vector(std::ostream& os, std::span<const golden::ComplexF> values,
                        double scale_factor);
FloatVector read_float_vector(std::istream& is);
FloatVector load_float_vector(const std::string& path);

} // namespace bsdsp::io
