#include "bsdsp/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bsdsp::io {

namespace {

// Parses "key=<integer>" returning the integer; FormatError on mismatch.
int64_t parse_kv(std::istringstream& line, const std::string& key, const char* context) {
    std::string token;
    if (!(line >> token) || token.rfind(key + "=", 0) != 0)
        throw FormatError(std::string(context) + ": expected " + key + "=<value>");
    try {
        return std::stoll(token.substr(key.size() + 1));
    } catch (const std::exception&) {
        throw FormatError(std::string(context) + ": bad integer for " + key);
    }
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ArgumentError("cannot open " + path);
    return is;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw ArgumentError("cannot open " + path + " for writing");
    return os;
}

void check_range(int64_t raw, const Format& fmt) {
    if (raw < fmt.min_raw() || raw > fmt.max_raw())
        throw FormatError("sample file: raw count " + std::to_string(raw) +
                          " outside the header format");
}

} // namespace

SampleFile read_sample_file(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("sample file: missing header");
    std::istringstream header(line);
    std::string hash, fmt_word;
    if (!(header >> hash >> fmt_word) || hash != "#" || fmt_word != "fmt")
        throw FormatError("sample file: header must start with '# fmt'");
    int total = static_cast<int>(parse_kv(header, "total", "sample file"));
    int frac = static_cast<int>(parse_kv(header, "frac", "sample file"));
    int complex_flag = static_cast<int>(parse_kv(header, "complex", "sample file"));
    if (complex_flag != 0 && complex_flag != 1)
        throw FormatError("sample file: complex must be 0 or 1");

    SampleFile f;
    try {
        f.fmt = Format(total, frac);
    } catch (const FormatError& e) {
        throw FormatError(std::string("sample file: ") + e.what());
    }
    f.complex = complex_flag == 1;

    size_t line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string first;
        if (!(row >> first)) continue;       // blank line
        if (first[0] == '#') continue;       // comment
        int64_t re_raw = 0, im_raw = 0;
        try {
            re_raw = std::stoll(first);
        } catch (const std::exception&) {
            throw FormatError("sample file line " + std::to_string(line_no) + ": bad raw count");
        }
        if (f.complex) {
            if (!(row >> im_raw))
                throw FormatError("sample file line " + std::to_string(line_no) +
                                  ": complex sample needs two raw counts");
        }
        std::string extra;
        if (row >> extra)
            throw FormatError("sample file line " + std::to_string(line_no) + ": trailing tokens");
        check_range(re_raw, f.fmt);
        f.re.push_back(re_raw);
        if (f.complex) {
            check_range(im_raw, f.fmt);
            f.im.push_back(im_raw);
        }
    }
    return f;
}

SampleFile load_sample_file(const std::string& path) {
    std::ifstream is = open_in(path);
    return read_sample_file(is);
}

void write_sample_file(std::ostream& os, const SampleFile& f) {
    os << "# fmt total=" << f.fmt.total_bits << " frac=" << f.fmt.frac_bits
       << " complex=" << (f.complex ? 1 : 0) << "\n";
    for (size_t i = 0; i < f.re.size(); ++i) {
        os << f.re[i];
        if (f.complex) os << " " << f.im[i];
        os << "\n";
    }
}

void save_sample_file(const std::string& path, const SampleFile& f) {
    std::ofstream os = open_out(path);
    write_sample_file(os, f);
}

std::vector<FixedWord> to_words(const SampleFile& f) {
    if (f.complex) throw FormatError("expected a real sample file");
    std::vector<FixedWord> out;
    out.reserve(f.re.size());
    for (int64_t raw : f.re) out.emplace_back(raw, f.fmt);
    return out;
}

std::vector<ComplexFixed> to_complex(const SampleFile& f) {
    if (!f.complex) throw FormatError("expected a complex sample file");
    std::vector<ComplexFixed> out;
    out.reserve(f.re.size());
    for (size_t i = 0; i < f.re.size(); ++i)
        out.emplace_back(FixedWord(f.re[i], f.fmt), FixedWord(f.im[i], f.fmt));
    return out;
}

SampleFile from_words(std::span<const FixedWord> words) {
    SampleFile f;
    f.complex = false;
    if (!words.empty()) f.fmt = words.front().fmt();
    f.re.reserve(words.size());
    for (const FixedWord& w : words) {
        if (!(w.fmt() == f.fmt)) throw FormatError("mixed formats in one sample file");
        f.re.push_back(w.raw());
    }
    return f;
}

SampleFile from_complex(std::span<const ComplexFixed> samples) {
    SampleFile f;
    f.complex = true;
    if (!samples.empty()) f.fmt = samples.front().fmt();
    f.re.reserve(samples.size());
    f.im.reserve(samples.size());
    for (const ComplexFixed& s : samples) {
        if (!(s.fmt() == f.fmt)) throw FormatError("mixed formats in one sample file");
        f.re.push_back(s.re.raw());
        f.im.push_back(s.im.raw());
    }
    return f;
}

namespace {

std::string hex_word(uint64_t v, int digits) {
    static const char* kHex = "0123456789ABCDEF";
    std::string out(static_cast<size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
        out[static_cast<size_t>(i)] = kHex[v & 0xF];
        v >>= 4;
    }
    return out;
}

} // namespace

void write_twiddle_rom(std::ostream& os, const TwiddleRom& rom) {
    if (rom.entries.empty()) throw ArgumentError("twiddle dump: empty rom");
    const Format& fmt = rom.entries.front().fmt();
    const int digits = (fmt.total_bits + 3) / 4;
    const uint64_t mask = (uint64_t{1} << fmt.total_bits) - 1;
    os << "# fmt total=" << fmt.total_bits << " frac=" << fmt.frac_bits
       << " n=" << rom.n_stage << "\n";
    for (size_t k = 0; k < rom.entries.size(); ++k) {
        uint64_t re = static_cast<uint64_t>(rom.entries[k].re.raw()) & mask;
        uint64_t im = static_cast<uint64_t>(rom.entries[k].im.raw()) & mask;
        os << k << " " << hex_word(re, digits) << " " << hex_word(im, digits) << "\n";
    }
}

void write_float_vector(std::ostream& os, std::span<const golden::ComplexF> values,
                        double scale_factor) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "# vec n=%zu scale_factor=%.17g\n", values.size(),
                  scale_factor);
    os << buf;
    for (const golden::ComplexF& v : values) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g\n", v.real(), v.imag());
        os << buf;
    }
}

FloatVector read_float_vector(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw FormatError("float vector: missing header");
    std::istringstream header(line);
    std::string hash, vec_word, n_token, scale_token;
    if (!(header >> hash >> vec_word >> n_token >> scale_token) || hash != "#" ||
        vec_word != "vec" || n_token.rfind("n=", 0) != 0 ||
        scale_token.rfind("scale_factor=", 0) != 0)
        throw FormatError("float vector: bad header");
    FloatVector out;
    size_t n = 0;
    try {
        n = static_cast<size_t>(std::stoull(n_token.substr(2)));
        out.scale_factor = std::stod(scale_token.substr(13));
    } catch (const std::exception&) {
        throw FormatError("float vector: bad header numbers");
    }
    out.values.reserve(n);
    while (std::getline(is, line)) {
        std::istringstream row(line);
        double re, im;
        if (!(row >> re >> im)) {
            std::istringstream probe(line);
            std::string any;
            if (probe >> any) throw FormatError("float vector: bad row");
            continue;
        }
        out.values.emplace_back(re, im);
    }
    if (out.values.size() != n) throw FormatError("float vector: row count != n");
    return out;
}

FloatVector load_float_vector(const std::string& path) {
    std::ifstream is = open_in(path);
    return read_float_vector(is);
}

} // namespace bsdsp::io
