#pragma once

#include <stdexcept>

namespace bsdsp {

// An argument is outside its documented range (bad multiplier operand,
// invalid slice geometry, zero trial count, ...).
struct ArgumentError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-point format violation: illegal widths, mismatched operand formats,
// raw counts outside the representable range, malformed file headers.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An input or kernel exceeds a hardware size limit, or a frame has the
// wrong length.
struct SizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Raised by the CLI self-check modes when implementation and oracle disagree.
struct SelfCheckError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace bsdsp
