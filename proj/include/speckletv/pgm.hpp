#pragma once

#include <stdexcept>
#include <string>

#include "speckletv/image.hpp"

namespace speckletv {

enum class PgmErrorKind { Io, BadHeader, UnsupportedDepth, Truncated };

class PgmError : public std::runtime_error {
public:
    PgmError(PgmErrorKind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    PgmErrorKind kind() const { return kind_; }

private:
    PgmErrorKind kind_;
};

/// Reads a binary (P5) or ASCII (P2) grayscale image with maxval <= 255.
/// With floor_zeros set, zero pixels are lifted to 1 so downstream ratio and
/// log operations stay defined; the number of lifted pixels is reported
/// through floored when given.
Image read_pgm(const std::string& path, bool floor_zeros = true, long long* floored = nullptr);

/// Writes binary P5 at depth 255; values are clamped to [0,255] and rounded
/// half away from zero.
void write_pgm(const std::string& path, const Image& img);

}  // namespace speckletv
