#include "speckletv/pgm.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace speckletv {

namespace {

// Skips whitespace and # comments, then parses one nonnegative integer token.
bool next_int(const std::string& s, size_t& pos, long& out) {
    while (pos < s.size()) {
        unsigned char c = s[pos];
        if (c == '#') {
            while (pos < s.size() && s[pos] != '\n') ++pos;
        } else if (std::isspace(c)) {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        v = v * 10 + (s[pos] - '0');
        if (v > 1000000000L) return false;
        ++pos;
    }
    out = v;
    return true;
}

}  // namespace

Image read_pgm(const std::string& path, bool floor_zeros, long long* floored) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PgmError(PgmErrorKind::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string s = buf.str();

    if (s.size() < 2 || s[0] != 'P' || (s[1] != '5' && s[1] != '2'))
        throw PgmError(PgmErrorKind::BadHeader, path + ": not a P5/P2 file");
    const bool binary = s[1] == '5';
    size_t pos = 2;

    long w = 0, h = 0, maxval = 0;
    if (!next_int(s, pos, w) || !next_int(s, pos, h) || !next_int(s, pos, maxval))
        throw PgmError(PgmErrorKind::BadHeader, path + ": malformed header");
    if (w < 1 || h < 1 || maxval < 1)
        throw PgmError(PgmErrorKind::BadHeader, path + ": bad dimensions or depth");
    if (maxval > 255)
        throw PgmError(PgmErrorKind::UnsupportedDepth,
                       path + ": depth " + std::to_string(maxval) + " exceeds 255");

    Image img(static_cast<int>(h), static_cast<int>(w));
    const size_t n = img.v.size();
    if (binary) {
        ++pos;  // single whitespace byte after maxval
        if (pos + n > s.size())
            throw PgmError(PgmErrorKind::Truncated, path + ": pixel data cut short");
        for (size_t p = 0; p < n; ++p)
            img.v[p] = static_cast<double>(static_cast<unsigned char>(s[pos + p]));
    } else {
        for (size_t p = 0; p < n; ++p) {
            long v = 0;
            if (!next_int(s, pos, v))
                throw PgmError(PgmErrorKind::Truncated, path + ": pixel data cut short");
            if (v > maxval)
                throw PgmError(PgmErrorKind::BadHeader, path + ": sample above depth");
            img.v[p] = static_cast<double>(v);
        }
    }

    long long lifted = 0;
    if (floor_zeros) {
        for (double& x : img.v)
            if (x == 0.0) {
                x = 1.0;
                ++lifted;
            }
    }
    if (floored) *floored = lifted;
    return img;
}

void write_pgm(const std::string& path, const Image& img) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw PgmError(PgmErrorKind::Io, "cannot open " + path + " for writing");
    out << "P5\n" << img.cols << " " << img.rows << "\n255\n";
    std::string bytes(img.v.size(), '\0');
    for (size_t p = 0; p < img.v.size(); ++p) {
        double x = std::clamp(img.v[p], 0.0, 255.0);
        bytes[p] = static_cast<char>(static_cast<unsigned char>(std::lround(x)));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw PgmError(PgmErrorKind::Io, "write failed for " + path);
}

}  // namespace speckletv
