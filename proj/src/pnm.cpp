#include <cstdio>
#include <string>

#include "croprow/error.hpp"
#include "croprow/image.hpp"

// PGM (P2/P5) and PPM (P3/P6) support, maxval up to 255. PGM P5 is the
// canonical bit-exact interchange format for masks; P6 carries RGB output.

namespace croprow {

namespace {

[[noreturn]] void fail(std::size_t offset, const std::string& reason) {
    throw Error(ErrorCode::Decode, "pnm: " + reason + " at offset " + std::to_string(offset));
}

struct TokenReader {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;

    bool is_space(std::uint8_t c) const {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
    }

    // Whitespace and '#' comments (to end of line) separate header tokens.
    void skip_separators() {
        while (pos < bytes.size()) {
            if (is_space(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
            } else {
                break;
            }
        }
    }

    int next_int(const char* what, int max_value) {
        skip_separators();
        if (pos >= bytes.size()) fail(pos, std::string("missing ") + what);
        if (bytes[pos] < '0' || bytes[pos] > '9')
            fail(pos, std::string("expected digit for ") + what);
        long v = 0;
        while (pos < bytes.size() && bytes[pos] >= '0' && bytes[pos] <= '9') {
            v = v * 10 + (bytes[pos] - '0');
            if (v > max_value) fail(pos, std::string(what) + " out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

struct PnmHeader {
    char magic;     // '2', '3', '5', '6'
    int width;
    int height;
    int maxval;
    std::size_t data_offset;
};

PnmHeader parse_header(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') fail(0, "not a PNM file (bad magic)");
    char kind = static_cast<char>(bytes[1]);
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
        fail(1, std::string("unsupported PNM type 'P") + kind + "'");
    TokenReader rd{bytes, 2};
    PnmHeader h{};
    h.magic = kind;
    h.width = rd.next_int("width", 1 << 20);
    h.height = rd.next_int("height", 1 << 20);
    if (h.width < 1 || h.height < 1) fail(rd.pos, "dimensions must be >= 1");
    h.maxval = rd.next_int("maxval", 1 << 20);
    if (h.maxval < 1) fail(rd.pos, "maxval must be >= 1");
    if (h.maxval > 255) fail(rd.pos, "unsupported bit depth (maxval > 255)");
    if (kind == '5' || kind == '6') {
        // Binary formats: exactly one whitespace byte after maxval.
        if (rd.pos >= bytes.size() || !rd.is_space(bytes[rd.pos]))
            fail(rd.pos, "expected single whitespace after maxval");
        h.data_offset = rd.pos + 1;
    } else {
        h.data_offset = rd.pos;
    }
    return h;
}

std::vector<std::uint8_t> read_samples(std::span<const std::uint8_t> bytes, const PnmHeader& h,
                                       std::size_t count) {
    std::vector<std::uint8_t> out(count);
    if (h.magic == '5' || h.magic == '6') {
        if (bytes.size() - h.data_offset < count)
            fail(bytes.size(), "truncated pixel data (expected " + std::to_string(count) +
                                   " bytes, got " + std::to_string(bytes.size() - h.data_offset) + ")");
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(h.data_offset), count, out.begin());
    } else {
        TokenReader rd{bytes, h.data_offset};
        for (std::size_t i = 0; i < count; ++i) {
            int v = rd.next_int("sample", 255);
            if (v > h.maxval) fail(rd.pos, "sample exceeds maxval");
            out[i] = static_cast<std::uint8_t>(v);
        }
    }
    return out;
}

} // namespace

DecodedImage decode_pnm(std::span<const std::uint8_t> bytes) {
    PnmHeader h = parse_header(bytes);
    std::size_t pixels = static_cast<std::size_t>(h.width) * h.height;
    if (h.magic == '2' || h.magic == '5') {
        GrayImage img(h.width, h.height);
        img.samples = read_samples(bytes, h, pixels);
        return img;
    }
    RgbImage img(h.width, h.height);
    img.samples = read_samples(bytes, h, pixels * 3);
    return img;
}

std::vector<std::uint8_t> encode_gray(const GrayImage& img) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    return out;
}

std::vector<std::uint8_t> encode_mask(const BinaryMask& mask) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", mask.width, mask.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.reserve(out.size() + mask.bits.size());
    for (std::uint8_t b : mask.bits) out.push_back(b ? 255 : 0);
    return out;
}

std::vector<std::uint8_t> encode_rgb(const RgbImage& img) {
    char header[64];
    int n = std::snprintf(header, sizeof(header), "P6\n%d %d\n255\n", img.width, img.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), img.samples.begin(), img.samples.end());
    return out;
}

} // namespace croprow
