#include <cstring>
#include <string>

#include <zlib.h>

#include "croprow/error.hpp"
#include "codec.hpp"

// Minimal PNG reader covering the dataset formats: 8-bit depth, color type
// 0 (grayscale) or 2 (RGB), no interlacing. Chunk CRCs are verified and the
// IDAT stream is inflated with zlib.

namespace croprow {

namespace {

[[noreturn]] void fail(std::size_t offset, const std::string& reason) {
    throw Error(ErrorCode::Decode, "png: " + reason + " at offset " + std::to_string(offset));
}

std::uint32_t be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    int p = int(a) + int(b) - int(c);
    int pa = std::abs(p - int(a));
    int pb = std::abs(p - int(b));
    int pc = std::abs(p - int(c));
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

std::vector<std::uint8_t> inflate_all(const std::vector<std::uint8_t>& in,
                                      std::size_t expected_size) {
    std::vector<std::uint8_t> out(expected_size);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw Error(ErrorCode::Decode, "png: inflateInit failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    std::size_t produced = out.size() - zs.avail_out;
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || produced != expected_size)
        throw Error(ErrorCode::Decode, "png: truncated or corrupt IDAT stream (inflated " +
                                           std::to_string(produced) + " of " +
                                           std::to_string(expected_size) + " bytes)");
    return out;
}

} // namespace

DecodedImage decode_png(std::span<const std::uint8_t> bytes) {
    static const std::uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
    if (bytes.size() < 8 || std::memcmp(bytes.data(), kSig, 8) != 0)
        fail(0, "bad signature");

    std::size_t pos = 8;
    bool have_ihdr = false;
    std::uint32_t width = 0, height = 0;
    int color_type = -1;
    std::vector<std::uint8_t> idat;
    bool done = false;

    while (!done) {
        if (bytes.size() - pos < 12) fail(pos, "truncated chunk header");
        std::uint32_t len = be32(&bytes[pos]);
        const std::uint8_t* type = &bytes[pos + 4];
        if (bytes.size() - pos - 12 < len) fail(pos, "truncated chunk payload");
        const std::uint8_t* data = &bytes[pos + 8];
        std::uint32_t stored_crc = be32(data + len);
        // crc32(x, Z_NULL, 0) resets to the initial value, so empty chunks
        // must skip the second fold instead of passing a null buffer.
        std::uint32_t crc = static_cast<std::uint32_t>(::crc32(0, type, 4));
        if (len) crc = static_cast<std::uint32_t>(::crc32(crc, data, len));
        if (crc != stored_crc) fail(pos + 8 + len, "chunk CRC mismatch");

        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) fail(pos, "bad IHDR length");
            width = be32(data);
            height = be32(data + 4);
            int bit_depth = data[8];
            color_type = data[9];
            int interlace = data[12];
            if (width == 0 || height == 0) fail(pos, "zero dimension");
            if (bit_depth != 8) fail(pos + 16, "unsupported bit depth " + std::to_string(bit_depth));
            if (color_type != 0 && color_type != 2)
                fail(pos + 17, "unsupported color type " + std::to_string(color_type) +
                                   " (only 8-bit gray and RGB)");
            if (interlace != 0) fail(pos + 20, "interlaced PNG not supported");
            have_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            if (!have_ihdr) fail(pos, "IDAT before IHDR");
            idat.insert(idat.end(), data, data + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            done = true;
        }
        // Ancillary chunks are skipped.
        pos += 12 + len;
    }
    if (!have_ihdr) throw Error(ErrorCode::Decode, "png: missing IHDR");
    if (idat.empty()) throw Error(ErrorCode::Decode, "png: missing IDAT");

    std::size_t bpp = color_type == 2 ? 3 : 1;
    std::size_t stride = bpp * width;
    std::vector<std::uint8_t> raw = inflate_all(idat, (stride + 1) * height);

    std::vector<std::uint8_t> pixels(stride * height);
    for (std::uint32_t y = 0; y < height; ++y) {
        const std::uint8_t* src = &raw[(stride + 1) * y];
        std::uint8_t filter = src[0];
        ++src;
        std::uint8_t* dst = &pixels[stride * y];
        const std::uint8_t* up = y > 0 ? &pixels[stride * (y - 1)] : nullptr;
        for (std::size_t i = 0; i < stride; ++i) {
            std::uint8_t a = i >= bpp ? dst[i - bpp] : 0;
            std::uint8_t b = up ? up[i] : 0;
            std::uint8_t c = (up && i >= bpp) ? up[i - bpp] : 0;
            int v = src[i];
            switch (filter) {
                case 0: break;
                case 1: v += a; break;
                case 2: v += b; break;
                case 3: v += (int(a) + int(b)) / 2; break;
                case 4: v += paeth(a, b, c); break;
                default:
                    fail((stride + 1) * y, "unknown filter type " + std::to_string(filter));
            }
            dst[i] = static_cast<std::uint8_t>(v & 0xff);
        }
    }

    if (color_type == 0) {
        GrayImage img(static_cast<int>(width), static_cast<int>(height));
        img.samples = std::move(pixels);
        return img;
    }
    RgbImage img(static_cast<int>(width), static_cast<int>(height));
    img.samples = std::move(pixels);
    return img;
}

} // namespace croprow
