#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "croprow/types.hpp"

namespace croprow {

/// 8-bit grayscale image, row-major.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0);

    std::uint8_t at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return samples[static_cast<std::size_t>(y) * width + x]; }
};

/// 8-bit RGB image, row-major interleaved triples.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> samples; // 3 * width * height

    RgbImage() = default;
    RgbImage(int w, int h, std::uint8_t r = 0, std::uint8_t g = 0, std::uint8_t b = 0);

    std::size_t offset(int x, int y) const { return 3 * (static_cast<std::size_t>(y) * width + x); }
    void set(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        std::size_t o = offset(x, y);
        samples[o] = r;
        samples[o + 1] = g;
        samples[o + 2] = b;
    }
    std::uint8_t at(int x, int y, int channel) const { return samples[offset(x, y) + channel]; }
    void set_channel(int x, int y, int channel, std::uint8_t v) { samples[offset(x, y) + channel] = v; }
};

/// Rectangular boolean pixel grid; true (1) = white = crop-row pixel.
struct BinaryMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 0 or 1

    BinaryMask() = default;
    BinaryMask(int w, int h, bool fill = false);

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }
    /// Out-of-bounds coordinates read as black.
    bool at_clamped(int x, int y) const {
        if (x < 0 || y < 0 || x >= width || y >= height) return false;
        return at(x, y);
    }
    std::size_t white_count() const;

    bool operator==(const BinaryMask&) const = default;
};

using DecodedImage = std::variant<GrayImage, RgbImage>;

/// Decode PGM (P2/P5), PPM (P3/P6) or 8-bit PNG (gray / RGB) from raw file
/// bytes. The container is sniffed from the magic bytes. Grayscale sources
/// yield GrayImage, color sources RgbImage.
/// Throws Error{Decode} naming the offset/reason on malformed input.
DecodedImage decode_image(std::span<const std::uint8_t> bytes);

/// As decode_image but requires a grayscale result.
GrayImage decode_gray(std::span<const std::uint8_t> bytes);

/// As decode_image but requires an RGB result.
RgbImage decode_rgb(std::span<const std::uint8_t> bytes);

/// bit = sample >= threshold (inclusive boundary).
BinaryMask binarize(const GrayImage& img, int threshold);

/// Encode as binary PGM (P5, maxval 255), white = 255, black = 0.
/// decode_image(encode_mask(m)) reproduces m bit-exactly.
std::vector<std::uint8_t> encode_mask(const BinaryMask& mask);

/// Encode a grayscale image as binary PGM (P5, maxval 255).
std::vector<std::uint8_t> encode_gray(const GrayImage& img);

/// Encode an RGB image as binary PPM (P6, maxval 255).
std::vector<std::uint8_t> encode_rgb(const RgbImage& img);

/// Returns a copy of img with each row rasterized as a 1-px line clipped to
/// the image bounds; the input is untouched.
RgbImage overlay_rows(const RgbImage& img, std::span<const CropRow> rows,
                      std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// Expand a mask to RGB (white -> 255,255,255), e.g. as an overlay base.
RgbImage mask_to_rgb(const BinaryMask& mask);

/// File helpers. Throw Error{Io} on filesystem failures.
std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

} // namespace croprow
