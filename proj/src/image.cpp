#include "croprow/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "croprow/error.hpp"
#include "codec.hpp"

namespace croprow {

DecodedImage decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.size() >= 8 && bytes[0] == 0x89 && bytes[1] == 'P' && bytes[2] == 'N' &&
        bytes[3] == 'G')
        return decode_png(bytes);
    if (!bytes.empty() && bytes[0] == 'P') return decode_pnm(bytes);
    throw Error(ErrorCode::Decode, "unrecognized image format (magic bytes at offset 0)");
}

GrayImage decode_gray(std::span<const std::uint8_t> bytes) {
    DecodedImage img = decode_image(bytes);
    if (auto* g = std::get_if<GrayImage>(&img)) return std::move(*g);
    throw Error(ErrorCode::Decode, "expected a grayscale image, got color");
}

RgbImage decode_rgb(std::span<const std::uint8_t> bytes) {
    DecodedImage img = decode_image(bytes);
    if (auto* c = std::get_if<RgbImage>(&img)) return std::move(*c);
    throw Error(ErrorCode::Decode, "expected a color image, got grayscale");
}

GrayImage::GrayImage(int w, int h, std::uint8_t fill)
    : width(w), height(h), samples(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
}

RgbImage::RgbImage(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b)
    : width(w), height(h), samples(3 * static_cast<std::size_t>(w) * h) {
    if (w < 1 || h < 1) throw Error(ErrorCode::InvalidArgument, "image dimensions must be >= 1");
    for (std::size_t i = 0; i < samples.size(); i += 3) {
        samples[i] = r;
        samples[i + 1] = g;
        samples[i + 2] = b;
    }
}

BinaryMask::BinaryMask(int w, int h, bool fill)
    : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {
    if (w < 1 || h < 1) throw Error(ErrorCode::InvalidArgument, "mask dimensions must be >= 1");
}

std::size_t BinaryMask::white_count() const {
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

BinaryMask binarize(const GrayImage& img, int threshold) {
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.samples.size(); ++i)
        mask.bits[i] = img.samples[i] >= threshold ? 1 : 0;
    return mask;
}

RgbImage mask_to_rgb(const BinaryMask& mask) {
    RgbImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.bits.size(); ++i) {
        std::uint8_t v = mask.bits[i] ? 255 : 0;
        img.samples[3 * i] = v;
        img.samples[3 * i + 1] = v;
        img.samples[3 * i + 2] = v;
    }
    return img;
}

namespace {

constexpr double kPi = 3.14159265358979323846;

// Clip the parametric line P(t) = (rho*cos - t*sin, rho*sin + t*cos) to the
// pixel box [0,w-1]x[0,h-1]. Returns false when the line misses the box.
bool clip_line(double rho, double theta_deg, int w, int h, double& t0, double& t1) {
    double th = theta_deg * kPi / 180.0;
    double c = std::cos(th);
    double s = std::sin(th);
    double px = rho * c;
    double py = rho * s;
    // x(t) = px - t*s in [0, w-1]; y(t) = py + t*c in [0, h-1]
    t0 = -std::numeric_limits<double>::infinity();
    t1 = std::numeric_limits<double>::infinity();
    auto constrain = [&](double base, double slope, double lo, double hi) {
        if (std::fabs(slope) < 1e-12) return base >= lo && base <= hi;
        double a = (lo - base) / slope;
        double b = (hi - base) / slope;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        return true;
    };
    if (!constrain(px, -s, 0.0, w - 1.0)) return false;
    if (!constrain(py, c, 0.0, h - 1.0)) return false;
    return t0 <= t1;
}

void draw_segment(RgbImage& img, int x0, int y0, int x1, int y1,
                  std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    int dx = std::abs(x1 - x0);
    int sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0);
    int sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (x0 >= 0 && y0 >= 0 && x0 < img.width && y0 < img.height) img.set(x0, y0, r, g, b);
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

} // namespace

RgbImage overlay_rows(const RgbImage& img, std::span<const CropRow> rows,
                      std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    RgbImage out = img;
    for (const CropRow& row : rows) {
        double theta = row_angle_to_theta(row.angle.degrees);
        double t0, t1;
        if (!clip_line(row.rho, theta, out.width, out.height, t0, t1)) continue;
        double th = theta * kPi / 180.0;
        double c = std::cos(th);
        double s = std::sin(th);
        int x0 = static_cast<int>(std::lround(row.rho * c - t0 * s));
        int y0 = static_cast<int>(std::lround(row.rho * s + t0 * c));
        int x1 = static_cast<int>(std::lround(row.rho * c - t1 * s));
        int y1 = static_cast<int>(std::lround(row.rho * s + t1 * c));
        draw_segment(out, x0, y0, x1, y1, r, g, b);
    }
    return out;
}

std::vector<std::uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::Io, "read failure on '" + path + "'");
    return bytes;
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "write failure on '" + path + "'");
}

} // namespace croprow
