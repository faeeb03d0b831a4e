#pragma once

#include <cmath>
#include <vector>

namespace croprow {

/// Crop-row direction as signed degrees of deviation from the image
/// vertical axis (y axis, origin top-left). Circular modulo 180 with the
/// canonical range (-90, 90].
struct RowAngle {
    double degrees = 0.0;
};

/// Wrap an angle in degrees into (-90, 90] (period 180).
inline double wrap_half_turn(double deg) {
    double a = std::fmod(deg, 180.0);
    if (a <= -90.0) a += 180.0;
    if (a > 90.0) a -= 180.0;
    return a;
}

/// Circular distance between two row angles, in [0, 90].
inline double circular_distance(double a_deg, double b_deg) {
    double d = std::fabs(a_deg - b_deg);
    d = std::fmod(d, 180.0);
    return std::min(d, 180.0 - d);
}

inline double circular_distance(RowAngle a, RowAngle b) {
    return circular_distance(a.degrees, b.degrees);
}

/// Circular mean of row angles (period 180), computed on the doubled
/// circle. Empty input returns 0; a perfectly balanced antipodal set falls
/// back to the first element's angle.
inline double circular_mean(const std::vector<double>& degrees) {
    if (degrees.empty()) return 0.0;
    constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
    double sx = 0.0;
    double sy = 0.0;
    for (double d : degrees) {
        sx += std::cos(2.0 * d * kDegToRad);
        sy += std::sin(2.0 * d * kDegToRad);
    }
    if (std::hypot(sx, sy) < 1e-12) return degrees.front();
    return wrap_half_turn(std::atan2(sy, sx) / (2.0 * kDegToRad));
}

inline double circular_mean(const std::vector<RowAngle>& angles) {
    std::vector<double> degrees;
    degrees.reserve(angles.size());
    for (RowAngle a : angles) degrees.push_back(a.degrees);
    return circular_mean(degrees);
}

/// Inverse of the vertical-referenced angle: maps (-90, 90] back to a Hough
/// theta in [0, 180).
inline double row_angle_to_theta(double angle_deg) {
    return angle_deg < 0.0 ? angle_deg + 180.0 : angle_deg;
}

inline double row_angle_to_theta(RowAngle angle) { return row_angle_to_theta(angle.degrees); }

/// Hough line in normal form x*cos(theta) + y*sin(theta) = rho, with theta
/// in degrees in [0, 180) and rho in pixels (signed).
struct LineRT {
    double rho = 0.0;
    double theta = 0.0;
    long votes = 0;
};

/// A detected crop row: the representative line's deviation from vertical
/// plus the number of Hough lines merged into it.
struct CropRow {
    RowAngle angle;
    double rho = 0.0;
    int member_count = 1;
};

} // namespace croprow
