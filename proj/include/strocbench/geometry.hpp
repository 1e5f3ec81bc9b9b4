#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "strocbench/errors.hpp"

namespace strocbench {

// Axis-aligned box in image coordinates, origin top-left, continuous pixels.
// Requires x1 < x2 and y1 < y2; containment checks are half-open so that
// abutting boxes never claim the same pixel center twice.
struct BoundingBox {
    double x1 = 0.0;
    double y1 = 0.0;
    double x2 = 0.0;
    double y2 = 0.0;

    double width() const { return x2 - x1; }
    double height() const { return y2 - y1; }
    double center_x() const { return 0.5 * (x1 + x2); }
    double center_y() const { return 0.5 * (y1 + y2); }
    double area() const { return width() * height(); }

    bool contains(double px, double py) const {
        return px >= x1 && px < x2 && py >= y1 && py < y2;
    }

    void validate(double frame_width, double frame_height, const std::string& path) const {
        if (!(x1 < x2) || !(y1 < y2))
            throw SchemaViolation(path + ": box must satisfy x1 < x2 and y1 < y2");
        if (x1 < 0.0 || y1 < 0.0 || x2 > frame_width || y2 > frame_height)
            throw SchemaViolation(path + ": box exceeds frame bounds");
    }
};

inline double box_iou(const BoundingBox& a, const BoundingBox& b) {
    const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

// Boolean raster, row-major.
struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits; // 0 or 1, size width*height

    PixelMask() = default;
    PixelMask(int w, int h) : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const {
        return bits[static_cast<std::size_t>(y) * width + x] != 0;
    }
    void set(int x, int y, bool v = true) {
        bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint8_t b : bits) n += b;
        return n;
    }
    bool empty() const { return count() == 0; }
    std::size_t size() const { return bits.size(); }
};

} // namespace strocbench
