#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fishpipe {

// Decoded RGB image, intensities in [0,1], row-major interleaved.
class Image {
public:
    Image() = default;
    Image(int width, int height) : width_(width), height_(height),
        pix_(static_cast<size_t>(width) * height * 3, 0.0) {}

    int width() const { return width_; }
    int height() const { return height_; }
    bool empty() const { return pix_.empty(); }

    double& at(int x, int y, int c) {
        return pix_[(static_cast<size_t>(y) * width_ + x) * 3 + c];
    }
    double at(int x, int y, int c) const {
        return pix_[(static_cast<size_t>(y) * width_ + x) * 3 + c];
    }

    double r(int x, int y) const { return at(x, y, 0); }
    double g(int x, int y) const { return at(x, y, 1); }
    double b(int x, int y) const { return at(x, y, 2); }

    // Rec.601 luma.
    double luma(int x, int y) const {
        return 0.299 * r(x, y) + 0.587 * g(x, y) + 0.114 * b(x, y);
    }

    const std::vector<double>& data() const { return pix_; }
    std::vector<double>& data() { return pix_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> pix_;
};

// Decodes a still-image file (PNG/JPEG/BMP).
// Throws std::runtime_error on unreadable or undecodable input.
Image load_image(const std::string& path);

// Decodes from an in-memory byte buffer.
Image decode_image(const std::vector<uint8_t>& bytes);

// Reads a whole file; throws std::runtime_error on IO failure.
std::vector<uint8_t> read_file_bytes(const std::string& path);
std::string read_file_text(const std::string& path);
void write_file_text(const std::string& path, const std::string& text);

}  // namespace fishpipe
