#include "fishpipe/hashing.hpp"

#include <bit>
#include <stdexcept>

#include <openssl/evp.h>

namespace fishpipe {

std::string md5_hex(const uint8_t* data, size_t len) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int digest_len = 0;
    if (!EVP_Digest(data, len, digest, &digest_len, EVP_md5(), nullptr))
        throw std::runtime_error("MD5 computation failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(digest_len * 2);
    for (unsigned int i = 0; i < digest_len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

std::string md5_hex(const std::vector<uint8_t>& bytes) {
    return md5_hex(bytes.data(), bytes.size());
}

std::string md5_hex(const std::string& text) {
    return md5_hex(reinterpret_cast<const uint8_t*>(text.data()), text.size());
}

uint64_t average_hash(const Image& image) {
    if (image.empty()) throw std::runtime_error("empty image");
    const int w = image.width();
    const int h = image.height();
    // Box-average the grayscale image into an 8x8 grid; cell (i,j) covers
    // rows [i*h/8, (i+1)*h/8) and the analogous column span.
    double cells[64];
    double total = 0.0;
    for (int i = 0; i < 8; ++i) {
        const int y0 = static_cast<int>(static_cast<int64_t>(i) * h / 8);
        const int y1 = static_cast<int>(static_cast<int64_t>(i + 1) * h / 8);
        for (int j = 0; j < 8; ++j) {
            const int x0 = static_cast<int>(static_cast<int64_t>(j) * w / 8);
            const int x1 = static_cast<int>(static_cast<int64_t>(j + 1) * w / 8);
            double sum = 0.0;
            int n = 0;
            for (int y = y0; y < std::max(y1, y0 + 1) && y < h; ++y)
                for (int x = x0; x < std::max(x1, x0 + 1) && x < w; ++x) {
                    sum += image.luma(x, y);
                    ++n;
                }
            cells[i * 8 + j] = n > 0 ? sum / n : 0.0;
            total += cells[i * 8 + j];
        }
    }
    const double mean = total / 64.0;
    uint64_t bits = 0;
    for (int k = 0; k < 64; ++k)
        if (cells[k] >= mean) bits |= (uint64_t{1} << (63 - k));
    return bits;
}

int hamming(uint64_t a, uint64_t b) {
    return std::popcount(a ^ b);
}

}  // namespace fishpipe
