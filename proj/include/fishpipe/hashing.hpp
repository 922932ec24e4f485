#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fishpipe/image.hpp"

namespace fishpipe {

// MD5 of raw bytes, lowercase hex.
std::string md5_hex(const uint8_t* data, size_t len);
std::string md5_hex(const std::vector<uint8_t>& bytes);
std::string md5_hex(const std::string& text);

// 64-bit average hash: grayscale (Rec.601), 8x8 box-average thumbnail,
// bit set iff cell >= thumbnail mean. Row-major, first cell in the MSB.
uint64_t average_hash(const Image& image);

// Hamming distance between two 64-bit hashes.
int hamming(uint64_t a, uint64_t b);

}  // namespace fishpipe
