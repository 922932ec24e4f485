#include "fishpipe/image.hpp"

#include <fstream>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace fishpipe {

namespace {

Image from_mat(const cv::Mat& bgr) {
    if (bgr.empty()) throw std::runtime_error("undecodable image");
    cv::Mat m = bgr;
    if (m.channels() == 1) cv::cvtColor(m, m, cv::COLOR_GRAY2BGR);
    if (m.channels() == 4) cv::cvtColor(m, m, cv::COLOR_BGRA2BGR);
    if (m.depth() != CV_8U) m.convertTo(m, CV_8U);
    Image img(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const cv::Vec3b* row = m.ptr<cv::Vec3b>(y);
        for (int x = 0; x < m.cols; ++x) {
            img.at(x, y, 0) = row[x][2] / 255.0;
            img.at(x, y, 1) = row[x][1] / 255.0;
            img.at(x, y, 2) = row[x][0] / 255.0;
        }
    }
    return img;
}

}  // namespace

Image load_image(const std::string& path) {
    cv::Mat m = cv::imread(path, cv::IMREAD_COLOR);
    if (m.empty()) throw std::runtime_error("cannot decode image: " + path);
    return from_mat(m);
}

Image decode_image(const std::vector<uint8_t>& bytes) {
    cv::Mat m = cv::imdecode(bytes, cv::IMREAD_COLOR);
    return from_mat(m);
}

std::vector<uint8_t> read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::string read_file_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

void write_file_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write file: " + path);
    f << text;
}

}  // namespace fishpipe
