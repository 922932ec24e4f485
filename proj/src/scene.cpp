#include "fishpipe/scene.hpp"

#include <algorithm>
#include <stdexcept>

namespace fishpipe {

int fish_count(const std::vector<Annotation>& annotations) {
    return static_cast<int>(annotations.size());
}

double pairwise_overlap_mean(const std::vector<NormalizedBox>& boxes) {
    const size_t n = boxes.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) sum += iou(boxes[i], boxes[j]);
    return sum * 2.0 / (static_cast<double>(n) * (n - 1));
}

double max_overlap_mean(const std::vector<NormalizedBox>& boxes) {
    const size_t n = boxes.size();
    if (n < 2) return 0.0;
    double sum = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (size_t j = 0; j < n; ++j)
            if (j != i) best = std::max(best, iou(boxes[i], boxes[j]));
        sum += best;
    }
    return sum / n;
}

std::string density_bin(int count) {
    if (count < 0) throw std::invalid_argument("count must be >= 0");
    if (count == 0) return "0";
    if (count == 1) return "1";
    if (count <= 3) return "2-3";
    if (count <= 7) return "4-7";
    return "8+";
}

const std::vector<std::string>& density_bin_labels() {
    static const std::vector<std::string> labels{"0", "1", "2-3", "4-7", "8+"};
    return labels;
}

}  // namespace fishpipe
