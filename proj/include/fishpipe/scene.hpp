#pragma once

#include <string>
#include <vector>

#include "fishpipe/geometry.hpp"

namespace fishpipe {

// Scene-structure covariates from ground-truth annotations.

int fish_count(const std::vector<Annotation>& annotations);

// Mean IoU over unordered box pairs; 0 when fewer than 2 boxes.
double pairwise_overlap_mean(const std::vector<NormalizedBox>& boxes);

// Mean over boxes of each box's maximum IoU with any other box;
// 0 when fewer than 2 boxes.
double max_overlap_mean(const std::vector<NormalizedBox>& boxes);

// Density bins partitioning the non-negative integers:
// "0", "1", "2-3", "4-7", "8+".
std::string density_bin(int count);

const std::vector<std::string>& density_bin_labels();

}  // namespace fishpipe
