#pragma once

#include "ssc/linalg.hpp"

#include <optional>
#include <vector>

namespace ssc {

// N ambient points (one per column) with optional ground-truth cluster ids.
struct Dataset {
    Mat points; // n x N
    std::optional<std::vector<int>> labels;

    std::size_t n() const { return points.rows(); }
    std::size_t N() const { return points.cols(); }
};

} // namespace ssc
