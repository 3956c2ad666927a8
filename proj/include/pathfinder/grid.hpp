#pragma once

#include <functional>
#include <vector>

#include "pathfinder/engine.hpp"

namespace pathfinder {

struct GridAxis {
    double lo = 0.0;
    double hi = 0.0;
    int count = 1;
    double at(int i) const { return count > 1 ? lo + (hi - lo) * i / (count - 1) : lo; }
};

/// Evaluates request_at(x, y) over the grid, x varying fastest. Grid points
/// are independent; work is spread over `threads` worker threads and results
/// land in row-major order regardless of scheduling.
std::vector<Complex> evaluate_grid(const std::function<EvaluationRequest(double, double)>& request_at,
                                   const GridAxis& x_axis, const GridAxis& y_axis, int threads);

} // namespace pathfinder
