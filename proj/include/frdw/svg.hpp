#pragma once
/**
 * @file svg.hpp
 * @brief Physical-space trajectory render of one recorded trial.
 */

#include <string>

#include "frdw/simulation.hpp"

namespace frdw {

struct SvgOptions {
    double pixels_per_meter = 50.0;
    double margin = 20.0;
    bool overlays = true;
    int overlay_every = 30;  ///< frames between drawn future-overlay points
};

/// Boundary and obstacles as polygons, the walked path as `<path>` runs colored
/// by the steering decision (curvature sign, or the MPC action), one
/// `<circle class="reset">` per reset. Output bytes depend only on the trace.
std::string render_trajectory_svg(const TrialTrace& trace, const SvgOptions& options = {});

}  // namespace frdw
