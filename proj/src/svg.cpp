#include "frdw/svg.hpp"

#include <cstdio>

namespace frdw {

namespace {

// Fixed precision keeps the bytes independent of the platform's shortest-repr choices.
std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

enum class Run { straight, left, right };

Run classify(const SteeringDecision& d) {
    if (d.action == MpcAction::curvature_left) return Run::left;
    if (d.action == MpcAction::curvature_right) return Run::right;
    if (d.gains.curvature_sign > 0) return Run::left;
    if (d.gains.curvature_sign < 0) return Run::right;
    return Run::straight;
}

const char* run_class(Run r) {
    switch (r) {
        case Run::left: return "walk left";
        case Run::right: return "walk right";
        default: return "walk straight";
    }
}

const char* run_color(Run r) {
    switch (r) {
        case Run::left: return "#1f77b4";
        case Run::right: return "#d62728";
        default: return "#555555";
    }
}

class Canvas {
 public:
    Canvas(const SpaceMap& space, const SvgOptions& o) : lo_(space.bbox_min()), hi_(space.bbox_max()), o_(o) {}

    double width() const { return (hi_.x - lo_.x) * o_.pixels_per_meter + 2.0 * o_.margin; }
    double height() const { return (hi_.y - lo_.y) * o_.pixels_per_meter + 2.0 * o_.margin; }
    std::string x(const Vec2& p) const { return num((p.x - lo_.x) * o_.pixels_per_meter + o_.margin); }
    std::string y(const Vec2& p) const { return num((hi_.y - p.y) * o_.pixels_per_meter + o_.margin); }
    std::string xy(const Vec2& p) const { return x(p) + "," + y(p); }

 private:
    Vec2 lo_;
    Vec2 hi_;
    SvgOptions o_;
};

std::string polygon(const Canvas& c, const Polygon& poly, const char* cls, const char* style) {
    std::string out = "  <polygon class=\"";
    out += cls;
    out += "\" points=\"";
    bool first = true;
    for (const Vec2& v : poly.vertices()) {
        if (!first) out += ' ';
        out += c.xy(v);
        first = false;
    }
    out += "\" ";
    out += style;
    out += "/>\n";
    return out;
}

}  // namespace

std::string render_trajectory_svg(const TrialTrace& trace, const SvgOptions& options) {
    const Canvas c(trace.physical, options);
    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(c.width()) + "\" height=\"" + num(c.height()) +
           "\" viewBox=\"0 0 " + num(c.width()) + " " + num(c.height()) + "\">\n";
    out += polygon(c, trace.physical.boundary(), "boundary", "fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"2\"");
    for (const Polygon& obs : trace.physical.obstacles())
        out += polygon(c, obs, "obstacle", "fill=\"#bbbbbb\" stroke=\"#000000\" stroke-width=\"1\"");

    // Consecutive frames with the same decision share one path element.
    const auto& frames = trace.frames;
    std::size_t i = 0;
    while (i < frames.size()) {
        const Run kind = classify(frames[i].decision);
        std::string d = "M" + c.xy(frames[i].user.physical_pose.position);
        std::size_t j = i;
        while (j < frames.size() && classify(frames[j].decision) == kind) {
            d += " L" + c.xy(frames[j].physical_after);
            if (frames[j].reset) {
                ++j;
                break;
            }
            ++j;
        }
        out += "  <path class=\"" + std::string(run_class(kind)) + "\" d=\"" + d + "\" fill=\"none\" stroke=\"" +
               run_color(kind) + "\" stroke-width=\"1.5\"/>\n";
        i = j;
    }

    if (options.overlays && options.overlay_every > 0) {
        for (std::size_t k = 0; k < frames.size(); k += static_cast<std::size_t>(options.overlay_every)) {
            if (!frames[k].decision.overlay) continue;
            out += "  <circle class=\"overlay\" cx=\"" + c.x(*frames[k].decision.overlay) + "\" cy=\"" +
                   c.y(*frames[k].decision.overlay) + "\" r=\"2\" fill=\"#2ca02c\"/>\n";
        }
    }

    for (const ResetEvent& r : trace.resets) {
        out += "  <circle class=\"reset\" cx=\"" + c.x(r.physical_position) + "\" cy=\"" + c.y(r.physical_position) +
               "\" r=\"4\" fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"2\"/>\n";
    }
    if (!frames.empty()) {
        const Vec2 start = frames.front().user.physical_pose.position;
        out += "  <circle class=\"start\" cx=\"" + c.x(start) + "\" cy=\"" + c.y(start) + "\" r=\"5\" fill=\"#000000\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace frdw
