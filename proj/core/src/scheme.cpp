#include "ratingforge/scheme.hpp"

#include <cmath>

namespace ratingforge {

const char* to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::exclusion: return "exclusion";
        case SegmentKind::pooling: return "pooling";
        case SegmentKind::reveal: return "reveal";
    }
    return "?";
}

SegmentKind segment_kind_from_string(const std::string& s) {
    if (s == "exclusion") return SegmentKind::exclusion;
    if (s == "pooling") return SegmentKind::pooling;
    if (s == "reveal") return SegmentKind::reveal;
    throw spec_error("unknown segment kind: " + s);
}

std::vector<double> DeterministicScheme::jump_points(const ProblemSpec& spec) const {
    std::vector<double> js;
    for (std::size_t i = 1; i < segments.size(); ++i) {
        const Segment& a = segments[i - 1];
        const Segment& b = segments[i];
        double t = b.lo;
        double left = a.kind == SegmentKind::reveal ? spec.q_full(t) : a.standard;
        double right = b.kind == SegmentKind::reveal ? spec.q_full(t) : b.standard;
        if (std::abs(right - left) > 1e-10) js.push_back(t);
    }
    return js;
}

const Segment& DeterministicScheme::segment_at(double theta) const {
    for (std::size_t i = 0; i < segments.size(); ++i) {
        bool last = (i + 1 == segments.size());
        if (theta < segments[i].hi || (last && theta <= segments[i].hi + 1e-12))
            return segments[i];
    }
    return segments.back();
}

double DeterministicScheme::quality(const ProblemSpec& spec, double theta) const {
    const Segment& s = segment_at(theta);
    switch (s.kind) {
        case SegmentKind::exclusion: return 0.0;
        case SegmentKind::pooling: return s.standard;
        case SegmentKind::reveal: return spec.q_full(theta);
    }
    return 0.0;
}

void DeterministicScheme::validate_basic(const ProblemSpec& spec) const {
    if (segments.empty())
        throw solver_error(solver_errc::malformed_scheme, "scheme has no segments");
    const double lo = spec.theta_lo(), hi = spec.theta_hi();
    if (std::abs(segments.front().lo - lo) > 1e-9 ||
        std::abs(segments.back().hi - hi) > 1e-9)
        throw solver_error(solver_errc::malformed_scheme,
                           "scheme does not cover the support");
    double prev_hi = lo;
    double prev_q = -1.0;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const Segment& s = segments[i];
        if (std::abs(s.lo - prev_hi) > 1e-9)
            throw solver_error(solver_errc::malformed_scheme, "scheme segments have gaps");
        if (!(s.hi > s.lo))
            throw solver_error(solver_errc::malformed_scheme, "empty scheme segment");
        if (s.kind == SegmentKind::exclusion && i != 0)
            throw solver_error(solver_errc::malformed_scheme,
                               "exclusion only allowed at the bottom");
        double q_lo = s.kind == SegmentKind::reveal ? spec.q_full(s.lo)
                      : s.kind == SegmentKind::pooling ? s.standard
                                                       : 0.0;
        double q_hi = s.kind == SegmentKind::reveal ? spec.q_full(s.hi) : q_lo;
        if (q_lo < prev_q - 1e-9)
            throw solver_error(solver_errc::malformed_scheme,
                               "scheme qualities must be increasing");
        prev_q = q_hi;
        prev_hi = s.hi;
    }
}

}  // namespace ratingforge
