#pragma once

#include <string>
#include <vector>

#include "ratingforge/problem.hpp"

namespace ratingforge {

enum class SegmentKind { exclusion, pooling, reveal };

const char* to_string(SegmentKind k);
SegmentKind segment_kind_from_string(const std::string& s);

/// One piece of a deterministic quality scheme on [lo, hi); the final segment
/// is closed at theta_hi. `standard` is the pooled quality (0 on exclusion,
/// unused on reveal).
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    SegmentKind kind = SegmentKind::exclusion;
    double standard = 0.0;
};

/// Quality scheme induced by a deterministic rating: ordered exclusion /
/// pooling / revealing segments covering the support.
struct DeterministicScheme {
    std::vector<Segment> segments;

    bool empty() const { return segments.empty(); }
    double lo() const { return segments.front().lo; }
    double hi() const { return segments.back().hi; }

    /// Interior jump points (boundaries where quality is discontinuous).
    std::vector<double> jump_points(const ProblemSpec& spec) const;
    /// q(theta); segments are half-open on the right except the last.
    double quality(const ProblemSpec& spec, double theta) const;
    const Segment& segment_at(double theta) const;

    /// Basic structural ordering (coverage, increasing qualities); throws
    /// malformed-scheme. IC audits live in the menu oracle.
    void validate_basic(const ProblemSpec& spec) const;
};

}  // namespace ratingforge
