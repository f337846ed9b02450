#pragma once

#include <vector>

#include <json.hpp>

namespace conetree {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// A finite union of disjoint open intervals.  `intervals` are the connected
/// components of the set itself; `excluded` records the isolated points that
/// were removed from a larger union and therefore appear as shared endpoints.
class SpectralIntervals {
public:
    SpectralIntervals() = default;
    SpectralIntervals(std::vector<Interval> intervals, std::vector<double> excluded);

    const std::vector<Interval>& intervals() const noexcept { return intervals_; }
    const std::vector<double>& excluded() const noexcept { return excluded_; }
    bool empty() const noexcept { return intervals_.empty(); }

    bool contains(double E) const;
    bool closure_contains(double E, double tol = 0.0) const;
    double total_length() const;

    /// Translate every interval and excluded point by `a`.
    SpectralIntervals shifted(double a) const;

    /// `count` points spread over the set, each at the centre of an
    /// equal-length cell so none sits on an endpoint.
    std::vector<double> sample_points(int count) const;

    nlohmann::json to_json() const;

private:
    std::vector<Interval> intervals_;
    std::vector<double> excluded_;
};

/// Open-interval intersection; excluded points are kept where they still lie
/// in the closure of the result.
SpectralIntervals intersect(const SpectralIntervals& a, const SpectralIntervals& b);

/// Split the components at every point of `points` that lies strictly
/// inside; the points become excluded.
SpectralIntervals remove_points(const SpectralIntervals& set, const std::vector<double>& points,
                                double tol = 1e-12);

}  // namespace conetree
