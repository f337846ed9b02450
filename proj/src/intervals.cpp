#include "conetree/intervals.hpp"

#include <algorithm>
#include <cmath>

#include "conetree/errors.hpp"

namespace conetree {

namespace {

void dedupe_sorted(std::vector<double>& v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || x - out.back() > tol) out.push_back(x);
    v = std::move(out);
}

}  // namespace

SpectralIntervals::SpectralIntervals(std::vector<Interval> intervals, std::vector<double> excluded)
    : intervals_(std::move(intervals)), excluded_(std::move(excluded)) {
    std::sort(intervals_.begin(), intervals_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        if (!(intervals_[i].lo < intervals_[i].hi))
            throw InvalidArgument("interval with lo >= hi");
        if (i > 0 && intervals_[i].lo < intervals_[i - 1].hi)
            throw InvalidArgument("overlapping intervals");
    }
    dedupe_sorted(excluded_, 1e-12);
    std::erase_if(excluded_, [this](double e) { return !closure_contains(e, 1e-12); });
}

bool SpectralIntervals::contains(double E) const {
    for (const auto& iv : intervals_)
        if (E > iv.lo && E < iv.hi) return true;
    return false;
}

bool SpectralIntervals::closure_contains(double E, double tol) const {
    for (const auto& iv : intervals_)
        if (E >= iv.lo - tol && E <= iv.hi + tol) return true;
    return false;
}

double SpectralIntervals::total_length() const {
    double total = 0.0;
    for (const auto& iv : intervals_) total += iv.hi - iv.lo;
    return total;
}

SpectralIntervals SpectralIntervals::shifted(double a) const {
    std::vector<Interval> iv = intervals_;
    for (auto& i : iv) {
        i.lo += a;
        i.hi += a;
    }
    std::vector<double> ex = excluded_;
    for (auto& e : ex) e += a;
    return SpectralIntervals(std::move(iv), std::move(ex));
}

std::vector<double> SpectralIntervals::sample_points(int count) const {
    std::vector<double> out;
    const double total = total_length();
    if (count <= 0 || total <= 0.0) return out;
    const double cell = total / count;
    // Walk the cell centres through the concatenated components.
    std::size_t comp = 0;
    double consumed = 0.0;
    for (int i = 0; i < count; ++i) {
        const double target = (i + 0.5) * cell;
        while (comp + 1 < intervals_.size() &&
               target > consumed + (intervals_[comp].hi - intervals_[comp].lo)) {
            consumed += intervals_[comp].hi - intervals_[comp].lo;
            ++comp;
        }
        out.push_back(intervals_[comp].lo + (target - consumed));
    }
    return out;
}

nlohmann::json SpectralIntervals::to_json() const {
    nlohmann::json out;
    out["intervals"] = nlohmann::json::array();
    for (const auto& iv : intervals_) out["intervals"].push_back({iv.lo, iv.hi});
    out["excluded"] = excluded_;
    return out;
}

SpectralIntervals intersect(const SpectralIntervals& a, const SpectralIntervals& b) {
    std::vector<Interval> out;
    for (const auto& x : a.intervals()) {
        for (const auto& y : b.intervals()) {
            const double lo = std::max(x.lo, y.lo);
            const double hi = std::min(x.hi, y.hi);
            if (lo < hi) out.push_back({lo, hi});
        }
    }
    std::vector<double> ex = a.excluded();
    ex.insert(ex.end(), b.excluded().begin(), b.excluded().end());
    return SpectralIntervals(std::move(out), std::move(ex));
}

SpectralIntervals remove_points(const SpectralIntervals& set, const std::vector<double>& points,
                                double tol) {
    std::vector<Interval> out;
    std::vector<double> ex = set.excluded();
    for (const auto& iv : set.intervals()) {
        std::vector<double> cuts;
        for (double p : points) {
            if (p > iv.lo + tol && p < iv.hi - tol) cuts.push_back(p);
            if (std::abs(p - iv.lo) <= tol || std::abs(p - iv.hi) <= tol) ex.push_back(p);
        }
        std::sort(cuts.begin(), cuts.end());
        double lo = iv.lo;
        for (double c : cuts) {
            if (c - lo > tol) out.push_back({lo, c});
            lo = c;
            ex.push_back(c);
        }
        out.push_back({lo, iv.hi});
    }
    return SpectralIntervals(std::move(out), std::move(ex));
}

}  // namespace conetree
