#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace mshit {

/// Strictly increasing time points covering [0, 1], endpoints included.
/// Copies share the underlying storage.
class TimeGrid
{
public:
    /// Validates the invariants; throws std::invalid_argument.
    explicit TimeGrid(std::vector<double> points);

    std::span<const double> points() const noexcept { return *points_; }
    std::size_t size() const noexcept { return points_->size(); }
    double operator[](std::size_t i) const noexcept { return (*points_)[i]; }

    /// Index of the grid point equal to t (within 1e-12), or npos.
    std::size_t find(double t) const noexcept;
    /// Index of the nearest grid point.
    std::size_t nearest(double t) const noexcept;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) noexcept
    {
        return a.points_ == b.points_ || *a.points_ == *b.points_;
    }

private:
    std::shared_ptr<const std::vector<double>> points_;
};

inline constexpr std::size_t default_grid_points = 1001;

/// n equally spaced points i/(n-1); n >= 2.
TimeGrid make_grid(std::size_t n);

/// Closed subinterval [lo, hi] of [0, 1] with positive length.
struct Interval
{
    double lo = 0.0;
    double hi = 1.0;

    Interval() = default;
    Interval(double lo_, double hi_);

    bool contains(const Interval& other) const noexcept { return lo <= other.lo && other.hi <= hi; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Inclusive index range [first, last] of a grid.
struct IndexRange
{
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t size() const noexcept { return last - first + 1; }
};

/// Resolves an interval to grid indices. Endpoints must lie on the grid;
/// otherwise throws std::invalid_argument naming the endpoint.
IndexRange grid_range(const TimeGrid& grid, const Interval& interval);

/// Result of snapping an interval to the nearest grid points.
struct SnappedInterval
{
    Interval interval;
    bool moved = false;
};
SnappedInterval snap_to_grid(const TimeGrid& grid, double lo, double hi);

/// Values of a continuous process at the points of a grid, or of a
/// contiguous window of it after restrict().
class SamplePath
{
public:
    SamplePath(TimeGrid grid, std::vector<double> values);

    /// Parent grid; times() is the window this path covers.
    const TimeGrid& grid() const noexcept { return grid_; }
    std::span<const double> times() const noexcept
    {
        return grid_.points().subspan(window_.first, window_.size());
    }
    IndexRange window() const noexcept { return window_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

private:
    SamplePath(TimeGrid grid, IndexRange window, std::vector<double> values);
    friend SamplePath restrict(const SamplePath&, const Interval&);

    TimeGrid grid_;
    IndexRange window_;
    std::vector<double> values_;
};

/// Subpath on the grid points inside [lo, hi].
SamplePath restrict(const SamplePath& path, const Interval& interval);

struct Extrema
{
    double min;
    double max;
};

Extrema path_extrema(std::span<const double> values);
inline Extrema path_extrema(const SamplePath& path) { return path_extrema(path.values()); }

struct HitSummary
{
    bool hit = false;
    /// Lower bound on the number of distinct solution times.
    std::size_t cluster_count = 0;
};

/// Level-crossing summary of a sampled continuous path.
///
/// A path hits x iff min <= x <= max (intermediate values). Each strict
/// sign change of (value - x) between neighbouring points is one cluster, and
/// each maximal run of exact touches is one cluster, so a tangential touch
/// counts once.
HitSummary level_hits(std::span<const double> values, double x);
inline HitSummary level_hits(const SamplePath& path, double x) { return level_hits(path.values(), x); }

/// Same rule without the cluster count; used in the hot loops.
inline bool hits_level(std::span<const double> values, double x) noexcept
{
    bool below = false;
    bool above = false;
    for (double v : values) {
        below |= v <= x;
        above |= v >= x;
        if (below && above)
            return true;
    }
    return false;
}

}  // namespace mshit
