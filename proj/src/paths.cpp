#include "mshit/paths.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mshit {

namespace {
constexpr double grid_tolerance = 1e-12;

std::string fmt_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

TimeGrid::TimeGrid(std::vector<double> points)
{
    if (points.size() < 2)
        throw std::invalid_argument("time grid needs at least 2 points");
    if (points.front() != 0.0 || points.back() != 1.0)
        throw std::invalid_argument("time grid must start at 0 and end at 1");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i] > points[i - 1]))
            throw std::invalid_argument("time grid must be strictly increasing");
    }
    points_ = std::make_shared<const std::vector<double>>(std::move(points));
}

std::size_t TimeGrid::nearest(double t) const noexcept
{
    const auto& p = *points_;
    auto it = std::lower_bound(p.begin(), p.end(), t);
    if (it == p.end())
        return p.size() - 1;
    const auto i = static_cast<std::size_t>(it - p.begin());
    if (i > 0 && t - p[i - 1] <= p[i] - t)
        return i - 1;
    return i;
}

std::size_t TimeGrid::find(double t) const noexcept
{
    const std::size_t i = nearest(t);
    return std::abs((*points_)[i] - t) <= grid_tolerance ? i : npos;
}

TimeGrid make_grid(std::size_t n)
{
    if (n < 2)
        throw std::invalid_argument("grid needs at least 2 points, got " + std::to_string(n));
    std::vector<double> pts(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        pts[i] = static_cast<double>(i) / denom;
    return TimeGrid{std::move(pts)};
}

Interval::Interval(double lo_, double hi_) : lo(lo_), hi(hi_)
{
    if (!(0.0 <= lo && lo < hi && hi <= 1.0))
        throw std::invalid_argument("interval [" + fmt_real(lo) + ", " + fmt_real(hi)
                                    + "] must satisfy 0 <= lo < hi <= 1");
}

IndexRange grid_range(const TimeGrid& grid, const Interval& interval)
{
    const std::size_t first = grid.find(interval.lo);
    if (first == TimeGrid::npos)
        throw std::invalid_argument("interval endpoint lo=" + fmt_real(interval.lo) + " is not a grid point");
    const std::size_t last = grid.find(interval.hi);
    if (last == TimeGrid::npos)
        throw std::invalid_argument("interval endpoint hi=" + fmt_real(interval.hi) + " is not a grid point");
    return {first, last};
}

SnappedInterval snap_to_grid(const TimeGrid& grid, double lo, double hi)
{
    const double slo = grid[grid.nearest(lo)];
    const double shi = grid[grid.nearest(hi)];
    return {Interval{slo, shi}, slo != lo || shi != hi};
}

SamplePath::SamplePath(TimeGrid grid, std::vector<double> values)
    : SamplePath(grid, IndexRange{0, grid.size() - 1}, std::move(values))
{
}

SamplePath::SamplePath(TimeGrid grid, IndexRange window, std::vector<double> values)
    : grid_(std::move(grid)), window_(window), values_(std::move(values))
{
    if (values_.size() != window_.size())
        throw std::invalid_argument("sample path length " + std::to_string(values_.size())
                                    + " does not match grid size " + std::to_string(window_.size()));
    for (double v : values_) {
        if (!std::isfinite(v))
            throw std::invalid_argument("sample path values must be finite");
    }
}

SamplePath restrict(const SamplePath& path, const Interval& interval)
{
    const IndexRange r = grid_range(path.grid(), interval);
    const IndexRange w = path.window();
    if (r.first < w.first || r.last > w.last)
        throw std::invalid_argument("interval lies outside the path's time window");
    const auto first = path.values().begin() + static_cast<std::ptrdiff_t>(r.first - w.first);
    std::vector<double> v(first, first + static_cast<std::ptrdiff_t>(r.size()));
    return SamplePath{path.grid(), r, std::move(v)};
}

Extrema path_extrema(std::span<const double> values)
{
    if (values.empty())
        throw std::invalid_argument("path_extrema of an empty path");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    return {*lo, *hi};
}

HitSummary level_hits(std::span<const double> values, double x)
{
    HitSummary out;
    int prev = 0;
    bool prev_set = false;
    for (double v : values) {
        const int side = v < x ? -1 : (v > x ? 1 : 0);
        if (side == 0) {
            if (!prev_set || prev != 0)
                ++out.cluster_count;
        } else if (prev_set && prev == -side) {
            ++out.cluster_count;
        }
        prev = side;
        prev_set = true;
    }
    out.hit = out.cluster_count > 0;
    return out;
}

}  // namespace mshit
