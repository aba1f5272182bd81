#include "lesionseg/contour.hpp"

#include <algorithm>
#include <cmath>

#include "lesionseg/errors.hpp"
#include "lesionseg/rng.hpp"

namespace lesionseg {

namespace {

double cross(const Eigen::Vector2d& o, const Eigen::Vector2d& a,
             const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Andrew monotone chain. Counter-clockwise by the shoelace sign; collinear
// points along hull edges are dropped. Returns fewer than 3 points for
// degenerate (empty/collinear) inputs.
std::vector<Eigen::Vector2d> convex_hull(std::vector<Eigen::Vector2d> pts) {
    std::sort(pts.begin(), pts.end(),
              [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                  return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
              });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                              return a.x() == b.x() && a.y() == b.y();
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3)
        return pts;

    std::vector<Eigen::Vector2d> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) { // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) { // upper hull
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0)
            --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1); // last point repeats the first
    return hull;
}

Eigen::Vector2d centroid_of(const std::vector<Eigen::Vector2d>& pts) {
    Eigen::Vector2d c(0.0, 0.0);
    for (const auto& p : pts)
        c += p;
    return c / static_cast<double>(pts.size());
}

bool all_collinear(const std::vector<Eigen::Vector2d>& pts) {
    if (pts.size() < 3)
        return true;
    for (std::size_t i = 2; i < pts.size(); ++i)
        if (cross(pts[0], pts[1], pts[i]) != 0.0)
            return false;
    return true;
}

Contour fallback_rectangle(int width, int height, const InitParams& params) {
    const double mx = params.fallback_margin * width;
    const double my = params.fallback_margin * height;
    const double x0 = std::clamp(mx, 0.0, width - 1.0);
    const double y0 = std::clamp(my, 0.0, height - 1.0);
    const double x1 = std::clamp(width - mx, 0.0, width - 1.0);
    const double y1 = std::clamp(height - my, 0.0, height - 1.0);
    Contour rect;
    rect.points = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    return resample_contour(rect, params.num_points);
}

} // namespace

bool operator==(const Contour& a, const Contour& b) {
    if (a.points.size() != b.points.size())
        return false;
    for (std::size_t i = 0; i < a.points.size(); ++i)
        if (a.points[i].x() != b.points[i].x() || a.points[i].y() != b.points[i].y())
            return false;
    return true;
}

double perimeter(const Contour& c) {
    double total = 0.0;
    const std::size_t n = c.points.size();
    for (std::size_t i = 0; i < n; ++i)
        total += (c.points[(i + 1) % n] - c.points[i]).norm();
    return total;
}

double signed_area(const Contour& c) {
    double twice = 0.0;
    const std::size_t n = c.points.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& p = c.points[i];
        const auto& q = c.points[(i + 1) % n];
        twice += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * twice;
}

Contour seed_contour(const std::vector<Keypoint>& keypoints, int width,
                     int height, const InitParams& params) {
    if (width < 1 || height < 1)
        throw InvalidArgument("image dimensions must be positive");
    if (params.num_points < 8)
        throw InvalidArgument("num_points must be at least 8");

    std::vector<Eigen::Vector2d> polygon;
    if (params.strategy == InitStrategy::Hull) {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(keypoints.size());
        for (const auto& kp : keypoints)
            pts.emplace_back(static_cast<double>(kp.x), static_cast<double>(kp.y));
        polygon = convex_hull(std::move(pts));
    } else {
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(keypoints.size());
        for (const auto& kp : keypoints)
            pts.emplace_back(static_cast<double>(kp.x), static_cast<double>(kp.y));
        const std::size_t take =
            std::min<std::size_t>(static_cast<std::size_t>(params.num_points), pts.size());
        Rng rng(params.rng_seed);
        for (std::size_t i = 0; i < take; ++i) { // partial Fisher-Yates
            const std::size_t j = i + static_cast<std::size_t>(
                                          rng.bounded(static_cast<std::uint64_t>(pts.size() - i)));
            std::swap(pts[i], pts[j]);
        }
        pts.resize(take);
        std::sort(pts.begin(), pts.end(),
                  [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                      return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
                  });
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                                  return a.x() == b.x() && a.y() == b.y();
                              }),
                  pts.end());
        if (pts.size() >= 3 && !all_collinear(pts)) {
            const Eigen::Vector2d c = centroid_of(pts);
            std::sort(pts.begin(), pts.end(),
                      [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          const double aa = std::atan2(a.y() - c.y(), a.x() - c.x());
                          const double ab = std::atan2(b.y() - c.y(), b.x() - c.x());
                          if (aa != ab)
                              return aa < ab;
                          const double ra = (a - c).squaredNorm();
                          const double rb = (b - c).squaredNorm();
                          if (ra != rb)
                              return ra < rb;
                          return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
                      });
            polygon = std::move(pts);
        }
    }

    if (polygon.size() < 3 || all_collinear(polygon))
        return fallback_rectangle(width, height, params);

    const Eigen::Vector2d c = centroid_of(polygon);
    for (auto& p : polygon) {
        p = c + 1.15 * (p - c);
        p.x() = std::clamp(p.x(), 0.0, width - 1.0);
        p.y() = std::clamp(p.y(), 0.0, height - 1.0);
    }

    // Clamping can collapse neighbors onto each other.
    std::vector<Eigen::Vector2d> cleaned;
    cleaned.reserve(polygon.size());
    for (const auto& p : polygon)
        if (cleaned.empty() || p.x() != cleaned.back().x() || p.y() != cleaned.back().y())
            cleaned.push_back(p);
    while (cleaned.size() > 1 && cleaned.back().x() == cleaned.front().x() &&
           cleaned.back().y() == cleaned.front().y())
        cleaned.pop_back();
    if (cleaned.size() < 3 || all_collinear(cleaned))
        return fallback_rectangle(width, height, params);

    Contour seeded;
    seeded.points = std::move(cleaned);
    return resample_contour(seeded, params.num_points);
}

Contour resample_contour(const Contour& c, int n) {
    if (n < 8)
        throw InvalidArgument("resample target must be at least 8 points");
    const std::size_t m = c.points.size();
    if (m == 0)
        throw DegenerateContour("cannot resample an empty contour");

    std::vector<double> seg(m);
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        seg[i] = (c.points[(i + 1) % m] - c.points[i]).norm();
        total += seg[i];
    }
    if (total <= 0.0)
        throw DegenerateContour("contour has zero perimeter");

    Contour out;
    out.points.reserve(static_cast<std::size_t>(n));
    std::size_t segment = 0;
    double consumed = 0.0; // arc length before the current segment
    for (int k = 0; k < n; ++k) {
        const double target = total * k / n;
        while (segment + 1 < m && consumed + seg[segment] <= target) {
            consumed += seg[segment];
            ++segment;
        }
        if (k == 0) {
            out.points.push_back(c.points[0]);
            continue;
        }
        const double along = seg[segment] > 0.0
                                 ? (target - consumed) / seg[segment]
                                 : 0.0;
        const Eigen::Vector2d& a = c.points[segment];
        const Eigen::Vector2d& b = c.points[(segment + 1) % m];
        out.points.push_back(a + along * (b - a));
    }
    return out;
}

} // namespace lesionseg
