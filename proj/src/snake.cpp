#include "lesionseg/snake.hpp"

#include <algorithm>
#include <cmath>

#include "lesionseg/errors.hpp"

namespace lesionseg {

namespace {

void validate_params(const SnakeParams& p) {
    if (!(p.alpha >= 0.0) || !(p.beta >= 0.0) || !(p.gamma >= 0.0) ||
        !std::isfinite(p.alpha) || !std::isfinite(p.beta) || !std::isfinite(p.gamma))
        throw InvalidArgument("snake weights must be finite and non-negative");
    if (p.max_iterations < 1)
        throw InvalidArgument("max_iterations must be at least 1");
    if (p.neighborhood_radius < 1)
        throw InvalidArgument("neighborhood_radius must be at least 1");
    if (!(p.converge_fraction > 0.0) || p.converge_fraction > 1.0)
        throw InvalidArgument("converge_fraction must lie in (0, 1]");
}

bool rounded_in_bounds(const Eigen::Vector2d& p, const EnergyField& field,
                       long long& ix, long long& iy) {
    ix = std::llround(p.x());
    iy = std::llround(p.y());
    return ix >= 0 && ix < field.width && iy >= 0 && iy < field.height;
}

} // namespace

double elastic_energy(const Contour& c, double alpha) {
    const std::size_t n = c.points.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        sum += (c.points[i] - c.points[(i + n - 1) % n]).squaredNorm();
    return alpha * sum;
}

double bending_energy(const Contour& c, double beta) {
    const std::size_t n = c.points.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d d = c.points[(i + n - 1) % n] - 2.0 * c.points[i] +
                                  c.points[(i + 1) % n];
        sum += d.squaredNorm();
    }
    return beta * sum;
}

EnergyField image_energy_field(const RasterImage& gray, double smoothing_sigma) {
    const GridD smooth = gaussian_blur(to_grid(gray), smoothing_sigma);
    const int w = gray.width;
    const int h = gray.height;

    GridD mag2(h, w);
    for (int y = 0; y < h; ++y) {
        const int ym = std::max(y - 1, 0);
        const int yp = std::min(y + 1, h - 1);
        for (int x = 0; x < w; ++x) {
            const int xm = std::max(x - 1, 0);
            const int xp = std::min(x + 1, w - 1);
            const double gx = (smooth(y, xp) - smooth(y, xm)) / 2.0;
            const double gy = (smooth(yp, x) - smooth(ym, x)) / 2.0;
            mag2(y, x) = gx * gx + gy * gy;
        }
    }

    EnergyField field;
    field.width = w;
    field.height = h;
    const double peak = mag2.maxCoeff();
    if (peak > 0.0)
        field.values = -(mag2 / peak);
    else
        field.values = GridD::Zero(h, w);
    return field;
}

EnergyBreakdown total_energy(const Contour& c, const EnergyField& field,
                             const SnakeParams& p) {
    EnergyBreakdown e;
    e.elastic = elastic_energy(c, p.alpha);
    e.bending = bending_energy(c, p.beta);
    double field_sum = 0.0;
    for (const auto& pt : c.points) {
        long long ix, iy;
        if (!rounded_in_bounds(pt, field, ix, iy))
            throw OutOfBounds("contour point outside the energy field");
        field_sum += field.values(static_cast<Eigen::Index>(iy),
                                  static_cast<Eigen::Index>(ix));
    }
    e.image = p.gamma * field_sum;
    e.constraint = 0.0;
    e.total = e.elastic + e.bending + e.image + e.constraint;
    return e;
}

EvolveResult evolve(const Contour& c, const EnergyField& field,
                    const SnakeParams& p) {
    validate_params(p);
    const std::size_t n = c.points.size();
    if (n < 3)
        throw DegenerateContour("snake needs at least 3 points");
    for (const auto& pt : c.points) {
        long long ix, iy;
        if (!rounded_in_bounds(pt, field, ix, iy))
            throw OutOfBounds("contour point outside the energy field");
    }

    std::vector<Eigen::Vector2d> pts = c.points;
    const int r = p.neighborhood_radius;

    // Energy terms that depend on the single moving point q, all other
    // points held fixed; differences of this local energy equal differences
    // of the total energy.
    const auto local_energy = [&](const Eigen::Vector2d& q,
                                  const Eigen::Vector2d& prev2,
                                  const Eigen::Vector2d& prev,
                                  const Eigen::Vector2d& next,
                                  const Eigen::Vector2d& next2, long long ix,
                                  long long iy) {
        const double elastic = (q - prev).squaredNorm() + (next - q).squaredNorm();
        const Eigen::Vector2d d0 = prev2 - 2.0 * prev + q;
        const Eigen::Vector2d d1 = prev - 2.0 * q + next;
        const Eigen::Vector2d d2 = q - 2.0 * next + next2;
        const double bending =
            d0.squaredNorm() + d1.squaredNorm() + d2.squaredNorm();
        const double image = field.values(static_cast<Eigen::Index>(iy),
                                          static_cast<Eigen::Index>(ix));
        return p.alpha * elastic + p.beta * bending + p.gamma * image;
    };

    EvolveResult result;
    for (int iteration = 0; iteration < p.max_iterations; ++iteration) {
        std::size_t moved = 0;
        for (std::size_t s = 0; s < n; ++s) {
            const Eigen::Vector2d& prev2 = pts[(s + n - 2) % n];
            const Eigen::Vector2d& prev = pts[(s + n - 1) % n];
            const Eigen::Vector2d& next = pts[(s + 1) % n];
            const Eigen::Vector2d& next2 = pts[(s + 2) % n];
            const Eigen::Vector2d q0 = pts[s];

            long long ix, iy;
            rounded_in_bounds(q0, field, ix, iy); // in bounds by induction
            double best = local_energy(q0, prev2, prev, next, next2, ix, iy);
            Eigen::Vector2d best_q = q0;

            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    if (dx == 0 && dy == 0)
                        continue;
                    const Eigen::Vector2d q(q0.x() + dx, q0.y() + dy);
                    if (!rounded_in_bounds(q, field, ix, iy))
                        continue;
                    if ((q.x() == prev.x() && q.y() == prev.y()) ||
                        (q.x() == next.x() && q.y() == next.y()))
                        continue; // would collapse two consecutive points
                    const double e =
                        local_energy(q, prev2, prev, next, next2, ix, iy);
                    if (e < best) {
                        best = e;
                        best_q = q;
                    }
                }
            if (best_q.x() != q0.x() || best_q.y() != q0.y()) {
                pts[s] = best_q;
                ++moved;
            }
        }

        Contour snapshot;
        snapshot.points = pts;
        result.trace.push_back(total_energy(snapshot, field, p));
        if (static_cast<double>(moved) / static_cast<double>(n) <
            p.converge_fraction)
            break;
    }

    result.contour.points = std::move(pts);
    return result;
}

BinaryMask contour_to_mask(const Contour& c, int width, int height) {
    const std::size_t n = c.points.size();
    if (n < 3)
        throw DegenerateContour("polygon needs at least 3 points");
    bool collinear = true;
    for (std::size_t i = 2; i < n && collinear; ++i) {
        const Eigen::Vector2d& o = c.points[0];
        const Eigen::Vector2d& a = c.points[1];
        const Eigen::Vector2d& b = c.points[i];
        if ((a.x() - o.x()) * (b.y() - o.y()) -
                (a.y() - o.y()) * (b.x() - o.x()) !=
            0.0)
            collinear = false;
    }
    if (collinear)
        throw DegenerateContour("all polygon points are collinear");
    if (width < 1 || height < 1)
        throw InvalidArgument("mask dimensions must be positive");

    BinaryMask mask = BinaryMask::create(width, height);
    std::vector<double> crossings;
    for (int py = 0; py < height; ++py) {
        crossings.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::Vector2d& a = c.points[i];
            const Eigen::Vector2d& b = c.points[(i + 1) % n];
            if ((a.y() > py) != (b.y() > py))
                crossings.push_back(a.x() + (py - a.y()) * (b.x() - a.x()) /
                                                (b.y() - a.y()));
        }
        std::sort(crossings.begin(), crossings.end());
        for (std::size_t k = 0; k + 1 < crossings.size(); k += 2) {
            // Fill integer x with x >= crossings[k] and x < crossings[k+1],
            // clamped to the image so the casts below stay in range.
            const double lo = std::max(crossings[k], 0.0);
            const double hi =
                std::min(crossings[k + 1], static_cast<double>(width));
            if (lo >= hi)
                continue;
            const int x_begin = static_cast<int>(std::ceil(lo));
            const int x_end =
                std::min(static_cast<int>(std::ceil(hi)) - 1, width - 1);
            for (int x = x_begin; x <= x_end; ++x)
                mask.set(x, py, true);
        }
    }
    return mask;
}

} // namespace lesionseg
