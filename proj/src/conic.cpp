#include "invis/conic.hpp"

#include <algorithm>
#include <cmath>

#include "invis/errors.hpp"

namespace invis {

namespace {

constexpr double kArcAngleSlack = 1e-12;

// Denominator D(theta) of the focal polar form, and its theta-derivative.
// r = numer / D with numer constant per conic, D > 0 on the valid domain.
struct PolarDenom {
    double numer;
    double den;
    double dden;
};

PolarDenom polar_denom(const Conic& c, int pivot, double theta) {
    Point2 pv = c.focus(pivot);
    Point2 other = c.focus(1 - pivot);
    double f = c.focal_dist();
    double delta = theta - angle_of(other - pv);
    double cd = std::cos(delta);
    double sd = std::sin(delta);
    if (c.kind == ConicKind::Ellipse) {
        return {c.k * c.k - f * f, 2.0 * (c.k - f * cd), 2.0 * f * sd};
    }
    if (pivot == c.branch_focus) {
        return {f * f - c.k * c.k, 2.0 * (c.k + f * cd), -2.0 * f * sd};
    }
    return {f * f - c.k * c.k, 2.0 * (f * cd - c.k), -2.0 * f * sd};
}

} // namespace

Conic conic_through(ConicKind kind, Point2 f1, Point2 f2, Point2 p) {
    double f = dist(f1, f2);
    double d1 = dist(p, f1);
    double d2 = dist(p, f2);
    if (kind == ConicKind::Ellipse) {
        double k = d1 + d2;
        if (k <= f + 1e-12)
            throw DegenerateConic("ellipse through a point of the focal segment");
        return {kind, f1, f2, k, 0};
    }
    double k = std::fabs(d1 - d2);
    if (k <= 1e-12)
        throw DegenerateConic("hyperbola through a point of the bisector");
    if (k >= f - 1e-12)
        throw DegenerateConic("hyperbola through a point of the focal line");
    return {kind, f1, f2, k, d1 <= d2 ? 0 : 1};
}

double focal_residual(const Conic& c, Point2 p) {
    if (c.kind == ConicKind::Ellipse)
        return std::fabs(dist(p, c.f1) + dist(p, c.f2) - c.k);
    return std::fabs(dist(p, c.far_focus()) - dist(p, c.near_focus()) - c.k);
}

double exterior_margin(const Conic& c, Point2 p) {
    if (c.kind == ConicKind::Ellipse)
        return dist(p, c.f1) + dist(p, c.f2) - c.k;
    return c.k - (dist(p, c.far_focus()) - dist(p, c.near_focus()));
}

Dir2 normal_at(const Conic& c, Point2 p) {
    if (focal_residual(c, p) >= kEpsGeom) throw OffCurve("normal_at: point not on conic");
    if (c.kind == ConicKind::Ellipse)
        return Dir2::from(normalize(p - c.f1) + normalize(p - c.f2));
    // Gradient of d_far - d_near points off the convex side of the branch.
    return Dir2::from(normalize(p - c.near_focus()) - normalize(p - c.far_focus()));
}

Dir2 tangent_at(const Conic& c, Point2 p) {
    Dir2 n = normal_at(c, p);
    return {-n.y, n.x};
}

double polar_radius(const Conic& c, int pivot, double theta) {
    PolarDenom pd = polar_denom(c, pivot, theta);
    if (pd.den <= 0.0)
        throw DomainError("polar_radius: no curve point in this direction");
    return pd.numer / pd.den;
}

double polar_radius_deriv(const Conic& c, int pivot, double theta) {
    PolarDenom pd = polar_denom(c, pivot, theta);
    if (pd.den <= 0.0)
        throw DomainError("polar_radius_deriv: no curve point in this direction");
    return -pd.numer * pd.dden / (pd.den * pd.den);
}

Point2 polar_point(const Conic& c, int pivot, double theta) {
    double r = polar_radius(c, pivot, theta);
    return c.focus(pivot) + r * Vec2{std::cos(theta), std::sin(theta)};
}

bool ConicArc::contains_angle(double theta) const {
    if (full()) return true;
    double d = theta - theta_min;
    d -= 2.0 * kPi * std::floor(d / (2.0 * kPi)); // [0, 2pi)
    if (d > kPi) d -= 2.0 * kPi;
    return d >= -kArcAngleSlack && d <= (theta_max - theta_min) + kArcAngleSlack;
}

Point2 ConicArc::point_at(double theta) const {
    if (!contains_angle(theta)) throw OutOfExtent("point_at: angle outside arc");
    return polar_point(conic, pivot, theta);
}

ConicArc make_arc(const Conic& c, int pivot, Point2 e0, Point2 e1) {
    if (focal_residual(c, e0) >= kEpsGeom || focal_residual(c, e1) >= kEpsGeom)
        throw OffCurve("make_arc: endpoint not on conic");
    Point2 pv = c.focus(pivot);
    double t0 = angle_of(e0 - pv);
    double t1 = angle_of(e1 - pv);
    double d = std::remainder(t1 - t0, 2.0 * kPi);
    if (std::fabs(d) > kPi - 1e-9)
        throw DomainError("make_arc: endpoints subtend a half turn, orientation ambiguous");
    if (d >= 0.0) return {c, pivot, t0, t0 + d};
    return {c, pivot, t1, t1 - d};
}

ConicArc full_arc(const Conic& c, int pivot) { return {c, pivot, 0.0, 2.0 * kPi}; }

std::vector<ConicHit> ray_conic_hits(const Ray2& r, const ConicArc& arc, double tmin) {
    const Conic& c = arc.conic;
    Vec2 d = r.dir.vec();
    Vec2 a = r.origin - c.f1;
    Vec2 b = r.origin - c.f2;
    double k2 = c.k * c.k;
    double m = k2 + norm2(a) - norm2(b);
    double l1 = 2.0 * dot(d, c.f2 - c.f1);
    double A = l1 * l1 - 4.0 * k2;
    double B = 2.0 * m * l1 - 8.0 * k2 * dot(a, d);
    double C = m * m - 4.0 * k2 * norm2(a);

    // Roots of the squared focal equation. It covers the ellipse and both
    // hyperbola branches with the same k; spurious ones are filtered below.
    double cand[2];
    int ncand = 0;
    double scale = l1 * l1 + 4.0 * k2;
    if (std::fabs(A) < 1e-12 * scale) {
        if (std::fabs(B) > 1e-300) cand[ncand++] = -C / B;
    } else {
        double disc = B * B - 4.0 * A * C;
        double dscale = std::max(B * B, std::fabs(4.0 * A * C));
        if (dscale < 1e-300) dscale = 1e-300;
        if (disc / dscale < -kDiscMerge) {
            // no real intersection
        } else if (disc / dscale < kDiscMerge) {
            cand[ncand++] = -B / (2.0 * A); // grazing: merged double root
        } else {
            double sq = std::sqrt(disc);
            double q = -0.5 * (B + (B >= 0.0 ? sq : -sq));
            cand[ncand++] = q / A;
            if (std::fabs(q) > 1e-300) cand[ncand++] = C / q;
        }
    }

    std::vector<ConicHit> hits;
    for (int i = 0; i < ncand; ++i) {
        double t = cand[i];
        if (!std::isfinite(t)) continue;
        if (t < tmin - 1e-6) continue;
        if (focal_residual(c, r.at(t)) > 1e-4) continue; // wrong branch / sign combination

        // Newton polish on the exact (unsquared) focal equation.
        for (int it = 0; it < 3; ++it) {
            Point2 p = r.at(t);
            double g, dg;
            if (c.kind == ConicKind::Ellipse) {
                g = dist(p, c.f1) + dist(p, c.f2) - c.k;
                dg = dot(d, normalize(p - c.f1)) + dot(d, normalize(p - c.f2));
            } else {
                g = dist(p, c.far_focus()) - dist(p, c.near_focus()) - c.k;
                dg = dot(d, normalize(p - c.far_focus())) - dot(d, normalize(p - c.near_focus()));
            }
            if (std::fabs(dg) < 1e-12) break;
            double step = g / dg;
            if (std::fabs(step) > 1e-3) break; // tangency / ill-conditioned: keep root as is
            t -= step;
        }

        if (t < tmin) continue;
        Point2 p = r.at(t);
        if (focal_residual(c, p) >= kEpsGeom) continue;
        double theta = angle_of(p - c.focus(arc.pivot));
        if (!arc.contains_angle(theta)) continue;
        bool dup = false;
        for (const ConicHit& h : hits)
            if (std::fabs(h.t - t) < 1e-9) dup = true;
        if (!dup) hits.push_back({t, p, theta});
    }
    std::sort(hits.begin(), hits.end(), [](const ConicHit& x, const ConicHit& y) { return x.t < y.t; });
    return hits;
}

double arc_length(const ConicArc& arc, int intervals) {
    if (intervals < 2) intervals = 2;
    if (intervals % 2) ++intervals;
    double a = arc.theta_min, b = arc.theta_max;
    double h = (b - a) / intervals;
    auto speed = [&](double th) {
        double r = polar_radius(arc.conic, arc.pivot, th);
        double dr = polar_radius_deriv(arc.conic, arc.pivot, th);
        return std::hypot(r, dr);
    };
    double s = speed(a) + speed(b);
    for (int i = 1; i < intervals; ++i) s += speed(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

} // namespace invis
