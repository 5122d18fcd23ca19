#include "invis/lemma.hpp"

#include <algorithm>
#include <cmath>

#include "invis/errors.hpp"

namespace invis {

namespace {

struct Axis {
    Point2 F1, F2;
    Vec2 ex, ey; // unit axis direction and its upper normal

    explicit Axis(Point2 f1, Point2 f2) : F1(f1), F2(f2) {
        if (dist(f1, f2) < 1e-12) throw DomainError("coincident foci");
        ex = normalize(f2 - f1);
        ey = rot90(ex);
    }
    Vec2 dir_f1(double g) const { return std::cos(g) * ex + std::sin(g) * ey; }
    Vec2 dir_f2(double a) const { return -std::cos(a) * ex + std::sin(a) * ey; }
    // angle at F2 between the direction to F1 and the direction to p
    double angle_f2(Point2 p) const {
        Vec2 w = p - F2;
        return std::atan2(dot(w, ey), -dot(w, ex));
    }
};

Point2 ray_cross(const Axis& ax, double gamma, double at_f2) {
    Ray2 r1{ax.F1, Dir2::from(ax.dir_f1(gamma))};
    Ray2 r2{ax.F2, Dir2::from(ax.dir_f2(at_f2))};
    double den = cross(r1.dir.vec(), r2.dir.vec());
    if (std::fabs(den) < kEpsParallel) throw DomainError("defining rays are parallel");
    Vec2 w = r2.origin - r1.origin;
    double t = cross(w, r2.dir.vec()) / den;
    double s = cross(w, r1.dir.vec()) / den;
    if (t <= 0.0 || s <= 0.0) throw DomainError("defining rays do not meet");
    return r1.at(t);
}

void require_angles(double alpha, double beta, double gamma) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(gamma > 0.0) || alpha + gamma >= kPi ||
        beta + gamma >= kPi)
        throw DomainError("angles must be positive with alpha+gamma, beta+gamma < pi");
}

// Intersection angle (at F2) of the ellipse with the locus
// d(p,F1) - d(p,F2) = diff, bisected between the two defining ray angles.
// Working with the signed difference keeps the diff = 0 case (the
// perpendicular bisector, a degenerate hyperbola) in scope.
double intersect_angle(const Axis& ax, const Conic& ell, double diff, double psi_lo,
                       double psi_hi) {
    if (psi_lo > psi_hi) std::swap(psi_lo, psi_hi);
    auto g_at = [&](double psi) {
        Vec2 d = ax.dir_f2(psi);
        double r = polar_radius(ell, 1, angle_of(d));
        Point2 p = ax.F2 + r * d;
        return dist(p, ell.f1) - dist(p, ell.f2) - diff;
    };
    if (psi_hi - psi_lo < kLemmaAngleTol) return 0.5 * (psi_lo + psi_hi);
    double g_lo = g_at(psi_lo);
    double g_hi = g_at(psi_hi);
    if (g_lo == 0.0) return psi_lo;
    if (g_hi == 0.0) return psi_hi;
    if ((g_lo > 0.0) == (g_hi > 0.0))
        throw NoIntersection("ellipse and hyperbola do not cross between the rays");
    for (int it = 0; it < 200 && psi_hi - psi_lo > kLemmaAngleTol; ++it) {
        double mid = 0.5 * (psi_lo + psi_hi);
        double g = g_at(mid);
        if (g == 0.0) return mid;
        if ((g > 0.0) == (g_lo > 0.0)) {
            psi_lo = mid;
            g_lo = g;
        } else {
            psi_hi = mid;
        }
    }
    return 0.5 * (psi_lo + psi_hi);
}

struct Figure {
    Axis ax;
    Point2 e, h;
    Conic ell;
    double diff; // signed focal difference of the curve through h

    explicit Figure(const LemmaConfig& cfg)
        : ax(cfg.F1, cfg.F2),
          e(ray_cross(ax, cfg.gamma, cfg.beta)),
          h(ray_cross(ax, cfg.gamma, cfg.alpha)),
          ell(conic_through(ConicKind::Ellipse, cfg.F1, cfg.F2, e)),
          diff(dist(h, cfg.F1) - dist(h, cfg.F2)) {}
};

} // namespace

double phi_closed_form(double alpha, double beta) {
    double den = std::cos(0.5 * (alpha - beta));
    if (std::fabs(den) < 1e-12) throw DomainError("cos((alpha-beta)/2) vanishes");
    double ratio = std::cos(0.5 * (alpha + beta)) / den;
    if (ratio < -1.0 || ratio > 1.0) throw DomainError("cosine ratio outside [-1, 1]");
    return std::acos(ratio);
}

double phi_by_construction(const LemmaConfig& cfg) {
    require_angles(cfg.alpha, cfg.beta, cfg.gamma);
    if (std::fabs(cfg.alpha - cfg.beta) < 1e-15) return cfg.alpha; // e = h = u
    Figure fig(cfg);
    return intersect_angle(fig.ax, fig.ell, fig.diff, cfg.alpha, cfg.beta);
}

AppendixData appendix_check(const LemmaConfig& cfg) {
    require_angles(cfg.alpha, cfg.beta, cfg.gamma);
    Figure fig(cfg);
    AppendixData d;
    d.f = dist(cfg.F1, cfg.F2);
    d.a1 = dist(cfg.F1, fig.h);
    d.b1 = dist(cfg.F2, fig.h);
    d.a2 = dist(cfg.F1, fig.e);
    d.b2 = dist(cfg.F2, fig.e);
    double psi = std::fabs(cfg.alpha - cfg.beta) < 1e-15
                     ? cfg.alpha
                     : intersect_angle(fig.ax, fig.ell, fig.diff, cfg.alpha, cfg.beta);
    Vec2 dir = fig.ax.dir_f2(psi);
    Point2 u = cfg.F2 + polar_radius(fig.ell, 1, angle_of(dir)) * dir;
    d.c = dist(cfg.F2, u);
    d.phi_constructed = psi;
    d.phi_closed = phi_closed_form(cfg.alpha, cfg.beta);
    d.eq1_residual = std::fabs(std::sqrt(d.f * d.f + d.c * d.c - 2.0 * d.c * d.f * std::cos(psi)) -
                               0.5 * (d.a1 - d.b1 + d.a2 + d.b2));
    d.eq2_residual = std::fabs(d.c - 0.5 * (-d.a1 + d.b1 + d.a2 + d.b2));
    d.sine_law_residual =
        std::max(std::fabs(d.a1 - d.f * std::sin(cfg.alpha) / std::sin(cfg.alpha + cfg.gamma)),
                 std::fabs(d.a2 - d.f * std::sin(cfg.beta) / std::sin(cfg.beta + cfg.gamma)));
    return d;
}

double check_lemma_a(Point2 F1, Point2 F2, double gamma1, double gamma2, double alpha,
                     double beta) {
    require_angles(alpha, beta, gamma1);
    require_angles(alpha, beta, gamma2);
    Axis ax(F1, F2);
    auto u_of = [&](double gamma) {
        LemmaConfig cfg{F1, F2, alpha, beta, gamma};
        Figure fig(cfg);
        double psi = std::fabs(alpha - beta) < 1e-15
                         ? alpha
                         : intersect_angle(ax, fig.ell, fig.diff, alpha, beta);
        Vec2 dir = ax.dir_f2(psi);
        return F2 + polar_radius(fig.ell, 1, angle_of(dir)) * dir;
    };
    return collinearity_residual(F2, u_of(gamma1), u_of(gamma2));
}

double check_lemma_b(Point2 F1, Point2 F2, Point2 u1, Point2 u2, double gamma) {
    Axis ax(F1, F2);
    if (collinearity_residual(F2, u1, u2) > kEpsGeom || dot(u1 - F2, u2 - F2) <= 0.0)
        throw DomainError("u1 and u2 must lie on one ray out of F2");
    if (!(gamma > 1e-9) || !(gamma < kPi - 1e-9))
        throw DomainError("gamma-ray must leave the axis");
    Conic E1 = conic_through(ConicKind::Ellipse, F1, F2, u1);
    Conic H1 = conic_through(ConicKind::HyperbolaBranch, F1, F2, u1);
    Conic E2 = conic_through(ConicKind::Ellipse, F1, F2, u2);
    Conic H2 = conic_through(ConicKind::HyperbolaBranch, F1, F2, u2);
    double th = angle_of(ax.dir_f1(gamma));
    Point2 e1, h1;
    try {
        e1 = polar_point(E1, 0, th);
        h1 = polar_point(H1, 0, th);
    } catch (const DomainError&) {
        throw NoIntersection("gamma-ray misses a curve through u1");
    }
    Point2 e2, h2;
    try {
        e2 = polar_point(E2, 1, angle_of(e1 - F2));
        h2 = polar_point(H2, 1, angle_of(h1 - F2));
    } catch (const DomainError&) {
        throw NoIntersection("transfer ray misses a curve through u2");
    }
    return collinearity_residual(F1, e2, h2);
}

} // namespace invis
