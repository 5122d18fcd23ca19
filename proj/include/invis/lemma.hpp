#pragma once

#include "invis/conic.hpp"
#include "invis/geom.hpp"

namespace invis {

// Two foci and three ray angles. gamma is measured at F1 against the
// direction to F2; alpha and beta at F2 against the direction to F1. All
// rays live in the upper half plane of the F1F2 axis: h is the point of the
// gamma-ray at angle alpha from F2, e the point of the same gamma-ray at
// angle beta from F2.
struct LemmaConfig {
    Point2 F1{0.0, 0.0};
    Point2 F2{2.0, 0.0};
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// Side lengths of the e/h/u figure plus the identity residuals tying the
// constructed intersection angle to the closed form.
struct AppendixData {
    double a1, b1; // F1 h, F2 h
    double a2, b2; // F1 e, F2 e
    double f, c;   // F1 F2, F2 u
    double phi_constructed;
    double phi_closed;
    double eq1_residual;      // sqrt(f^2 + c^2 - 2cf cos phi) vs (a1 - b1 + a2 + b2)/2
    double eq2_residual;      // c vs (-a1 + b1 + a2 + b2)/2
    double sine_law_residual; // a1, a2 vs their law-of-sines expressions
};

// arccos( cos((alpha+beta)/2) / cos((alpha-beta)/2) ). Throws DomainError
// when the quotient is undefined or falls outside [-1, 1].
double phi_closed_form(double alpha, double beta);

// Angle at F2 of the intersection u of the ellipse through e and the
// hyperbola branch through h (confocal, foci F1 F2). Found by bisection in
// the polar angle at F2 between the alpha- and beta-rays. Independent of
// gamma; agrees with phi_closed_form.
double phi_by_construction(const LemmaConfig& cfg);

AppendixData appendix_check(const LemmaConfig& cfg);

// Collinearity residual of u1, u2, F2 where u_i is the intersection of the
// confocal ellipse/hyperbola pair erected on the gamma_i-ray (e_i on the
// beta-ray, h_i on the alpha-ray).
double check_lemma_a(Point2 F1, Point2 F2, double gamma1, double gamma2, double alpha,
                     double beta);

// Collinearity residual of e2, h2, F1: starting from u1, u2 on one ray out
// of F2, cut the gamma-ray from F1 with the u1-pair of curves (giving e1,
// h1), then transfer along rays from F2 onto the u2-pair (giving e2, h2).
double check_lemma_b(Point2 F1, Point2 F2, Point2 u1, Point2 u2, double gamma);

} // namespace invis
