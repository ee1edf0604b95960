#pragma once

namespace parlab::special {

// Regularized incomplete gamma functions, P(a,x) + Q(a,x) = 1, a > 0, x >= 0.
// Series for x < a+1, continued fraction otherwise (double precision).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// log(sinh x) for x > 0, stable over the whole double range.
double log_sinh(double x);

// Volume of the Euclidean unit n-ball.
double unit_ball_volume(int n);

// Surface area |S^{n-1}| of the Euclidean unit sphere in R^n.
double unit_sphere_area(int n);

}  // namespace parlab::special
