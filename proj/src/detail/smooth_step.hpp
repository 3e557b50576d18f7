#pragma once

// Building blocks derived from the standard bump exp(-1/(1-x^2)).
//
// On the unit interval the bump is rewritten as b(u) = exp(-1/(4u(1-u))),
// u in (0,1). Its normalized primitive
//
//   B(u) = int_0^u b / int_0^1 b
//
// rises smoothly from 0 to 1; every derivative of B vanishes at both ends.


namespace smeans::detail {

/// exp(-1/(4u(1-u))) on (0,1), 0 elsewhere.
double unit_bump(double u);

/// Normalized primitive B(u): 0 for u <= 0, 1 for u >= 1.
double bump_primitive(double u);

/// B^(order)(u) for order >= 1, exact up to roundoff (Taylor-jet recursion).
double bump_primitive_derivative(double u, int order);

/// Smooth step: 1 on [0,1], 0 on [2, inf), C-infinity in between.
inline double smooth_step(double r) { return 1.0 - bump_primitive(r - 1.0); }

}  // namespace smeans::detail
