#pragma once

// Complete elliptic integrals and Jacobi functions, modulus convention (not parameter m = k^2).

namespace srcomb::elliptic {

double K(double k);
double E(double k);

struct JacobiSnCnDn {
  double sn, cn, dn;
};
JacobiSnCnDn sncndn(double u, double k);
inline double cn(double u, double k) { return sncndn(u, k).cn; }

// Ratio <sn^2 dn^2> / <sn^2 cn^2 dn^2> in closed form.
double Y(double k);
// epsilon / r as a function of the modulus on the elliptic branch.
double Z(double k);

}  // namespace srcomb::elliptic
