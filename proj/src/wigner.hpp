#pragma once

#include <complex>

namespace polyion {

// Wigner 3j symbol (j1 j2 j3; m1 m2 m3), integer arguments only.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Matrix element of the rank-1 Wigner rotation component between
// symmetric-top basis states,
//   <J' k' m'| D^{1*}_{p q} |J k m>
//     = (-1)^{m'-k'} sqrt((2J+1)(2J'+1)) (J 1 J'; m p -m') (J 1 J'; k q -k').
double rot_d1_element(int Jp, int kp, int mp, int p, int q, int J, int k, int m);

// Molecule-frame spherical components of the principal-axis unit vectors
// (z -> a, x -> b, y -> c).  coeff[q+1] is the weight of D^{1*}_{p q} in
// the direction cosine Phi_{F g} for axis g in {0:a, 1:b, 2:c}.
std::complex<double> axis_spherical_coeff(int axis, int q);

}  // namespace polyion
