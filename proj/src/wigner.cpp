#include "wigner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyion {

namespace {

long double lnfact(int n) { return lgammal((long double)n + 1.0L); }

}  // namespace

double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3)
{
    if (m1 + m2 + m3 != 0) return 0.0;
    if (j3 < std::abs(j1 - j2) || j3 > j1 + j2) return 0.0;
    if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;

    // Racah formula
    const long double pre = 0.5L * (lnfact(j1 + j2 - j3) + lnfact(j1 - j2 + j3) +
                                    lnfact(-j1 + j2 + j3) - lnfact(j1 + j2 + j3 + 1) +
                                    lnfact(j1 + m1) + lnfact(j1 - m1) +
                                    lnfact(j2 + m2) + lnfact(j2 - m2) +
                                    lnfact(j3 + m3) + lnfact(j3 - m3));
    const int tmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
    const int tmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
    long double sum = 0.0L;
    for (int t = tmin; t <= tmax; ++t) {
        const long double ln = lnfact(t) + lnfact(j3 - j2 + m1 + t) + lnfact(j3 - j1 - m2 + t) +
                               lnfact(j1 + j2 - j3 - t) + lnfact(j1 - m1 - t) + lnfact(j2 + m2 - t);
        const long double term = expl(pre - ln);
        sum += (t % 2 == 0) ? term : -term;
    }
    const int phase = j1 - j2 - m3;
    return (double)((phase % 2 == 0) ? sum : -sum);
}

double rot_d1_element(int Jp, int kp, int mp, int p, int q, int J, int k, int m)
{
    if (mp != m + p || kp != k + q) return 0.0;
    const double norm = std::sqrt((2.0 * J + 1.0) * (2.0 * Jp + 1.0));
    const double sign = ((mp - kp) % 2 == 0) ? 1.0 : -1.0;
    return sign * norm * wigner3j(J, 1, Jp, m, p, -mp) * wigner3j(J, 1, Jp, k, q, -kp);
}

std::complex<double> axis_spherical_coeff(int axis, int q)
{
    const double inv_sqrt2 = 0.70710678118654752440;
    switch (axis) {
    case 0:  // a (molecular z): e_0
        return (q == 0) ? 1.0 : 0.0;
    case 1:  // b (molecular x): (e_{-1} - e_{+1})/sqrt(2)
        if (q == -1) return inv_sqrt2;
        if (q == +1) return -inv_sqrt2;
        return 0.0;
    case 2:  // c (molecular y): i(e_{-1} + e_{+1})/sqrt(2)
        if (q == -1) return {0.0, inv_sqrt2};
        if (q == +1) return {0.0, inv_sqrt2};
        return 0.0;
    default:
        throw std::invalid_argument("axis must be 0 (a), 1 (b), or 2 (c)");
    }
}

}  // namespace polyion
