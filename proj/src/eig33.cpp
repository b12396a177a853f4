#include "ssns/eig33.hpp"

#include <algorithm>
#include <cmath>

namespace ssns {
namespace {

std::array<double, 3> jacobi_eigenvalues(const Sym3& a) {
    // Full 3x3 working copy.
    double m[3][3] = {{a[0], a[3], a[4]}, {a[3], a[1], a[5]}, {a[4], a[5], a[2]}};
    for (int sweep = 0; sweep < 10; ++sweep) {
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                const double apq = m[p][q];
                if (apq == 0.0) continue;
                const double theta = (m[q][q] - m[p][p]) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double app = m[p][p], aqq = m[q][q];
                m[p][p] = c * c * app - 2.0 * s * c * apq + s * s * aqq;
                m[q][q] = s * s * app + 2.0 * s * c * apq + c * c * aqq;
                m[p][q] = m[q][p] = 0.0;
                const int r = 3 - p - q;
                const double arp = m[r][p], arq = m[r][q];
                m[r][p] = m[p][r] = c * arp - s * arq;
                m[r][q] = m[q][r] = s * arp + c * arq;
            }
        }
    }
    std::array<double, 3> w = {m[0][0], m[1][1], m[2][2]};
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace

double sym3_det(const Sym3& a) {
    return a[0] * (a[1] * a[2] - a[5] * a[5]) -
           a[3] * (a[3] * a[2] - a[5] * a[4]) +
           a[4] * (a[3] * a[5] - a[1] * a[4]);
}

double sym3_frob_sq(const Sym3& a) {
    return a[0] * a[0] + a[1] * a[1] + a[2] * a[2] +
           2.0 * (a[3] * a[3] + a[4] * a[4] + a[5] * a[5]);
}

std::array<double, 3> sym3_eigenvalues(const Sym3& a) {
    const double q = (a[0] + a[1] + a[2]) / 3.0;
    // Deviatoric part B = A - q I.
    const Sym3 b = {a[0] - q, a[1] - q, a[2] - q, a[3], a[4], a[5]};
    const double p2 = sym3_frob_sq(b) / 6.0;
    const double scale = sym3_frob_sq(a) + 1.0e-300;
    if (p2 <= 1.0e-28 * scale)
        return {q, q, q};  // numerically spherical

    const double p = std::sqrt(p2);
    const double r = sym3_det({b[0] / p, b[1] / p, b[2] / p,
                               b[3] / p, b[4] / p, b[5] / p}) / 2.0;
    // 1 - r^2 is the normalized discriminant of the characteristic cubic;
    // it vanishes exactly at repeated eigenvalues.
    if (1.0 - r * r < 1.0e-13)
        return jacobi_eigenvalues(a);

    const double phi = std::acos(std::clamp(r, -1.0, 1.0)) / 3.0;
    const double e3 = q + 2.0 * p * std::cos(phi);
    const double e1 = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
    const double e2 = 3.0 * q - e1 - e3;
    std::array<double, 3> w = {e1, e2, e3};
    std::sort(w.begin(), w.end());
    return w;
}

}  // namespace ssns
