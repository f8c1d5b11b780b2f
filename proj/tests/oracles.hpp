#pragma once

// Test-side reference implementations and random generators. These stay
// independent of the algorithm paths they are used to check: the
// exponential oracle is a plain Taylor sum without scaling or squaring,
// powers are repeated plain products, and the two-level reference
// integrator works on raw scalars.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "floq/cmatrix.hpp"

namespace oracle {

using floq::CMatrix;
using floq::cplx;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Plain truncated Taylor series for e^A; adequate for the moderate norms
/// used in tests.
inline CMatrix naive_exp(const CMatrix& a, int terms = 160) {
    CMatrix sum = CMatrix::identity(a.rows());
    CMatrix term = sum;
    for (int k = 1; k <= terms; ++k) {
        term = (1.0 / k) * (a * term);
        sum += term;
    }
    return sum;
}

inline CMatrix naive_pow(const CMatrix& a, int n) {
    CMatrix acc = CMatrix::identity(a.rows());
    for (int i = 0; i < n; ++i) acc = acc * a;
    return acc;
}

/// Scalar divided difference (e^b - e^c)/(b - c) with the b = c limit e^b.
inline cplx divided_difference(cplx b, cplx c) {
    if (b == c) return std::exp(b);
    return (std::exp(b) - std::exp(c)) / (b - c);
}

/// Closed-form fundamental solution of x' = (alpha + beta sin(2 pi t)) x:
/// Phi(t) = exp(alpha t + beta (1 - cos(2 pi t)) / (2 pi)).
inline double scalar_osc_phi(double alpha, double beta, double t) {
    return std::exp(alpha * t + beta * (1.0 - std::cos(two_pi * t)) / two_pi);
}

/// Reference monodromy of the two-level system
///   x1' = x1,  x2' = cos(2 pi t) x1 + x2
/// by raw-scalar classical RK4 at the given resolution. Returns
/// {m11, m21, m22}.
inline std::array<cplx, 3> two_level_reference_monodromy(int steps) {
    cplx p11 = 1.0, p21 = 0.0, p22 = 1.0;
    const double h = 1.0 / steps;
    auto a21 = [](double t) { return std::cos(two_pi * t); };
    for (int s = 0; s < steps; ++s) {
        const double t = static_cast<double>(s) / steps;
        const double c0 = a21(t), cm = a21(t + 0.5 * h), c1 = a21(t + h);

        const cplx k1_11 = p11;
        const cplx k1_21 = c0 * p11 + p21;
        const cplx k1_22 = p22;

        const cplx k2_11 = p11 + 0.5 * h * k1_11;
        const cplx k2_21 = cm * (p11 + 0.5 * h * k1_11) + (p21 + 0.5 * h * k1_21);
        const cplx k2_22 = p22 + 0.5 * h * k1_22;

        const cplx k3_11 = p11 + 0.5 * h * k2_11;
        const cplx k3_21 = cm * (p11 + 0.5 * h * k2_11) + (p21 + 0.5 * h * k2_21);
        const cplx k3_22 = p22 + 0.5 * h * k2_22;

        const cplx k4_11 = p11 + h * k3_11;
        const cplx k4_21 = c1 * (p11 + h * k3_11) + (p21 + h * k3_21);
        const cplx k4_22 = p22 + h * k3_22;

        p11 += h / 6.0 * (k1_11 + 2.0 * k2_11 + 2.0 * k3_11 + k4_11);
        p21 += h / 6.0 * (k1_21 + 2.0 * k2_21 + 2.0 * k3_21 + k4_21);
        p22 += h / 6.0 * (k1_22 + 2.0 * k2_22 + 2.0 * k3_22 + k4_22);
    }
    return {p11, p21, p22};
}

// ---- random generators (fixed seeds keep every test deterministic) ----

inline cplx random_disk(std::mt19937& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    const double r = radius * std::sqrt(unit(rng));
    const double th = angle(rng);
    return cplx(r * std::cos(th), r * std::sin(th));
}

inline CMatrix random_dense(std::mt19937& rng, int n, double radius) {
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = random_disk(rng, radius);
    return m;
}

inline CMatrix random_lower(std::mt19937& rng, int n, double radius) {
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c <= r; ++c) m(r, c) = random_disk(rng, radius);
    return m;
}

/// Random invertible nested tower: diagonal moduli uniform in
/// [0.2, 5] with uniform phase, off-diagonal entries in the disk of
/// radius 2.
inline CMatrix random_invertible_lower(std::mt19937& rng, int n) {
    std::uniform_real_distribution<double> modulus(0.2, 5.0);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < r; ++c) m(r, c) = random_disk(rng, 2.0);
        const double th = angle(rng);
        m(r, r) = modulus(rng) * cplx(std::cos(th), std::sin(th));
    }
    return m;
}

}  // namespace oracle
