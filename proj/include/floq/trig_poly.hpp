#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "floq/cmatrix.hpp"
#include "floq/errors.hpp"

namespace floq {

struct Harmonic {
    int k = 1;   // harmonic number, >= 1
    cplx coef;   // complex amplitude
};

/// Finite complex combination of cos(2 pi k t / T) and sin(2 pi k t / T)
/// plus a constant; exactly T-periodic. The phase is reduced to one period
/// before evaluation so t and t + T agree to rounding.
class TrigPolynomial {
public:
    TrigPolynomial() = default;

    TrigPolynomial(cplx constant, std::vector<Harmonic> cos_terms, std::vector<Harmonic> sin_terms,
                   double period = 1.0)
        : constant_(constant),
          cos_(std::move(cos_terms)),
          sin_(std::move(sin_terms)),
          period_(period) {
        if (!(period_ > 0.0)) throw ValidationError("trig polynomial period must be positive");
        check_harmonics(cos_, "cos");
        check_harmonics(sin_, "sin");
    }

    cplx eval(double t) const {
        constexpr double two_pi = 2.0 * std::numbers::pi;
        double u = t / period_;
        u -= std::floor(u);  // periodic extension, phase in [0, 1)
        cplx v = constant_;
        for (const Harmonic& h : cos_) v += h.coef * std::cos(two_pi * h.k * u);
        for (const Harmonic& h : sin_) v += h.coef * std::sin(two_pi * h.k * u);
        return v;
    }

    cplx constant() const { return constant_; }
    const std::vector<Harmonic>& cos_terms() const { return cos_; }
    const std::vector<Harmonic>& sin_terms() const { return sin_; }
    double period() const { return period_; }

    bool is_zero() const {
        return constant_ == cplx(0.0) && cos_.empty() && sin_.empty();
    }

    /// Same harmonic content with all coefficients multiplied by factor and
    /// the period replaced; used by the period-1 rescaling of a coefficient.
    TrigPolynomial scaled(double factor, double new_period) const {
        auto scale = [factor](std::vector<Harmonic> hs) {
            for (Harmonic& h : hs) h.coef *= factor;
            return hs;
        };
        return TrigPolynomial(constant_ * factor, scale(cos_), scale(sin_), new_period);
    }

private:
    static void check_harmonics(const std::vector<Harmonic>& hs, const char* kind) {
        std::set<int> seen;
        for (const Harmonic& h : hs) {
            if (h.k < 1)
                throw ValidationError(std::string(kind) + " harmonic must be >= 1, got " +
                                      std::to_string(h.k));
            if (!seen.insert(h.k).second)
                throw ValidationError("duplicate " + std::string(kind) + " harmonic " +
                                      std::to_string(h.k));
        }
    }

    cplx constant_;
    std::vector<Harmonic> cos_;
    std::vector<Harmonic> sin_;
    double period_ = 1.0;
};

}  // namespace floq
