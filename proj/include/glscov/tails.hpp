#pragma once

#include <span>
#include <vector>

#include "glscov/optimize.hpp"
#include "glscov/psi.hpp"

namespace glscov {

// v(p) = p ln psi(p); +inf outside the support
double v_of(const PsiFunction& psi, double p);

struct ConjugateResult {
    double value = -kInf;
    double argmax_p = 1.0;
    bool unbounded_at_cap = false;  // still increasing at p = kPMax
};

// v*(x) = sup_{p in [1, min(b, kPMax)]} (p x - v(p)), searched in ln p.
ConjugateResult conjugate(const PsiFunction& psi, double x, const OptimizerOptions& opt = {});

// P(|zeta| > y) <= 2 exp(-v*(ln(y / norm))), valid for y >= e * norm.
// Returns the bound clipped to 1.
double tail_bound(const PsiFunction& psi, double norm, double y,
                  const OptimizerOptions& opt = {});

// exp(v*(ln|u|)) for |u| >= e; C u^2 below, with C making N continuous at e.
double orlicz_N(const PsiFunction& psi, double u, const OptimizerOptions& opt = {});

// max(P(x >= y), P(x <= -y)) under the empirical law of the samples.
double empirical_tail(std::span<const double> samples, double y);

// empirical_tail at many thresholds, sorting once.
std::vector<double> empirical_tail_grid(std::span<const double> samples,
                                        std::span<const double> ys);

}  // namespace glscov
