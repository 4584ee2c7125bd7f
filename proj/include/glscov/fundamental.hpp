#pragma once

#include <string>
#include <vector>

#include "glscov/optimize.hpp"
#include "glscov/psi.hpp"

namespace glscov {

enum class Boundary { interior, at_one, at_lower, at_b, at_infinity, at_trunc };

std::string to_string(Boundary b);

// sup_{p in [s, b)} delta^{1/p} / psi(p)
struct FundamentalResult {
    double value = 0.0;
    double log_value = -kInf;
    double argmax_p = 1.0;
    Boundary boundary = Boundary::interior;
    double delta = 0.0;
    double trunc_low = 1.0;
};

FundamentalResult fundamental(const PsiFunction& psi, double delta,
                              const OptimizerOptions& opt = {});

// Same sup restricted to p >= s (low truncation).
FundamentalResult fundamental_truncated(const PsiFunction& psi, double s, double delta,
                                        const OptimizerOptions& opt = {});

// sup over u in `u_range` of u ln(delta) - ln psi(1/u). Building block for the
// routines above and for the two-parameter functionals in cov_bounds.
FundamentalResult fundamental_on(const PsiFunction& psi, const Interval& u_range, double delta,
                                 const OptimizerOptions& opt);

// (e m)^{-1/m} |ln delta|^{-1/m}, valid for 0 < delta < 1/e.
double closed_form_power(double m, double delta);

struct FiniteClosedForm {
    double value;           // K(b, beta) delta^{1/b} |ln delta|^{-beta}
    double stated_constant;  // K(b, beta) = b^{2 beta - 1} beta^beta
    double shape;           // delta^{1/b} |ln delta|^{-beta}
    double observed_ratio;  // numeric fundamental / shape
    bool constant_mismatch; // observed ratio differs from K by more than 1e-3 relative
};

// Closed form for psi(p) = (b - p)^{-beta}, 0 < delta <= 1/e, reported next to
// the numerically observed constant. Only the shape is reliable: the stated
// constant does not match the sup (the true asymptotic constant is
// (b^2 beta / e)^beta).
FiniteClosedForm closed_form_finite(double b, double beta, double delta,
                                    const OptimizerOptions& opt = {});

// g(x) = -ln psi(1/x)
double g_transform(const PsiFunction& psi, double x);
// g'(x): closed form for power and finite_support, central differences otherwise
double g_prime(const PsiFunction& psi, double x);

struct ArgmaxSolution {
    double p = 1.0;
    bool from_root = false;  // false: fell back to the grid optimizer
    std::string warning;     // "bracket_failure" or "non_monotone" on fallback
};

// Root of g'(x) = ln(1/delta), mapped to p = 1/x. Falls back to
// fundamental().argmax_p when g' is not monotone or the root is not bracketed.
ArgmaxSolution solve_argmax(const PsiFunction& psi, double delta,
                            const OptimizerOptions& opt = {});

}  // namespace glscov
