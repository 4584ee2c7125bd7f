#include "glscov/fundamental.hpp"

#include <algorithm>
#include <cmath>

namespace glscov {

std::string to_string(Boundary b) {
    switch (b) {
        case Boundary::interior: return "interior";
        case Boundary::at_one: return "at_one";
        case Boundary::at_lower: return "at_lower";
        case Boundary::at_b: return "at_b";
        case Boundary::at_infinity: return "at_infinity";
        case Boundary::at_trunc: return "at_trunc";
    }
    return "unknown";
}

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive and finite");
}

}  // namespace

FundamentalResult fundamental_on(const PsiFunction& psi, const Interval& u_range, double delta,
                                 const OptimizerOptions& opt) {
    check_delta(delta);
    if (u_range.empty()) throw DomainError("empty effective support");
    const double log_delta = std::log(delta);
    const auto objective = [&](double u) { return u * log_delta - psi.log_eval_u(u); };
    const Max1D best = maximize_1d(objective, u_range, opt);
    if (best.value == -kInf) throw DomainError("empty effective support");

    FundamentalResult out;
    out.delta = delta;
    out.log_value = best.value;
    out.value = std::exp(best.value);
    out.argmax_p = best.x == 0.0 ? kInf : 1.0 / best.x;
    if (best.x == 0.0) {
        out.boundary = Boundary::at_infinity;
    } else if (best.at_hi) {
        out.boundary = best.x == 1.0 ? Boundary::at_one : Boundary::at_lower;
    } else if (best.at_lo) {
        out.boundary = best.x <= 1.0 / kPMax ? Boundary::at_infinity : Boundary::at_b;
    }
    return out;
}

FundamentalResult fundamental(const PsiFunction& psi, double delta, const OptimizerOptions& opt) {
    return fundamental_on(psi, search_range_u(psi.u_domain()), delta, opt);
}

FundamentalResult fundamental_truncated(const PsiFunction& psi, double s, double delta,
                                        const OptimizerOptions& opt) {
    if (!(s >= 1.0) || !std::isfinite(s)) throw DomainError("truncation point must satisfy s >= 1");
    const Interval dom = psi.u_domain().intersect(Interval{0.0, 1.0 / s, true, true});
    if (dom.empty()) throw DomainError("truncation point s must lie below the support bound b");
    FundamentalResult out = fundamental_on(psi, search_range_u(dom), delta, opt);
    out.trunc_low = s;
    if (s > 1.0 && out.boundary == Boundary::at_lower && out.argmax_p <= s * (1.0 + 1e-12)) {
        out.boundary = Boundary::at_trunc;
    }
    return out;
}

double closed_form_power(double m, double delta) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("closed form needs m > 0");
    if (!(delta > 0.0 && delta < std::exp(-1.0)))
        throw DomainError("closed form for the power family needs 0 < delta < 1/e");
    return std::pow(M_E * m, -1.0 / m) * std::pow(std::abs(std::log(delta)), -1.0 / m);
}

FiniteClosedForm closed_form_finite(double b, double beta, double delta,
                                    const OptimizerOptions& opt) {
    if (!(b > 1.0) || !std::isfinite(b)) throw DomainError("closed form needs 1 < b < inf");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("closed form needs beta >= 0");
    if (!(delta > 0.0 && delta <= std::exp(-1.0)))
        throw DomainError("closed form for the finite-support family needs 0 < delta <= 1/e");
    FiniteClosedForm out;
    out.stated_constant = std::pow(b, 2.0 * beta - 1.0) * (beta == 0.0 ? 1.0 : std::pow(beta, beta));
    out.shape = std::pow(delta, 1.0 / b) * std::pow(std::abs(std::log(delta)), -beta);
    out.value = out.stated_constant * out.shape;
    out.observed_ratio = fundamental(PsiFunction::finite_support(b, beta), delta, opt).value / out.shape;
    out.constant_mismatch =
        std::abs(out.observed_ratio - out.stated_constant) > 1e-3 * out.stated_constant;
    return out;
}

double g_transform(const PsiFunction& psi, double x) {
    if (!psi.u_domain().contains(x)) throw DomainError("g transform: 1/x outside the support of psi");
    return -psi.log_eval_u(x);
}

double g_prime(const PsiFunction& psi, double x) {
    const Interval& dom = psi.u_domain();
    if (!dom.contains(x)) throw DomainError("g': 1/x outside the support of psi");
    switch (psi.kind()) {
        case PsiKind::power:
            return 1.0 / (psi.m() * x);
        case PsiKind::finite_support:
            return psi.beta() / (x * (psi.b() * x - 1.0));
        default:
            break;
    }
    const double h = std::max(1e-6 * x, 1e-9);
    const bool left = dom.contains(x - h);
    const bool right = dom.contains(x + h);
    if (left && right) return (g_transform(psi, x + h) - g_transform(psi, x - h)) / (2.0 * h);
    if (right) return (g_transform(psi, x + h) - g_transform(psi, x)) / h;
    if (left) return (g_transform(psi, x) - g_transform(psi, x - h)) / h;
    throw DomainError("g': support too narrow for a finite difference");
}

ArgmaxSolution solve_argmax(const PsiFunction& psi, double delta, const OptimizerOptions& opt) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("solve_argmax needs 0 < delta < 1");
    const double target = -std::log(delta);
    const Interval range = search_range_u(psi.u_domain());

    auto fallback = [&](const char* why) {
        ArgmaxSolution s;
        s.p = fundamental(psi, delta, opt).argmax_p;
        s.from_root = false;
        s.warning = why;
        return s;
    };
    if (!(range.hi > range.lo)) return fallback("bracket_failure");

    constexpr int kScan = 257;
    std::vector<double> gp(kScan);
    for (int i = 0; i < kScan; ++i) {
        const double x = range.lo + (range.hi - range.lo) * i / (kScan - 1.0);
        gp[i] = g_prime(psi, std::clamp(x, range.lo, range.hi));
        if (!std::isfinite(gp[i])) return fallback("non_monotone");
    }
    bool nonincreasing = true;
    bool nondecreasing = true;
    for (int i = 1; i < kScan; ++i) {
        const double tol = 1e-9 * std::max(std::abs(gp[i]), std::abs(gp[i - 1]));
        if (gp[i] > gp[i - 1] + tol) nonincreasing = false;
        if (gp[i] < gp[i - 1] - tol) nondecreasing = false;
    }
    if (!nonincreasing && !nondecreasing) return fallback("non_monotone");

    double lo = range.lo;
    double hi = range.hi;
    const double h_lo = g_prime(psi, lo) - target;
    const double h_hi = g_prime(psi, hi) - target;
    if (h_lo == 0.0 || h_hi == 0.0 || (h_lo > 0.0) == (h_hi > 0.0)) {
        if (h_lo == 0.0) return {1.0 / lo, true, ""};
        if (h_hi == 0.0) return {1.0 / hi, true, ""};
        return fallback("bracket_failure");
    }
    const bool lo_positive = h_lo > 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-17 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double h = g_prime(psi, mid) - target;
        if ((h > 0.0) == lo_positive) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {2.0 / (lo + hi), true, ""};
}

}  // namespace glscov
