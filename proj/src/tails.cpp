#include "glscov/tails.hpp"

#include <algorithm>
#include <cmath>

namespace glscov {

double v_of(const PsiFunction& psi, double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("v(p) needs p >= 1");
    const double l = psi.log_eval(p);
    if (l == kInf) return kInf;
    return p * l;
}

ConjugateResult conjugate(const PsiFunction& psi, double x, const OptimizerOptions& opt) {
    if (std::isnan(x)) throw DomainError("conjugate argument is NaN");
    const Interval& ud = psi.u_domain();
    if (ud.empty()) throw DomainError("empty effective support");

    Interval t_dom;
    t_dom.lo = std::log(1.0 / ud.hi);
    t_dom.lo_closed = ud.hi_closed;
    const double p_hi = ud.lo > 0.0 ? 1.0 / ud.lo : kInf;
    bool capped = false;
    if (p_hi > kPMax) {
        t_dom.hi = std::log(kPMax);
        t_dom.hi_closed = true;
        capped = true;
    } else {
        t_dom.hi = std::log(p_hi);
        t_dom.hi_closed = ud.lo_closed;
    }
    const Interval range = search_range(t_dom);

    const auto objective = [&](double t) {
        const double l = psi.log_eval_u(std::exp(-t));
        if (l == kInf) return -kInf;
        return std::exp(t) * (x - l);
    };
    const Max1D best = maximize_1d(objective, range, opt);
    if (best.value == -kInf) throw DomainError("empty effective support");
    ConjugateResult out;
    out.value = best.value;
    out.argmax_p = std::exp(best.x);
    out.unbounded_at_cap = capped && best.at_hi;
    return out;
}

double tail_bound(const PsiFunction& psi, double norm, double y, const OptimizerOptions& opt) {
    if (!(norm > 0.0) || !std::isfinite(norm)) throw DomainError("tail bound needs a positive norm");
    if (!(y >= M_E * norm)) throw DomainError("tail bound: y below validity threshold e * norm");
    const ConjugateResult c = conjugate(psi, std::log(y / norm), opt);
    return std::min(1.0, 2.0 * std::exp(-c.value));
}

double orlicz_N(const PsiFunction& psi, double u, const OptimizerOptions& opt) {
    const double a = std::abs(u);
    if (a >= M_E) return std::exp(conjugate(psi, std::log(a), opt).value);
    const double c = std::exp(conjugate(psi, 1.0, opt).value) / (M_E * M_E);
    return c * a * a;
}

double empirical_tail(std::span<const double> samples, double y) {
    if (samples.empty()) throw DomainError("empirical tail needs samples");
    if (!(y >= 0.0)) throw DomainError("empirical tail needs y >= 0");
    std::size_t upper = 0;
    std::size_t lower = 0;
    for (double x : samples) {
        if (x >= y) ++upper;
        if (x <= -y) ++lower;
    }
    return static_cast<double>(std::max(upper, lower)) / static_cast<double>(samples.size());
}

std::vector<double> empirical_tail_grid(std::span<const double> samples,
                                        std::span<const double> ys) {
    if (samples.empty()) throw DomainError("empirical tail needs samples");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    std::vector<double> out;
    out.reserve(ys.size());
    for (double y : ys) {
        if (!(y >= 0.0)) throw DomainError("empirical tail needs y >= 0");
        const auto upper = sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), y);
        const auto lower = std::upper_bound(sorted.begin(), sorted.end(), -y) - sorted.begin();
        out.push_back(static_cast<double>(std::max<std::ptrdiff_t>(upper, lower)) / n);
    }
    return out;
}

}  // namespace glscov
