#include "glscov/cov_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace glscov {

std::string to_string(Theorem t) {
    switch (t) {
        case Theorem::davydov: return "davydov";
        case Theorem::ibragimov: return "ibragimov";
        case Theorem::holder: return "holder";
        case Theorem::gls_strong: return "gls_strong";
        case Theorem::gls_dual_pair: return "gls_dual_pair";
        case Theorem::gls_uniform: return "gls_uniform";
        case Theorem::gls_identical: return "gls_identical";
        case Theorem::example_power_power: return "example_power_power";
        case Theorem::example_finite_finite: return "example_finite_finite";
        case Theorem::example_power_finite: return "example_power_finite";
        case Theorem::example_combined: return "example_combined";
        case Theorem::generic: return "generic";
    }
    return "unknown";
}

namespace {

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError(std::string(what) + " must lie in [0, 1]");
}

void check_norms(double a, double b) {
    if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw DomainError("norms must be finite and non-negative");
}

void check_exponent(double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("exponents must satisfy p >= 1");
}

double inv(double p) { return p == kInf ? 0.0 : 1.0 / p; }
double from_u(double u) { return u == 0.0 ? kInf : 1.0 / u; }

BoundReport feasible_report(Theorem t, double value) {
    BoundReport r;
    r.theorem = t;
    r.feasible = true;
    r.value = value;
    return r;
}

BoundReport infeasible_report(Theorem t, std::string why) {
    BoundReport r;
    r.theorem = t;
    r.feasible = false;
    r.value = kInf;
    r.notes.push_back(std::move(why));
    return r;
}

// c * nx * ny / exp(log_den), with 0 * anything = 0
double scaled(double c, double nx, double ny, double log_den) {
    if (c == 0.0 || nx == 0.0 || ny == 0.0) return 0.0;
    return std::exp(std::log(c) + std::log(nx) + std::log(ny) - log_den);
}

void check_example_alpha(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("example bounds need alpha > 0");
    if (alpha > std::exp(-1.0))
        throw DomainError("example bounds need alpha <= 1/e; use the Hölder bound for larger alpha");
}

}  // namespace

BoundReport davydov_bound(double alpha, double p, double q, double norm_p, double norm_q) {
    check_unit(alpha, "alpha");
    check_exponent(p);
    check_exponent(q);
    check_norms(norm_p, norm_q);
    const double e = 1.0 - inv(p) - inv(q);
    if (!(e > 0.0)) return infeasible_report(Theorem::davydov, "requires 1/p + 1/q < 1");
    BoundReport r = feasible_report(Theorem::davydov, 12.0 * std::pow(alpha, e) * norm_p * norm_q);
    r.p = p;
    r.q = q;
    return r;
}

BoundReport ibragimov_bound(double beta, double p, double norm_p, double norm_q) {
    check_unit(beta, "beta");
    if (std::isnan(p) || p <= 1.0) throw DomainError("ibragimov bound needs p > 1");
    check_norms(norm_p, norm_q);
    const double factor = beta == 0.0 ? 0.0 : std::pow(beta, inv(p));
    BoundReport r = feasible_report(Theorem::ibragimov, 2.0 * factor * norm_p * norm_q);
    r.p = p;
    r.q = conjugate_exponent(p);
    return r;
}

BoundReport holder_bound(double p, double norm_p, double norm_q) {
    check_exponent(p);
    check_norms(norm_p, norm_q);
    BoundReport r = feasible_report(Theorem::holder, 2.0 * norm_p * norm_q);
    r.p = p;
    r.q = conjugate_exponent(p);
    return r;
}

BoundReport gls_strong_bound(const PsiFunction& psi, const PsiFunction& nu, double beta,
                             double norm_xi, double norm_eta, const OptimizerOptions& opt) {
    check_unit(beta, "beta");
    check_norms(norm_xi, norm_eta);
    if (beta == 0.0) {
        BoundReport r = feasible_report(Theorem::gls_strong, 0.0);
        r.notes.push_back("zero_mixing");
        return r;
    }
    const PsiFunction zeta = product_zeta(psi, nu);
    if (zeta.u_domain().empty()) return infeasible_report(Theorem::gls_strong, "empty_effective_support");
    FundamentalResult f;
    try {
        f = fundamental(zeta, 1.0 / beta, opt);
    } catch (const DomainError&) {
        return infeasible_report(Theorem::gls_strong, "empty_effective_support");
    }
    BoundReport r = feasible_report(Theorem::gls_strong, scaled(2.0, norm_xi, norm_eta, f.log_value));
    r.p = f.argmax_p;
    r.q = conjugate_exponent(f.argmax_p);
    r.diagnostics["log_phi_zeta"] = f.log_value;
    return r;
}

BoundReport gls_dual_pair_bound(const PsiFunction& psi, double beta, double norm_xi,
                                double norm_eta, const OptimizerOptions& opt) {
    check_unit(beta, "beta");
    check_norms(norm_xi, norm_eta);
    if (beta == 0.0) {
        BoundReport r = feasible_report(Theorem::gls_dual_pair, 0.0);
        r.notes.push_back("zero_mixing");
        return r;
    }
    dual_psi(psi);  // rejects finite support
    const FundamentalResult f = fundamental(psi, 1.0 / std::sqrt(beta), opt);
    BoundReport r =
        feasible_report(Theorem::gls_dual_pair, scaled(2.0, norm_xi, norm_eta, 2.0 * f.log_value));
    r.p = f.argmax_p;
    r.q = conjugate_exponent(f.argmax_p);
    return r;
}

UniformPhi uniform_phi(const PsiFunction& psi, const PsiFunction& nu, double alpha, double beta,
                       const OptimizerOptions& opt) {
    check_unit(alpha, "alpha");
    check_unit(beta, "beta");
    UniformPhi out;
    out.alpha = alpha;
    out.beta = beta;
    if (psi.u_domain().empty() || nu.u_domain().empty()) return out;
    const double la = std::log(alpha);
    const double lb = std::log(beta);
    const auto f = [&](double u, double w) {
        return u * la + w * lb - psi.log_eval_u(u) - nu.log_eval_u(w);
    };
    const Max2D m = maximize_2d(f, search_range_u(psi.u_domain()), search_range_u(nu.u_domain()),
                                Region::triangle, opt);
    if (!(m.value > -kInf)) return out;
    out.log_value = m.value;
    out.value = std::exp(m.value);
    out.p = from_u(m.u);
    out.q = from_u(m.w);
    return out;
}

UniformPhi uniform_phi_theta(const PsiFunction& psi, const PsiFunction& nu, double alpha,
                             double beta, const OptimizerOptions& opt) {
    check_unit(alpha, "alpha");
    check_unit(beta, "beta");
    UniformPhi out;
    out.alpha = alpha;
    out.beta = beta;
    if (psi.u_domain().empty() || nu.u_domain().empty()) return out;
    const double la = std::log(alpha);
    const double lb = std::log(beta);
    const double margin = opt.triangle_margin;

    OptimizerOptions inner_opt = opt;
    inner_opt.grid_1d = std::max(64, opt.grid_1d / 4);
    const auto nu_obj = [&](double w) { return w * lb - nu.log_eval_u(w); };
    // ln of the truncated fundamental of nu, restricted to w <= t
    const auto inner = [&](double t, double* w_at) {
        const Interval d = nu.u_domain().intersect(Interval{0.0, t, true, true});
        if (d.empty()) return -kInf;
        const Interval r = search_range_u(d);
        if (r.empty()) return -kInf;
        const Max1D m = maximize_1d(nu_obj, r, inner_opt);
        if (w_at) *w_at = m.x;
        return m.value;
    };
    const auto outer = [&](double u) {
        const double lp = psi.log_eval_u(u);
        if (lp == kInf) return -kInf;
        const double s = inner(1.0 - margin - u, nullptr);
        if (s == -kInf) return -kInf;
        return u * la - lp + s;
    };
    const Max1D m = maximize_1d(outer, search_range_u(psi.u_domain()), opt);
    if (!(m.value > -kInf)) return out;
    double w = 0.0;
    inner(1.0 - margin - m.x, &w);
    out.log_value = m.value;
    out.value = std::exp(m.value);
    out.p = from_u(m.x);
    out.q = from_u(w);
    return out;
}

double theta_log(const PsiFunction& psi, const PsiFunction& nu, double beta, double p,
                 const OptimizerOptions& opt) {
    check_exponent(p);
    const double lp = psi.log_eval(p);
    if (lp == kInf) return kInf;
    const double s = conjugate_exponent(p);
    if (s == kInf) return kInf;
    try {
        return lp - fundamental_truncated(nu, s, beta, opt).log_value;
    } catch (const DomainError&) {
        return kInf;
    }
}

BoundReport gls_uniform_bound(const PsiFunction& psi, const PsiFunction& nu, double alpha,
                              double norm_xi, double norm_eta, const OptimizerOptions& opt) {
    check_unit(alpha, "alpha");
    check_norms(norm_xi, norm_eta);
    if (alpha == 0.0) {
        BoundReport r = feasible_report(Theorem::gls_uniform, 0.0);
        r.notes.push_back("zero_mixing");
        return r;
    }
    const UniformPhi grid = uniform_phi(psi, nu, alpha, alpha, opt);
    double log_phi = grid.log_value;
    double p = grid.p;
    double q = grid.q;
    std::map<std::string, double> diag;
    diag["log_phi_grid"] = grid.log_value;
    if (opt.cross_check) {
        const UniformPhi theta = uniform_phi_theta(psi, nu, alpha, alpha, opt);
        diag["log_phi_theta"] = theta.log_value;
        if (grid.log_value > -kInf && theta.log_value > -kInf) {
            const double rel = std::abs(std::expm1(theta.log_value - grid.log_value));
            diag["route_rel_diff"] = rel;
        }
        if (theta.log_value > log_phi) {
            log_phi = theta.log_value;
            p = theta.p;
            q = theta.q;
        }
    }
    if (!(log_phi > -kInf)) {
        BoundReport r = infeasible_report(Theorem::gls_uniform, "empty_triangle");
        r.diagnostics = diag;
        return r;
    }
    BoundReport r = feasible_report(Theorem::gls_uniform, scaled(12.0 * alpha, norm_xi, norm_eta, log_phi));
    r.p = p;
    r.q = q;
    r.diagnostics = diag;
    if (diag.count("route_rel_diff") && diag["route_rel_diff"] > 1e-6)
        r.notes.push_back("route_disagreement");
    return r;
}

BoundReport gls_identical_bound(const PsiFunction& psi, double alpha, double norm_xi,
                                double norm_eta, const OptimizerOptions& opt) {
    check_unit(alpha, "alpha");
    check_norms(norm_xi, norm_eta);
    if (alpha == 0.0) {
        BoundReport r = feasible_report(Theorem::gls_identical, 0.0);
        r.notes.push_back("zero_mixing");
        return r;
    }
    const FundamentalResult f = fundamental(psi, alpha, opt);
    BoundReport r =
        feasible_report(Theorem::gls_identical, scaled(12.0 * alpha, norm_xi, norm_eta, 2.0 * f.log_value));
    r.p = f.argmax_p;
    r.q = f.argmax_p;
    r.diagnostics["log_phi"] = f.log_value;
    if (!(f.argmax_p > 2.0)) r.notes.push_back("optimum_outside_T");
    return r;
}

double constant_K(double b, double beta) {
    return std::pow(b, 2.0 * beta - 1.0) * (beta == 0.0 ? 1.0 : std::pow(beta, beta));
}

BoundReport example_power_power(double m, double n, double alpha, double norm_xi,
                                double norm_eta) {
    if (!(m > 0.0) || !(n > 0.0)) throw DomainError("power family needs m, n > 0");
    check_example_alpha(alpha);
    check_norms(norm_xi, norm_eta);
    const double L = std::abs(std::log(alpha));
    const double c = 12.0 * std::exp(1.0 / m + 1.0 / n) * std::pow(m, 1.0 / m) * std::pow(n, 1.0 / n) *
                     alpha * std::pow(L, 1.0 / m + 1.0 / n);
    BoundReport r = feasible_report(Theorem::example_power_power, c * norm_xi * norm_eta);
    r.p = m * L;
    r.q = n * L;
    if (!(1.0 / (m * L) + 1.0 / (n * L) < 1.0)) r.notes.push_back("factorization_not_guaranteed");
    return r;
}

BoundReport example_finite_finite(double b1, double beta1, double b2, double beta2, double alpha,
                                  double norm_xi, double norm_eta) {
    if (!(b1 > 1.0) || !(b2 > 1.0) || !(beta1 >= 0.0) || !(beta2 >= 0.0))
        throw DomainError("finite-support family needs b > 1, beta >= 0");
    check_example_alpha(alpha);
    check_norms(norm_xi, norm_eta);
    if (!(1.0 / b1 + 1.0 / b2 < 1.0))
        return infeasible_report(Theorem::example_finite_finite, "requires 1/b1 + 1/b2 < 1");
    const double L = std::abs(std::log(alpha));
    const double c = 12.0 * constant_K(b1, beta1) * constant_K(b2, beta2) *
                     std::pow(alpha, 1.0 - 1.0 / b1 - 1.0 / b2) * std::pow(L, beta1 + beta2);
    BoundReport r = feasible_report(Theorem::example_finite_finite, c * norm_xi * norm_eta);
    r.notes.push_back("constant_K_unverified");
    return r;
}

BoundReport example_power_finite(double m, double b, double beta, double alpha, double norm_xi,
                                 double norm_eta) {
    if (!(m > 0.0) || !(b > 1.0) || !(beta >= 0.0))
        throw DomainError("needs m > 0, b > 1, beta >= 0");
    check_example_alpha(alpha);
    check_norms(norm_xi, norm_eta);
    const double L = std::abs(std::log(alpha));
    const double c = 12.0 * std::pow(M_E * m, 1.0 / m) * constant_K(b, beta) *
                     std::pow(alpha, 1.0 - 1.0 / b) * std::pow(L, beta + 1.0 / m);
    BoundReport r = feasible_report(Theorem::example_power_finite, c * norm_xi * norm_eta);
    r.notes.push_back("constant_K_unverified");
    return r;
}

BoundReport example_combined(const PsiFunction& psi, double q0, double alpha, double norm_xi,
                             double norm_eta_q0, const OptimizerOptions& opt) {
    if (!(q0 > 1.0)) throw DomainError("combined example needs q0 > 1");
    check_example_alpha(alpha);
    check_norms(norm_xi, norm_eta_q0);
    const double s = conjugate_exponent(q0);
    if (!(s < psi.support_bound()))
        return infeasible_report(Theorem::example_combined, "requires q0' < b");
    FundamentalResult f;
    try {
        f = fundamental_truncated(psi, s, alpha, opt);
    } catch (const DomainError&) {
        return infeasible_report(Theorem::example_combined, "requires q0' < b");
    }
    const double c = 12.0 * std::pow(alpha, 1.0 - 1.0 / q0);
    BoundReport r = feasible_report(Theorem::example_combined, scaled(c, norm_xi, norm_eta_q0, f.log_value));
    r.p = f.argmax_p;
    r.q = q0;
    return r;
}

namespace {

std::optional<double> threshold(const PsiFunction& psi, double x) {
    try {
        const double g = g_prime(psi, x);
        if (!std::isfinite(g)) return std::nullopt;
        return std::exp(-g);
    } catch (const DomainError&) {
        return std::nullopt;
    }
}

}  // namespace

FactorizationCheck factorization_check(const PsiFunction& psi, const PsiFunction& nu,
                                       double alpha, double beta, const OptimizerOptions& opt) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0))
        throw DomainError("factorization check needs alpha, beta in (0, 1)");
    FactorizationCheck out;
    out.alpha = alpha;
    out.beta = beta;

    const UniformPhi lhs = uniform_phi(psi, nu, alpha, beta, opt);
    const FundamentalResult fa = fundamental(psi, alpha, opt);
    const FundamentalResult fb = fundamental(nu, beta, opt);
    out.lhs = lhs.value;
    out.rhs = std::exp(fa.log_value + fb.log_value);
    out.p_alpha = fa.argmax_p;
    out.p_beta = fb.argmax_p;
    out.one_sided_ok = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-300;
    out.holds = std::abs(out.lhs - out.rhs) <= 1e-6 * out.rhs;

    const bool fin_psi = psi.has_finite_support();
    const bool fin_nu = nu.has_finite_support();
    if (!fin_psi && !fin_nu) {
        out.support_case = "infinite_infinite";
        out.alpha0 = threshold(psi, 1.0 / M_E);
        out.beta0 = threshold(nu, 1.0 / M_E);
    } else if (fin_psi && fin_nu) {
        out.support_case = "finite_finite";
        const double b1 = psi.support_bound();
        const double b2 = nu.support_bound();
        out.alpha0 = threshold(psi, (b1 + 1.0) / (3.0 * b1));
        out.beta0 = threshold(nu, (b2 + 1.0) / (3.0 * b2));
        if (!(1.0 / b1 + 1.0 / b2 < 1.0)) {
            out.holds = false;
            out.reason = "supports too small";
        }
    } else {
        out.support_case = "mixed";
        const double b = fin_psi ? psi.support_bound() : nu.support_bound();
        const PsiFunction& inf_side = fin_psi ? nu : psi;
        const PsiFunction& fin_side = fin_psi ? psi : nu;
        const auto t_inf = threshold(inf_side, (b - 1.0) / (3.0 * b));
        const auto t_fin = threshold(fin_side, (b + 1.0) / (2.0 * b));
        out.alpha0 = fin_psi ? t_fin : t_inf;
        out.beta0 = fin_psi ? t_inf : t_fin;
    }
    if (!out.holds && out.reason.empty()) {
        out.reason = 1.0 / fa.argmax_p + 1.0 / fb.argmax_p < 1.0 ? "optimizer gap"
                                                                  : "unconstrained optimum outside T";
    }
    return out;
}

BoundKernel davydov_kernel(double alpha) {
    check_unit(alpha, "alpha");
    return [alpha](double p, double q) { return 12.0 * std::pow(alpha, 1.0 - inv(p) - inv(q)); };
}

BoundKernel ibragimov_kernel(double beta) {
    check_unit(beta, "beta");
    return [beta](double p, double) { return 2.0 * std::pow(beta, inv(p)); };
}

BoundKernel holder_kernel() {
    return [](double, double) { return 2.0; };
}

BoundReport generic_bound(const BoundKernel& h, const PsiFunction& psi, const PsiFunction& nu,
                          const BoundDomain& domain, double norm_xi, double norm_eta,
                          const OptimizerOptions& opt) {
    check_norms(norm_xi, norm_eta);
    // maximize -(ln h + ln psi + ln nu); h <= 0 is a zero bound
    const auto log_h = [&](double u, double w) {
        const double v = h(from_u(u), from_u(w));
        if (std::isnan(v) || v == kInf) return kInf;
        if (v <= 0.0) return -1e300;
        return std::log(v);
    };
    const auto f = [&](double u, double w) {
        const double a = psi.log_eval_u(u);
        const double b = nu.log_eval_u(w);
        if (a == kInf || b == kInf) return -kInf;
        const double lh = log_h(u, w);
        if (lh == kInf) return -kInf;
        return -(lh + a + b);
    };

    double best = -kInf;
    double bu = 0.0;
    double bw = 0.0;
    if (domain.kind == DomainKind::conjugate_line) {
        const Interval d = psi.u_domain().intersect(nu.u_domain().reflect());
        if (d.empty()) return infeasible_report(Theorem::generic, "empty_domain");
        const Max1D m = maximize_1d([&](double u) { return f(u, 1.0 - u); }, search_range_u(d), opt);
        best = m.value;
        bu = m.x;
        bw = 1.0 - m.x;
    } else {
        Interval du = psi.u_domain();
        Interval dw = nu.u_domain();
        if (domain.kind == DomainKind::rectangle) {
            if (!(domain.p_lo >= 1.0 && domain.q_lo >= 1.0 && domain.p_hi >= domain.p_lo &&
                  domain.q_hi >= domain.q_lo))
                throw DomainError("rectangle needs 1 <= lo <= hi");
            du = du.intersect(Interval{inv(domain.p_hi), 1.0 / domain.p_lo, true, true});
            dw = dw.intersect(Interval{inv(domain.q_hi), 1.0 / domain.q_lo, true, true});
        }
        if (du.empty() || dw.empty()) return infeasible_report(Theorem::generic, "empty_domain");
        const Region region = domain.kind == DomainKind::T ? Region::triangle : Region::rectangle;
        const Max2D m = maximize_2d(f, search_range_u(du), search_range_u(dw), region, opt);
        best = m.value;
        bu = m.u;
        bw = m.w;
    }
    if (!(best > -kInf)) return infeasible_report(Theorem::generic, "empty_domain");
    BoundReport r = feasible_report(Theorem::generic, scaled(1.0, norm_xi, norm_eta, best));
    r.p = from_u(bu);
    r.q = from_u(bw);
    return r;
}

}  // namespace glscov
