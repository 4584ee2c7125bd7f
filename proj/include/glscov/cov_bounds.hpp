#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glscov/fundamental.hpp"
#include "glscov/optimize.hpp"
#include "glscov/psi.hpp"

namespace glscov {

enum class Theorem {
    davydov,
    ibragimov,
    holder,
    gls_strong,
    gls_dual_pair,
    gls_uniform,
    gls_identical,
    example_power_power,
    example_finite_finite,
    example_power_finite,
    example_combined,
    generic
};

std::string to_string(Theorem t);

// A covariance bound together with how it was obtained. Infeasible bounds carry
// value = +inf and feasible = false so that callers can take minima over many
// bounds without special cases.
struct BoundReport {
    double value = kInf;
    Theorem theorem = Theorem::generic;
    std::optional<double> p;
    std::optional<double> q;
    bool feasible = false;
    std::vector<std::string> notes;
    std::map<std::string, double> diagnostics;
};

// 12 alpha^{1 - 1/p - 1/q} |xi|_p |eta|_q, requires 1/p + 1/q < 1.
BoundReport davydov_bound(double alpha, double p, double q, double norm_p, double norm_q);
// 2 beta^{1/p} |xi|_p |eta|_{p'}; p = +inf stands for the pair (inf, 1).
BoundReport ibragimov_bound(double beta, double p, double norm_p, double norm_q);
// 2 |xi|_p |eta|_{p'}
BoundReport holder_bound(double p, double norm_p, double norm_q);

// 2 ||xi|| ||eta|| / phi[zeta[psi, nu]](1 / beta)
BoundReport gls_strong_bound(const PsiFunction& psi, const PsiFunction& nu, double beta,
                             double norm_xi, double norm_eta, const OptimizerOptions& opt = {});
// nu = dual(psi): 2 [phi[psi](beta^{-1/2})]^{-2} ||xi|| ||eta||
BoundReport gls_dual_pair_bound(const PsiFunction& psi, double beta, double norm_xi,
                                double norm_eta, const OptimizerOptions& opt = {});

// sup over the triangle 1/p + 1/q < 1 of alpha^{1/p} beta^{1/q} / (psi(p) nu(q))
struct UniformPhi {
    double alpha = 0.0;
    double beta = 0.0;
    double value = 0.0;
    double log_value = -kInf;
    double p = kInf;
    double q = kInf;
};

// two-dimensional grid + zoom refinement over the triangle
UniformPhi uniform_phi(const PsiFunction& psi, const PsiFunction& nu, double alpha, double beta,
                       const OptimizerOptions& opt = {});
// nested route: sup_p alpha^{1/p} / theta(p), theta(p) = psi(p) / phi_{p'}[nu](beta)
UniformPhi uniform_phi_theta(const PsiFunction& psi, const PsiFunction& nu, double alpha,
                             double beta, const OptimizerOptions& opt = {});
// ln theta[nu]_beta(p)
double theta_log(const PsiFunction& psi, const PsiFunction& nu, double beta, double p,
                 const OptimizerOptions& opt = {});

// 12 alpha ||xi|| ||eta|| / Phi(alpha, alpha)
BoundReport gls_uniform_bound(const PsiFunction& psi, const PsiFunction& nu, double alpha,
                              double norm_xi, double norm_eta, const OptimizerOptions& opt = {});
// 12 alpha ||xi|| ||eta|| / phi[psi](alpha)^2 (both variables in the same space)
BoundReport gls_identical_bound(const PsiFunction& psi, double alpha, double norm_xi,
                                double norm_eta, const OptimizerOptions& opt = {});

// K(b, beta) = b^{2 beta - 1} beta^beta, as stated for the finite-support family
double constant_K(double b, double beta);

// Closed-form example bounds. All require 0 < alpha <= 1/e; larger alpha throws
// and the Hölder bound should be used instead.
BoundReport example_power_power(double m, double n, double alpha, double norm_xi,
                                double norm_eta);
BoundReport example_finite_finite(double b1, double beta1, double b2, double beta2, double alpha,
                                  double norm_xi, double norm_eta);
BoundReport example_power_finite(double m, double b, double beta, double alpha, double norm_xi,
                                 double norm_eta);
// xi in G psi, eta in L_{q0} with q0' < b:
// 12 alpha^{1 - 1/q0} ||xi|| |eta|_{q0} / phi_{q0'}[psi](alpha)
BoundReport example_combined(const PsiFunction& psi, double q0, double alpha, double norm_xi,
                             double norm_eta_q0, const OptimizerOptions& opt = {});

struct FactorizationCheck {
    double alpha = 0.0;
    double beta = 0.0;
    double lhs = 0.0;  // Phi over the triangle
    double rhs = 0.0;  // phi[psi](alpha) * phi[nu](beta)
    bool holds = false;
    bool one_sided_ok = false;  // lhs <= rhs
    std::string support_case;   // infinite_infinite | finite_finite | mixed
    std::string reason;
    double p_alpha = 0.0;
    double p_beta = 0.0;
    std::optional<double> alpha0;
    std::optional<double> beta0;
};

FactorizationCheck factorization_check(const PsiFunction& psi, const PsiFunction& nu,
                                       double alpha, double beta,
                                       const OptimizerOptions& opt = {});

enum class DomainKind { T, R, conjugate_line, rectangle };

struct BoundDomain {
    DomainKind kind = DomainKind::T;
    double p_lo = 1.0;
    double p_hi = kInf;
    double q_lo = 1.0;
    double q_hi = kInf;
};

// (p, q) -> h(p, q) with |Cov| <= h(p, q) |xi|_p |eta|_q on the domain
using BoundKernel = std::function<double(double, double)>;

BoundKernel davydov_kernel(double alpha);
BoundKernel ibragimov_kernel(double beta);
BoundKernel holder_kernel();

// inf over the domain of h(p, q) psi(p) nu(q), times the norms
BoundReport generic_bound(const BoundKernel& h, const PsiFunction& psi, const PsiFunction& nu,
                          const BoundDomain& domain, double norm_xi, double norm_eta,
                          const OptimizerOptions& opt = {});

}  // namespace glscov
