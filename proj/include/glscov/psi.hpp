#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "glscov/parallel.hpp"

namespace glscov {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Floor applied to tabulated generating functions; log-space arithmetic keeps
// everything above it representable.
inline constexpr double kPsiFloor = 1e-300;

// Numeric stand-in for p -> infinity in sup scans.
inline constexpr double kPMax = 1e6;

// Closed interval endpoints that differ by less than this (in u = 1/p) are
// treated as the same point.
inline constexpr double kSnap = 1e-13;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// An interval on the real line with independently open/closed ends.
struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool lo_closed = true;
    bool hi_closed = true;

    bool empty() const;
    bool contains(double x) const;
    Interval intersect(const Interval& other) const;
    // image under x -> 1 - x; maps the u-domain of nu(p) to that of nu(p/(p-1))
    Interval reflect() const;
};

// p / (p - 1), with 1 <-> infinity.
double conjugate_exponent(double p);

enum class PsiKind { power, finite_support, extremal, product, dual, tabulated, empirical };

std::string to_string(PsiKind kind);

struct Knot {
    double p;
    double value;
};

// A generating function psi : [1, b) -> (0, inf], extended by +inf beyond its
// support. Immutable; copies share the underlying representation.
//
// Internally everything is evaluated in the coordinate u = 1/p in [0, 1], where
// the conjugate exponent map becomes u -> 1 - u and p = inf is the point u = 0.
class PsiFunction {
public:
    static PsiFunction power(double m);
    static PsiFunction finite_support(double b, double beta);
    static PsiFunction extremal(double r);
    // Knots (p_k, psi_k) with strictly increasing p_k >= 1, interpolated linearly
    // in (1/p, ln psi). Constant below the first knot, +inf beyond the last.
    static PsiFunction tabulated(std::vector<Knot> knots);
    static PsiFunction empirical(std::vector<Knot> knots, std::uint64_t sample_count,
                                 std::uint64_t seed);

    PsiKind kind() const;

    // psi(p); p = +inf is allowed and means the limit p -> inf.
    double operator()(double p) const;
    double log_eval(double p) const;
    // ln psi(1/u) for u in [0, 1]; +inf outside the support.
    double log_eval_u(double u) const;

    // Set of u = 1/p on which psi is finite.
    const Interval& u_domain() const;
    // b = sup { p : psi(p) < inf }.
    double support_bound() const;
    bool has_finite_support() const { return support_bound() < kInf; }

    // parameters; meaningful only for the matching kind
    double m() const;
    double b() const;
    double beta() const;
    double r() const;
    const std::vector<Knot>& knots() const;
    std::uint64_t sample_count() const;
    std::uint64_t seed() const;
    const PsiFunction& left() const;
    const PsiFunction& right() const;
    const PsiFunction& inner() const;

    struct Node;

private:
    explicit PsiFunction(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;

    friend PsiFunction dual_psi(const PsiFunction& psi);
    friend PsiFunction product_zeta(const PsiFunction& psi, const PsiFunction& nu);
};

// psi(p) with the p >= 1 precondition enforced.
double eval_psi(const PsiFunction& psi, double p);

// p -> psi(p / (p - 1)). Only defined for psi with unbounded support: for finite
// b the dual space collapses to L_inf, which has no generating function here.
PsiFunction dual_psi(const PsiFunction& psi);

// p -> psi(p) * nu(p / (p - 1)).
PsiFunction product_zeta(const PsiFunction& psi, const PsiFunction& nu);

struct MomentTable {
    enum class Source { analytic, sample };

    std::vector<Knot> entries;  // (p, |zeta|_p)
    Source source = Source::analytic;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    // Throws DomainError on unsorted p, p < 1, negative values or a decrease
    // in p (moment norms on a probability space are nondecreasing).
    void validate() const;

    // Empirical |x|_p = (mean |x_i|^p)^{1/p} for each p in the grid. Sums are
    // rescaled by max |x_i| and compensated, so large p does not overflow.
    static MomentTable from_samples(std::span<const double> samples,
                                    std::span<const double> p_grid, std::uint64_t seed = 0,
                                    Exec exec = Exec::parallel);
};

// Natural generating function p -> |zeta|_p built from a moment table.
PsiFunction natural_from_moments(const MomentTable& table);

struct GlsNorm {
    double value;
    double argmax_p;
};

// max over the table grid of |zeta|_p / psi(p): a lower estimate of the norm.
GlsNorm gls_norm(const MomentTable& table, const PsiFunction& psi);

}  // namespace glscov
