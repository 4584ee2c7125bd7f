#include "glscov/psi.hpp"

#include <algorithm>
#include <cmath>

namespace glscov {

// ---------------------------------------------------------------------------
// Interval

bool Interval::empty() const {
    if (lo < hi) return false;
    if (lo == hi) return !(lo_closed && hi_closed);
    return true;
}

bool Interval::contains(double x) const {
    const bool above = x > lo || (lo_closed && x == lo);
    const bool below = x < hi || (hi_closed && x == hi);
    return above && below;
}

Interval Interval::intersect(const Interval& other) const {
    Interval out;
    if (lo > other.lo) {
        out.lo = lo;
        out.lo_closed = lo_closed;
    } else if (other.lo > lo) {
        out.lo = other.lo;
        out.lo_closed = other.lo_closed;
    } else {
        out.lo = lo;
        out.lo_closed = lo_closed && other.lo_closed;
    }
    if (hi < other.hi) {
        out.hi = hi;
        out.hi_closed = hi_closed;
    } else if (other.hi < hi) {
        out.hi = other.hi;
        out.hi_closed = other.hi_closed;
    } else {
        out.hi = hi;
        out.hi_closed = hi_closed && other.hi_closed;
    }
    // Two closed ends that cross by rounding noise describe a single point.
    if (out.lo > out.hi && out.lo - out.hi <= kSnap && out.lo_closed && out.hi_closed) {
        out.hi = out.lo;
    }
    return out;
}

Interval Interval::reflect() const {
    return Interval{1.0 - hi, 1.0 - lo, hi_closed, lo_closed};
}

double conjugate_exponent(double p) {
    if (!(p >= 1.0)) throw DomainError("conjugate exponent requires p >= 1");
    if (p == 1.0) return kInf;
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

std::string to_string(PsiKind kind) {
    switch (kind) {
        case PsiKind::power: return "power";
        case PsiKind::finite_support: return "finite_support";
        case PsiKind::extremal: return "extremal";
        case PsiKind::product: return "product";
        case PsiKind::dual: return "dual";
        case PsiKind::tabulated: return "tabulated";
        case PsiKind::empirical: return "empirical";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------
// PsiFunction

struct PsiFunction::Node {
    PsiKind kind;
    double a = 0.0;  // m, b or r
    double c = 0.0;  // beta
    Interval domain;

    std::vector<Knot> knots;
    std::vector<double> u_knots;  // ascending
    std::vector<double> log_knots;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;

    std::vector<PsiFunction> children;
};

namespace {

const Interval kUnit{0.0, 1.0, true, true};

double u_of(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

double tabulated_log_u(const PsiFunction::Node& n, double u) {
    const auto& us = n.u_knots;
    const auto& ls = n.log_knots;
    if (u < us.front() - kSnap || u > 1.0 + kSnap) return kInf;
    if (u <= us.front()) return ls.front();
    if (u >= us.back()) return ls.back();
    const auto it = std::upper_bound(us.begin(), us.end(), u);
    const std::size_t j = static_cast<std::size_t>(it - us.begin());
    const std::size_t i = j - 1;
    const double t = (u - us[i]) / (us[j] - us[i]);
    return ls[i] + t * (ls[j] - ls[i]);
}

std::shared_ptr<PsiFunction::Node> make_tabulated(std::vector<Knot> knots, PsiKind kind) {
    if (knots.empty()) throw DomainError("tabulated psi needs at least one knot");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const auto& k = knots[i];
        if (!(k.p >= 1.0) || !std::isfinite(k.p))
            throw DomainError("tabulated psi knots must have finite p >= 1");
        if (i > 0 && !(k.p > knots[i - 1].p))
            throw DomainError("tabulated psi knots must have strictly increasing p");
        if (!(k.value > 0.0) || !std::isfinite(k.value))
            throw DomainError("tabulated psi values must be positive and finite");
    }
    auto node = std::make_shared<PsiFunction::Node>();
    node->kind = kind;
    node->knots = std::move(knots);
    for (auto it = node->knots.rbegin(); it != node->knots.rend(); ++it) {
        node->u_knots.push_back(1.0 / it->p);
        node->log_knots.push_back(std::log(std::max(it->value, kPsiFloor)));
    }
    node->domain = Interval{node->u_knots.front(), 1.0, true, true};
    return node;
}

}  // namespace

PsiFunction PsiFunction::power(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("power psi requires m > 0");
    auto node = std::make_shared<Node>();
    node->kind = PsiKind::power;
    node->a = m;
    node->domain = Interval{0.0, 1.0, false, true};
    return PsiFunction(std::move(node));
}

PsiFunction PsiFunction::finite_support(double b, double beta) {
    if (!(b > 1.0) || !std::isfinite(b)) throw DomainError("finite_support psi requires 1 < b < inf");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw DomainError("finite_support psi requires beta >= 0");
    auto node = std::make_shared<Node>();
    node->kind = PsiKind::finite_support;
    node->a = b;
    node->c = beta;
    node->domain = Interval{1.0 / b, 1.0, false, true};
    return PsiFunction(std::move(node));
}

PsiFunction PsiFunction::extremal(double r) {
    if (!(r >= 1.0) || !std::isfinite(r)) throw DomainError("extremal psi requires 1 <= r < inf");
    auto node = std::make_shared<Node>();
    node->kind = PsiKind::extremal;
    node->a = r;
    node->domain = Interval{1.0 / r, 1.0, true, true};
    return PsiFunction(std::move(node));
}

PsiFunction PsiFunction::tabulated(std::vector<Knot> knots) {
    return PsiFunction(make_tabulated(std::move(knots), PsiKind::tabulated));
}

PsiFunction PsiFunction::empirical(std::vector<Knot> knots, std::uint64_t sample_count,
                                   std::uint64_t seed) {
    auto node = make_tabulated(std::move(knots), PsiKind::empirical);
    node->sample_count = sample_count;
    node->seed = seed;
    return PsiFunction(std::move(node));
}

PsiKind PsiFunction::kind() const { return node_->kind; }
const Interval& PsiFunction::u_domain() const { return node_->domain; }

double PsiFunction::support_bound() const {
    const auto& d = node_->domain;
    return d.lo > 0.0 ? 1.0 / d.lo : kInf;
}

double PsiFunction::log_eval_u(double u) const {
    const Node& n = *node_;
    if (std::isnan(u) || u < 0.0 || u > 1.0 + kSnap) return kInf;
    u = std::min(u, 1.0);
    switch (n.kind) {
        case PsiKind::power:
            if (u <= 0.0) return kInf;
            return -std::log(u) / n.a;
        case PsiKind::finite_support: {
            if (u <= 0.0) return kInf;
            const double gap = n.a - 1.0 / u;
            if (!(gap > 0.0)) return kInf;
            return n.c == 0.0 ? 0.0 : -n.c * std::log(gap);
        }
        case PsiKind::extremal:
            return u >= n.domain.lo - kSnap ? 0.0 : kInf;
        case PsiKind::tabulated:
        case PsiKind::empirical:
            return tabulated_log_u(n, u);
        case PsiKind::dual:
            return n.children[0].log_eval_u(1.0 - u);
        case PsiKind::product: {
            const double l = n.children[0].log_eval_u(u);
            if (l == kInf) return kInf;
            const double r = n.children[1].log_eval_u(1.0 - u);
            return l + r;
        }
    }
    return kInf;
}

double PsiFunction::log_eval(double p) const {
    if (std::isnan(p) || p < 1.0) return kInf;
    const Node& n = *node_;
    switch (n.kind) {
        case PsiKind::power:
            return std::isinf(p) ? kInf : std::log(p) / n.a;
        case PsiKind::finite_support:
            if (p >= n.a) return kInf;
            return n.c == 0.0 ? 0.0 : -n.c * std::log(n.a - p);
        case PsiKind::extremal:
            return p <= n.a ? 0.0 : kInf;
        case PsiKind::dual:
            return n.children[0].log_eval(conjugate_exponent(p));
        case PsiKind::product: {
            const double l = n.children[0].log_eval(p);
            if (l == kInf) return kInf;
            return l + n.children[1].log_eval(conjugate_exponent(p));
        }
        default:
            return log_eval_u(u_of(p));
    }
}

double PsiFunction::operator()(double p) const {
    if (std::isnan(p) || p < 1.0) return kInf;
    const Node& n = *node_;
    switch (n.kind) {
        case PsiKind::power:
            return std::isinf(p) ? kInf : std::pow(p, 1.0 / n.a);
        case PsiKind::finite_support:
            return p >= n.a ? kInf : std::pow(n.a - p, -n.c);
        case PsiKind::extremal:
            return p <= n.a ? 1.0 : kInf;
        case PsiKind::dual:
            return n.children[0](conjugate_exponent(p));
        case PsiKind::product: {
            const double l = n.children[0](p);
            if (l == kInf) return kInf;
            return l * n.children[1](conjugate_exponent(p));
        }
        default:
            return std::exp(log_eval(p));
    }
}

double PsiFunction::m() const { return node_->a; }
double PsiFunction::b() const { return node_->a; }
double PsiFunction::beta() const { return node_->c; }
double PsiFunction::r() const { return node_->a; }
const std::vector<Knot>& PsiFunction::knots() const { return node_->knots; }
std::uint64_t PsiFunction::sample_count() const { return node_->sample_count; }
std::uint64_t PsiFunction::seed() const { return node_->seed; }
const PsiFunction& PsiFunction::left() const { return node_->children.at(0); }
const PsiFunction& PsiFunction::right() const { return node_->children.at(1); }
const PsiFunction& PsiFunction::inner() const { return node_->children.at(0); }

double eval_psi(const PsiFunction& psi, double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("psi is defined for p >= 1");
    return psi(p);
}

PsiFunction dual_psi(const PsiFunction& psi) {
    if (psi.has_finite_support()) {
        throw DomainError(
            "dual of a finite-support psi is not a generating function: the dual space "
            "reduces to essentially bounded variables (L_inf)");
    }
    auto node = std::make_shared<PsiFunction::Node>();
    node->kind = PsiKind::dual;
    node->domain = psi.u_domain().reflect().intersect(kUnit);
    node->children = {psi};
    return PsiFunction(std::move(node));
}

PsiFunction product_zeta(const PsiFunction& psi, const PsiFunction& nu) {
    auto node = std::make_shared<PsiFunction::Node>();
    node->kind = PsiKind::product;
    node->domain = psi.u_domain().intersect(nu.u_domain().reflect());
    node->children = {psi, nu};
    return PsiFunction(std::move(node));
}

// ---------------------------------------------------------------------------
// Moment tables

void MomentTable::validate() const {
    if (entries.empty()) throw DomainError("moment table is empty");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& e = entries[i];
        if (!(e.p >= 1.0) || !std::isfinite(e.p))
            throw DomainError("moment table p values must be finite and >= 1");
        if (!(e.value >= 0.0)) throw DomainError("moment table values must be non-negative");
        if (i == 0) continue;
        const auto& prev = entries[i - 1];
        if (!(e.p > prev.p)) throw DomainError("moment table p values must be strictly increasing");
        if (prev.value > e.value * (1.0 + 1e-12) + 1e-12) {
            throw DomainError("moment table violates monotonicity of L_p norms in p");
        }
    }
}

namespace {

struct Neumaier {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x)) {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    double value() const { return sum + comp; }
};

constexpr std::size_t kBlock = 1 << 15;

// sum of (|x| / scale)^p over the samples, in fixed-size blocks so that the
// parallel and serial paths add in exactly the same order
double scaled_power_sum(std::span<const double> xs, double scale, double p, Exec exec) {
    const std::size_t n = xs.size();
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<double> partial(blocks, 0.0);
    auto run_block = [&](std::size_t b) {
        Neumaier acc;
        const std::size_t end = std::min(n, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) acc.add(std::pow(std::abs(xs[i]) / scale, p));
        partial[b] = acc.value();
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    } else {
        for (std::size_t b = 0; b < blocks; ++b) run_block(b);
    }
    Neumaier total;
    for (double v : partial) total.add(v);
    return total.value();
}

}  // namespace

MomentTable MomentTable::from_samples(std::span<const double> samples,
                                      std::span<const double> p_grid, std::uint64_t seed,
                                      Exec exec) {
    if (samples.empty()) throw DomainError("moment table needs at least one sample");
    double scale = 0.0;
    for (double x : samples) {
        if (!std::isfinite(x)) throw DomainError("samples must be finite");
        scale = std::max(scale, std::abs(x));
    }
    MomentTable table;
    table.source = Source::sample;
    table.sample_count = samples.size();
    table.seed = seed;
    const double log_n = std::log(static_cast<double>(samples.size()));
    for (double p : p_grid) {
        if (!(p >= 1.0)) throw DomainError("moment p grid values must be >= 1");
        double value = 0.0;
        if (scale > 0.0) {
            if (std::isinf(p)) {
                value = scale;
            } else {
                const double s = scaled_power_sum(samples, scale, p, exec);
                value = s > 0.0 ? std::exp(std::log(scale) + (std::log(s) - log_n) / p) : 0.0;
                value = std::min(value, scale);
            }
        }
        if (std::isinf(p)) continue;  // tables hold finite p only
        table.entries.push_back({p, value});
    }
    // rounding can break monotonicity by an ulp; the exact moments are monotone
    for (std::size_t i = 1; i < table.entries.size(); ++i) {
        table.entries[i].value = std::max(table.entries[i].value, table.entries[i - 1].value);
    }
    return table;
}

PsiFunction natural_from_moments(const MomentTable& table) {
    table.validate();
    std::vector<Knot> knots;
    bool nontrivial = false;
    for (const auto& e : table.entries) {
        if (!std::isfinite(e.value)) break;
        knots.push_back({e.p, std::max(e.value, kPsiFloor)});
        if (e.p > 1.0) nontrivial = true;
    }
    if (!nontrivial) {
        throw DomainError("natural function trivial: no finite moment at any p > 1");
    }
    if (table.source == MomentTable::Source::sample) {
        return PsiFunction::empirical(std::move(knots), table.sample_count, table.seed);
    }
    return PsiFunction::tabulated(std::move(knots));
}

GlsNorm gls_norm(const MomentTable& table, const PsiFunction& psi) {
    if (table.entries.empty()) throw DomainError("moment table is empty");
    GlsNorm best{0.0, table.entries.front().p};
    double best_log = -kInf;
    for (const auto& e : table.entries) {
        if (e.value == 0.0) continue;
        const double lp = psi.log_eval(e.p);
        if (lp == kInf) continue;
        const double l = std::log(e.value) - lp;
        if (l > best_log) {
            best_log = l;
            best = {std::exp(l), e.p};
        }
    }
    return best;
}

}  // namespace glscov
