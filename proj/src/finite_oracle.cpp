#include "glscov/finite_oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace glscov {

void FiniteProbSpace::validate() const {
    if (probs.empty()) throw DomainError("probability space needs at least one atom");
    double total = 0.0;
    for (double p : probs) {
        if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("atom probabilities must be positive");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("atom probabilities must sum to 1");
}

void SigmaField::validate(std::size_t atoms) const {
    if (block_of.size() != atoms) throw DomainError("partition must assign every atom");
    if (block_count < 1) throw DomainError("partition needs at least one block");
    std::vector<char> seen(static_cast<std::size_t>(block_count), 0);
    for (int b : block_of) {
        if (b < 0 || b >= block_count) throw DomainError("block id out of range");
        seen[static_cast<std::size_t>(b)] = 1;
    }
    for (char s : seen) {
        if (!s) throw DomainError("partition blocks must be non-empty");
    }
}

SigmaField SigmaField::trivial(std::size_t atoms) {
    return {std::vector<int>(atoms, 0), 1};
}

SigmaField SigmaField::discrete(std::size_t atoms) {
    SigmaField f;
    f.block_of.resize(atoms);
    std::iota(f.block_of.begin(), f.block_of.end(), 0);
    f.block_count = static_cast<int>(atoms);
    return f;
}

bool RandomVar::measurable(const SigmaField& field) const {
    if (values.size() != field.block_of.size()) return false;
    std::vector<std::optional<double>> v(static_cast<std::size_t>(field.block_count));
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto& slot = v[static_cast<std::size_t>(field.block_of[i])];
        if (!slot) {
            slot = values[i];
        } else if (*slot != values[i]) {
            return false;
        }
    }
    return true;
}

MixingPair mixing_from_joint(const std::vector<std::vector<double>>& joint) {
    const std::size_t kf = joint.size();
    if (kf == 0 || joint[0].empty()) throw DomainError("joint law is empty");
    const std::size_t kg = joint[0].size();
    if (kf > kMaxBlocks || kg > kMaxBlocks) throw DomainError("enumeration too large");
    std::vector<double> pf(kf, 0.0);
    std::vector<double> pg(kg, 0.0);
    for (std::size_t i = 0; i < kf; ++i) {
        if (joint[i].size() != kg) throw DomainError("joint law must be rectangular");
        for (std::size_t j = 0; j < kg; ++j) {
            pf[i] += joint[i][j];
            pg[j] += joint[i][j];
        }
    }
    double total = 0.0;
    for (double x : pf) total += x;
    // P(AB) - P(A)P(B) in the normalized form (J T - pF pG) / T^2, which is
    // exactly zero for a trivial field whatever the rounding of T
    std::vector<std::vector<double>> dev(kf, std::vector<double>(kg));
    for (std::size_t i = 0; i < kf; ++i)
        for (std::size_t j = 0; j < kg; ++j)
            dev[i][j] = (joint[i][j] * total - pf[i] * pg[j]) / (total * total);
    return mixing_from_deviation(dev, pf);
}

MixingPair mixing_from_deviation(const std::vector<std::vector<double>>& deviation,
                                 const std::vector<double>& pf) {
    const std::size_t kf = deviation.size();
    if (kf == 0 || deviation[0].empty()) throw DomainError("joint law is empty");
    const std::size_t kg = deviation[0].size();
    if (kf > kMaxBlocks || kg > kMaxBlocks) throw DomainError("enumeration too large");
    if (pf.size() != kf) throw DomainError("marginal size does not match the deviation matrix");
    std::vector<double> dev(kf * kg);
    for (std::size_t i = 0; i < kf; ++i) {
        if (deviation[i].size() != kg) throw DomainError("joint law must be rectangular");
        for (std::size_t j = 0; j < kg; ++j) dev[i * kg + j] = deviation[i][j];
    }

    // For a fixed A the sup over B of |sum_{j in B} d_A(j)| is the larger of the
    // positive and negative parts of the row d_A.
    const std::size_t na = std::size_t{1} << kf;
    std::vector<double> rows(na * kg, 0.0);
    std::vector<double> pa(na, 0.0);
    MixingPair out;
    for (std::size_t a = 1; a < na; ++a) {
        const std::size_t low = static_cast<std::size_t>(std::countr_zero(a));
        const std::size_t prev = a & (a - 1);
        double pos = 0.0;
        double neg = 0.0;
        for (std::size_t j = 0; j < kg; ++j) {
            const double r = rows[prev * kg + j] + dev[low * kg + j];
            rows[a * kg + j] = r;
            if (r > 0.0) pos += r; else neg -= r;
        }
        pa[a] = pa[prev] + pf[low];
        const double m = std::max(pos, neg);
        out.alpha = std::max(out.alpha, m);
        if (pa[a] > 0.0) out.beta = std::max(out.beta, m / std::min(pa[a], 1.0));
    }
    out.beta = std::min(out.beta, 1.0);
    return out;
}

namespace {

std::vector<std::vector<double>> joint_law(const FiniteProbSpace& space, const SigmaField& F,
                                           const SigmaField& G) {
    space.validate();
    F.validate(space.size());
    G.validate(space.size());
    if (F.block_count > kMaxBlocks || G.block_count > kMaxBlocks)
        throw DomainError("enumeration too large");
    std::vector<std::vector<double>> joint(static_cast<std::size_t>(F.block_count),
                                           std::vector<double>(static_cast<std::size_t>(G.block_count), 0.0));
    for (std::size_t k = 0; k < space.size(); ++k)
        joint[static_cast<std::size_t>(F.block_of[k])][static_cast<std::size_t>(G.block_of[k])] += space.probs[k];
    return joint;
}

void check_var(const FiniteProbSpace& space, const RandomVar& x) {
    if (x.values.size() != space.size()) throw DomainError("random variable must have one value per atom");
    for (double v : x.values) {
        if (!std::isfinite(v)) throw DomainError("random variable values must be finite");
    }
}

}  // namespace

MixingPair mixing_coefficients(const FiniteProbSpace& space, const SigmaField& F,
                               const SigmaField& G) {
    return mixing_from_joint(joint_law(space, F, G));
}

double alpha_coefficient(const FiniteProbSpace& space, const SigmaField& F, const SigmaField& G) {
    return mixing_coefficients(space, F, G).alpha;
}

double beta_coefficient(const FiniteProbSpace& space, const SigmaField& F, const SigmaField& G) {
    return mixing_coefficients(space, F, G).beta;
}

double exact_mean(const FiniteProbSpace& space, const RandomVar& xi) {
    check_var(space, xi);
    double s = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k) s += space.probs[k] * xi.values[k];
    return s;
}

double exact_cov(const FiniteProbSpace& space, const RandomVar& xi, const RandomVar& eta) {
    check_var(space, xi);
    check_var(space, eta);
    double sxy = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k)
        sxy += space.probs[k] * xi.values[k] * eta.values[k];
    return sxy - exact_mean(space, xi) * exact_mean(space, eta);
}

double exact_lp(const FiniteProbSpace& space, const RandomVar& xi, double p) {
    check_var(space, xi);
    if (std::isnan(p) || p < 1.0) throw DomainError("L_p norm needs p >= 1");
    double m = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (space.probs[k] > 0.0) m = std::max(m, std::abs(xi.values[k]));
    }
    if (p == kInf || m == 0.0) return m;
    if (p == 1.0) {
        double s = 0.0;
        for (std::size_t k = 0; k < space.size(); ++k) s += space.probs[k] * std::abs(xi.values[k]);
        return s;
    }
    double s = 0.0;
    for (std::size_t k = 0; k < space.size(); ++k)
        s += space.probs[k] * std::pow(std::abs(xi.values[k]) / m, p);
    return std::min(m, m * std::pow(s, 1.0 / p));
}

GlsNorm finite_gls_norm(const FiniteProbSpace& space, const RandomVar& xi, const PsiFunction& psi,
                        const OptimizerOptions& opt) {
    check_var(space, xi);
    if (psi.kind() == PsiKind::extremal) return {exact_lp(space, xi, psi.r()), psi.r()};
    const double m = exact_lp(space, xi, kInf);
    if (m == 0.0) return {0.0, 1.0};
    if (psi.u_domain().empty()) throw DomainError("empty effective support");
    std::vector<double> w;
    std::vector<double> a;
    for (std::size_t k = 0; k < space.size(); ++k) {
        const double v = std::abs(xi.values[k]) / m;
        if (v > 0.0) {
            w.push_back(space.probs[k]);
            a.push_back(std::log(v));
        }
    }
    // ln |xi|_{1/u} - ln psi(1/u), with |xi| scaled by its sup
    const auto f = [&](double u) {
        const double lp = psi.log_eval_u(u);
        if (lp == kInf) return -kInf;
        const double p = 1.0 / u;
        double s = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * std::exp(p * a[k]);
        return std::min(0.0, u * std::log(s)) - lp;
    };
    const Max1D best = maximize_1d(f, search_range_u(psi.u_domain()), opt);
    if (best.value == -kInf) throw DomainError("empty effective support");
    return {m * std::exp(best.value), best.x == 0.0 ? kInf : 1.0 / best.x};
}

}  // namespace glscov
