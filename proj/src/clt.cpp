#include "glscov/clt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <map>
#include <random>

#include "glscov/finite_oracle.hpp"
#include "glscov/fundamental.hpp"

namespace glscov {

void CltProfile::validate() const {
    if (alpha.size() != beta.size()) throw DomainError("alpha and beta profiles must have equal length");
    if (K() < 2) throw DomainError("profile horizon K must be at least 2");
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (!(alpha[k] >= 0.0 && alpha[k] <= 1.0) || !(beta[k] >= 0.0 && beta[k] <= 1.0))
            throw DomainError("mixing coefficients must lie in [0, 1]");
    }
}

CltProfile profile_from_functions(const std::function<double(int)>& alpha,
                                  const std::function<double(int)>& beta, const PsiFunction& psi,
                                  int K) {
    if (K < 2) throw DomainError("profile horizon K must be at least 2");
    CltProfile p;
    p.psi = psi;
    p.alpha.assign(static_cast<std::size_t>(K) + 1, 0.0);
    p.beta.assign(static_cast<std::size_t>(K) + 1, 0.0);
    for (int k = 1; k <= K; ++k) {
        p.alpha[static_cast<std::size_t>(k)] = alpha(k);
        p.beta[static_cast<std::size_t>(k)] = beta(k);
    }
    p.validate();
    return p;
}

namespace {

void check_nontrivial(const PsiFunction& psi) {
    const Interval& d = psi.u_domain();
    if (d.empty() || !(d.lo < 1.0))
        throw DomainError("natural function trivial: psi must be finite at some p > 1");
}

template <class F>
std::vector<double> map_k(int K, Exec exec, F f) {
    std::vector<double> out(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<std::exception_ptr> errors(out.size());
    const auto run = [&](int k) {
        try {
            out[static_cast<std::size_t>(k)] = f(k);
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (int k = 2; k <= K; ++k) run(k);
    } else {
        for (int k = 2; k <= K; ++k) run(k);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace

std::vector<double> y_sequence(const CltProfile& profile, const OptimizerOptions& opt) {
    profile.validate();
    check_nontrivial(profile.psi);
    OptimizerOptions inner = opt;
    inner.exec = Exec::serial;
    return map_k(profile.K(), opt.exec, [&](int k) {
        const double a = profile.alpha[static_cast<std::size_t>(k)];
        if (a == 0.0) return 0.0;
        const FundamentalResult f = fundamental(profile.psi, a, inner);
        return std::exp(std::log(a) - 2.0 * f.log_value);
    });
}

std::vector<double> z_sequence(const CltProfile& profile, const OptimizerOptions& opt) {
    profile.validate();
    check_nontrivial(profile.psi);
    const PsiFunction zeta = product_zeta(profile.psi, profile.psi);
    if (zeta.u_domain().empty()) throw DomainError("zeta[psi] is infinite everywhere");
    OptimizerOptions inner = opt;
    inner.exec = Exec::serial;
    return map_k(profile.K(), opt.exec, [&](int k) {
        const double b = profile.beta[static_cast<std::size_t>(k)];
        // phi grows without bound in delta, so z -> 0 when 1/beta overflows
        if (b == 0.0 || !std::isfinite(1.0 / b)) return 0.0;
        return std::exp(-fundamental(zeta, 1.0 / b, inner).log_value);
    });
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::summable_evidence: return "summable_evidence";
        case Verdict::divergent_evidence: return "divergent_evidence";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

SummabilityReport summability_report(std::span<const double> seq, int K) {
    if (K < 16) throw DomainError("summability report needs K >= 16");
    if (seq.size() < static_cast<std::size_t>(K) + 1) throw DomainError("sequence shorter than K");
    SummabilityReport r;
    r.K = K;
    const auto sum = [&](int lo, int hi) {
        double s = 0.0;
        for (int k = lo; k <= hi; ++k) s += seq[static_cast<std::size_t>(k)];
        return s;
    };
    r.partial_sum = sum(2, K);
    r.half_sum = sum(2, K / 2);
    if (r.half_sum > 0.0) {
        r.tail_ratio = (r.partial_sum - r.half_sum) / r.half_sum;
    } else {
        r.tail_ratio = r.partial_sum == 0.0 ? 0.0 : kInf;
    }

    int j = 1;
    while ((2 << (j + 1)) - 1 <= K) ++j;  // last complete dyadic block [2^j, 2^{j+1})
    const double last = sum(1 << j, (2 << j) - 1);
    const double prev = sum(1 << (j - 1), (1 << j) - 1);
    r.note = "evidence from a finite horizon; not a proof of summability";
    if (prev == 0.0) {
        r.block_ratio = last == 0.0 ? 0.0 : kInf;
        r.verdict = last == 0.0 ? Verdict::summable_evidence : Verdict::inconclusive;
        if (last == 0.0) r.note = "terms vanish on the last dyadic blocks; " + r.note;
        return r;
    }
    r.block_ratio = last / prev;
    if (r.block_ratio < 0.5) {
        r.verdict = Verdict::summable_evidence;
    } else if (r.block_ratio >= 0.98) {
        r.verdict = Verdict::divergent_evidence;
    } else {
        r.verdict = Verdict::inconclusive;
    }
    return r;
}

int eventually_nonincreasing_from(std::span<const double> seq) {
    const int K = static_cast<int>(seq.size()) - 1;
    if (K < 2) return K + 1;
    int k = K;
    while (k - 1 >= 2 && seq[static_cast<std::size_t>(k - 1)] >= seq[static_cast<std::size_t>(k)] * (1.0 - 1e-12))
        --k;
    return k;
}

std::string to_string(Innovation i) {
    switch (i) {
        case Innovation::normal: return "normal";
        case Innovation::rademacher: return "rademacher";
        case Innovation::uniform: return "uniform";
    }
    return "unknown";
}

std::string to_string(SequenceModel::Kind k) {
    switch (k) {
        case SequenceModel::Kind::m_dependent: return "m_dependent";
        case SequenceModel::Kind::finite_markov: return "finite_markov";
        case SequenceModel::Kind::user_samples: return "user_samples";
    }
    return "unknown";
}

void SequenceModel::validate() const {
    switch (kind) {
        case Kind::m_dependent: {
            if (coeffs.empty()) throw DomainError("m-dependent model needs coefficients");
            bool nonzero = false;
            for (double c : coeffs) {
                if (!std::isfinite(c)) throw DomainError("coefficients must be finite");
                nonzero = nonzero || c != 0.0;
            }
            if (!nonzero) throw DomainError("coefficients must not all vanish");
            break;
        }
        case Kind::finite_markov: {
            const std::size_t s = transition.size();
            if (s == 0) throw DomainError("Markov model needs a transition matrix");
            if (state_values.size() != s) throw DomainError("one state value per state is needed");
            for (const auto& row : transition) {
                if (row.size() != s) throw DomainError("transition matrix must be square");
                double total = 0.0;
                for (double x : row) {
                    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("transition matrix is not stochastic");
                    total += x;
                }
                if (std::abs(total - 1.0) > 1e-12) throw DomainError("transition matrix is not stochastic");
            }
            for (double v : state_values) {
                if (!std::isfinite(v)) throw DomainError("state values must be finite");
            }
            break;
        }
        case Kind::user_samples:
            if (samples.empty()) throw DomainError("sample model needs samples");
            for (double v : samples) {
                if (!std::isfinite(v)) throw DomainError("samples must be finite");
            }
            break;
    }
}

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& P) {
    const std::size_t s = P.size();
    if (s == 0) throw DomainError("empty transition matrix");
    // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1
    std::vector<std::vector<double>> a(s, std::vector<double>(s + 1, 0.0));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) a[i][j] = P[j][i] - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < s; ++j) a[s - 1][j] = 1.0;
    a[s - 1][s] = 1.0;
    for (std::size_t c = 0; c < s; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < s; ++r)
            if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
        if (std::abs(a[piv][c]) < 1e-14)
            throw DomainError("transition matrix has no unique stationary distribution");
        std::swap(a[c], a[piv]);
        for (std::size_t r = 0; r < s; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (std::size_t k = c; k <= s; ++k) a[r][k] -= f * a[c][k];
        }
    }
    std::vector<double> pi(s);
    double total = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        pi[i] = std::max(0.0, a[i][s] / a[i][i]);
        total += pi[i];
    }
    for (auto& x : pi) x /= total;
    return pi;
}

namespace {

std::vector<double> centered_values(const SequenceModel& m, const std::vector<double>& pi) {
    double mean = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) mean += pi[i] * m.state_values[i];
    std::vector<double> g(pi.size());
    for (std::size_t i = 0; i < pi.size(); ++i) g[i] = m.state_values[i] - mean;
    return g;
}

double sigma_from_autocov(const std::vector<double>& r, std::uint64_t n) {
    double s = r[0];
    const double nn = static_cast<double>(n);
    for (std::size_t h = 1; h < r.size() && h < n; ++h) s += 2.0 * (1.0 - static_cast<double>(h) / nn) * r[h];
    return s;
}

}  // namespace

std::optional<double> exact_sigma_n(const SequenceModel& model, std::uint64_t n) {
    model.validate();
    if (n == 0) throw DomainError("n must be positive");
    if (model.kind == SequenceModel::Kind::m_dependent) {
        const auto& c = model.coeffs;
        std::vector<double> r(c.size(), 0.0);
        for (std::size_t h = 0; h < c.size(); ++h)
            for (std::size_t j = 0; j + h < c.size(); ++j) r[h] += c[j] * c[j + h];
        return sigma_from_autocov(r, n);
    }
    if (model.kind == SequenceModel::Kind::finite_markov) {
        const auto& P = model.transition;
        const auto pi = stationary_distribution(P);
        const auto g = centered_values(model, pi);
        const std::size_t s = pi.size();
        std::vector<double> r(static_cast<std::size_t>(n), 0.0);
        std::vector<double> v = g;
        std::vector<double> next(s);
        for (std::size_t h = 0; h < r.size(); ++h) {
            double acc = 0.0;
            for (std::size_t i = 0; i < s; ++i) acc += pi[i] * g[i] * v[i];
            r[h] = acc;
            for (std::size_t i = 0; i < s; ++i) {
                double t = 0.0;
                for (std::size_t j = 0; j < s; ++j) t += P[i][j] * v[j];
                next[i] = t;
            }
            v.swap(next);
        }
        return sigma_from_autocov(r, n);
    }
    return std::nullopt;
}

namespace {

using Rng = std::mt19937_64;

// Unit-variance innovations; one sampler per path keeps the normal
// generator's cached second variate in use.
class InnovationSampler {
public:
    explicit InnovationSampler(Innovation kind) : kind_(kind) {}

    double operator()(Rng& rng) {
        switch (kind_) {
            case Innovation::normal: return normal_(rng);
            case Innovation::rademacher: return (rng() >> 63) ? 1.0 : -1.0;
            case Innovation::uniform: return uniform_(rng);
        }
        return 0.0;
    }

private:
    Innovation kind_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{-std::sqrt(3.0), std::sqrt(3.0)};
};

// n^{-1/2} sum_{i=1}^{n} gamma(i) on one simulated path
double simulate_sum(const SequenceModel& m, std::uint64_t n, Rng& rng, const std::vector<double>& pi,
                    const std::vector<double>& g) {
    double s = 0.0;
    if (m.kind == SequenceModel::Kind::m_dependent) {
        const std::size_t L = m.coeffs.size();
        // weight of eps_t in the sum is sum of c_j over 1 <= t - j <= n
        std::vector<double> prefix(L + 1, 0.0);
        for (std::size_t j = 0; j < L; ++j) prefix[j + 1] = prefix[j] + m.coeffs[j];
        const std::uint64_t T = n + L - 1;
        InnovationSampler draw(m.innovation);
        for (std::uint64_t t = 1; t <= T; ++t) {
            const std::uint64_t jlo = t > n ? t - n : 0;
            const std::uint64_t jhi = std::min<std::uint64_t>(L - 1, t - 1);
            const double w = prefix[jhi + 1] - prefix[jlo];
            s += w * draw(rng);
        }
    } else {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const auto pick = [&](const std::vector<double>& row) {
            const double x = u(rng);
            double acc = 0.0;
            for (std::size_t j = 0; j < row.size(); ++j) {
                acc += row[j];
                if (x < acc) return j;
            }
            return row.size() - 1;
        };
        std::size_t state = pick(pi);
        for (std::uint64_t i = 0; i < n; ++i) {
            s += g[state];
            state = pick(m.transition[state]);
        }
    }
    return s / std::sqrt(static_cast<double>(n));
}

SigmaRow summarize(std::uint64_t n, const std::vector<double>& S) {
    SigmaRow row;
    row.n = n;
    row.replications = S.size();
    const double R = static_cast<double>(S.size());
    double mean = 0.0;
    for (double x : S) mean += x;
    mean /= R;
    double m2 = 0.0;
    double m4 = 0.0;
    for (double x : S) {
        const double d = (x - mean) * (x - mean);
        m2 += d;
        m4 += d * d;
    }
    row.mean = mean;
    row.variance = m2 / (R - 1.0);
    const double mu2 = m2 / R;
    row.se = std::sqrt(std::max(0.0, m4 / R - mu2 * mu2) / R);
    return row;
}

}  // namespace

std::vector<SigmaRow> sigma_n_estimate(const SequenceModel& model,
                                       std::span<const std::uint64_t> n_grid,
                                       std::uint64_t replications, std::uint64_t seed, Exec exec) {
    model.validate();
    if (n_grid.empty()) throw DomainError("n grid must be non-empty");
    std::vector<SigmaRow> out;
    if (model.kind == SequenceModel::Kind::user_samples) {
        const auto& x = model.samples;
        double mean = 0.0;
        for (double v : x) mean += v;
        mean /= static_cast<double>(x.size());
        for (std::uint64_t n : n_grid) {
            if (n == 0) throw DomainError("n must be positive");
            const std::uint64_t blocks = x.size() / n;
            if (blocks < 2) throw DomainError("fewer than two blocks of length n in the samples");
            std::vector<double> S(blocks);
            for (std::uint64_t b = 0; b < blocks; ++b) {
                double s = 0.0;
                for (std::uint64_t i = 0; i < n; ++i) s += x[b * n + i] - mean;
                S[b] = s / std::sqrt(static_cast<double>(n));
            }
            out.push_back(summarize(n, S));
        }
        return out;
    }

    if (replications < 2) throw DomainError("at least two replications are needed");
    std::vector<double> pi;
    std::vector<double> g;
    if (model.kind == SequenceModel::Kind::finite_markov) {
        pi = stationary_distribution(model.transition);
        g = centered_values(model, pi);
    }
    for (std::uint64_t n : n_grid) {
        if (n == 0) throw DomainError("n must be positive");
        std::vector<double> S(replications);
        const auto R = static_cast<long>(replications);
        const auto run = [&](long r) {
            Rng rng(derive_seed(seed, n, static_cast<std::uint64_t>(r)));
            S[static_cast<std::size_t>(r)] = simulate_sum(model, n, rng, pi, g);
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
            for (long r = 0; r < R; ++r) run(r);
        } else {
            for (long r = 0; r < R; ++r) run(r);
        }
        SigmaRow row = summarize(n, S);
        row.exact = exact_sigma_n(model, n);
        out.push_back(row);
    }
    return out;
}

CltProfile markov_mixing_profile(const SequenceModel& model, int K) {
    if (model.kind != SequenceModel::Kind::finite_markov) throw DomainError("model is not a finite Markov chain");
    model.validate();
    const std::size_t s = model.transition.size();
    if (s > 8) throw DomainError("state space too large for joint-law enumeration (at most 8 states)");
    if (K < 2) throw DomainError("profile horizon K must be at least 2");
    const auto& P = model.transition;
    const auto pi = stationary_distribution(P);

    // sigma(gamma(0)) is generated by the level sets of the state values
    std::map<double, int> level;
    for (double v : model.state_values) level.emplace(v, 0);
    int nb = 0;
    for (auto& [v, id] : level) id = nb++;
    std::vector<int> block(s);
    for (std::size_t i = 0; i < s; ++i) block[i] = level[model.state_values[i]];
    std::vector<double> pf(static_cast<std::size_t>(nb), 0.0);
    for (std::size_t i = 0; i < s; ++i) pf[static_cast<std::size_t>(block[i])] += pi[i];

    // Q_k = P^k - 1 pi^T = A^k with A = P - 1 pi^T; iterating A avoids the
    // cancellation floor of forming P^k and subtracting
    std::vector<std::vector<double>> A(s, std::vector<double>(s));
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j) A[i][j] = P[i][j] - pi[j];
    auto Q = A;
    auto next = A;

    CltProfile prof;
    prof.psi = natural_psi(model);
    prof.lower_bound = true;
    prof.alpha.assign(static_cast<std::size_t>(K) + 1, 0.0);
    prof.beta.assign(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<std::vector<double>> dev(static_cast<std::size_t>(nb), std::vector<double>(static_cast<std::size_t>(nb)));
    for (int k = 1; k <= K; ++k) {
        for (auto& row : dev) std::fill(row.begin(), row.end(), 0.0);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j)
                dev[static_cast<std::size_t>(block[i])][static_cast<std::size_t>(block[j])] += pi[i] * Q[i][j];
        const MixingPair mp = mixing_from_deviation(dev, pf);
        prof.alpha[static_cast<std::size_t>(k)] = std::min(mp.alpha, 1.0);
        prof.beta[static_cast<std::size_t>(k)] = std::min(mp.beta, 1.0);
        for (std::size_t i = 0; i < s; ++i)
            for (std::size_t j = 0; j < s; ++j) {
                double t = 0.0;
                for (std::size_t l = 0; l < s; ++l) t += Q[i][l] * A[l][j];
                next[i][j] = t;
            }
        Q.swap(next);
    }
    return prof;
}

CltProfile m_dependent_profile(const SequenceModel& model, int K) {
    if (model.kind != SequenceModel::Kind::m_dependent) throw DomainError("model is not m-dependent");
    model.validate();
    const int m = static_cast<int>(model.coeffs.size()) - 1;
    return profile_from_functions([m](int k) { return k <= m ? 0.25 : 0.0; },
                                  [m](int k) { return k <= m ? 1.0 : 0.0; }, natural_psi(model), K);
}

namespace {

std::vector<double> natural_grid() {
    std::vector<double> p;
    constexpr int kPoints = 241;
    for (int i = 0; i < kPoints; ++i) p.push_back(i == 0 ? 1.0 : std::pow(kPMax, static_cast<double>(i) / (kPoints - 1)));
    return p;
}

double finite_lp(const std::vector<double>& probs, const std::vector<double>& vals, double p) {
    double m = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (probs[i] > 0.0) m = std::max(m, std::abs(vals[i]));
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (probs[i] > 0.0) s += probs[i] * std::pow(std::abs(vals[i]) / m, p);
    return std::min(m, m * std::pow(s, 1.0 / p));
}

PsiFunction tabulate(const std::function<double(double)>& norm) {
    std::vector<Knot> knots;
    double prev = 0.0;
    for (double p : natural_grid()) {
        prev = std::max(prev, std::max(norm(p), kPsiFloor));
        knots.push_back({p, prev});
    }
    return PsiFunction::tabulated(std::move(knots));
}

PsiFunction empirical_from(const std::vector<double>& x, std::uint64_t seed) {
    const auto grid = natural_grid();
    return natural_from_moments(MomentTable::from_samples(x, grid, seed, Exec::parallel));
}

}  // namespace

PsiFunction natural_psi(const SequenceModel& model) {
    model.validate();
    switch (model.kind) {
        case SequenceModel::Kind::m_dependent: {
            double var = 0.0;
            for (double c : model.coeffs) var += c * c;
            const double sigma = std::sqrt(var);
            if (model.innovation == Innovation::normal) {
                // |N(0, sigma^2)|_p = sigma (2^{p/2} Gamma((p+1)/2) / sqrt(pi))^{1/p}
                return tabulate([sigma](double p) {
                    return sigma * std::exp((0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) -
                                             0.5 * std::log(M_PI)) / p);
                });
            }
            const std::size_t L = model.coeffs.size();
            if (model.innovation == Innovation::rademacher && L <= 16) {
                std::vector<double> vals;
                for (std::uint32_t mask = 0; mask < (1u << L); ++mask) {
                    double v = 0.0;
                    for (std::size_t j = 0; j < L; ++j) v += ((mask >> j) & 1u) ? model.coeffs[j] : -model.coeffs[j];
                    vals.push_back(v);
                }
                const std::vector<double> probs(vals.size(), 1.0 / static_cast<double>(vals.size()));
                return tabulate([&](double p) { return finite_lp(probs, vals, p); });
            }
            const std::uint64_t seed = derive_seed(model.seed, 0x6e61747572616cULL);
            Rng rng(seed);
            InnovationSampler draw(model.innovation);
            std::vector<double> x(200000);
            for (auto& v : x) {
                double s = 0.0;
                for (double c : model.coeffs) s += c * draw(rng);
                v = s;
            }
            return empirical_from(x, seed);
        }
        case SequenceModel::Kind::finite_markov: {
            const auto pi = stationary_distribution(model.transition);
            const auto g = centered_values(model, pi);
            return tabulate([&](double p) { return finite_lp(pi, g, p); });
        }
        case SequenceModel::Kind::user_samples: {
            double mean = 0.0;
            for (double v : model.samples) mean += v;
            mean /= static_cast<double>(model.samples.size());
            std::vector<double> x;
            x.reserve(model.samples.size());
            for (double v : model.samples) x.push_back(v - mean);
            return empirical_from(x, model.seed);
        }
    }
    throw DomainError("unknown sequence model");
}

}  // namespace glscov
