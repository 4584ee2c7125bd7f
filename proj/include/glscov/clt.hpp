#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "glscov/optimize.hpp"
#include "glscov/parallel.hpp"
#include "glscov/psi.hpp"

namespace glscov {

// Mixing profile k -> (alpha(k), beta(k)) for k = 0..K, with the natural
// function of the sequence. Entries at k = 0, 1 are stored but unused.
struct CltProfile {
    std::vector<double> alpha;
    std::vector<double> beta;
    PsiFunction psi = PsiFunction::power(1.0);
    // computed on single-coordinate fields: a lower bound on the past/future coefficients
    bool lower_bound = false;

    int K() const { return static_cast<int>(alpha.size()) - 1; }
    void validate() const;
};

CltProfile profile_from_functions(const std::function<double(int)>& alpha,
                                  const std::function<double(int)>& beta, const PsiFunction& psi,
                                  int K);

// y(k) = alpha(k) / phi[psi](alpha(k))^2 for k = 2..K; y = 0 where alpha = 0.
// Returned vector is indexed by k (size K + 1).
std::vector<double> y_sequence(const CltProfile& profile, const OptimizerOptions& opt = {});
// z(k) = 1 / phi[zeta[psi, psi]](1 / beta(k)); z = 0 where beta = 0.
std::vector<double> z_sequence(const CltProfile& profile, const OptimizerOptions& opt = {});

enum class Verdict { summable_evidence, divergent_evidence, inconclusive };

std::string to_string(Verdict v);

struct SummabilityReport {
    int K = 0;
    double partial_sum = 0.0;  // S_K = sum_{k=2}^{K}
    double half_sum = 0.0;     // S_{K/2}
    double tail_ratio = 0.0;   // (S_K - S_{K/2}) / S_{K/2}
    double block_ratio = 0.0;  // last dyadic block sum over the previous one
    Verdict verdict = Verdict::inconclusive;
    std::string note;
};

// Evidence only: a finite horizon cannot certify convergence of a series.
// seq is indexed by k; entries below k = 2 are ignored. Needs K >= 16.
SummabilityReport summability_report(std::span<const double> seq, int K);

// Smallest k* >= 2 with seq non-increasing on [k*, K] (K + 1 if none).
int eventually_nonincreasing_from(std::span<const double> seq);

enum class Innovation { normal, rademacher, uniform };

std::string to_string(Innovation i);

struct SequenceModel {
    enum class Kind { m_dependent, finite_markov, user_samples };
    Kind kind = Kind::m_dependent;
    // m-dependent: gamma(i) = sum_j coeffs[j] eps(i + j), eps i.i.d. with unit variance
    std::vector<double> coeffs{1.0};
    Innovation innovation = Innovation::normal;
    // finite Markov chain started at stationarity; gamma(i) = values[X_i] - mean
    std::vector<std::vector<double>> transition;
    std::vector<double> state_values;
    // observed series
    std::vector<double> samples;
    std::uint64_t seed = 0;

    void validate() const;
};

std::string to_string(SequenceModel::Kind k);

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& transition);

// Exact Var(S(n)) where available (m-dependent, finite Markov).
std::optional<double> exact_sigma_n(const SequenceModel& model, std::uint64_t n);

struct SigmaRow {
    std::uint64_t n = 0;
    std::uint64_t replications = 0;
    double mean = 0.0;
    double variance = 0.0;  // Sigma(n) estimate
    double se = 0.0;        // standard error of the variance estimate
    std::optional<double> exact;
};

// Monte Carlo estimate of Sigma(n) = Var(n^{-1/2} sum gamma(i)) over R
// independent paths per n. For user samples, non-overlapping blocks of length n
// of the observed series stand in for the replications.
std::vector<SigmaRow> sigma_n_estimate(const SequenceModel& model,
                                       std::span<const std::uint64_t> n_grid,
                                       std::uint64_t replications, std::uint64_t seed,
                                       Exec exec = Exec::parallel);

// alpha(k), beta(k) of sigma(gamma(0)) and sigma(gamma(k)) from the exact joint
// law of (X_0, X_k). Flagged as a lower bound.
CltProfile markov_mixing_profile(const SequenceModel& model, int K);

// Profile of an m-dependent model: zero beyond lag m, the trivial values
// alpha <= 1/4, beta <= 1 up to lag m.
CltProfile m_dependent_profile(const SequenceModel& model, int K);

// Natural function p -> |gamma(0)|_p: exact for normal innovations and finite
// chains, empirical (from seeded draws or the observed samples) otherwise.
PsiFunction natural_psi(const SequenceModel& model);

}  // namespace glscov
