#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glscov/cov_bounds.hpp"
#include "glscov/optimize.hpp"
#include "glscov/psi.hpp"

namespace glscov {

inline constexpr int kMaxBlocks = 12;

struct FiniteProbSpace {
    std::vector<double> probs;

    std::size_t size() const { return probs.size(); }
    // all probabilities > 0, summing to 1 within 1e-12
    void validate() const;
};

// Sigma-field generated by a partition of the atoms into blocks 0..block_count-1.
struct SigmaField {
    std::vector<int> block_of;
    int block_count = 1;

    void validate(std::size_t atoms) const;
    static SigmaField trivial(std::size_t atoms);
    static SigmaField discrete(std::size_t atoms);
};

struct RandomVar {
    std::vector<double> values;

    // constant on every block of the field (exact comparison)
    bool measurable(const SigmaField& field) const;
};

struct MixingPair {
    double alpha = 0.0;
    double beta = 0.0;
};

// Coefficients from the joint law of the generating partitions:
// joint[i][j] = P(block i of F and block j of G).
MixingPair mixing_from_joint(const std::vector<std::vector<double>>& joint);
// Same from deviation[i][j] = P(F_i G_j) - P(F_i) P(G_j) and the F marginal.
MixingPair mixing_from_deviation(const std::vector<std::vector<double>>& deviation,
                                 const std::vector<double>& pf);

MixingPair mixing_coefficients(const FiniteProbSpace& space, const SigmaField& F,
                               const SigmaField& G);
double alpha_coefficient(const FiniteProbSpace& space, const SigmaField& F, const SigmaField& G);
double beta_coefficient(const FiniteProbSpace& space, const SigmaField& F, const SigmaField& G);

double exact_mean(const FiniteProbSpace& space, const RandomVar& xi);
double exact_cov(const FiniteProbSpace& space, const RandomVar& xi, const RandomVar& eta);
// (E|xi|^p)^{1/p}; p = inf gives max |value|
double exact_lp(const FiniteProbSpace& space, const RandomVar& xi, double p);

// sup_p |xi|_p / psi(p), by 1-D optimization over the support of psi. For the
// extremal family the exact value |xi|_r is returned.
GlsNorm finite_gls_norm(const FiniteProbSpace& space, const RandomVar& xi, const PsiFunction& psi,
                        const OptimizerOptions& opt = {});

struct CampaignConfig {
    std::uint64_t instances = 1000;
    std::uint64_t seed = 42;
    int max_atoms = 10;
    int max_blocks = 4;
    std::vector<double> p_grid{1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 16.0, kInf};
    std::vector<PsiFunction> families{PsiFunction::power(1.0), PsiFunction::power(2.0),
                                      PsiFunction::finite_support(8.0, 1.0)};
    OptimizerOptions opt = OptimizerOptions::fast();
    int norm_grid = 256;  // grid for the 1-D GLS norm search
    double slack = 1e-12;

    void validate() const;
};

struct FiniteInstance {
    std::string kind;  // general | product | same_field
    FiniteProbSpace space;
    SigmaField F;
    SigmaField G;
    RandomVar xi;
    RandomVar eta;
};

// Instance i of a campaign; depends only on (seed, i).
FiniteInstance make_instance(const CampaignConfig& config, std::uint64_t index);

struct InstanceResult {
    std::uint64_t index = 0;
    std::string kind;
    int atoms = 0;
    double alpha = 0.0;
    double beta = 0.0;
    double cov = 0.0;
    double tightest_bound = kInf;
    std::string tightest;  // theorem label with parameters
    double ratio = 0.0;    // |cov| / tightest_bound
    int bounds_evaluated = 0;
    int infeasible_skipped = 0;
    std::vector<std::string> violated;
};

InstanceResult evaluate_instance(const CampaignConfig& config, const FiniteInstance& inst,
                                 std::uint64_t index);

struct CampaignReport {
    std::uint64_t instances = 0;
    std::uint64_t seed = 0;
    std::uint64_t violations = 0;
    std::map<std::string, std::uint64_t> violations_by_theorem;
    std::uint64_t bounds_evaluated = 0;
    std::uint64_t infeasible_skipped = 0;
    std::uint64_t product_instances = 0;
    std::uint64_t product_nonzero = 0;   // product instance with alpha, beta or cov != 0
    std::uint64_t alpha_gt_beta = 0;     // should stay 0
    std::uint64_t zero_alpha_nonzero_cov = 0;
    double max_ratio = 0.0;              // max over instances of |cov| / tightest bound
    std::uint64_t tightest_index = 0;
    std::string tightest_theorem;
    std::vector<InstanceResult> rows;
};

// Parallel map over instances (opt.exec of the config is ignored inside an
// instance; parallelism is across instances).
CampaignReport verify_campaign(const CampaignConfig& config, Exec exec = Exec::parallel);

struct SharpnessWitness {
    FiniteProbSpace space;
    SigmaField field;  // F = G
    RandomVar xi;
    RandomVar eta;
    double alpha = 0.0;
    double cov = 0.0;
    double norm_p = 0.0;
    double norm_q = 0.0;
    double ratio = 0.0;  // |cov| / (alpha^{1-1/p-1/q} |xi|_p |eta|_q)
};

struct SharpnessResult {
    double p = 0.0;
    double q = 0.0;
    std::uint64_t evaluated = 0;
    std::uint64_t skipped_degenerate = 0;
    SharpnessWitness best;
};

// Randomized search over F = G instances, seeded with the two-atom Rademacher
// witness, followed by hill climbing on the incumbent.
SharpnessResult sharpness_probe(double p, double q, std::uint64_t budget, std::uint64_t seed);

double sharpness_ratio(const FiniteProbSpace& space, const SigmaField& field, const RandomVar& xi,
                       const RandomVar& eta, double p, double q);

}  // namespace glscov
