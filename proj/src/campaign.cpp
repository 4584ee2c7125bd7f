#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>

#include "glscov/finite_oracle.hpp"

namespace glscov {

void CampaignConfig::validate() const {
    if (max_atoms < 2) throw DomainError("max_atoms must be at least 2");
    if (max_blocks < 1 || max_blocks > kMaxBlocks) throw DomainError("max_blocks must lie in [1, 12]");
    if (p_grid.empty()) throw DomainError("p grid must be non-empty");
    for (double p : p_grid) {
        if (std::isnan(p) || p < 1.0) throw DomainError("p grid values must be >= 1");
    }
    if (families.empty()) throw DomainError("at least one psi family is needed");
    if (norm_grid < 8) throw DomainError("norm_grid must be at least 8");
    if (!(slack >= 0.0)) throw DomainError("slack must be non-negative");
}

namespace {

using Rng = std::mt19937_64;

std::vector<double> dirichlet(Rng& rng, int n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> p(static_cast<std::size_t>(n));
    double total = 0.0;
    for (auto& x : p) {
        x = e(rng) + 1e-12;
        total += x;
    }
    for (auto& x : p) x /= total;
    // push the rounding residue onto the largest atom
    double s = 0.0;
    for (double x : p) s += x;
    *std::max_element(p.begin(), p.end()) += 1.0 - s;
    return p;
}

SigmaField random_partition(Rng& rng, int atoms, int blocks) {
    std::vector<int> order(static_cast<std::size_t>(atoms));
    for (int i = 0; i < atoms; ++i) order[static_cast<std::size_t>(i)] = i;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_int_distribution<int> pick(0, blocks - 1);
    SigmaField f;
    f.block_count = blocks;
    f.block_of.assign(static_cast<std::size_t>(atoms), 0);
    for (int i = 0; i < atoms; ++i) {
        f.block_of[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i < blocks ? i : pick(rng);
    }
    return f;
}

RandomVar block_values(Rng& rng, const SigmaField& f) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> per_block(static_cast<std::size_t>(f.block_count));
    for (auto& v : per_block) v = u(rng);
    RandomVar x;
    for (int b : f.block_of) x.values.push_back(per_block[static_cast<std::size_t>(b)]);
    return x;
}

void center(const FiniteProbSpace& space, RandomVar& x) {
    const double m = exact_mean(space, x);
    for (auto& v : x.values) v -= m;
}

// c_1 + ... + c_n = total with every c_i >= 1
std::vector<int> composition(Rng& rng, int n, int total) {
    std::vector<int> cuts;
    std::vector<int> pool(static_cast<std::size_t>(total - 1));
    for (int i = 0; i < total - 1; ++i) pool[static_cast<std::size_t>(i)] = i + 1;
    std::shuffle(pool.begin(), pool.end(), rng);
    cuts.assign(pool.begin(), pool.begin() + (n - 1));
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> out;
    int prev = 0;
    for (int c : cuts) {
        out.push_back(c - prev);
        prev = c;
    }
    out.push_back(total - prev);
    return out;
}

FiniteInstance product_instance(Rng& rng, int max_atoms, int max_blocks) {
    std::uniform_int_distribution<int> n1d(2, std::min(3, max_blocks));
    const int n1 = n1d(rng);
    std::uniform_int_distribution<int> n2d(2, std::min(max_blocks, max_atoms / n1));
    const int n2 = n2d(rng);
    const auto a = composition(rng, n1, 32);
    const auto b = composition(rng, n2, 32);
    std::uniform_int_distribution<int> val(-8, 8);
    std::vector<double> x(static_cast<std::size_t>(n1));
    std::vector<double> y(static_cast<std::size_t>(n2));
    for (auto& v : x) v = val(rng) / 8.0;
    for (auto& v : y) v = val(rng) / 8.0;

    FiniteInstance inst;
    inst.kind = "product";
    inst.F.block_count = n1;
    inst.G.block_count = n2;
    for (int i = 0; i < n1; ++i) {
        for (int j = 0; j < n2; ++j) {
            inst.space.probs.push_back((a[static_cast<std::size_t>(i)] / 32.0) * (b[static_cast<std::size_t>(j)] / 32.0));
            inst.F.block_of.push_back(i);
            inst.G.block_of.push_back(j);
            inst.xi.values.push_back(x[static_cast<std::size_t>(i)]);
            inst.eta.values.push_back(y[static_cast<std::size_t>(j)]);
        }
    }
    return inst;
}

std::string label(const char* name, double p, double q) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(p=%g,q=%g)", name, p, q);
    return buf;
}

std::string label(const char* name, std::size_t i, std::size_t j) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%s(psi=%zu,nu=%zu)", name, i, j);
    return buf;
}

std::string theorem_of(const std::string& label) { return label.substr(0, label.find('(')); }

}  // namespace

FiniteInstance make_instance(const CampaignConfig& config, std::uint64_t index) {
    Rng rng(derive_seed(config.seed, index));
    const bool product_ok = config.max_atoms >= 4 && config.max_blocks >= 2;
    if (index % 10 == 0 && product_ok) return product_instance(rng, config.max_atoms, config.max_blocks);

    FiniteInstance inst;
    inst.kind = index % 10 == 1 ? "same_field" : "general";
    std::uniform_int_distribution<int> nd(2, config.max_atoms);
    const int n = nd(rng);
    inst.space.probs = dirichlet(rng, n);
    std::uniform_int_distribution<int> kd(1, std::min(config.max_blocks, n));
    inst.F = random_partition(rng, n, kd(rng));
    inst.G = inst.kind == "same_field" ? inst.F : random_partition(rng, n, kd(rng));
    inst.xi = block_values(rng, inst.F);
    inst.eta = block_values(rng, inst.G);
    std::bernoulli_distribution coin(0.5);
    if (coin(rng)) {
        center(inst.space, inst.xi);
        center(inst.space, inst.eta);
    }
    return inst;
}

InstanceResult evaluate_instance(const CampaignConfig& config, const FiniteInstance& inst,
                                 std::uint64_t index) {
    InstanceResult r;
    r.index = index;
    r.kind = inst.kind;
    r.atoms = static_cast<int>(inst.space.size());
    const MixingPair mp = mixing_coefficients(inst.space, inst.F, inst.G);
    r.alpha = mp.alpha;
    r.beta = mp.beta;
    r.cov = exact_cov(inst.space, inst.xi, inst.eta);
    const double c = std::abs(r.cov);

    OptimizerOptions opt = config.opt;
    opt.exec = Exec::serial;
    OptimizerOptions norm_opt = opt;
    norm_opt.grid_1d = config.norm_grid;

    const auto consider = [&](const BoundReport& b, const std::string& name) {
        if (!b.feasible) {
            ++r.infeasible_skipped;
            return;
        }
        ++r.bounds_evaluated;
        if (c > b.value + config.slack) r.violated.push_back(name);
        if (b.value < r.tightest_bound) {
            r.tightest_bound = b.value;
            r.tightest = name;
        }
    };

    const auto& grid = config.p_grid;
    std::vector<double> nx(grid.size());
    std::vector<double> ny(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        nx[i] = exact_lp(inst.space, inst.xi, grid[i]);
        ny[i] = exact_lp(inst.space, inst.eta, grid[i]);
    }
    for (std::size_t i = 0; i < grid.size(); ++i)
        for (std::size_t j = 0; j < grid.size(); ++j)
            consider(davydov_bound(r.alpha, grid[i], grid[j], nx[i], ny[j]),
                     label("davydov", grid[i], grid[j]));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double p = grid[i];
        if (!(p > 1.0)) continue;
        const double q = conjugate_exponent(p);
        const double nq = exact_lp(inst.space, inst.eta, q);
        consider(ibragimov_bound(r.beta, p, nx[i], nq), label("ibragimov", p, q));
        consider(holder_bound(p, nx[i], nq), label("holder", p, q));
    }

    const auto& fam = config.families;
    std::vector<double> gx(fam.size());
    std::vector<double> gy(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        gx[i] = finite_gls_norm(inst.space, inst.xi, fam[i], norm_opt).value;
        gy[i] = finite_gls_norm(inst.space, inst.eta, fam[i], norm_opt).value;
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = 0; j < fam.size(); ++j) {
            consider(gls_strong_bound(fam[i], fam[j], r.beta, gx[i], gy[j], opt),
                     label("gls_strong", i, j));
            consider(gls_uniform_bound(fam[i], fam[j], r.alpha, gx[i], gy[j], opt),
                     label("gls_uniform", i, j));
        }
        consider(gls_identical_bound(fam[i], r.alpha, gx[i], gy[i], opt), label("gls_identical", i, i));
    }

    if (r.tightest_bound == 0.0) {
        r.ratio = c <= config.slack ? 0.0 : kInf;
    } else if (r.tightest_bound < kInf) {
        r.ratio = c / r.tightest_bound;
    }
    return r;
}

CampaignReport verify_campaign(const CampaignConfig& config, Exec exec) {
    config.validate();
    const auto n = static_cast<long>(config.instances);
    std::vector<InstanceResult> rows(static_cast<std::size_t>(n));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    const auto run = [&](long i) {
        try {
            const auto idx = static_cast<std::uint64_t>(i);
            rows[static_cast<std::size_t>(i)] = evaluate_instance(config, make_instance(config, idx), idx);
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 4)
        for (long i = 0; i < n; ++i) run(i);
    } else {
        for (long i = 0; i < n; ++i) run(i);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    CampaignReport rep;
    rep.instances = config.instances;
    rep.seed = config.seed;
    for (const auto& row : rows) {
        rep.violations += row.violated.size();
        for (const auto& v : row.violated) ++rep.violations_by_theorem[theorem_of(v)];
        rep.bounds_evaluated += static_cast<std::uint64_t>(row.bounds_evaluated);
        rep.infeasible_skipped += static_cast<std::uint64_t>(row.infeasible_skipped);
        if (row.kind == "product") {
            ++rep.product_instances;
            if (row.alpha != 0.0 || row.beta != 0.0 || row.cov != 0.0) ++rep.product_nonzero;
        }
        if (row.alpha > row.beta) ++rep.alpha_gt_beta;
        if (row.alpha == 0.0 && std::abs(row.cov) > config.slack) ++rep.zero_alpha_nonzero_cov;
        if (row.ratio > rep.max_ratio) {
            rep.max_ratio = row.ratio;
            rep.tightest_index = row.index;
            rep.tightest_theorem = row.tightest;
        }
    }
    rep.rows = std::move(rows);
    return rep;
}

double sharpness_ratio(const FiniteProbSpace& space, const SigmaField& field, const RandomVar& xi,
                       const RandomVar& eta, double p, double q) {
    const double a = alpha_coefficient(space, field, field);
    if (a == 0.0) return std::nan("");
    const double e = 1.0 - 1.0 / p - 1.0 / q;
    const double den = std::pow(a, e) * exact_lp(space, xi, p) * exact_lp(space, eta, q);
    if (den == 0.0) return 0.0;
    return std::abs(exact_cov(space, xi, eta)) / den;
}

namespace {

SharpnessWitness make_witness(const FiniteProbSpace& space, const SigmaField& field,
                              const RandomVar& xi, const RandomVar& eta, double p, double q) {
    SharpnessWitness w;
    w.space = space;
    w.field = field;
    w.xi = xi;
    w.eta = eta;
    w.alpha = alpha_coefficient(space, field, field);
    w.cov = exact_cov(space, xi, eta);
    w.norm_p = exact_lp(space, xi, p);
    w.norm_q = exact_lp(space, eta, q);
    w.ratio = sharpness_ratio(space, field, xi, eta, p, q);
    return w;
}

}  // namespace

SharpnessResult sharpness_probe(double p, double q, std::uint64_t budget, std::uint64_t seed) {
    if (!(p >= 1.0) || !(q >= 1.0)) throw DomainError("sharpness probe needs p, q >= 1");
    if (!(1.0 / p + 1.0 / q < 1.0)) throw DomainError("sharpness probe needs 1/p + 1/q < 1");
    SharpnessResult out;
    out.p = p;
    out.q = q;
    out.best = make_witness(FiniteProbSpace{{0.5, 0.5}}, SigmaField::discrete(2),
                            RandomVar{{1.0, -1.0}}, RandomVar{{1.0, -1.0}}, p, q);
    out.evaluated = 1;

    Rng rng(derive_seed(seed, 0x5eed));
    std::normal_distribution<double> jitter(0.0, 0.1);
    std::uniform_int_distribution<int> nd(2, 6);
    for (std::uint64_t it = 0; it < budget; ++it) {
        FiniteProbSpace space;
        SigmaField field;
        std::vector<double> xb;
        std::vector<double> yb;
        if (it % 2 == 0) {
            const int n = nd(rng);
            space.probs = dirichlet(rng, n);
            std::uniform_int_distribution<int> kd(1, std::min(n, 4));
            field = random_partition(rng, n, kd(rng));
            std::uniform_real_distribution<double> u(-1.0, 1.0);
            for (int b = 0; b < field.block_count; ++b) {
                xb.push_back(u(rng));
                yb.push_back(u(rng));
            }
        } else {
            const auto& b = out.best;
            space = b.space;
            field = b.field;
            double total = 0.0;
            for (auto& pr : space.probs) {
                pr *= std::exp(jitter(rng));
                total += pr;
            }
            for (auto& pr : space.probs) pr /= total;
            xb.assign(static_cast<std::size_t>(field.block_count), 0.0);
            yb.assign(static_cast<std::size_t>(field.block_count), 0.0);
            for (std::size_t k = 0; k < space.size(); ++k) {
                xb[static_cast<std::size_t>(field.block_of[k])] = b.xi.values[k];
                yb[static_cast<std::size_t>(field.block_of[k])] = b.eta.values[k];
            }
            for (auto& v : xb) v += jitter(rng);
            for (auto& v : yb) v += jitter(rng);
        }
        double s = 0.0;
        for (double x : space.probs) s += x;
        *std::max_element(space.probs.begin(), space.probs.end()) += 1.0 - s;
        RandomVar xi;
        RandomVar eta;
        for (int blk : field.block_of) {
            xi.values.push_back(xb[static_cast<std::size_t>(blk)]);
            eta.values.push_back(yb[static_cast<std::size_t>(blk)]);
        }
        ++out.evaluated;
        const double ratio = sharpness_ratio(space, field, xi, eta, p, q);
        if (std::isnan(ratio)) {
            ++out.skipped_degenerate;
            continue;
        }
        if (ratio > out.best.ratio) out.best = make_witness(space, field, xi, eta, p, q);
    }
    return out;
}

}  // namespace glscov
