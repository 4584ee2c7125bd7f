#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the optimizers of the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

inline constexpr double kE = 2.718281828459045235360287;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// max of f over n + 1 equally spaced points in [lo, hi]
inline double grid_max(const std::function<double(double)>& f, double lo, double hi, int n) {
    double best = -kInf;
    for (int i = 0; i <= n; ++i) best = std::max(best, f(lo + (hi - lo) * i / n));
    return best;
}

// max over a grid, then a few rounds of local grid refinement around the best point
inline double refined_max(const std::function<double(double)>& f, double lo, double hi, int n = 20000,
                          int rounds = 6) {
    double a = lo;
    double b = hi;
    double best = -kInf;
    for (int r = 0; r < rounds; ++r) {
        double arg = a;
        for (int i = 0; i <= n; ++i) {
            const double x = a + (b - a) * i / n;
            const double v = f(x);
            if (v > best) {
                best = v;
                arg = x;
            }
        }
        const double h = 2.0 * (b - a) / n;
        a = std::max(lo, arg - h);
        b = std::min(hi, arg + h);
    }
    return best;
}

// sup_{p in [lo, hi]} delta^{1/p} / psi(p), scanned in u = 1/p
inline double fundamental(const std::function<double(double)>& psi, double delta, double p_lo = 1.0,
                          double p_hi = 1e6) {
    const double u_lo = 1.0 / p_hi;
    const double u_hi = 1.0 / p_lo;
    return std::exp(refined_max(
        [&](double u) {
            const double v = psi(1.0 / u);
            if (!(v < kInf)) return -kInf;
            return u * std::log(delta) - std::log(v);
        },
        u_lo, u_hi));
}

inline double power(double m, double p) { return std::pow(p, 1.0 / m); }

inline double conj(double p) { return p / (p - 1.0); }

// (E|Z|^p)^{1/p} for Z standard normal
inline double gaussian_abs_moment(double p) {
    return std::exp((0.5 * p * std::log(2.0) + std::lgamma(0.5 * (p + 1.0)) - 0.5 * std::log(M_PI)) / p);
}

// Standard normal upper tail
inline double normal_sf(double y) { return 0.5 * std::erfc(y / std::sqrt(2.0)); }

// Atom-level enumeration: events are subsets of atoms that are unions of blocks.
struct Mixing {
    double alpha = 0.0;
    double beta = 0.0;
};

inline std::vector<unsigned> measurable_events(const std::vector<int>& block_of) {
    const unsigned n = static_cast<unsigned>(block_of.size());
    std::vector<unsigned> out;
    for (unsigned s = 0; s < (1u << n); ++s) {
        bool ok = true;
        for (unsigned i = 0; i < n && ok; ++i)
            for (unsigned j = 0; j < n && ok; ++j)
                if (block_of[i] == block_of[j] && (((s >> i) & 1u) != ((s >> j) & 1u))) ok = false;
        if (ok) out.push_back(s);
    }
    return out;
}

inline Mixing slow_mixing(const std::vector<double>& probs, const std::vector<int>& F, const std::vector<int>& G) {
    const auto ef = measurable_events(F);
    const auto eg = measurable_events(G);
    const auto prob = [&](unsigned s) {
        double t = 0.0;
        for (std::size_t i = 0; i < probs.size(); ++i)
            if ((s >> i) & 1u) t += probs[i];
        return t;
    };
    Mixing m;
    for (unsigned a : ef) {
        const double pa = prob(a);
        for (unsigned b : eg) {
            const double d = std::abs(prob(a & b) - pa * prob(b));
            m.alpha = std::max(m.alpha, d);
            if (pa > 0.0) m.beta = std::max(m.beta, d / pa);
        }
    }
    return m;
}

inline double mean(const std::vector<double>& probs, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += probs[i] * x[i];
    return s;
}

inline double lp(const std::vector<double>& probs, const std::vector<double>& x, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += probs[i] * std::pow(std::abs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace oracle
