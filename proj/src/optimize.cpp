#include "glscov/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace glscov {

namespace {

constexpr double kGolden = 0.6180339887498949;

double sanitize(double v) { return std::isnan(v) ? -kInf : v; }

double open_margin(const Interval& d) { return 1e-12 * std::max(d.hi - d.lo, 1e-300); }

std::vector<double> axis(double lo, double hi, int n) {
    std::vector<double> xs;
    if (!(hi > lo) || n < 2) {
        xs.push_back(lo);
        return xs;
    }
    xs.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        xs.push_back(i == n - 1 ? hi : lo + (hi - lo) * (static_cast<double>(i) / (n - 1)));
    }
    return xs;
}

Max1D golden(const std::function<double(double)>& f, double a, double b, int iters) {
    Max1D best;
    auto consider = [&](double x, double v) {
        if (v > best.value) {
            best.value = v;
            best.x = x;
        }
    };
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = sanitize(f(c));
    double fd = sanitize(f(d));
    consider(c, fc);
    consider(d, fd);
    for (int it = 0; it < iters; ++it) {
        if (b - a <= 1e-16 * std::max({1.0, std::abs(a), std::abs(b)})) break;
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = sanitize(f(c));
            consider(c, fc);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = sanitize(f(d));
            consider(d, fd);
        }
    }
    return best;
}

bool feasible(double u, double w, Region region, double margin) {
    return region == Region::rectangle || u + w <= 1.0 - margin;
}

struct RowBest {
    double value = -kInf;
    double u = 0.0;
    double w = 0.0;
};

RowBest scan_row(const std::function<double(double, double)>& f, double u,
                 const std::vector<double>& ws, Region region, double margin) {
    RowBest best;
    for (double w : ws) {
        if (!feasible(u, w, region, margin)) continue;
        const double v = sanitize(f(u, w));
        if (v > best.value) best = {v, u, w};
    }
    return best;
}

Max2D reduce_rows(const std::vector<RowBest>& rows) {
    Max2D best;
    for (const auto& r : rows) {
        if (r.value > best.value) best = {r.u, r.w, r.value};
    }
    return best;
}

}  // namespace

Interval search_range_u(const Interval& d) {
    Interval r = d;
    if (!d.lo_closed) {
        r.lo = d.lo == 0.0 ? std::min(1.0 / kPMax, d.hi) : d.lo + open_margin(d);
        r.lo_closed = true;
    }
    if (!d.hi_closed) {
        r.hi = d.hi - open_margin(d);
        r.hi_closed = true;
    }
    return r;
}

Interval search_range(const Interval& d) {
    Interval r = d;
    if (!d.lo_closed) r.lo = d.lo + open_margin(d);
    if (!d.hi_closed) r.hi = d.hi - open_margin(d);
    r.lo_closed = r.hi_closed = true;
    return r;
}

Max1D maximize_1d(const std::function<double(double)>& f, const Interval& range,
                  const OptimizerOptions& opt) {
    const double lo = range.lo;
    const double hi = range.hi;
    Max1D out;
    if (hi < lo) return out;
    if (hi == lo) {
        out.x = lo;
        out.value = sanitize(f(lo));
        out.at_lo = out.at_hi = true;
        return out;
    }

    std::vector<double> xs = axis(lo, hi, std::max(opt.grid_1d, 3));
    const double width = hi - lo;
    for (int j = 4; j <= 56; ++j) {
        const double off = width * std::pow(10.0, -j / 4.0);
        xs.push_back(lo + off);
        xs.push_back(hi - off);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::size_t best_i = xs.size();
    double best_v = -kInf;
    for (std::size_t k = xs.size(); k-- > 0;) {
        const double v = sanitize(f(xs[k]));
        if (v > best_v) {
            best_v = v;
            best_i = k;
        }
    }
    if (best_i == xs.size()) return out;

    out.x = xs[best_i];
    out.value = best_v;
    const double a = xs[best_i == 0 ? 0 : best_i - 1];
    const double b = xs[std::min(best_i + 1, xs.size() - 1)];
    if (b > a) {
        const Max1D refined = golden(f, a, b, opt.max_golden_iters);
        if (refined.value > out.value) {
            out.x = refined.x;
            out.value = refined.value;
        }
    }
    out.at_lo = out.x == lo;
    out.at_hi = out.x == hi;
    return out;
}

Max2D grid_scan_2d_serial(const std::function<double(double, double)>& f,
                          const Interval& u_range, const Interval& w_range, Region region,
                          int n, double margin) {
    const auto us = axis(u_range.lo, u_range.hi, n);
    const auto ws = axis(w_range.lo, w_range.hi, n);
    std::vector<RowBest> rows(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) rows[i] = scan_row(f, us[i], ws, region, margin);
    return reduce_rows(rows);
}

Max2D grid_scan_2d_parallel(const std::function<double(double, double)>& f,
                            const Interval& u_range, const Interval& w_range, Region region,
                            int n, double margin) {
    const auto us = axis(u_range.lo, u_range.hi, n);
    const auto ws = axis(w_range.lo, w_range.hi, n);
    std::vector<RowBest> rows(us.size());
    const long count = static_cast<long>(us.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < count; ++i) rows[i] = scan_row(f, us[i], ws, region, margin);
    return reduce_rows(rows);
}

Max2D maximize_2d(const std::function<double(double, double)>& f, const Interval& u_range,
                  const Interval& w_range, Region region, const OptimizerOptions& opt) {
    if (u_range.hi < u_range.lo || w_range.hi < w_range.lo) return {};
    const int n = std::max(opt.grid_2d, 3);
    const double margin = opt.triangle_margin;
    Max2D best = opt.exec == Exec::parallel
                     ? grid_scan_2d_parallel(f, u_range, w_range, region, n, margin)
                     : grid_scan_2d_serial(f, u_range, w_range, region, n, margin);
    if (best.value == -kInf) return best;

    const int m = std::max(opt.zoom_grid, 5);
    double hu = 2.0 * (u_range.hi - u_range.lo) / (n - 1);
    double hw = 2.0 * (w_range.hi - w_range.lo) / (n - 1);
    for (int level = 0; level < 60; ++level) {
        if (hu <= 1e-15 && hw <= 1e-15) break;
        const double ulo = std::max(u_range.lo, best.u - hu);
        const double uhi = std::min(u_range.hi, best.u + hu);
        const double wlo = std::max(w_range.lo, best.w - hw);
        const double whi = std::min(w_range.hi, best.w + hw);
        const auto us = axis(ulo, uhi, m);
        const auto ws = axis(wlo, whi, m);
        for (double u : us) {
            const RowBest r = scan_row(f, u, ws, region, margin);
            if (r.value > best.value) best = {r.u, r.w, r.value};
        }
        hu = 4.0 * hu / (m - 1);
        hw = 4.0 * hw / (m - 1);
    }

    // The zoom grid tracks a maximum on the hypotenuse poorly (feasible grid
    // points form a staircase), so search the edge u + w = 1 - margin directly.
    if (region == Region::triangle) {
        const double c = 1.0 - margin;
        const Interval edge{std::max(u_range.lo, c - w_range.hi), std::min(u_range.hi, c - w_range.lo)};
        if (edge.lo <= edge.hi) {
            const Max1D e = maximize_1d([&](double u) { return f(u, c - u); }, edge, opt);
            if (e.value > best.value) best = {e.x, c - e.x, e.value};
        }
    }
    return best;
}

}  // namespace glscov
