#pragma once

#include <functional>

#include "glscov/parallel.hpp"
#include "glscov/psi.hpp"

namespace glscov {

struct OptimizerOptions {
    int grid_1d = 2048;
    int grid_2d = 512;
    int zoom_grid = 17;     // points per axis in each 2-D refinement window
    int max_golden_iters = 200;
    // feasible set of the triangle T in (u, w) = (1/p, 1/q) is u + w <= 1 - margin
    double triangle_margin = 1e-9;
    bool cross_check = true;  // evaluate both routes where two exist
    Exec exec = Exec::parallel;

    // Coarser settings for inner loops of verification campaigns. Every sup is
    // still evaluated at genuine feasible points, so bounds stay conservative.
    static OptimizerOptions fast() {
        OptimizerOptions o;
        o.grid_1d = 96;
        o.grid_2d = 48;
        o.cross_check = false;
        o.exec = Exec::serial;
        return o;
    }
};

struct Max1D {
    double x = 0.0;
    double value = -kInf;  // objective at x
    bool at_lo = false;
    bool at_hi = false;
};

// Finite search range for an interval: open ends are pulled in by a relative
// margin and an open end at u = 0 (p = inf) is capped at 1 / kPMax.
Interval search_range_u(const Interval& u_domain);
Interval search_range(const Interval& domain);

// sup of f over a finite closed range: dense grid (with geometric clustering
// toward both ends) followed by golden-section refinement of the best cell.
// Ties on the grid go to the largest x. -inf and NaN count as infeasible.
Max1D maximize_1d(const std::function<double(double)>& f, const Interval& range,
                  const OptimizerOptions& opt);

enum class Region { rectangle, triangle };

struct Max2D {
    double u = 0.0;
    double w = 0.0;
    double value = -kInf;
};

// sup of f(u, w) over a product of closed ranges, optionally intersected with
// the triangle u + w <= 1 - margin. Coarse grid scan (parallel over rows when
// opt.exec == parallel) followed by nested zoom grids around the incumbent.
Max2D maximize_2d(const std::function<double(double, double)>& f, const Interval& u_range,
                  const Interval& w_range, Region region, const OptimizerOptions& opt);

// Serial reference for the coarse scan of maximize_2d.
Max2D grid_scan_2d_serial(const std::function<double(double, double)>& f,
                          const Interval& u_range, const Interval& w_range, Region region,
                          int n, double margin);
// OpenMP version; must return exactly what the serial scan returns.
Max2D grid_scan_2d_parallel(const std::function<double(double, double)>& f,
                            const Interval& u_range, const Interval& w_range, Region region,
                            int n, double margin);

}  // namespace glscov
