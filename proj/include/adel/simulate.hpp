#pragma once

// Exact reference propagation of the full Liouvillian, observable
// extraction, and quantitative comparison between exact and eliminated
// dynamics.

#include <functional>
#include <string>

#include "adel/liouville.hpp"
#include "adel/trajectory.hpp"

namespace adel {

/// state(t) = expm(L t) rho0; exponentials are cached per unique time gap.
Trajectory exact_propagate(const SuperOp& l, const DensityVec& rho0,
                           std::span<const double> times);

struct Observable {
    std::string name;
    ComplexMatrix op;  // on the state's own space (Hermitian for real series)
};

/// <O>(t) = <<vec(O^dag)|rho(t)>>; the real part is stored, and for
/// Hermitian O an imaginary residue above 1e-8 throws.
void add_observables(Trajectory& traj, std::span<const Observable> obs);

/// Partial-trace every state of a GROUPED full-space trajectory down to A.
Trajectory reduce_trajectory_to_a(const Trajectory& traj);

struct ObservableDeviation {
    std::string name;
    double sup = 0.0;       // max_t |exact - approx|
    double terminal = 0.0;  // deviation at the last time
};

struct ComparisonReport {
    std::vector<ObservableDeviation> deviations;
    std::vector<double> trace_distance;  // 1/2 ||rho1 - rho2||_1 per time
    double sup_trace_distance = 0.0;
};

/// Compare two trajectories on identical time grids (the exact one already
/// reduced to A). Observables are matched by name.
ComparisonReport compare(const Trajectory& exact_reduced, const Trajectory& approx);

/// 1/2 ||rho1 - rho2||_1 between two vectorized states of equal dimension.
double trace_distance(const DensityVec& a, const DensityVec& b);

struct ScanRow {
    double coupling = 0.0;
    std::vector<ObservableDeviation> deviations;
};

struct ScanTable {
    std::vector<ScanRow> rows;
    // per observable: true when the sup deviations are non-increasing down
    // the coupling column (violations are flagged, not fatal)
    std::vector<std::string> observable_names;
    std::vector<bool> monotone_non_increasing;
};

/// Runs `runner` (exact-reduced, approx) per coupling value and tabulates the
/// sup deviations; couplings are expected positive descending.
ScanTable convergence_scan(
    const std::function<std::pair<Trajectory, Trajectory>(double)>& runner,
    std::span<const double> couplings);

}  // namespace adel
