#pragma once

// Time-series container shared by the exact propagator and the eliminated
// effective propagator.

#include <string>
#include <vector>

#include "adel/liouville.hpp"

namespace adel {

struct Trajectory {
    std::vector<double> times;        // ascending, rescaled units
    std::vector<DensityVec> states;
    std::vector<std::string> observable_names;
    std::vector<std::vector<double>> observable_series;  // one per name

    const std::vector<double>* series(const std::string& name) const;
};

/// exp(gen * t_k) v0 for each time; exponentials are computed once per unique
/// time gap and reused, so uniform grids cost a single expm.
std::vector<std::vector<cplx>> propagate_states(const ComplexMatrix& gen,
                                                std::span<const cplx> v0,
                                                std::span<const double> times);

}  // namespace adel
