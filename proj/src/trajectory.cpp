#include "adel/trajectory.hpp"

#include <map>

namespace adel {

const std::vector<double>* Trajectory::series(const std::string& name) const {
    for (std::size_t i = 0; i < observable_names.size(); ++i)
        if (observable_names[i] == name) return &observable_series[i];
    return nullptr;
}

std::vector<std::vector<cplx>> propagate_states(const ComplexMatrix& gen,
                                                std::span<const cplx> v0,
                                                std::span<const double> times) {
    if (times.empty()) return {};
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (times[k] < 0.0 || (k > 0 && times[k] < times[k - 1]))
            throw std::invalid_argument("propagate_states: times must be ascending and >= 0");
    }
    std::map<double, ComplexMatrix> step_cache;
    auto step_for = [&](double dt) -> const ComplexMatrix& {
        auto it = step_cache.find(dt);
        if (it == step_cache.end())
            it = step_cache.emplace(dt, expm(cplx{dt, 0.0} * gen)).first;
        return it->second;
    };
    std::vector<std::vector<cplx>> out;
    out.reserve(times.size());
    std::vector<cplx> v(v0.begin(), v0.end());
    double prev = 0.0;
    for (double t : times) {
        const double dt = t - prev;
        if (dt > 0.0) v = step_for(dt) * std::span<const cplx>(v);
        prev = t;
        out.push_back(v);
    }
    return out;
}

}  // namespace adel
