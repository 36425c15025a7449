#include "adel/simulate.hpp"

#include <algorithm>
#include <cmath>

namespace adel {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

Trajectory exact_propagate(const SuperOp& l, const DensityVec& rho0,
                           std::span<const double> times) {
    require(rho0.dim == l.dim, "exact_propagate: state/generator dimension mismatch");
    require(rho0.ordering == l.ordering, "exact_propagate: ordering mismatch");
    const auto vecs = propagate_states(l.matrix, rho0.vec, times);
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(vecs.size());
    for (const auto& v : vecs)
        traj.states.push_back(DensityVec{v, rho0.dim, rho0.ordering, l.space});
    return traj;
}

void add_observables(Trajectory& traj, std::span<const Observable> obs) {
    for (const Observable& o : obs) {
        require(o.op.is_square(), "add_observables: operator not square");
        std::vector<double> series;
        series.reserve(traj.states.size());
        const bool hermitian = is_hermitian(o.op, 1e-12);
        const std::vector<cplx> left = vec(adjoint(o.op));
        for (const DensityVec& st : traj.states) {
            const DensityVec flat =
                st.ordering == Ordering::grouped ? grouped_reorder(st) : st;
            require(o.op.rows() == flat.dim, "add_observables: dimension mismatch");
            cplx val{0.0, 0.0};
            for (std::size_t i = 0; i < flat.vec.size(); ++i)
                val += std::conj(left[i]) * flat.vec[i];
            if (hermitian && std::abs(val.imag()) > 1e-8)
                throw NumericalError("add_observables: Hermitian expectation "
                                     "grew an imaginary part > 1e-8");
            series.push_back(val.real());
        }
        traj.observable_names.push_back(o.name);
        traj.observable_series.push_back(std::move(series));
    }
}

Trajectory reduce_trajectory_to_a(const Trajectory& traj) {
    Trajectory out;
    out.times = traj.times;
    out.states.reserve(traj.states.size());
    for (const DensityVec& st : traj.states) out.states.push_back(partial_trace_b(st));
    return out;
}

double trace_distance(const DensityVec& a, const DensityVec& b) {
    require(a.dim == b.dim, "trace_distance: dimension mismatch");
    const DensityVec af = a.ordering == Ordering::grouped ? grouped_reorder(a) : a;
    const DensityVec bf = b.ordering == Ordering::grouped ? grouped_reorder(b) : b;
    const ComplexMatrix diff = unvec(af.vec, af.dim) - unvec(bf.vec, bf.dim);
    const SvdFactors f = svd(diff);
    double s = 0.0;
    for (double v : f.singular_values) s += v;
    return 0.5 * s;
}

ComparisonReport compare(const Trajectory& exact_reduced, const Trajectory& approx) {
    require(exact_reduced.times.size() == approx.times.size(),
            "compare: time grids differ in length");
    for (std::size_t k = 0; k < approx.times.size(); ++k)
        require(exact_reduced.times[k] == approx.times[k],
                "compare: time grids differ");
    ComparisonReport report;
    for (std::size_t i = 0; i < exact_reduced.observable_names.size(); ++i) {
        const std::string& name = exact_reduced.observable_names[i];
        const std::vector<double>* other = approx.series(name);
        if (other == nullptr) continue;
        const std::vector<double>& mine = exact_reduced.observable_series[i];
        ObservableDeviation dev;
        dev.name = name;
        for (std::size_t k = 0; k < mine.size(); ++k)
            dev.sup = std::max(dev.sup, std::abs(mine[k] - (*other)[k]));
        dev.terminal = mine.empty() ? 0.0 : std::abs(mine.back() - other->back());
        report.deviations.push_back(std::move(dev));
    }
    if (!exact_reduced.states.empty() &&
        exact_reduced.states.size() == approx.states.size()) {
        report.trace_distance.reserve(approx.states.size());
        for (std::size_t k = 0; k < approx.states.size(); ++k) {
            const double td =
                trace_distance(exact_reduced.states[k], approx.states[k]);
            report.trace_distance.push_back(td);
            report.sup_trace_distance = std::max(report.sup_trace_distance, td);
        }
    }
    return report;
}

ScanTable convergence_scan(
    const std::function<std::pair<Trajectory, Trajectory>(double)>& runner,
    std::span<const double> couplings) {
    require(!couplings.empty(), "convergence_scan: no couplings");
    for (double c : couplings)
        require(c > 0.0, "convergence_scan: couplings must be positive");
    ScanTable table;
    for (double c : couplings) {
        auto [exact_reduced, approx] = runner(c);
        const ComparisonReport rep = compare(exact_reduced, approx);
        table.rows.push_back(ScanRow{c, rep.deviations});
    }
    if (!table.rows.empty()) {
        for (const auto& dev : table.rows.front().deviations)
            table.observable_names.push_back(dev.name);
        for (std::size_t i = 0; i < table.observable_names.size(); ++i) {
            bool ok = true;
            for (std::size_t r = 1; r < table.rows.size(); ++r) {
                if (i < table.rows[r].deviations.size() &&
                    table.rows[r].deviations[i].sup >
                        table.rows[r - 1].deviations[i].sup + 1e-15)
                    ok = false;
            }
            table.monotone_non_increasing.push_back(ok);
        }
    }
    return table;
}

}  // namespace adel
