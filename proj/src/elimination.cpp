#include "adel/elimination.hpp"

#include <cmath>

namespace adel {

namespace {

constexpr double kProjTol = 1e-12;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

SuperOp grouped_superop(ComplexMatrix m, const BipartiteSpace& s) {
    return SuperOp{std::move(m), Ordering::grouped, s.total(), s};
}

}  // namespace

ProjectorPair build_projectors(const DensityVec& rho_b, const BipartiteSpace& space) {
    space.validate();
    require(rho_b.ordering == Ordering::flat && rho_b.dim == space.dim_b,
            "build_projectors: rho_b must be FLAT on the B space");
    const cplx tr = trace_of(rho_b);
    if (std::abs(tr - cplx{1.0, 0.0}) > 1e-10)
        throw std::invalid_argument("build_projectors: rho_b not trace-normalized");

    const std::size_t db = space.dim_b;
    const std::size_t db2 = db * db;
    // P_B = |rho_b>><<1_B|
    ComplexMatrix p_b(db2, db2);
    for (std::size_t i = 0; i < db2; ++i)
        for (std::size_t b = 0; b < db; ++b) p_b(i, b * db + b) = rho_b.vec[i];
    ComplexMatrix q_b = ComplexMatrix::identity(db2) - p_b;

    const std::size_t da2 = space.dim_a * space.dim_a;
    ProjectorPair pair{rho_b,
                       grouped_superop(kron(ComplexMatrix::identity(da2), p_b), space),
                       grouped_superop(kron(ComplexMatrix::identity(da2), q_b), space),
                       std::move(p_b),
                       std::move(q_b),
                       space};
    pair.rho_b.space = space;

    const ComplexMatrix& p = pair.p.matrix;
    const ComplexMatrix& q = pair.q.matrix;
    if (max_abs_diff(p * p, p) > kProjTol || max_abs_diff(q * q, q) > kProjTol ||
        max_abs(p * q) > kProjTol || max_abs(q * p) > kProjTol)
        throw NumericalError("build_projectors: projector algebra violated");
    return pair;
}

BlockDecomposition decompose(const SuperOp& l, const ProjectorPair& pq,
                             const SuperOp* l_b_local, QlpMode mode) {
    require(l.ordering == Ordering::grouped, "decompose: L must be GROUPED");
    require(l.space.has_value() && *l.space == pq.space,
            "decompose: space mismatch between L and projectors");

    BlockDecomposition blocks;
    blocks.space = pq.space;
    blocks.plp = pq.p * l * pq.p;
    blocks.plq = pq.p * l * pq.q;
    blocks.qlp = pq.q * l * pq.p;
    blocks.qlq = pq.q * l * pq.q;

    bool rho_b_stationary = false;
    ComplexMatrix qb_lb_pb;  // 1 (x) Q_B L_B P_B correction, B-local
    if (l_b_local != nullptr) {
        require(l_b_local->dim == pq.space.dim_b,
                "decompose: l_b_local dimension disagrees with space");
        const ComplexMatrix& lb = l_b_local->matrix;
        const std::vector<cplx> lb_rho = lb * std::span<const cplx>(pq.rho_b.vec);
        double resid = 0.0;
        for (const cplx& z : lb_rho) resid = std::max(resid, std::abs(z));
        rho_b_stationary = resid <= 1e-10 * (1.0 + norm_one(lb));
        qb_lb_pb = pq.q_b * lb * pq.p_b;
        blocks.qb_lb_qb = pq.q_b * lb * pq.q_b;
    }

    bool simplify = false;
    switch (mode) {
        case QlpMode::automatic: simplify = rho_b_stationary; break;
        case QlpMode::force_full: simplify = false; break;
        case QlpMode::force_simplified:
            require(l_b_local != nullptr,
                    "decompose: force_simplified needs the local L_B");
            simplify = true;
            break;
    }
    if (simplify && !rho_b_stationary) {
        // QLP -> Q L_AB P: subtract the 1 (x) Q_B L_B P_B term
        // (Q (L_A x 1) P vanishes identically since Q_B P_B = 0).
        const std::size_t da2 = pq.space.dim_a * pq.space.dim_a;
        blocks.qlp.matrix =
            blocks.qlp.matrix - kron(ComplexMatrix::identity(da2), qb_lb_pb);
    }
    blocks.simplified_qlp = simplify;
    return blocks;
}

QlqInverse invert_qlq(const BlockDecomposition& blocks, const ProjectorPair& pq,
                      InverseMethod method, int series_terms) {
    QlqInverse out;
    out.method = method;
    const std::size_t da2 = pq.space.dim_a * pq.space.dim_a;
    const std::size_t db2 = pq.space.dim_b * pq.space.dim_b;

    // inverse of the restriction to range(Q), extended by zero along range(P)
    auto q_range_inverse = [](const ComplexMatrix& m, const ComplexMatrix& q_left,
                              const ComplexMatrix& q_right, std::size_t expected_rank,
                              bool* singular) {
        const SvdFactors f = svd(m);
        const double cutoff = default_rank_cutoff(f, m.rows(), m.cols());
        std::size_t rank = 0;
        for (double s : f.singular_values)
            if (s > cutoff) ++rank;
        if (singular != nullptr) *singular = rank < expected_rank;
        return q_left * pinv(m) * q_right;
    };

    switch (method) {
        case InverseMethod::exact: {
            const std::size_t expected = da2 * (db2 - 1);
            bool singular = false;
            out.op = SuperOp{q_range_inverse(blocks.qlq.matrix, pq.q.matrix,
                                             pq.q.matrix, expected, &singular),
                             Ordering::grouped, pq.space.total(), pq.space};
            out.q_range_singular = singular;
            out.terms = 0;
            return out;
        }
        case InverseMethod::factorized:
        case InverseMethod::perturbative: {
            require(blocks.qb_lb_qb.has_value(),
                    "invert_qlq: FACTORIZED/PERTURBATIVE need the local L_B "
                    "(pass it to decompose)");
            bool singular = false;
            const ComplexMatrix d_inv_local = q_range_inverse(
                *blocks.qb_lb_qb, pq.q_b, pq.q_b, db2 - 1, &singular);
            ComplexMatrix d_inv = kron(ComplexMatrix::identity(da2), d_inv_local);
            out.q_range_singular = singular;
            if (method == InverseMethod::factorized) {
                out.op = SuperOp{std::move(d_inv), Ordering::grouped,
                                 pq.space.total(), pq.space};
                out.terms = 0;
                return out;
            }
            require(series_terms >= 0, "invert_qlq: negative series order");
            // (D + V)^{-1} = D^{-1} sum_k (-V D^{-1})^k truncated at k = n
            const ComplexMatrix v =
                blocks.qlq.matrix - kron(ComplexMatrix::identity(da2), *blocks.qb_lb_qb);
            ComplexMatrix sum = d_inv;
            ComplexMatrix term = d_inv;
            double prev_norm = norm_fro(term);
            for (int k = 1; k <= series_terms; ++k) {
                term = cplx{-1.0, 0.0} * (term * (v * d_inv));
                sum = sum + term;
                const double tn = norm_fro(term);
                if (k == series_terms && tn > prev_norm) out.series_diverged = true;
                prev_norm = tn;
            }
            out.op = SuperOp{std::move(sum), Ordering::grouped, pq.space.total(),
                             pq.space};
            out.terms = series_terms;
            return out;
        }
    }
    throw std::invalid_argument("invert_qlq: unknown method");
}

SuperOp effective_ln(const BlockDecomposition& blocks, const QlqInverse& inv, int n) {
    require(n >= 0, "effective_ln: n must be >= 0");
    if (n == 0) return blocks.plp - blocks.plq * inv.op * blocks.qlp;
    SuperOp power = inv.op;
    for (int k = 1; k <= n; ++k) power = power * inv.op;
    return cplx{-1.0, 0.0} * (blocks.plq * power * blocks.qlp);
}

ComplexMatrix reduce_to_a(const SuperOp& s, const DensityVec& rho_b) {
    require(s.ordering == Ordering::grouped && s.space.has_value(),
            "reduce_to_a: GROUPED superoperator required");
    const std::size_t da2 = s.space->dim_a * s.space->dim_a;
    const std::size_t db = s.space->dim_b;
    const std::size_t db2 = db * db;
    require(rho_b.vec.size() == db2, "reduce_to_a: rho_b dimension mismatch");
    ComplexMatrix out(da2, da2);
    for (std::size_t ra = 0; ra < da2; ++ra)
        for (std::size_t ca = 0; ca < da2; ++ca) {
            cplx acc{0.0, 0.0};
            for (std::size_t b = 0; b < db; ++b) {
                const std::size_t row = ra * db2 + b * db + b;
                for (std::size_t m = 0; m < db2; ++m)
                    acc += s.matrix(row, ca * db2 + m) * rho_b.vec[m];
            }
            out(ra, ca) = acc;
        }
    return out;
}

EffectiveGenerator effective_generator(const SuperOp& l, const ProjectorPair& pq,
                                       InverseMethod method, int order,
                                       const SuperOp* l_b_local, QlpMode mode,
                                       int series_terms) {
    require(order >= 0, "effective_generator: order must be >= 0");
    const BlockDecomposition blocks = decompose(l, pq, l_b_local, mode);
    const QlqInverse inv = invert_qlq(blocks, pq, method, series_terms);

    EffectiveGenerator eg;
    eg.order = order;
    eg.method = method;
    eg.simplified_qlp = blocks.simplified_qlp;
    eg.rho_b = pq.rho_b;
    eg.space = pq.space;
    eg.l0 = effective_ln(blocks, inv, 0);

    const std::size_t n2 = eg.l0.matrix.rows();
    if (order >= 1) {
        eg.l1 = effective_ln(blocks, inv, 1);
        const ComplexMatrix one_minus_l1 =
            ComplexMatrix::identity(n2) - eg.l1.matrix;
        ComplexMatrix imap;
        try {
            imap = inverse(one_minus_l1);
        } catch (const NumericalError&) {
            throw NumericalError(
                "effective_generator: (1 - L1) singular, approximation invalid");
        }
        eg.condition_one_minus_l1 = condition_one(one_minus_l1, imap);
        eg.initial_map = SuperOp{imap, Ordering::grouped, pq.space.total(), pq.space};
        eg.resolved_generator =
            SuperOp{imap * eg.l0.matrix, Ordering::grouped, pq.space.total(), pq.space};
    } else {
        eg.l1 = SuperOp{ComplexMatrix(n2, n2), Ordering::grouped, pq.space.total(),
                        pq.space};
        eg.initial_map = SuperOp{ComplexMatrix::identity(n2), Ordering::grouped,
                                 pq.space.total(), pq.space};
        eg.resolved_generator = eg.l0;
    }

    eg.reduced_l0 = reduce_to_a(eg.l0, pq.rho_b);
    eg.reduced_a_generator = reduce_to_a(eg.resolved_generator, pq.rho_b);

    // trace-preservation row of the effective dynamics, <<1| L0 = 0
    const std::size_t da = pq.space.dim_a, db = pq.space.dim_b;
    double resid = 0.0;
    for (std::size_t col = 0; col < n2; ++col) {
        cplx acc{0.0, 0.0};
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t b = 0; b < db; ++b)
                acc += eg.l0.matrix(((a * da + a) * db + b) * db + b, col);
        resid = std::max(resid, std::abs(acc));
    }
    eg.trace_row_residual = resid;
    return eg;
}

EffectiveGenerator effective_generator(const BipartiteLindblad& model,
                                       const ProjectorPair& pq,
                                       InverseMethod method, int order,
                                       QlpMode mode, int series_terms) {
    const SuperOp l = bipartite_liouvillian(model);
    const SuperOp l_b = lindblad_superop(model.part_b);
    return effective_generator(l, pq, method, order, &l_b, mode, series_terms);
}

Trajectory effective_propagate(const EffectiveGenerator& eg, const DensityVec& rho0_a,
                               std::span<const double> times) {
    require(rho0_a.ordering == Ordering::flat && rho0_a.dim == eg.space.dim_a,
            "effective_propagate: rho0_a must be FLAT on the A space");
    const DensityVec embedded = embed_product(rho0_a, eg.rho_b, eg.space);
    const std::vector<cplx> w0 =
        eg.initial_map.matrix * std::span<const cplx>(embedded.vec);
    const auto vecs = propagate_states(eg.resolved_generator.matrix, w0, times);
    Trajectory traj;
    traj.times.assign(times.begin(), times.end());
    traj.states.reserve(vecs.size());
    for (const auto& v : vecs) {
        DensityVec full{v, eg.space.total(), Ordering::grouped, eg.space};
        traj.states.push_back(partial_trace_b(full));
    }
    return traj;
}

}  // namespace adel
