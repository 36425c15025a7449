#include "adel/liouville.hpp"

#include <cmath>

namespace adel {

namespace {

constexpr double kHermTol = 1e-12;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

SuperOp make_superop(ComplexMatrix m, Ordering ord, std::size_t dim,
                     std::optional<BipartiteSpace> space = std::nullopt) {
    return SuperOp{std::move(m), ord, dim, space};
}

void check_compatible(const SuperOp& a, const SuperOp& b) {
    require(a.dim == b.dim, "SuperOp: dimension mismatch");
    require(a.ordering == b.ordering,
            "SuperOp: mixing FLAT and GROUPED without explicit conversion");
}

}  // namespace

void BipartiteSpace::validate() const {
    require(dim_a >= 1 && dim_b >= 1 && total() >= 2,
            "BipartiteSpace: total dimension must be >= 2");
}

void LindbladModel::validate() const {
    require(hamiltonian.is_square(), "LindbladModel: hamiltonian not square");
    require(is_hermitian(hamiltonian, kHermTol),
            "LindbladModel: hamiltonian not Hermitian to 1e-12");
    for (const Jump& j : jumps) {
        require(j.op.is_square() && j.op.rows() == hamiltonian.rows(),
                "LindbladModel: jump dimension mismatch");
        require(j.rate >= 0.0, "LindbladModel: negative jump rate");
    }
}

void BipartiteLindblad::validate() const {
    space.validate();
    part_a.validate();
    part_b.validate();
    require(part_a.dim() == space.dim_a && part_b.dim() == space.dim_b,
            "BipartiteLindblad: part dimensions disagree with space");
    if (!coupling_hamiltonian.empty()) {
        require(coupling_hamiltonian.rows() == space.total() &&
                    coupling_hamiltonian.cols() == space.total(),
                "BipartiteLindblad: coupling dimension mismatch");
        require(is_hermitian(coupling_hamiltonian, kHermTol),
                "BipartiteLindblad: coupling Hamiltonian not Hermitian");
    }
}

SuperOp operator+(const SuperOp& a, const SuperOp& b) {
    check_compatible(a, b);
    return make_superop(a.matrix + b.matrix, a.ordering, a.dim, a.space);
}

SuperOp operator-(const SuperOp& a, const SuperOp& b) {
    check_compatible(a, b);
    return make_superop(a.matrix - b.matrix, a.ordering, a.dim, a.space);
}

SuperOp operator*(const SuperOp& a, const SuperOp& b) {
    check_compatible(a, b);
    return make_superop(a.matrix * b.matrix, a.ordering, a.dim, a.space);
}

SuperOp operator*(cplx s, const SuperOp& a) {
    return make_superop(s * a.matrix, a.ordering, a.dim, a.space);
}

std::vector<cplx> vec(const ComplexMatrix& m) {
    require(m.is_square(), "vec: non-square input");
    const std::size_t d = m.rows();
    std::vector<cplx> v(d * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) v[j * d + i] = m(i, j);
    return v;
}

ComplexMatrix unvec(std::span<const cplx> v, std::size_t d) {
    require(v.size() == d * d, "unvec: length != d^2");
    ComplexMatrix m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) m(i, j) = v[j * d + i];
    return m;
}

DensityVec density_vec(const ComplexMatrix& m) {
    DensityVec rho;
    rho.vec = vec(m);
    rho.dim = m.rows();
    rho.ordering = Ordering::flat;
    return rho;
}

cplx trace_of(const DensityVec& rho) {
    // <<1|rho>> is the trace in either ordering: both diagonals are sums over
    // (a2=a1, b2=b1) index pairs.
    cplx t{0.0, 0.0};
    if (rho.ordering == Ordering::grouped && rho.space) {
        const std::size_t da = rho.space->dim_a, db = rho.space->dim_b;
        for (std::size_t a = 0; a < da; ++a)
            for (std::size_t b = 0; b < db; ++b)
                t += rho.vec[((a * da + a) * db + b) * db + b];
    } else {
        for (std::size_t i = 0; i < rho.dim; ++i) t += rho.vec[i * rho.dim + i];
    }
    return t;
}

ComplexMatrix matrix_of(const DensityVec& rho) {
    if (rho.ordering == Ordering::grouped) return matrix_of(grouped_reorder(rho));
    return unvec(rho.vec, rho.dim);
}

SuperOp sandwich(const ComplexMatrix& o1, const ComplexMatrix& o2) {
    require(o1.is_square() && o2.is_square() && o1.rows() == o2.rows(),
            "sandwich: operands must be square with equal dimension");
    return make_superop(kron(conjugate(o2), o1), Ordering::flat, o1.rows());
}

SuperOp lindblad_superop(const LindbladModel& m) {
    m.validate();
    const std::size_t d = m.dim();
    const ComplexMatrix id = ComplexMatrix::identity(d);
    ComplexMatrix l = cplx{0.0, -1.0} *
                      (sandwich(m.hamiltonian, id).matrix - sandwich(id, m.hamiltonian).matrix);
    for (const Jump& j : m.jumps) {
        const ComplexMatrix nd = adjoint(j.op) * j.op;
        l = l + j.rate * (sandwich(j.op, j.op).matrix -
                          0.5 * sandwich(nd, id).matrix - 0.5 * sandwich(id, nd).matrix);
    }
    return make_superop(std::move(l), Ordering::flat, d);
}

std::vector<std::size_t> flat_to_grouped_permutation(const BipartiteSpace& s) {
    s.validate();
    const std::size_t da = s.dim_a, db = s.dim_b;
    std::vector<std::size_t> perm(da * db * da * db);
    for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t b2 = 0; b2 < db; ++b2)
            for (std::size_t a1 = 0; a1 < da; ++a1)
                for (std::size_t b1 = 0; b1 < db; ++b1) {
                    const std::size_t f = ((a2 * db + b2) * da + a1) * db + b1;
                    const std::size_t g = ((a2 * da + a1) * db + b2) * db + b1;
                    perm[f] = g;
                }
    return perm;
}

SuperOp grouped_reorder(const SuperOp& s) {
    require(s.space.has_value(), "grouped_reorder: missing bipartite metadata");
    const auto perm = flat_to_grouped_permutation(*s.space);
    const std::size_t n = perm.size();
    require(s.matrix.rows() == n && s.matrix.cols() == n,
            "grouped_reorder: matrix size disagrees with space");
    ComplexMatrix out(n, n);
    if (s.ordering == Ordering::flat) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(perm[i], perm[j]) = s.matrix(i, j);
    } else {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) = s.matrix(perm[i], perm[j]);
    }
    const Ordering flipped =
        s.ordering == Ordering::flat ? Ordering::grouped : Ordering::flat;
    return make_superop(std::move(out), flipped, s.dim, s.space);
}

DensityVec grouped_reorder(const DensityVec& rho) {
    require(rho.space.has_value(), "grouped_reorder: missing bipartite metadata");
    const auto perm = flat_to_grouped_permutation(*rho.space);
    require(rho.vec.size() == perm.size(), "grouped_reorder: vector size mismatch");
    DensityVec out = rho;
    if (rho.ordering == Ordering::flat) {
        for (std::size_t i = 0; i < perm.size(); ++i) out.vec[perm[i]] = rho.vec[i];
        out.ordering = Ordering::grouped;
    } else {
        for (std::size_t i = 0; i < perm.size(); ++i) out.vec[i] = rho.vec[perm[i]];
        out.ordering = Ordering::flat;
    }
    return out;
}

DensityVec partial_trace_b(const DensityVec& rho) {
    require(rho.ordering == Ordering::grouped && rho.space.has_value(),
            "partial_trace_b: GROUPED ordering with bipartite metadata required");
    const std::size_t da = rho.space->dim_a, db = rho.space->dim_b;
    DensityVec out;
    out.dim = da;
    out.ordering = Ordering::flat;
    out.vec.assign(da * da, cplx{0.0, 0.0});
    for (std::size_t a2 = 0; a2 < da; ++a2)
        for (std::size_t a1 = 0; a1 < da; ++a1) {
            cplx acc{0.0, 0.0};
            for (std::size_t b = 0; b < db; ++b)
                acc += rho.vec[((a2 * da + a1) * db + b) * db + b];
            out.vec[a2 * da + a1] = acc;
        }
    return out;
}

DensityVec embed_product(const DensityVec& rho_a, const DensityVec& rho_b,
                         const BipartiteSpace& space) {
    require(rho_a.dim == space.dim_a && rho_b.dim == space.dim_b,
            "embed_product: dimension mismatch");
    require(rho_a.ordering == Ordering::flat && rho_b.ordering == Ordering::flat,
            "embed_product: factors must be FLAT (monopartite)");
    DensityVec out;
    out.dim = space.total();
    out.ordering = Ordering::grouped;
    out.space = space;
    out.vec.resize(rho_a.vec.size() * rho_b.vec.size());
    for (std::size_t i = 0; i < rho_a.vec.size(); ++i)
        for (std::size_t j = 0; j < rho_b.vec.size(); ++j)
            out.vec[i * rho_b.vec.size() + j] = rho_a.vec[i] * rho_b.vec[j];
    return out;
}

SteadyState steady_state(const SuperOp& l, double rank_tol) {
    auto basis = nullspace(l.matrix, rank_tol);
    if (basis.empty())
        throw NumericalError("steady_state: generator has empty nullspace");
    SteadyState out;
    out.kernel_basis = basis;
    out.unique = basis.size() == 1;
    if (out.unique) {
        DensityVec rho;
        rho.vec = std::move(basis.front());
        rho.dim = l.dim;
        rho.ordering = l.ordering;
        rho.space = l.space;
        // numerical kernel vectors carry arbitrary phase: hermitize then
        // renormalize the trace
        ComplexMatrix m = matrix_of(rho);
        m = 0.5 * (m + adjoint(m));
        const cplx tr = trace(m);
        if (std::abs(tr) < 1e-14)
            throw NumericalError("steady_state: traceless kernel vector");
        m = (cplx{1.0, 0.0} / tr) * m;
        DensityVec flat = density_vec(m);
        if (l.ordering == Ordering::grouped) {
            flat.space = l.space;
            out.state = grouped_reorder(flat);
        } else {
            out.state = std::move(flat);
        }
        out.state.space = l.space;
    }
    return out;
}

SuperOp bipartite_part_a(const BipartiteLindblad& m) {
    const SuperOp la = lindblad_superop(m.part_a);
    const std::size_t db2 = m.space.dim_b * m.space.dim_b;
    return make_superop(kron(la.matrix, ComplexMatrix::identity(db2)),
                        Ordering::grouped, m.space.total(), m.space);
}

SuperOp bipartite_part_b(const BipartiteLindblad& m) {
    const SuperOp lb = lindblad_superop(m.part_b);
    const std::size_t da2 = m.space.dim_a * m.space.dim_a;
    return make_superop(kron(ComplexMatrix::identity(da2), lb.matrix),
                        Ordering::grouped, m.space.total(), m.space);
}

SuperOp bipartite_coupling(const BipartiteLindblad& m) {
    const std::size_t d = m.space.total();
    if (m.coupling_hamiltonian.empty()) {
        SuperOp zero = make_superop(ComplexMatrix(d * d, d * d), Ordering::grouped,
                                    d, m.space);
        return zero;
    }
    const ComplexMatrix id = ComplexMatrix::identity(d);
    SuperOp flat = make_superop(
        cplx{0.0, -1.0} * (sandwich(m.coupling_hamiltonian, id).matrix -
                           sandwich(id, m.coupling_hamiltonian).matrix),
        Ordering::flat, d, m.space);
    return grouped_reorder(flat);
}

SuperOp bipartite_liouvillian(const BipartiteLindblad& m) {
    m.validate();
    return bipartite_part_a(m) + bipartite_part_b(m) + bipartite_coupling(m);
}

ComplexMatrix pauli_x() {
    return ComplexMatrix(2, 2, {cplx{0, 0}, cplx{1, 0}, cplx{1, 0}, cplx{0, 0}});
}

ComplexMatrix pauli_y() {
    // sigma_z|1> = +|1> convention: sigma_y = i(sigma_- - sigma_+)
    return ComplexMatrix(2, 2, {cplx{0, 0}, cplx{0, 1}, cplx{0, -1}, cplx{0, 0}});
}

ComplexMatrix pauli_z() {
    return ComplexMatrix(2, 2, {cplx{-1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}});
}

ComplexMatrix sigma_plus() {
    return ComplexMatrix(2, 2, {cplx{0, 0}, cplx{0, 0}, cplx{1, 0}, cplx{0, 0}});
}

ComplexMatrix sigma_minus() {
    return ComplexMatrix(2, 2, {cplx{0, 0}, cplx{1, 0}, cplx{0, 0}, cplx{0, 0}});
}

}  // namespace adel
