#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adel/elimination.hpp"
#include "adel/models.hpp"
#include "test_support.hpp"

using namespace adel;
using test::random_density;
using test::random_hermitian;
using test::random_matrix;
using test::vec_max_diff;

namespace {

const TwoQubitParams kRef{1.0, 0.1};

ProjectorPair ref_projectors() {
    return build_projectors(two_qubit_branch_state(kRef, Branch::s0),
                            BipartiteSpace{2, 2});
}

// Frozen engine values at gamma=1, chi=0.1 (recomputed independently with a
// separate numerical stack before the build; regression pins).
const cplx kAlphaFull{-0.005237698783904916, 0.02203365490064739};
const cplx kBetaFull{0.0070504278700158135, -0.0008736024459938646};
const cplx kResolvedFull{-0.00522000544977, 0.0218748675155};
const cplx kBetaSimplified{0.00695867995988, 0.000156222376829};

}  // namespace

TEST_CASE("projector pair obeys the algebra and structure") {
    const BipartiteSpace s{2, 2};
    // maximally mixed reference state
    const DensityVec mixed = density_vec(0.5 * ComplexMatrix::identity(2));
    const ProjectorPair pq = build_projectors(mixed, s);
    CHECK(max_abs_diff(pq.p.matrix * pq.p.matrix, pq.p.matrix) < 1e-12);
    CHECK(std::abs(trace(pq.p.matrix) - cplx{4.0, 0}) < 1e-12);

    const ProjectorPair pq2 = ref_projectors();
    CHECK(max_abs_diff(pq2.p.matrix * pq2.p.matrix, pq2.p.matrix) < 1e-12);
    CHECK(max_abs(pq2.p.matrix * pq2.q.matrix) < 1e-12);
    CHECK(std::abs(trace(pq2.p.matrix) - cplx{4.0, 0}) < 1e-12);
    // rank of P equals dimA^2 = 4
    const SvdFactors f = svd(pq2.p.matrix);
    std::size_t rank = 0;
    for (double sv : f.singular_values)
        if (sv > 1e-10) ++rank;
    CHECK(rank == 4);

    DensityVec unnormalized = density_vec(ComplexMatrix::identity(2));
    CHECK_THROWS_AS(build_projectors(unnormalized, s), std::invalid_argument);
}

TEST_CASE("decompose: A-only generator has no coupling blocks") {
    BipartiteLindblad m;
    m.space = BipartiteSpace{2, 2};
    m.part_a.hamiltonian = random_hermitian(2);
    m.part_a.jumps.push_back({sigma_minus(), 0.4});
    m.part_b.hamiltonian = ComplexMatrix(2, 2);
    const ProjectorPair pq =
        build_projectors(density_vec(random_density(2)), m.space);
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    CHECK(max_abs(blocks.plq.matrix) < 1e-12);
    CHECK(max_abs(blocks.qlp.matrix) < 1e-12);
    CHECK(max_abs_diff(blocks.plp.matrix + blocks.plq.matrix + blocks.qlp.matrix +
                           blocks.qlq.matrix,
                       l.matrix) < 1e-12);
}

TEST_CASE("decompose: two-qubit blocks live on the A-coherence sectors") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    CHECK_FALSE(blocks.simplified_qlp);  // rho_s0 is not stationary for L_B
    CHECK(max_abs_diff(blocks.plp.matrix + blocks.plq.matrix + blocks.qlp.matrix +
                           blocks.qlq.matrix,
                       l.matrix) < 1e-12);
    // population sectors (a2,a1) = (0,0) -> 0 and (1,1) -> 3 carry nothing in
    // PLP and PLQ
    for (std::size_t sector : {0u, 3u}) {
        double best = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 16; ++j) {
                best = std::max(best, std::abs(blocks.plp.matrix(sector * 4 + i, j)));
                best = std::max(best, std::abs(blocks.plq.matrix(sector * 4 + i, j)));
            }
        CHECK(best < 1e-13);
    }
}

TEST_CASE("decompose: forced simplification subtracts the Q_B L_B P_B term") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition full = decompose(l, pq, &lb, QlpMode::force_full);
    const BlockDecomposition simp = decompose(l, pq, &lb, QlpMode::force_simplified);
    CHECK(simp.simplified_qlp);
    const ComplexMatrix expected_delta =
        kron(ComplexMatrix::identity(4), pq.q_b * lb.matrix * pq.p_b);
    CHECK(max_abs_diff(full.qlp.matrix - simp.qlp.matrix, expected_delta) < 1e-14);
    CHECK_THROWS_AS(decompose(l, pq, nullptr, QlpMode::force_simplified),
                    std::invalid_argument);
}

TEST_CASE("decompose: Rabi reference state is stationary for L_B") {
    RabiParams p;
    p.fock_cutoff = 4;
    const BipartiteLindblad m = build_rabi(p);
    ComplexMatrix ground(2, 2);
    ground(0, 0) = 1.0;
    const ProjectorPair pq = build_projectors(density_vec(ground), m.space);
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    CHECK(blocks.simplified_qlp);  // automatic: L_B |0,0> = 0 exactly
}

TEST_CASE("invert_qlq EXACT is Q-supported and inverts on the range") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    const QlqInverse inv = invert_qlq(blocks, pq, InverseMethod::exact);
    CHECK_FALSE(inv.q_range_singular);
    const ComplexMatrix& x = inv.op.matrix;
    CHECK(max_abs_diff(pq.q.matrix * x * pq.q.matrix, x) < 1e-10);
    CHECK(max_abs_diff(blocks.qlq.matrix * x * blocks.qlq.matrix, blocks.qlq.matrix) <
          1e-10);
    CHECK(max_abs_diff(x * blocks.qlq.matrix * x, x) < 1e-10);
}

TEST_CASE("invert_qlq FACTORIZED: spin-sector action on the Rabi model") {
    RabiParams p;
    p.fock_cutoff = 4;
    const double gamma = p.gamma_spin, eta = p.eta;
    const BipartiteLindblad m = build_rabi(p);
    ComplexMatrix ground(2, 2);
    ground(0, 0) = 1.0;
    const ProjectorPair pq = build_projectors(density_vec(ground), m.space);
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    const QlqInverse inv = invert_qlq(blocks, pq, InverseMethod::factorized);
    CHECK(max_abs_diff(pq.q.matrix * inv.op.matrix * pq.q.matrix, inv.op.matrix) <
          1e-12);

    const std::size_t na2 = p.fock_cutoff * p.fock_cutoff;
    auto embed_b = [&](const std::vector<cplx>& wb, std::size_t a_index) {
        std::vector<cplx> v(na2 * 4, cplx{0, 0});
        for (std::size_t k = 0; k < 4; ++k) v[a_index * 4 + k] = wb[k];
        return v;
    };
    // population direction |1,1> - |0,0|: eigenvalue -1/Gamma
    const std::vector<cplx> w{cplx{-1, 0}, cplx{0, 0}, cplx{0, 0}, cplx{1, 0}};
    auto xw = inv.op.matrix * std::span<const cplx>(embed_b(w, 2));
    for (std::size_t k = 0; k < 4; ++k)
        CHECK(std::abs(xw[2 * 4 + k] - (-1.0 / gamma) * w[k]) < 1e-12);
    // coherences: eigenvalues -1/(Gamma/2 +- 2i/eta)
    const cplx c_plus = -1.0 / cplx{gamma / 2.0, 2.0 / eta};
    const std::vector<cplx> e01{cplx{0, 0}, cplx{1, 0}, cplx{0, 0}, cplx{0, 0}};
    auto x01 = inv.op.matrix * std::span<const cplx>(embed_b(e01, 0));
    CHECK(std::abs(x01[1] - c_plus) < 1e-12);
    const cplx c_minus = -1.0 / cplx{gamma / 2.0, -2.0 / eta};
    const std::vector<cplx> e10{cplx{0, 0}, cplx{0, 0}, cplx{1, 0}, cplx{0, 0}};
    auto x10 = inv.op.matrix * std::span<const cplx>(embed_b(e10, 0));
    CHECK(std::abs(x10[2] - c_minus) < 1e-12);
}

TEST_CASE("PERTURBATIVE(0) equals FACTORIZED; large order converges to EXACT") {
    const TwoQubitParams small{1.0, 0.01};  // chi << gamma
    const BipartiteLindblad m = build_two_qubit(small);
    const ProjectorPair pq = build_projectors(
        two_qubit_branch_state(small, Branch::s0), BipartiteSpace{2, 2});
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);

    const QlqInverse fact = invert_qlq(blocks, pq, InverseMethod::factorized);
    const QlqInverse pert0 = invert_qlq(blocks, pq, InverseMethod::perturbative, 0);
    CHECK(max_abs_diff(fact.op.matrix, pert0.op.matrix) == 0.0);

    const QlqInverse exact = invert_qlq(blocks, pq, InverseMethod::exact);
    const QlqInverse pert = invert_qlq(blocks, pq, InverseMethod::perturbative, 24);
    CHECK_FALSE(pert.series_diverged);
    const SuperOp l0_exact = effective_ln(blocks, exact, 0);
    const SuperOp l0_pert = effective_ln(blocks, pert, 0);
    CHECK(max_abs_diff(l0_exact.matrix, l0_pert.matrix) < 1e-6);
}

TEST_CASE("effective generator of an uncoupled model reduces to L_A x P_B") {
    BipartiteLindblad m;
    m.space = BipartiteSpace{2, 2};
    m.part_a.hamiltonian = random_hermitian(2);
    m.part_a.jumps.push_back({sigma_minus(), 0.3});
    m.part_b.hamiltonian = ComplexMatrix(2, 2);
    m.part_b.jumps.push_back({sigma_minus(), 2.0});
    ComplexMatrix ground(2, 2);
    ground(0, 0) = 1.0;  // steady state of the B decay
    const ProjectorPair pq = build_projectors(density_vec(ground), m.space);
    const EffectiveGenerator eg =
        effective_generator(m, pq, InverseMethod::exact, 1);
    CHECK(max_abs(eg.l1.matrix) < 1e-12);
    const ComplexMatrix expected =
        kron(lindblad_superop(m.part_a).matrix, pq.p_b);
    CHECK(max_abs_diff(eg.l0.matrix, expected) < 1e-11);
    // reduced generator equals L_A's superoperator
    CHECK(max_abs_diff(eg.reduced_a_generator, lindblad_superop(m.part_a).matrix) <
          1e-11);
}

TEST_CASE("two-qubit engine pins: alpha and beta per QLP mode") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();

    const EffectiveGenerator full =
        effective_generator(m, pq, InverseMethod::exact, 1, QlpMode::force_full);
    CHECK_FALSE(full.simplified_qlp);
    // alpha sits on the |0><1| coherence diagonal of reduced L0 (index 1)
    CHECK(std::abs(full.reduced_l0(1, 1) - kAlphaFull) < 1e-12);
    CHECK(std::abs(full.reduced_l0(2, 2) - std::conj(kAlphaFull)) < 1e-12);
    // populations untouched, off-diagonals empty
    CHECK(std::abs(full.reduced_l0(0, 0)) < 1e-12);
    CHECK(std::abs(full.reduced_l0(3, 3)) < 1e-12);
    // beta from L1: reduced(L1) = -beta on the coherence diagonal
    const ComplexMatrix red_l1 = reduce_to_a(full.l1, pq.rho_b);
    CHECK(std::abs(-red_l1(1, 1) - kBetaFull) < 1e-12);
    // resolved coherence
    CHECK(std::abs(full.reduced_a_generator(1, 1) - kResolvedFull) < 1e-9);
    CHECK(full.trace_row_residual < 1e-10);

    const EffectiveGenerator simp = effective_generator(
        m, pq, InverseMethod::exact, 1, QlpMode::force_simplified);
    CHECK(simp.simplified_qlp);
    const TwoQubitClosedForm cf = two_qubit_closed_form(kRef);
    CHECK(std::abs(simp.reduced_l0(1, 1) - cplx{-cf.zeta, cf.xi}) < 1e-12);
    const ComplexMatrix red_l1s = reduce_to_a(simp.l1, pq.rho_b);
    CHECK(std::abs(-red_l1s(1, 1) - kBetaSimplified) < 1e-12);
    CHECK(simp.trace_row_residual < 1e-10);
}

TEST_CASE("resolved n=1 generator approximates the exact slow eigenvalue") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const SuperOp l = bipartite_liouvillian(m);
    // independent oracle: slowest decaying coherence eigenvalue of the full
    // Liouvillian (smallest |Re| among Im > 0.01)
    cplx lam{1e9, 0};
    for (const cplx& ev : eigenvalues(l.matrix))
        if (ev.imag() > 0.01 && std::abs(ev.real()) < std::abs(lam.real())) lam = ev;
    const EffectiveGenerator full =
        effective_generator(m, pq, InverseMethod::exact, 1, QlpMode::force_full);
    CHECK(std::abs(full.reduced_a_generator(1, 1) - lam) < 5e-6);
    // and the n=0 truncation is an order of magnitude cruder
    CHECK(std::abs(full.reduced_l0(1, 1) - lam) > 1e-4);
}

TEST_CASE("L0 annihilates the projected exact steady state") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const EffectiveGenerator eg =
        effective_generator(m, pq, InverseMethod::exact, 1, QlpMode::force_full);
    ComplexMatrix pa0(2, 2);
    pa0(0, 0) = 1.0;
    const DensityVec exact_ss = embed_product(
        density_vec(pa0), two_qubit_branch_state(kRef, Branch::s0), pq.space);
    const auto proj = pq.p.matrix * std::span<const cplx>(exact_ss.vec);
    const auto l0v = eg.l0.matrix * std::span<const cplx>(proj);
    for (const cplx& z : l0v) CHECK(std::abs(z) < 1e-12);
}

TEST_CASE("kernels of L0 and the resolved generator coincide") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const EffectiveGenerator eg =
        effective_generator(m, pq, InverseMethod::exact, 1, QlpMode::force_full);
    const auto k0 = nullspace(eg.l0.matrix);
    const auto kr = nullspace(eg.resolved_generator.matrix);
    REQUIRE(k0.size() == kr.size());
    // every L0 kernel vector is annihilated by the resolved generator
    for (const auto& v : k0) {
        const auto rv = eg.resolved_generator.matrix * std::span<const cplx>(v);
        for (const cplx& z : rv) CHECK(std::abs(z) < 1e-9);
    }
}

TEST_CASE("higher-order Ln is computable (unvalidated beyond n=1)") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const SuperOp l = bipartite_liouvillian(m);
    const SuperOp lb = lindblad_superop(m.part_b);
    const BlockDecomposition blocks = decompose(l, pq, &lb);
    const QlqInverse inv = invert_qlq(blocks, pq, InverseMethod::exact);
    const SuperOp l2 = effective_ln(blocks, inv, 2);
    CHECK(l2.matrix.rows() == 16);
    CHECK(max_abs(l2.matrix) > 0.0);
    CHECK_THROWS_AS(effective_ln(blocks, inv, -1), std::invalid_argument);
}

TEST_CASE("effective_propagate: trivial generator gives a constant trajectory") {
    BipartiteLindblad m;
    m.space = BipartiteSpace{2, 2};
    m.part_a.hamiltonian = ComplexMatrix(2, 2);
    m.part_b.hamiltonian = ComplexMatrix(2, 2);
    m.part_b.jumps.push_back({sigma_minus(), 1.0});
    ComplexMatrix ground(2, 2);
    ground(0, 0) = 1.0;
    const ProjectorPair pq = build_projectors(density_vec(ground), m.space);
    const EffectiveGenerator eg = effective_generator(m, pq, InverseMethod::exact, 1);
    const ComplexMatrix rho0 = random_density(2);
    const std::vector<double> times{0.0, 0.5, 2.0};
    const Trajectory traj = effective_propagate(eg, density_vec(rho0), times);
    REQUIRE(traj.states.size() == 3);
    for (const DensityVec& st : traj.states)
        CHECK(vec_max_diff(st.vec, vec(rho0)) < 1e-12);
}

TEST_CASE("effective_propagate: populations constant for the dephasing model") {
    const BipartiteLindblad m = build_two_qubit(kRef);
    const ProjectorPair pq = ref_projectors();
    const EffectiveGenerator eg =
        effective_generator(m, pq, InverseMethod::exact, 1, QlpMode::force_full);
    ComplexMatrix rho0(2, 2, {cplx{0.7, 0}, cplx{0.2, 0.1}, cplx{0.2, -0.1}, cplx{0.3, 0}});
    std::vector<double> times;
    for (int k = 0; k < 40; ++k) times.push_back(k * 10.0);
    const Trajectory traj = effective_propagate(eg, density_vec(rho0), times);
    for (const DensityVec& st : traj.states) {
        const ComplexMatrix r = matrix_of(st);
        CHECK(std::abs(r(0, 0) - cplx{0.7, 0}) < 1e-10);
        CHECK(std::abs(r(1, 1) - cplx{0.3, 0}) < 1e-10);
    }
}
