#pragma once

// Operator-vector isomorphism, superoperator construction from Hamiltonians
// and jump operators, bipartite index reordering, partial trace and
// steady-state extraction.
//
// Vectorization convention (fixed globally): column stacking, |a><b| maps to
// conj(|b>) (x) |a>, so vec(M)[j*d + i] = M(i,j) and the superoperator for
// rho -> O1 rho O2^dagger is kron(conj(O2), O1).
//
// Bipartite orderings for H = H_A (x) H_B:
//   FLAT    index (a2,b2,a1,b1):  f = ((a2*dB + b2)*dA + a1)*dB + b1
//   GROUPED index (a2,a1,b2,b1):  g = ((a2*dA + a1)*dB + b2)*dB + b1
// (a1/b1 direct factors, a2/b2 conjugate factors).
//
// Pauli convention (from the reference problem set): |0>,|1> are the
// sigma_z eigenvectors with eigenvalues -1,+1. Any imported data must state
// its own convention.

#include <optional>
#include <span>
#include <vector>

#include "adel/numkernel.hpp"

namespace adel {

struct BipartiteSpace {
    std::size_t dim_a = 0;  // slow subsystem
    std::size_t dim_b = 0;  // fast subsystem
    std::size_t total() const { return dim_a * dim_b; }
    bool operator==(const BipartiteSpace&) const = default;
    void validate() const;
};

enum class Ordering { flat, grouped };

/// A d^2 x d^2 matrix acting on vectorized operators, with its ordering tag
/// and (for bipartite problems) the Hilbert-space factorization.
struct SuperOp {
    ComplexMatrix matrix;
    Ordering ordering = Ordering::flat;
    std::size_t dim = 0;  // Hilbert dimension d; matrix is d^2 x d^2
    std::optional<BipartiteSpace> space;
};

SuperOp operator+(const SuperOp& a, const SuperOp& b);
SuperOp operator-(const SuperOp& a, const SuperOp& b);
SuperOp operator*(const SuperOp& a, const SuperOp& b);  // composition
SuperOp operator*(cplx s, const SuperOp& a);

struct Jump {
    ComplexMatrix op;
    double rate = 0.0;
};

/// Hamiltonian + weighted jump operators (rates >= 0, H Hermitian to 1e-12).
struct LindbladModel {
    ComplexMatrix hamiltonian;
    std::vector<Jump> jumps;
    std::size_t dim() const { return hamiltonian.rows(); }
    void validate() const;
};

/// Bipartite Lindbladian L = L_A + L_B + L_AB; the coupling enters through a
/// Hermitian Hamiltonian on the full space (may be empty for no coupling).
struct BipartiteLindblad {
    BipartiteSpace space;
    LindbladModel part_a;
    LindbladModel part_b;
    ComplexMatrix coupling_hamiltonian;  // dim total x total, or empty
    void validate() const;
};

/// Vectorized operator with space metadata.
struct DensityVec {
    std::vector<cplx> vec;
    std::size_t dim = 0;
    Ordering ordering = Ordering::flat;
    std::optional<BipartiteSpace> space;
};

std::vector<cplx> vec(const ComplexMatrix& m);
ComplexMatrix unvec(std::span<const cplx> v, std::size_t d);

DensityVec density_vec(const ComplexMatrix& m);
cplx trace_of(const DensityVec& rho);  // <<1|rho>>
ComplexMatrix matrix_of(const DensityVec& rho);

/// Superoperator for rho -> o1 rho o2^dagger (FLAT ordering).
SuperOp sandwich(const ComplexMatrix& o1, const ComplexMatrix& o2);

/// -i[H,.] + sum_k rate_k D_{X_k} in FLAT ordering; satisfies <<1|L = 0.
SuperOp lindblad_superop(const LindbladModel& m);

/// Basis permutation FLAT -> GROUPED: perm[f] = g.
std::vector<std::size_t> flat_to_grouped_permutation(const BipartiteSpace& s);

/// Conjugate by the FLAT<->GROUPED permutation; involution, flips the tag.
SuperOp grouped_reorder(const SuperOp& s);
DensityVec grouped_reorder(const DensityVec& rho);

/// Contract the B (x) B factor with <<1_B| (GROUPED input); trace preserving.
DensityVec partial_trace_b(const DensityVec& rho);

/// rho_a (x) rho_b as a GROUPED vector on the product space.
DensityVec embed_product(const DensityVec& rho_a, const DensityVec& rho_b,
                         const BipartiteSpace& space);

struct SteadyState {
    bool unique = false;
    DensityVec state;  // hermitized, trace-normalized; valid when unique
    std::vector<std::vector<cplx>> kernel_basis;  // orthonormal, always filled
};

/// Nullspace of a trace-preserving generator. Multi-dimensional kernels are
/// surfaced (unique=false, all basis vectors returned) rather than picking a
/// branch. Throws NumericalError when the kernel is empty.
SteadyState steady_state(const SuperOp& l, double rank_tol = 0.0);

// Bipartite assembly (all GROUPED on the total space).
SuperOp bipartite_part_a(const BipartiteLindblad& m);   // L_A (x) 1^{2B}
SuperOp bipartite_part_b(const BipartiteLindblad& m);   // 1^{2A} (x) L_B
SuperOp bipartite_coupling(const BipartiteLindblad& m); // -i[H_AB, .]
SuperOp bipartite_liouvillian(const BipartiteLindblad& m);

// Pauli matrices in the library's convention (sigma_z = diag(-1, +1)).
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix sigma_plus();   // |1><0|
ComplexMatrix sigma_minus();  // |0><1|

}  // namespace adel
