#pragma once

// Bipartite projector construction, block decomposition of the Liouvillian,
// inversion of QLQ (exact pseudoinverse on the Q-range, factorized
// zeroth-order, or perturbative series) and assembly of the effective slow
// generator L0, Ln and the resolved propagator (1 - L1)^{-1} L0.

#include <optional>

#include "adel/liouville.hpp"
#include "adel/trajectory.hpp"

namespace adel {

/// P = 1^{2A} (x) |rho_b>><<1_B| and Q = 1 - P, in GROUPED ordering, together
/// with the local B-space factors. Projector algebra is verified at
/// construction (P^2=P, Q^2=Q, PQ=QP=0 to 1e-12).
struct ProjectorPair {
    DensityVec rho_b;      // FLAT on B, <<1_B|rho_b>> = 1
    SuperOp p, q;          // GROUPED on the total space
    ComplexMatrix p_b, q_b;  // local dB^2 x dB^2 factors
    BipartiteSpace space;
};

ProjectorPair build_projectors(const DensityVec& rho_b, const BipartiteSpace& space);

/// How the QLP block is formed. The full form carries the 1 (x) Q_B L_B P_B
/// term; the simplified form drops it, which is exact when rho_b is a steady
/// state of L_B and is the variant used by the reference two-qubit analysis
/// even away from that limit.
enum class QlpMode { automatic, force_full, force_simplified };

struct BlockDecomposition {
    SuperOp plp, plq, qlp, qlq;       // GROUPED
    bool simplified_qlp = false;
    // Present when the local L_B was supplied to decompose(): the dominant
    // factorized core Q_B L_B Q_B needed by FACTORIZED / PERTURBATIVE.
    std::optional<ComplexMatrix> qb_lb_qb;
    BipartiteSpace space;
};

BlockDecomposition decompose(const SuperOp& l, const ProjectorPair& pq,
                             const SuperOp* l_b_local = nullptr,
                             QlpMode mode = QlpMode::automatic);

enum class InverseMethod { exact, factorized, perturbative };

struct QlqInverse {
    SuperOp op;                   // Q-supported: Q op Q = op
    InverseMethod method = InverseMethod::exact;
    bool q_range_singular = false;  // slow dynamics leaking into Q
    bool series_diverged = false;   // perturbative partial sums growing
    int terms = 0;
};

QlqInverse invert_qlq(const BlockDecomposition& blocks, const ProjectorPair& pq,
                      InverseMethod method, int series_terms = 1);

/// L0 for n=0, else Ln = -PLQ X^{n+1} QLP (n>=1; n>1 computed but unvalidated).
SuperOp effective_ln(const BlockDecomposition& blocks, const QlqInverse& inv, int n);

struct EffectiveGenerator {
    SuperOp l0, l1;
    int order = 1;                  // truncation order of the z-expansion
    SuperOp resolved_generator;     // (1 - L1)^{-1} L0; equals L0 at order 0
    SuperOp initial_map;            // (1 - L1)^{-1};    identity at order 0
    ComplexMatrix reduced_a_generator;  // A-space reduction of resolved_generator
    ComplexMatrix reduced_l0;           // A-space reduction of L0
    double condition_one_minus_l1 = 1.0;
    double trace_row_residual = 0.0;    // max |<<1| L0| (trace preservation)
    bool simplified_qlp = false;
    InverseMethod method = InverseMethod::exact;
    DensityVec rho_b;
    BipartiteSpace space;
};

EffectiveGenerator effective_generator(const SuperOp& l, const ProjectorPair& pq,
                                       InverseMethod method, int order = 1,
                                       const SuperOp* l_b_local = nullptr,
                                       QlpMode mode = QlpMode::automatic,
                                       int series_terms = 1);

EffectiveGenerator effective_generator(const BipartiteLindblad& model,
                                       const ProjectorPair& pq,
                                       InverseMethod method, int order = 1,
                                       QlpMode mode = QlpMode::automatic,
                                       int series_terms = 1);

/// (1^{2A} (x) <<1_B|) s (1^{2A} (x) |rho_b>>), a dimA^2 x dimA^2 matrix.
ComplexMatrix reduce_to_a(const SuperOp& s, const DensityVec& rho_b);

/// Propagate rho0_A (x) rho_b under the resolved generator, reduced back to A
/// by partial trace. At t=0 the state is the modified initial state
/// (1 - L1)^{-1} applied to the embedding.
Trajectory effective_propagate(const EffectiveGenerator& eg, const DensityVec& rho0_a,
                               std::span<const double> times);

}  // namespace adel
