#pragma once

// Builders and closed-form reference values for the two worked systems: a
// dispersively coupled two-qubit system (strongly dissipative driven qubit B
// measuring a slow qubit A) and the open Rabi model in the normal phase
// (fast spin eliminated from a slow boson mode).
//
// All parameters are the rescaled, dimensionless ones (time rescaled by the
// drive u for the two-qubit system, by sqrt(Omega*omega_0) for the Rabi
// model).

#include <array>

#include "adel/elimination.hpp"
#include "adel/liouville.hpp"

namespace adel {

struct TwoQubitParams {
    double gamma = 1.0;  // rescaled decay of qubit B
    double chi = 0.1;    // rescaled dispersive coupling
    void validate() const;
};

enum class Branch { s0, s1 };

/// Closed-form quantities transcribed from the reference analysis as explicit
/// rational functions of (gamma, chi): the branch Bloch vectors, the
/// dephasing-rate pair alpha = -zeta + i*xi, the beta quotient
/// (x1+i*y1)/(x2+i*y2), and the resolved pair zeta' = -Re[alpha/(1+beta)],
/// xi' = Im[alpha/(1+beta)].
struct TwoQubitClosedForm {
    std::array<double, 3> bloch_s0{};  // coefficients of sigma_{x,y,z}
    std::array<double, 3> bloch_s1{};
    double zeta = 0.0;
    double xi = 0.0;
    double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
    cplx beta{0.0, 0.0};
    double zeta_prime = 0.0;
    double xi_prime = 0.0;
};

/// L_A = 0, L_B = drive + decay (H_B = -u sigma_y with u = 1 after
/// rescaling, jump sigma_- at rate gamma), L_AB = chi sigma_z (x) sigma_z.
BipartiteLindblad build_two_qubit(const TwoQubitParams& p);

/// Branch steady state of qubit B: Bloch coefficients
/// (2 gamma/D, -/+ 8 chi/D, -(16 chi^2+gamma^2)/(2D)), D = 16 chi^2+gamma^2+8;
/// minus sign on the y component for s0.
DensityVec two_qubit_branch_state(const TwoQubitParams& p, Branch branch);

TwoQubitClosedForm two_qubit_closed_form(const TwoQubitParams& p);

/// 4x4 dephasing generator on A's vectorized space:
/// d rho/d tau = i(xi/2)[sigma_z, rho] + (zeta/2)(sigma_z rho sigma_z - rho);
/// spectrum {0, 0, -zeta+i*xi, -zeta-i*xi}.
ComplexMatrix two_qubit_effective_generator(const TwoQubitClosedForm& cf);

/// Rescale the coherences of rho0 by 1/(1+beta) and 1/(1+conj(beta));
/// populations untouched. Throws on beta = -1.
DensityVec modified_initial_state(const DensityVec& rho0_a, cplx beta);

/// Evolution operator of the resolved dephasing dynamics:
/// e^{(-zeta'+i xi') t} on the |0><1| coherence, conjugate on |1><0|,
/// identity on populations.
ComplexMatrix two_qubit_u(double t, const TwoQubitClosedForm& cf);

struct RabiParams {
    double g = 0.5;          // lambda / sqrt(Omega omega_0), normal phase g < 1
    double eta = 0.1;        // sqrt(omega_0 / Omega)
    double kappa = 0.1;      // photon loss
    double gamma_spin = 1.0; // spin relaxation (Gamma)
    std::size_t fock_cutoff = 12;
    void validate() const;
};

/// Truncated boson annihilation operator, a|n> = sqrt(n)|n-1>.
ComplexMatrix destroy(std::size_t n);

/// A = truncated boson: L_A = -i eta [a^dag a, .] + kappa D_a;
/// B = spin: L_B = -i (1/eta) [sigma_z, .] + Gamma D_{sigma_-};
/// L_AB = -i g [(a + a^dag) (x) sigma_x, .].
BipartiteLindblad build_rabi(const RabiParams& p);

/// Coefficients of the analytic effective boson Lindbladian
///   -i[H_A, .] + kappa D_a + dissipator_rate * D_{a+a^dag},
///   H_A = eta a^dag a - hamiltonian_shift (a+a^dag)^2.
/// The dissipator rate is 4 g^2 eta^2 Gamma / (Gamma^2 eta^2 + 16); the
/// Hamiltonian shift is 8 g^2 eta / (Gamma^2 eta^2 + 16) (twice the
/// coefficient printed in the reference text, whose final display halves the
/// shift relative to its own derivation; the dissipationless limit g^2 eta/2
/// pins the factor).
struct RabiEffectiveCoefficients {
    double hamiltonian_shift = 0.0;
    double dissipator_rate = 0.0;
};
RabiEffectiveCoefficients rabi_effective_coefficients(const RabiParams& p);

/// N^2 x N^2 analytic effective boson generator on the truncated Fock space.
ComplexMatrix rabi_effective_generator(const RabiParams& p);

}  // namespace adel
