#include "adel/models.hpp"

#include <cmath>

namespace adel {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void TwoQubitParams::validate() const {
    require(gamma > 0.0, "TwoQubitParams: gamma must be > 0");
    require(std::isfinite(gamma) && std::isfinite(chi), "TwoQubitParams: non-finite");
}

BipartiteLindblad build_two_qubit(const TwoQubitParams& p) {
    p.validate();
    BipartiteLindblad m;
    m.space = BipartiteSpace{2, 2};
    // A has no dynamics of its own (its slow dissipation is omitted).
    m.part_a.hamiltonian = ComplexMatrix(2, 2);
    // u [sigma_+ - sigma_-, rho] = -i[-u sigma_y, rho]; u = 1 in rescaled time.
    m.part_b.hamiltonian = cplx{-1.0, 0.0} * pauli_y();
    m.part_b.jumps.push_back({sigma_minus(), p.gamma});
    m.coupling_hamiltonian = cplx{p.chi, 0.0} * kron(pauli_z(), pauli_z());
    return m;
}

DensityVec two_qubit_branch_state(const TwoQubitParams& p, Branch branch) {
    p.validate();
    const double s = 16.0 * p.chi * p.chi + p.gamma * p.gamma;
    const double d = s + 8.0;
    const double bx = 2.0 * p.gamma / d;
    const double by = (branch == Branch::s0 ? -8.0 : 8.0) * p.chi / d;
    const double bz = -s / (2.0 * d);
    ComplexMatrix rho = 0.5 * ComplexMatrix::identity(2) + bx * pauli_x() +
                        by * pauli_y() + bz * pauli_z();
    return density_vec(rho);
}

TwoQubitClosedForm two_qubit_closed_form(const TwoQubitParams& p) {
    p.validate();
    const double g = p.gamma, c = p.chi;
    const double g2 = g * g, c2 = c * c;
    const double s = 16.0 * c2 + g2;
    const double d = s + 8.0;

    TwoQubitClosedForm cf;
    cf.bloch_s0 = {2.0 * g / d, -8.0 * c / d, -s / (2.0 * d)};
    cf.bloch_s1 = {2.0 * g / d, 8.0 * c / d, -s / (2.0 * d)};

    const double den =
        4.0 * c2 * g2 * (s - 16.0) * (s - 16.0) + (g2 + 8.0) * (g2 + 8.0) * d * d;
    cf.zeta = 128.0 * c2 * g * (g2 + 8.0) * (s + 2.0) / den;
    cf.xi = 2.0 * c * s / d +
            256.0 * c2 * c * g2 * (s - 16.0) * (s + 2.0) / (den * d);

    cf.x1 = c2 * (49152.0 * c2 * c2 * g2 - 262144.0 * c2 * c2 +
                  6144.0 * c2 * g2 * g2 + 2048.0 * c2 * g2 - 131072.0 * c2 +
                  192.0 * g2 * g2 * g2 + 1152.0 * g2 * g2 - 5120.0 * g2 - 16384.0);
    cf.y1 = 256.0 * c2 * c * g * (s + 4.0) * d;
    cf.x2 = (s + 4.0) *
            (-32.0 * c2 * c * g + 16.0 * c2 * g2 + 128.0 * c2 - 2.0 * c * g2 * g +
             32.0 * c * g + g2 * g2 + 16.0 * g2 + 64.0) *
            (32.0 * c2 * c * g + 16.0 * c2 * g2 + 128.0 * c2 + 2.0 * c * g2 * g -
             32.0 * c * g + g2 * g2 + 16.0 * g2 + 64.0);
    cf.y2 = 4.0 * c * g * (g2 + 8.0) * (s - 16.0) * (s + 4.0) * d;
    cf.beta = cplx{cf.x1, cf.y1} / cplx{cf.x2, cf.y2};

    const cplx alpha{-cf.zeta, cf.xi};
    const cplx resolved = alpha / (cplx{1.0, 0.0} + cf.beta);
    cf.zeta_prime = -resolved.real();
    cf.xi_prime = resolved.imag();
    return cf;
}

ComplexMatrix two_qubit_effective_generator(const TwoQubitClosedForm& cf) {
    const ComplexMatrix sz = pauli_z();
    const ComplexMatrix id = ComplexMatrix::identity(2);
    // i(xi/2)[sz, .] + (zeta/2)(sz . sz - .)
    ComplexMatrix gen =
        cplx{0.0, cf.xi / 2.0} * (sandwich(sz, id).matrix - sandwich(id, sz).matrix) +
        cplx{cf.zeta / 2.0, 0.0} *
            (sandwich(sz, sz).matrix - ComplexMatrix::identity(4));
    return gen;
}

DensityVec modified_initial_state(const DensityVec& rho0_a, cplx beta) {
    require(rho0_a.dim == 2 && rho0_a.ordering == Ordering::flat,
            "modified_initial_state: single-qubit FLAT state expected");
    if (std::abs(beta + cplx{1.0, 0.0}) < 1e-14)
        throw std::invalid_argument("modified_initial_state: beta = -1 is singular");
    DensityVec out = rho0_a;
    // vec index j*2+i holds rho(i,j); coherence |0><1| sits at index 2.
    out.vec[2] /= (cplx{1.0, 0.0} + beta);
    out.vec[1] /= (cplx{1.0, 0.0} + std::conj(beta));
    return out;
}

ComplexMatrix two_qubit_u(double t, const TwoQubitClosedForm& cf) {
    require(t >= 0.0, "two_qubit_u: t must be >= 0");
    const cplx lam{-cf.zeta_prime, cf.xi_prime};
    ComplexMatrix u = ComplexMatrix::identity(4);
    // grouped A index (a2, a1): (0,1) -> 1 carries e^{lam t}, (1,0) -> 2 conj.
    u(1, 1) = std::exp(lam * t);
    u(2, 2) = std::exp(std::conj(lam) * t);
    return u;
}

void RabiParams::validate() const {
    require(g >= 0.0 && g < 1.0, "RabiParams: normal phase requires 0 <= g < 1");
    require(eta > 0.0, "RabiParams: eta must be > 0");
    require(kappa >= 0.0 && gamma_spin >= 0.0, "RabiParams: negative rate");
    require(fock_cutoff >= 4, "RabiParams: fock_cutoff must be >= 4");
}

ComplexMatrix destroy(std::size_t n) {
    ComplexMatrix a(n, n);
    for (std::size_t k = 1; k < n; ++k)
        a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

BipartiteLindblad build_rabi(const RabiParams& p) {
    p.validate();
    const std::size_t n = p.fock_cutoff;
    const ComplexMatrix a = destroy(n);
    const ComplexMatrix x = a + adjoint(a);

    BipartiteLindblad m;
    m.space = BipartiteSpace{n, 2};
    m.part_a.hamiltonian = p.eta * (adjoint(a) * a);
    m.part_a.jumps.push_back({a, p.kappa});
    m.part_b.hamiltonian = (1.0 / p.eta) * pauli_z();
    m.part_b.jumps.push_back({sigma_minus(), p.gamma_spin});
    m.coupling_hamiltonian = cplx{p.g, 0.0} * kron(x, pauli_x());
    return m;
}

RabiEffectiveCoefficients rabi_effective_coefficients(const RabiParams& p) {
    p.validate();
    const double denom = p.gamma_spin * p.gamma_spin * p.eta * p.eta + 16.0;
    RabiEffectiveCoefficients c;
    c.hamiltonian_shift = 8.0 * p.g * p.g * p.eta / denom;
    c.dissipator_rate = 4.0 * p.g * p.g * p.eta * p.eta * p.gamma_spin / denom;
    return c;
}

ComplexMatrix rabi_effective_generator(const RabiParams& p) {
    const RabiEffectiveCoefficients c = rabi_effective_coefficients(p);
    const std::size_t n = p.fock_cutoff;
    const ComplexMatrix a = destroy(n);
    const ComplexMatrix x = a + adjoint(a);
    LindbladModel eff;
    eff.hamiltonian = p.eta * (adjoint(a) * a) - c.hamiltonian_shift * (x * x);
    eff.jumps.push_back({a, p.kappa});
    eff.jumps.push_back({x, c.dissipator_rate});
    return lindblad_superop(eff).matrix;
}

}  // namespace adel
