#pragma once

#include "qpack/report.hpp"
#include "qpack/state.hpp"

namespace qpack {

// Probe for phase estimation under V(phi) = exp(-i phi G) with a generator
// given as a sum of identical single-site terms.
struct MetrologyProbe {
    RegisterState state;
    Matrix site_generator;  // acts on each site; G = sum_k G^{(k)}
};

// F_Q = 4 Var(G) for a pure probe.
double qfi_pure(const MetrologyProbe& probe);

// QFIM for several commuting-or-not single-site generator families:
// [F]_{ab} = 4 Re(<Ga Gb> - <Ga><Gb>), symmetrized.
Eigen::MatrixXd qfim_pure(const RegisterState& state, const std::vector<Matrix>& generators);

// Packaged GHZ probe (1/sqrt d) sum_j |j>^(x)n with external labels fixed;
// generator picks out internal level j0 on every site.
MetrologyProbe ghz_probe(int n_sites, int d, int j0 = 0);
// NOON probe over n_sites two-level external modes.
MetrologyProbe noon_probe(int n_sites);

// Closed-form dephased-GHZ QFI 4 (n^2/d) e^{-gamma t} plus a trajectory
// estimate of the decay factor (random collective Z-phase kicks).
struct DephasedGhzResult {
    double closed_form = 0.0;
    double var_based_t0 = 0.0;  // 4 n^2 (1/d - 1/d^2), surfaced for comparison
    double trajectory_estimate = 0.0;
    long samples = 0;
};
DephasedGhzResult qfi_dephased_ghz(int n_sites, int d, double gamma, double t, long samples,
                                   std::uint64_t seed);

// Fidelity-curvature cross-check: central finite difference of
// |<psi|exp(-i phi G)|psi>|^2 at phi = 0 (equals qfi_pure up to O(h^2)).
double qfi_finite_difference(const MetrologyProbe& probe, double step = 1e-3);

}  // namespace qpack
