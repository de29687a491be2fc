#include "qpack/qec.hpp"

namespace qpack {

namespace {

// Diagonal correction for ancilla outcome M: Theta X^{-M} Theta^dag X^{M}.
Matrix injection_correction(int r, int N, int M) {
    const Matrix theta = theta_r(ThetaGateParam{r, N}).matrix;
    const Matrix xm = weyl_xz(N, M, 0).matrix;
    return Matrix(theta * xm.adjoint() * theta.adjoint() * xm);
}

}  // namespace

std::vector<InjectionBranch> inject_theta_branches(const RegisterState& psi, int r) {
    if (psi.n_sites() != 1) throw std::invalid_argument("inject_theta: expected one data qudit");
    const auto& charge = psi.charge();
    const int N = charge.dims.N;
    const Matrix theta = theta_r(ThetaGateParam{r, N}).matrix;

    // Ancilla |M_r> = Theta_r H |0> appended as site 1.
    RegisterState joint(charge, 2);
    {
        Vector anc = Vector::Zero(N);
        const double s = 1.0 / std::sqrt(static_cast<double>(N));
        for (int K = 0; K < N; ++K) anc[K] = s * theta(K, K);
        Vector& amp = joint.amplitudes();
        const Vector& in = psi.amplitudes();
        const int m = charge.local_dim_ext;
        for (int J = 0; J < N; ++J)
            for (int K = 0; K < N; ++K)
                amp[static_cast<long long>(J) * m + K] = in[J] * anc[K];
        joint.renormalize();
    }
    // Inverse CSUM: data controls a decrement of the ancilla.
    apply_local(joint, Matrix(csum(N).matrix.adjoint()), {0, 1});

    std::vector<InjectionBranch> out;
    for (int M = 0; M < N; ++M) {
        // project ancilla onto |M>
        RegisterState branch(charge, 1);
        Vector& b = branch.amplitudes();
        const int m = charge.local_dim_ext;
        double p = 0.0;
        for (int J = 0; J < N; ++J) {
            b[J] = joint.amplitudes()[static_cast<long long>(J) * m + M];
            p += std::norm(b[J]);
        }
        if (p < 1e-300) continue;
        branch.renormalize();
        apply_local(branch, injection_correction(r, N, M), {0});
        out.push_back(InjectionBranch{M, p, std::move(branch)});
    }
    return out;
}

RegisterState inject_theta(const RegisterState& psi, int r, Rng& rng) {
    auto branches = inject_theta_branches(psi, r);
    std::vector<double> probs;
    probs.reserve(branches.size());
    for (auto& br : branches) probs.push_back(br.probability);
    return branches[rng.weighted(probs)].state;
}

}  // namespace qpack
