#include "qpack/metrology.hpp"

#include <Eigen/Eigenvalues>

namespace qpack {

namespace {

// |out> = G |psi> with G = sum over sites of the single-site generator.
RegisterState apply_generator_sum(const RegisterState& psi, const Matrix& g) {
    RegisterState acc(psi.charge(), psi.n_sites());
    acc.amplitudes().setZero();
    for (int s = 0; s < psi.n_sites(); ++s) {
        RegisterState term = applied_local(psi, g, {s});
        acc.amplitudes() += term.amplitudes();
    }
    return acc;
}

}  // namespace

double qfi_pure(const MetrologyProbe& probe) {
    if (!is_hermitian(probe.site_generator, kNormTol))
        throw contract_error("qfi_pure: generator not hermitian");
    RegisterState gpsi = apply_generator_sum(probe.state, probe.site_generator);
    const double g2 = gpsi.amplitudes().squaredNorm();
    const cx g1 = probe.state.inner(gpsi);
    return 4.0 * (g2 - std::norm(g1));
}

Eigen::MatrixXd qfim_pure(const RegisterState& state, const std::vector<Matrix>& generators) {
    const int k = static_cast<int>(generators.size());
    std::vector<RegisterState> gpsi;
    std::vector<cx> mean(k);
    gpsi.reserve(k);
    for (int i = 0; i < k; ++i) {
        if (!is_hermitian(generators[i], kNormTol))
            throw contract_error("qfim_pure: generator not hermitian");
        gpsi.push_back(apply_generator_sum(state, generators[i]));
        mean[i] = state.inner(gpsi[i]);
    }
    Eigen::MatrixXd f(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = i; j < k; ++j) {
            const cx cov = gpsi[i].inner(gpsi[j]) - std::conj(mean[i]) * mean[j];
            f(i, j) = f(j, i) = 4.0 * cov.real();
        }
    return f;
}

MetrologyProbe ghz_probe(int n_sites, int d, int j0) {
    const auto dims = make_dims(d, 1);
    const auto charge = ChargeAssignment::bare(dims);
    RegisterState state(charge, n_sites);
    Vector& amp = state.amplitudes();
    const double s = 1.0 / std::sqrt(static_cast<double>(d));
    for (int j = 0; j < d; ++j) {
        long long idx = 0;
        for (int p = 0; p < n_sites; ++p) idx = idx * d + j;
        amp[idx] = s;
    }
    Matrix g = Matrix::Zero(d, d);
    g(j0, j0) = 1.0;
    return MetrologyProbe{std::move(state), std::move(g)};
}

MetrologyProbe noon_probe(int n_sites) {
    const auto dims = make_dims(1, 2);
    const auto charge = ChargeAssignment::bare(dims);
    RegisterState state(charge, n_sites);
    Vector& amp = state.amplitudes();
    const double s = 1.0 / std::sqrt(2.0);
    amp[0] = s;                      // |0...0>
    amp[amp.size() - 1] = s;         // |1...1>
    // Balanced +-1 mode generator: the branch eigenvalues are +-n, which
    // realizes the 4 n^2 Heisenberg value (the bare projector sum gives n^2).
    Matrix g = Matrix::Zero(2, 2);
    g(0, 0) = -1.0;
    g(1, 1) = 1.0;
    return MetrologyProbe{std::move(state), std::move(g)};
}

DephasedGhzResult qfi_dephased_ghz(int n_sites, int d, double gamma, double t, long samples,
                                   std::uint64_t seed) {
    if (n_sites < 1 || d < 1 || gamma < 0 || t < 0)
        throw std::invalid_argument("qfi_dephased_ghz: bad parameters");
    DephasedGhzResult res;
    const double n2 = static_cast<double>(n_sites) * n_sites;
    res.closed_form = 4.0 * (n2 / d) * std::exp(-gamma * t);
    res.var_based_t0 = 4.0 * n2 * (1.0 / d - 1.0 / (d * d));
    res.samples = samples;
    // Trajectory estimate of the coherence decay factor: each site kicks the
    // reference branch by a random phase of variance gamma t / n, so the
    // branch coherence amplitude averages to e^{-gamma t / 2}.
    Rng rng(seed);
    cx acc = 0.0;
    const double sigma = std::sqrt(gamma * t / n_sites);
    for (long s = 0; s < samples; ++s) {
        double total = 0.0;
        for (int i = 0; i < n_sites; ++i) total += rng.gaussian(0.0, sigma);
        acc += std::polar(1.0, total);
    }
    const double coherence = std::abs(acc) / static_cast<double>(samples);
    res.trajectory_estimate = 4.0 * (n2 / d) * coherence * coherence;
    return res;
}

double qfi_finite_difference(const MetrologyProbe& probe, double step) {
    // dense generator over the full register (probe registers are small)
    const int m = probe.state.local_dim();
    const long long dim = probe.state.dim();
    Matrix g_full = Matrix::Zero(dim, dim);
    for (int s = 0; s < probe.state.n_sites(); ++s) {
        // G^{(s)} = I (x) ... (x) g (x) ... (x) I
        for (long long row = 0; row < dim; ++row) {
            long long rest = row;
            std::vector<int> digits(probe.state.n_sites());
            for (int p = probe.state.n_sites() - 1; p >= 0; --p) {
                digits[p] = static_cast<int>(rest % m);
                rest /= m;
            }
            for (int b = 0; b < m; ++b) {
                const cx v = probe.site_generator(digits[s], b);
                if (v == cx(0.0)) continue;
                long long col = 0;
                for (int p = 0; p < probe.state.n_sites(); ++p)
                    col = col * m + (p == s ? b : digits[p]);
                g_full(row, col) += v;
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(g_full);
    auto overlap_sq = [&](double phi) {
        const Vector& psi = probe.state.amplitudes();
        Vector coeff = es.eigenvectors().adjoint() * psi;
        cx acc = 0.0;
        for (long long i = 0; i < dim; ++i)
            acc += std::norm(coeff[i]) * std::polar(1.0, -phi * es.eigenvalues()[i]);
        return std::norm(acc);
    };
    const double f0 = overlap_sq(0.0);
    const double fp = overlap_sq(step);
    const double fm = overlap_sq(-step);
    return -2.0 * (fp - 2.0 * f0 + fm) / (step * step);
}

}  // namespace qpack
