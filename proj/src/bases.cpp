#include "qpack/bases.hpp"

#include "qpack/gates.hpp"

namespace qpack {

namespace {
void check_range(int v, int bound, const char* what) {
    if (v < 0 || v >= bound) throw std::invalid_argument(std::string(what) + " out of range");
}
}  // namespace

RegisterState bell_state(const BellIndex& idx, const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    check_range(idx.m, dims.N, "bell m");
    check_range(idx.n, dims.N, "bell n");
    RegisterState s(charge, 2);
    const int m_ext = charge.local_dim_ext;
    Vector& amp = s.amplitudes();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.N));
    for (int J = 0; J < dims.N; ++J) {
        const int K = (J + idx.n) % dims.N;
        amp[static_cast<long long>(J) * m_ext + K] =
            scale * dims.omega_pow(static_cast<long long>(idx.m) * J);
    }
    return s;
}

RegisterState bell_two_index(int mu, int nu, int n_int, int n_ext,
                             const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    check_range(mu, dims.d, "bell mu");
    check_range(nu, dims.D, "bell nu");
    check_range(n_int, dims.d, "bell n_int");
    check_range(n_ext, dims.D, "bell n_ext");
    RegisterState s(charge, 2);
    const int m_ext = charge.local_dim_ext;
    Vector& amp = s.amplitudes();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.N));
    for (int j = 0; j < dims.d; ++j)
        for (int k = 0; k < dims.D; ++k) {
            const int a = j * dims.D + k;
            const int b = ((j + n_int) % dims.d) * dims.D + (k + n_ext) % dims.D;
            amp[static_cast<long long>(a) * m_ext + b] =
                scale * dims.omega_d_pow(static_cast<long long>(mu) * j) *
                dims.omega_D_pow(static_cast<long long>(nu) * k);
        }
    return s;
}

RegisterState bell_resynthesize(int J, int n, const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    check_range(J, dims.N, "bell J");
    check_range(n, dims.N, "bell n");
    RegisterState acc(charge, 2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.N));
    for (int m = 0; m < dims.N; ++m) {
        RegisterState term = bell_state({m, n}, charge);
        acc.amplitudes() +=
            scale * dims.omega_pow(-static_cast<long long>(m) * J) * term.amplitudes();
    }
    return acc;
}

RegisterState bell_two_index_resynthesize(int j, int k, int n_int, int n_ext,
                                          const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    RegisterState acc(charge, 2);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.N));
    for (int mu = 0; mu < dims.d; ++mu)
        for (int nu = 0; nu < dims.D; ++nu) {
            RegisterState term = bell_two_index(mu, nu, n_int, n_ext, charge);
            acc.amplitudes() += scale * dims.omega_d_pow(-static_cast<long long>(mu) * j) *
                                dims.omega_D_pow(-static_cast<long long>(nu) * k) *
                                term.amplitudes();
        }
    return acc;
}

namespace {

// Quadratic phase theta(m) with theta(m) - theta(m-1) = m - 1 so that the
// column n of B_XZ is the X_N Z_N eigenvector with eigenvalue omega^(-n)
// (odd N; for even N the m(m+N)/2 substitute keeps the half-integer phase
// well defined and shifts every eigenvalue by a common factor).
cx xz_phase(int m, int n, int N) {
    const bool even = (N % 2 == 0);
    const double theta =
        even ? (static_cast<double>(m) * (m + N) / 2.0 - m) : (static_cast<double>(m) * (m - 1) / 2.0);
    return unit_phase(theta + static_cast<double>(n) * m, N);
}

}  // namespace

MUBFamily mub_triplet(int N) {
    if (N < 2) throw std::invalid_argument("mub_triplet: N must be >= 2");
    MUBFamily fam;
    fam.N = N;
    fam.kind = MUBKind::CanonicalTriplet;
    fam.bases.push_back(Matrix::Identity(N, N));
    fam.bases.push_back(fourier_h(N).matrix);
    Matrix xz(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m) xz(m, n) = scale * xz_phase(m, n, N);
    fam.bases.push_back(std::move(xz));
    return fam;
}

MUBFamily mub_complete_prime(int p) {
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) throw std::invalid_argument("mub_complete_prime: p must be prime");
    MUBFamily fam;
    fam.N = p;
    fam.kind = MUBKind::CanonicalTriplet;
    fam.bases.push_back(Matrix::Identity(p, p));
    if (p == 2) {
        fam.bases.push_back(fourier_h(2).matrix);
        Matrix y(2, 2);
        const double s = 1.0 / std::sqrt(2.0);
        y << s, s, cx(0, 1) * s, cx(0, -1) * s;
        fam.bases.push_back(std::move(y));
        return fam;
    }
    // For odd prime p the p bases {(1/sqrt p) omega^(t m^2 + n m)} with
    // t = 0..p-1 together with the computational basis are mutually unbiased.
    const double scale = 1.0 / std::sqrt(static_cast<double>(p));
    for (int t = 0; t < p; ++t) {
        Matrix b(p, p);
        for (int n = 0; n < p; ++n)
            for (int m = 0; m < p; ++m) {
                long long e = (static_cast<long long>(t) * m % p) * m + static_cast<long long>(n) * m;
                b(m, n) = scale * unit_phase(static_cast<double>(e % p), p);
            }
        fam.bases.push_back(std::move(b));
    }
    return fam;
}

MUBFamily product_mubs(const MUBFamily& internal_family, const MUBFamily& external_family) {
    MUBFamily fam;
    fam.N = internal_family.N * external_family.N;
    fam.kind = MUBKind::ProductExtension;
    for (const auto& a : internal_family.bases)
        for (const auto& b : external_family.bases) {
            Matrix out(fam.N, fam.N);
            for (long long i = 0; i < a.rows(); ++i)
                for (long long j = 0; j < a.cols(); ++j)
                    out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
            fam.bases.push_back(std::move(out));
        }
    return fam;
}

std::vector<std::vector<double>> mub_overlap_table(const Matrix& a, const Matrix& b) {
    std::vector<std::vector<double>> table(a.cols(), std::vector<double>(b.cols(), 0.0));
    for (long long i = 0; i < a.cols(); ++i)
        for (long long j = 0; j < b.cols(); ++j)
            table[i][j] = std::norm(cx(a.col(i).dot(b.col(j))));
    return table;
}

double mub_unbiasedness_error(const MUBFamily& family) {
    double worst = 0.0;
    const double target = 1.0 / family.N;
    for (size_t i = 0; i < family.bases.size(); ++i)
        for (size_t j = i + 1; j < family.bases.size(); ++j) {
            auto t = mub_overlap_table(family.bases[i], family.bases[j]);
            for (auto& row : t)
                for (double v : row) worst = std::max(worst, std::abs(v - target));
        }
    return worst;
}

double mub_cross_unbiasedness_error(const MUBFamily& family, const MUBFamily& reference) {
    double worst = 0.0;
    const double target = 1.0 / family.N;
    for (const auto& a : family.bases)
        for (const auto& b : reference.bases) {
            auto t = mub_overlap_table(a, b);
            for (auto& row : t)
                for (double v : row) worst = std::max(worst, std::abs(v - target));
        }
    return worst;
}

RegisterState ghz_state(int n_parties, const ChargeAssignment& charge) {
    if (n_parties < 2) throw std::invalid_argument("ghz_state: need at least 2 parties");
    const auto& dims = charge.dims;
    RegisterState s(charge, n_parties);
    Vector& amp = s.amplitudes();
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.N));
    for (int J = 0; J < dims.N; ++J) {
        long long idx = 0;
        for (int p = 0; p < n_parties; ++p) idx = idx * charge.local_dim_ext + J;
        amp[idx] = scale;
    }
    return s;
}

}  // namespace qpack
