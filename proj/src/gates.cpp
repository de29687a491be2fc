#include "qpack/gates.hpp"

#include <numeric>

namespace qpack {

namespace {

GateOp make_gate(std::string name, Matrix m, int arity,
                 GaugeStatus status = GaugeStatus::VerifiedInvariant) {
    return GateOp{std::move(name), std::move(m), arity, status};
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long long i = 0; i < a.rows(); ++i)
        for (long long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix shift_matrix(int n) {
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m((j + 1) % n, j) = 1.0;
    return m;
}

Matrix clock_matrix(int n) {
    Matrix m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) m(j, j) = unit_phase(j, n);
    return m;
}

Matrix fourier_matrix(int n) {
    Matrix m(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            m(j, k) = s * unit_phase(static_cast<long long>(j) * k % n, n);
    return m;
}

Matrix mat_pow(Matrix base, long long e) {
    Matrix acc = Matrix::Identity(base.rows(), base.cols());
    while (e > 0) {
        if (e & 1) acc = Matrix(acc * base);
        base = Matrix(base * base);
        e >>= 1;
    }
    return acc;
}

}  // namespace

GateOp weyl_x(int N) { return make_gate("XN", shift_matrix(N), 1); }
GateOp weyl_z(int N) { return make_gate("ZN", clock_matrix(N), 1); }
GateOp fourier_h(int N) { return make_gate("HN", fourier_matrix(N), 1); }

GateOp parity_p(int N) {
    Matrix m = Matrix::Zero(N, N);
    for (int j = 0; j < N; ++j) m((N - j) % N, j) = 1.0;
    return make_gate("P", std::move(m), 1);
}

GateOp weyl_xz(int N, int s, int t) {
    Matrix m = Matrix(mat_pow(shift_matrix(N), ((s % N) + N) % N) *
                      mat_pow(clock_matrix(N), ((t % N) + N) % N));
    return make_gate("X^" + std::to_string(s) + "Z^" + std::to_string(t), std::move(m), 1);
}

WeylBlock internal_block(const HybridDims& dims) {
    Matrix id = Matrix::Identity(dims.D, dims.D);
    return WeylBlock{make_gate("Xd", kron(shift_matrix(dims.d), id), 1),
                     make_gate("Zd", kron(clock_matrix(dims.d), id), 1),
                     make_gate("Hd", kron(fourier_matrix(dims.d), id), 1)};
}

WeylBlock external_block(const HybridDims& dims) {
    Matrix id = Matrix::Identity(dims.d, dims.d);
    return WeylBlock{make_gate("XD", kron(id, shift_matrix(dims.D)), 1),
                     make_gate("ZD", kron(id, clock_matrix(dims.D)), 1),
                     make_gate("HD", kron(id, fourier_matrix(dims.D)), 1)};
}

GateOp csum(int N) {
    Matrix m = Matrix::Zero(N * N, N * N);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) m(j * N + (k + j) % N, j * N + k) = 1.0;
    return make_gate("CSUM", std::move(m), 2);
}

GateOp csum_internal(const HybridDims& dims) {
    const int N = dims.N;
    Matrix m = Matrix::Zero(N * N, N * N);
    for (int c = 0; c < N; ++c) {
        const int j = c / dims.D;
        for (int t = 0; t < N; ++t) {
            const int tj = t / dims.D, tk = t % dims.D;
            const int t2 = ((tj + j) % dims.d) * dims.D + tk;
            m(c * N + t2, c * N + t) = 1.0;
        }
    }
    return make_gate("CSUMd", std::move(m), 2);
}

GateOp cphi(const HybridDims& dims) {
    const int N = dims.N;
    Matrix m = Matrix::Zero(N * N, N * N);
    for (int c = 0; c < N; ++c) {
        const int k = c % dims.D;  // external label of the control site
        for (int t = 0; t < N; ++t) {
            const int tj = t / dims.D;
            m(c * N + t, c * N + t) = dims.omega_d_pow(static_cast<long long>(k) * tj);
        }
    }
    return make_gate("CPHI", std::move(m), 2);
}

// Any r coprime to N gives a non-Clifford phase once N >= 3; at N = 2 the
// whole family degenerates to {I, Z, S, S^dag}, so it is rejected and the
// pi/8 gate stands in.
bool theta_param_valid(int r, int N) {
    if (N < 3) return false;
    return std::gcd(std::abs(r), N) == 1;
}

GateOp theta_r(const ThetaGateParam& param) {
    if (!theta_param_valid(param.r, param.N))
        throw std::invalid_argument("theta_r: require gcd(r,N)=1 and N >= 3");
    const int N = param.N;
    Matrix m = Matrix::Zero(N, N);
    const long long n2 = static_cast<long long>(N) * N;
    const long long rr = ((param.r % n2) + n2) % n2;
    for (int J = 0; J < N; ++J) {
        long long e = (rr * J % n2) * J % n2;
        m(J, J) = unit_phase(static_cast<double>(e), static_cast<double>(n2));
    }
    return make_gate("THETA(" + std::to_string(param.r) + ")", std::move(m), 1);
}

GateOp t8() {
    Matrix m = Matrix::Identity(2, 2);
    m(1, 1) = unit_phase(1, 8);
    return make_gate("T8", std::move(m), 1);
}

GateOp hybrid_swap(const HybridDims& dims) {
    const int N = dims.N;
    Matrix m = Matrix::Zero(N * N, N * N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) m(b * N + a, a * N + b) = 1.0;
    return make_gate("SWAP", std::move(m), 2);
}

GateOp mixed_flag(const HybridDims& dims) {
    // F = X_d Z_D: |j,k> -> omega_D^k |(j+1) mod d, k>
    const int N = dims.N;
    Matrix m = Matrix::Zero(N, N);
    for (int j = 0; j < dims.d; ++j)
        for (int k = 0; k < dims.D; ++k)
            m(((j + 1) % dims.d) * dims.D + k, j * dims.D + k) = dims.omega_D_pow(k);
    return make_gate("F", std::move(m), 1);
}

GateOp controlled_power(const GateOp& u, int control_dim) {
    if (!is_unitary(u.matrix, kNormTol))
        throw contract_error("controlled_power: operator is not unitary");
    const long long t = u.matrix.rows();
    Matrix m = Matrix::Zero(control_dim * t, control_dim * t);
    Matrix pow = Matrix::Identity(t, t);
    for (int x = 0; x < control_dim; ++x) {
        m.block(x * t, x * t, t, t) = pow;
        pow = Matrix(pow * u.matrix);
    }
    GaugeStatus st = u.gauge_status == GaugeStatus::VerifiedInvariant
                         ? GaugeStatus::VerifiedInvariant
                         : GaugeStatus::Unchecked;
    return make_gate("C-" + u.name, std::move(m), 2, st);
}

GateOp weyl_z_frac(int N, int num, int den) {
    if (den == 0) throw std::invalid_argument("weyl_z_frac: zero denominator");
    Matrix m = Matrix::Zero(N, N);
    for (int J = 0; J < N; ++J)
        m(J, J) = unit_phase(static_cast<double>(J) * num, static_cast<double>(N) * den);
    return make_gate("ZN^(" + std::to_string(num) + "/" + std::to_string(den) + ")",
                     std::move(m), 1);
}

GateOp weyl_x_frac(int N, int num, int den) {
    Matrix h = fourier_matrix(N);
    Matrix m = Matrix(h.adjoint() * weyl_z_frac(N, num, den).matrix * h);
    return make_gate("XN^(" + std::to_string(num) + "/" + std::to_string(den) + ")",
                     std::move(m), 1);
}

GateOp charge_raising_op(const ChargeAssignment& charge) {
    const int plus = charge.charged_label(+1);
    if (plus < 0) throw std::invalid_argument("charge_raising_op: no +1 charged label");
    Matrix m = Matrix::Identity(charge.local_dim_ext, charge.local_dim_ext);
    m(0, 0) = m(plus, plus) = 0.0;
    m(plus, 0) = m(0, plus) = 1.0;
    return make_gate("RAISE", std::move(m), 1, GaugeStatus::Violating);
}

GateOp gate_by_name(const std::string& token, const HybridDims& dims) {
    std::string name = token;
    bool dagger = false;
    static const std::string kDagger = "†";
    if (name.size() >= kDagger.size() &&
        name.compare(name.size() - kDagger.size(), kDagger.size(), kDagger) == 0) {
        dagger = true;
        name.erase(name.size() - kDagger.size());
    }
    GateOp g;
    if (name == "XN") g = weyl_x(dims.N);
    else if (name == "ZN") g = weyl_z(dims.N);
    else if (name == "HN") g = fourier_h(dims.N);
    else if (name == "P") g = parity_p(dims.N);
    else if (name == "CSUM") g = csum(dims.N);
    else if (name == "SWAP") g = hybrid_swap(dims);
    else if (name == "F") g = mixed_flag(dims);
    else if (name == "T8") g = t8();
    else if (name == "Xd") g = internal_block(dims).x;
    else if (name == "Zd") g = internal_block(dims).z;
    else if (name == "Hd") g = internal_block(dims).h;
    else if (name == "XD") g = external_block(dims).x;
    else if (name == "ZD") g = external_block(dims).z;
    else if (name == "HD") g = external_block(dims).h;
    else if (name == "CSUMd") g = csum_internal(dims);
    else if (name == "CPHI") g = cphi(dims);
    else if (name.rfind("THETA(", 0) == 0 && name.back() == ')') {
        const int r = std::stoi(name.substr(6, name.size() - 7));
        g = theta_r(ThetaGateParam{r, dims.N});
    } else {
        throw std::invalid_argument("unknown gate token: " + token);
    }
    if (dagger) {
        g.matrix = Matrix(g.matrix.adjoint());
        g.name = token;
    }
    return g;
}

bool is_pauli_up_to_phase(const Matrix& m, int N, double tol) {
    for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
            Matrix p = weyl_xz(N, s, t).matrix;
            // m ~ e^{i phi} p : compare |entries|
            cx phase = 0.0;
            bool ok = true;
            for (int a = 0; a < N && ok; ++a)
                for (int b = 0; b < N && ok; ++b) {
                    if (std::abs(p(a, b)) < 0.5) {
                        if (std::abs(m(a, b)) > tol) ok = false;
                    } else {
                        if (phase == cx(0.0)) phase = m(a, b) / p(a, b);
                        if (std::abs(m(a, b) - phase * p(a, b)) > tol) ok = false;
                    }
                }
            if (ok && std::abs(std::abs(phase) - 1.0) <= tol) return true;
        }
    return false;
}

bool conjugates_paulis_to_paulis(const Matrix& u, int N, double tol) {
    const Matrix ud = u.adjoint();
    for (int s = 0; s < N; ++s)
        for (int t = 0; t < N; ++t) {
            if (s == 0 && t == 0) continue;
            Matrix c = Matrix(u * weyl_xz(N, s, t).matrix * ud);
            if (!is_pauli_up_to_phase(c, N, tol)) return false;
        }
    return true;
}

}  // namespace qpack
