#include "qpack/qec.hpp"

namespace qpack {

Matrix WeylStabilizer::site_matrix(int N, size_t i) const {
    return weyl_xz(N, x_exp[i], z_exp[i]).matrix;
}

int measure_stabilizer_phase(const RegisterState& state, const WeylStabilizer& stab) {
    const int N = state.dims().N;
    RegisterState tmp = state;
    for (size_t i = 0; i < stab.sites.size(); ++i)
        apply_local(tmp, stab.site_matrix(N, i), {stab.sites[i]});
    const cx ev = state.inner(tmp);
    if (std::abs(std::abs(ev) - 1.0) > 1e-6)
        throw contract_error("measure_stabilizer_phase: state is not a stabilizer eigenstate");
    const double phase = std::arg(ev) * N / (2.0 * kPi);
    int label = static_cast<int>(std::llround(phase));
    return ((label % N) + N) % N;
}

namespace {

// Columns hold sites {3c, 3c+1, 3c+2}.
constexpr int kColumns = 3;

std::vector<WeylStabilizer> shor_stabilizers(int N) {
    std::vector<WeylStabilizer> stabs;
    // Intra-column phase checks Z (x) Z^dag on adjacent qudits (detect shifts).
    for (int c = 0; c < kColumns; ++c)
        for (int pair = 0; pair < 2; ++pair) {
            WeylStabilizer s;
            s.name = "SZ(c" + std::to_string(c) + "," + std::to_string(pair) + ")";
            s.sites = {3 * c + pair, 3 * c + pair + 1};
            s.x_exp = {0, 0};
            s.z_exp = {1, N - 1};
            stabs.push_back(std::move(s));
        }
    // Cross-column shift checks: X on every qudit of one column, X^dag on the
    // next (detect phases).
    for (int c = 0; c < 2; ++c) {
        WeylStabilizer s;
        s.name = "SX(" + std::to_string(c) + ")";
        for (int i = 0; i < 3; ++i) s.sites.push_back(3 * c + i);
        for (int i = 0; i < 3; ++i) s.sites.push_back(3 * (c + 1) + i);
        s.x_exp = {1, 1, 1, N - 1, N - 1, N - 1};
        s.z_exp = {0, 0, 0, 0, 0, 0};
        stabs.push_back(std::move(s));
    }
    return stabs;
}

// Analytic syndrome of a single-site error X^s Z^t at `site`: the six phase
// checks see s through the column pattern, the two shift checks see t through
// the column index.
SyndromeWord shor_syndrome_of(int site, int s, int t, int N) {
    SyndromeWord w(8, 0);
    const int c = site / 3, p = site % 3;
    auto m = [N](int v) { return ((v % N) + N) % N; };
    // Z (x) Z^dag on (3c+pair, 3c+pair+1) picks omega^{s_first - s_second}.
    if (p == 0) w[2 * c] = m(s);
    if (p == 1) {
        w[2 * c] = m(-s);
        w[2 * c + 1] = m(s);
    }
    if (p == 2) w[2 * c + 1] = m(-s);
    // X^{(x)3} (col c) X^dag^{(x)3} (col c+1) picks omega^{t_{c+1} - t_c}.
    if (c == 0) w[6] = m(-t);
    if (c == 1) {
        w[6] = m(t);
        w[7] = m(-t);
    }
    if (c == 2) w[7] = m(t);
    return w;
}

}  // namespace

CodeInstance shor_build(int N) {
    if (N < 2) throw std::invalid_argument("shor_build: N must be >= 2");
    CodeInstance code;
    code.kind = CodeInstance::Kind::Shor9;
    code.N = N;
    code.n_phys = 9;
    code.stabilizers = shor_stabilizers(N);
    for (int site = 0; site < 9; ++site)
        for (int s = 0; s < N; ++s)
            for (int t = 0; t < N; ++t) {
                auto w = shor_syndrome_of(site, s, t, N);
                if (code.syndrome_table.count(w)) continue;
                code.syndrome_table[w] = Recovery{site, (N - s) % N, (N - t) % N};
            }
    // For the phase-repetition codeword the roles swap: Z on one qudit per
    // column raises the logical label (X_L), X^dag across one column clocks
    // it (Z_L).
    code.logical_x.name = "XL";
    code.logical_x.sites = {0, 3, 6};
    code.logical_x.x_exp = {0, 0, 0};
    code.logical_x.z_exp = {1, 1, 1};
    code.logical_z.name = "ZL";
    code.logical_z.sites = {0, 1, 2};
    code.logical_z.x_exp = {N - 1, N - 1, N - 1};
    code.logical_z.z_exp = {0, 0, 0};
    return code;
}

RegisterState shor_codeword_formula(const Vector& logical, const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    const int N = dims.N;
    if (logical.size() != N) throw std::invalid_argument("shor_codeword_formula: bad logical");
    RegisterState out(charge, 9);
    Vector& amp = out.amplitudes();
    const int m = charge.local_dim_ext;
    const double scale = 1.0 / std::pow(static_cast<double>(N), 1.5);
    for (int J = 0; J < N; ++J) {
        if (logical[J] == cx(0.0)) continue;
        for (int K = 0; K < N; ++K)
            for (int L = 0; L < N; ++L)
                for (int M = 0; M < N; ++M) {
                    long long idx = 0;
                    const int cols[3] = {K, L, M};
                    for (int c = 0; c < 3; ++c)
                        for (int i = 0; i < 3; ++i) idx = idx * m + cols[c];
                    amp[idx] += logical[J] * scale *
                                dims.omega_pow(static_cast<long long>(J) * (K + L + M));
                }
    }
    out.renormalize();
    return out;
}

RegisterState shor_encode(const Vector& logical, const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    const int N = dims.N;
    if (logical.size() != N) throw std::invalid_argument("shor_encode: bad logical");
    // |psi>(site 0) (x) |0>^(x)8, copy to the column heads, Fourier each head,
    // then repeat within each column.
    RegisterState state(charge, 9);
    {
        Vector& amp = state.amplitudes();
        const int m = charge.local_dim_ext;
        for (int J = 0; J < N; ++J) {
            long long idx = J;
            for (int rest = 0; rest < 8; ++rest) idx *= m;
            amp[idx] = logical[J];
        }
        state.renormalize();
    }
    const Matrix cs = csum(N).matrix;
    const Matrix h = fourier_h(N).matrix;
    apply_local(state, cs, {0, 3});
    apply_local(state, cs, {0, 6});
    for (int head : {0, 3, 6}) apply_local(state, h, {head});
    for (int c = 0; c < 3; ++c) {
        apply_local(state, cs, {3 * c, 3 * c + 1});
        apply_local(state, cs, {3 * c, 3 * c + 2});
    }
    return state;
}

CorrectionResult shor_correct(const RegisterState& corrupted, const CodeInstance& code) {
    const int N = code.N;
    SyndromeWord w;
    w.reserve(code.stabilizers.size());
    for (const auto& s : code.stabilizers) w.push_back(measure_stabilizer_phase(corrupted, s));
    CorrectionResult res{corrupted, w, true};
    auto it = code.syndrome_table.find(w);
    if (it == code.syndrome_table.end()) {
        res.table_hit = false;
        return res;
    }
    const Recovery& r = it->second;
    if (r.x_power || r.z_power)
        apply_local(res.state, weyl_xz(N, r.x_power, r.z_power).matrix, {r.site});
    return res;
}

}  // namespace qpack
