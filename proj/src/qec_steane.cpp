#include "qpack/qec.hpp"

namespace qpack {

namespace {

// Hamming parity-check rows; X-stabilizer supports of the Steane code.
constexpr int kRows[3][7] = {
    {0, 0, 0, 1, 1, 1, 1},
    {0, 1, 1, 0, 0, 1, 1},
    {1, 0, 1, 0, 1, 0, 1},
};

// Signed Z-check exponents: same supports with +,-,-,+ signs, which keeps
// every z-row integer-orthogonal to every x-row (so the lift commutes for all
// N, reducing to the printed Steane stabilizers at N = 2).
constexpr int kZSigns[3][7] = {
    {0, 0, 0, 1, -1, -1, 1},
    {0, 1, -1, 0, 0, -1, 1},
    {1, 0, -1, 0, -1, 0, 1},
};

}  // namespace

CodeInstance steane_build(int N) {
    if (N < 2) throw std::invalid_argument("steane_build: N must be >= 2");
    CodeInstance code;
    code.kind = CodeInstance::Kind::Steane7;
    code.N = N;
    code.n_phys = 7;
    auto m = [N](int v) { return ((v % N) + N) % N; };
    for (int r = 0; r < 3; ++r) {
        WeylStabilizer s;
        s.name = "SX" + std::to_string(r + 1);
        for (int i = 0; i < 7; ++i)
            if (kRows[r][i]) {
                s.sites.push_back(i);
                s.x_exp.push_back(1);
                s.z_exp.push_back(0);
            }
        code.stabilizers.push_back(std::move(s));
    }
    for (int r = 0; r < 3; ++r) {
        WeylStabilizer s;
        s.name = "SZ" + std::to_string(r + 1);
        for (int i = 0; i < 7; ++i)
            if (kZSigns[r][i]) {
                s.sites.push_back(i);
                s.x_exp.push_back(0);
                s.z_exp.push_back(m(kZSigns[r][i]));
            }
        code.stabilizers.push_back(std::move(s));
    }
    // X_L = X^(x)7; Z_L = Z(0) Z(1) Z^dag(2).
    code.logical_x.name = "XL";
    code.logical_z.name = "ZL";
    for (int i = 0; i < 7; ++i) {
        code.logical_x.sites.push_back(i);
        code.logical_x.x_exp.push_back(1);
        code.logical_x.z_exp.push_back(0);
    }
    code.logical_z.sites = {0, 1, 2};
    code.logical_z.x_exp = {0, 0, 0};
    code.logical_z.z_exp = {1, 1, N - 1};

    // Syndrome table over all single-site X^s Z^t: the X part shows up in the
    // signed Z-checks, the Z part in the X-checks.
    for (int site = 0; site < 7; ++site)
        for (int s = 0; s < N; ++s)
            for (int t = 0; t < N; ++t) {
                SyndromeWord w(6, 0);
                for (int r = 0; r < 3; ++r) w[r] = m(-t * kRows[r][site]);
                for (int r = 0; r < 3; ++r) w[3 + r] = m(s * kZSigns[r][site]);
                if (code.syndrome_table.count(w)) continue;
                code.syndrome_table[w] = Recovery{site, (N - s) % N, (N - t) % N};
            }
    return code;
}

RegisterState steane_codeword(const Vector& logical, const ChargeAssignment& charge) {
    const auto& dims = charge.dims;
    const int N = dims.N;
    if (logical.size() != N) throw std::invalid_argument("steane_codeword: bad logical");
    RegisterState out(charge, 7);
    Vector& amp = out.amplitudes();
    const int m = charge.local_dim_ext;
    const double scale = 1.0 / std::pow(static_cast<double>(N), 1.5);
    // |J>_L = N^{-3/2} sum_{a,b,c} |J*1 + a r1 + b r2 + c r3 mod N>
    for (int J = 0; J < N; ++J) {
        if (logical[J] == cx(0.0)) continue;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int c = 0; c < N; ++c) {
                    long long idx = 0;
                    for (int i = 0; i < 7; ++i) {
                        const int v =
                            (J + a * kRows[0][i] + b * kRows[1][i] + c * kRows[2][i]) % N;
                        idx = idx * m + v;
                    }
                    amp[idx] += logical[J] * scale;
                }
    }
    out.renormalize();
    return out;
}

CorrectionResult steane_correct(const RegisterState& corrupted, const CodeInstance& code) {
    const int N = code.N;
    SyndromeWord w;
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
