#include "qpack/hilbert.hpp"

#include <numeric>

namespace qpack {

namespace {
cx root_pow(long long e, long long n) {
    long long r = e % n;
    if (r < 0) r += n;
    return unit_phase(static_cast<double>(r), static_cast<double>(n));
}
}  // namespace

cx HybridDims::omega_pow(long long e) const { return root_pow(e, N); }
cx HybridDims::omega_d_pow(long long e) const { return root_pow(e, d); }
cx HybridDims::omega_D_pow(long long e) const { return root_pow(e, D); }

HybridDims make_dims(int d, int D) {
    if (d < 1 || D < 1) throw std::invalid_argument("make_dims: dimensions must be positive");
    HybridDims dims;
    dims.d = d;
    dims.D = D;
    dims.N = d * D;
    dims.omega = unit_phase(1.0, dims.N);
    return dims;
}

int merge_index(int j, int k, const HybridDims& dims) {
    if (j < 0 || j >= dims.d || k < 0 || k >= dims.D)
        throw std::invalid_argument("merge_index: label out of range");
    return j * dims.D + k;
}

std::pair<int, int> split_index(int J, const HybridDims& dims) {
    if (J < 0 || J >= dims.N) throw std::invalid_argument("split_index: label out of range");
    return {J / dims.D, J % dims.D};
}

ChargeAssignment ChargeAssignment::standard(const HybridDims& dims) {
    return extended(dims, 1, {+1, -1});
}

ChargeAssignment ChargeAssignment::bare(const HybridDims& dims) {
    return extended(dims, 0, {});
}

ChargeAssignment ChargeAssignment::extended(const HybridDims& dims, int n_leak,
                                            const std::vector<int>& charged) {
    if (n_leak < 0) throw std::invalid_argument("ChargeAssignment: n_leak must be >= 0");
    for (int q : charged)
        if (q == 0) throw std::invalid_argument("ChargeAssignment: charged labels need q != 0");
    ChargeAssignment c;
    c.dims = dims;
    c.n_leak = n_leak;
    c.local_dim_ext = dims.N + dims.d * n_leak + static_cast<int>(charged.size());
    c.charges.assign(c.local_dim_ext, 0);
    for (size_t i = 0; i < charged.size(); ++i)
        c.charges[dims.N + dims.d * n_leak + i] = charged[i];
    return c;
}

int ChargeAssignment::internal_of(int label) const {
    if (is_computational(label)) return label / dims.D;
    if (is_leaked(label)) return (label - dims.N) / n_leak;
    throw std::invalid_argument("internal_of: charged label has no internal index");
}

int ChargeAssignment::leak_label(int j, int l) const {
    if (n_leak == 0) throw std::invalid_argument("leak_label: no leakage levels configured");
    if (j < 0 || j >= dims.d || l < 0 || l >= n_leak)
        throw std::invalid_argument("leak_label: out of range");
    return dims.N + j * n_leak + l;
}

int ChargeAssignment::charged_label(int q) const {
    for (int l = dims.N + dims.d * n_leak; l < local_dim_ext; ++l)
        if (charges[l] == q) return l;
    return -1;
}

std::vector<int> site_charge_diagonal(const ChargeAssignment& charge) {
    return charge.charges;
}

std::vector<long long> total_charge_diagonal(int n_sites, const ChargeAssignment& charge) {
    if (n_sites < 1) throw std::invalid_argument("total_charge_diagonal: n_sites must be >= 1");
    const int m = charge.local_dim_ext;
    long long dim = 1;
    for (int i = 0; i < n_sites; ++i) dim *= m;
    std::vector<long long> diag(dim, 0);
    for (long long idx = 0; idx < dim; ++idx) {
        long long rest = idx;
        long long q = 0;
        for (int s = 0; s < n_sites; ++s) {
            q += charge.charges[static_cast<int>(rest % m)];
            rest /= m;
        }
        diag[idx] = q;
    }
    return diag;
}

namespace {
// Embeds an N^arity operator as identity on all product labels that touch a
// non-computational level; returns the per-entry charge difference norm.
double commutator_norm_impl(const Matrix& op, int arity, const ChargeAssignment& charge) {
    const int m = charge.local_dim_ext;
    const int N = charge.dims.N;
    long long dim_ext = 1, dim_n = 1;
    for (int i = 0; i < arity; ++i) {
        dim_ext *= m;
        dim_n *= N;
    }
    if (op.rows() != dim_ext && op.rows() != dim_n)
        throw std::invalid_argument("charge_commutator_norm: operator dimension mismatch");

    auto label_charge = [&](long long idx, bool ext) {
        long long q = 0;
        const int base = ext ? m : N;
        for (int s = 0; s < arity; ++s) q += charge.charges[static_cast<int>(idx % base)], idx /= base;
        return q;
    };

    // [V, Q] entries are V_ab * (q_b - q_a); identity blocks contribute zero.
    double worst = 0.0;
    const bool ext = (op.rows() == dim_ext);
    for (long long a = 0; a < op.rows(); ++a) {
        const long long qa = label_charge(a, ext);
        for (long long b = 0; b < op.cols(); ++b) {
            const long long qb = label_charge(b, ext);
            if (qa == qb) continue;
            worst = std::max(worst, std::abs(op(a, b)) * static_cast<double>(std::abs(qb - qa)));
        }
    }
    return worst;
}
}  // namespace

double charge_commutator_norm(const Matrix& op, int arity, const ChargeAssignment& charge) {
    return commutator_norm_impl(op, arity, charge);
}

bool commutes_with_charge(const Matrix& op, int arity, const ChargeAssignment& charge,
                          double tol) {
    return charge_commutator_norm(op, arity, charge) <= tol;
}

SectorProjector SectorProjector::make(const ChargeAssignment& charge, int n_sites, long long Q) {
    SectorProjector p;
    p.dims = charge.dims;
    p.charge = charge;
    p.n_sites = n_sites;
    p.target_Q = Q;
    auto diag = total_charge_diagonal(n_sites, charge);
    p.mask.resize(diag.size());
    for (size_t i = 0; i < diag.size(); ++i) p.mask[i] = (diag[i] == Q) ? 1 : 0;
    return p;
}

}  // namespace qpack
