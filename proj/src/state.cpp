#include "qpack/state.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace qpack {

namespace {

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Iterates the flattened base indices obtained by setting the addressed
// sites' digits to zero, invoking f(base) for each.
template <typename F>
void for_each_base(int n_sites, int local_dim, const std::vector<int>& sites, F&& f) {
    std::vector<int> others;
    for (int s = 0; s < n_sites; ++s)
        if (std::find(sites.begin(), sites.end(), s) == sites.end()) others.push_back(s);
    std::vector<long long> stride(n_sites);
    for (int s = 0; s < n_sites; ++s) stride[s] = ipow(local_dim, n_sites - 1 - s);
    const long long rest_count = ipow(local_dim, static_cast<int>(others.size()));
    for (long long r = 0; r < rest_count; ++r) {
        long long base = 0, rr = r;
        for (int i = static_cast<int>(others.size()) - 1; i >= 0; --i) {
            base += (rr % local_dim) * stride[others[i]];
            rr /= local_dim;
        }
        f(base);
    }
}

void check_sites(int n_sites, const std::vector<int>& sites) {
    if (sites.empty()) throw std::invalid_argument("empty site list");
    for (size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] < 0 || sites[i] >= n_sites)
            throw std::invalid_argument("site index out of range");
        for (size_t j = i + 1; j < sites.size(); ++j)
            if (sites[i] == sites[j]) throw std::invalid_argument("overlapping sites");
    }
}

}  // namespace

RegisterState::RegisterState(const ChargeAssignment& charge, int n_sites)
    : charge_(charge), n_sites_(n_sites) {
    if (n_sites < 1) throw std::invalid_argument("RegisterState: n_sites must be >= 1");
    amp_ = Vector::Zero(ipow(charge.local_dim_ext, n_sites));
}

RegisterState RegisterState::basis_state(const std::vector<int>& labels,
                                         const ChargeAssignment& charge) {
    RegisterState s(charge, static_cast<int>(labels.size()));
    s.amp_[s.flatten(labels)] = 1.0;
    return s;
}

RegisterState RegisterState::from_amplitudes(const ChargeAssignment& charge, int n_sites,
                                             Vector amplitudes) {
    RegisterState s(charge, n_sites);
    if (amplitudes.size() != s.amp_.size())
        throw std::invalid_argument("from_amplitudes: dimension mismatch");
    s.amp_ = std::move(amplitudes);
    s.renormalize();
    return s;
}

void RegisterState::renormalize() {
    const double n = amp_.norm();
    if (n <= 0) throw std::invalid_argument("renormalize: zero state");
    amp_ /= n;
}

long long RegisterState::flatten(const std::vector<int>& labels) const {
    if (static_cast<int>(labels.size()) != n_sites_)
        throw std::invalid_argument("flatten: label count mismatch");
    long long idx = 0;
    for (int s = 0; s < n_sites_; ++s) {
        if (labels[s] < 0 || labels[s] >= local_dim())
            throw std::invalid_argument("flatten: label out of range");
        idx = idx * local_dim() + labels[s];
    }
    return idx;
}

std::vector<int> RegisterState::unflatten(long long index) const {
    std::vector<int> labels(n_sites_);
    for (int s = n_sites_ - 1; s >= 0; --s) {
        labels[s] = static_cast<int>(index % local_dim());
        index /= local_dim();
    }
    return labels;
}

cx RegisterState::inner(const RegisterState& other) const {
    if (other.amp_.size() != amp_.size()) throw std::invalid_argument("inner: dimension mismatch");
    return amp_.dot(other.amp_);
}

std::vector<std::pair<long long, double>> RegisterState::sector_weights() const {
    auto diag = total_charge_diagonal(n_sites_, charge_);
    std::map<long long, double> acc;
    for (long long i = 0; i < amp_.size(); ++i) {
        const double w = std::norm(amp_[i]);
        if (w > 0) acc[diag[i]] += w;
    }
    return {acc.begin(), acc.end()};
}

bool RegisterState::in_sector(long long Q, double tol) const {
    for (auto& [q, w] : sector_weights())
        if (q != Q && w > tol) return false;
    return true;
}

Matrix RegisterState::reduced_density(const std::vector<int>& sites) const {
    check_sites(n_sites_, sites);
    const int k = static_cast<int>(sites.size());
    const long long sub = ipow(local_dim(), k);
    std::vector<long long> stride(k);
    for (int i = 0; i < k; ++i) stride[i] = ipow(local_dim(), n_sites_ - 1 - sites[i]);
    Matrix rho = Matrix::Zero(sub, sub);
    Vector v(sub);
    for_each_base(n_sites_, local_dim(), sites, [&](long long base) {
        for (long long c = 0; c < sub; ++c) {
            long long idx = base, cc = c;
            for (int i = k - 1; i >= 0; --i) {
                idx += (cc % local_dim()) * stride[i];
                cc /= local_dim();
            }
            v[c] = amp_[idx];
        }
        rho.noalias() += v * v.adjoint();
    });
    return rho;
}

namespace {

// Shared gather/apply/scatter kernel. `block` receives the sub-vector over
// the addressed sites' joint space (dimension q^k with q = N when the
// operator is given on the computational span only).
template <typename F>
void transform_blocks(RegisterState& state, const std::vector<int>& sites, int q, F&& block) {
    const int m = state.local_dim();
    const int k = static_cast<int>(sites.size());
    const long long sub = ipow(q, k);
    std::vector<long long> stride(k);
    for (int i = 0; i < k; ++i) stride[i] = ipow(m, state.n_sites() - 1 - sites[i]);
    std::vector<long long> offset(sub);
    for (long long c = 0; c < sub; ++c) {
        long long off = 0, cc = c;
        for (int i = k - 1; i >= 0; --i) {
            off += (cc % q) * stride[i];
            cc /= q;
        }
        offset[c] = off;
    }
    Vector v(sub);
    Vector& amp = state.amplitudes();
    for_each_base(state.n_sites(), m, sites, [&](long long base) {
        for (long long c = 0; c < sub; ++c) v[c] = amp[base + offset[c]];
        block(v);
        for (long long c = 0; c < sub; ++c) amp[base + offset[c]] = v[c];
    });
}

int operator_local_dim(const RegisterState& state, const Matrix& op, int k) {
    const long long rows = op.rows();
    if (rows != op.cols()) throw std::invalid_argument("operator must be square");
    if (rows == ipow(state.local_dim(), k)) return state.local_dim();
    if (rows == ipow(state.dims().N, k)) return state.dims().N;
    throw std::invalid_argument("operator dimension matches neither N^k nor local_dim^k");
}

}  // namespace

void apply_local(RegisterState& state, const Matrix& op, const std::vector<int>& sites,
                 bool check_unitary) {
    check_sites(state.n_sites(), sites);
    const int q = operator_local_dim(state, op, static_cast<int>(sites.size()));
    if (check_unitary && !is_unitary(op, kNormTol))
        throw contract_error("apply_local: operator is not unitary");
    transform_blocks(state, sites, q, [&](Vector& v) { v = op * v; });
}

RegisterState applied_local(const RegisterState& state, const Matrix& op,
                            const std::vector<int>& sites, bool check_unitary) {
    RegisterState out = state;
    apply_local(out, op, sites, check_unitary);
    return out;
}

void apply_controlled_power(RegisterState& state, const Matrix& u,
                            const std::vector<int>& control_sites,
                            const std::vector<int>& target_sites) {
    std::vector<int> all(control_sites);
    all.insert(all.end(), target_sites.begin(), target_sites.end());
    check_sites(state.n_sites(), all);
    const int N = state.dims().N;
    const int kt = static_cast<int>(target_sites.size());
    if (u.rows() != ipow(N, kt))
        throw std::invalid_argument("apply_controlled_power: target dimension mismatch");
    const long long n_ctl = ipow(N, static_cast<int>(control_sites.size()));
    const long long sub = u.rows();

    Matrix upow = Matrix::Identity(sub, sub);
    for (long long x = 0; x < n_ctl; ++x) {
        if (x > 0) upow = Matrix(upow * u);
        if (max_abs(Matrix(upow - Matrix::Identity(sub, sub))) <= 1e-15 && x > 0) continue;
        // digits of x on the control sites (big-endian)
        std::vector<int> cdig(control_sites.size());
        long long xx = x;
        for (int i = static_cast<int>(control_sites.size()) - 1; i >= 0; --i) {
            cdig[i] = static_cast<int>(xx % N);
            xx /= N;
        }
        const int m = state.local_dim();
        std::vector<long long> cstride(control_sites.size());
        for (size_t i = 0; i < control_sites.size(); ++i)
            cstride[i] = ipow(m, state.n_sites() - 1 - control_sites[i]);
        long long coff = 0;
        for (size_t i = 0; i < control_sites.size(); ++i) coff += cdig[i] * cstride[i];

        // apply u^x on targets within the control slice
        const int ktgt = static_cast<int>(target_sites.size());
        std::vector<long long> tstride(ktgt);
        for (int i = 0; i < ktgt; ++i)
            tstride[i] = ipow(m, state.n_sites() - 1 - target_sites[i]);
        std::vector<long long> toffset(sub);
        for (long long c = 0; c < sub; ++c) {
            long long off = 0, cc = c;
            for (int i = ktgt - 1; i >= 0; --i) {
                off += (cc % N) * tstride[i];
                cc /= N;
            }
            toffset[c] = off;
        }
        Vector v(sub);
        Vector& amp = state.amplitudes();
        for_each_base(state.n_sites(), m, all, [&](long long base) {
            for (long long c = 0; c < sub; ++c) v[c] = amp[base + coff + toffset[c]];
            v = upow * v;
            for (long long c = 0; c < sub; ++c) amp[base + coff + toffset[c]] = v[c];
        });
    }
}

MeasurementOutcome measure_projective(const RegisterState& state,
                                      const std::vector<Matrix>& projectors,
                                      const std::vector<int>& sites, Rng& rng) {
    check_sites(state.n_sites(), sites);
    if (projectors.empty()) throw std::invalid_argument("measure_projective: no projectors");
    const int k = static_cast<int>(sites.size());
    const int q = operator_local_dim(state, projectors[0], k);
    Matrix sum = Matrix::Zero(projectors[0].rows(), projectors[0].cols());
    for (const auto& p : projectors) {
        if (p.rows() != projectors[0].rows())
            throw std::invalid_argument("measure_projective: mixed projector dimensions");
        sum += p;
    }
    if (max_abs(Matrix(sum - Matrix::Identity(sum.rows(), sum.cols()))) > kNormTol)
        throw std::invalid_argument("measure_projective: projectors do not resolve identity");

    std::vector<double> probs(projectors.size(), 0.0);
    for (size_t i = 0; i < projectors.size(); ++i) {
        RegisterState tmp = state;
        transform_blocks(tmp, sites, q, [&](Vector& v) { v = projectors[i] * v; });
        probs[i] = tmp.amplitudes().squaredNorm();
    }
    const int pick = rng.weighted(probs);
    MeasurementOutcome out{pick, probs[pick], state};
    transform_blocks(out.post_state, sites, q, [&](Vector& v) { v = projectors[pick] * v; });
    out.post_state.renormalize();
    return out;
}

std::vector<double> label_distribution(const RegisterState& state, const std::vector<int>& sites) {
    check_sites(state.n_sites(), sites);
    const int m = state.local_dim();
    const int k = static_cast<int>(sites.size());
    std::vector<double> probs(ipow(m, k), 0.0);
    const Vector& amp = state.amplitudes();
    for (long long idx = 0; idx < amp.size(); ++idx) {
        const double w = std::norm(amp[idx]);
        if (w == 0.0) continue;
        long long key = 0, rest = idx;
        std::vector<int> digits(state.n_sites());
        for (int s = state.n_sites() - 1; s >= 0; --s) {
            digits[s] = static_cast<int>(rest % m);
            rest /= m;
        }
        for (int s : sites) key = key * m + digits[s];
        probs[key] += w;
    }
    return probs;
}

LabelOutcome measure_labels(const RegisterState& state, const std::vector<int>& sites, Rng& rng) {
    auto probs = label_distribution(state, sites);
    const int m = state.local_dim();
    const int pick = rng.weighted(probs);
    LabelOutcome out{{}, probs[pick], state};
    out.labels.resize(sites.size());
    long long rest = pick;
    for (int i = static_cast<int>(sites.size()) - 1; i >= 0; --i) {
        out.labels[i] = static_cast<int>(rest % m);
        rest /= m;
    }
    // project onto the observed labels
    Vector& amp = out.post_state.amplitudes();
    for (long long idx = 0; idx < amp.size(); ++idx) {
        auto digits = state.unflatten(idx);
        for (size_t i = 0; i < sites.size(); ++i)
            if (digits[sites[i]] != out.labels[i]) {
                amp[idx] = 0.0;
                break;
            }
    }
    out.post_state.renormalize();
    return out;
}

double fidelity(const RegisterState& a, const RegisterState& b) {
    return std::norm(a.inner(b));
}

double expectation(const RegisterState& state, const Matrix& observable,
                   const std::vector<int>& sites) {
    if (!is_hermitian(observable, kNormTol))
        throw contract_error("expectation: observable is not hermitian");
    return expectation_complex(state, observable, sites).real();
}

cx expectation_complex(const RegisterState& state, const Matrix& op,
                       const std::vector<int>& sites) {
    check_sites(state.n_sites(), sites);
    const int q = operator_local_dim(state, op, static_cast<int>(sites.size()));
    RegisterState tmp = state;
    transform_blocks(tmp, sites, q, [&](Vector& v) { v = op * v; });
    return state.inner(tmp);
}

std::string dump_amplitudes(const RegisterState& state, double cutoff) {
    std::ostringstream os;
    os.precision(17);
    const Vector& amp = state.amplitudes();
    for (long long i = 0; i < amp.size(); ++i)
        if (std::abs(amp[i]) > cutoff)
            os << i << " " << amp[i].real() << " " << amp[i].imag() << "\n";
    return os.str();
}

}  // namespace qpack
