#include "qpack/algorithms.hpp"

#include <map>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qpack/gates.hpp"

namespace qpack {

namespace {
long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}
}  // namespace

void qft_apply(RegisterState& state, const std::vector<int>& register_sites, bool inverse) {
    const int N = state.dims().N;
    const int n = static_cast<int>(register_sites.size());
    const long long K = ipow(N, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(K));
    const double sign = inverse ? -1.0 : 1.0;
    // cache the K-th roots
    std::vector<cx> root(K);
    for (long long r = 0; r < K; ++r)
        root[r] = unit_phase(sign * static_cast<double>(r), static_cast<double>(K));

    Matrix f(K, K);
    for (long long a = 0; a < K; ++a)
        for (long long b = 0; b < K; ++b) f(a, b) = scale * root[(a * b) % K];
    apply_local(state, f, register_sites);
}

std::vector<QftGate> qft_circuit(int n_qudits, int N, bool inverse) {
    std::vector<QftGate> gates;
    for (int i = 0; i < n_qudits; ++i) {
        gates.push_back(QftGate{QftGate::Kind::Fourier, {i}, fourier_h(N).matrix});
        for (int j = i + 1; j < n_qudits; ++j) {
            const long long denom = ipow(N, j - i + 1);
            Matrix cp = Matrix::Zero(N * N, N * N);
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    cp(a * N + b, a * N + b) =
                        unit_phase(static_cast<double>(a) * b, static_cast<double>(denom));
            gates.push_back(QftGate{QftGate::Kind::ControlledPhase, {i, j}, std::move(cp)});
        }
    }
    for (int i = 0; i < n_qudits / 2; ++i) {
        Matrix swap = Matrix::Zero(N * N, N * N);
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) swap(b * N + a, a * N + b) = 1.0;
        gates.push_back(QftGate{QftGate::Kind::Swap, {i, n_qudits - 1 - i}, std::move(swap)});
    }
    if (inverse) {
        std::reverse(gates.begin(), gates.end());
        for (auto& g : gates) g.matrix = Matrix(g.matrix.adjoint());
    }
    return gates;
}

void apply_qft_circuit(RegisterState& state, const std::vector<int>& register_sites,
                       bool inverse) {
    auto gates = qft_circuit(static_cast<int>(register_sites.size()), state.dims().N, inverse);
    for (const auto& g : gates) {
        std::vector<int> sites;
        for (int pos : g.sites) sites.push_back(register_sites[pos]);
        apply_local(state, g.matrix, sites);
    }
}

QpeResult qpe_estimate(const Matrix& u, const Vector& eigenstate, int n_c,
                       const HybridDims& dims) {
    const int N = dims.N;
    if (!is_unitary(u, kNormTol)) throw std::invalid_argument("qpe_estimate: u not unitary");
    const auto charge = ChargeAssignment::bare(dims);
    RegisterState state(charge, n_c + 1);
    {
        // controls |0..0>, target = eigenstate
        Vector& amp = state.amplitudes();
        for (int k = 0; k < N; ++k) amp[k] = eigenstate[k];
        state.renormalize();
    }
    std::vector<int> controls(n_c);
    std::iota(controls.begin(), controls.end(), 0);
    const Matrix h = fourier_h(N).matrix;
    for (int c : controls) apply_local(state, h, {c});
    apply_controlled_power(state, u, controls, {n_c});
    apply_qft_circuit(state, controls, /*inverse=*/true);

    QpeResult res;
    res.distribution = label_distribution(state, controls);
    // phase of the eigenvalue
    const cx lambda = eigenstate.dot(u * eigenstate) / eigenstate.squaredNorm();
    double theta = std::arg(lambda) / (2.0 * kPi);
    if (theta < 0) theta += 1.0;
    const long long K = ipow(N, n_c);
    res.kernel_reference.resize(K);
    for (long long y = 0; y < K; ++y) {
        cx acc = 0.0;
        for (long long x = 0; x < K; ++x)
            acc += unit_phase(static_cast<double>(x) * (theta * K - y), static_cast<double>(K));
        res.kernel_reference[y] = std::norm(acc / static_cast<double>(K));
    }
    res.peak = static_cast<int>(std::max_element(res.distribution.begin(),
                                                 res.distribution.end()) -
                                res.distribution.begin());
    return res;
}

GroverPlan GroverPlan::make(const HybridDims& dims, int marked) {
    if (marked < 0 || marked >= dims.N) throw std::invalid_argument("GroverPlan: marked label");
    GroverPlan p;
    p.N = dims.N;
    p.marked = marked;
    p.theta = std::asin(1.0 / std::sqrt(static_cast<double>(dims.N)));
    p.iterations = static_cast<int>(std::floor(kPi / 4.0 * std::sqrt(static_cast<double>(dims.N))));
    return p;
}

GroverResult grover_search(const GroverPlan& plan) {
    const int N = plan.N;
    Vector v = Vector::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
    GroverResult res;
    res.per_iteration_success.push_back(std::norm(v[plan.marked]));
    for (int it = 0; it < plan.iterations; ++it) {
        v[plan.marked] = -v[plan.marked];                       // oracle
        const cx mean = v.sum() / static_cast<double>(N);       // diffusion
        for (int i = 0; i < N; ++i) v[i] = 2.0 * mean - v[i];
        res.per_iteration_success.push_back(std::norm(v[plan.marked]));
    }
    res.success_probability = std::norm(v[plan.marked]);
    res.closed_form = std::pow(std::sin((2.0 * plan.iterations + 1.0) * plan.theta), 2.0);
    res.final_state = std::move(v);
    return res;
}

// First-passage statistics of the monitored walk: every step the marked
// vertex is checked projectively, which either absorbs or renormalizes.
FirstPassageStats dtqw_first_passage(const Matrix& step, int marked_vertex, int max_steps,
                                     long trials, const HybridDims& dims, Rng& rng) {
    FirstPassageStats stats;
    stats.trials = trials;
    long long total = 0;
    for (long t = 0; t < trials; ++t) {
        Vector v = Vector::Zero(dims.N);
        v[0] = 1.0;
        int hit_at = -1;
        for (int s = 1; s <= max_steps; ++s) {
            v = step * v;
            double p_hit = 0.0;
            for (int j = 0; j < dims.d; ++j)
                p_hit += std::norm(v[j * dims.D + marked_vertex]);
            if (rng.uniform() < p_hit) {
                hit_at = s;
                break;
            }
            for (int j = 0; j < dims.d; ++j) v[j * dims.D + marked_vertex] = 0.0;
            v.normalize();
        }
        if (hit_at > 0) {
            ++stats.hits;
            total += hit_at;
        }
    }
    stats.mean_steps = stats.hits ? static_cast<double>(total) / stats.hits : 0.0;
    return stats;
}

Matrix grover_coin(int d) {
    Matrix c = Matrix::Constant(d, d, 2.0 / d);
    c -= Matrix::Identity(d, d);
    return c;
}

Matrix dtqw_step(const Matrix& coin, const std::vector<std::vector<int>>& sigma,
                 const HybridDims& dims) {
    const int d = dims.d, D = dims.D, N = dims.N;
    if (coin.rows() != d) throw std::invalid_argument("dtqw_step: coin dimension mismatch");
    if (static_cast<int>(sigma.size()) != d)
        throw std::invalid_argument("dtqw_step: need one shift permutation per coin value");
    for (const auto& perm : sigma) {
        if (static_cast<int>(perm.size()) != D)
            throw std::invalid_argument("dtqw_step: permutation size mismatch");
        std::vector<char> seen(D, 0);
        for (int v : perm) {
            if (v < 0 || v >= D || seen[v])
                throw std::invalid_argument("dtqw_step: sigma_j is not a permutation");
            seen[v] = 1;
        }
    }
    Matrix s = Matrix::Zero(N, N);
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < D; ++k) s(j * D + sigma[j][k], j * D + k) = 1.0;
    Matrix c_ext = Matrix::Zero(N, N);
    for (int j = 0; j < d; ++j)
        for (int j2 = 0; j2 < d; ++j2)
            for (int k = 0; k < D; ++k) c_ext(j * D + k, j2 * D + k) = coin(j, j2);
    return Matrix(s * c_ext);
}

std::vector<std::vector<double>> dtqw_run(const Matrix& step, int steps, int j0, int k0,
                                          const HybridDims& dims) {
    Vector v = Vector::Zero(dims.N);
    v[j0 * dims.D + k0] = 1.0;
    std::vector<std::vector<double>> dist;
    auto position_marginal = [&](const Vector& w) {
        std::vector<double> p(dims.D, 0.0);
        for (int j = 0; j < dims.d; ++j)
            for (int k = 0; k < dims.D; ++k) p[k] += std::norm(w[j * dims.D + k]);
        return p;
    };
    dist.push_back(position_marginal(v));
    for (int t = 0; t < steps; ++t) {
        v = step * v;
        dist.push_back(position_marginal(v));
    }
    return dist;
}

std::vector<double> ctqw_run(const Eigen::MatrixXd& laplacian, double t, const Vector& initial,
                             const HybridDims& dims) {
    const int D = dims.D;
    if (laplacian.rows() != D || laplacian.cols() != D)
        throw std::invalid_argument("ctqw_run: Laplacian dimension mismatch");
    if (max_abs(Matrix((laplacian - laplacian.transpose()).cast<cx>())) > kNormTol)
        throw std::invalid_argument("ctqw_run: Laplacian must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian);
    Matrix evo = Matrix::Zero(D, D);
    for (int i = 0; i < D; ++i) {
        const cx phase = std::polar(1.0, -t * es.eigenvalues()[i]);
        Vector v = es.eigenvectors().col(i).cast<cx>();
        evo += phase * v * v.adjoint();
    }
    Vector out = Vector::Zero(dims.N);
    for (int j = 0; j < dims.d; ++j)
        out.segment(j * D, D) = evo * initial.segment(j * D, D);
    std::vector<double> p(D, 0.0);
    for (int j = 0; j < dims.d; ++j)
        for (int k = 0; k < D; ++k) p[k] += std::norm(out[j * D + k]);
    return p;
}

// ---- Shor order finding ----

long multiplicative_order(long a, long M) {
    long r = 1;
    long v = a % M;
    while (v != 1) {
        v = (v * a) % M;
        ++r;
        if (r > M) throw std::invalid_argument("multiplicative_order: a not coprime to M");
    }
    return r;
}

FactoringInstance FactoringInstance::make(long M, long a, const HybridDims& dims) {
    if (M < 3 || M % 2 == 0) throw std::invalid_argument("FactoringInstance: M must be odd >= 3");
    if (a < 2 || a >= M) throw std::invalid_argument("FactoringInstance: need 2 <= a < M");
    FactoringInstance inst;
    inst.M = M;
    inst.a = a;
    const int N = dims.N;
    int n_w = 1;
    while (ipow(N, n_w) < M) ++n_w;
    int n_c = 1;
    while (ipow(N, n_c) < M * M) ++n_c;
    inst.n_w = n_w;
    inst.n_c = n_c;
    return inst;
}

namespace {

long gcd_ll(long a, long b) { return std::gcd(a, b); }

// continued-fraction convergents of s/K with denominators bounded by M
std::vector<std::pair<long, long>> convergents(long s, long K, long bound) {
    std::vector<std::pair<long, long>> out;
    long a = s, b = K;
    long p0 = 0, p1 = 1, q0 = 1, q1 = 0;
    while (b != 0) {
        const long coef = a / b;
        const long p2 = coef * p1 + p0;
        const long q2 = coef * q1 + q0;
        if (q2 > bound) break;
        out.push_back({p2, q2});
        p0 = p1; p1 = p2; q0 = q1; q1 = q2;
        const long rem = a % b;
        a = b;
        b = rem;
    }
    return out;
}

long pow_mod(long base, long exp, long mod) {
    long acc = 1 % mod;
    base %= mod;
    while (exp > 0) {
        if (exp & 1) acc = (acc * base) % mod;
        base = (base * base) % mod;
        exp >>= 1;
    }
    return acc;
}

}  // namespace

ShorTrial shor_order_find(const FactoringInstance& inst, const HybridDims& dims, Rng& rng) {
    ShorTrial trial;
    const long g = gcd_ll(inst.a, inst.M);
    if (g != 1) {  // classical lucky draw
        trial.factors = {g, inst.M / g};
        trial.success = true;
        return trial;
    }
    const int N = dims.N;
    const long K = ipow(N, inst.n_c);
    const long W = ipow(N, inst.n_w);
    const auto charge = ChargeAssignment::bare(dims);
    RegisterState state(charge, inst.n_c + inst.n_w);
    {
        // superposed control (x) |a^X mod M) built directly: the controlled
        // modular multiplication is a label permutation
        Vector& amp = state.amplitudes();
        const double scale = 1.0 / std::sqrt(static_cast<double>(K));
        long work = 1 % inst.M;
        for (long x = 0; x < K; ++x) {
            amp[x * W + work] = scale;
            work = (work * inst.a) % inst.M;
        }
    }
    std::vector<int> controls(inst.n_c);
    std::iota(controls.begin(), controls.end(), 0);
    apply_qft_circuit(state, controls, /*inverse=*/false);

    auto probs = label_distribution(state, controls);
    const long s = rng.weighted(probs);
    trial.measured = s;
    if (s == 0) return trial;

    for (auto [num, den] : convergents(s, K, inst.M)) {
        if (den <= 1) continue;
        for (long mult = 1; mult * den <= inst.M; ++mult) {
            const long r = mult * den;
            if (pow_mod(inst.a, r, inst.M) == 1) {
                trial.order_candidate = r;
                trial.order_found = true;
                break;
            }
        }
        if (trial.order_found) break;
    }
    if (!trial.order_found) return trial;

    const long r = trial.order_candidate;
    if (r % 2 != 0) return trial;
    const long half = pow_mod(inst.a, r / 2, inst.M);
    if (half == inst.M - 1) return trial;  // degenerate branch, retry
    const long f1 = gcd_ll(half - 1 + inst.M, inst.M);
    const long f2 = gcd_ll(half + 1, inst.M);
    if (f1 > 1 && f1 < inst.M) {
        trial.factors = {std::min(f1, inst.M / f1), std::max(f1, inst.M / f1)};
        trial.success = true;
    } else if (f2 > 1 && f2 < inst.M) {
        trial.factors = {std::min(f2, inst.M / f2), std::max(f2, inst.M / f2)};
        trial.success = true;
    }
    return trial;
}

ExperimentReport shor_factor(long M, const HybridDims& dims, long trials, std::uint64_t seed) {
    ExperimentReport rep;
    rep.name = "shor-factor";
    rep.params = {{"M", M}, {"d", dims.d}, {"D", dims.D}, {"trials", trials}, {"seed", seed}};
    long successes = 0;
    std::map<std::pair<long, long>, long> found;
    for (long t = 0; t < trials; ++t) {
        Rng rng = Rng::for_trial(seed, t);
        const long a = 2 + static_cast<long>(rng.integer(M - 3));
        FactoringInstance inst = FactoringInstance::make(M, a, dims);
        auto trial = shor_order_find(inst, dims, rng);
        if (trial.success) {
            ++successes;
            ++found[trial.factors];
        }
    }
    rep.aggregates = {{"successes", successes}, {"trials", trials}};
    if (!found.empty()) {
        auto best = std::max_element(found.begin(), found.end(),
                                     [](auto& a, auto& b) { return a.second < b.second; });
        rep.aggregates["factors"] = {best->first.first, best->first.second};
    }
    rep.reference = {{"min_successes", trials / 2}};
    rep.checks.push_back(check_true("factored_in_half_of_trials", successes * 2 >= trials));
    return rep;
}

// ---- HHL ----

HHLResult hhl_solve(const HHLInstance& inst, const HybridDims& dims) {
    const int N = dims.N;
    if (inst.A.rows() != N) throw std::invalid_argument("hhl_solve: A must be N x N");
    if (!is_hermitian(inst.A, kNormTol)) throw contract_error("hhl_solve: A not hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(inst.A);
    const auto& lam = es.eigenvalues();
    if (lam[0] <= 0) throw std::invalid_argument("hhl_solve: need positive eigenvalues");
    if (inst.C > lam[0] + 1e-12) throw contract_error("hhl_solve: C exceeds min eigenvalue");

    const long K = ipow(N, inst.m);
    // find the rescale making every eigenvalue an exact phase k/K
    long scale = 0;
    for (long s = 1; s < K; ++s) {
        bool ok = true;
        for (int j = 0; j < N && ok; ++j) {
            const double v = lam[j] * s;
            const long k = std::lround(v);
            ok = std::abs(v - k) < 1e-9 && k >= 1 && k < K;
        }
        if (ok) {
            scale = s;
            break;
        }
    }
    if (scale == 0) throw contract_error("hhl_solve: spectrum not representable in the register");

    // u = exp(2 pi i A scale / K)
    Matrix u = Matrix::Zero(N, N);
    for (int j = 0; j < N; ++j) {
        const cx phase = unit_phase(lam[j] * scale, static_cast<double>(K));
        Vector v = es.eigenvectors().col(j);
        u += phase * v * v.adjoint();
    }

    const auto charge = ChargeAssignment::bare(dims);
    RegisterState state(charge, inst.m + 2);  // phase reg | work | ancilla
    {
        Vector b = inst.b;
        b.normalize();
        Vector& amp = state.amplitudes();
        for (int w = 0; w < N; ++w) amp[static_cast<long long>(w) * N + 0] = b[w];
    }
    std::vector<int> phase_sites(inst.m);
    std::iota(phase_sites.begin(), phase_sites.end(), 0);
    const int work_site = inst.m;
    const int ancilla_site = inst.m + 1;

    const Matrix h = fourier_h(N).matrix;
    for (int c : phase_sites) apply_local(state, h, {c});
    apply_controlled_power(state, u, phase_sites, {work_site});
    apply_qft_circuit(state, phase_sites, /*inverse=*/true);

    // ancilla rotation conditioned on the phase-register value k
    {
        Vector& amp = state.amplitudes();
        const long long dim = amp.size();
        std::vector<long long> stride(state.n_sites());
        for (int s2 = 0; s2 < state.n_sites(); ++s2)
            stride[s2] = ipow(N, state.n_sites() - 1 - s2);
        for (long long idx = 0; idx < dim; ++idx) {
            const int anc = static_cast<int>((idx / stride[ancilla_site]) % N);
            if (anc != 0) continue;
            long long k = 0;
            for (int p = 0; p < inst.m; ++p) k = k * N + (idx / stride[phase_sites[p]]) % N;
            if (k == 0) continue;
            const double lambda_k = static_cast<double>(k) / scale;
            const double c = std::min(1.0, inst.C / lambda_k);
            const double s_ = std::sqrt(std::max(0.0, 1.0 - c * c));
            const long long idx1 = idx + stride[ancilla_site];
            const cx a0 = amp[idx], a1 = amp[idx1];
            amp[idx] = s_ * a0 - c * a1;
            amp[idx1] = c * a0 + s_ * a1;
        }
    }

    // uncompute the phase estimate
    apply_qft_circuit(state, phase_sites, /*inverse=*/false);
    {
        Matrix u_inv = u.adjoint();
        apply_controlled_power(state, u_inv, phase_sites, {work_site});
    }
    const Matrix h_inv = h.adjoint();
    for (int c : phase_sites) apply_local(state, h_inv, {c});

    // post-select ancilla |1>, phase register should be back at |0...0>
    HHLResult res;
    Vector post = Vector::Zero(N);
    {
        const Vector& amp = state.amplitudes();
        std::vector<long long> stride(state.n_sites());
        for (int s2 = 0; s2 < state.n_sites(); ++s2)
            stride[s2] = ipow(N, state.n_sites() - 1 - s2);
        double p1 = 0.0;
        for (long long idx = 0; idx < amp.size(); ++idx) {
            const int anc = static_cast<int>((idx / stride[ancilla_site]) % N);
            if (anc != 1) continue;
            p1 += std::norm(amp[idx]);
            long long k = 0;
            for (int p = 0; p < inst.m; ++p) k = k * N + (idx / stride[phase_sites[p]]) % N;
            if (k != 0) continue;
            const int w = static_cast<int>((idx / stride[work_site]) % N);
            post[w] = amp[idx];
        }
        res.success_probability = p1;
    }
    post.normalize();
    res.output = post;

    Vector b = inst.b;
    b.normalize();
    Vector direct = es.eigenvectors() *
                    (es.eigenvalues().cwiseInverse().cast<cx>().asDiagonal() *
                     (es.eigenvectors().adjoint() * b));
    direct.normalize();
    res.fidelity = std::norm(cx(direct.dot(post)));
    // residual after least-squares scaling of the output
    Vector ax = inst.A * post;
    const cx alpha = ax.dot(b) / ax.squaredNorm();
    res.residual = (alpha * ax - b).norm();
    return res;
}

}  // namespace qpack
