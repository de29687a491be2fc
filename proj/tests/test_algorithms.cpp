#include <doctest.h>

#include <numeric>

#include "qpack/algorithms.hpp"
#include "qpack/gates.hpp"

using namespace qpack;

TEST_CASE("qft basics") {
    auto dims = make_dims(2, 3);
    const auto charge = ChargeAssignment::bare(dims);

    // |0...0> goes to the uniform superposition
    auto s = RegisterState::basis_state({0, 0}, charge);
    qft_apply(s, {0, 1});
    const double want = 1.0 / 6.0;
    for (long long i = 0; i < s.dim(); ++i)
        CHECK(std::abs(s.amplitudes()[i] - cx(want)) < 1e-12);

    // single qudit: QFT = H_N exactly
    auto one = RegisterState::basis_state({2}, charge);
    auto viah = one;
    qft_apply(one, {0});
    apply_local(viah, fourier_h(dims.N).matrix, {0});
    CHECK((one.amplitudes() - viah.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);

    // forward then inverse is the identity
    Rng rng(3);
    Vector amp(36);
    for (int i = 0; i < 36; ++i) amp[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
    auto r = RegisterState::from_amplitudes(charge, 2, amp);
    auto orig = r.amplitudes();
    qft_apply(r, {0, 1});
    qft_apply(r, {0, 1}, /*inverse=*/true);
    CHECK((r.amplitudes() - orig).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("qft circuit equals the dense transform") {
    for (auto [d, D, n] : std::vector<std::tuple<int, int, int>>{
             {2, 1, 3}, {3, 1, 3}, {2, 2, 2}, {2, 3, 2}, {3, 2, 3}}) {
        auto dims = make_dims(d, D);
        const auto charge = ChargeAssignment::bare(dims);
        std::vector<int> sites(n);
        std::iota(sites.begin(), sites.end(), 0);
        Rng rng(11 + n);
        Vector amp(static_cast<long long>(std::pow(dims.N, n)));
        for (long long i = 0; i < amp.size(); ++i)
            amp[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
        auto a = RegisterState::from_amplitudes(charge, n, amp);
        auto b = a;
        qft_apply(a, sites);
        apply_qft_circuit(b, sites);
        CHECK((a.amplitudes() - b.amplitudes()).norm() < 1e-9);
        // inverse circuit too
        apply_qft_circuit(b, sites, /*inverse=*/true);
        auto orig = RegisterState::from_amplitudes(charge, n, amp);
        CHECK((b.amplitudes() - orig.amplitudes()).norm() < 1e-9);
    }
}

TEST_CASE("qpe exact peak for representable phase") {
    auto dims = make_dims(2, 1);
    // u = Z_2, eigenstate |1> with theta = 1/2; N_C = 4 makes it exact
    Vector eig = Vector::Zero(2);
    eig[1] = 1.0;
    auto res = qpe_estimate(weyl_z(2).matrix, eig, 2, dims);
    CHECK(res.peak == 2);  // y* = theta * N_C = 2
    CHECK(res.distribution[2] == doctest::Approx(1.0).epsilon(1e-10));
    double total = 0.0;
    for (double p : res.distribution) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("qpe matches the closed-form kernel") {
    auto dims = make_dims(2, 3);
    // an eigenstate of the mixed flag gate with an irrational-ish phase
    const Matrix f = mixed_flag(dims).matrix;
    Eigen::ComplexEigenSolver<Matrix> es(f);
    Vector eig = es.eigenvectors().col(0);
    auto res = qpe_estimate(f, eig, 2, dims);
    REQUIRE(res.distribution.size() == res.kernel_reference.size());
    for (size_t y = 0; y < res.distribution.size(); ++y)
        CHECK(std::abs(res.distribution[y] - res.kernel_reference[y]) < 1e-9);
    // peak probability of the Fejer kernel is at least 4/pi^2
    CHECK(res.distribution[res.peak] >= 4.0 / (kPi * kPi) - 1e-9);
    // the peak sits within 1/(2 N_C) of theta
    const cx lambda = eig.dot(f * eig);
    double theta = std::arg(lambda) / (2 * kPi);
    if (theta < 0) theta += 1.0;
    const double frac = static_cast<double>(res.peak) / res.distribution.size();
    double dist = std::abs(frac - theta);
    dist = std::min(dist, 1.0 - dist);
    CHECK(dist <= 0.5 / res.distribution.size() + 1e-12);
}

TEST_CASE("grover closed form") {
    // N=4, k=1: success exactly 1
    {
        auto plan = GroverPlan::make(make_dims(2, 2), 2);
        CHECK(plan.iterations == 1);
        auto res = grover_search(plan);
        CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(res.closed_form == doctest::Approx(1.0).epsilon(1e-12));
    }
    // N=2: k = floor(pi sqrt2/4) = 1, success = sin^2(3 theta)
    {
        auto plan = GroverPlan::make(make_dims(2, 1), 1);
        CHECK(plan.iterations == 1);
        auto res = grover_search(plan);
        CHECK(res.success_probability ==
              doctest::Approx(std::pow(std::sin(3 * kPi / 4), 2)).epsilon(1e-12));
    }
    for (int N : {4, 16, 64}) {
        auto plan = GroverPlan::make(make_dims(2, N / 2), N / 3);
        CHECK(std::abs(std::sin(plan.theta) - 1.0 / std::sqrt(N)) < 1e-12);
        auto res = grover_search(plan);
        CHECK(std::abs(res.success_probability - res.closed_form) < 1e-10);
    }
    // per-iteration amplitudes follow the rotation recurrence at N=64
    {
        auto plan = GroverPlan::make(make_dims(2, 32), 5);
        auto res = grover_search(plan);
        for (int k = 0; k <= plan.iterations; ++k)
            CHECK(res.per_iteration_success[k] ==
                  doctest::Approx(std::pow(std::sin((2 * k + 1) * plan.theta), 2))
                      .epsilon(1e-9));
    }
}

TEST_CASE("grover operators are gauge invariant") {
    auto dims = make_dims(2, 2);
    auto charge = ChargeAssignment::standard(dims);
    const int N = dims.N;
    Matrix oracle = Matrix::Identity(N, N);
    oracle(2, 2) = -1.0;
    Vector s = Vector::Constant(N, 1.0 / 2.0);
    Matrix diffusion = 2.0 * (s * s.adjoint()) - Matrix::Identity(N, N);
    CHECK(commutes_with_charge(oracle, 1, charge));
    CHECK(commutes_with_charge(diffusion, 1, charge));
}

TEST_CASE("dtqw on the cycle") {
    // d=2 coin, D=41 cycle: ballistic spread beats the classical walk
    auto dims = make_dims(2, 41);
    std::vector<std::vector<int>> sigma(2, std::vector<int>(dims.D));
    for (int k = 0; k < dims.D; ++k) {
        sigma[0][k] = (k + 1) % dims.D;
        sigma[1][k] = (k - 1 + dims.D) % dims.D;
    }
    const Matrix v = dtqw_step(fourier_h(2).matrix, sigma, dims);
    CHECK(is_unitary(v, 1e-12));

    auto dist = dtqw_run(v, 20, 0, dims.D / 2, dims);
    auto variance = [&](const std::vector<double>& p) {
        double mean = 0, var = 0;
        for (int k = 0; k < dims.D; ++k) mean += k * p[k];
        for (int k = 0; k < dims.D; ++k) var += (k - mean) * (k - mean) * p[k];
        return var;
    };
    const double v10 = variance(dist[10]);
    const double v20 = variance(dist[20]);
    // quadratic trend: variance ratio near 4, clearly above the classical 2
    CHECK(v20 / v10 > 2.5);

    // momentum-basis block diagonalization
    const Matrix f_ext = fourier_h(dims.D).matrix;
    Matrix basis = Matrix::Zero(dims.N, dims.N);
    for (int j = 0; j < dims.d; ++j)
        basis.block(j * dims.D, j * dims.D, dims.D, dims.D) = f_ext;
    const Matrix w = Matrix(basis.adjoint() * v * basis);
    double off = 0.0;
    for (int j = 0; j < dims.d; ++j)
        for (int j2 = 0; j2 < dims.d; ++j2)
            for (int p = 0; p < dims.D; ++p)
                for (int p2 = 0; p2 < dims.D; ++p2)
                    if (p != p2) off = std::max(off, std::abs(w(j * dims.D + p, j2 * dims.D + p2)));
    CHECK(off < 1e-9);

    std::vector<std::vector<int>> bad = sigma;
    bad[0][0] = bad[0][1];
    CHECK_THROWS_AS(dtqw_step(fourier_h(2).matrix, bad, dims), std::invalid_argument);
}

TEST_CASE("grover coin properties") {
    for (int d = 2; d <= 6; ++d) {
        const Matrix c = grover_coin(d);
        CHECK(is_unitary(c, 1e-12));
        CHECK(max_abs(Matrix(c * c - Matrix::Identity(d, d))) < 1e-12);
    }
}

TEST_CASE("dtqw time-averaged distribution approaches uniform on a 3-cycle") {
    auto dims = make_dims(2, 3);
    std::vector<std::vector<int>> sigma(2, std::vector<int>(3));
    for (int k = 0; k < 3; ++k) {
        sigma[0][k] = (k + 1) % 3;
        sigma[1][k] = (k + 2) % 3;
    }
    const Matrix v = dtqw_step(fourier_h(2).matrix, sigma, dims);
    const int T = 4000;
    auto dist = dtqw_run(v, T, 0, 0, dims);
    std::vector<double> avg(3, 0.0);
    for (int t = 0; t <= T; ++t)
        for (int k = 0; k < 3; ++k) avg[k] += dist[t][k] / (T + 1);
    double tv = 0.0;
    for (int k = 0; k < 3; ++k) tv += std::abs(avg[k] - 1.0 / 3.0) / 2.0;
    CHECK(tv < 0.05);
}

TEST_CASE("ctqw on K2 oscillates as cos^2") {
    auto dims = make_dims(2, 2);
    Eigen::MatrixXd lap(2, 2);
    lap << 1, -1, -1, 1;
    Vector init = Vector::Zero(dims.N);
    init[0] = 1.0;  // (j,k) = (0,0)
    for (double t : {0.0, 0.3, 0.7, 1.2}) {
        auto dist = ctqw_run(lap, t, init, dims);
        CHECK(dist[0] == doctest::Approx(std::pow(std::cos(t), 2)).epsilon(1e-9));
        CHECK(dist[1] == doctest::Approx(std::pow(std::sin(t), 2)).epsilon(1e-9));
    }
    // internal reduced state untouched
    const auto charge = ChargeAssignment::bare(dims);
    Rng rng(7);
    Vector amp(dims.N);
    for (int i = 0; i < dims.N; ++i) amp[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
    auto s = RegisterState::from_amplitudes(charge, 1, amp);
    // (evolution applied manually through ctqw machinery on amplitudes)
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(lap);
    Matrix evo = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) {
        const cx ph = std::polar(1.0, -1.1 * es.eigenvalues()[i]);
        Vector v = es.eigenvectors().col(i).cast<cx>();
        evo += ph * v * v.adjoint();
    }
    Matrix rho_before(2, 2);
    {
        Matrix full = s.amplitudes() * s.amplitudes().adjoint();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                cx acc = 0;
                for (int k = 0; k < 2; ++k) acc += full(a * 2 + k, b * 2 + k);
                rho_before(a, b) = acc;
            }
    }
    Matrix big = Matrix::Zero(4, 4);
    big.block(0, 0, 2, 2) = evo;
    big.block(2, 2, 2, 2) = evo;
    apply_local(s, big, {0});
    Matrix rho_after(2, 2);
    {
        Matrix full = s.amplitudes() * s.amplitudes().adjoint();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                cx acc = 0;
                for (int k = 0; k < 2; ++k) acc += full(a * 2 + k, b * 2 + k);
                rho_after(a, b) = acc;
            }
    }
    CHECK(max_abs(Matrix(rho_before - rho_after)) < 1e-10);
}

TEST_CASE("multiplicative order oracle") {
    CHECK(multiplicative_order(7, 15) == 4);
    CHECK(multiplicative_order(14, 15) == 2);
    CHECK(multiplicative_order(2, 15) == 4);
}

TEST_CASE("shor order finding factors 15") {
    auto dims = make_dims(2, 1);
    // a = 7: r = 4, factors {3, 5}
    long ok = 0;
    for (int t = 0; t < 12; ++t) {
        Rng rng = Rng::for_trial(101, t);
        auto inst = FactoringInstance::make(15, 7, dims);
        CHECK(inst.n_c == 8);
        CHECK(inst.n_w == 4);
        auto trial = shor_order_find(inst, dims, rng);
        if (trial.success) {
            ++ok;
            CHECK(trial.factors.first == 3);
            CHECK(trial.factors.second == 5);
            CHECK(trial.order_candidate == 4);
        }
    }
    CHECK(ok >= 6);

    // a = 14: order 2, a^{r/2} = 14 = -1 mod 15 is the degenerate branch
    long degenerate_seen = 0;
    for (int t = 0; t < 10; ++t) {
        Rng rng = Rng::for_trial(103, t);
        auto inst = FactoringInstance::make(15, 14, dims);
        auto trial = shor_order_find(inst, dims, rng);
        CHECK_FALSE(trial.success);  // handled as a retry, never a wrong factor
        if (trial.order_found) ++degenerate_seen;
    }
    CHECK(degenerate_seen > 0);

    // a sharing a factor returns it classically
    Rng rng(1);
    auto inst = FactoringInstance::make(15, 6, dims);
    auto trial = shor_order_find(inst, dims, rng);
    CHECK(trial.success);
    CHECK(trial.factors.first == 3);
}

TEST_CASE("modular multiplication permutation is gauge invariant") {
    // V_a as a permutation on neutral labels commutes with the charge
    auto dims = make_dims(2, 2);
    auto charge = ChargeAssignment::standard(dims);
    Matrix v = Matrix::Zero(dims.N, dims.N);
    const long M = 3, a = 2;
    for (int y = 0; y < dims.N; ++y) {
        const int target = (y < M) ? static_cast<int>((a * y) % M) : y;
        v(target, y) = 1.0;
    }
    CHECK(is_unitary(v, 1e-12));
    CHECK(commutes_with_charge(v, 1, charge));
}

TEST_CASE("hhl on representable instances") {
    // 2x2 diagonal A = diag(1,2), b = |+>: solution proportional to (1, 1/2)
    {
        auto dims = make_dims(2, 1);
        HHLInstance inst;
        inst.A = Matrix::Zero(2, 2);
        inst.A(0, 0) = 1.0;
        inst.A(1, 1) = 2.0;
        inst.b = Vector::Constant(2, 1.0 / std::sqrt(2.0));
        inst.C = 1.0;
        inst.m = 2;
        auto res = hhl_solve(inst, dims);
        CHECK(res.fidelity >= 1.0 - 1e-6);
        Vector want(2);
        want << 1.0, 0.5;
        want.normalize();
        CHECK(std::norm(cx(want.dot(res.output))) >= 1.0 - 1e-6);
        CHECK(res.residual < 1e-6);
    }
    // A = I: output = b, success probability C^2
    {
        auto dims = make_dims(2, 1);
        HHLInstance inst;
        inst.A = Matrix::Identity(2, 2);
        inst.b = Vector(2);
        inst.b << 0.6, 0.8;
        inst.C = 1.0;
        inst.m = 2;
        auto res = hhl_solve(inst, dims);
        CHECK(res.fidelity >= 1.0 - 1e-9);
        CHECK(res.success_probability == doctest::Approx(1.0).epsilon(1e-9));
        // with C = 0.5 the success probability drops to C^2
        inst.C = 0.5;
        auto res2 = hhl_solve(inst, dims);
        CHECK(res2.success_probability == doctest::Approx(0.25).epsilon(1e-9));
    }
    // 4x4 hermitian with representable spectrum
    {
        auto dims = make_dims(2, 2);
        HHLInstance inst;
        Matrix diag = Matrix::Zero(4, 4);
        diag(0, 0) = 1;
        diag(1, 1) = 2;
        diag(2, 2) = 3;
        diag(3, 3) = 4;
        // conjugate by a unitary so A is dense hermitian with spectrum 1..4
        const Matrix h = fourier_h(4).matrix;
        inst.A = Matrix(h * diag * h.adjoint());
        Rng rng(3);
        inst.b = Vector(4);
        for (int i = 0; i < 4; ++i) inst.b[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
        inst.C = 1.0;
        inst.m = 2;  // K = 16 phase values
        auto res = hhl_solve(inst, dims);
        CHECK(res.fidelity >= 1.0 - 1e-6);
    }
    // contract violation: C above the smallest eigenvalue
    {
        auto dims = make_dims(2, 1);
        HHLInstance inst;
        inst.A = Matrix::Identity(2, 2);
        inst.b = Vector::Constant(2, 1.0);
        inst.C = 1.5;
        inst.m = 2;
        CHECK_THROWS_AS(hhl_solve(inst, dims), contract_error);
    }
}

TEST_CASE("algorithm circuits preserve the charge sector") {
    auto dims = make_dims(2, 2);
    auto charge = ChargeAssignment::standard(dims);
    auto state = RegisterState::basis_state({0, 0}, charge);
    // gate-by-gate QFT circuit on the extended space
    auto gates = qft_circuit(2, dims.N);
    for (const auto& g : gates) {
        std::vector<int> sites;
        for (int p : g.sites) sites.push_back(p);
        apply_local(state, g.matrix, sites);
        CHECK(state.in_sector(0));
    }
}
