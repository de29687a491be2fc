#include <doctest.h>

#include "qpack/gates.hpp"
#include "qpack/state.hpp"

using namespace qpack;

namespace {
ChargeAssignment bare23() { return ChargeAssignment::bare(make_dims(2, 3)); }
}  // namespace

TEST_CASE("basis_state") {
    auto charge = bare23();
    auto s = RegisterState::basis_state({0}, charge);
    CHECK(s.norm() == doctest::Approx(1.0));
    CHECK(std::abs(s.amplitudes()[0] - cx(1.0)) < 1e-15);

    // |J=5> carries (j,k) = (1,2)
    auto s5 = RegisterState::basis_state({5}, charge);
    auto [j, k] = split_index(5, charge.dims);
    CHECK(j == 1);
    CHECK(k == 2);

    auto a = RegisterState::basis_state({1, 2}, charge);
    auto b = RegisterState::basis_state({2, 1}, charge);
    CHECK(std::abs(a.inner(b)) < 1e-15);

    CHECK_THROWS_AS(RegisterState::basis_state({6}, charge), std::invalid_argument);
}

TEST_CASE("apply_local semantics") {
    auto charge = bare23();
    const int N = charge.dims.N;

    auto s = RegisterState::basis_state({2}, charge);
    auto before = s.amplitudes();
    apply_local(s, Matrix::Identity(N, N), {0});
    CHECK((s.amplitudes() - before).norm() < 1e-15);

    // X_N steps the label cyclically
    for (int J = 0; J < N; ++J) {
        auto t = RegisterState::basis_state({J}, charge);
        apply_local(t, weyl_x(N).matrix, {0});
        auto want = RegisterState::basis_state({(J + 1) % N}, charge);
        CHECK(fidelity(t, want) == doctest::Approx(1.0));
    }

    // swap applied twice is the identity
    auto two = RegisterState::basis_state({1, 4}, charge);
    auto copy = two;
    const Matrix swap = hybrid_swap(charge.dims).matrix;
    apply_local(two, swap, {0, 1});
    apply_local(two, swap, {0, 1});
    CHECK((two.amplitudes() - copy.amplitudes()).norm() < 1e-12);

    CHECK_THROWS_AS(apply_local(two, swap, {0, 0}), std::invalid_argument);
    Matrix not_unitary = Matrix::Zero(N, N);
    CHECK_THROWS_AS(apply_local(two, not_unitary, {0}, /*check_unitary=*/true), contract_error);
}

TEST_CASE("gate then adjoint restores amplitudes") {
    auto charge = bare23();
    Rng rng(3);
    Vector amp(charge.dims.N * charge.dims.N);
    for (long long i = 0; i < amp.size(); ++i)
        amp[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
    auto s = RegisterState::from_amplitudes(charge, 2, amp);
    auto orig = s.amplitudes();
    const Matrix cs = csum(charge.dims.N).matrix;
    apply_local(s, cs, {0, 1});
    CHECK(std::abs(s.norm() - 1.0) < 1e-10);
    apply_local(s, Matrix(cs.adjoint()), {0, 1});
    CHECK((s.amplitudes() - orig).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("measure_projective") {
    auto charge = bare23();
    const int N = charge.dims.N;
    Rng rng(7);

    // measuring |0> in the computational basis gives 0 with certainty
    std::vector<Matrix> projs;
    for (int i = 0; i < N; ++i) {
        Matrix p = Matrix::Zero(N, N);
        p(i, i) = 1.0;
        projs.push_back(p);
    }
    auto s = RegisterState::basis_state({0}, charge);
    auto out = measure_projective(s, projs, {0}, rng);
    CHECK(out.outcome_label == 0);
    CHECK(out.probability == doctest::Approx(1.0));

    // uniform superposition of |0>,|1>: those two outcomes at 1/2 each
    Vector amp = Vector::Zero(N);
    amp[0] = amp[1] = 1.0 / std::sqrt(2.0);
    auto u = RegisterState::from_amplitudes(charge, 1, amp);
    int seen[2] = {0, 0};
    for (int t = 0; t < 400; ++t) {
        Rng r = Rng::for_trial(11, t);
        auto o = measure_projective(u, projs, {0}, r);
        REQUIRE(o.outcome_label <= 1);
        CHECK(o.probability == doctest::Approx(0.5));
        ++seen[o.outcome_label];
    }
    CHECK(seen[0] > 120);
    CHECK(seen[1] > 120);

    // born completeness: probabilities over a complete set sum to 1
    auto dist = label_distribution(u, {0});
    double total = 0;
    for (double p : dist) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    std::vector<Matrix> incomplete(projs.begin(), projs.end() - 1);
    CHECK_THROWS_AS(measure_projective(u, incomplete, {0}, rng), std::invalid_argument);
}

TEST_CASE("bell half measurement collapses the other half") {
    auto charge = bare23();
    const int N = charge.dims.N;
    // |Phi_00> built by hand: uniform diagonal
    Vector amp = Vector::Zero(static_cast<long long>(N) * N);
    for (int J = 0; J < N; ++J) amp[J * N + J] = 1.0 / std::sqrt(static_cast<double>(N));
    auto s = RegisterState::from_amplitudes(charge, 2, amp);
    auto dist = label_distribution(s, {0});
    for (int J = 0; J < N; ++J) CHECK(dist[J] == doctest::Approx(1.0 / N));
    Rng rng(5);
    auto out = measure_labels(s, {0}, rng);
    auto both = label_distribution(out.post_state, {0, 1});
    CHECK(both[out.labels[0] * N + out.labels[0]] == doctest::Approx(1.0));
}

TEST_CASE("fidelity") {
    auto charge = bare23();
    auto a = RegisterState::basis_state({0}, charge);
    auto b = RegisterState::basis_state({1}, charge);
    CHECK(fidelity(a, a) == doctest::Approx(1.0));
    CHECK(fidelity(a, b) == doctest::Approx(0.0));
    auto c = a;
    c.amplitudes() *= std::polar(1.0, 1.234);
    CHECK(fidelity(a, c) == doctest::Approx(1.0));
}

TEST_CASE("expectation") {
    auto charge = bare23();
    const int N = charge.dims.N;
    Matrix number = Matrix::Zero(N, N);
    for (int J = 0; J < N; ++J) number(J, J) = J;

    for (int J = 0; J < N; ++J) {
        auto s = RegisterState::basis_state({J}, charge);
        CHECK(expectation(s, number, {0}) == doctest::Approx(J));
    }
    // uniform superposition: mean of 0..N-1
    Vector amp = Vector::Constant(N, 1.0 / std::sqrt(static_cast<double>(N)));
    auto u = RegisterState::from_amplitudes(charge, 1, amp);
    CHECK(expectation(u, number, {0}) == doctest::Approx((N - 1) / 2.0));

    Matrix nh = Matrix::Zero(N, N);
    nh(0, 1) = 1.0;
    CHECK_THROWS_AS(expectation(u, nh, {0}), contract_error);

    // charge expectation on a computational state is 0
    auto ext = ChargeAssignment::standard(charge.dims);
    auto s = RegisterState::basis_state({3}, ext);
    CHECK(s.in_sector(0));
    Matrix q = Matrix::Zero(ext.local_dim_ext, ext.local_dim_ext);
    for (int l = 0; l < ext.local_dim_ext; ++l) q(l, l) = ext.charges[l];
    CHECK(expectation(s, q, {0}) == doctest::Approx(0.0));
}

TEST_CASE("norm preserved by gate sequences") {
    auto charge = bare23();
    const int N = charge.dims.N;
    Rng rng(17);
    Vector amp(static_cast<long long>(N) * N);
    for (long long i = 0; i < amp.size(); ++i)
        amp[i] = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
    auto s = RegisterState::from_amplitudes(charge, 2, amp);
    const Matrix gates1[] = {weyl_x(N).matrix, weyl_z(N).matrix, fourier_h(N).matrix,
                             mixed_flag(charge.dims).matrix};
    for (int round = 0; round < 50; ++round) {
        apply_local(s, gates1[round % 4], {round % 2});
        apply_local(s, csum(N).matrix, {0, 1});
    }
    CHECK(std::abs(s.norm() - 1.0) < 1e-9);
}

TEST_CASE("amplitude dump lists nonzero entries") {
    auto charge = bare23();
    auto s = RegisterState::basis_state({2}, charge);
    auto text = dump_amplitudes(s);
    CHECK(text == "2 1 0\n");
}
