#include <doctest.h>

#include "qpack/compiler.hpp"

using namespace qpack;

TEST_CASE("operator distance") {
    const Matrix i2 = Matrix::Identity(2, 2);
    CHECK(operator_distance(i2, i2) == doctest::Approx(0.0));
    CHECK(operator_distance(weyl_x(2).matrix, weyl_x(2).matrix) == doctest::Approx(0.0));

    // dist(I, X) = sqrt(2) after optimal phase alignment
    CHECK(operator_distance(i2, weyl_x(2).matrix) == doctest::Approx(std::sqrt(2.0)));

    // phase invariance
    Rng rng(3);
    const Matrix u = random_su(2, rng);
    CHECK(operator_distance(u, Matrix(std::polar(1.0, 0.7) * u)) ==
          doctest::Approx(0.0).epsilon(1e-9));

    // symmetry and triangle inequality on random triples
    for (int t = 0; t < 24; ++t) {
        const Matrix a = random_su(2, rng), b = random_su(2, rng), c = random_su(2, rng);
        const double ab = operator_distance(a, b);
        const double ba = operator_distance(b, a);
        CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
        CHECK(ab <= operator_distance(a, c) + operator_distance(c, b) + 1e-9);
    }

    // general-N branch agrees with the SU(2) closed form
    const Matrix a3 = weyl_x(3).matrix, b3 = fourier_h(3).matrix;
    const double d3 = operator_distance(a3, b3);
    CHECK(d3 > 0.0);
    CHECK(d3 <= 2.0);
}

TEST_CASE("library structure") {
    auto lib = GateLibrary::standard(2);
    CHECK(lib.size() == 8);  // 4 generators + inverses
    for (int l = 0; l < lib.size(); ++l) {
        CHECK(is_unitary(lib.matrix(l), 1e-10));
        const int inv = lib.inverse_letter(l);
        CHECK(max_abs(Matrix(lib.matrix(l) * lib.matrix(inv) - Matrix::Identity(2, 2))) < 1e-12);
    }
    // word round trip through serialization
    GateWord w{{0, 2, 5, 4}};
    const std::string text = serialize_word(w, lib);
    GateWord back = parse_word(text, lib);
    CHECK(back.letters == w.letters);
    CHECK(max_abs(Matrix(evaluate_word(w, lib) - evaluate_word(back, lib))) < 1e-12);
}

TEST_CASE("net construction") {
    auto lib = GateLibrary::standard(2);
    // t0 = 0: only the identity, delta0 is the diameter scale of SU(2)
    auto net0 = build_net(lib, 0, 0.05, 64, 5);
    CHECK(net0.words.size() == 1);
    CHECK(net0.words[0].length() == 0);
    CHECK(net0.probed_delta0 > 0.5);

    auto net6 = build_net(lib, 6, 0.03, 200, 5);
    auto net10 = build_net(lib, 10, 0.03, 200, 5);
    CHECK(net10.words.size() > net6.words.size());
    CHECK(net10.probed_delta0 < net6.probed_delta0);

    // net soundness: stored unitaries equal their word evaluations up to the
    // projective phase (direct matrix comparison; the trace-based distance
    // has a sqrt(machine-eps) floor near zero)
    Rng rng(7);
    for (int i = 0; i < 40; ++i) {
        const size_t idx = rng.integer(net10.words.size());
        const Matrix eval = project_su(evaluate_word(net10.words[idx], lib));
        const Matrix& stored = net10.unitaries[idx];
        const double diff = std::min(max_abs(Matrix(eval - stored)),
                                     max_abs(Matrix(eval + stored)));
        CHECK(diff < 1e-10);
    }
}

TEST_CASE("sk compile basics") {
    auto lib = GateLibrary::standard(2);
    auto net = build_net(lib, 11, 0.03, 200, 5);

    // a library element compiles exactly with a single letter (the measured
    // distance sits at the sqrt(machine-eps) floor of the trace formula)
    SkResult h = sk_compile(fourier_h(2).matrix, net, lib, 0);
    CHECK(h.error < 1e-7);
    CHECK(h.word.length() <= 1);

    // identity compiles to the empty word
    SkResult id = sk_compile(Matrix::Identity(2, 2), net, lib, 0);
    CHECK(id.error < 1e-12);
    CHECK(id.word.length() == 0);

    CHECK_THROWS_AS(sk_compile(Matrix::Zero(2, 2), net, lib, 1), std::invalid_argument);
}

TEST_CASE("sk errors decrease over levels") {
    auto lib = GateLibrary::standard(2);
    auto net = build_net(lib, 24, 0.003, 300, 5);
    Rng rng(41);
    double ratio_bound = 0.0;
    for (int t = 0; t < 25; ++t) {
        const Matrix target = random_su(2, rng);
        SkResult res = sk_compile(target, net, lib, 2);
        REQUIRE(res.per_level_error.size() == 3);
        CHECK(res.per_level_error[1] < res.per_level_error[0]);
        CHECK(res.per_level_error[2] < res.per_level_error[1]);
        // empirical contraction delta_{k+1} / delta_k^{1.5} stays bounded
        if (res.per_level_error[0] > 1e-9)
            ratio_bound = std::max(ratio_bound, res.per_level_error[1] /
                                                    std::pow(res.per_level_error[0], 1.5));
        // word evaluates to within the reported error
        const Matrix eval = evaluate_word(res.word, lib);
        CHECK(operator_distance(eval, target) == doctest::Approx(res.error).epsilon(1e-6));
    }
    CHECK(ratio_bound < 30.0);
}

TEST_CASE("compiled word length growth is bounded") {
    // the recursion bound L(k) <= 5 L(k-1) + c_net holds for the per-level
    // maxima (commutator sub-words come from sibling targets)
    auto lib = GateLibrary::standard(2);
    auto net = build_net(lib, 10, 0.03, 100, 5);
    Rng rng(43);
    const int c_net = net.depth_t0;
    int max_len[3] = {0, 0, 0};
    std::vector<Matrix> targets;
    for (int t = 0; t < 10; ++t) targets.push_back(random_su(2, rng));
    for (int k = 0; k <= 2; ++k)
        for (const auto& target : targets)
            max_len[k] = std::max(max_len[k], sk_compile(target, net, lib, k).word.length());
    CHECK(max_len[0] <= net.depth_t0);
    CHECK(max_len[1] <= 5 * max_len[0] + c_net);
    CHECK(max_len[2] <= 5 * max_len[1] + c_net);
}

TEST_CASE("every prefix of a compiled word is gauge invariant") {
    auto dims = make_dims(2, 1);
    auto charge = ChargeAssignment::standard(dims);
    auto lib = GateLibrary::standard(2);
    auto net = build_net(lib, 10, 0.03, 100, 5);
    Rng rng(47);
    const Matrix target = random_su(2, rng);
    SkResult res = sk_compile(target, net, lib, 2);
    Matrix prefix = Matrix::Identity(2, 2);
    for (int letter : res.word.letters) {
        prefix = Matrix(lib.matrix(letter) * prefix);
        CHECK(charge_commutator_norm(prefix, 1, charge) <= kAlgebraTol);
    }
}

TEST_CASE("higher-dimensional library compiles coarse targets") {
    auto lib = GateLibrary::standard(3);
    auto net = build_net(lib, 4, 0.2, 60, 5);
    Rng rng(53);
    const Matrix target = random_su(3, rng);
    SkResult res = sk_compile(target, net, lib, 1);
    CHECK(res.error <= res.per_level_error[0] + 1e-12);
    CHECK(res.error < 2.0);
}

TEST_CASE("net entry budget yields a flagged partial net") {
    auto lib = GateLibrary::standard(2);
    auto net = build_net(lib, 10, 0.03, 50, 5, /*max_entries=*/100);
    CHECK(net.truncated);
    CHECK(net.words.size() <= 100);
    // the partial net still compiles, just coarsely
    Rng rng(3);
    SkResult res = sk_compile(random_su(2, rng), net, lib, 1);
    CHECK(res.error < 2.0);
}
