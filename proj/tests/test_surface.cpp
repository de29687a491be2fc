#include <doctest.h>

#include "qpack/gates.hpp"
#include "qpack/qec_surface.hpp"

using namespace qpack;

namespace {

// Gaussian-elimination rank of symplectic vectors over Z_q (q prime).
int mod_rank(std::vector<std::vector<int>> rows, int q) {
    const size_t cols = rows.empty() ? 0 : rows[0].size();
    int rank = 0;
    size_t col = 0;
    for (size_t r = 0; r < rows.size() && col < cols; ++col) {
        size_t pivot = r;
        while (pivot < rows.size() && rows[pivot][col] % q == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[r], rows[pivot]);
        // normalize pivot to 1 (q prime)
        int inv = 1;
        while ((rows[r][col] * inv) % q != 1) ++inv;
        for (auto& v : rows[r]) v = (v * inv) % q;
        for (size_t other = 0; other < rows.size(); ++other) {
            if (other == r) continue;
            const int f = rows[other][col] % q;
            if (!f) continue;
            for (size_t c = 0; c < cols; ++c)
                rows[other][c] = ((rows[other][c] - f * rows[r][c]) % q + q) % q;
        }
        ++r;
        ++rank;
    }
    return rank;
}

std::vector<int> sympl_row(const SymplecticOp& op) {
    std::vector<int> row = op.a;
    row.insert(row.end(), op.b.begin(), op.b.end());
    return row;
}

}  // namespace

TEST_CASE("layout counts") {
    for (int L : {2, 3, 4}) {
        auto lay = SurfaceLayout::make(L);
        CHECK(lay.n_edges == L * L + (L - 1) * (L - 1));
        CHECK(lay.stars.size() == static_cast<size_t>(L * (L - 1)));
        CHECK(lay.faces.size() == static_cast<size_t>(L * (L - 1)));
    }
    CHECK_THROWS_AS(SurfaceLayout::make(1), std::invalid_argument);
}

TEST_CASE("symplectic convention matches dense Weyl commutation") {
    // single "edge": X and Z as exponent vectors over one site
    for (int q : {2, 3, 5}) {
        SymplecticOp x{"X", {1}, {0}}, z{"Z", {0}, {1}};
        // dense: Z X = omega X Z, and sym(Z,X) = -1 means Z X = omega^{+1} X Z
        CHECK(symplectic_form(z, x, q) == q - 1);
        const Matrix xm = weyl_x(q).matrix, zm = weyl_z(q).matrix;
        CHECK(max_abs(Matrix(zm * xm - unit_phase(1, q) * xm * zm)) < 1e-12);
    }
}

TEST_CASE("all stabilizers commute symplectically") {
    for (int L : {2, 3})
        for (auto [d, D] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
            auto code = SurfaceCode::make(L, make_dims(d, D));
            for (const SurfaceLayer* layer : {&code.internal_layer, &code.external_layer}) {
                for (size_t i = 0; i < layer->stabilizers.size(); ++i)
                    for (size_t j = i + 1; j < layer->stabilizers.size(); ++j)
                        CHECK(symplectic_form(layer->stabilizers[i], layer->stabilizers[j],
                                              layer->q) == 0);
                // logicals commute with every check
                for (const auto& s : layer->stabilizers) {
                    CHECK(symplectic_form(s, layer->logical_x, layer->q) == 0);
                    CHECK(symplectic_form(s, layer->logical_z, layer->q) == 0);
                }
                // Z_L X_L = omega X_L Z_L per layer
                CHECK(symplectic_form(layer->logical_z, layer->logical_x, layer->q) ==
                      layer->q - 1);
            }
        }
}

TEST_CASE("logical space dimension is d*D") {
    for (int L : {2, 3})
        for (auto [d, D] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
            auto code = SurfaceCode::make(L, make_dims(d, D));
            for (const SurfaceLayer* layer : {&code.internal_layer, &code.external_layer}) {
                std::vector<std::vector<int>> rows;
                for (const auto& s : layer->stabilizers) rows.push_back(sympl_row(s));
                const int rank = mod_rank(rows, layer->q);
                CHECK(rank == static_cast<int>(layer->stabilizers.size()));
                // k = n - rank = 1 logical qudit per layer
                CHECK(layer->layout.n_edges - rank == 1);
            }
        }
}

TEST_CASE("single-edge errors are always detected") {
    // at L = 2 the distance is 2: weight-1 errors are detectable, not
    // guaranteed correctable
    for (auto [d, D] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
        auto code = SurfaceCode::make(2, make_dims(d, D));
        for (const SurfaceLayer* layer : {&code.internal_layer, &code.external_layer}) {
            const int n = layer->layout.n_edges;
            for (int e = 0; e < n; ++e)
                for (int v = 1; v < layer->q; ++v) {
                    SymplecticOp err{"", std::vector<int>(n, 0), std::vector<int>(n, 0)};
                    err.a[e] = v;
                    auto syn = surface_syndrome(*layer, err);
                    bool nontrivial = false;
                    for (int s : syn) nontrivial |= (s != 0);
                    CHECK(nontrivial);
                }
        }
    }
}

TEST_CASE("single-edge errors decode to the trivial class at L >= 3") {
    for (int L : {3})
        for (auto [d, D] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}}) {
            auto code = SurfaceCode::make(L, make_dims(d, D));
            for (const SurfaceLayer* layer : {&code.internal_layer, &code.external_layer}) {
                SurfaceDecoder decoder(*layer);
                const int n = layer->layout.n_edges;
                const size_t n_stars = layer->layout.stars.size();
                for (int e = 0; e < n; ++e)
                    for (int v = 1; v < layer->q; ++v) {
                        SymplecticOp err{"", std::vector<int>(n, 0), std::vector<int>(n, 0)};
                        err.a[e] = v;
                        auto syn = surface_syndrome(*layer, err);
                        std::vector<int> face(syn.begin() + n_stars, syn.end());
                        auto rec = decoder.decode_x(face);
                        SymplecticOp res{"", std::vector<int>(n, 0), std::vector<int>(n, 0)};
                        for (int k = 0; k < n; ++k) res.a[k] = (err.a[k] + rec[k]) % layer->q;
                        // trivial syndrome and trivial logical class
                        auto syn2 = surface_syndrome(*layer, res);
                        for (int s : syn2) CHECK(s == 0);
                        CHECK(symplectic_form(res, layer->logical_z, layer->q) == 0);

                        SymplecticOp errz{"", std::vector<int>(n, 0), std::vector<int>(n, 0)};
                        errz.b[e] = v;
                        syn = surface_syndrome(*layer, errz);
                        std::vector<int> star(syn.begin(), syn.begin() + n_stars);
                        auto recz = decoder.decode_z(star);
                        SymplecticOp resz{"", std::vector<int>(n, 0), std::vector<int>(n, 0)};
                        for (int k = 0; k < n; ++k) resz.b[k] = (errz.b[k] + recz[k]) % layer->q;
                        CHECK(symplectic_form(resz, layer->logical_x, layer->q) == 0);
                    }
            }
        }
}

TEST_CASE("below threshold failure rate decreases with distance") {
    const auto dims = make_dims(2, 3);
    const double p = 0.02;
    const long trials = 10000;
    double rate[2];
    int idx = 0;
    for (int L : {2, 3}) {
        auto layer = SurfaceLayer::make(L, dims.D);  // the harder (qutrit) layer
        SurfaceDecoder decoder(layer);
        Rng rng(991);
        auto mc = surface_monte_carlo(layer, decoder, p, trials, rng);
        rate[idx++] = static_cast<double>(mc.failures) / mc.trials;
    }
    CHECK(rate[1] < rate[0]);
}

TEST_CASE("decoder rejects unreachable syndromes") {
    auto layer = SurfaceLayer::make(2, 2);
    SurfaceDecoder decoder(layer);
    std::vector<int> bad(layer.layout.faces.size() + 1, 0);
    CHECK_THROWS_AS(decoder.decode_x(bad), std::invalid_argument);
}
