#include "qpack/qec_surface.hpp"

#include <algorithm>

namespace qpack {

int symplectic_form(const SymplecticOp& p, const SymplecticOp& q_op, int q) {
    long long acc = 0;
    for (size_t e = 0; e < p.a.size(); ++e)
        acc += static_cast<long long>(p.a[e]) * q_op.b[e] -
               static_cast<long long>(p.b[e]) * q_op.a[e];
    return static_cast<int>(((acc % q) + q) % q);
}

int SurfaceLayout::horizontal_edge(int row, int col) const { return row * L + col; }

int SurfaceLayout::vertical_edge(int row, int col) const {
    return L * L + row * (L - 1) + (col - 1);
}

SurfaceLayout SurfaceLayout::make(int L) {
    if (L < 2) throw std::invalid_argument("SurfaceLayout: L must be >= 2");
    SurfaceLayout lay;
    lay.L = L;
    lay.n_edges = L * L + (L - 1) * (L - 1);
    // Horizontal edges point east, vertical edges point south. A star at
    // internal vertex (r,c) takes +1 on outgoing edges, -1 on incoming.
    for (int r = 0; r < L; ++r)
        for (int c = 1; c < L; ++c) {
            std::vector<std::pair<int, int>> star;
            star.push_back({lay.horizontal_edge(r, c - 1), -1});  // west, incoming
            star.push_back({lay.horizontal_edge(r, c), +1});      // east, outgoing
            if (r >= 1) star.push_back({lay.vertical_edge(r - 1, c), -1});
            if (r <= L - 2) star.push_back({lay.vertical_edge(r, c), +1});
            lay.stars.push_back(std::move(star));
        }
    // A face between rows r,r+1 at column c, traversed counterclockwise:
    // bottom east (+1), right north (-1), top west (-1), left south (+1).
    for (int r = 0; r + 1 < L; ++r)
        for (int c = 0; c < L; ++c) {
            std::vector<std::pair<int, int>> face;
            face.push_back({lay.horizontal_edge(r + 1, c), +1});
            face.push_back({lay.horizontal_edge(r, c), -1});
            if (c >= 1) face.push_back({lay.vertical_edge(r, c), +1});       // left
            if (c + 1 <= L - 1) face.push_back({lay.vertical_edge(r, c + 1), -1});  // right
            lay.faces.push_back(std::move(face));
        }
    // Logical X: dual north-south path through the horizontal edges of one
    // column; logical Z: one full row of horizontal edges.
    for (int r = 0; r < L; ++r) lay.logical_x_path.push_back({lay.horizontal_edge(r, 0), +1});
    for (int c = 0; c < L; ++c) lay.logical_z_path.push_back({lay.horizontal_edge(0, c), +1});
    return lay;
}

namespace {
SymplecticOp from_path(const std::string& name, int n_edges,
                       const std::vector<std::pair<int, int>>& path, bool x_type, int q) {
    SymplecticOp op;
    op.name = name;
    op.a.assign(n_edges, 0);
    op.b.assign(n_edges, 0);
    for (auto [e, sign] : path) {
        int v = ((sign % q) + q) % q;
        (x_type ? op.a : op.b)[e] = v;
    }
    return op;
}
}  // namespace

SurfaceLayer SurfaceLayer::make(int L, int q) {
    if (q < 2) throw std::invalid_argument("SurfaceLayer: modulus must be >= 2");
    SurfaceLayer layer;
    layer.q = q;
    layer.layout = SurfaceLayout::make(L);
    const int n = layer.layout.n_edges;
    int idx = 0;
    for (const auto& star : layer.layout.stars)
        layer.stabilizers.push_back(
            from_path("A" + std::to_string(idx++), n, star, /*x_type=*/true, q));
    idx = 0;
    for (const auto& face : layer.layout.faces)
        layer.stabilizers.push_back(
            from_path("B" + std::to_string(idx++), n, face, /*x_type=*/false, q));
    layer.logical_x = from_path("XL", n, layer.layout.logical_x_path, true, q);
    layer.logical_z = from_path("ZL", n, layer.layout.logical_z_path, false, q);
    return layer;
}

SurfaceCode SurfaceCode::make(int L, const HybridDims& dims) {
    SurfaceCode code;
    code.dims = dims;
    code.L = L;
    code.internal_layer = SurfaceLayer::make(L, dims.d);
    code.external_layer = SurfaceLayer::make(L, dims.D);
    return code;
}

std::vector<int> surface_syndrome(const SurfaceLayer& layer, const SymplecticOp& error) {
    std::vector<int> syn;
    syn.reserve(layer.stabilizers.size());
    for (const auto& s : layer.stabilizers) syn.push_back(symplectic_form(s, error, layer.q));
    return syn;
}

namespace {

// Enumerates all exponent vectors over `n` edges in weight order (then
// lexicographic), handing each to `f`; stops when f returns false.
template <typename F>
void enumerate_by_weight(int n, int q, F&& f) {
    std::vector<int> vec(n, 0);
    for (int w = 0; w <= n; ++w) {
        // choose w support positions
        std::vector<int> support(w);
        for (int i = 0; i < w; ++i) support[i] = i;
        bool more = (w <= n);
        while (more) {
            // all (q-1)^w exponent assignments on the support
            std::vector<int> exp(w, 1);
            bool emore = true;
            while (emore) {
                std::fill(vec.begin(), vec.end(), 0);
                for (int i = 0; i < w; ++i) vec[support[i]] = exp[i];
                if (!f(vec, w)) return;
                emore = false;
                for (int i = w - 1; i >= 0; --i) {
                    if (exp[i] + 1 < q) {
                        ++exp[i];
                        std::fill(exp.begin() + i + 1, exp.end(), 1);
                        emore = true;
                        break;
                    }
                }
            }
            // next support combination
            more = false;
            for (int i = w - 1; i >= 0; --i) {
                if (support[i] + 1 <= n - 1 - (w - 1 - i)) {
                    ++support[i];
                    for (int k = i + 1; k < w; ++k) support[k] = support[k - 1] + 1;
                    more = true;
                    break;
                }
            }
            if (w == 0) break;
        }
    }
}

}  // namespace

SurfaceDecoder::SurfaceDecoder(const SurfaceLayer& layer) : layer_(layer) {
    const int n = layer.layout.n_edges;
    const int q = layer.q;
    const size_t n_stars = layer.layout.stars.size();
    const size_t n_faces = layer.layout.faces.size();
    size_t want_x = 1, want_z = 1;
    for (size_t i = 0; i < n_faces; ++i) want_x *= q;
    for (size_t i = 0; i < n_stars; ++i) want_z *= q;

    SymplecticOp err;
    err.a.assign(n, 0);
    err.b.assign(n, 0);
    enumerate_by_weight(n, q, [&](const std::vector<int>& vec, int) {
        if (x_table_.size() < want_x) {
            err.a = vec;
            std::fill(err.b.begin(), err.b.end(), 0);
            std::vector<int> syn;
            for (size_t i = n_stars; i < layer.stabilizers.size(); ++i)
                syn.push_back(symplectic_form(layer.stabilizers[i], err, q));
            x_table_.try_emplace(std::move(syn), vec);
        }
        if (z_table_.size() < want_z) {
            err.b = vec;
            std::fill(err.a.begin(), err.a.end(), 0);
            std::vector<int> syn;
            for (size_t i = 0; i < n_stars; ++i)
                syn.push_back(symplectic_form(layer.stabilizers[i], err, q));
            z_table_.try_emplace(std::move(syn), vec);
        }
        return x_table_.size() < want_x || z_table_.size() < want_z;
    });
}

std::vector<int> SurfaceDecoder::decode_x(const std::vector<int>& face_syndrome) const {
    auto it = x_table_.find(face_syndrome);
    if (it == x_table_.end())
        throw std::invalid_argument("SurfaceDecoder: unreachable face syndrome");
    // invert the stored error to get the recovery
    std::vector<int> rec = it->second;
    for (int& v : rec) v = (layer_.q - v) % layer_.q;
    return rec;
}

std::vector<int> SurfaceDecoder::decode_z(const std::vector<int>& star_syndrome) const {
    auto it = z_table_.find(star_syndrome);
    if (it == z_table_.end())
        throw std::invalid_argument("SurfaceDecoder: unreachable star syndrome");
    std::vector<int> rec = it->second;
    for (int& v : rec) v = (layer_.q - v) % layer_.q;
    return rec;
}

SurfaceMcResult surface_monte_carlo(const SurfaceLayer& layer, const SurfaceDecoder& decoder,
                                    double p, long trials, Rng& rng) {
    const int n = layer.layout.n_edges;
    const int q = layer.q;
    const size_t n_stars = layer.layout.stars.size();
    SurfaceMcResult res{trials, 0};
    SymplecticOp err;
    for (long t = 0; t < trials; ++t) {
        err.a.assign(n, 0);
        err.b.assign(n, 0);
        for (int e = 0; e < n; ++e) {
            if (rng.uniform() < p) err.a[e] = 1 + static_cast<int>(rng.integer(q - 1));
            if (rng.uniform() < p) err.b[e] = 1 + static_cast<int>(rng.integer(q - 1));
        }
        auto syn = surface_syndrome(layer, err);
        std::vector<int> star_syn(syn.begin(), syn.begin() + n_stars);
        std::vector<int> face_syn(syn.begin() + n_stars, syn.end());
        auto rec_x = decoder.decode_x(face_syn);
        auto rec_z = decoder.decode_z(star_syn);
        SymplecticOp residual;
        residual.a.resize(n);
        residual.b.resize(n);
        for (int e = 0; e < n; ++e) {
            residual.a[e] = (err.a[e] + rec_x[e]) % q;
            residual.b[e] = (err.b[e] + rec_z[e]) % q;
        }
        // logical failure iff the residual acts nontrivially on either
        // logical operator
        const bool fail = symplectic_form(residual, layer.logical_z, q) != 0 ||
                          symplectic_form(residual, layer.logical_x, q) != 0;
        if (fail) ++res.failures;
    }
    return res;
}

}  // namespace qpack
