#include "qpack/compiler.hpp"

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace qpack {

namespace {
int default_theta_r(int N) {
    for (int r = 2; r < 4 * N + 5; ++r)
        if (theta_param_valid(r, N)) return r;
    throw std::logic_error("no valid theta parameter");
}
}  // namespace

GateLibrary GateLibrary::standard(int N) { return standard(N, N == 2 ? 0 : default_theta_r(N)); }

GateLibrary GateLibrary::standard(int N, int theta_r_value) {
    GateLibrary lib;
    lib.N_ = N;
    std::vector<GateOp> base;
    base.push_back(weyl_x(N));
    base.push_back(weyl_z(N));
    base.push_back(fourier_h(N));
    if (N == 2)
        base.push_back(t8());
    else
        base.push_back(theta_r(ThetaGateParam{theta_r_value, N}));
    for (const auto& g : base) {
        GateOp inv{g.name + "†", Matrix(g.matrix.adjoint()), g.arity, g.gauge_status};
        const int fwd = static_cast<int>(lib.gens_.size());
        lib.gens_.push_back(g);
        lib.gens_.push_back(std::move(inv));
        lib.inverse_.push_back(fwd + 1);
        lib.inverse_.push_back(fwd);
    }
    return lib;
}

GateWord GateWord::reversed_inverse(const GateLibrary& lib) const {
    GateWord out;
    out.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
        out.letters.push_back(lib.inverse_letter(*it));
    return out;
}

GateWord GateWord::then(const GateWord& next) const {
    GateWord out = *this;
    out.letters.insert(out.letters.end(), next.letters.begin(), next.letters.end());
    return out;
}

Matrix evaluate_word(const GateWord& word, const GateLibrary& lib) {
    Matrix acc = Matrix::Identity(lib.N(), lib.N());
    for (int letter : word.letters) acc = Matrix(lib.matrix(letter) * acc);
    return acc;
}

std::string serialize_word(const GateWord& word, const GateLibrary& lib) {
    std::ostringstream os;
    for (size_t i = 0; i < word.letters.size(); ++i) {
        if (i) os << ' ';
        os << lib.token(word.letters[i]);
    }
    return os.str();
}

GateWord parse_word(const std::string& text, const GateLibrary& lib) {
    GateWord w;
    std::istringstream is(text);
    std::string tok;
    while (is >> tok) {
        int found = -1;
        for (int i = 0; i < lib.size(); ++i)
            if (lib.token(i) == tok) {
                found = i;
                break;
            }
        if (found < 0) throw std::invalid_argument("parse_word: unknown token " + tok);
        w.letters.push_back(found);
    }
    return w;
}

Matrix project_su(const Matrix& u) {
    const int n = static_cast<int>(u.rows());
    const cx det = u.determinant();
    const double phase = std::arg(det) / n;
    return Matrix(u * std::polar(1.0, -phase));
}

Matrix random_su(int N, Rng& rng) {
    Matrix g(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) g(i, j) = cx(rng.gaussian(0, 1), rng.gaussian(0, 1));
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < N; ++i) {
        cx d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : cx(1.0));
    }
    return project_su(q);
}

double operator_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("operator_distance: dimension mismatch");
    if (a.rows() == 2) {
        // SU-phase-aligned closed form through the trace of a^dag b.
        const Matrix ab = project_su(Matrix(a.adjoint() * b));
        const double c = std::clamp(std::abs(ab.trace().real()) / 2.0, 0.0, 1.0);
        return 2.0 * std::sin(std::acos(c) / 2.0);
    }
    Eigen::ComplexEigenSolver<Matrix> es(Matrix(a.adjoint() * b), false);
    std::vector<double> phases;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        phases.push_back(std::arg(es.eigenvalues()[i]));
    std::sort(phases.begin(), phases.end());
    double max_gap = 2.0 * kPi - (phases.back() - phases.front());
    for (size_t i = 1; i < phases.size(); ++i)
        max_gap = std::max(max_gap, phases[i] - phases[i - 1]);
    const double span = 2.0 * kPi - max_gap;
    return 2.0 * std::sin(std::min(span / 4.0, kPi / 2.0));
}

// ---- SU(2) quaternion helpers ----

namespace {

struct Quat {
    double w = 1, x = 0, y = 0, z = 0;

    Quat mul(const Quat& o) const {
        return Quat{w * o.w - x * o.x - y * o.y - z * o.z,
                    w * o.x + x * o.w + y * o.z - z * o.y,
                    w * o.y - x * o.z + y * o.w + z * o.x,
                    w * o.z + x * o.y - y * o.x + z * o.w};
    }
    Quat conj() const { return Quat{w, -x, -y, -z}; }
    void canonicalize() {  // projective representative with leading coord > 0
        const double* c[4] = {&w, &x, &y, &z};
        for (auto* p : c) {
            if (std::abs(*p) > 1e-12) {
                if (*p < 0) { w = -w; x = -x; y = -y; z = -z; }
                break;
            }
        }
    }
};

// U = w I - i (x sx + y sy + z sz)
Quat to_quat(const Matrix& u) {
    Quat q;
    q.w = 0.5 * (u(0, 0).real() + u(1, 1).real());
    q.z = 0.5 * (u(1, 1).imag() - u(0, 0).imag());
    q.x = -0.5 * (u(0, 1).imag() + u(1, 0).imag());
    q.y = 0.5 * (u(1, 0).real() - u(0, 1).real());
    const double n = std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
    q.w /= n; q.x /= n; q.y /= n; q.z /= n;
    return q;
}

Matrix from_quat(const Quat& q) {
    Matrix u(2, 2);
    u(0, 0) = cx(q.w, -q.z);
    u(0, 1) = cx(-q.y, -q.x);
    u(1, 0) = cx(q.y, -q.x);
    u(1, 1) = cx(q.w, q.z);
    return u;
}

double rotation_angle(Quat q) {
    if (q.w < 0) { q.w = -q.w; }
    return 2.0 * std::acos(std::clamp(q.w, -1.0, 1.0));
}

Quat axis_angle(double ax, double ay, double az, double angle) {
    const double n = std::sqrt(ax * ax + ay * ay + az * az);
    const double s = std::sin(angle / 2.0);
    if (n < 1e-14) return Quat{std::cos(angle / 2.0), 0, 0, 0};
    return Quat{std::cos(angle / 2.0), s * ax / n, s * ay / n, s * az / n};
}

Quat commutator(const Quat& v, const Quat& w) {
    return v.mul(w).mul(v.conj()).mul(w.conj());
}

// Factors V, W with [V, W] = delta (delta in SU(2)). The base construction
// rotates by angles (ratio*phi, phi/ratio) about two orthogonal axes; both
// the axis pair and the ratio are free choices, so each variant hands the
// recursion an independent pair of factor targets.
std::optional<std::pair<Matrix, Matrix>> balanced_commutator_factors(const Matrix& delta,
                                                                     int axis_pair,
                                                                     double ratio) {
    Quat qd = to_quat(delta);
    if (qd.w < 0) { qd.w = -qd.w; qd.x = -qd.x; qd.y = -qd.y; qd.z = -qd.z; }
    const double theta = rotation_angle(qd);
    auto base_axis = [&](int which) {
        // cyclic pairs (x,y), (y,z), (z,x)
        static const double axes[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        const int idx = (axis_pair + which) % 3;
        return std::array<double, 3>{axes[idx][0], axes[idx][1], axes[idx][2]};
    };
    const auto a1 = base_axis(0), a2 = base_axis(1);
    auto comm_of = [&](double phi) {
        return commutator(axis_angle(a1[0], a1[1], a1[2], ratio * phi),
                          axis_angle(a2[0], a2[1], a2[2], phi / ratio));
    };
    // the commutator angle grows monotonically in phi on the bisected branch
    double hi = 2.0 * std::asin(std::pow(2.0, -0.25)) / std::max(ratio, 1.0 / ratio);
    if (rotation_angle(comm_of(hi)) < theta) return std::nullopt;  // out of reach
    double lo = 0.0;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (rotation_angle(comm_of(mid)) < theta ? lo : hi) = mid;
    }
    const double phi = 0.5 * (lo + hi);
    if (std::abs(rotation_angle(comm_of(phi)) - theta) > 1e-9) return std::nullopt;
    const Quat v0 = axis_angle(a1[0], a1[1], a1[2], ratio * phi);
    const Quat w0 = axis_angle(a2[0], a2[1], a2[2], phi / ratio);
    Quat c0 = commutator(v0, w0);
    if (c0.w < 0) { c0.w = -c0.w; c0.x = -c0.x; c0.y = -c0.y; c0.z = -c0.z; }
    // rotate the commutator axis onto delta's axis
    auto norm3 = [](double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); };
    const double nc = norm3(c0.x, c0.y, c0.z), nd = norm3(qd.x, qd.y, qd.z);
    Quat s{1, 0, 0, 0};
    if (nc > 1e-12 && nd > 1e-12) {
        const double cxv = c0.x / nc, cyv = c0.y / nc, czv = c0.z / nc;
        const double dxv = qd.x / nd, dyv = qd.y / nd, dzv = qd.z / nd;
        const double dot = std::clamp(cxv * dxv + cyv * dyv + czv * dzv, -1.0, 1.0);
        double axx = cyv * dzv - czv * dyv;
        double axy = czv * dxv - cxv * dzv;
        double axz = cxv * dyv - cyv * dxv;
        if (norm3(axx, axy, axz) < 1e-12) {
            // parallel or anti-parallel; pick any axis perpendicular to c
            double tx = 1, ty = 0, tz = 0;
            if (std::abs(cxv) > 0.9) { tx = 0; ty = 1; }
            const double tdot = tx * cxv + ty * cyv + tz * czv;
            axx = tx - tdot * cxv;
            axy = ty - tdot * cyv;
            axz = tz - tdot * czv;
        }
        s = axis_angle(axx, axy, axz, std::acos(dot));
    }
    const Quat v = s.mul(v0).mul(s.conj());
    const Quat w = s.mul(w0).mul(s.conj());
    return std::make_pair(from_quat(v), from_quat(w));
}

}  // namespace

int EpsilonNet::nearest(const Matrix& target, double* dist) const {
    int best = -1;
    double best_d = 1e300;
    if (!quats.empty()) {
        // projective SU(2) distance sqrt(2 - 2 |<q, p>|): maximize |dot|
        Quat q = to_quat(project_su(target));
        double best_dot = -1.0;
        for (size_t i = 0; i < quats.size(); ++i) {
            const auto& p = quats[i];
            const double dot = std::abs(q.w * p[0] + q.x * p[1] + q.y * p[2] + q.z * p[3]);
            if (dot > best_dot) {
                best_dot = dot;
                best = static_cast<int>(i);
            }
        }
        best_d = std::sqrt(std::max(0.0, 2.0 - 2.0 * std::min(1.0, best_dot)));
    } else {
        for (size_t i = 0; i < unitaries.size(); ++i) {
            const double d = operator_distance(unitaries[i], target);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
    }
    if (dist) *dist = best_d;
    return best;
}

namespace {

// Spatial hash over projective quaternion coordinates for SU(2) dedup.
struct QuatHashGrid {
    double cell;
    std::unordered_map<long long, std::vector<int>> buckets;

    static long long key(int a, int b, int c, int d) {
        auto enc = [](int v) { return static_cast<long long>(v + 512) & 1023; };
        return (enc(a) << 30) | (enc(b) << 20) | (enc(c) << 10) | enc(d);
    }
    std::array<int, 4> cell_of(const Quat& q) const {
        return {static_cast<int>(std::floor(q.w / cell)), static_cast<int>(std::floor(q.x / cell)),
                static_cast<int>(std::floor(q.y / cell)), static_cast<int>(std::floor(q.z / cell))};
    }
    bool has_close(const Quat& q, double radius, const std::vector<Quat>& all) const {
        auto c = cell_of(q);
        for (int dw = -1; dw <= 1; ++dw)
            for (int dx = -1; dx <= 1; ++dx)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dz = -1; dz <= 1; ++dz) {
                        auto it = buckets.find(key(c[0] + dw, c[1] + dx, c[2] + dy, c[3] + dz));
                        if (it == buckets.end()) continue;
                        for (int idx : it->second) {
                            const Quat& o = all[idx];
                            const double d2 = (q.w - o.w) * (q.w - o.w) + (q.x - o.x) * (q.x - o.x) +
                                              (q.y - o.y) * (q.y - o.y) + (q.z - o.z) * (q.z - o.z);
                            if (std::sqrt(d2) < radius) return true;
                        }
                    }
        return false;
    }
    void insert(const Quat& q, int idx) {
        auto c = cell_of(q);
        buckets[key(c[0], c[1], c[2], c[3])].push_back(idx);
    }
};

double frob_phase_distance(const Matrix& a, const Matrix& b) {
    const cx tr = (a.adjoint() * b).trace();
    const double n = static_cast<double>(a.rows());
    return std::sqrt(std::max(0.0, 2.0 * n - 2.0 * std::abs(tr)));
}

}  // namespace

EpsilonNet build_net(const GateLibrary& lib, int t0, double dedup_radius, int probe_targets,
                     std::uint64_t probe_seed, size_t max_entries) {
    const int N = lib.N();
    EpsilonNet net;
    net.depth_t0 = t0;
    net.dedup_radius = dedup_radius;

    std::vector<Quat> quats;
    QuatHashGrid grid{std::max(dedup_radius, 1e-3), {}};

    auto try_add = [&](const GateWord& w, const Matrix& su) {
        if (N == 2) {
            Quat q = to_quat(su);
            q.canonicalize();
            if (grid.has_close(q, dedup_radius, quats)) return false;
            grid.insert(q, static_cast<int>(quats.size()));
            quats.push_back(q);
            net.quats.push_back({q.w, q.x, q.y, q.z});
        } else {
            for (const auto& u : net.unitaries)
                if (frob_phase_distance(u, su) < dedup_radius) return false;
        }
        net.words.push_back(w);
        net.unitaries.push_back(su);
        return true;
    };

    try_add(GateWord{}, Matrix::Identity(N, N));
    size_t frontier_begin = 0;
    for (int depth = 1; depth <= t0 && !net.truncated; ++depth) {
        const size_t frontier_end = net.words.size();
        for (size_t i = frontier_begin; i < frontier_end && !net.truncated; ++i) {
            const GateWord parent = net.words[i];
            const Matrix pm = net.unitaries[i];
            for (int letter = 0; letter < lib.size(); ++letter) {
                GateWord w = parent;
                w.letters.push_back(letter);
                try_add(w, project_su(Matrix(lib.matrix(letter) * pm)));
                if (net.words.size() >= max_entries) {
                    net.truncated = true;
                    break;
                }
            }
        }
        frontier_begin = frontier_end;
    }

    // probe the covering radius with random targets
    Rng rng(probe_seed);
    double worst = 0.0;
    for (int i = 0; i < probe_targets; ++i) {
        double d = 0.0;
        net.nearest(random_su(N, rng), &d);
        worst = std::max(worst, d);
    }
    net.probed_delta0 = worst;
    return net;
}

namespace {

struct SkNode {
    GateWord word;
    Matrix matrix;
    double error;
};

SkNode sk_recurse(const Matrix& target, const EpsilonNet& net, const GateLibrary& lib,
                  int level) {
    if (level == 0) {
        double d = 0.0;
        const int idx = net.nearest(target, &d);
        return SkNode{net.words[idx], net.unitaries[idx], d};
    }
    SkNode prev = sk_recurse(target, net, lib, level - 1);
    SkNode best = prev;
    best.error = operator_distance(target, prev.matrix);

    const Matrix delta = project_su(Matrix(target * prev.matrix.adjoint()));

    // net refinement of the residual
    {
        double d = 0.0;
        const int idx = net.nearest(delta, &d);
        if (net.words[idx].length() > 0) {
            GateWord w = prev.word.then(net.words[idx]);
            Matrix m = Matrix(net.unitaries[idx] * prev.matrix);
            const double err = operator_distance(target, m);
            if (err < best.error) best = SkNode{std::move(w), std::move(m), err};
        }
    }
    // group-commutator refinement (SU(2)); axis-pair and angle-ratio
    // variants are tried until one clearly improves on the previous level
    if (lib.N() == 2 && operator_distance(delta, Matrix::Identity(2, 2)) > 1e-12) {
        static const double kRatios[] = {1.0, 1.35, 0.74};
        for (double ratio : kRatios) {
            for (int axis_pair = 0; axis_pair < 3; ++axis_pair) {
                auto factors = balanced_commutator_factors(delta, axis_pair, ratio);
                if (!factors) continue;
                SkNode va = sk_recurse(factors->first, net, lib, level - 1);
                SkNode wa = sk_recurse(factors->second, net, lib, level - 1);
                GateWord word = prev.word
                                    .then(wa.word.reversed_inverse(lib))
                                    .then(va.word.reversed_inverse(lib))
                                    .then(wa.word)
                                    .then(va.word);
                Matrix m = Matrix(va.matrix * wa.matrix * va.matrix.adjoint() *
                                  wa.matrix.adjoint() * prev.matrix);
                const double err = operator_distance(target, m);
                if (err < best.error) best = SkNode{std::move(word), std::move(m), err};
            }
            if (best.error < 0.8 * prev.error) break;  // clear improvement found
        }
    }
    return best;
}

}  // namespace

SkResult sk_compile(const Matrix& target, const EpsilonNet& net, const GateLibrary& lib,
                    int levels) {
    if (!is_unitary(target, 1e-8)) throw std::invalid_argument("sk_compile: target not unitary");
    const Matrix su_target = project_su(target);
    SkResult res;
    for (int k = 0; k <= levels; ++k) {
        SkNode node = sk_recurse(su_target, net, lib, k);
        res.per_level_error.push_back(node.error);
        if (k == levels) {
            res.word = node.word;
            res.error = node.error;
        }
    }
    return res;
}

}  // namespace qpack
