#pragma once

#include <array>
#include <vector>

#include "qpack/gates.hpp"
#include "qpack/rng.hpp"

namespace qpack {

// Single-qudit synthesis library: inverse-closed generator list over the
// finite gate set {X_N, Z_N, H_N, Theta_r} (T8 stands in for Theta_r at
// N = 2, where the quadratic phase family is entirely Clifford).
class GateLibrary {
  public:
    static GateLibrary standard(int N);
    static GateLibrary standard(int N, int theta_r_value);

    int N() const { return N_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const Matrix& matrix(int letter) const { return gens_[letter].matrix; }
    const std::string& token(int letter) const { return gens_[letter].name; }
    int inverse_letter(int letter) const { return inverse_[letter]; }

  private:
    int N_ = 0;
    std::vector<GateOp> gens_;
    std::vector<int> inverse_;
};

// A word over library letters; evaluation multiplies right-to-left so that
// letters[0] is the first gate applied.
struct GateWord {
    std::vector<int> letters;

    int length() const { return static_cast<int>(letters.size()); }
    GateWord reversed_inverse(const GateLibrary& lib) const;
    GateWord then(const GateWord& next) const;  // this first, then next
};

Matrix evaluate_word(const GateWord& word, const GateLibrary& lib);
std::string serialize_word(const GateWord& word, const GateLibrary& lib);
GateWord parse_word(const std::string& text, const GateLibrary& lib);

// Spectral-norm distance min over global phase of ||a - e^{i phi} b||.
double operator_distance(const Matrix& a, const Matrix& b);

struct EpsilonNet {
    int depth_t0 = 0;
    double dedup_radius = 0.0;
    std::vector<GateWord> words;
    std::vector<Matrix> unitaries;  // phase-aligned SU representatives
    std::vector<std::array<double, 4>> quats;  // SU(2) fast path, canonical sign
    double probed_delta0 = 0.0;     // covering radius from random probing
    bool truncated = false;         // entry budget hit: partial net

    // Index of the entry closest to `target`; distance returned through *dist.
    int nearest(const Matrix& target, double* dist = nullptr) const;
};

// Breadth-first enumeration of all words up to length t0, deduplicated by
// operator distance; the covering radius is probed with `probe_targets`
// random SU(N) targets. Enumeration stops at `max_entries` and marks the
// net truncated.
EpsilonNet build_net(const GateLibrary& lib, int t0, double dedup_radius = 0.05,
                     int probe_targets = 200, std::uint64_t probe_seed = 11,
                     size_t max_entries = 2000000);

struct SkResult {
    GateWord word;
    double error = 0.0;           // operator distance to the target
    std::vector<double> per_level_error;  // error after levels 0..k
};

// Solovay-Kitaev recursion over the net with balanced group-commutator
// refinement; increasing `levels` tightens the approximation.
SkResult sk_compile(const Matrix& target, const EpsilonNet& net, const GateLibrary& lib,
                    int levels);

// Haar-random SU(N) matrix (for probing and tests).
Matrix random_su(int N, Rng& rng);

// Strips the determinant phase so det = 1 (projective representative).
Matrix project_su(const Matrix& u);

}  // namespace qpack
