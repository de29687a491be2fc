#pragma once

#include <optional>

#include "qpack/state.hpp"

namespace qpack {

struct NoiseParams {
    double p_gc = 0.0;        // per-site gauge-conserving Pauli rate
    double p_gv0 = 0.0;       // gauge-violating prefactor A
    double gap_over_kT = 0.0; // Delta / k_B T
    double p_leak = 0.0;
    double gamma = 0.0;       // dephasing rate, reporting only
};

struct ErrorBudget {
    double p_eff = 0.0;
    double p_th = 0.0;
    long t_L = 0;
};

// Probability over Weyl labels (s,t), (0,0) included.
struct WeylChannel {
    int N = 0;
    std::vector<double> weights;  // N*N entries, index s*N + t

    static WeylChannel identity(int N);
    // Total error rate p spread uniformly over the N^2 - 1 nontrivial labels.
    static WeylChannel uniform(int N, double p);
    static WeylChannel explicit_table(int N, std::vector<double> weights);
};

std::pair<int, int> sample_weyl_error(const WeylChannel& channel, Rng& rng);

// Applies one round of the channel to a site (identity label applies nothing).
void apply_weyl_channel(RegisterState& state, int site, const WeylChannel& channel, Rng& rng);

// q = p_gv0 * exp(-gap_over_kT), clamped to [0,1].
double gv_event_probability(const NoiseParams& params);

// With probability q, performs the charge-raising jump on the site: the site
// label is collapsed and relabeled to the +1 charged level, moving the whole
// state out of the neutral sector. Returns true when the event fired.
bool apply_gv_error(RegisterState& state, int site, const NoiseParams& params, Rng& rng);
void force_gv_event(RegisterState& state, int site, Rng& rng);

// Leakage jump: with probability p_leak the site's external label is moved to
// the leak level (internal label preserved). Returns true when it fired.
bool apply_leakage(RegisterState& state, int site, double p_leak, Rng& rng);
void force_leakage(RegisterState& state, int site, Rng& rng);

// Leakage-reduction unit: measures {Pi_code, Pi_leak} on the site and, on
// leak, returns the external label to 0 keeping the internal label. Identity
// on states with no leaked amplitude. Returns true when a leak was caught.
bool lru_reset(RegisterState& state, int site, Rng& rng);

// Flag measurement backing F = X_d Z_D: +1 when the site is inside the code
// range, -1 when it has leaked (where the phase action of F is undefined).
int measure_flag(RegisterState& state, int site, Rng& rng);

ErrorBudget effective_rate(const NoiseParams& params, long t_L);
// Largest LRU interval keeping p_eff <= p_th; nullopt when p_leak = 0 (no
// finite bound needed).
std::optional<long> lru_interval_bound(const NoiseParams& params, double p_th);

// Sufficient threshold bound (1/(2(N-1))) (1 - exp(-gap_over_kT)).
double threshold_bound(int N, double gap_over_kT);

}  // namespace qpack
