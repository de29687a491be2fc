#include "qpack/noise.hpp"

#include <algorithm>
#include <functional>

#include "qpack/gates.hpp"

namespace qpack {

WeylChannel WeylChannel::identity(int N) {
    WeylChannel c;
    c.N = N;
    c.weights.assign(static_cast<size_t>(N) * N, 0.0);
    c.weights[0] = 1.0;
    return c;
}

WeylChannel WeylChannel::uniform(int N, double p) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("WeylChannel: rate out of [0,1]");
    WeylChannel c;
    c.N = N;
    c.weights.assign(static_cast<size_t>(N) * N, p / (static_cast<double>(N) * N - 1));
    c.weights[0] = 1.0 - p;
    return c;
}

WeylChannel WeylChannel::explicit_table(int N, std::vector<double> weights) {
    if (static_cast<int>(weights.size()) != N * N)
        throw std::invalid_argument("WeylChannel: need N^2 weights");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("WeylChannel: negative weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kAlgebraTol)
        throw std::invalid_argument("WeylChannel: weights must sum to 1");
    WeylChannel c;
    c.N = N;
    c.weights = std::move(weights);
    return c;
}

std::pair<int, int> sample_weyl_error(const WeylChannel& channel, Rng& rng) {
    const int idx = rng.weighted(channel.weights);
    return {idx / channel.N, idx % channel.N};
}

void apply_weyl_channel(RegisterState& state, int site, const WeylChannel& channel, Rng& rng) {
    auto [s, t] = sample_weyl_error(channel, rng);
    if (s == 0 && t == 0) return;
    apply_local(state, weyl_xz(channel.N, s, t).matrix, {site});
}

double gv_event_probability(const NoiseParams& params) {
    const double q = params.p_gv0 * std::exp(-params.gap_over_kT);
    return std::clamp(q, 0.0, 1.0);
}

namespace {
// Quantum-jump relabeling channel: collapse the site label, then move it to
// `target_of(label)`. CPTP with Kraus set {|target_of(l)><l|}.
void jump_relabel(RegisterState& state, int site, Rng& rng,
                  const std::function<int(int)>& target_of) {
    const int m = state.local_dim();
    auto probs = label_distribution(state, {site});
    const int l = rng.weighted(probs);
    Vector& amp = state.amplitudes();
    const long long dim = amp.size();
    Vector out = Vector::Zero(dim);
    const int tgt = target_of(l);
    for (long long idx = 0; idx < dim; ++idx) {
        if (amp[idx] == cx(0.0)) continue;
        auto digits = state.unflatten(idx);
        if (digits[site] != l) continue;
        digits[site] = tgt;
        out[state.flatten(digits)] = amp[idx];
    }
    state.amplitudes() = std::move(out);
    state.renormalize();
}
}  // namespace

void force_gv_event(RegisterState& state, int site, Rng& rng) {
    const int plus = state.charge().charged_label(+1);
    if (plus < 0) throw std::invalid_argument("force_gv_event: charged_span is empty");
    jump_relabel(state, site, rng, [&](int) { return plus; });
}

bool apply_gv_error(RegisterState& state, int site, const NoiseParams& params, Rng& rng) {
    const double q = gv_event_probability(params);
    if (rng.uniform() >= q) return false;
    force_gv_event(state, site, rng);
    return true;
}

void force_leakage(RegisterState& state, int site, Rng& rng) {
    const auto& charge = state.charge();
    if (charge.n_leak == 0) throw std::invalid_argument("force_leakage: leak_span is empty");
    jump_relabel(state, site, rng, [&](int l) {
        if (!charge.is_computational(l)) return l;  // already outside
        return charge.leak_label(charge.internal_of(l));
    });
}

bool apply_leakage(RegisterState& state, int site, double p_leak, Rng& rng) {
    if (p_leak < 0.0 || p_leak > 1.0) throw std::invalid_argument("apply_leakage: bad rate");
    if (rng.uniform() >= p_leak) return false;
    force_leakage(state, site, rng);
    return true;
}

namespace {
// Measures {Pi_code, Pi_leak} on one site; true means leaked branch taken.
bool measure_leak_projector(RegisterState& state, int site, Rng& rng) {
    const auto& charge = state.charge();
    auto probs = label_distribution(state, {site});
    double p_leak_branch = 0.0;
    for (int l = 0; l < state.local_dim(); ++l)
        if (charge.is_leaked(l)) p_leak_branch += probs[l];
    const bool leaked = rng.uniform() < p_leak_branch;
    Vector& amp = state.amplitudes();
    for (long long idx = 0; idx < amp.size(); ++idx) {
        if (amp[idx] == cx(0.0)) continue;
        const int l = state.unflatten(idx)[site];
        if (charge.is_leaked(l) != leaked) amp[idx] = 0.0;
    }
    state.renormalize();
    return leaked;
}
}  // namespace

bool lru_reset(RegisterState& state, int site, Rng& rng) {
    const auto& charge = state.charge();
    if (charge.n_leak == 0) return false;
    auto probs = label_distribution(state, {site});
    double w = 0.0;
    for (int l = 0; l < state.local_dim(); ++l)
        if (charge.is_leaked(l)) w += probs[l];
    if (w <= 1e-15) return false;  // nothing to do
    if (!measure_leak_projector(state, site, rng)) return false;
    // re-inject at |0_E>, internal label preserved
    Vector& amp = state.amplitudes();
    Vector out = Vector::Zero(amp.size());
    for (long long idx = 0; idx < amp.size(); ++idx) {
        if (amp[idx] == cx(0.0)) continue;
        auto digits = state.unflatten(idx);
        const int l = digits[site];
        digits[site] = charge.internal_of(l) * charge.dims.D;  // (j, 0_E)
        out[state.flatten(digits)] += amp[idx];
    }
    state.amplitudes() = std::move(out);
    state.renormalize();
    return true;
}

int measure_flag(RegisterState& state, int site, Rng& rng) {
    return measure_leak_projector(state, site, rng) ? -1 : +1;
}

ErrorBudget effective_rate(const NoiseParams& params, long t_L) {
    if (t_L < 0) throw std::invalid_argument("effective_rate: t_L must be >= 0");
    ErrorBudget b;
    b.t_L = t_L;
    b.p_eff = params.p_gc + params.p_leak * static_cast<double>(t_L);
    return b;
}

std::optional<long> lru_interval_bound(const NoiseParams& params, double p_th) {
    if (params.p_leak <= 0.0) return std::nullopt;
    const double bound = (p_th - params.p_gc) / params.p_leak;
    return std::max(1L, static_cast<long>(std::floor(bound)));
}

double threshold_bound(int N, double gap_over_kT) {
    if (N < 2) throw std::invalid_argument("threshold_bound: N must be >= 2");
    return (1.0 - std::exp(-gap_over_kT)) / (2.0 * (N - 1));
}

}  // namespace qpack
