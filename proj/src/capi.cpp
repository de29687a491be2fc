#include "qpack.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "qpack/gates.hpp"
#include "qpack/runner.hpp"
#include "qpack/state.hpp"

using namespace qpack;

struct qpack_register {
    ChargeAssignment charge;
    RegisterState state;
};

namespace {

thread_local std::string g_last_error;

qpack_status fail(qpack_status code, const char* what) {
    g_last_error = what;
    return code;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename F>
qpack_status guarded(F&& f) {
    try {
        return f();
    } catch (const contract_error& e) {
        return fail(QPACK_ERR_CONTRACT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(QPACK_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(QPACK_ERR_INTERNAL, e.what());
    }
}

}  // namespace

extern "C" {

const char* qpack_version(void) { return "1.0.0"; }

const char* qpack_last_error(void) { return g_last_error.c_str(); }

void qpack_string_free(char* s) { std::free(s); }

qpack_status qpack_run_json(const char* config_json, char** report_json) {
    if (!config_json || !report_json)
        return fail(QPACK_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        Json config = Json::parse(config_json, nullptr, /*allow_exceptions=*/false);
        if (config.is_discarded())
            return fail(QPACK_ERR_INVALID_ARGUMENT, "config is not valid JSON");
        Json report = run_config(config);
        *report_json = dup_string(report.dump(2));
        return *report_json ? QPACK_OK : fail(QPACK_ERR_INTERNAL, "out of memory");
    });
}

qpack_status qpack_register_create(int d, int D, int n_sites, qpack_register** out) {
    if (!out) return fail(QPACK_ERR_INVALID_ARGUMENT, "null out-pointer");
    return guarded([&] {
        auto charge = ChargeAssignment::bare(make_dims(d, D));
        std::vector<int> zeros(static_cast<size_t>(n_sites), 0);
        if (n_sites < 1) return fail(QPACK_ERR_INVALID_ARGUMENT, "n_sites must be >= 1");
        *out = new qpack_register{charge, RegisterState::basis_state(zeros, charge)};
        return QPACK_OK;
    });
}

void qpack_register_destroy(qpack_register* reg) { delete reg; }

qpack_status qpack_register_set_basis(qpack_register* reg, const int* labels, size_t n_labels) {
    if (!reg || !labels) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    return guarded([&] {
        if (static_cast<int>(n_labels) != reg->state.n_sites())
            return fail(QPACK_ERR_INVALID_ARGUMENT, "label count mismatch");
        reg->state = RegisterState::basis_state(std::vector<int>(labels, labels + n_labels),
                                                reg->charge);
        return QPACK_OK;
    });
}

qpack_status qpack_register_apply(qpack_register* reg, const char* gate, const int* sites,
                                  size_t n_sites) {
    if (!reg || !gate || !sites) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    return guarded([&] {
        GateOp op = gate_by_name(gate, reg->charge.dims);
        if (static_cast<size_t>(op.arity) != n_sites)
            return fail(QPACK_ERR_INVALID_ARGUMENT, "gate arity does not match site count");
        apply_local(reg->state, op.matrix, std::vector<int>(sites, sites + n_sites));
        return QPACK_OK;
    });
}

qpack_status qpack_register_measure(qpack_register* reg, uint64_t seed, int* labels,
                                    size_t n_labels) {
    if (!reg || !labels) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    return guarded([&] {
        if (static_cast<int>(n_labels) != reg->state.n_sites())
            return fail(QPACK_ERR_INVALID_ARGUMENT, "label buffer size mismatch");
        Rng rng(seed);
        std::vector<int> sites(reg->state.n_sites());
        for (int i = 0; i < reg->state.n_sites(); ++i) sites[i] = i;
        auto out = measure_labels(reg->state, sites, rng);
        reg->state = out.post_state;
        for (size_t i = 0; i < n_labels; ++i) labels[i] = out.labels[i];
        return QPACK_OK;
    });
}

qpack_status qpack_register_fidelity(const qpack_register* a, const qpack_register* b,
                                     double* out) {
    if (!a || !b || !out) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    return guarded([&] {
        *out = fidelity(a->state, b->state);
        return QPACK_OK;
    });
}

qpack_status qpack_register_dim(const qpack_register* reg, size_t* out) {
    if (!reg || !out) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    *out = static_cast<size_t>(reg->state.dim());
    return QPACK_OK;
}

qpack_status qpack_register_amplitudes(const qpack_register* reg, double* buffer,
                                       size_t buffer_len) {
    if (!reg || !buffer) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    const size_t dim = static_cast<size_t>(reg->state.dim());
    if (buffer_len < 2 * dim)
        return fail(QPACK_ERR_INVALID_ARGUMENT, "amplitude buffer too small");
    for (size_t i = 0; i < dim; ++i) {
        buffer[2 * i] = reg->state.amplitudes()[i].real();
        buffer[2 * i + 1] = reg->state.amplitudes()[i].imag();
    }
    return QPACK_OK;
}

qpack_status qpack_register_dump(const qpack_register* reg, char** out) {
    if (!reg || !out) return fail(QPACK_ERR_BAD_HANDLE, "null handle");
    return guarded([&] {
        *out = dup_string(dump_amplitudes(reg->state));
        return *out ? QPACK_OK : fail(QPACK_ERR_INTERNAL, "out of memory");
    });
}

}  // extern "C"
