#pragma once
// Vector kernels behind the hot arithmetic loops (FTRL coordinate solves,
// Tsallis pow-sums, dot products). A scalar reference implementation defines
// the semantics; an AVX2 variant is selected at runtime when the CPU supports
// it. The two are equivalence-tested against each other in tests/.

#include <cstddef>

namespace spbm::kernels {

struct Ops {
    const char* name;

    // y[i] = exp(x[i]). x may contain -inf (maps to 0) and +inf (maps to inf).
    void (*exp_v)(const double* x, double* y, std::size_t n);

    // y[i] = log(x[i]) for x[i] > 0; x[i] == 0 maps to -inf.
    void (*log_v)(const double* x, double* y, std::size_t n);

    // y[i] = x[i]^e for x[i] > 0.
    void (*pow_v)(const double* x, double* y, std::size_t n, double e);

    // sum_i x[i]^e for x[i] >= 0 and e > 0, with 0^e = 0.
    double (*pow_sum)(const double* x, std::size_t n, double e);

    double (*dot)(const double* a, const double* b, std::size_t n);
};

const Ops& scalar();

// nullptr when AVX2 is not compiled in or not supported by this CPU.
const Ops* avx2();

// The active table. Defaults to the best supported variant; the environment
// variable SPBM_KERNELS=scalar|avx2 overrides the choice at startup.
const Ops& active();

// Force a variant by name ("scalar", "avx2", "auto"). Returns false if the
// variant is unavailable; the active table is left unchanged in that case.
bool select(const char* name);

} // namespace spbm::kernels
