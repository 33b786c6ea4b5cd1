#include "nkc/kernels/kernels.hpp"

// Reference kernels. Plain loops, no intrinsics; the SIMD variants must
// reproduce these bit-for-bit.

namespace nkc::kernels {

namespace {

void pack_indices_scalar(const ModelView& m, const std::int32_t* bits,
                         std::int32_t* idx) {
    const std::int32_t n = m.n;
    for (std::int32_t i = 0; i < n; ++i) idx[i] = bits[i];
    for (std::int32_t d = 1; d < m.deps; ++d) {
        const std::int32_t* col = m.dep_col + static_cast<std::size_t>(d) * n;
        for (std::int32_t i = 0; i < n; ++i)
            idx[i] |= bits[col[i]] << d;
    }
}

void gather_values_scalar(const ModelView& m, const std::int32_t* idx,
                          double* values) {
    for (std::int32_t i = 0; i < m.n; ++i)
        values[i] = m.tables[(static_cast<std::size_t>(i) << m.deps) + idx[i]];
}

double striped_sum_scalar(const double* v, std::int32_t count) {
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::int32_t i = 0;
    for (; i + 4 <= count; i += 4) {
        s0 += v[i];
        s1 += v[i + 1];
        s2 += v[i + 2];
        s3 += v[i + 3];
    }
    if (i < count) s0 += v[i];
    if (i + 1 < count) s1 += v[i + 1];
    if (i + 2 < count) s2 += v[i + 2];
    return ((s0 + s1) + s2) + s3;
}

void flip_deltas_scalar(const ModelView& m, const FlipPlan& plan,
                        const std::int32_t* idx, const double* values,
                        double* deltas) {
    for (std::int32_t f = 0; f < plan.flips; ++f) {
        double acc = 0.0;
        for (std::int32_t e = plan.row[f]; e < plan.row[f + 1]; ++e) {
            const std::int32_t i = plan.locus[e];
            const double next =
                m.tables[(static_cast<std::size_t>(i) << m.deps) +
                         (idx[i] ^ plan.mask[e])];
            acc += next - values[i];
        }
        deltas[f] = acc;
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", pack_indices_scalar, gather_values_scalar,
                         striped_sum_scalar, flip_deltas_scalar};
    return ops;
}

}  // namespace nkc::kernels
