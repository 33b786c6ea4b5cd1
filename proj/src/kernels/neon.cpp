#include "nkc/kernels/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

// NEON has no gather, so the table-lookup stages stay scalar; the reduction
// runs on two float64x2 accumulators holding the same four stripes as the
// reference kernel, keeping results bit-identical.

namespace nkc::kernels {

const Ops& scalar_ops();

namespace {

double striped_sum_neon(const double* v, std::int32_t count) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    std::int32_t i = 0;
    for (; i + 4 <= count; i += 4) {
        acc01 = vaddq_f64(acc01, vld1q_f64(v + i));
        acc23 = vaddq_f64(acc23, vld1q_f64(v + i + 2));
    }
    double s0 = vgetq_lane_f64(acc01, 0);
    double s1 = vgetq_lane_f64(acc01, 1);
    double s2 = vgetq_lane_f64(acc23, 0);
    double s3 = vgetq_lane_f64(acc23, 1);
    if (i < count) s0 += v[i];
    if (i + 1 < count) s1 += v[i + 1];
    if (i + 2 < count) s2 += v[i + 2];
    return ((s0 + s1) + s2) + s3;
}

}  // namespace

const Ops& neon_ops() {
    static const Ops ops{"neon", scalar_ops().pack_indices,
                         scalar_ops().gather_values, striped_sum_neon,
                         scalar_ops().flip_deltas};
    return ops;
}

}  // namespace nkc::kernels

#endif  // __aarch64__
