#include "nkc/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

// AVX2 variants. The packing and gather stages are pure integer/table
// work, so they match the scalar kernels exactly; the floating-point
// stages keep the scalar accumulation order (striped lanes, entry-order
// delta adds) so every result is bit-identical to the reference.

namespace nkc::kernels {

namespace {

void pack_indices_avx2(const ModelView& m, const std::int32_t* bits,
                       std::int32_t* idx) {
    const std::int32_t n = m.n;
    std::int32_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256i acc =
            _mm256_loadu_si256(reinterpret_cast<const __m256i*>(bits + i));
        for (std::int32_t d = 1; d < m.deps; ++d) {
            const std::int32_t* col =
                m.dep_col + static_cast<std::size_t>(d) * n;
            const __m256i where =
                _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + i));
            const __m256i b = _mm256_i32gather_epi32(bits, where, 4);
            acc = _mm256_or_si256(acc, _mm256_slli_epi32(b, d));
        }
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(idx + i), acc);
    }
    for (; i < n; ++i) {
        std::int32_t v = bits[i];
        for (std::int32_t d = 1; d < m.deps; ++d)
            v |= bits[m.dep_col[static_cast<std::size_t>(d) * n + i]] << d;
        idx[i] = v;
    }
}

void gather_values_avx2(const ModelView& m, const std::int32_t* idx,
                        double* values) {
    const std::int32_t n = m.n;
    const __m128i step = _mm_set1_epi32(4 << m.deps);
    __m128i off = _mm_setr_epi32(0, 1 << m.deps, 2 << m.deps, 3 << m.deps);
    std::int32_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i vi =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        const __m128i flat = _mm_add_epi32(off, vi);
        _mm256_storeu_pd(values + i, _mm256_i32gather_pd(m.tables, flat, 8));
        off = _mm_add_epi32(off, step);
    }
    for (; i < n; ++i)
        values[i] = m.tables[(static_cast<std::size_t>(i) << m.deps) + idx[i]];
}

double striped_sum_avx2(const double* v, std::int32_t count) {
    __m256d acc = _mm256_setzero_pd();
    std::int32_t i = 0;
    for (; i + 4 <= count; i += 4)
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(v + i));
    alignas(32) double s[4];
    _mm256_store_pd(s, acc);
    if (i < count) s[0] += v[i];
    if (i + 1 < count) s[1] += v[i + 1];
    if (i + 2 < count) s[2] += v[i + 2];
    return ((s[0] + s[1]) + s[2]) + s[3];
}

void flip_deltas_avx2(const ModelView& m, const FlipPlan& plan,
                      const std::int32_t* idx, const double* values,
                      double* deltas) {
    std::fill(deltas, deltas + plan.flips, 0.0);
    const std::int32_t entries = plan.row[plan.flips];
    std::int32_t e = 0;
    alignas(32) double contrib[4];
    for (; e + 4 <= entries; e += 4) {
        const __m128i loc =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(plan.locus + e));
        const __m128i msk =
            _mm_loadu_si128(reinterpret_cast<const __m128i*>(plan.mask + e));
        const __m128i cur = _mm_i32gather_epi32(idx, loc, 4);
        const __m128i flat = _mm_add_epi32(_mm_slli_epi32(loc, m.deps),
                                           _mm_xor_si128(cur, msk));
        const __m256d next = _mm256_i32gather_pd(m.tables, flat, 8);
        const __m256d prev = _mm256_i32gather_pd(values, loc, 8);
        _mm256_store_pd(contrib, _mm256_sub_pd(next, prev));
        deltas[plan.ent_flip[e]] += contrib[0];
        deltas[plan.ent_flip[e + 1]] += contrib[1];
        deltas[plan.ent_flip[e + 2]] += contrib[2];
        deltas[plan.ent_flip[e + 3]] += contrib[3];
    }
    for (; e < entries; ++e) {
        const std::int32_t i = plan.locus[e];
        const double next =
            m.tables[(static_cast<std::size_t>(i) << m.deps) +
                     (idx[i] ^ plan.mask[e])];
        deltas[plan.ent_flip[e]] += next - values[i];
    }
}

}  // namespace

const Ops& avx2_ops() {
    static const Ops ops{"avx2", pack_indices_avx2, gather_values_avx2,
                         striped_sum_avx2, flip_deltas_avx2};
    return ops;
}

}  // namespace nkc::kernels

#endif  // x86_64
