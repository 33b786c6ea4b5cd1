#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace nkc::kernels {

/// Flattened, kernel-friendly view of an NK model. A locus i has
/// `deps` dependencies (itself first, then its k neighbors); its payoff
/// table occupies `1 << deps` doubles starting at `tables + (i << deps)`.
/// The table index of locus i under a bit string S is
///     sum_m S[dep_col[m * n + i]] << m
/// so bit 0 is the locus's own state and bit m+1 its m-th neighbor.
struct ModelView {
    std::int32_t n = 0;
    std::int32_t deps = 0;             // k + 1
    const std::int32_t* dep_col = nullptr;  // column-major (deps x n)
    const double* tables = nullptr;         // n << deps values, all in [0,1]
};

/// Sparse plan describing which locus values a candidate bit flip touches.
/// Flip f covers entries [row[f], row[f+1]); entry e says: locus[e]'s table
/// index changes by XOR with mask[e]. ent_flip[e] maps an entry back to its
/// flip (redundant with row, kept for branch-free accumulation).
struct FlipPlan {
    std::int32_t flips = 0;
    const std::int32_t* row = nullptr;      // flips + 1
    const std::int32_t* locus = nullptr;
    const std::int32_t* mask = nullptr;
    const std::int32_t* ent_flip = nullptr;
};

/// One kernel implementation. All variants must produce bit-identical
/// output for identical input; the equivalence suite enforces this.
struct Ops {
    const char* name;

    /// idx[i] = packed table index of locus i under `bits` (0/1 per locus).
    void (*pack_indices)(const ModelView&, const std::int32_t* bits,
                         std::int32_t* idx);

    /// values[i] = tables[(i << deps) + idx[i]].
    void (*gather_values)(const ModelView&, const std::int32_t* idx,
                          double* values);

    /// Sum of v[0..count) in the canonical striped order: four lane
    /// accumulators over i % 4, combined as ((s0+s1)+s2)+s3. Every
    /// variant implements exactly this order so results match bitwise.
    double (*striped_sum)(const double* v, std::int32_t count);

    /// deltas[f] = sum over the plan's entries for flip f of
    ///   tables[(locus << deps) + (idx[locus] ^ mask)] - values[locus],
    /// accumulated in entry order.
    void (*flip_deltas)(const ModelView&, const FlipPlan&,
                        const std::int32_t* idx, const double* values,
                        double* deltas);
};

enum class Kind { scalar, avx2, neon };

const char* kind_name(Kind kind);
bool available(Kind kind);
std::vector<Kind> available_kinds();

/// The kernel picked at startup (best available), unless overridden by
/// set_active() or the NKC_KERNEL environment variable (scalar|avx2|neon).
const Ops& active();
Kind active_kind();
void set_active(Kind kind);  // throws std::invalid_argument if unavailable

/// Direct access to one variant, available or not compiled-in is checked.
const Ops& get(Kind kind);

}  // namespace nkc::kernels
