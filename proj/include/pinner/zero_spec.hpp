#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "pinner/coefseq.hpp"
#include "pinner/complex_ops.hpp"

namespace pinner {

// One prescribed zero inside the open unit disk, with multiplicity.
struct ZeroEntry {
    Cplx w;
    unsigned mult = 1;
};

// An ordered finite list of zeros. Entries closer than merge_tol are
// aggregated into a single entry whose multiplicity is the sum; the solver
// treats near-coincident zeros as one root of higher order because the
// conditioning of separate interpolation conditions degenerates as the
// points collide.
class ZeroSetSpec {
public:
    static constexpr double merge_tol = 1e-8;

    ZeroSetSpec() = default;
    explicit ZeroSetSpec(std::vector<ZeroEntry> entries);

    // Appends one zero (multiplicity may exceed 1), merging if it lands
    // within merge_tol of an existing entry.
    void add(Cplx w, unsigned mult = 1);

    const std::vector<ZeroEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::size_t distinct_count() const { return entries_.size(); }
    std::size_t total_multiplicity() const;

    // Entries that were merged or that sit within warn_tol of a neighbour
    // without merging; informational, for CLI diagnostics.
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    std::vector<ZeroEntry> entries_;
    std::vector<std::string> warnings_;
    // Uniform grid over the plane at the warning radius, so neighbour
    // lookups (and therefore adds) stay cheap for very long zero lists.
    std::unordered_map<long long, std::vector<std::size_t>> grid_;
};

// A zero sequence in expansion order: each zero repeated per multiplicity.
using ZeroSeq = std::vector<Cplx>;

// First n terms of a zero sequence, aggregated back into a spec.
ZeroSetSpec spec_from_prefix(const ZeroSeq& seq, std::size_t n);

// Dense coefficients of prod_k (1 - z/w_k)^{m_k}. Every zero must be
// nonzero; a zero at the origin is expressed by the caller as a plain
// monomial shift instead.
CoefSeq vanishing_polynomial(const ZeroSetSpec& spec);

// Throws std::invalid_argument unless every zero satisfies |w| < 1 (and,
// when require_nonzero, w != 0).
void validate_in_disk(const ZeroSetSpec& spec, bool require_nonzero);

}  // namespace pinner
