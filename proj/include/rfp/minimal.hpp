#pragma once

#include "rfp/ensembles.hpp"

#include <optional>
#include <span>

namespace rfp {

/// c is minimal in a binary linear code iff the subcode supported inside
/// supp(c) is {0, c}; its dimension is k - rank(basis restricted to the
/// complement of supp(c)). Throws when c is zero or not a codeword.
bool is_minimal(const LinearCodeInstance& code, const SymbolVector& c);

/// Support-containment scan over an explicit codeword list over GF(2^s):
/// c is minimal iff every nonzero c' with supp(c') inside supp(c) is a
/// scalar multiple of c.
bool is_minimal(std::span<const SymbolVector> code, const SymbolVector& c, const FieldTable& field);

struct MinimalityFraming {
    bool minimal = false;
    bool framing_empty = false;
};

/// Both sides computed independently: minimality of x2 - x1, and emptiness of
/// the narrow envelope of {x1, x2} intersected with C \ {x1, x2} (found by
/// constrained solving over the parity checks).
MinimalityFraming minimality_framing_equivalence(const LinearCodeInstance& code, const SymbolVector& x1,
                                                 const SymbolVector& x2);
/// Explicit-codeword variant for any q; the framing side scans the list.
MinimalityFraming minimality_framing_equivalence(std::span<const SymbolVector> code, const SymbolVector& x1,
                                                 const SymbolVector& x2, const FieldTable& field);

struct MinimalityReport {
    std::uint64_t code_size = 0;
    std::uint64_t minimal_count = 0;
    /// minimal / |C|
    double fraction = 0.0;
    /// minimal / (|C| - 1), the share among nonzero codewords
    double fraction_nonzero = 0.0;
    /// Number of nonzero codewords inspected (all, or the sample size).
    std::uint64_t inspected = 0;
    bool sampled = false;
};

/// Exhaustive when dimension <= max_dimension; otherwise samples
/// `sample_size` uniform nonzero codewords when given, else throws.
MinimalityReport minimality_report(const LinearCodeInstance& code, std::size_t max_dimension = 24,
                                   std::optional<std::size_t> sample_size = std::nullopt,
                                   std::optional<Seed> sample_seed = std::nullopt);

struct MinimalFractionEstimate {
    std::size_t instances = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
    double mean_nonzero = 0.0;
    double stderr_nonzero = 0.0;
    std::vector<MinimalityReport> reports;
};

/// Averages minimality_report over `instances` codes whose keys are
/// derive_seed(master, "instance", i).
MinimalFractionEstimate minimal_fraction_estimate(const LinearParams& params, std::size_t instances,
                                                  const Seed& master, std::size_t threads = 1,
                                                  std::size_t max_dimension = 24,
                                                  std::optional<std::size_t> sample_size = std::nullopt);

} // namespace rfp
