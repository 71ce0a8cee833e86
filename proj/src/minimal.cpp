#include "rfp/minimal.hpp"

#include "rfp/coalition.hpp"
#include "rfp/parallel.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rfp {

namespace {

// Dimension of the subcode of `basis` supported inside `support`.
std::size_t subcode_dimension(std::span<const BitVector> basis, const BitVector& support, std::size_t n) {
    const BitVector outside = ~support;
    std::vector<BitVector> rows;
    rows.reserve(basis.size());
    for (const BitVector& b : basis)
        rows.push_back(b & outside);
    return basis.size() - gf2_row_reduce(rows, n).size();
}

bool minimal_in_span(std::span<const BitVector> basis, const BitVector& c) {
    return subcode_dimension(basis, c, c.size()) == 1;
}

bool is_scalar_multiple(const SymbolVector& a, const SymbolVector& c, const FieldTable& field) {
    if (a.support() != c.support())
        return false;
    std::optional<Symbol> ratio;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Symbol ci = c.get(i);
        if (ci == 0)
            continue;
        const Symbol r = field.div(a.get(i), ci);
        if (ratio && *ratio != r)
            return false;
        ratio = r;
    }
    return true;
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs)
        s += x;
    return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double stderr_of(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2)
        return 0.0;
    double ss = 0.0;
    for (double x : xs)
        ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

} // namespace

bool is_minimal(const LinearCodeInstance& code, const SymbolVector& c) {
    if (!c.is_binary() || c.size() != code.length())
        throw std::invalid_argument("is_minimal: expected a binary word of length " + std::to_string(code.length()));
    if (c.is_zero())
        throw std::invalid_argument("is_minimal: the zero word is never minimal");
    if (!code.contains(c.bits()))
        throw std::invalid_argument("is_minimal: word is not a codeword");
    return minimal_in_span(code.basis, c.bits());
}

bool is_minimal(std::span<const SymbolVector> code, const SymbolVector& c, const FieldTable& field) {
    if (c.is_zero())
        throw std::invalid_argument("is_minimal: the zero word is never minimal");
    if (c.bits_per_symbol() != field.bits())
        throw std::invalid_argument("is_minimal: word alphabet does not match the field");
    bool member = false;
    for (const SymbolVector& x : code)
        member = member || x == c;
    if (!member)
        throw std::invalid_argument("is_minimal: word is not a codeword");
    const BitVector support = c.support();
    for (const SymbolVector& other : code) {
        if (other.is_zero() || !other.support().is_subset_of(support))
            continue;
        if (!is_scalar_multiple(other, c, field))
            return false;
    }
    return true;
}

MinimalityFraming minimality_framing_equivalence(const LinearCodeInstance& code, const SymbolVector& x1,
                                                 const SymbolVector& x2) {
    if (x1 == x2)
        throw std::invalid_argument("minimality_framing_equivalence: x1 and x2 must differ");
    if (!code.contains(x1.bits()) || !code.contains(x2.bits()))
        throw std::invalid_argument("minimality_framing_equivalence: inputs must be codewords");
    MinimalityFraming out;
    out.minimal = is_minimal(code, x1 + x2);
    const SymbolVector pair[] = {x1, x2};
    out.framing_empty = !framing_check_linear_full(code, pair).has_value();
    return out;
}

MinimalityFraming minimality_framing_equivalence(std::span<const SymbolVector> code, const SymbolVector& x1,
                                                 const SymbolVector& x2, const FieldTable& field) {
    if (x1 == x2)
        throw std::invalid_argument("minimality_framing_equivalence: x1 and x2 must differ");
    SymbolVector diff = x2;
    diff += x1; // characteristic 2: subtraction is addition
    MinimalityFraming out;
    out.minimal = is_minimal(code, diff, field);
    const SymbolVector pair[] = {x1, x2};
    const EnvelopeSpec env = build_envelope(pair, EnvelopeMode::Narrow);
    out.framing_empty = true;
    for (const SymbolVector& y : code) {
        if (y != x1 && y != x2 && env.contains(y)) {
            out.framing_empty = false;
            break;
        }
    }
    return out;
}

MinimalityReport minimality_report(const LinearCodeInstance& code, std::size_t max_dimension,
                                   std::optional<std::size_t> sample_size, std::optional<Seed> sample_seed) {
    const std::size_t k = code.dimension();
    MinimalityReport rep;
    if (k >= 63)
        throw std::invalid_argument("code dimension too large to report sizes");
    rep.code_size = std::uint64_t{1} << k;
    if (k == 0)
        return rep;

    if (k <= max_dimension) {
        BitVector c(code.length());
        for (std::uint64_t g = 1; g < rep.code_size; ++g) {
            c ^= code.basis[static_cast<std::size_t>(std::countr_zero(g))];
            if (minimal_in_span(code.basis, c))
                ++rep.minimal_count;
        }
        rep.inspected = rep.code_size - 1;
        rep.fraction = static_cast<double>(rep.minimal_count) / static_cast<double>(rep.code_size);
        rep.fraction_nonzero = static_cast<double>(rep.minimal_count) / static_cast<double>(rep.code_size - 1);
        return rep;
    }
    if (!sample_size)
        throw std::invalid_argument("code dimension " + std::to_string(k) + " exceeds the enumeration cap of " +
                                    std::to_string(max_dimension) + "; pass a sample size");
    RandomStream rng(sample_seed.value_or(derive_seed(code.key.seed, "minimal-sample", 0)));
    std::uint64_t hits = 0;
    for (std::size_t s = 0; s < *sample_size; ++s) {
        std::uint64_t coeffs = 0;
        while (coeffs == 0)
            coeffs = rng.uniform_below(rep.code_size);
        if (minimal_in_span(code.basis, code.codeword(coeffs)))
            ++hits;
    }
    rep.sampled = true;
    rep.inspected = *sample_size;
    rep.fraction_nonzero = *sample_size == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(*sample_size);
    rep.fraction = rep.fraction_nonzero * static_cast<double>(rep.code_size - 1) / static_cast<double>(rep.code_size);
    rep.minimal_count = static_cast<std::uint64_t>(std::llround(rep.fraction_nonzero * static_cast<double>(rep.code_size - 1)));
    return rep;
}

MinimalFractionEstimate minimal_fraction_estimate(const LinearParams& params, std::size_t instances,
                                                  const Seed& master, std::size_t threads, std::size_t max_dimension,
                                                  std::optional<std::size_t> sample_size) {
    if (instances == 0)
        throw std::invalid_argument("minimal_fraction_estimate needs at least one instance");
    if (params.field_bits != 1)
        throw std::invalid_argument("minimal_fraction_estimate supports binary codes only");
    MinimalFractionEstimate est;
    est.instances = instances;
    est.reports.resize(instances);
    parallel_for(instances, threads, [&](std::size_t i) {
        const Key key{derive_seed(master, "instance", i), params};
        est.reports[i] = minimality_report(sample_linear(key), max_dimension, sample_size);
    });
    std::vector<double> f, fz;
    for (const auto& r : est.reports) {
        f.push_back(r.fraction);
        fz.push_back(r.fraction_nonzero);
    }
    est.mean = mean_of(f);
    est.stderr_mean = stderr_of(f, est.mean);
    est.mean_nonzero = mean_of(fz);
    est.stderr_nonzero = stderr_of(fz, est.mean_nonzero);
    return est;
}

} // namespace rfp
