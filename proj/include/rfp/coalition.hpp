#pragma once

#include "rfp/ensembles.hpp"

#include <bitset>
#include <optional>
#include <span>
#include <vector>

namespace rfp {

enum class EnvelopeMode { Narrow, Wide };

std::string_view to_string(EnvelopeMode mode);
EnvelopeMode parse_envelope_mode(std::string_view name);

/// Strictly increasing user indices.
struct Coalition {
    std::vector<std::size_t> members;

    std::size_t size() const noexcept { return members.size(); }
    bool contains(std::size_t user) const;

    /// Users {0, ..., t-1}.
    static Coalition first(std::size_t t);
    /// Sorts and checks 1 <= t <= M, distinct, in range.
    static Coalition of(std::vector<std::size_t> members, std::size_t user_count);
    /// t distinct users drawn uniformly from [0, M).
    static Coalition random(RandomStream& rng, std::size_t t, std::size_t user_count);
};

std::vector<SymbolVector> fingerprints_of(const Codebook& cb, const Coalition& coalition);

/// Coordinates where the fingerprints do not all agree.
BitVector detectable_positions(std::span<const SymbolVector> fingerprints);

/// The set of forgeries the marking assumption allows: undetectable
/// coordinates carry the common symbol, detectable ones take any symbol of
/// the allowed set (observed symbols when narrow, the whole alphabet when wide).
class EnvelopeSpec {
public:
    using SymbolSet = std::bitset<256>;

    EnvelopeSpec(EnvelopeMode mode, SymbolVector reference, BitVector detectable, std::vector<SymbolSet> observed);

    EnvelopeMode mode() const noexcept { return mode_; }
    std::size_t length() const noexcept { return reference_.size(); }
    unsigned bits_per_symbol() const noexcept { return reference_.bits_per_symbol(); }
    std::size_t alphabet_size() const noexcept { return reference_.alphabet_size(); }

    const BitVector& detectable() const noexcept { return detectable_; }
    bool is_fixed(std::size_t i) const noexcept { return !detectable_.get(i); }
    /// Common symbol at an undetectable coordinate.
    Symbol fixed_symbol(std::size_t i) const noexcept { return reference_.get(i); }
    /// Allowed symbols at coordinate i, ascending.
    std::vector<Symbol> allowed(std::size_t i) const;

    /// Number of member vectors, saturating at UINT64_MAX.
    std::uint64_t cardinality() const;
    double cardinality_log2() const;

    bool contains(const SymbolVector& y) const;

    /// Equal member sets: same fixed symbols and same allowed sets.
    bool operator==(const EnvelopeSpec& other) const;

private:
    EnvelopeMode mode_;
    SymbolVector reference_;
    BitVector detectable_;
    // observed symbol sets per coordinate; only consulted for narrow q > 2
    std::vector<SymbolSet> observed_;
    bool needs_symbol_check_;
};

/// Throws for an empty fingerprint list or shape mismatch.
EnvelopeSpec build_envelope(std::span<const SymbolVector> fingerprints, EnvelopeMode mode);
/// Throws when y has the wrong length or alphabet.
bool envelope_contains(const EnvelopeSpec& env, const SymbolVector& y);
/// All members in lexicographic order; throws when the cardinality exceeds cap.
std::vector<SymbolVector> enumerate_envelope(const EnvelopeSpec& env, std::uint64_t cap);
/// Uniform random member.
SymbolVector sample_envelope(const EnvelopeSpec& env, RandomStream& rng);

/// Lowest-indexed non-coalition user whose fingerprint lies in the
/// coalition's envelope.
std::optional<std::size_t> framing_check_assigned(const Codebook& cb, const Coalition& coalition,
                                                  EnvelopeMode mode = EnvelopeMode::Narrow);

/// A codeword of the whole solution set {y : H y = 0} inside the binary
/// envelope of `fingerprints` but outside them, found by constrained solving.
/// Throws for q > 2.
std::optional<SymbolVector> framing_check_linear_full(const LinearCodeInstance& code,
                                                      std::span<const SymbolVector> fingerprints,
                                                      EnvelopeMode mode = EnvelopeMode::Narrow);

/// Lowest-indexed user outside `coalition` (indices are messages, see
/// message_from_index) whose concatenated fingerprint lies in the coalition's
/// envelope. Exact: per outer coordinate the envelope admits a symbol set
/// S_i, and the framed users are the RS codewords inside S_0 x ... x S_{N-1},
/// found by interpolating through the K smallest sets. Throws when that
/// product exceeds `cap`.
std::optional<std::uint64_t> framing_check_concatenated(const ConcatenatedCodeInstance& inst,
                                                        const Coalition& coalition,
                                                        EnvelopeMode mode = EnvelopeMode::Narrow,
                                                        std::uint64_t cap = std::uint64_t{1} << 22);

/// User index of a base-q message, least significant digit first.
std::uint64_t index_from_message(std::span<const Symbol> message, std::size_t q);

/// Coordinate-wise field sum of exactly q + 1 pairwise distinct fingerprints.
SymbolVector xor_attack(std::span<const SymbolVector> fingerprints);

/// alpha x1 + (1 - alpha) x2 over GF(q), q > 2, alpha not in {0, 1}.
SymbolVector affine_attack(const SymbolVector& x1, const SymbolVector& x2, Symbol alpha, const FieldTable& field);

/// Column-count typicality for t binary fingerprints: the number of all-one
/// columns lies in [n(p^t - g), n(p^t + g)] and the number of all-zero
/// columns in [n((1-p)^t - g), n((1-p)^t + g)].
bool typicality_t1(std::span<const SymbolVector> fingerprints, double p, double gamma);

/// All four pair-column counts s00, s01, s10, s11 lie in [n(1/4 - g), n(1/4 + g)].
bool typicality_pairs(const SymbolVector& x1, const SymbolVector& x2, double gamma);

} // namespace rfp
