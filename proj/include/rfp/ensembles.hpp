#pragma once

#include "rfp/gf2.hpp"
#include "rfp/gf2m.hpp"
#include "rfp/random.hpp"
#include "rfp/reed_solomon.hpp"
#include "rfp/symbol_vector.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace rfp {

enum class EnsembleKind { Bernoulli, Linear, Concatenated };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

/// M x n matrix of i.i.d. Bernoulli(p) bits.
struct BernoulliParams {
    std::size_t length = 0;
    std::size_t users = 1;
    double bias = 0.5;
    /// Resample rows that repeat an earlier row.
    bool distinct_rows = false;

    double rate() const;
    bool operator==(const BernoulliParams&) const = default;
};

/// Random parity-check code: ceil(n (1 - R)) x n uniform matrix over GF(2^s).
struct LinearParams {
    std::size_t length = 0;
    double rate = 0.5;
    /// Defaults to q^floor(n R).
    std::optional<std::size_t> users;
    unsigned field_bits = 1;

    std::size_t check_rows() const;
    std::size_t user_count() const;
    bool operator==(const LinearParams&) const = default;
};

/// RS outer code over GF(2^s) of length N = q - 1 and dimension K, with an
/// independent Bernoulli inner code of size q and length m per coordinate.
struct ConcatParams {
    unsigned field_bits = 4;
    std::size_t outer_dimension = 1;
    std::size_t coalition_size = 2;
    double slack = 0.5;
    /// Defaults to ceil(4 log2 N).
    std::optional<std::size_t> inner_length;
    /// Defaults to the optimal bias p*(t).
    std::optional<double> inner_bias;
    bool distinct_inner_rows = true;

    std::size_t alphabet_size() const { return std::size_t{1} << field_bits; }
    std::size_t outer_length() const { return alphabet_size() - 1; }
    std::size_t resolved_inner_length() const;
    double resolved_inner_bias() const;
    bool operator==(const ConcatParams&) const = default;
};

using EnsembleParams = std::variant<BernoulliParams, LinearParams, ConcatParams>;

/// Master seed plus ensemble parameters; expands deterministically to a code.
struct Key {
    Seed seed{};
    EnsembleParams params;

    EnsembleKind kind() const noexcept { return static_cast<EnsembleKind>(params.index()); }
    bool operator==(const Key&) const = default;
};

/// Ordered fingerprints; user i holds fingerprints[i].
struct Codebook {
    std::vector<SymbolVector> fingerprints;
    Key key;

    std::size_t size() const noexcept { return fingerprints.size(); }
    std::size_t length() const noexcept { return fingerprints.empty() ? 0 : fingerprints.front().size(); }
    const SymbolVector& operator[](std::size_t i) const { return fingerprints[i]; }
};

/// Binary code {x : H x = 0}.
struct LinearCodeInstance {
    BitMatrix parity_check;
    std::size_t rank = 0;
    std::vector<BitVector> basis;
    Key key;

    std::size_t length() const noexcept { return parity_check.cols(); }
    std::size_t dimension() const noexcept { return basis.size(); }
    bool contains(const BitVector& y) const { return parity_check.annihilates(y); }
    /// sum of basis[j] over the set bits j of `coefficients`.
    BitVector codeword(std::uint64_t coefficients) const;
};

/// Code {x : H x = 0} over GF(2^s), s > 1.
struct QaryLinearCodeInstance {
    FieldTable field;
    SymbolMatrix parity_check;
    std::size_t rank = 0;
    std::vector<SymbolVector> basis;
    Key key;

    std::size_t length() const noexcept { return parity_check.cols; }
    std::size_t dimension() const noexcept { return basis.size(); }
    bool contains(const SymbolVector& y) const { return gfq_annihilates(field, parity_check, y); }
    /// sum of d_j basis[j] where d_j are the base-q digits of `index`.
    SymbolVector codeword(std::uint64_t index) const;
};

struct ConcatenatedCodeInstance {
    ConcatParams params;
    Key key;
    ReedSolomonCode outer;
    /// inner[i] holds the q inner codewords for outer coordinate i.
    std::vector<Codebook> inner;
    std::size_t inner_length = 0;

    std::size_t outer_length() const noexcept { return outer.length(); }
    std::size_t length() const noexcept { return outer.length() * inner_length; }
    /// Total number of users, q^K. Throws when it exceeds 2^63.
    std::uint64_t size() const;
};

Codebook sample_bernoulli(const Key& key);
LinearCodeInstance sample_linear(const Key& key);
QaryLinearCodeInstance sample_linear_qary(const Key& key);

/// M distinct codewords drawn uniformly without replacement from the code,
/// using the key's "assign" child stream. Throws when M exceeds the code size.
Codebook assign_linear_fingerprints(const LinearCodeInstance& code, std::size_t users, const Key& key);
Codebook assign_linear_fingerprints(const QaryLinearCodeInstance& code, std::size_t users, const Key& key);

/// Throws when the outer code violates the relative distance condition.
ConcatenatedCodeInstance build_concatenated(const Key& key);
SymbolVector concat_encode(const ConcatenatedCodeInstance& inst, std::span<const Symbol> message);
/// Base-q digits of a user index, least significant first.
std::vector<Symbol> message_from_index(std::uint64_t index, std::size_t q, std::size_t digits);
/// Fingerprints of users 0..count-1; count defaults to all q^K and must not
/// exceed `cap`.
Codebook enumerate_concatenated(const ConcatenatedCodeInstance& inst,
                                std::optional<std::uint64_t> count = std::nullopt, std::uint64_t cap = 1U << 16);

/// Codebook of the key's ensemble: Bernoulli sampling, linear sampling plus
/// assignment, or the first `max_users` concatenated fingerprints.
Codebook expand_codebook(const Key& key, std::optional<std::uint64_t> max_users = std::nullopt);

} // namespace rfp
