#include "rfp/ensembles.hpp"

#include "rfp/rates.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace rfp {

namespace {

constexpr unsigned kFisherYatesMaxBits = 20;

template <class Params>
const Params& params_as(const Key& key, std::string_view op) {
    const auto* p = std::get_if<Params>(&key.params);
    if (p == nullptr)
        throw std::invalid_argument(std::string(op) + ": key holds a " + std::string(to_string(key.kind())) +
                                    " ensemble");
    return *p;
}

bool fits_u64_power(std::size_t base_bits, std::size_t exponent) { return base_bits * exponent < 64; }

// M distinct indices drawn uniformly from [0, 2^bits) without replacement.
std::vector<std::uint64_t> distinct_indices(RandomStream& rng, std::size_t bits, std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    if (bits <= kFisherYatesMaxBits) {
        std::vector<std::uint64_t> pool(std::size_t{1} << bits);
        std::iota(pool.begin(), pool.end(), std::uint64_t{0});
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t j = i + rng.uniform_below(pool.size() - i);
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }
    std::unordered_set<std::uint64_t> seen;
    const std::uint64_t mask = bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
    while (out.size() < count) {
        const std::uint64_t x = rng.next_u64() & mask;
        if (seen.insert(x).second)
            out.push_back(x);
    }
    return out;
}

void check_bias(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("Bernoulli bias must lie in [0, 1]");
}

} // namespace

std::string_view to_string(EnsembleKind kind) {
    switch (kind) {
    case EnsembleKind::Bernoulli: return "bernoulli";
    case EnsembleKind::Linear: return "linear";
    case EnsembleKind::Concatenated: return "concat";
    }
    return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
    if (name == "bernoulli")
        return EnsembleKind::Bernoulli;
    if (name == "linear")
        return EnsembleKind::Linear;
    if (name == "concat" || name == "concatenated")
        return EnsembleKind::Concatenated;
    throw std::invalid_argument("unknown ensemble '" + std::string(name) + "'");
}

double BernoulliParams::rate() const {
    return length == 0 ? 0.0 : std::log2(static_cast<double>(users)) / static_cast<double>(length);
}

std::size_t LinearParams::check_rows() const {
    if (!(rate > 0.0 && rate < 1.0))
        throw std::invalid_argument("design rate must lie in (0, 1)");
    return static_cast<std::size_t>(std::ceil(static_cast<double>(length) * (1.0 - rate) - 1e-9));
}

std::size_t LinearParams::user_count() const {
    if (users)
        return *users;
    const auto digits = static_cast<std::size_t>(std::floor(static_cast<double>(length) * rate + 1e-9));
    if (!fits_u64_power(field_bits, digits))
        throw std::invalid_argument("default user count q^floor(nR) does not fit in 64 bits; set M explicitly");
    return std::size_t{1} << (field_bits * digits);
}

std::size_t ConcatParams::resolved_inner_length() const {
    return inner_length.value_or(default_inner_length(outer_length()));
}

double ConcatParams::resolved_inner_bias() const {
    return inner_bias ? *inner_bias : optimal_rate(coalition_size).p_star;
}

BitVector LinearCodeInstance::codeword(std::uint64_t coefficients) const {
    BitVector y(length());
    for (std::size_t j = 0; j < basis.size() && j < 64; ++j)
        if ((coefficients >> j) & 1U)
            y ^= basis[j];
    return y;
}

SymbolVector QaryLinearCodeInstance::codeword(std::uint64_t index) const {
    const std::size_t q = field.size();
    SymbolVector y(length(), field.bits());
    for (std::size_t j = 0; j < basis.size() && index != 0; ++j, index /= q) {
        const auto digit = static_cast<Symbol>(index % q);
        if (digit != 0)
            y += scale(field, digit, basis[j]);
    }
    return y;
}

std::uint64_t ConcatenatedCodeInstance::size() const {
    if (!fits_u64_power(params.field_bits, params.outer_dimension) ||
        params.field_bits * params.outer_dimension == 63)
        throw std::overflow_error("concatenated code size q^K exceeds 2^63");
    return std::uint64_t{1} << (params.field_bits * params.outer_dimension);
}

Codebook sample_bernoulli(const Key& key) {
    const auto& p = params_as<BernoulliParams>(key, "sample_bernoulli");
    check_bias(p.bias);
    if (p.users < 1)
        throw std::invalid_argument("Bernoulli codebook needs at least one user");
    if (p.distinct_rows) {
        const bool degenerate = p.bias == 0.0 || p.bias == 1.0;
        const bool too_many = p.length < 64 && p.users > (std::size_t{1} << p.length);
        if ((degenerate && p.users > 1) || too_many)
            throw std::invalid_argument("distinct rows impossible for M=" + std::to_string(p.users) + ", n=" +
                                        std::to_string(p.length) + ", p=" + std::to_string(p.bias));
    }

    RandomStream rng(key.seed);
    Codebook cb;
    cb.key = key;
    cb.fingerprints.reserve(p.users);
    std::unordered_set<BitVector, BitVectorHash> seen;
    const std::size_t max_attempts = 1000 * p.users + 1000;
    std::size_t attempts = 0;
    while (cb.fingerprints.size() < p.users) {
        BitVector row = rng.bernoulli_bits(p.length, p.bias);
        if (p.distinct_rows) {
            if (++attempts > max_attempts)
                throw std::runtime_error("could not draw " + std::to_string(p.users) + " distinct rows");
            if (!seen.insert(row).second)
                continue;
        }
        cb.fingerprints.push_back(SymbolVector::binary(std::move(row)));
    }
    return cb;
}

LinearCodeInstance sample_linear(const Key& key) {
    const auto& p = params_as<LinearParams>(key, "sample_linear");
    if (p.field_bits != 1)
        throw std::invalid_argument("sample_linear is binary; use sample_linear_qary for q > 2");
    const std::size_t rows = p.check_rows();
    RandomStream rng(key.seed);
    std::vector<BitVector> h;
    h.reserve(rows);
    for (std::size_t r = 0; r < rows; ++r)
        h.push_back(rng.uniform_bits(p.length));

    LinearCodeInstance code;
    code.parity_check = BitMatrix::from_rows(std::move(h), p.length);
    code.basis = gf2_nullspace_basis(code.parity_check);
    code.rank = p.length - code.basis.size();
    code.key = key;
    return code;
}

QaryLinearCodeInstance sample_linear_qary(const Key& key) {
    const auto& p = params_as<LinearParams>(key, "sample_linear_qary");
    if (p.field_bits < 2)
        throw std::invalid_argument("sample_linear_qary needs q > 2");
    FieldTable field(p.field_bits);
    const std::size_t rows = p.check_rows();
    RandomStream rng(key.seed);
    SymbolMatrix h;
    h.cols = p.length;
    h.rows.assign(rows, std::vector<Symbol>(p.length, 0));
    for (auto& row : h.rows)
        for (Symbol& s : row)
            s = static_cast<Symbol>(rng.uniform_below(field.size()));

    QaryLinearCodeInstance code{field, h, 0, {}, key};
    code.basis = gfq_nullspace_basis(field, h);
    code.rank = p.length - code.basis.size();
    return code;
}

Codebook assign_linear_fingerprints(const LinearCodeInstance& code, std::size_t users, const Key& key) {
    const std::size_t k = code.dimension();
    if (k < 63 && users > (std::size_t{1} << k))
        throw std::invalid_argument("cannot assign " + std::to_string(users) + " users: code size is 2^" +
                                    std::to_string(k) + " = " + std::to_string(std::size_t{1} << k));
    RandomStream rng(derive_seed(key.seed, "assign", 0));
    Codebook cb;
    cb.key = key;
    cb.fingerprints.reserve(users);
    if (k <= 64) {
        for (std::uint64_t idx : distinct_indices(rng, k, users))
            cb.fingerprints.push_back(SymbolVector::binary(code.codeword(idx)));
        return cb;
    }
    std::unordered_set<BitVector, BitVectorHash> seen;
    while (cb.fingerprints.size() < users) {
        const BitVector coeffs = rng.uniform_bits(k);
        if (!seen.insert(coeffs).second)
            continue;
        BitVector y(code.length());
        for (std::size_t j = coeffs.find_first(); j != BitVector::npos; j = coeffs.find_next(j + 1))
            y ^= code.basis[j];
        cb.fingerprints.push_back(SymbolVector::binary(std::move(y)));
    }
    return cb;
}

Codebook assign_linear_fingerprints(const QaryLinearCodeInstance& code, std::size_t users, const Key& key) {
    const std::size_t k = code.dimension();
    const unsigned s = code.field.bits();
    if (!fits_u64_power(s, k))
        throw std::invalid_argument("q-ary code too large to index (q^k >= 2^64)");
    const std::uint64_t size = std::uint64_t{1} << (s * k);
    if (users > size)
        throw std::invalid_argument("cannot assign " + std::to_string(users) + " users: code size is " +
                                    std::to_string(size));
    RandomStream rng(derive_seed(key.seed, "assign", 0));
    Codebook cb;
    cb.key = key;
    cb.fingerprints.reserve(users);
    // every multiple d * basis[j], so a codeword is a sum of table rows
    const std::size_t q = code.field.size();
    std::vector<SymbolVector> multiples;
    multiples.reserve(k * q);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t d = 0; d < q; ++d)
            multiples.push_back(scale(code.field, static_cast<Symbol>(d), code.basis[j]));
    // base-q digit strings of s*k bits are exactly the packed coefficient indices
    for (std::uint64_t idx : distinct_indices(rng, s * k, users)) {
        SymbolVector y(code.length(), s);
        for (std::size_t j = 0; idx != 0; ++j, idx >>= s)
            if (const std::size_t d = idx & (q - 1); d != 0)
                y += multiples[j * q + d];
        cb.fingerprints.push_back(std::move(y));
    }
    return cb;
}

ConcatenatedCodeInstance build_concatenated(const Key& key) {
    const auto& p = params_as<ConcatParams>(key, "build_concatenated");
    if (p.field_bits < 2 || p.field_bits > 8)
        throw std::invalid_argument("outer field bits must lie in [2, 8]");
    if (p.coalition_size < 1)
        throw std::invalid_argument("coalition size must be positive");
    if (!(p.slack > 0.0 && p.slack < 1.0))
        throw std::invalid_argument("slack xi must lie in (0, 1)");
    const std::size_t n_out = p.outer_length();
    if (!concat_distance_condition(n_out, p.outer_dimension, p.coalition_size, p.slack)) {
        const std::size_t delta = p.outer_dimension <= n_out ? n_out - p.outer_dimension + 1 : 0;
        throw std::invalid_argument(
            "outer RS code violates Delta/N >= 1 - (1 - xi)/t: Delta/N = " + std::to_string(delta) + "/" +
            std::to_string(n_out) + ", required " +
            std::to_string(1.0 - (1.0 - p.slack) / static_cast<double>(p.coalition_size)));
    }

    ConcatenatedCodeInstance inst{p, key, ReedSolomonCode(FieldTable(p.field_bits), p.outer_dimension), {},
                                  p.resolved_inner_length()};
    const double bias = p.resolved_inner_bias();
    inst.inner.reserve(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        Key child{derive_seed(key.seed, "inner", i),
                  BernoulliParams{inst.inner_length, p.alphabet_size(), bias, p.distinct_inner_rows}};
        inst.inner.push_back(sample_bernoulli(child));
    }
    return inst;
}

SymbolVector concat_encode(const ConcatenatedCodeInstance& inst, std::span<const Symbol> message) {
    const SymbolVector outer_word = inst.outer.encode(message);
    const std::size_t m = inst.inner_length;
    BitVector bits(inst.length());
    for (std::size_t i = 0; i < inst.outer_length(); ++i)
        bits.assign_range(i * m, inst.inner[i][outer_word.get(i)].bits());
    return SymbolVector::binary(std::move(bits));
}

std::vector<Symbol> message_from_index(std::uint64_t index, std::size_t q, std::size_t digits) {
    std::vector<Symbol> msg(digits, 0);
    for (std::size_t i = 0; i < digits; ++i, index /= q)
        msg[i] = static_cast<Symbol>(index % q);
    if (index != 0)
        throw std::out_of_range("user index exceeds q^K");
    return msg;
}

Codebook enumerate_concatenated(const ConcatenatedCodeInstance& inst, std::optional<std::uint64_t> count,
                                std::uint64_t cap) {
    const std::uint64_t total = inst.size();
    const std::uint64_t want = count.value_or(total);
    if (want > total)
        throw std::invalid_argument("requested " + std::to_string(want) + " users but the code has " +
                                    std::to_string(total));
    if (want > cap)
        throw std::invalid_argument("enumerating " + std::to_string(want) + " fingerprints exceeds the cap of " +
                                    std::to_string(cap));
    Codebook cb;
    cb.key = inst.key;
    cb.fingerprints.reserve(want);
    for (std::uint64_t u = 0; u < want; ++u)
        cb.fingerprints.push_back(concat_encode(inst, message_from_index(u, inst.params.alphabet_size(),
                                                                         inst.params.outer_dimension)));
    return cb;
}

Codebook expand_codebook(const Key& key, std::optional<std::uint64_t> max_users) {
    switch (key.kind()) {
    case EnsembleKind::Bernoulli:
        return sample_bernoulli(key);
    case EnsembleKind::Linear: {
        const auto& p = std::get<LinearParams>(key.params);
        if (p.field_bits == 1)
            return assign_linear_fingerprints(sample_linear(key), p.user_count(), key);
        return assign_linear_fingerprints(sample_linear_qary(key), p.user_count(), key);
    }
    case EnsembleKind::Concatenated: {
        const auto inst = build_concatenated(key);
        return enumerate_concatenated(inst, max_users, max_users.value_or(1U << 16));
    }
    }
    throw std::logic_error("unreachable ensemble kind");
}

} // namespace rfp
