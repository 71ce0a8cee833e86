#include "rfp/coalition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rfp {

std::string_view to_string(EnvelopeMode mode) { return mode == EnvelopeMode::Narrow ? "narrow" : "wide"; }

EnvelopeMode parse_envelope_mode(std::string_view name) {
    if (name == "narrow")
        return EnvelopeMode::Narrow;
    if (name == "wide")
        return EnvelopeMode::Wide;
    throw std::invalid_argument("unknown envelope mode '" + std::string(name) + "'");
}

bool Coalition::contains(std::size_t user) const { return std::binary_search(members.begin(), members.end(), user); }

Coalition Coalition::first(std::size_t t) {
    Coalition c;
    c.members.resize(t);
    for (std::size_t i = 0; i < t; ++i)
        c.members[i] = i;
    return c;
}

Coalition Coalition::of(std::vector<std::size_t> members, std::size_t user_count) {
    std::sort(members.begin(), members.end());
    if (members.empty())
        throw std::invalid_argument("coalition must have at least one member");
    if (std::adjacent_find(members.begin(), members.end()) != members.end())
        throw std::invalid_argument("coalition members must be distinct");
    if (members.back() >= user_count)
        throw std::invalid_argument("coalition member " + std::to_string(members.back()) + " out of range for M=" +
                                    std::to_string(user_count));
    return Coalition{std::move(members)};
}

Coalition Coalition::random(RandomStream& rng, std::size_t t, std::size_t user_count) {
    if (t < 1 || t > user_count)
        throw std::invalid_argument("coalition size " + std::to_string(t) + " invalid for M=" +
                                    std::to_string(user_count));
    // Floyd's sampling: t draws, no rejection loop
    std::vector<std::size_t> picked;
    for (std::size_t j = user_count - t; j < user_count; ++j) {
        const auto r = static_cast<std::size_t>(rng.uniform_below(j + 1));
        if (std::find(picked.begin(), picked.end(), r) == picked.end())
            picked.push_back(r);
        else
            picked.push_back(j);
    }
    return of(std::move(picked), user_count);
}

std::vector<SymbolVector> fingerprints_of(const Codebook& cb, const Coalition& coalition) {
    std::vector<SymbolVector> out;
    out.reserve(coalition.size());
    for (std::size_t u : coalition.members) {
        if (u >= cb.size())
            throw std::out_of_range("coalition member outside the codebook");
        out.push_back(cb[u]);
    }
    return out;
}

BitVector detectable_positions(std::span<const SymbolVector> fingerprints) {
    if (fingerprints.empty())
        throw std::invalid_argument("detectable_positions needs at least one fingerprint");
    require_same_shape(fingerprints, "detectable_positions");
    const SymbolVector& ref = fingerprints.front();
    BitVector d(ref.size());
    for (const SymbolVector& x : fingerprints.subspan(1))
        for (unsigned b = 0; b < ref.bits_per_symbol(); ++b)
            d |= x.plane(b) ^ ref.plane(b);
    return d;
}

EnvelopeSpec::EnvelopeSpec(EnvelopeMode mode, SymbolVector reference, BitVector detectable,
                           std::vector<SymbolSet> observed)
    : mode_(mode), reference_(std::move(reference)), detectable_(std::move(detectable)), observed_(std::move(observed)),
      needs_symbol_check_(mode == EnvelopeMode::Narrow && reference_.alphabet_size() > 2) {
    if (detectable_.size() != reference_.size())
        throw std::invalid_argument("envelope detectable mask has the wrong length");
    if (needs_symbol_check_ && observed_.size() != reference_.size())
        throw std::invalid_argument("narrow q-ary envelope needs observed symbol sets");
}

std::vector<Symbol> EnvelopeSpec::allowed(std::size_t i) const {
    if (is_fixed(i))
        return {fixed_symbol(i)};
    std::vector<Symbol> out;
    const std::size_t q = alphabet_size();
    for (std::size_t s = 0; s < q; ++s)
        if (!needs_symbol_check_ || observed_[i].test(s))
            out.push_back(static_cast<Symbol>(s));
    return out;
}

std::uint64_t EnvelopeSpec::cardinality() const {
    std::uint64_t total = 1;
    for (std::size_t i = detectable_.find_first(); i != BitVector::npos; i = detectable_.find_next(i + 1)) {
        const std::uint64_t k = needs_symbol_check_ ? observed_[i].count() : alphabet_size();
        if (total > std::numeric_limits<std::uint64_t>::max() / k)
            return std::numeric_limits<std::uint64_t>::max();
        total *= k;
    }
    return total;
}

double EnvelopeSpec::cardinality_log2() const {
    double bits = 0.0;
    for (std::size_t i = detectable_.find_first(); i != BitVector::npos; i = detectable_.find_next(i + 1))
        bits += std::log2(static_cast<double>(needs_symbol_check_ ? observed_[i].count() : alphabet_size()));
    return bits;
}

bool EnvelopeSpec::contains(const SymbolVector& y) const {
    if (y.size() != length() || y.bits_per_symbol() != bits_per_symbol())
        throw std::invalid_argument("envelope_contains: vector shape does not match the envelope");
    const auto d = detectable_.words();
    for (unsigned b = 0; b < bits_per_symbol(); ++b) {
        const auto yw = y.plane(b).words();
        const auto rw = reference_.plane(b).words();
        for (std::size_t w = 0; w < yw.size(); ++w)
            if (((yw[w] ^ rw[w]) & ~d[w]) != 0)
                return false;
    }
    if (needs_symbol_check_) {
        for (std::size_t i = detectable_.find_first(); i != BitVector::npos; i = detectable_.find_next(i + 1))
            if (!observed_[i].test(y.get(i)))
                return false;
    }
    return true;
}

bool EnvelopeSpec::operator==(const EnvelopeSpec& other) const {
    if (length() != other.length() || bits_per_symbol() != other.bits_per_symbol() ||
        detectable_ != other.detectable_)
        return false;
    for (std::size_t i = 0; i < length(); ++i) {
        if (is_fixed(i)) {
            if (fixed_symbol(i) != other.fixed_symbol(i))
                return false;
        } else if (allowed(i) != other.allowed(i)) {
            return false;
        }
    }
    return true;
}

EnvelopeSpec build_envelope(std::span<const SymbolVector> fingerprints, EnvelopeMode mode) {
    BitVector detectable = detectable_positions(fingerprints);
    const SymbolVector& ref = fingerprints.front();
    std::vector<EnvelopeSpec::SymbolSet> observed;
    if (mode == EnvelopeMode::Narrow && ref.alphabet_size() > 2) {
        observed.resize(ref.size());
        for (const SymbolVector& x : fingerprints)
            for (std::size_t i = 0; i < ref.size(); ++i)
                observed[i].set(x.get(i));
    }
    return EnvelopeSpec(mode, ref, std::move(detectable), std::move(observed));
}

bool envelope_contains(const EnvelopeSpec& env, const SymbolVector& y) { return env.contains(y); }

std::vector<SymbolVector> enumerate_envelope(const EnvelopeSpec& env, std::uint64_t cap) {
    const std::uint64_t card = env.cardinality();
    if (card > cap)
        throw std::length_error("envelope cardinality " +
                                (card == std::numeric_limits<std::uint64_t>::max()
                                     ? "2^" + std::to_string(env.cardinality_log2())
                                     : std::to_string(card)) +
                                " exceeds cap " + std::to_string(cap));

    std::vector<std::size_t> free;
    std::vector<std::vector<Symbol>> choices;
    SymbolVector y(env.length(), env.bits_per_symbol());
    for (std::size_t i = 0; i < env.length(); ++i) {
        if (env.is_fixed(i)) {
            y.set(i, env.fixed_symbol(i));
        } else {
            free.push_back(i);
            choices.push_back(env.allowed(i));
            y.set(i, choices.back().front());
        }
    }

    std::vector<SymbolVector> out;
    out.reserve(card);
    std::vector<std::size_t> digit(free.size(), 0);
    while (true) {
        out.push_back(y);
        // odometer, last coordinate fastest
        std::size_t k = free.size();
        while (k > 0) {
            --k;
            if (++digit[k] < choices[k].size()) {
                y.set(free[k], choices[k][digit[k]]);
                break;
            }
            digit[k] = 0;
            y.set(free[k], choices[k][0]);
            if (k == 0)
                return out;
        }
        if (free.empty())
            return out;
    }
}

SymbolVector sample_envelope(const EnvelopeSpec& env, RandomStream& rng) {
    SymbolVector y(env.length(), env.bits_per_symbol());
    const BitVector& d = env.detectable();
    if (env.mode() == EnvelopeMode::Wide || env.alphabet_size() == 2) {
        // uniform symbols at detectable coordinates are uniform bits in every plane
        const BitVector keep = ~d;
        for (unsigned b = 0; b < env.bits_per_symbol(); ++b) {
            BitVector fixed_part(env.length());
            for (std::size_t i = 0; i < env.length(); ++i)
                if (!d.get(i) && ((env.fixed_symbol(i) >> b) & 1U))
                    fixed_part.set(i);
            y.plane(b) = (fixed_part & keep) | (rng.uniform_bits(env.length()) & d);
        }
        return y;
    }
    for (std::size_t i = 0; i < env.length(); ++i) {
        if (env.is_fixed(i)) {
            y.set(i, env.fixed_symbol(i));
        } else {
            const auto options = env.allowed(i);
            y.set(i, options[rng.uniform_below(options.size())]);
        }
    }
    return y;
}

std::optional<std::size_t> framing_check_assigned(const Codebook& cb, const Coalition& coalition, EnvelopeMode mode) {
    const auto fps = fingerprints_of(cb, coalition);
    const EnvelopeSpec env = build_envelope(fps, mode);
    for (std::size_t u = 0; u < cb.size(); ++u) {
        if (coalition.contains(u))
            continue;
        if (env.contains(cb[u]))
            return u;
    }
    return std::nullopt;
}

std::optional<SymbolVector> framing_check_linear_full(const LinearCodeInstance& code,
                                                      std::span<const SymbolVector> fingerprints, EnvelopeMode mode) {
    if (fingerprints.empty())
        throw std::invalid_argument("framing_check_linear_full needs at least one fingerprint");
    if (!fingerprints.front().is_binary())
        throw std::invalid_argument("framing_check_linear_full supports only the binary alphabet (mode " +
                                    std::string(to_string(mode)) + ", q=" +
                                    std::to_string(fingerprints.front().alphabet_size()) + ")");
    if (fingerprints.front().size() != code.length())
        throw std::invalid_argument("fingerprint length does not match the code");
    // Binary narrow and wide envelopes coincide: an affine constraint set.
    const BitVector detectable = detectable_positions(fingerprints);
    const BitConstraints fixed{~detectable, fingerprints.front().bits()};
    std::vector<BitVector> exclude;
    exclude.reserve(fingerprints.size());
    for (const SymbolVector& x : fingerprints)
        exclude.push_back(x.bits());
    auto sol = gf2_solve_constrained(code.parity_check, fixed, exclude);
    if (!sol.witness)
        return std::nullopt;
    return SymbolVector::binary(std::move(*sol.witness));
}

std::uint64_t index_from_message(std::span<const Symbol> message, std::size_t q) {
    std::uint64_t index = 0;
    for (std::size_t i = message.size(); i-- > 0;) {
        if (message[i] >= q)
            throw std::invalid_argument("message digit out of range");
        index = index * q + message[i];
    }
    return index;
}

std::optional<std::uint64_t> framing_check_concatenated(const ConcatenatedCodeInstance& inst,
                                                        const Coalition& coalition, EnvelopeMode mode,
                                                        std::uint64_t cap) {
    if (coalition.size() == 0)
        throw std::invalid_argument("framing_check_concatenated needs a nonempty coalition");
    const std::uint64_t users = inst.size();
    const std::size_t q = inst.params.alphabet_size();
    const std::size_t n_out = inst.outer_length();
    const std::size_t k = inst.outer.dimension();
    std::vector<SymbolVector> words;
    for (std::size_t u : coalition.members) {
        if (u >= users)
            throw std::invalid_argument("coalition member " + std::to_string(u) + " is not a user (q^K = " +
                                        std::to_string(users) + ")");
        words.push_back(inst.outer.encode(message_from_index(u, q, k)));
    }

    // S_i: symbols whose inner codeword lies in the block envelope
    std::vector<std::vector<Symbol>> allowed(n_out);
    for (std::size_t i = 0; i < n_out; ++i) {
        std::vector<SymbolVector> block;
        for (const SymbolVector& w : words)
            block.push_back(inst.inner[i][w.get(i)]);
        const EnvelopeSpec env = build_envelope(block, mode);
        for (std::size_t a = 0; a < q; ++a)
            if (env.contains(inst.inner[i][a]))
                allowed[i].push_back(static_cast<Symbol>(a));
    }

    std::vector<std::size_t> order(n_out);
    for (std::size_t i = 0; i < n_out; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return allowed[a].size() < allowed[b].size(); });
    const std::vector<std::size_t> pivots(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    double product = 1.0;
    for (std::size_t i : pivots)
        product *= static_cast<double>(allowed[i].size());
    if (product > static_cast<double>(cap))
        throw std::length_error("framing_check_concatenated: " + std::to_string(product) +
                                " candidate codewords exceed the cap of " + std::to_string(cap));

    std::optional<std::uint64_t> best;
    std::vector<std::size_t> digit(k, 0);
    std::vector<Symbol> values(k);
    for (;;) {
        for (std::size_t j = 0; j < k; ++j)
            values[j] = allowed[pivots[j]][digit[j]];
        const SymbolVector c = inst.outer.interpolate(pivots, values);
        bool inside = true;
        for (std::size_t i = 0; i < n_out && inside; ++i)
            inside = std::binary_search(allowed[i].begin(), allowed[i].end(), c.get(i));
        if (inside) {
            const std::uint64_t u = index_from_message(inst.outer.message_of(c), q);
            if (!coalition.contains(u) && (!best || u < *best))
                best = u;
        }
        std::size_t j = 0;
        while (j < k && ++digit[j] == allowed[pivots[j]].size())
            digit[j++] = 0;
        if (j == k)
            break;
    }
    return best;
}

SymbolVector xor_attack(std::span<const SymbolVector> fingerprints) {
    if (fingerprints.empty())
        throw std::invalid_argument("xor_attack needs q + 1 fingerprints, got 0");
    require_same_shape(fingerprints, "xor_attack");
    const std::size_t q = fingerprints.front().alphabet_size();
    if (fingerprints.size() != q + 1)
        throw std::invalid_argument("xor_attack needs exactly q + 1 = " + std::to_string(q + 1) +
                                    " fingerprints, got " + std::to_string(fingerprints.size()));
    for (std::size_t i = 0; i < fingerprints.size(); ++i)
        for (std::size_t j = i + 1; j < fingerprints.size(); ++j)
            if (fingerprints[i] == fingerprints[j])
                throw std::invalid_argument("xor_attack fingerprints must be pairwise distinct");
    SymbolVector y = fingerprints.front();
    for (const SymbolVector& x : fingerprints.subspan(1))
        y += x;
    return y;
}

SymbolVector affine_attack(const SymbolVector& x1, const SymbolVector& x2, Symbol alpha, const FieldTable& field) {
    if (field.size() <= 2)
        throw std::invalid_argument("affine_attack needs q > 2");
    if (alpha == 0 || alpha == 1 || alpha >= field.size())
        throw std::invalid_argument("affine_attack: alpha must be a field element outside {0, 1}");
    if (x1.size() != x2.size() || x1.bits_per_symbol() != field.bits() || x2.bits_per_symbol() != field.bits())
        throw std::invalid_argument("affine_attack: fingerprints must share length and field");
    if (x1 == x2)
        throw std::invalid_argument("affine_attack: fingerprints must differ");
    const Symbol beta = field.sub(1, alpha);
    SymbolVector y(x1.size(), field.bits());
    for (std::size_t i = 0; i < x1.size(); ++i)
        y.set(i, field.add(field.mul(alpha, x1.get(i)), field.mul(beta, x2.get(i))));
    return y;
}

namespace {

bool in_interval(std::size_t count, double n, double center, double gamma) {
    const double c = static_cast<double>(count);
    constexpr double slack = 1e-9;
    return c >= n * (center - gamma) - slack && c <= n * (center + gamma) + slack;
}

} // namespace

bool typicality_t1(std::span<const SymbolVector> fingerprints, double p, double gamma) {
    if (fingerprints.empty())
        throw std::invalid_argument("typicality_t1 needs at least one fingerprint");
    if (!(gamma > 0.0))
        throw std::invalid_argument("typicality gamma must be positive");
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("bias p must lie in [0, 1]");
    require_same_shape(fingerprints, "typicality_t1");
    BitVector ones = fingerprints.front().bits();
    BitVector zeros = ~fingerprints.front().bits();
    for (const SymbolVector& x : fingerprints.subspan(1)) {
        ones &= x.bits();
        zeros &= ~x.bits();
    }
    const double n = static_cast<double>(fingerprints.front().size());
    const auto t = static_cast<double>(fingerprints.size());
    return in_interval(ones.popcount(), n, std::pow(p, t), gamma) &&
           in_interval(zeros.popcount(), n, std::pow(1.0 - p, t), gamma);
}

bool typicality_pairs(const SymbolVector& x1, const SymbolVector& x2, double gamma) {
    if (x1.size() != x2.size())
        throw std::invalid_argument("typicality_pairs: lengths differ");
    const BitVector& a = x1.bits();
    const BitVector& b = x2.bits();
    const std::size_t s11 = (a & b).popcount();
    const std::size_t s10 = (a & ~b).popcount();
    const std::size_t s01 = (~a & b).popcount();
    const std::size_t s00 = a.size() - s11 - s10 - s01;
    const double n = static_cast<double>(a.size());
    for (std::size_t s : {s00, s01, s10, s11})
        if (!in_interval(s, n, 0.25, gamma))
            return false;
    return true;
}

} // namespace rfp
