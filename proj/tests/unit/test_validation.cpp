#include "oracles.hpp"

#include "rfp/ensembles.hpp"
#include "rfp/validation.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>
#include <stdexcept>

using namespace rfp;

namespace {

ConcatenatedCodeInstance concat(std::string_view seed, unsigned bits, std::size_t k, double xi,
                                std::optional<std::size_t> m = std::nullopt, std::size_t t = 2) {
    ConcatParams p;
    p.field_bits = bits;
    p.outer_dimension = k;
    p.coalition_size = t;
    p.slack = xi;
    p.inner_length = m;
    return build_concatenated(Key{seed_from_short_hex(seed), p});
}

SymbolVector with_block(const ConcatenatedCodeInstance& inst, SymbolVector y, std::size_t block,
                        const BitVector& pattern) {
    for (std::size_t j = 0; j < inst.inner_length; ++j)
        y.set(block * inst.inner_length + j, pattern.get(j) ? 1 : 0);
    return y;
}

} // namespace

TEST_CASE("validate_lookup") {
    const Codebook cb = sample_bernoulli(Key{seed_from_short_hex("20"), BernoulliParams{24, 50, 0.5, true}});
    CHECK(validate_lookup(cb, cb[0]) == ValidationVerdict{true, VerdictDetail::AcceptedAssigned, std::nullopt});
    const LookupValidator v(cb);
    for (std::size_t i = 0; i < cb.size(); ++i)
        CHECK(v.validate(cb[i]).valid);
    std::size_t checked = 0;
    for (std::size_t bit = 0; bit < 24; ++bit) {
        SymbolVector y = cb[0];
        y.set(bit, y.get(bit) ^ 1);
        if (std::find(cb.fingerprints.begin(), cb.fingerprints.end(), y) != cb.fingerprints.end())
            continue;
        CHECK(v.validate(y).detail == VerdictDetail::RejectedLookup);
        ++checked;
    }
    CHECK(checked > 0);
    CHECK(validate_lookup(Codebook{}, SymbolVector(0)).detail == VerdictDetail::RejectedLookup);
    CHECK_THROWS_AS(v.validate(SymbolVector(23)), std::invalid_argument);
}

TEST_CASE("validate_linear examples") {
    const Key key{seed_from_short_hex("21"), LinearParams{30, 0.4}};
    const auto code = sample_linear(key);
    const Codebook cb = assign_linear_fingerprints(code, 64, key);
    CHECK(validate_linear(code, SymbolVector(30)).detail == VerdictDetail::AcceptedParityCheck);
    CHECK(validate_linear(code, cb[0] + cb[1]).valid);
    for (std::size_t bit = 0; bit < 30; ++bit) {
        bool column_nonzero = false;
        for (std::size_t r = 0; r < code.parity_check.rows(); ++r)
            column_nonzero = column_nonzero || code.parity_check.get(r, bit);
        if (!column_nonzero)
            continue;
        SymbolVector y = cb[2];
        y.set(bit, y.get(bit) ^ 1);
        CHECK(validate_linear(code, y) == ValidationVerdict{false, VerdictDetail::RejectedParityCheck, std::nullopt});
    }
    CHECK_THROWS_AS(validate_linear(code, SymbolVector(29)), std::invalid_argument);
}

TEST_CASE("validate_linear accepts exactly the nullspace") {
    RandomStream rng(seed_from_short_hex("22"));
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + rng.uniform_below(11);
        const auto code = sample_linear(Key{derive_seed(seed_from_short_hex("22"), "test", trial),
                                            LinearParams{n, 0.5}});
        const auto all = oracle::binary_code(oracle::rows(code.parity_check), n);
        const std::set<oracle::Word> members(all.begin(), all.end());
        for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
            const auto w = oracle::word_at(idx, n, 2);
            CHECK(validate_linear(code, oracle::symbols(w, 1)).valid == members.contains(w));
        }
    }
}

TEST_CASE("validate_linear over GF(4)") {
    const Key key{seed_from_short_hex("23"), LinearParams{10, 0.5, 16, 2}};
    const auto code = sample_linear_qary(key);
    const Codebook cb = assign_linear_fingerprints(code, 16, key);
    for (const auto& x : cb.fingerprints)
        CHECK(validate_linear(code, x).valid);
    CHECK(validate_linear(code, scale(code.field, 3, cb[0]) + cb[1]).valid);
    CHECK_THROWS_AS(validate_linear(code, SymbolVector(10)), std::invalid_argument);
}

TEST_CASE("validate_concatenated examples") {
    const auto inst = concat("24", 4, 6, 0.2);
    const std::vector<Symbol> msg{1, 2, 3, 4, 5, 6};
    const SymbolVector y = concat_encode(inst, msg);
    CHECK(validate_concatenated(inst, y) == ValidationVerdict{true, VerdictDetail::AcceptedConcat, std::nullopt});

    BitVector pattern = inst.inner[3][0].bits();
    for (std::size_t j = 0; j < inst.inner_length; ++j) {
        pattern.set(j, !pattern.get(j));
        bool in_book = false;
        for (const auto& row : inst.inner[3].fingerprints)
            in_book = in_book || row.bits() == pattern;
        if (!in_book)
            break;
    }
    const auto v = validate_concatenated(inst, with_block(inst, y, 3, pattern));
    CHECK(v == ValidationVerdict{false, VerdictDetail::RejectedInner, 3});

    // block 3 swapped for another valid inner codeword
    const auto current = y.bits().slice(3 * inst.inner_length, inst.inner_length);
    for (const auto& row : inst.inner[3].fingerprints) {
        if (row.bits() == current)
            continue;
        CHECK(validate_concatenated(inst, with_block(inst, y, 3, row.bits())).detail == VerdictDetail::RejectedOuter);
    }
    CHECK_THROWS_AS(validate_concatenated(inst, SymbolVector(inst.length() - 1)), std::invalid_argument);
}

TEST_CASE("validate_concatenated accepts exactly the encoded words") {
    for (std::size_t k : {1, 2}) {
        // t = 1 keeps K = 2 inside the distance condition for N = 3
        const auto inst = concat(k == 1 ? "25" : "26", 2, k, 0.5, 6, 1);
        std::set<std::string> encoded;
        const Codebook cb = enumerate_concatenated(inst);
        CHECK(cb.size() == oracle::power(4, k));
        for (const auto& x : cb.fingerprints)
            encoded.insert(x.to_string());
        CHECK(encoded.size() == cb.size());
        // every word whose blocks are inner codewords: 4^3 choices
        std::size_t accepted = 0;
        for (std::uint64_t idx = 0; idx < 64; ++idx) {
            const auto digits = oracle::word_at(idx, 3, 4);
            SymbolVector y(inst.length());
            for (std::size_t i = 0; i < 3; ++i)
                y = with_block(inst, y, i, inst.inner[i][static_cast<std::size_t>(digits[i])].bits());
            const auto v = validate_concatenated(inst, y);
            CHECK(v.valid == encoded.contains(y.to_string()));
            if (!v.valid)
                CHECK(v.detail == VerdictDetail::RejectedOuter);
            accepted += v.valid;
        }
        CHECK(accepted == cb.size());
    }
}

TEST_CASE("decode_inner_blocks recovers the outer word") {
    const auto inst = concat("27", 3, 2, 0.5);
    const std::vector<Symbol> msg{5, 2};
    const auto outer = decode_inner_blocks(inst, concat_encode(inst, msg));
    REQUIRE(outer.has_value());
    CHECK(*outer == inst.outer.encode(msg));
}
