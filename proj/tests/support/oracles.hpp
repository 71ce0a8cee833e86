#pragma once

// Brute-force reference implementations for tests. They work on plain
// integer vectors and share no code with the library.

#include "rfp/gf2.hpp"
#include "rfp/symbol_vector.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

namespace oracle {

using Word = std::vector<int>;

inline Word ints(const rfp::SymbolVector& v) {
    Word out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v.get(i);
    return out;
}

inline Word ints(const rfp::BitVector& v) {
    Word out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out[i] = v.get(i) ? 1 : 0;
    return out;
}

inline rfp::SymbolVector symbols(const Word& w, unsigned bits) {
    rfp::SymbolVector v(w.size(), bits);
    for (std::size_t i = 0; i < w.size(); ++i)
        v.set(i, static_cast<rfp::Symbol>(w[i]));
    return v;
}

inline std::vector<Word> rows(const rfp::BitMatrix& m) {
    std::vector<Word> out;
    for (std::size_t r = 0; r < m.rows(); ++r)
        out.push_back(ints(m.row(r)));
    return out;
}

// Word with digits of `index` in base q, coordinate 0 most significant.
inline Word word_at(std::uint64_t index, std::size_t n, int q) {
    Word w(n);
    for (std::size_t i = n; i-- > 0;) {
        w[i] = static_cast<int>(index % q);
        index /= q;
    }
    return w;
}

inline std::uint64_t power(std::uint64_t base, std::size_t e) {
    std::uint64_t r = 1;
    while (e--)
        r *= base;
    return r;
}

// Every y in {0,1}^n with H y = 0 (mod 2), in counting order.
inline std::vector<Word> binary_code(const std::vector<Word>& h, std::size_t n) {
    std::vector<Word> out;
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
        const Word y = word_at(idx, n, 2);
        bool ok = true;
        for (const Word& row : h) {
            int s = 0;
            for (std::size_t j = 0; j < n; ++j)
                s ^= row[j] & y[j];
            ok = ok && s == 0;
        }
        if (ok)
            out.push_back(y);
    }
    return out;
}

// Textbook elimination on a copy.
inline std::size_t rank2(std::vector<Word> m, std::size_t cols) {
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        std::size_t p = r;
        while (p < m.size() && m[p][c] == 0)
            ++p;
        if (p == m.size())
            continue;
        std::swap(m[p], m[r]);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (i != r && m[i][c])
                for (std::size_t k = 0; k < cols; ++k)
                    m[i][k] ^= m[r][k];
        ++r;
    }
    return r;
}

// Envelope membership straight from the definition.
inline bool in_envelope(const std::vector<Word>& fps, const Word& y, bool wide) {
    for (std::size_t i = 0; i < y.size(); ++i) {
        bool agree = true, seen = false;
        for (const Word& x : fps) {
            agree = agree && x[i] == fps[0][i];
            seen = seen || x[i] == y[i];
        }
        if (agree && y[i] != fps[0][i])
            return false;
        if (!agree && !wide && !seen)
            return false;
    }
    return true;
}

// All members of the envelope, by scanning the whole space.
inline std::set<Word> envelope(const std::vector<Word>& fps, int q, bool wide) {
    std::set<Word> out;
    const std::size_t n = fps[0].size();
    for (std::uint64_t idx = 0; idx < power(q, n); ++idx) {
        const Word y = word_at(idx, n, q);
        if (in_envelope(fps, y, wide))
            out.insert(y);
    }
    return out;
}

inline bool support_subset(const Word& a, const Word& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] == 0)
            return false;
    return true;
}

inline bool is_zero(const Word& a) {
    for (int x : a)
        if (x)
            return false;
    return true;
}

// Binary minimality: no other nonzero codeword has support inside supp(c).
inline bool minimal2(const std::vector<Word>& code, const Word& c) {
    for (const Word& d : code)
        if (!is_zero(d) && d != c && support_subset(d, c))
            return false;
    return true;
}

// Shift-and-add multiplication modulo the field polynomial.
inline int gf_mul(int a, int b, int poly, int bits) {
    int r = 0;
    while (b) {
        if (b & 1)
            r ^= a;
        b >>= 1;
        a <<= 1;
        if (a & (1 << bits))
            a ^= poly;
    }
    return r;
}

inline int gf_pow(int a, std::size_t e, int poly, int bits) {
    int r = 1;
    while (e--)
        r = gf_mul(r, a, poly, bits);
    return r;
}

// Evaluation-form RS codeword: f(alpha^j), j = 0..q-2, alpha = 2.
inline Word rs_encode(const Word& msg, int poly, int bits) {
    const int q = 1 << bits;
    Word out(q - 1);
    for (int j = 0; j < q - 1; ++j) {
        const int x = gf_pow(2, j, poly, bits);
        int acc = 0;
        for (std::size_t i = 0; i < msg.size(); ++i)
            acc ^= gf_mul(msg[i], gf_pow(x, i, poly, bits), poly, bits);
        out[j] = acc;
    }
    return out;
}

inline double rate(double p, int t) {
    double r = 0.0;
    if (p > 0.0)
        r -= std::pow(p, t) * std::log2(p);
    if (p < 1.0)
        r -= std::pow(1.0 - p, t) * std::log2(1.0 - p);
    return r;
}

// D(a || b) as a two-term sum written out by hand.
inline double divergence(double a, double b) {
    double d = 0.0;
    if (a > 0.0)
        d += a * (std::log(a) - std::log(b)) / std::log(2.0);
    if (a < 1.0)
        d += (1.0 - a) * (std::log(1.0 - a) - std::log(1.0 - b)) / std::log(2.0);
    return d;
}

} // namespace oracle
