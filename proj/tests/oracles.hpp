#pragma once
// Independent brute-force oracles. Nothing here calls into the library's
// sweep or classification code.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Index = std::int64_t;

/// (min, max) member count over all windows [a, a+L) inside bits, by direct counting.
inline std::pair<Index, Index> window_extremes(const std::vector<std::uint8_t>& bits, Index L) {
    Index lo = L + 1, hi = -1;
    const auto H = static_cast<Index>(bits.size());
    for (Index a = 0; a + L <= H; ++a) {
        Index c = 0;
        for (Index i = a; i < a + L; ++i) c += bits[static_cast<std::size_t>(i)] ? 1 : 0;
        lo = std::min(lo, c);
        hi = std::max(hi, c);
    }
    return {lo, hi};
}

/// Smallest N such that every window of length N inside bits meets the set.
inline Index max_gap_scan(const std::vector<std::uint8_t>& bits) {
    const auto H = static_cast<Index>(bits.size());
    for (Index N = 1; N <= H; ++N) {
        bool ok = true;
        for (Index a = 0; a + N <= H && ok; ++a) {
            bool hit = false;
            for (Index i = a; i < a + N && !hit; ++i) hit = bits[static_cast<std::size_t>(i)] != 0;
            ok = hit;
        }
        if (ok) return N;
    }
    return H + 1;
}

inline Index floor_log2(Index v) {
    Index r = -1;
    while (v > 0) v >>= 1, ++r;
    return r;
}

/// Agreement scan: n is close at resolution m iff a and b agree on [n, n+m].
template <class CoordX, class CoordY>
std::vector<std::uint8_t> agreement(CoordX x, CoordY y, Index m, Index horizon) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(horizon), 0);
    for (Index n = 0; n < horizon; ++n) {
        bool same = true;
        for (Index i = n; i <= n + m && same; ++i) same = x(i) == y(i);
        out[static_cast<std::size_t>(n)] = same;
    }
    return out;
}

/// True iff every window of length 2^k (k >= 1) that starts with 1 has at most k ones.
inline bool hereditary_window_condition(const std::string& w) {
    const auto n = static_cast<Index>(w.size());
    for (Index s = 0; s < n; ++s) {
        if (w[static_cast<std::size_t>(s)] != '1') continue;
        for (Index k = 1; (Index{1} << k) <= 2 * n + 2; ++k) {
            Index ones = 0;
            for (Index i = s; i < s + (Index{1} << k) && i < n; ++i) ones += w[static_cast<std::size_t>(i)] == '1';
            if (ones > k) return false;
        }
    }
    return true;
}

}  // namespace oracle
