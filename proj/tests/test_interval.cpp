#include <doctest.h>

#include <random>

#include "bpx/error.hpp"
#include "bpx/interval.hpp"

using namespace bpx;
using boost::multiprecision::cpp_int;

namespace {

/// Tent(2) itinerary of N / 2^K by integer arithmetic on the numerator.
std::string dyadic_itinerary(cpp_int N, unsigned K, Index n) {
    const cpp_int one = cpp_int(1) << K, half = cpp_int(1) << (K - 1);
    std::string w;
    for (Index i = 0; i < n; ++i) {
        w += N >= half ? '1' : '0';
        N = N < half ? cpp_int(2 * N) : cpp_int(2 * (one - N));
    }
    return w;
}

/// Tent(2) itinerary of p / q by integer arithmetic (q fixed along the orbit).
std::string fraction_itinerary(Index p, Index q, Index n) {
    std::string w;
    for (Index i = 0; i < n; ++i) {
        w += 2 * p >= q ? '1' : '0';
        p = 2 * p < q ? 2 * p : 2 * (q - p);
    }
    return w;
}

std::string random_word(std::mt19937_64& rng, int len) {
    std::string w;
    for (int i = 0; i < len; ++i) w += (rng() & 1) ? '1' : '0';
    return w;
}

}  // namespace

TEST_CASE("interval maps: construction and parsing") {
    CHECK_THROWS_AS(IntervalMap::tent(0), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::tent(2.5), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::logistic(4.1), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::piecewise_linear({{0, 0}, {0.5, 1.2}, {1, 0}}), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::piecewise_linear({{0.1, 0}, {1, 0}}), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::piecewise_linear({{0, 0}, {0.5, 1}, {0.5, 0}, {1, 1}}), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::parse("cubic:2"), ArgumentError);
    CHECK_THROWS_AS(IntervalMap::parse("tent:two"), ArgumentError);
    for (const std::string s : {"tent:2", "tent:1.5", "logistic:3.9", "pl:0,0;1,0.5", "pl:0,1;0.25,0;1,1"})
        CHECK(IntervalMap::parse(s).to_string() == s);
    const auto half = IntervalMap::parse("pl:0,0;1,0.5");
    CHECK(half(Rational(3, 7)) == Rational(3, 14));
    CHECK(half(0.75) == 0.375);
    CHECK_THROWS_AS(IntervalMap::logistic(4)(Rational(1, 3)), WrongVariant);
}

TEST_CASE("orbits") {
    const auto tent = IntervalMap::tent(2);
    for (double v : orbit(tent, 0.0, 50)) CHECK(v == 0.0);
    const auto fixed = orbit(tent, Rational(2, 3), 100);
    CHECK(fixed.size() == 101);
    for (const auto& v : fixed) CHECK(v == Rational(2, 3));
    const auto lg = orbit(IntervalMap::logistic(4), 0.5, 5);
    CHECK(lg[1] == 1.0);
    for (std::size_t i = 2; i < lg.size(); ++i) CHECK(lg[i] == 0.0);
    CHECK_THROWS_AS(orbit(tent, 1.5, 3), ArgumentError);
    CHECK_THROWS_AS(orbit(tent, Rational(-1, 3), 3), ArgumentError);
}

TEST_CASE("itineraries") {
    const auto tent = IntervalMap::tent(2);
    CHECK(itinerary(tent, Rational(2, 3), 30).word == std::string(30, '1'));
    CHECK(itinerary(tent, 0.0, 30).word == std::string(30, '0'));
    const auto pt3 = itinerary(tent, Rational(3, 10), 40);
    CHECK(pt3.word.substr(0, 4) == "0110");
    CHECK(pt3.word == fraction_itinerary(3, 10, 40));
    CHECK(itinerary(tent, 0.3, 4).word == "0110");

    // 1/4 -> 1/2 -> 1 -> 0: the tie at 1/2 is coded as 1 and flagged.
    const auto tie = itinerary(tent, Rational(1, 4), 5);
    CHECK(tie.word == "01100");
    CHECK(tie.ties == std::vector<Index>{1});

    // Semiconjugacy on non-dyadic rationals, exactly.
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        const Index q = 2 * static_cast<Index>(rng() % 5000) + 3;
        const Index p = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(q - 1));
        const Rational x(p, q);
        const auto a = itinerary(tent, x, 200);
        const auto b = itinerary(tent, tent(x), 199);
        CHECK(a.ties.empty());
        CHECK(a.word.substr(1) == b.word);
        CHECK(a.word == fraction_itinerary(p, q, 200));
    }
}

TEST_CASE("inverse-branch encoding") {
    const auto one = encode_point("1");
    CHECK(one.lo == Rational(1, 2));
    CHECK(one.hi == 1);
    const auto ten = encode_point("10");
    CHECK(ten.lo == Rational(3, 4));
    CHECK(ten.hi == 1);
    CHECK_THROWS_AS(encode_point(""), ArgumentError);
    CHECK_THROWS_AS(encode_point("102"), ArgumentError);

    // Grid oracle: interior grid points carry the word, exterior ones do not.
    for (const std::string w : {"0", "1", "01", "110", "1001", "00111", "101101"}) {
        const auto c = encode_point(w);
        CHECK(c.hi - c.lo == Rational(1, cpp_int(1) << w.size()));
        const unsigned K = static_cast<unsigned>(w.size()) + 4;
        for (cpp_int N = 0; N <= (cpp_int(1) << K); ++N) {
            const Rational x(N, cpp_int(1) << K);
            const bool carries = dyadic_itinerary(N, K, static_cast<Index>(w.size())) == w;
            if (x > c.lo && x < c.hi) CHECK(carries);
            if (x < c.lo || x > c.hi) CHECK(!carries);
        }
    }

    std::mt19937_64 rng(19);
    const auto tent = IntervalMap::tent(2);
    for (int len : {20, 40}) {
        for (int t = 0; t < 50; ++t) {
            const auto w = random_word(rng, len);
            const auto c = encode_point(w, 0);
            CHECK(itinerary(tent, c.point, len).word == w);
            CHECK(itinerary(tent, c.point.convert_to<double>(), len).word == w);
            const auto d = encode_point(w, 3);
            CHECK(itinerary(tent, d.point, len + 3).word == w + "000");
        }
    }
}

TEST_CASE("scrambled candidates") {
    CHECK_THROWS_AS(cantor_scrambled_candidates(1, 0), ArgumentError);
    CHECK_THROWS_AS(cantor_scrambled_candidates(8, 0, 4), ArgumentError);

    const auto two = cantor_scrambled_candidates(2, 5);
    REQUIRE(two.points.size() == 2);
    for (Index n = 0; n < two.prefix_length; ++n)
        if (coord(two.sources[0], n) != coord(two.sources[1], n)) CHECK((n > 0 && (n & (n - 1)) == 0));
    PairParams pp;
    pp.lambda = 0.95;
    const auto prof = classify_pair(two.sources[0], two.sources[1], pp);
    for (const auto& cert : prof.certificates) {
        REQUIRE(cert);
        CHECK(cert->status == BdOneVerdict::Status::certified_one);
    }

    // The real points reproduce their symbolic sources and separate by >= 1/4 recurrently.
    const auto c = cantor_scrambled_candidates(5, 7, 2048 + 64);
    const auto tent = IntervalMap::tent(2);
    const unsigned K = static_cast<unsigned>(c.prefix_length) + 2;
    std::vector<std::string> codes;
    for (std::size_t k = 0; k < c.points.size(); ++k) {
        const auto& p = c.points[k];
        REQUIRE(denominator(p) == (cpp_int(1) << K));
        codes.push_back(dyadic_itinerary(numerator(p), K, c.prefix_length));
        for (Index n = 0; n < c.prefix_length; ++n) REQUIRE((codes.back()[n] == '1') == (coord(c.sources[k], n) == 1));
    }
    for (std::size_t a = 0; a < c.points.size(); ++a)
        for (std::size_t b = a + 1; b < c.points.size(); ++b) {
            const auto oa = orbit(tent, c.points[a], 2047), ob = orbit(tent, c.points[b], 2047);
            Index far = 0;
            for (Index n = 0; n < 2048; ++n) {
                const bool separated = abs(oa[n] - ob[n]) >= Rational(1, 4);
                far += separated;
                // A disagreement at coordinate 0 followed by a shared 0 splits the pair across [1/4, 3/4].
                if (n >= 2 && codes[a][n] != codes[b][n]) CHECK(separated);
            }
            CHECK(far >= 2);
        }
}

TEST_CASE("interval scrambled verification") {
    const auto tent = IntervalMap::tent(2);
    const auto same = verify_scrambled_interval({Rational(1, 3), Rational(1, 3)}, tent);
    CHECK(same.entries[0].banach == Verdict::certified);
    CHECK(!same.scrambled);

    const auto apart = verify_scrambled_interval({Rational(0), Rational(2, 3)}, tent);
    CHECK(apart.entries[0].banach == Verdict::empirical_fail);
    CHECK(apart.entries[0].reason.find("not Banach proximal") == 0);

    const auto cand = cantor_scrambled_candidates(8, 3);
    const auto m = verify_scrambled_interval(cand.points, tent);
    CHECK(m.entries.size() == 28);
    CHECK(m.qualifying == 28);
    PairParams pp;
    pp.lambda = 0.95;
    const auto sym = scrambled_matrix(cand.sources, pp);
    for (std::size_t k = 0; k < m.entries.size(); ++k) CHECK(m.entries[k].qualifies == sym.entries[k].qualifies);

    // The generic rational path agrees with the integer fast path on a short horizon.
    IntervalPairParams shortp;
    shortp.horizon = 1 << 9;
    shortp.lambda = 0.85;
    const auto few = cantor_scrambled_candidates(3, 3, 600).points;
    const auto fast = verify_scrambled_interval(few, tent, shortp);
    const auto slow = verify_scrambled_interval(few, IntervalMap::parse("pl:0,0;0.5,1;1,0"), shortp);
    for (std::size_t k = 0; k < fast.entries.size(); ++k) {
        CHECK(fast.entries[k].banach == slow.entries[k].banach);
        CHECK(fast.entries[k].asymptotic == slow.entries[k].asymptotic);
        CHECK(fast.entries[k].reason == slow.entries[k].reason);
    }

    IntervalPairParams big;
    big.horizon = kFloatHorizonCap * 2;
    CHECK_THROWS_AS(verify_scrambled_interval({Rational(1, 5), Rational(2, 5)}, IntervalMap::logistic(4), big),
                    HorizonError);
    IntervalPairParams capped;
    capped.horizon = kFloatHorizonCap;
    const auto lg = verify_scrambled_interval({Rational(1, 5), Rational(1, 5) + Rational(1, 1 << 20)},
                                              IntervalMap::logistic(4), capped);
    CHECK(lg.entries.size() == 1);
    CHECK_THROWS_AS(verify_scrambled_interval({Rational(3, 2), Rational(0)}, tent), ArgumentError);
}

TEST_CASE("diameters of iterated images") {
    const auto half = diam_iterates(IntervalMap::parse("pl:0,0;1,0.5"), 40);
    REQUIRE(half.diam.size() == 41);
    for (std::size_t k = 0; k < half.diam.size(); ++k) {
        CHECK(half.diam[k] == std::ldexp(1.0, -static_cast<int>(k)));
        CHECK(half.image[k].first == 0.0);
    }
    CHECK(half.exact);
    CHECK(half.uniformly_proximal);

    const auto tent = diam_iterates(IntervalMap::tent(2), 40);
    for (double d : tent.diam) CHECK(d == 1.0);
    CHECK(!tent.uniformly_proximal);
    const auto id = diam_iterates(IntervalMap::parse("pl:0,0;1,1"), 10);
    for (double d : id.diam) CHECK(d == 1.0);
    CHECK(!id.uniformly_proximal);

    // Non-increasing for random piecewise-linear maps and a few logistic maps.
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 30; ++t) {
        std::vector<std::pair<double, double>> pts{{0, u(rng)}};
        for (int k = 1; k < 5; ++k) pts.emplace_back(k / 5.0, u(rng));
        pts.emplace_back(1, u(rng));
        const auto r = diam_iterates(IntervalMap::piecewise_linear(pts), 12);
        for (std::size_t k = 1; k < r.diam.size(); ++k) CHECK(r.diam[k] <= r.diam[k - 1]);
    }
    for (double r : {0.5, 2.8, 3.5, 4.0}) {
        const auto d = diam_iterates(IntervalMap::logistic(r), 20);
        CHECK(!d.exact);
        for (std::size_t k = 1; k < d.diam.size(); ++k) CHECK(d.diam[k] <= d.diam[k - 1] + 1e-15);
    }
    CHECK(diam_iterates(IntervalMap::logistic(0.5), 60).uniformly_proximal);
}
