#include <doctest.h>

#include <functional>
#include <random>
#include <set>

#include "bpx/error.hpp"
#include "bpx/setlang.hpp"
#include "bpx/shiftspace.hpp"
#include "oracles.hpp"

using namespace bpx;

namespace {

SymbolSeq geo_support() { return SymbolSeq::parse("|supp:GEO(2,1)"); }

bool is_power_of_two(Index v) { return v > 0 && (v & (v - 1)) == 0; }

std::vector<std::string> all_words(int len) {
    std::vector<std::string> out;
    for (std::uint32_t v = 0; v < (1u << len); ++v) {
        std::string w(static_cast<std::size_t>(len), '0');
        for (int i = 0; i < len; ++i) w[i] = (v >> (len - 1 - i)) & 1u ? '1' : '0';
        out.push_back(w);
    }
    return out;
}

/// A word occurs in the forbidden-word shift iff it has a clean continuation
/// long enough to revisit some state of the last-m-symbols graph.
bool forbidden_oracle(const std::vector<std::string>& forbidden, const std::string& w) {
    std::size_t m = 0;
    for (const auto& f : forbidden) m = std::max(m, f.size());
    const std::size_t extra = (std::size_t{1} << m) + m + 1;
    auto clean = [&](const std::string& s) {
        for (const auto& f : forbidden)
            if (s.find(f) != std::string::npos) return false;
        return true;
    };
    std::function<bool(const std::string&)> go = [&](const std::string& s) {
        if (!clean(s)) return false;
        if (s.size() >= w.size() + extra) return true;
        return go(s + '0') || go(s + '1');
    };
    return go(w);
}

}  // namespace

TEST_CASE("coordinates of the three tail kinds") {
    CHECK(coord(SymbolSeq::zero(), 1000000) == 0);
    CHECK(coord(SymbolSeq::periodic("", "01"), 7) == 1);
    CHECK(coord(geo_support(), 8) == 1);
    CHECK(coord(geo_support(), 9) == 0);
    CHECK(coord(SymbolSeq::parse("1101|per:0"), 3) == 1);
    CHECK_THROWS_AS(SymbolSeq::parse("12|zero"), ArgumentError);
    CHECK_THROWS_AS(SymbolSeq::parse("0|per:"), ArgumentError);
    CHECK_THROWS_AS(SymbolSeq::parse("0"), ArgumentError);
}

TEST_CASE("text form round trip") {
    for (const char* t : {"|zero", "0110|zero", "1|per:01", "|supp:GEO(2,1)", "11|supp:AP(0,3) | FIN{1}"}) {
        CHECK(SymbolSeq::parse(t).to_string() == t);
    }
}

TEST_CASE("shift re-bases every tail rule exactly") {
    const auto z = seq_shift(SymbolSeq::zero(), 1);
    CHECK(z.to_string() == "|zero");
    const auto p = seq_shift(SymbolSeq::periodic("", "10"), 1);
    CHECK(p.to_string() == "|per:01");

    const auto g = seq_shift(geo_support(), 3);
    for (Index i = 0; i < 5000; ++i) CHECK(coord(g, i) == (is_power_of_two(i + 3) ? 1 : 0));

    // Shift compatibility against coordinate access, for mixed prefixes and tails.
    const std::vector<SymbolSeq> pool{SymbolSeq::parse("10110|per:011"), SymbolSeq::parse("111|supp:AP(1,4)"),
                                      SymbolSeq::parse("0101|zero"), geo_support()};
    for (const auto& x : pool)
        for (Index n : {0, 1, 2, 4, 5, 9, 40}) {
            const auto s = seq_shift(x, n);
            for (Index i = 0; i < 300; ++i) REQUIRE(coord(s, i) == coord(x, i + n));
        }
}

TEST_CASE("distance takes values 0 and 2^-k") {
    const auto x = SymbolSeq::parse("0000|zero");
    CHECK(seq_dist(x, x, 20) == 0.0);
    CHECK(seq_dist(x, SymbolSeq::parse("1|zero"), 20) == 1.0);
    CHECK(seq_dist(x, SymbolSeq::parse("0001|zero"), 20) == 0.125);
    CHECK(seq_dist(x, SymbolSeq::parse("0001|zero"), 2) == 0.0);
    CHECK(decide_equal(SymbolSeq::parse("01|per:01"), SymbolSeq::parse("|per:0101")) == true);
    CHECK(decide_equal(SymbolSeq::parse("|per:01"), SymbolSeq::parse("|per:10")) == false);
}

TEST_CASE("ultrametric inequality and shift compatibility on random points") {
    std::mt19937_64 rng(3);
    auto random_point = [&]() {
        std::string prefix;
        for (int i = 0; i < 12; ++i) prefix += (rng() % 5 == 0) ? '1' : '0';
        return SymbolSeq::periodic(prefix, (rng() & 1) ? "0" : "01");
    };
    for (int t = 0; t < 300; ++t) {
        const auto x = random_point(), y = random_point(), z = random_point();
        for (Index m : {0, 3, 8, 20}) {
            CHECK(seq_dist(x, z, m) <= std::max(seq_dist(x, y, m), seq_dist(y, z, m)));
            for (Index n : {0, 2, 7}) {
                const bool close = seq_dist(seq_shift(x, n), seq_shift(y, n), m) < std::ldexp(1.0, -static_cast<int>(m));
                bool agree = true;
                for (Index i = n; i <= n + m; ++i) agree = agree && coord(x, i) == coord(y, i);
                CHECK(close == agree);
            }
        }
    }
}

TEST_CASE("spacing membership with witnesses") {
    const auto evens = SubshiftSpec::parse("spacing:AP(2,2)");
    auto yes = member(evens, SymbolSeq::ones_at({0, 2, 6}), 64);
    CHECK(yes.status == Membership::Status::yes);
    CHECK(yes.certified);
    auto no = member(evens, SymbolSeq::ones_at({0, 3}), 64);
    CHECK(no.status == Membership::Status::no);
    CHECK(no.witness == std::pair<Index, Index>{0, 3});

    // Eventually periodic point against an eventually periodic P is decided outright.
    auto periodic = member(evens, SymbolSeq::periodic("", "10"), 64);
    CHECK(periodic.status == Membership::Status::yes);
    CHECK(periodic.certified);
    auto late = member(evens, SymbolSeq::periodic("1", "000000001"), 4);
    CHECK(late.status == Membership::Status::no);

    // A rule-based tail without a finite certificate stays unknown.
    auto unknown = member(SubshiftSpec::parse("spacing:~FIN{0}"), geo_support(), 256);
    CHECK(unknown.status == Membership::Status::unknown);

    CHECK_THROWS_AS(SubshiftSpec::parse("spacing:AP(0,2)"), ArgumentError);
}

TEST_CASE("hereditary mixing membership") {
    const auto spec = SubshiftSpec::hereditary_mixing();
    auto bad = member(spec, SymbolSeq::parse("1110|zero"), 64);
    REQUIRE(bad.status == Membership::Status::no);
    CHECK(bad.witness.second <= 4);
    CHECK(member(spec, SymbolSeq::zero(), 64).certified);
    CHECK(member(spec, SymbolSeq::parse("1|per:0"), 64).status == Membership::Status::yes);
    // Positive density eventually breaks the bound.
    CHECK(member(spec, SymbolSeq::periodic("", "1000"), 1024).status == Membership::Status::no);
    CHECK(member(spec, geo_support(), 1024).status == Membership::Status::no);
    CHECK(member(spec, SymbolSeq::parse("|supp:GEO(4,1) + 1000"), 1 << 14).status == Membership::Status::unknown);
}

TEST_CASE("languages of the built-in shifts at length two") {
    auto flat = [](const std::vector<std::vector<std::string>>& lang) {
        std::set<std::string> s;
        for (const auto& level : lang) s.insert(level.begin(), level.end());
        return s;
    };
    CHECK(flat(language(SubshiftSpec::full(), 2)) == std::set<std::string>{"0", "1", "00", "01", "10", "11"});
    CHECK(flat(language(SubshiftSpec::parse("spacing:FIN{}"), 2)) == std::set<std::string>{"0", "1", "00", "01", "10"});
    CHECK(flat(language(SubshiftSpec::hereditary_mixing(), 2)) == std::set<std::string>{"0", "1", "00", "01", "10"});
    CHECK_THROWS_AS(language(SubshiftSpec::full(), 25), ResourceLimit);
}

TEST_CASE("hereditary mixing language matches brute-force enumeration") {
    const auto lang = language(SubshiftSpec::hereditary_mixing(), 12);
    for (int len = 1; len <= 12; ++len) {
        std::vector<std::string> expected;
        for (const auto& w : all_words(len))
            if (oracle::hereditary_window_condition(w)) expected.push_back(w);
        CHECK(lang[len - 1] == expected);
    }
}

TEST_CASE("forbidden-word language matches brute-force continuation search") {
    for (const std::vector<std::string>& fw :
         {std::vector<std::string>{"00"}, {"11", "101"}, {"010", "0110"}, {"1", "00"}, {"111", "000", "0101"}}) {
        const auto spec = SubshiftSpec::forbidden(fw);
        const auto lang = language(spec, 9);
        for (int len = 1; len <= 9; ++len) {
            std::vector<std::string> expected;
            for (const auto& w : all_words(len))
                if (forbidden_oracle(fw, w)) expected.push_back(w);
            CHECK(lang[len - 1] == expected);
        }
    }
}

TEST_CASE("language is prefix closed and hereditary specs are closed under masking") {
    const std::vector<SubshiftSpec> specs{SubshiftSpec::hereditary_mixing(), SubshiftSpec::parse("spacing:AP(3,3)"),
                                          SubshiftSpec::parse("spacing:THICK(2^n, n)"),
                                          SubshiftSpec::forbidden({"11", "1001"})};
    std::mt19937_64 rng(11);
    for (const auto& spec : specs) {
        const auto lang = language(spec, 10);
        for (int len = 2; len <= 10; ++len)
            for (const auto& w : lang[len - 1]) {
                REQUIRE(std::binary_search(lang[len - 2].begin(), lang[len - 2].end(), w.substr(0, len - 1)));
                if (spec.hereditary()) {
                    std::string masked = w;
                    for (auto& c : masked)
                        if (c == '1' && (rng() & 1)) c = '0';
                    REQUIRE(std::binary_search(lang[len - 1].begin(), lang[len - 1].end(), masked));
                }
            }
    }
}

TEST_CASE("generated points are admissible") {
    const auto evens = SubshiftSpec::parse("spacing:AP(2,2)");
    const auto g = generate_point(evens, Strategy::greedy_max_ones, 40);
    for (Index i = 0; i < 40; ++i) CHECK(coord(g, i) == (i % 2 == 0 ? 1 : 0));

    const auto hm = SubshiftSpec::hereditary_mixing();
    const auto x = generate_point(hm, Strategy::greedy_max_ones, 64);
    CHECK(oracle::hereditary_window_condition(x.prefix()));
    CHECK(x.prefix().find('1') != std::string::npos);
    CHECK(member(hm, x, 64).status == Membership::Status::yes);

    for (const auto& spec : {evens, hm, SubshiftSpec::parse("spacing:THICK(2^n, n)"), SubshiftSpec::full()}) {
        for (auto strat : {Strategy::greedy_max_ones, Strategy::random, Strategy::zero}) {
            const auto p = generate_point(spec, strat, 200, 5);
            CHECK(member(spec, p, 256).status == Membership::Status::yes);
            if (strat == Strategy::zero) CHECK(p.prefix() == std::string(200, '0'));
        }
    }

    const auto fw = SubshiftSpec::forbidden({"00", "111"});
    for (auto strat : {Strategy::greedy_max_ones, Strategy::random}) {
        const auto p = generate_point(fw, strat, 50, 9);
        CHECK(member(fw, p, 128).status == Membership::Status::yes);
    }
    CHECK_THROWS_AS(generate_point(fw, Strategy::zero, 5), ExtensionFailure);
    try {
        generate_point(SubshiftSpec::forbidden({"0", "1"}), Strategy::greedy_max_ones, 3);
        FAIL("empty shift must not extend");
    } catch (const ExtensionFailure& e) {
        CHECK(e.prefix().empty());
    }
}

TEST_CASE("membership is shift stable") {
    const std::vector<SubshiftSpec> specs{SubshiftSpec::hereditary_mixing(), SubshiftSpec::parse("spacing:AP(2,2)"),
                                          SubshiftSpec::parse("spacing:THICK(2^n, n)")};
    for (const auto& spec : specs)
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto x = generate_point(spec, Strategy::random, 120, seed);
            for (Index n : {1, 3, 17, 64}) CHECK(member(spec, seq_shift(x, n), 128).status == Membership::Status::yes);
        }
}

TEST_CASE("weak mixing of spacing shifts follows thickness") {
    CHECK(is_weakly_mixing_spacing(parse_set("THICK(2^n, n)"), 1 << 14).status == SetVerdict::Status::certified);
    CHECK(is_weakly_mixing_spacing(parse_set("AP(2,2)"), 1 << 14).status == SetVerdict::Status::refuted);
    CHECK(is_weakly_mixing_spacing(parse_set("FIN{1,5,9}"), 1 << 14).status == SetVerdict::Status::refuted);
}

TEST_CASE("Q_n family splits the blocks of P") {
    const auto P = parse_set("THICK(2^n, n)");
    const auto f0 = build_Qn_family(P, 0);
    CHECK(f0.q_thick.status == SetVerdict::Status::certified);
    CHECK(f0.complement_thick.status == SetVerdict::Status::certified);
    // Q holds blocks [2^m, 2^m + m] for odd m only.
    for (Index v = 1; v < 5000; ++v) {
        bool in_odd_block = false;
        for (Index m = 1; (Index{1} << m) <= v; m += 2) in_odd_block |= v <= (Index{1} << m) + m && v >= (Index{1} << m);
        REQUIRE(f0.Q.contains(v) == in_odd_block);
        if (f0.Q.contains(v)) REQUIRE(P.contains(v));
    }

    const auto f4 = build_Qn_family(P, 4);
    for (Index v = 0; v < 5000; ++v) {
        const bool expected = f0.Q.contains(v) || (v <= 4 && P.contains(v));
        REQUIRE(f4.Qn.contains(v) == expected);
    }
    CHECK(f4.Qn.contains(1));
    CHECK(f4.Qn.contains(4));
    CHECK(!f4.Qn.contains(0));
    for (Index n : {0, 4, 50, 1000}) {
        const auto f = build_Qn_family(P, n);
        CHECK(f.qn_thick.status == SetVerdict::Status::certified);
        CHECK(is_weakly_mixing_spacing(f.Qn, 1 << 14).status == SetVerdict::Status::certified);
    }
    CHECK_THROWS_AS(build_Qn_family(parse_set("AP(1,2)"), 0), ArgumentError);
}

TEST_CASE("hereditary closure check") {
    const auto evens = SubshiftSpec::parse("spacing:AP(2,2)");
    const auto x = generate_point(evens, Strategy::greedy_max_ones, 100);
    CHECK(hereditary_closed_check(evens, x, 50, 1, 128).pass);
    const auto hm = SubshiftSpec::hereditary_mixing();
    CHECK(hereditary_closed_check(hm, generate_point(hm, Strategy::greedy_max_ones, 100), 50, 2, 128).pass);

    const auto fw = SubshiftSpec::forbidden({"00"});
    const auto alt = SymbolSeq::periodic("", "01");
    REQUIRE(member(fw, alt, 64).status == Membership::Status::yes);
    const auto r = hereditary_closed_check(fw, alt, 10, 3, 64);
    CHECK(!r.pass);
    REQUIRE(r.violator);
    CHECK(r.violator->prefix().find('1') == std::string::npos);
}
