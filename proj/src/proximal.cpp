#include "bpx/proximal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "bpx/error.hpp"

namespace bpx {

namespace {

constexpr Index kMaxExactPeriod = Index{1} << 20;

std::vector<Index> diff_prefix(const SymbolSeq& x, const SymbolSeq& y, Index length) {
    const auto bx = x.bits(length), by = y.bits(length);
    std::vector<Index> c(static_cast<std::size_t>(length) + 1, 0);
    for (Index i = 0; i < length; ++i) c[i + 1] = c[i] + (bx[i] != by[i] ? 1 : 0);
    return c;
}

/// Closeness bits of (x, y) under the k-th power at resolution m: n is close
/// when x and y agree on [kn, kn + m].
std::vector<std::uint8_t> power_closeness(const std::vector<Index>& diff, Index k, Index m, Index count) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(count), 0);
    for (Index n = 0; n < count; ++n) out[n] = diff[k * n + m + 1] == diff[k * n];
    return out;
}

VerdictRecord record(Verdict v, double stat, std::string evidence, std::optional<Index> witness = std::nullopt) {
    return VerdictRecord{v, stat, witness, std::move(evidence)};
}

// --- Eventually periodic pairs ----------------------------------------------

struct PeriodicDiff {
    Index start = 0;
    std::string word;  // difference pattern from `start`, one period
    bool eventually_equal() const { return word.find('1') == std::string::npos; }
};

std::optional<PeriodicDiff> periodic_diff(const SymbolSeq& x, const SymbolSeq& y) {
    const auto ex = eventual_period(x), ey = eventual_period(y);
    if (!ex || !ey) return std::nullopt;
    const Index p = std::lcm<Index>(static_cast<Index>(ex->word.size()), static_cast<Index>(ey->word.size()));
    if (p > kMaxExactPeriod) return std::nullopt;
    PeriodicDiff d{std::max(ex->start, ey->start), {}};
    const auto bx = x.bits(d.start + p), by = y.bits(d.start + p);
    for (Index i = d.start; i < d.start + p; ++i) d.word += bx[i] != by[i] ? '1' : '0';
    return d;
}

/// Fraction of residues n mod p' (n large) whose power-k window [kn, kn+m]
/// avoids every difference; exact lower Banach density of the closeness set.
double periodic_close_fraction(const PeriodicDiff& d, Index k, Index m) {
    const Index p = static_cast<Index>(d.word.size());
    const Index q = p / std::gcd(p, k);
    Index good = 0;
    for (Index r = 0; r < q; ++r) {
        bool ok = true;
        for (Index i = 0; i <= m && ok; ++i) ok = d.word[(k * r + i) % p] == '0';
        good += ok;
    }
    return static_cast<double>(good) / static_cast<double>(q);
}

// --- Sparse supports --------------------------------------------------------

/// Ones of x beyond a finite set, covered by density-zero generator rules.
struct SparseSupport {
    std::vector<GeneratorRule> rules;
    Index finite_extent = 0;  // every exception lies below this
    bool infinite = false;    // certified infinitely many ones
};

bool parameter_has_one(const CantorParameter& c) {
    if (c.head.find('1') != std::string::npos || c.tail == CantorParameter::Tail::ones) return true;
    if (c.tail == CantorParameter::Tail::random)
        for (std::size_t k = c.head.size(); k < c.head.size() + 256; ++k)
            if (c.bit(k)) return true;
    return false;
}

std::optional<SparseSupport> sparse_support(const SymbolSeq& x) {
    SparseSupport s;
    s.finite_extent = static_cast<Index>(x.prefix().size());
    if (std::holds_alternative<ZeroTail>(x.tail())) return s;
    const auto* tail = std::get_if<SupportTail>(&x.tail());
    if (!tail) return std::nullopt;
    if (const auto* p = tail->support.as<PeriodicRep>(); p && p->finite()) {
        if (!p->added.empty()) s.finite_extent = std::max(s.finite_extent, p->added.back() + 1);
        return s;
    }
    const auto* rep = tail->support.as<SparseRep>();
    if (!rep || rep->complemented) return std::nullopt;
    for (const auto& r : rep->rules)
        if (!r.certifies_density_zero()) return std::nullopt;
    s.rules = rep->rules;
    if (!rep->flips.empty()) s.finite_extent = std::max(s.finite_extent, rep->flips.back() + 1);
    for (const auto& r : rep->rules) s.infinite = s.infinite || !r.filter || parameter_has_one(r.filter->parameter);
    return s;
}

/// BD-one certificate for the set of n whose window [kn, kn+m] misses every
/// rule element; it sits inside the closeness set up to finitely many n.
BdOneVerdict sparse_certificate(const SparseSupport& a, const SparseSupport& b, Index m) {
    std::vector<GeneratorRule> rules;
    for (const auto* s : {&a, &b})
        for (auto r : s->rules) {
            r.filter.reset();  // a superset keeps the certificate valid
            rules.push_back(r);
        }
    if (rules.empty()) {
        BdOneVerdict v;
        v.status = BdOneVerdict::Status::certified_one;
        v.note = "finitely many differences";
        return v;
    }
    const IntSet base = IntSet::sparse(rules);
    IntSet cover = base;
    for (Index i = 1; i <= m; ++i) cover = unite(cover, shift(base, -i));
    return certify_bd_one(complement(cover));
}

std::optional<GeneratorRule> sole_rule(const SparseSupport& s) {
    if (s.rules.size() != 1) return std::nullopt;
    return s.rules.front();
}

CantorParameter filter_parameter(const GeneratorRule& r) {
    if (r.filter) return r.filter->parameter;
    return CantorParameter{"", CantorParameter::Tail::ones, 0};
}

/// First element of `r` kept by its filter at repetition coordinate k that
/// lies at or beyond `floor`.
std::optional<Index> recurring_element(const GeneratorRule& r, std::size_t k, Index floor) {
    for (auto j : repetition_positions(k, 64)) {
        auto v = r.element(static_cast<Index>(j));
        if (!v) return std::nullopt;
        if (*v >= floor) return v;
    }
    return std::nullopt;
}

/// Rules with the same growth, parameter and scale but different offsets
/// share only finitely many elements, since their gaps grow without bound.
bool eventually_disjoint(const GeneratorRule& a, const GeneratorRule& b) {
    const bool growing = a.growth == Growth::geometric || a.param >= 2;
    return growing && a.growth == b.growth && a.param == b.param && a.scale == b.scale && a.offset != b.offset;
}

/// Certified recurring disagreement for sparse pairs.
std::optional<VerdictRecord> sparse_asymptotic(const SparseSupport& a, const SparseSupport& b, Index horizon) {
    const Index floor = std::max({horizon, a.finite_extent, b.finite_extent});
    for (int side = 0; side < 2; ++side) {
        const auto& s = side ? b : a;
        const auto& t = side ? a : b;
        for (const auto& r : s.rules) {
            if (r.filter && !parameter_has_one(r.filter->parameter)) continue;
            bool apart = true;
            for (const auto& o : t.rules) apart = apart && eventually_disjoint(r, o);
            if (!apart) continue;
            for (Index n = 0; n < (Index{1} << 20); ++n) {
                auto v = r.element(n);
                if (!v) break;
                if (*v >= floor && r.contains(*v)) {
                    bool other = false;
                    for (const auto& o : t.rules) other = other || o.contains(*v);
                    if (other) continue;
                    return record(Verdict::refuted, 0,
                                  t.rules.empty() ? "one side has infinitely many ones, the other finitely many"
                                                  : "an infinite rule on one side eventually avoids every rule on the other",
                                  *v);
                }
            }
        }
    }
    auto ra = sole_rule(a), rb = sole_rule(b);
    if (!ra || !rb) return std::nullopt;
    auto ua = *ra, ub = *rb;
    ua.filter.reset();
    ub.filter.reset();
    if (!(ua == ub)) return std::nullopt;
    const auto k = certified_difference(filter_parameter(*ra), filter_parameter(*rb));
    if (!k) return std::nullopt;
    auto v = recurring_element(*ra, *k, floor);
    if (!v) return std::nullopt;
    return record(Verdict::refuted, 0,
                  "parameters differ at coordinate " + std::to_string(*k) +
                      ", so the points disagree at every generator index repeating it",
                  *v);
}

void check_params(const PairParams& p) {
    if (p.grid.empty()) throw ArgumentError("resolution grid must be non-empty");
    if (p.horizon < 1) throw ArgumentError("horizon must be >= 1");
    for (Index m : p.grid) {
        if (m < 0) throw ArgumentError("resolutions must be non-negative");
        if (m >= p.horizon) throw HorizonError("grid resolution exceeds the horizon");
    }
    if (!(p.lambda > 0 && p.lambda < 1)) throw ArgumentError("lambda must lie in (0, 1)");
}

struct Structure {
    std::optional<bool> equal;
    std::optional<PeriodicDiff> periodic;
    std::optional<SparseSupport> sx, sy;
};

Structure inspect(const SymbolSeq& x, const SymbolSeq& y) {
    Structure s;
    s.equal = decide_equal(x, y);
    if (s.equal != true) {
        s.periodic = periodic_diff(x, y);
        s.sx = sparse_support(x);
        s.sy = sparse_support(y);
    }
    return s;
}

/// Banach verdict for the k-th power, resolution grid adjusted to m + k - 1
/// so that every original coordinate is covered by some power window.
VerdictRecord banach_verdict(const SymbolSeq& x, const SymbolSeq& y, const Structure& st, Index k,
                             const PairParams& p, const std::vector<Index>& schedule,
                             const std::vector<DensityReport>* reports) {
    if (st.equal == true) return record(Verdict::certified, 1, "identical sequences");
    if (st.periodic) {
        double worst = 1;
        for (Index m : p.grid) worst = std::min(worst, periodic_close_fraction(*st.periodic, k, m + k - 1));
        if (worst >= 1) return record(Verdict::certified, 1, "eventually equal sequences");
        return record(Verdict::refuted, worst, "eventually periodic differences: exact lower Banach density below 1");
    }
    if (st.sx && st.sy) {
        bool all = true;
        for (Index m : p.grid)
            all = all && sparse_certificate(*st.sx, *st.sy, m + k - 1).status == BdOneVerdict::Status::certified_one;
        if (all) return record(Verdict::certified, 1, "differences lie in a density-zero generator union");
    }
    double worst = 1;
    if (reports) {
        for (const auto& r : *reports) worst = std::min(worst, r.largest().min_ratio());
    } else {
        const Index count = p.horizon / k;
        Index max_m = 0;
        for (Index m : p.grid) max_m = std::max(max_m, m);
        const auto diff = diff_prefix(x, y, k * count + max_m + k);
        for (Index m : p.grid)
            worst = std::min(worst, estimate_from_bits(power_closeness(diff, k, m + k - 1, count), schedule)
                                        .largest()
                                        .min_ratio());
    }
    if (worst >= p.lambda) return record(Verdict::empirical_pass, worst, "min-window ratio at the largest length");
    return record(Verdict::empirical_fail, worst, "min-window ratio at the largest length");
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::certified: return "certified";
        case Verdict::empirical_pass: return "empirical-pass";
        case Verdict::empirical_fail: return "empirical-fail";
        case Verdict::refuted: return "refuted";
    }
    return "?";
}

IntSet closeness_set(const SymbolSeq& x, const SymbolSeq& y, Index m, Index horizon) {
    if (m < 0) throw ArgumentError("resolution must be non-negative");
    if (horizon <= m) throw HorizonError("horizon must exceed the resolution");
    const auto diff = diff_prefix(x, y, horizon + m);
    return IntSet::window(power_closeness(diff, 1, m, horizon));
}

PairProfile classify_pair(const SymbolSeq& x, const SymbolSeq& y, const PairParams& params) {
    check_params(params);
    PairProfile out;
    out.grid = params.grid;
    out.horizon = params.horizon;
    out.lambda = params.lambda;
    out.schedule = params.schedule.empty() ? default_schedule(params.horizon) : params.schedule;
    const Index H = params.horizon;
    const Index Lmax = out.schedule.back();

    Index max_m = 0;
    for (Index m : params.grid) max_m = std::max(max_m, m);
    const auto diff = diff_prefix(x, y, H + max_m);
    for (Index m : params.grid) {
        out.closeness.push_back(IntSet::window(power_closeness(diff, 1, m, H)));
        out.densities.push_back(estimate_densities(out.closeness.back(), H, out.schedule));
    }

    const Structure st = inspect(x, y);
    for (Index m : params.grid) {
        if (st.sx && st.sy && !(st.periodic && st.periodic->eventually_equal()))
            out.certificates.push_back(sparse_certificate(*st.sx, *st.sy, m));
        else
            out.certificates.emplace_back();
    }

    out.banach = banach_verdict(x, y, st, 1, params, out.schedule, &out.densities);

    // Certified structure settles the remaining levels outright.
    if (st.equal == true) {
        out.asymptotic = out.proximal = out.syndetic = record(Verdict::certified, 1, "identical sequences");
        return out;
    }
    if (st.periodic) {
        const auto& d = *st.periodic;
        if (d.eventually_equal()) {
            out.asymptotic = out.proximal = out.syndetic = record(Verdict::certified, 1, "eventually equal sequences");
            return out;
        }
        const Index p = static_cast<Index>(d.word.size());
        Index n0 = d.start + static_cast<Index>(d.word.find('1'));
        if (n0 < H) n0 += (H - n0 + p - 1) / p * p;
        out.asymptotic = record(Verdict::refuted, 0, "eventually periodic differences recur with period " + std::to_string(p), n0);
        double worst = 1;
        Index bad_m = -1;
        for (Index m : params.grid) {
            const double f = periodic_close_fraction(d, 1, m);
            if (f < worst) worst = f;
            if (f == 0 && bad_m < 0) bad_m = m;
        }
        if (bad_m < 0) {
            out.syndetic = record(Verdict::certified, worst, "closeness sets are eventually periodic and non-empty");
            out.proximal = out.syndetic;
        } else {
            out.syndetic = record(Verdict::refuted, 0, "closeness set is finite at resolution " + std::to_string(bad_m), bad_m);
            out.proximal = out.syndetic;
        }
        return out;
    }
    if (out.banach.status == Verdict::certified) {
        out.syndetic = record(Verdict::certified, 1, "Banach density one implies bounded gaps");
        out.proximal = record(Verdict::certified, 1, "Banach density one implies infinitely many close times");
    }
    if (st.sx && st.sy)
        if (auto a = sparse_asymptotic(*st.sx, *st.sy, H)) out.asymptotic = *a;

    // Empirical levels for whatever the structure left open.
    if (out.syndetic.status == Verdict::empirical_fail && out.syndetic.evidence.empty()) {
        Index gap = 0;
        for (const auto& c : out.closeness) gap = std::max(gap, max_gap(c.materialize(H)));
        out.syndetic = record(gap <= Lmax ? Verdict::empirical_pass : Verdict::empirical_fail, static_cast<double>(gap),
                              "largest gap against the largest window length " + std::to_string(Lmax));
    }
    if (out.proximal.status == Verdict::empirical_fail && out.proximal.evidence.empty()) {
        bool late = true;
        for (const auto& c : out.closeness) {
            bool hit = false;
            for (Index n = H - Lmax; n < H && !hit; ++n) hit = c.contains(n);
            late = late && hit;
        }
        out.proximal = record(late ? Verdict::empirical_pass : Verdict::empirical_fail, late ? 1 : 0,
                              "close times in the last window of length " + std::to_string(Lmax));
    }
    if (out.asymptotic.evidence.empty()) {
        Index last = -1;
        for (Index n = H - 1; n >= 0 && last < 0; --n)
            if (diff[n + 1] != diff[n]) last = n;
        const Index tail_start = H - H / 10;
        if (last >= tail_start)
            out.asymptotic = record(Verdict::refuted, static_cast<double>(last),
                                    "provisional: disagreement in the last tenth of the horizon", last);
        else
            out.asymptotic = record(Verdict::empirical_pass, static_cast<double>(last),
                                    "no disagreement in the last tenth of the horizon");
    }
    return out;
}

PowerReport power_consistency(const SymbolSeq& x, const SymbolSeq& y, Index k, const PairParams& params) {
    if (k < 1) throw ArgumentError("power must be >= 1");
    check_params(params);
    PowerReport out;
    out.power = k;
    const Structure st = inspect(x, y);
    const auto sched_T = params.schedule.empty() ? default_schedule(params.horizon) : params.schedule;
    out.banach_T = banach_verdict(x, y, st, 1, params, sched_T, nullptr);
    const Index count = params.horizon / k;
    if (count < 1) throw HorizonError("horizon too small for this power");
    out.banach_Tk = banach_verdict(x, y, st, k, params, default_schedule(count), nullptr);
    out.agree = passes(out.banach_T.status) == passes(out.banach_Tk.status);
    return out;
}

DiagonalSupport pair_orbit_diag_support(const SymbolSeq& x, const SymbolSeq& y, Index m, Index horizon,
                                        const std::vector<Index>& schedule, double theta) {
    if (m < 1) throw ArgumentError("word length must be >= 1");
    if (m > 24) throw ResourceLimit("joint census limited to word length 24");
    if (horizon <= m) throw HorizonError("horizon must exceed the word length");
    const auto sched = schedule.empty() ? default_schedule(horizon) : schedule;
    const Index L = sched.back();
    if (L > horizon) throw HorizonError("horizon smaller than largest window length");

    const auto bx = x.bits(horizon + m), by = y.bits(horizon + m);
    std::map<std::uint64_t, std::vector<Index>> visits;
    const std::uint64_t mask = (std::uint64_t{1} << m) - 1;
    std::uint64_t u = 0, v = 0;
    for (Index i = 0; i < horizon + m - 1; ++i) {
        u = ((u << 1) | bx[i]) & mask;
        v = ((v << 1) | by[i]) & mask;
        const Index n = i - m + 1;
        if (n >= 0) visits[(u << m) | v].push_back(n);
    }

    DiagonalSupport out;
    out.pairs_seen = visits.size();
    auto word = [m](std::uint64_t w) {
        std::string s(static_cast<std::size_t>(m), '0');
        for (Index i = 0; i < m; ++i) s[i] = (w >> (m - 1 - i)) & 1u ? '1' : '0';
        return s;
    };
    for (const auto& [id, pos] : visits) {
        Index best = 0;
        for (std::size_t i = 0; i < pos.size(); ++i) {
            const Index a = std::min(pos[i], horizon - L);
            const auto lo = std::lower_bound(pos.begin(), pos.end(), a);
            const auto hi = std::lower_bound(pos.begin(), pos.end(), a + L);
            best = std::max<Index>(best, hi - lo);
        }
        const double ratio = static_cast<double>(best) / static_cast<double>(L);
        if (ratio < theta) continue;
        ++out.pairs_frequent;
        const std::uint64_t a = id >> m, b = id & mask;
        if (a != b && ratio > out.witness_ratio) {
            out.pass = false;
            out.witness = std::make_pair(word(a), word(b));
            out.witness_ratio = ratio;
        }
    }
    return out;
}

ScrambledMatrix scrambled_matrix(const std::vector<SymbolSeq>& points, const PairParams& params) {
    if (points.size() < 2) throw ArgumentError("need at least two points");
    ScrambledMatrix out;
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const auto prof = classify_pair(points[i], points[j], params);
            ScrambledEntry e{i, j, false, prof.banach.status, prof.asymptotic.status, {}};
            if (!passes(e.banach)) e.reason = "not Banach proximal (" + prof.banach.evidence + ")";
            else if (e.asymptotic != Verdict::refuted) e.reason = "asymptotic pair not refuted";
            else e.qualifies = true;
            out.qualifying += e.qualifies;
            out.entries.push_back(std::move(e));
        }
    out.scrambled = out.qualifying == out.entries.size();
    return out;
}

SymbolSeq witness_point(const CantorParameter& c) {
    GeneratorRule r{Growth::geometric, 1, 2, 0, RepetitionFilter{c}};
    return SymbolSeq::with_support("", IntSet::sparse({r}), "GEO(2,1)[c=" + c.to_string() + "]");
}

std::vector<CantorParameter> witness_parameters(std::size_t m, std::uint64_t seed) {
    if (m < 1) throw ArgumentError("need at least one parameter");
    std::size_t K = 1;
    while ((std::size_t{1} << K) < m) ++K;
    std::vector<CantorParameter> out;
    for (std::size_t i = 0; i < m; ++i) {
        std::string head(K, '0');
        for (std::size_t b = 0; b < K; ++b) head[b] = (i >> (K - 1 - b)) & 1u ? '1' : '0';
        out.push_back(CantorParameter{head, CantorParameter::Tail::random, seed * 0x9E3779B97F4A7C15ULL + i});
    }
    return out;
}

std::vector<SymbolSeq> witness_family(std::size_t m, std::uint64_t seed) {
    std::vector<SymbolSeq> out;
    for (const auto& c : witness_parameters(m, seed)) out.push_back(witness_point(c));
    return out;
}

}  // namespace bpx
