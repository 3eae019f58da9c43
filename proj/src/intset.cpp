#include "bpx/intset.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "bpx/error.hpp"

namespace bpx {

namespace {

std::optional<Index> checked_mul(Index a, Index b) {
    Index r;
    if (__builtin_mul_overflow(a, b, &r)) return std::nullopt;
    return r;
}

std::optional<Index> checked_add(Index a, Index b) {
    Index r;
    if (__builtin_add_overflow(a, b, &r)) return std::nullopt;
    return r;
}

Index add_or_throw(Index a, Index b) {
    auto r = checked_add(a, b);
    if (!r) throw EvalOverflow("index arithmetic overflow");
    return *r;
}

std::optional<Index> checked_pow(Index base, Index exp) {
    if (base == 1 || exp == 0) return 1;
    if (base == 0) return 0;
    Index r = 1;
    for (Index i = 0; i < exp; ++i) {
        auto n = checked_mul(r, base);
        if (!n) return std::nullopt;
        r = *n;
    }
    return r;
}

Index mod(Index a, Index m) {
    Index r = a % m;
    return r < 0 ? r + m : r;
}

bool sorted_contains(const std::vector<Index>& v, Index x) {
    return std::binary_search(v.begin(), v.end(), x);
}

void toggle(std::vector<Index>& v, Index x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x)
        v.erase(it);
    else
        v.insert(it, x);
}

std::vector<Index> normalized(std::vector<Index> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::atomic<std::uint64_t> g_audited{0};

constexpr Index kMaxModulus = Index{1} << 20;
constexpr Index kMaxPatchSpan = Index{1} << 24;

}  // namespace

// ---------------------------------------------------------------------------
// Formula / Trend
// ---------------------------------------------------------------------------

std::optional<Index> Formula::at(Index n) const {
    Index geo = 0;
    if (coef != 0) {
        auto p = checked_pow(ratio, n);
        if (!p) return std::nullopt;
        auto g = checked_mul(coef, *p);
        if (!g) return std::nullopt;
        geo = *g;
    }
    auto lin = checked_mul(slope, n);
    if (!lin) return std::nullopt;
    auto s = checked_add(geo, *lin);
    if (!s) return std::nullopt;
    return checked_add(*s, offset);
}

Formula Formula::subsample(Index parity) const {
    Formula f;
    f.coef = coef * (parity ? ratio : 1);
    f.ratio = ratio * ratio;
    f.slope = 2 * slope;
    f.offset = slope * parity + offset;
    return f;
}

std::string Formula::to_string() const {
    std::ostringstream os;
    bool any = false;
    auto term = [&](Index c, const std::string& body) {
        if (c == 0) return;
        if (any) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        Index a = c < 0 ? -c : c;
        if (body.empty()) os << a;
        else if (a == 1) os << body;
        else os << a << "*" << body;
        any = true;
    };
    if (ratio == 1) {
        term(slope, "n");
        term(coef + offset, "");
    } else {
        term(coef, std::to_string(ratio) + "^n");
        term(slope, "n");
        term(offset, "");
    }
    if (!any) os << "0";
    return os.str();
}

namespace {

Trend trend_of(std::map<Index, Index, std::greater<>> terms, Index slope, Index constant) {
    for (auto [r, c] : terms) {
        if (r > 1 && c != 0) return {c > 0 ? Trend::Kind::plus_infinity : Trend::Kind::minus_infinity, 0};
        if (r == 1) constant += c;
    }
    if (slope != 0) return {slope > 0 ? Trend::Kind::plus_infinity : Trend::Kind::minus_infinity, 0};
    return {Trend::Kind::constant, constant};
}

}  // namespace

Trend formula_trend(const Formula& f) {
    std::map<Index, Index, std::greater<>> terms;
    terms[f.ratio] += f.coef;
    return trend_of(terms, f.slope, f.offset);
}

Trend gap_trend(const Formula& start, const Formula& len) {
    std::map<Index, Index, std::greater<>> terms;
    // start(n+1) - start(n) = coef r^n (r - 1) + slope; len(n) brings its own slope n
    if (start.ratio > 1) terms[start.ratio] += start.coef * (start.ratio - 1);
    terms[len.ratio] -= len.coef;
    return trend_of(terms, -len.slope, start.slope - len.offset - 1);
}

// ---------------------------------------------------------------------------
// Cantor parameters and the repetition filter
// ---------------------------------------------------------------------------

bool CantorParameter::bit(std::size_t k) const {
    if (k < head.size()) return head[k] == '1';
    switch (tail) {
        case Tail::zeros: return false;
        case Tail::ones: return true;
        case Tail::random: break;
    }
    return (splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(k))) & 1U) != 0;
}

std::string CantorParameter::to_string() const {
    std::string s = head;
    switch (tail) {
        case Tail::zeros: s += "0^inf"; break;
        case Tail::ones: s += "1^inf"; break;
        case Tail::random: s += "~rand(" + std::to_string(seed) + ")"; break;
    }
    return s;
}

std::optional<std::size_t> certified_difference(const CantorParameter& a, const CantorParameter& b) {
    const std::size_t limit = std::max(a.head.size(), b.head.size()) + 1;
    for (std::size_t k = 0; k < limit; ++k)
        if (a.determined(k) && b.determined(k) && a.bit(k) != b.bit(k)) return k;
    return std::nullopt;
}

std::size_t repetition_index(std::uint64_t j) {
    auto r = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(j) + 1.0) - 1.0) / 2.0);
    while (r * (r + 1) / 2 > j) --r;
    while ((r + 1) * (r + 2) / 2 <= j) ++r;
    return static_cast<std::size_t>(j - r * (r + 1) / 2);
}

std::vector<std::uint64_t> repetition_positions(std::size_t k, std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t r = k; out.size() < count; ++r) out.push_back(r * (r + 1) / 2 + k);
    return out;
}

// ---------------------------------------------------------------------------
// Generator rules
// ---------------------------------------------------------------------------

std::optional<Index> GeneratorRule::element(Index n) const {
    std::optional<Index> core;
    if (growth == Growth::geometric) {
        auto p = checked_pow(param, n);
        if (!p) return std::nullopt;
        core = checked_mul(scale, *p);
    } else {
        auto p = checked_pow(n, param);
        if (!p) return std::nullopt;
        core = checked_mul(scale, *p);
    }
    if (!core) return std::nullopt;
    return checked_add(*core, offset);
}

std::optional<Index> GeneratorRule::index_of(Index v) const {
    auto w = checked_add(v, -offset);
    if (!w || *w < 0 || *w % scale != 0) return std::nullopt;
    Index q = *w / scale;
    if (growth == Growth::geometric) {
        Index p = 1;
        for (Index n = 0;; ++n) {
            if (p == q) return n;
            if (p > q) return std::nullopt;
            auto next = checked_mul(p, param);
            if (!next) return std::nullopt;
            p = *next;
        }
    }
    if (param == 1) return q;
    Index lo = 0, hi = 1;
    while (true) {
        auto p = checked_pow(hi, param);
        if (!p || *p >= q) break;
        hi *= 2;
    }
    while (lo < hi) {
        Index mid = lo + (hi - lo) / 2;
        auto p = checked_pow(mid, param);
        if (!p || *p >= q) hi = mid;
        else lo = mid + 1;
    }
    auto p = checked_pow(lo, param);
    if (p && *p == q) return lo;
    return std::nullopt;
}

bool GeneratorRule::contains(Index v) const {
    auto n = index_of(v);
    if (!n) return false;
    return !filter || filter->keep(static_cast<std::uint64_t>(*n));
}

std::string GeneratorRule::to_string() const {
    std::ostringstream os;
    if (growth == Growth::geometric) os << "GEO(" << param << "," << scale << ")";
    else os << "POLY(" << param << "," << scale << ")";
    if (offset > 0) os << "+" << offset;
    else if (offset < 0) os << offset;
    if (filter) os << "[c=" << filter->parameter.to_string() << "]";
    return os.str();
}

namespace {

void validate_rule(const GeneratorRule& r) {
    if (r.scale < 1) throw ArgumentError("generator scale must be >= 1");
    if (r.growth == Growth::geometric && r.param < 2)
        throw ArgumentError("geometric generator ratio must be >= 2");
    if (r.growth == Growth::polynomial && r.param < 1)
        throw ArgumentError("polynomial generator degree must be >= 1");
    std::optional<Index> prev;
    for (Index n = 0; n < 64; ++n) {
        auto e = r.element(n);
        if (!e) break;
        if (prev && *e <= *prev) throw ArgumentError("generator rule is not strictly increasing");
        if (r.growth == Growth::geometric && prev && *e - r.offset != (*prev - r.offset) * r.param)
            throw ArgumentError("generator rule is not geometric");
        prev = e;
    }
}

void validate_blocks(const Formula& start, const Formula& len) {
    if (start.ratio < 1 || len.ratio < 1) throw ArgumentError("formula ratio must be >= 1");
    for (Index n = 0; n < 64; ++n) {
        auto s = start.at(n), l = len.at(n), s1 = start.at(n + 1);
        if (!s || !l || !s1) break;
        if (*l < 0) throw ArgumentError("block length must be non-negative");
        if (*s1 <= *s + *l) throw ArgumentError("blocks must be disjoint and ordered");
    }
}

// Largest n with start(n) <= v, if any.
std::optional<Index> block_at_or_before(const Formula& start, Index v) {
    auto s0 = start.at(0);
    if (!s0 || *s0 > v) return std::nullopt;
    Index lo = 0, hi = 1;
    while (true) {
        auto s = start.at(hi);
        if (!s || *s > v) break;
        lo = hi;
        hi *= 2;
    }
    // start(lo) <= v < start(hi) (or overflow at hi)
    while (hi - lo > 1) {
        Index mid = lo + (hi - lo) / 2;
        auto s = start.at(mid);
        if (!s || *s > v) hi = mid;
        else lo = mid;
    }
    return lo;
}

bool in_blocks(const BlockRep& b, Index v) {
    auto n = block_at_or_before(b.start, v);
    if (!n) return false;
    auto s = b.start.at(*n);
    auto l = b.length.at(*n);
    if (!s || !l) return false;
    return v <= *s + *l;
}

bool in_rules(const SparseRep& s, Index v) {
    return std::any_of(s.rules.begin(), s.rules.end(), [v](const GeneratorRule& r) { return r.contains(v); });
}

template <class RuleRep>
bool rule_member(const RuleRep& r, bool in_rule, Index v) {
    return (in_rule != r.complemented) != sorted_contains(r.flips, v);
}

}  // namespace

// ---------------------------------------------------------------------------
// PeriodicRep / IntSet construction
// ---------------------------------------------------------------------------

bool PeriodicRep::base(Index n) const { return sorted_contains(residues, mod(n, modulus)); }

namespace {

PeriodicRep canonical(PeriodicRep p) {
    // Shrink the modulus to the minimal period of the residue pattern.
    for (Index d = 1; d < p.modulus; ++d) {
        if (p.modulus % d != 0) continue;
        bool periodic = true;
        for (Index r = 0; r < p.modulus && periodic; ++r)
            periodic = p.base(r) == p.base(r % d);
        if (periodic) {
            std::vector<Index> res;
            for (Index r : p.residues)
                if (r < d) res.push_back(r);
            p.residues = res;
            p.modulus = d;
            break;
        }
    }
    // Exceptions must disagree with the residue rule.
    std::vector<Index> added, removed;
    for (Index v : p.added)
        if (!p.base(v)) added.push_back(v);
    for (Index v : p.removed)
        if (p.base(v)) removed.push_back(v);
    p.added = added;
    p.removed = removed;
    Index last = -1;
    if (!added.empty()) last = std::max(last, added.back());
    if (!removed.empty()) last = std::max(last, removed.back());
    p.threshold = last + 1;
    return p;
}

}  // namespace

IntSet IntSet::window(std::vector<std::uint8_t> bits) {
    if (bits.empty()) throw ArgumentError("window horizon must be >= 1");
    for (auto& b : bits) b = b ? 1 : 0;
    return IntSet(WindowRep{std::move(bits)});
}

IntSet IntSet::window_of(Index horizon, const std::vector<Index>& elements) {
    if (horizon < 1) throw ArgumentError("window horizon must be >= 1");
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(horizon), 0);
    for (Index e : elements) {
        if (e < 0 || e >= horizon) throw ArgumentError("window element outside horizon");
        bits[static_cast<std::size_t>(e)] = 1;
    }
    return IntSet(WindowRep{std::move(bits)});
}

IntSet IntSet::periodic(Index threshold, Index modulus, std::vector<Index> residues, std::vector<Index> added,
                        std::vector<Index> removed) {
    if (modulus < 1) throw ArgumentError("modulus must be positive");
    if (threshold < 0) throw ArgumentError("threshold must be non-negative");
    if (modulus > kMaxModulus) throw ResourceLimit("modulus exceeds 2^20");
    PeriodicRep p{threshold, modulus, normalized(std::move(residues)), normalized(std::move(added)),
                  normalized(std::move(removed))};
    for (Index r : p.residues)
        if (r < 0 || r >= modulus) throw ArgumentError("residue out of range");
    for (const auto* list : {&p.added, &p.removed})
        for (Index v : *list)
            if (v < 0 || v >= threshold) throw ArgumentError("exception must lie below the threshold");
    std::vector<Index> both;
    std::set_intersection(p.added.begin(), p.added.end(), p.removed.begin(), p.removed.end(),
                          std::back_inserter(both));
    if (!both.empty()) throw ArgumentError("element both added and removed");
    return IntSet(canonical(std::move(p)));
}

IntSet IntSet::progression(Index first, Index step) {
    if (first < 0) throw ArgumentError("progression start must be non-negative");
    if (step < 1) throw ArgumentError("progression step must be >= 1");
    if (first > kMaxPatchSpan) throw ResourceLimit("progression start too large");
    std::vector<Index> removed;
    for (Index v = first % step; v < first; v += step) removed.push_back(v);
    return periodic(first, step, {first % step}, {}, std::move(removed));
}

IntSet IntSet::finite(std::vector<Index> elements) {
    elements = normalized(std::move(elements));
    for (Index e : elements)
        if (e < 0) throw ArgumentError("finite set elements must be non-negative");
    Index t = elements.empty() ? 0 : elements.back() + 1;
    return periodic(t, 1, {}, std::move(elements), {});
}

IntSet IntSet::all() { return periodic(0, 1, {0}); }
IntSet IntSet::empty() { return periodic(0, 1, {}); }

IntSet IntSet::blocks(Formula start, Formula length, bool complemented, std::vector<Index> flips) {
    validate_blocks(start, length);
    flips = normalized(std::move(flips));
    if (!flips.empty() && flips.front() < 0) throw ArgumentError("flips must be non-negative");
    return IntSet(BlockRep{start, length, complemented, std::move(flips)});
}

IntSet IntSet::sparse(std::vector<GeneratorRule> rules, bool complemented, std::vector<Index> flips) {
    if (rules.empty()) throw ArgumentError("sparse set needs at least one rule");
    for (const auto& r : rules) validate_rule(r);
    flips = normalized(std::move(flips));
    if (!flips.empty() && flips.front() < 0) throw ArgumentError("flips must be non-negative");
    return IntSet(SparseRep{std::move(rules), complemented, std::move(flips)});
}

SetKind IntSet::kind() const { return static_cast<SetKind>(rep_.index()); }

bool IntSet::contains(Index n) const {
    if (n < 0) return false;
    struct Visitor {
        Index n;
        bool operator()(const WindowRep& w) const {
            if (n >= w.horizon()) throw HorizonError("query beyond window horizon");
            return w.bits[static_cast<std::size_t>(n)] != 0;
        }
        bool operator()(const PeriodicRep& p) const {
            if (n < p.threshold) {
                if (sorted_contains(p.added, n)) return true;
                if (sorted_contains(p.removed, n)) return false;
            }
            return p.base(n);
        }
        bool operator()(const BlockRep& b) const { return rule_member(b, in_blocks(b, n), n); }
        bool operator()(const SparseRep& s) const { return rule_member(s, in_rules(s, n), n); }
    };
    return std::visit(Visitor{n}, rep_);
}

std::vector<std::uint8_t> IntSet::materialize(Index horizon) const {
    if (horizon < 0) throw ArgumentError("negative horizon");
    const auto H = static_cast<std::size_t>(horizon);
    std::vector<std::uint8_t> bits(H, 0);
    auto apply_flips = [&](const std::vector<Index>& flips) {
        for (Index f : flips)
            if (f < horizon) bits[static_cast<std::size_t>(f)] ^= 1;
    };
    if (const auto* w = as<WindowRep>()) {
        if (horizon > w->horizon()) throw HorizonError("requested horizon exceeds window horizon");
        std::copy_n(w->bits.begin(), H, bits.begin());
    } else if (const auto* p = as<PeriodicRep>()) {
        for (Index v = 0; v < horizon; ++v) bits[static_cast<std::size_t>(v)] = contains(v) ? 1 : 0;
        (void)p;
    } else if (const auto* b = as<BlockRep>()) {
        for (Index n = 0;; ++n) {
            auto s = b->start.at(n);
            auto l = b->length.at(n);
            if (!s || !l || *s >= horizon) break;
            for (Index v = std::max<Index>(*s, 0); v <= *s + *l && v < horizon; ++v)
                bits[static_cast<std::size_t>(v)] = 1;
        }
        if (b->complemented)
            for (auto& x : bits) x ^= 1;
        apply_flips(b->flips);
    } else if (const auto* sp = as<SparseRep>()) {
        for (const auto& r : sp->rules) {
            for (Index n = 0;; ++n) {
                auto e = r.element(n);
                if (!e || *e >= horizon) break;
                if (*e >= 0 && (!r.filter || r.filter->keep(static_cast<std::uint64_t>(n))))
                    bits[static_cast<std::size_t>(*e)] = 1;
            }
        }
        if (sp->complemented)
            for (auto& x : bits) x ^= 1;
        apply_flips(sp->flips);
    }
    return bits;
}

std::vector<Index> IntSet::elements_below(Index horizon) const {
    auto bits = materialize(horizon);
    std::vector<Index> out;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.push_back(static_cast<Index>(i));
    return out;
}

std::optional<Index> IntSet::window_horizon() const {
    if (const auto* w = as<WindowRep>()) return w->horizon();
    return std::nullopt;
}

std::string IntSet::describe() const {
    std::ostringstream os;
    auto list = [&](const std::vector<Index>& v) {
        os << "{";
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
        os << "}";
    };
    if (const auto* w = as<WindowRep>()) {
        Index count = std::count(w->bits.begin(), w->bits.end(), 1);
        os << "Window(H=" << w->horizon() << ", count=" << count << ")";
    } else if (const auto* p = as<PeriodicRep>()) {
        os << "EP(t=" << p->threshold << "; m=" << p->modulus << "; r=";
        list(p->residues);
        if (!p->added.empty()) os << "; add=", list(p->added);
        if (!p->removed.empty()) os << "; remove=", list(p->removed);
        os << ")";
    } else if (const auto* b = as<BlockRep>()) {
        os << (b->complemented ? "~" : "") << "Blocks([" << b->start.to_string() << ", +"
           << b->length.to_string() << "])";
        if (!b->flips.empty()) os << " flips=", list(b->flips);
    } else if (const auto* s = as<SparseRep>()) {
        os << (s->complemented ? "~" : "") << "Sparse(";
        for (std::size_t i = 0; i < s->rules.size(); ++i) os << (i ? " | " : "") << s->rules[i].to_string();
        os << ")";
        if (!s->flips.empty()) os << " flips=", list(s->flips);
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

const LengthProfile* DensityReport::at_length(Index L) const {
    for (const auto& p : profile)
        if (p.length == L) return &p;
    return nullptr;
}

std::vector<Index> default_schedule(Index horizon) {
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    const int lg = std::bit_width(static_cast<std::uint64_t>(horizon)) - 1;
    std::vector<Index> s;
    for (int e = 4; e <= lg - 2; ++e) s.push_back(Index{1} << e);
    if (s.empty()) s.push_back(Index{1} << std::max(0, std::min(lg, 4)));
    return s;
}

bool chain_holds(const DensityReport& r) {
    return 0.0 <= r.lower_banach && r.lower_banach <= r.lower_density && r.lower_density <= r.upper_density &&
           r.upper_density <= r.upper_banach && r.upper_banach <= 1.0;
}

bool doubling_monotone(const DensityReport& r) {
    for (const auto& p : r.profile) {
        const auto* q = r.at_length(2 * p.length);
        if (!q) continue;
        if (q->max_count > 2 * p.max_count || q->min_count < 2 * p.min_count) return false;
    }
    return true;
}

std::uint64_t audited_reports() { return g_audited.load(); }

namespace {

DensityReport audited(DensityReport r) {
    if (!chain_holds(r)) throw InvariantViolation("density chain inequality violated");
    if (!doubling_monotone(r)) throw InvariantViolation("doubling monotonicity violated");
    ++g_audited;
    return r;
}

}  // namespace

DensityReport exact_density(const IntSet& s) {
    const auto* p = s.as<PeriodicRep>();
    if (!p) throw WrongVariant("exact_density requires an eventually periodic set");
    DensityReport r;
    const double d = static_cast<double>(p->residues.size()) / static_cast<double>(p->modulus);
    r.lower_density = r.upper_density = r.lower_banach = r.upper_banach = d;
    r.exact_lower_density = r.exact_upper_density = r.exact_lower_banach = r.exact_upper_banach = true;
    return audited(r);
}

DensityReport estimate_from_bits(const std::vector<std::uint8_t>& bits, const std::vector<Index>& schedule) {
    const auto H = static_cast<Index>(bits.size());
    if (schedule.empty()) throw ArgumentError("empty window schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] < 1) throw ArgumentError("window lengths must be positive");
        if (i && schedule[i] <= schedule[i - 1]) throw ArgumentError("schedule must be strictly increasing");
    }
    if (schedule.back() > H) throw HorizonError("horizon smaller than largest window length");

    std::vector<Index> prefix(bits.size() + 1, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) prefix[i + 1] = prefix[i] + bits[i];

    DensityReport r;
    r.horizon = H;
    r.schedule = schedule;
    for (Index L : schedule) {
        LengthProfile p;
        p.length = L;
        p.min_count = L + 1;
        p.max_count = -1;
        for (Index a = 0; a + L <= H; ++a) {
            Index c = prefix[static_cast<std::size_t>(a + L)] - prefix[static_cast<std::size_t>(a)];
            if (c < p.min_count) p.min_count = c, p.argmin = a;
            if (c > p.max_count) p.max_count = c, p.argmax = a;
        }
        r.profile.push_back(p);
    }
    const auto& top = r.profile.back();
    r.lower_banach = top.min_ratio();
    r.upper_banach = top.max_ratio();
    // Prefixes [0, qL) are unions of q windows of the largest length, which
    // keeps the ordinary densities inside the Banach bracket.
    const Index L = top.length;
    r.lower_density = 1.0;
    r.upper_density = 0.0;
    for (Index q = 1; q * L <= H; ++q) {
        double ratio = static_cast<double>(prefix[static_cast<std::size_t>(q * L)]) / static_cast<double>(q * L);
        r.lower_density = std::min(r.lower_density, ratio);
        r.upper_density = std::max(r.upper_density, ratio);
    }
    return audited(r);
}

DensityReport estimate_densities(const IntSet& s, Index horizon, const std::vector<Index>& schedule) {
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    if (!schedule.empty() && schedule.back() > horizon)
        throw HorizonError("horizon smaller than largest window length");
    const auto& sched = schedule.empty() ? default_schedule(horizon) : schedule;
    return estimate_from_bits(s.materialize(horizon), sched);
}

DensityReport estimate_densities(const IntSet& s, Index horizon) {
    return estimate_densities(s, horizon, default_schedule(horizon));
}

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

namespace {

template <class RuleRep>
bool rule_in(const RuleRep& r, Index v) {
    if constexpr (std::is_same_v<RuleRep, BlockRep>) return in_blocks(r, v);
    else return in_rules(r, v);
}

template <class RuleRep>
RuleRep shifted_rule(RuleRep r, Index k) {
    if constexpr (std::is_same_v<RuleRep, BlockRep>) {
        r.start.offset = add_or_throw(r.start.offset, k);
    } else {
        for (auto& g : r.rules) g.offset = add_or_throw(g.offset, k);
    }
    std::vector<Index> flips;
    for (Index f : r.flips)
        if (f + k >= 0) flips.push_back(add_or_throw(f, k));
    r.flips = flips;
    if (k > 0) {
        if (k > kMaxPatchSpan) throw ResourceLimit("shift too large for a rule-based set");
        // Nothing lies below k after a positive shift.
        for (Index v = 0; v < k; ++v)
            if (rule_member(r, rule_in(r, v), v)) toggle(r.flips, v);
    }
    return r;
}

IntSet shift_periodic(const PeriodicRep& p, Index k) {
    std::vector<Index> residues;
    for (Index r : p.residues) residues.push_back(mod(r + k, p.modulus));
    std::vector<Index> added, removed;
    for (Index v : p.added)
        if (v + k >= 0) added.push_back(v + k);
    for (Index v : p.removed)
        if (v + k >= 0) removed.push_back(v + k);
    Index threshold = std::max<Index>(0, add_or_throw(p.threshold, k));
    if (k > 0) {
        if (k > kMaxPatchSpan) throw ResourceLimit("shift too large for an eventually periodic set");
        PeriodicRep probe{0, p.modulus, normalized(residues), {}, {}};
        for (Index v = 0; v < k; ++v)
            if (probe.base(v)) removed.push_back(v);
    }
    return IntSet::periodic(threshold, p.modulus, residues, added, removed);
}

IntSet window_combine(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, bool uni) {
    std::vector<std::uint8_t> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = uni ? (a[i] | b[i]) : (a[i] & b[i]);
    return IntSet::window(std::move(out));
}

bool apply(bool uni, bool x, bool y) { return uni ? (x || y) : (x && y); }

std::optional<IntSet> periodic_combine(const PeriodicRep& a, const PeriodicRep& b, bool uni) {
    const Index M = std::lcm(a.modulus, b.modulus);
    if (M > kMaxModulus) return std::nullopt;
    const Index T = std::max(a.threshold, b.threshold);
    PeriodicRep pa = a, pb = b;
    std::vector<Index> residues;
    for (Index r = 0; r < M; ++r)
        if (apply(uni, pa.base(r), pb.base(r))) residues.push_back(r);
    PeriodicRep probe{0, M, residues, {}, {}};
    std::vector<Index> added, removed;
    auto contains = [](const PeriodicRep& p, Index v) {
        if (v < p.threshold) {
            if (sorted_contains(p.added, v)) return true;
            if (sorted_contains(p.removed, v)) return false;
        }
        return p.base(v);
    };
    std::vector<Index> points;
    for (const auto* l : {&a.added, &a.removed, &b.added, &b.removed}) points.insert(points.end(), l->begin(), l->end());
    for (Index v : normalized(points)) {
        bool actual = apply(uni, contains(a, v), contains(b, v));
        if (actual != probe.base(v)) (actual ? added : removed).push_back(v);
    }
    return IntSet::periodic(T, M, residues, added, removed);
}


template <class RuleRep, class Desired>
RuleRep patched(RuleRep r, const std::vector<Index>& points, Desired desired) {
    for (Index v : points)
        if (rule_member(r, rule_in(r, v), v) != desired(v)) toggle(r.flips, v);
    return r;
}

IntSet wrap(const BlockRep& b) { return IntSet::blocks(b.start, b.length, b.complemented, b.flips); }
IntSet wrap(const SparseRep& s) { return IntSet::sparse(s.rules, s.complemented, s.flips); }

// Finite or cofinite periodic operand against a rule-based operand.
template <class RuleRep>
std::optional<IntSet> rule_with_periodic(const RuleRep& rule, const IntSet& rule_set, const PeriodicRep& p,
                                         const IntSet& p_set, bool uni) {
    if (p.finite()) {
        if (!uni) {
            std::vector<Index> keep;
            for (Index v : p.added)
                if (rule_set.contains(v)) keep.push_back(v);
            return IntSet::finite(keep);
        }
        return wrap(patched(rule, p.added, [&](Index v) { return rule_set.contains(v) || p_set.contains(v); }));
    }
    if (p.cofinite()) {
        if (uni) {
            std::vector<Index> missing;
            for (Index v : p.removed)
                if (!rule_set.contains(v)) missing.push_back(v);
            return IntSet::periodic(p.threshold, 1, {0}, {}, missing);
        }
        return wrap(patched(rule, p.removed, [&](Index v) { return rule_set.contains(v) && p_set.contains(v); }));
    }
    return std::nullopt;
}

std::optional<IntSet> sparse_merge(const SparseRep& a, const SparseRep& b, const IntSet& sa, const IntSet& sb,
                                   bool uni) {
    if (a.complemented != b.complemented) return std::nullopt;
    // A | B and ~A & ~B = ~(A | B) stay sparse; the other two combinations do not.
    if (uni == a.complemented) return std::nullopt;
    SparseRep m;
    m.complemented = a.complemented;
    m.rules = a.rules;
    m.rules.insert(m.rules.end(), b.rules.begin(), b.rules.end());
    std::vector<Index> points = a.flips;
    points.insert(points.end(), b.flips.begin(), b.flips.end());
    return wrap(patched(m, normalized(points), [&](Index v) { return apply(uni, sa.contains(v), sb.contains(v)); }));
}

IntSet combine(const IntSet& a, const IntSet& b, bool uni, Index horizon) {
    const auto wa = a.window_horizon(), wb = b.window_horizon();
    if (wa && wb && *wa != *wb) throw HorizonError("window operands have different horizons");
    if (wa || wb) {
        const Index H = wa ? *wa : *wb;
        return window_combine(a.materialize(H), b.materialize(H), uni);
    }
    const auto* pa = a.as<PeriodicRep>();
    const auto* pb = b.as<PeriodicRep>();
    if (pa && pb) {
        if (auto r = periodic_combine(*pa, *pb, uni)) return *r;
    }
    auto with_periodic = [&](const IntSet& rule_set, const PeriodicRep& p, const IntSet& p_set) -> std::optional<IntSet> {
        if (const auto* bl = rule_set.as<BlockRep>()) return rule_with_periodic(*bl, rule_set, p, p_set, uni);
        if (const auto* sp = rule_set.as<SparseRep>()) return rule_with_periodic(*sp, rule_set, p, p_set, uni);
        return std::nullopt;
    };
    if (pa && !pb) {
        if (auto r = with_periodic(b, *pa, a)) return *r;
    }
    if (pb && !pa) {
        if (auto r = with_periodic(a, *pb, b)) return *r;
    }
    const auto* sa = a.as<SparseRep>();
    const auto* sb = b.as<SparseRep>();
    if (sa && sb) {
        if (auto r = sparse_merge(*sa, *sb, a, b, uni)) return *r;
    }
    if (horizon < 1) throw HorizonError("fallback window needs a positive horizon");
    return window_combine(a.materialize(horizon), b.materialize(horizon), uni);
}

}  // namespace

IntSet shift(const IntSet& s, Index n) {
    if (n == 0) return s;
    if (const auto* w = s.as<WindowRep>()) {
        const Index H = w->horizon();
        if (n < 0 && -n >= H) throw HorizonError("negative shift consumes the whole window");
        std::vector<std::uint8_t> bits;
        if (n > 0) {
            bits.assign(static_cast<std::size_t>(n), 0);
            bits.insert(bits.end(), w->bits.begin(), w->bits.end());
        } else {
            bits.assign(w->bits.begin() + (-n), w->bits.end());
        }
        return IntSet::window(std::move(bits));
    }
    if (const auto* p = s.as<PeriodicRep>()) return shift_periodic(*p, n);
    if (const auto* b = s.as<BlockRep>()) return wrap(shifted_rule(*b, n));
    return wrap(shifted_rule(*s.as<SparseRep>(), n));
}

IntSet complement(const IntSet& s) {
    if (const auto* w = s.as<WindowRep>()) {
        auto bits = w->bits;
        for (auto& x : bits) x ^= 1;
        return IntSet::window(std::move(bits));
    }
    if (const auto* p = s.as<PeriodicRep>()) {
        std::vector<Index> residues;
        for (Index r = 0; r < p->modulus; ++r)
            if (!sorted_contains(p->residues, r)) residues.push_back(r);
        return IntSet::periodic(p->threshold, p->modulus, residues, p->removed, p->added);
    }
    if (const auto* b = s.as<BlockRep>()) {
        auto c = *b;
        c.complemented = !c.complemented;
        return wrap(c);
    }
    auto c = *s.as<SparseRep>();
    c.complemented = !c.complemented;
    return wrap(c);
}

IntSet intersect(const IntSet& a, const IntSet& b, Index horizon) { return combine(a, b, false, horizon); }
IntSet unite(const IntSet& a, const IntSet& b, Index horizon) { return combine(a, b, true, horizon); }

IntSet set_algebra(SetOp op, const IntSet& a, const IntSet* b, Index amount, Index horizon) {
    switch (op) {
        case SetOp::shift: return shift(a, amount);
        case SetOp::complement: return complement(a);
        case SetOp::intersect:
        case SetOp::unite:
            if (!b) throw ArgumentError("binary set operation needs two operands");
            return op == SetOp::intersect ? intersect(a, *b, horizon) : unite(a, *b, horizon);
    }
    throw ArgumentError("unknown set operation");
}

// ---------------------------------------------------------------------------
// Verdicts
// ---------------------------------------------------------------------------

const char* to_string(SetVerdict::Status s) {
    switch (s) {
        case SetVerdict::Status::certified: return "certified";
        case SetVerdict::Status::refuted: return "refuted";
        case SetVerdict::Status::empirical: return "empirical";
    }
    return "?";
}

const char* to_string(BdOneVerdict::Status s) {
    switch (s) {
        case BdOneVerdict::Status::certified_one: return "certified_one";
        case BdOneVerdict::Status::certified_not_one: return "certified_not_one";
        case BdOneVerdict::Status::unknown: return "unknown";
    }
    return "?";
}

Index longest_run(const std::vector<std::uint8_t>& bits) {
    Index best = 0, cur = 0;
    for (auto b : bits) {
        cur = b ? cur + 1 : 0;
        best = std::max(best, cur);
    }
    return best;
}

Index max_gap(const std::vector<std::uint8_t>& bits) {
    Index best = 0, cur = 0;
    for (auto b : bits) {
        cur = b ? 0 : cur + 1;
        best = std::max(best, cur);
    }
    return best + 1;
}

namespace {

using Status = SetVerdict::Status;

SetVerdict empirical(Index value, std::string note) { return {Status::empirical, value, std::move(note)}; }

Index flip_reach(const std::vector<Index>& flips) { return flips.empty() ? 0 : flips.back() + 1; }

// Scan range that contains every irregularity of a block rule before its
// gap/length pattern becomes eventually constant.
Index block_scan_end(const BlockRep& b, Index extra) {
    Index end = flip_reach(b.flips);
    for (Index n = 0; n < 3; ++n) {
        auto s = b.start.at(n);
        auto l = b.length.at(n);
        if (s && l) end = std::max(end, *s + *l + 1);
    }
    return end + 2 * extra + 2;
}

bool all_density_zero(const SparseRep& s) {
    return std::all_of(s.rules.begin(), s.rules.end(), [](const GeneratorRule& r) { return r.certifies_density_zero(); });
}

}  // namespace

SetVerdict is_syndetic(const IntSet& s, Index horizon) {
    if (const auto* p = s.as<PeriodicRep>()) {
        const Index end = p->threshold + 2 * p->modulus + 1;
        auto bits = s.materialize(end);
        if (p->finite()) {
            return {Status::refuted, max_gap(s.materialize(std::max(horizon, end))),
                    "finite set: gaps grow without bound"};
        }
        return {Status::certified, max_gap(bits), "periodic beyond threshold"};
    }
    if (const auto* b = s.as<BlockRep>()) {
        if (b->complemented) {
            return empirical(max_gap(s.materialize(horizon)), "no gap certificate for a complemented block rule");
        }
        auto t = gap_trend(b->start, b->length);
        if (t.kind == Trend::Kind::plus_infinity)
            return {Status::refuted, max_gap(s.materialize(horizon)), "gaps between blocks grow without bound"};
        if (t.kind == Trend::Kind::constant) {
            auto bits = s.materialize(block_scan_end(*b, t.value));
            return {Status::certified, std::max(t.value + 1, max_gap(bits)), "constant gap between blocks"};
        }
        return empirical(max_gap(s.materialize(horizon)), "irregular block rule");
    }
    if (const auto* sp = s.as<SparseRep>()) {
        if (!sp->complemented && all_density_zero(*sp))
            return {Status::refuted, max_gap(s.materialize(horizon)), "generator growth forces unbounded gaps"};
        return empirical(max_gap(s.materialize(horizon)), "no gap certificate for this generator set");
    }
    return empirical(max_gap(s.materialize(horizon)), "observed within the window");
}

SetVerdict is_thick(const IntSet& s, Index horizon) {
    if (const auto* p = s.as<PeriodicRep>()) {
        if (p->cofinite()) return {Status::certified, 0, "cofinite"};
        auto bits = s.materialize(p->threshold + 2 * p->modulus + 1);
        return {Status::refuted, longest_run(bits), "periodic with a missing residue"};
    }
    if (const auto* b = s.as<BlockRep>()) {
        auto len = formula_trend(b->length);
        auto gap = gap_trend(b->start, b->length);
        if (!b->complemented) {
            if (len.kind == Trend::Kind::plus_infinity) return {Status::certified, 0, "block lengths unbounded"};
            if (len.kind == Trend::Kind::constant &&
                (gap.kind == Trend::Kind::plus_infinity || (gap.kind == Trend::Kind::constant && gap.value >= 1))) {
                auto bits = s.materialize(block_scan_end(*b, len.value + (gap.kind == Trend::Kind::constant ? gap.value : 0)));
                return {Status::refuted, std::max(len.value + 1, longest_run(bits)), "bounded block lengths"};
            }
        } else {
            if (gap.kind == Trend::Kind::plus_infinity) return {Status::certified, 0, "gaps between blocks unbounded"};
            if (gap.kind == Trend::Kind::constant) {
                auto bits = s.materialize(block_scan_end(*b, gap.value));
                return {Status::refuted, std::max(gap.value, longest_run(bits)), "bounded gaps between blocks"};
            }
        }
        return empirical(longest_run(s.materialize(horizon)), "no run certificate for this block rule");
    }
    if (const auto* sp = s.as<SparseRep>()) {
        if (sp->complemented) {
            if (all_density_zero(*sp)) return {Status::certified, 0, "complement of a density-zero generator set"};
            return empirical(longest_run(s.materialize(horizon)), "no run certificate");
        }
        // Once every rule's consecutive gaps exceed k, a run has at most k members.
        const Index k = static_cast<Index>(sp->rules.size());
        Index reach = flip_reach(sp->flips);
        for (const auto& r : sp->rules) {
            if (r.growth == Growth::polynomial && r.param == 1 && r.scale <= k)
                return empirical(longest_run(s.materialize(horizon)), "dense linear generator");
            for (Index n = 0;; ++n) {
                auto e0 = r.element(n), e1 = r.element(n + 1);
                if (!e0 || !e1) throw EvalOverflow("generator overflow before gaps separate");
                if (*e0 >= 0 && *e1 - *e0 > k) {
                    reach = std::max(reach, *e0 + 1);
                    break;
                }
            }
        }
        auto bits = s.materialize(reach + k + 2);
        return {Status::refuted, std::max(k, longest_run(bits)), "runs bounded by the number of generators"};
    }
    return empirical(longest_run(s.materialize(horizon)), "observed within the window");
}

BdOneVerdict certify_bd_one(const IntSet& s) {
    using B = BdOneVerdict::Status;
    if (const auto* p = s.as<PeriodicRep>()) {
        if (p->cofinite()) return {B::certified_one, 1.0, "cofinite"};
        return {B::certified_not_one, static_cast<double>(p->residues.size()) / static_cast<double>(p->modulus),
                "eventually periodic"};
    }
    if (const auto* sp = s.as<SparseRep>()) {
        if (all_density_zero(*sp)) {
            if (sp->complemented) return {B::certified_one, 1.0, "complement of a density-zero generator set"};
            return {B::certified_not_one, 0.0, "density-zero generator set"};
        }
        return {B::unknown, 0, "linear generator"};
    }
    if (const auto* b = s.as<BlockRep>()) {
        auto len = formula_trend(b->length);
        auto gap = gap_trend(b->start, b->length);
        if (len.kind == Trend::Kind::constant && gap.kind == Trend::Kind::plus_infinity) {
            if (b->complemented) return {B::certified_one, 1.0, "complement of bounded blocks with growing gaps"};
            return {B::certified_not_one, 0.0, "bounded blocks with growing gaps"};
        }
    }
    return {B::unknown, 0, "no certificate for this representation"};
}

}  // namespace bpx
