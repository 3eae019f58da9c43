#include "bpx/shiftspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "bpx/error.hpp"
#include "bpx/setlang.hpp"

namespace bpx {

namespace {

constexpr Index kMaxExactPeriod = Index{1} << 22;
constexpr int kMaxLanguageLength = 24;
constexpr int kMaxForbiddenLength = 21;

void check_bits(const std::string& w, const char* what) {
    for (char c : w)
        if (c != '0' && c != '1') throw ArgumentError(std::string(what) + " must consist of 0 and 1");
}

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

std::vector<Index> prefix_sums(const std::vector<std::uint8_t>& bits) {
    std::vector<Index> c(bits.size() + 1, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) c[i + 1] = c[i] + bits[i];
    return c;
}

std::vector<Index> ones_of(const std::vector<std::uint8_t>& bits) {
    std::vector<Index> out;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) out.push_back(static_cast<Index>(i));
    return out;
}

/// Membership of a positive difference in P; nullopt beyond a Window's reach.
std::optional<bool> p_has(const IntSet& P, Index d) {
    if (auto h = P.window_horizon(); h && d >= *h) return std::nullopt;
    return P.contains(d);
}

}  // namespace

// ---------------------------------------------------------------------------
// SymbolSeq
// ---------------------------------------------------------------------------

SymbolSeq::SymbolSeq(std::string prefix, Tail tail) : prefix_(std::move(prefix)), tail_(std::move(tail)) {
    check_bits(prefix_, "prefix");
    if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
        if (p->word.empty()) throw ArgumentError("periodic tail word must be non-empty");
        check_bits(p->word, "periodic tail word");
    }
}

SymbolSeq SymbolSeq::zero(std::string prefix) { return SymbolSeq(std::move(prefix), ZeroTail{}); }

SymbolSeq SymbolSeq::periodic(std::string prefix, std::string word) {
    return SymbolSeq(std::move(prefix), PeriodicTail{std::move(word)});
}

SymbolSeq SymbolSeq::with_support(std::string prefix, IntSet support, std::string label) {
    return SymbolSeq(std::move(prefix), SupportTail{std::move(support), std::move(label)});
}

SymbolSeq SymbolSeq::ones_at(const std::vector<Index>& positions) {
    std::string prefix;
    for (Index p : positions) {
        if (p < 0) throw ArgumentError("positions must be non-negative");
        if (static_cast<Index>(prefix.size()) <= p) prefix.resize(static_cast<std::size_t>(p) + 1, '0');
        prefix[static_cast<std::size_t>(p)] = '1';
    }
    return zero(std::move(prefix));
}

SymbolSeq SymbolSeq::parse(const std::string& text, Index horizon) {
    const auto bar = text.find('|');
    if (bar == std::string::npos) throw ArgumentError("sequence text needs '|' between prefix and tail: " + text);
    std::string prefix = text.substr(0, bar);
    const std::string tail = text.substr(bar + 1);
    if (tail == "zero") return zero(std::move(prefix));
    if (tail.rfind("per:", 0) == 0) return periodic(std::move(prefix), tail.substr(4));
    if (tail.rfind("supp:", 0) == 0) {
        const std::string dsl = tail.substr(5);
        return with_support(std::move(prefix), parse_set(dsl, horizon), dsl);
    }
    throw ArgumentError("unknown tail rule '" + tail + "' (expected zero, per:<word> or supp:<set>)");
}

std::string SymbolSeq::to_string() const {
    return std::visit(overloaded{[&](const ZeroTail&) { return prefix_ + "|zero"; },
                                 [&](const PeriodicTail& p) { return prefix_ + "|per:" + p.word; },
                                 [&](const SupportTail& s) { return prefix_ + "|supp:" + s.label; }},
                      tail_);
}

std::vector<std::uint8_t> SymbolSeq::bits(Index horizon) const {
    if (horizon < 0) throw ArgumentError("horizon must be non-negative");
    std::vector<std::uint8_t> out(static_cast<std::size_t>(horizon), 0);
    const Index plen = static_cast<Index>(prefix_.size());
    if (const auto* s = std::get_if<SupportTail>(&tail_); s && horizon > plen) out = s->support.materialize(horizon);
    for (Index i = 0; i < horizon; ++i) {
        if (i < plen) {
            out[i] = prefix_[i] == '1';
        } else if (const auto* p = std::get_if<PeriodicTail>(&tail_)) {
            out[i] = p->word[(i - plen) % static_cast<Index>(p->word.size())] == '1';
        }
    }
    return out;
}

std::uint8_t coord(const SymbolSeq& x, Index i) {
    if (i < 0) throw ArgumentError("coordinate index must be non-negative");
    const Index plen = static_cast<Index>(x.prefix().size());
    if (i < plen) return x.prefix()[i] == '1';
    return std::visit(overloaded{[](const ZeroTail&) -> std::uint8_t { return 0; },
                                 [&](const PeriodicTail& p) -> std::uint8_t {
                                     return p.word[(i - plen) % static_cast<Index>(p.word.size())] == '1';
                                 },
                                 [&](const SupportTail& s) -> std::uint8_t { return s.support.contains(i); }},
                      x.tail());
}

SymbolSeq seq_shift(const SymbolSeq& x, Index n) {
    if (n < 0) throw ArgumentError("shift count must be non-negative");
    if (n == 0) return x;
    const Index plen = static_cast<Index>(x.prefix().size());
    std::string prefix = n < plen ? x.prefix().substr(static_cast<std::size_t>(n)) : std::string();
    return std::visit(overloaded{[&](const ZeroTail&) { return SymbolSeq::zero(prefix); },
                                 [&](const PeriodicTail& p) {
                                     if (n <= plen) return SymbolSeq::periodic(prefix, p.word);
                                     const auto r = static_cast<std::size_t>((n - plen) % static_cast<Index>(p.word.size()));
                                     return SymbolSeq::periodic({}, p.word.substr(r) + p.word.substr(0, r));
                                 },
                                 [&](const SupportTail& s) {
                                     return SymbolSeq::with_support(prefix, shift(s.support, -n),
                                                                    "(" + s.label + ") - " + std::to_string(n));
                                 }},
                      x.tail());
}

std::optional<EventualPeriod> eventual_period(const SymbolSeq& x) {
    const Index plen = static_cast<Index>(x.prefix().size());
    if (std::holds_alternative<ZeroTail>(x.tail())) return EventualPeriod{plen, "0"};
    if (const auto* p = std::get_if<PeriodicTail>(&x.tail())) return EventualPeriod{plen, p->word};
    const auto& s = std::get<SupportTail>(x.tail());
    const auto* rep = s.support.as<PeriodicRep>();
    if (!rep) return std::nullopt;
    EventualPeriod ep{std::max(plen, rep->threshold), {}};
    for (Index j = 0; j < rep->modulus; ++j) ep.word += rep->base(ep.start + j) ? '1' : '0';
    return ep;
}

bool same_description(const SymbolSeq& x, const SymbolSeq& y) {
    if (x.prefix() != y.prefix() || x.tail().index() != y.tail().index()) return false;
    if (const auto* p = std::get_if<PeriodicTail>(&x.tail())) return p->word == std::get<PeriodicTail>(y.tail()).word;
    if (const auto* s = std::get_if<SupportTail>(&x.tail())) return s->label == std::get<SupportTail>(y.tail()).label;
    return true;
}

std::optional<bool> decide_equal(const SymbolSeq& x, const SymbolSeq& y) {
    if (same_description(x, y)) return true;
    const auto ex = eventual_period(x), ey = eventual_period(y);
    if (ex && ey) {
        const Index period = std::lcm<Index>(static_cast<Index>(ex->word.size()), static_cast<Index>(ey->word.size()));
        if (period <= kMaxExactPeriod) return !first_disagreement(x, y, std::max(ex->start, ey->start) + period);
    }
    try {
        if (first_disagreement(x, y, 4095)) return false;
    } catch (const HorizonError&) {
    }
    return std::nullopt;
}

std::optional<Index> first_disagreement(const SymbolSeq& x, const SymbolSeq& y, Index limit) {
    if (limit < 0) return std::nullopt;
    const auto bx = x.bits(limit + 1), by = y.bits(limit + 1);
    for (Index i = 0; i <= limit; ++i)
        if (bx[i] != by[i]) return i;
    return std::nullopt;
}

double seq_dist(const SymbolSeq& x, const SymbolSeq& y, Index m) {
    if (m < 0) throw ArgumentError("resolution must be non-negative");
    const auto k = first_disagreement(x, y, m);
    return k ? std::ldexp(1.0, static_cast<int>(-*k)) : 0.0;
}

// ---------------------------------------------------------------------------
// Subshift specifications
// ---------------------------------------------------------------------------

SubshiftSpec SubshiftSpec::full() { return SubshiftSpec(FullShift{}); }

SubshiftSpec SubshiftSpec::spacing(IntSet P, std::string label) {
    if (P.contains(0)) throw ArgumentError("spacing set must not contain 0");
    return SubshiftSpec(Spacing{std::move(P), std::move(label)});
}

SubshiftSpec SubshiftSpec::hereditary_mixing() { return SubshiftSpec(HereditaryMixing{}); }

SubshiftSpec SubshiftSpec::forbidden(std::vector<std::string> words) {
    for (const auto& w : words) {
        if (w.empty()) throw ArgumentError("forbidden words must be non-empty");
        check_bits(w, "forbidden word");
        if (static_cast<int>(w.size()) > kMaxForbiddenLength)
            throw ResourceLimit("forbidden words longer than " + std::to_string(kMaxForbiddenLength) + " are not supported");
    }
    return SubshiftSpec(ForbiddenWords{std::move(words)});
}

SubshiftSpec SubshiftSpec::parse(const std::string& text, Index horizon) {
    if (text == "full") return full();
    if (text == "hereditary-mixing") return hereditary_mixing();
    if (text.rfind("spacing:", 0) == 0) {
        const std::string dsl = text.substr(8);
        return spacing(parse_set(dsl, horizon), dsl);
    }
    if (text.rfind("forbidden:", 0) == 0) {
        std::vector<std::string> words;
        std::stringstream ss(text.substr(10));
        for (std::string w; std::getline(ss, w, ',');) words.push_back(w);
        return forbidden(std::move(words));
    }
    throw ArgumentError("unknown subshift '" + text +
                        "' (expected full, spacing:<set>, hereditary-mixing or forbidden:<words>)");
}

std::string SubshiftSpec::to_string() const {
    return std::visit(overloaded{[](const FullShift&) { return std::string("full"); },
                                 [](const Spacing& s) { return "spacing:" + s.label; },
                                 [](const HereditaryMixing&) { return std::string("hereditary-mixing"); },
                                 [](const ForbiddenWords& f) {
                                     std::string out = "forbidden:";
                                     for (std::size_t i = 0; i < f.words.size(); ++i) out += (i ? "," : "") + f.words[i];
                                     return out;
                                 }},
                      v_);
}

const char* to_string(Membership::Status s) {
    switch (s) {
        case Membership::Status::yes: return "yes";
        case Membership::Status::no: return "no";
        case Membership::Status::unknown: return "unknown";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace {

Membership yes(bool certified, std::string note) {
    Membership m;
    m.status = certified ? Membership::Status::yes : Membership::Status::unknown;
    m.certified = certified;
    m.note = std::move(note);
    return m;
}

Membership no(Index a, Index b, std::string note) {
    Membership m;
    m.status = Membership::Status::no;
    m.certified = true;
    m.witness = {a, b};
    m.note = std::move(note);
    return m;
}

/// Finds a pair of ones i < j with j < bound, i < first_limit and j - i
/// outside P. `undecided` is set when a difference lies beyond P's window.
std::optional<std::pair<Index, Index>> spacing_violation(const std::vector<std::uint8_t>& bits, const IntSet& P,
                                                          Index first_limit, bool& undecided) {
    const auto ones = ones_of(bits);
    const Index H = static_cast<Index>(bits.size());
    const bool few = ones.size() <= 4096;
    if (few) {
        for (std::size_t b = 0; b < ones.size(); ++b)
            for (std::size_t a = 0; a < b && ones[a] < first_limit; ++a) {
                auto in = p_has(P, ones[b] - ones[a]);
                if (!in) undecided = true;
                else if (!*in) return std::make_pair(ones[a], ones[b]);
            }
        return std::nullopt;
    }
    // Many ones: test each excluded difference d against the shifted sequence.
    std::optional<std::pair<Index, Index>> best;
    for (Index d = 1; d < H; ++d) {
        auto in = p_has(P, d);
        if (!in) {
            undecided = true;
            continue;
        }
        if (*in) continue;
        for (Index i = 0; i + d < H && i < first_limit; ++i) {
            if (bits[i] && bits[i + d]) {
                if (!best || i + d < best->second || (i + d == best->second && i < best->first)) best = {{i, i + d}};
                break;
            }
        }
    }
    return best;
}

Membership member_spacing(const Spacing& sp, const SymbolSeq& x, Index horizon) {
    const auto ep = eventual_period(x);
    bool undecided = false;
    if (ep && ep->word.find('1') == std::string::npos) {
        auto v = spacing_violation(x.bits(ep->start), sp.P, ep->start, undecided);
        if (v) return no(v->first, v->second, "pair distance outside P");
        if (!undecided) return yes(true, "finitely many ones, all distances in P");
    }
    if (ep && !undecided) {
        if (const auto* pr = sp.P.as<PeriodicRep>()) {
            const Index p = static_cast<Index>(ep->word.size());
            const Index period = std::lcm(p, pr->modulus);
            if (period <= kMaxExactPeriod) {
                // A pair (i, j) can be slid back by p while i stays past the
                // start, and j matters only modulo lcm(p, M) past P's threshold.
                const Index first_limit = ep->start + p;
                const Index bound = first_limit + pr->threshold + period + p;
                auto v = spacing_violation(x.bits(bound), sp.P, first_limit, undecided);
                if (v) return no(v->first, v->second, "pair distance outside P");
                return yes(true, "eventually periodic point against an eventually periodic P");
            }
        }
    }
    undecided = false;
    auto v = spacing_violation(x.bits(horizon), sp.P, horizon, undecided);
    if (v) return no(v->first, v->second, "pair distance outside P");
    return yes(false, "no violating pair below the horizon");
}

/// Smallest n >= 1 with 2^n > d.
Index window_level(Index d) { return std::max<Index>(1, std::bit_width(static_cast<std::uint64_t>(d))); }

Membership member_hereditary(const SymbolSeq& x, Index horizon) {
    const auto ep = eventual_period(x);
    const bool finite = ep && ep->word.find('1') == std::string::npos;
    const Index H = finite ? ep->start : horizon;
    const auto bits = x.bits(H);
    const auto c = prefix_sums(bits);
    for (Index i : ones_of(bits)) {
        for (Index n = 1; n < 63; ++n) {
            const Index len = Index{1} << n;
            if (!finite && len > horizon) break;
            const Index end = std::min(H, i + len);
            if (c[end] - c[i] > n) return no(i, len, "window of length 2^" + std::to_string(n) + " has too many ones");
            if (i + len >= H) break;  // longer windows see the same ones with a looser bound
        }
    }
    if (finite) return yes(true, "finitely many ones, every window checked");
    return yes(false, "no violating window below the horizon");
}

Membership member_forbidden(const ForbiddenWords& fw, const SymbolSeq& x, Index horizon) {
    const auto ep = eventual_period(x);
    Index longest = 0;
    for (const auto& w : fw.words) longest = std::max<Index>(longest, static_cast<Index>(w.size()));
    const bool exact = ep.has_value();
    const Index starts = exact ? ep->start + static_cast<Index>(ep->word.size()) : horizon;
    const Index H = exact ? starts + longest : horizon;
    const auto bits = x.bits(H);
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i) s[i] = bits[i] ? '1' : '0';
    std::optional<std::pair<Index, Index>> hit;
    for (const auto& w : fw.words) {
        const auto pos = s.find(w);
        if (pos != std::string::npos && static_cast<Index>(pos) < starts) {
            std::pair<Index, Index> cand{static_cast<Index>(pos), static_cast<Index>(w.size())};
            if (!hit || cand < *hit) hit = cand;
        }
    }
    if (hit) return no(hit->first, hit->second, "forbidden word occurs");
    return yes(exact, exact ? "eventually periodic point, every occurrence checked" : "no forbidden word below the horizon");
}

}  // namespace

Membership member(const SubshiftSpec& spec, const SymbolSeq& x, Index horizon) {
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    return std::visit(overloaded{[](const FullShift&) { return yes(true, "full shift"); },
                                 [&](const Spacing& s) { return member_spacing(s, x, horizon); },
                                 [&](const HereditaryMixing&) { return member_hereditary(x, horizon); },
                                 [&](const ForbiddenWords& f) { return member_forbidden(f, x, horizon); }},
                      spec.variant());
}

// ---------------------------------------------------------------------------
// Forbidden-word automaton
// ---------------------------------------------------------------------------

namespace {

/// States are the last m = (longest word - 1) symbols. A state is live when an
/// infinite admissible path leaves it.
class WordGraph {
public:
    explicit WordGraph(const ForbiddenWords& fw) : words_(fw.words) {
        for (const auto& w : words_) m_ = std::max<int>(m_, static_cast<int>(w.size()) - 1);
        const std::uint32_t n = 1u << m_;
        live_.assign(n, 0);
        for (std::uint32_t s = 0; s < n; ++s) live_[s] = clean(state_word(s));
        for (bool changed = true; changed;) {
            changed = false;
            for (std::uint32_t s = 0; s < n; ++s) {
                if (!live_[s]) continue;
                if (!live_[next(s, 0)] || !edge_ok(s, 0)) {
                    if (!live_[next(s, 1)] || !edge_ok(s, 1)) {
                        live_[s] = 0;
                        changed = true;
                    }
                }
            }
        }
    }

    int memory() const { return m_; }

    bool clean(const std::string& w) const {
        for (const auto& f : words_)
            if (w.find(f) != std::string::npos) return false;
        return true;
    }

    /// w occurs in some point: it is clean and can be continued forever.
    bool extendable(std::string w) const {
        if (!clean(w)) return false;
        if (static_cast<int>(w.size()) >= m_) return live_[encode(w.substr(w.size() - m_))];
        for (char b : {'0', '1'})
            if (extendable(w + b)) return true;
        return false;
    }

    /// Bits from state `w` (length >= m) along live edges until a state
    /// repeats: returns transient and cycle words.
    std::pair<std::string, std::string> continuation(const std::string& w) const {
        std::uint32_t s = encode(w.substr(w.size() - m_));
        std::vector<std::int64_t> seen(live_.size(), -1);
        std::string path;
        while (seen[s] < 0) {
            seen[s] = static_cast<std::int64_t>(path.size());
            int b = (live_[next(s, 0)] && edge_ok(s, 0)) ? 0 : 1;
            path += static_cast<char>('0' + b);
            s = next(s, b);
        }
        const auto r = static_cast<std::size_t>(seen[s]);
        return {path.substr(0, r), path.substr(r)};
    }

private:
    std::vector<std::string> words_;
    int m_ = 0;
    std::vector<std::uint8_t> live_;

    std::string state_word(std::uint32_t s) const {
        std::string w(static_cast<std::size_t>(m_), '0');
        for (int i = 0; i < m_; ++i) w[i] = (s >> (m_ - 1 - i)) & 1u ? '1' : '0';
        return w;
    }
    static std::uint32_t encode(const std::string& w) {
        std::uint32_t s = 0;
        for (char c : w) s = (s << 1) | static_cast<std::uint32_t>(c == '1');
        return s;
    }
    std::uint32_t next(std::uint32_t s, int b) const {
        if (m_ == 0) return 0;
        return ((s << 1) | static_cast<std::uint32_t>(b)) & ((1u << m_) - 1u);
    }
    bool edge_ok(std::uint32_t s, int b) const { return clean(state_word(s) + static_cast<char>('0' + b)); }
};

bool hereditary_word_ok(const SubshiftSpec& spec, const std::string& w) {
    std::vector<Index> ones;
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] == '1') ones.push_back(static_cast<Index>(i));
    if (const auto* sp = std::get_if<Spacing>(&spec.variant())) {
        for (std::size_t b = 0; b < ones.size(); ++b)
            for (std::size_t a = 0; a < b; ++a)
                if (!sp->P.contains(ones[b] - ones[a])) return false;
        return true;
    }
    if (std::holds_alternative<HereditaryMixing>(spec.variant())) {
        for (std::size_t a = 0; a < ones.size(); ++a)
            for (std::size_t b = a + 1; b < ones.size(); ++b)
                if (static_cast<Index>(b - a + 1) > window_level(ones[b] - ones[a])) return false;
        return true;
    }
    return true;
}

}  // namespace

bool admissible_word(const SubshiftSpec& spec, const std::string& w) {
    check_bits(w, "word");
    if (const auto* fw = std::get_if<ForbiddenWords>(&spec.variant())) return WordGraph(*fw).extendable(w);
    return hereditary_word_ok(spec, w);
}

std::vector<std::vector<std::string>> language(const SubshiftSpec& spec, int k) {
    if (k < 1) throw ArgumentError("word length bound must be >= 1");
    if (k > kMaxLanguageLength)
        throw ResourceLimit("language enumeration is limited to length " + std::to_string(kMaxLanguageLength));
    std::optional<WordGraph> graph;
    if (const auto* fw = std::get_if<ForbiddenWords>(&spec.variant())) graph.emplace(*fw);
    auto ok = [&](const std::string& w) { return graph ? graph->extendable(w) : hereditary_word_ok(spec, w); };

    std::vector<std::vector<std::string>> out;
    std::vector<std::string> level{""};
    for (int len = 1; len <= k; ++len) {
        std::vector<std::string> next;
        for (const auto& w : level)
            for (char b : {'0', '1'})
                if (ok(w + b)) next.push_back(w + b);
        std::sort(next.begin(), next.end());
        out.push_back(next);
        level = std::move(next);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Generation
// ---------------------------------------------------------------------------

SymbolSeq generate_point(const SubshiftSpec& spec, Strategy strategy, Index length, std::uint64_t seed) {
    if (length < 1) throw ArgumentError("length must be >= 1");
    std::mt19937_64 rng(seed);
    auto prefer_one = [&]() {
        switch (strategy) {
            case Strategy::greedy_max_ones: return true;
            case Strategy::random: return (rng() & 1u) != 0;
            case Strategy::zero: return false;
        }
        return false;
    };

    if (const auto* fw = std::get_if<ForbiddenWords>(&spec.variant())) {
        const WordGraph graph(*fw);
        std::string w;
        for (Index i = 0; i < length; ++i) {
            const char first = prefer_one() ? '1' : '0';
            const char second = first == '1' ? '0' : '1';
            if (graph.extendable(w + first)) w += first;
            else if (strategy != Strategy::zero && graph.extendable(w + second)) w += second;
            else throw ExtensionFailure("no admissible extension", w);
        }
        // Grow to a full automaton state before reading off a periodic tail.
        while (static_cast<int>(w.size()) < graph.memory()) w += graph.extendable(w + '0') ? '0' : '1';
        auto [transient, cycle] = graph.continuation(w);
        return SymbolSeq::periodic(w + transient, cycle);
    }

    std::string w(static_cast<std::size_t>(length), '0');
    std::vector<Index> ones;
    std::vector<Index> count(static_cast<std::size_t>(length) + 1, 0);  // ones in [0, i)
    auto fits = [&](Index i) {
        if (const auto* sp = std::get_if<Spacing>(&spec.variant())) {
            for (Index j : ones)
                if (!sp->P.contains(i - j)) return false;
            return true;
        }
        if (std::holds_alternative<HereditaryMixing>(spec.variant())) {
            for (Index j : ones)
                if (count[i] - count[j] + 1 > window_level(i - j)) return false;
        }
        return true;
    };
    for (Index i = 0; i < length; ++i) {
        const bool one = prefer_one() && fits(i);
        if (one) {
            w[i] = '1';
            ones.push_back(i);
        }
        count[i + 1] = count[i] + (one ? 1 : 0);
    }
    return SymbolSeq::zero(std::move(w));
}

SetVerdict is_weakly_mixing_spacing(const IntSet& P, Index horizon) { return is_thick(P, horizon); }

QnFamily build_Qn_family(const IntSet& P, Index n, Index horizon) {
    const auto* b = P.as<BlockRep>();
    if (!b || b->complemented || !b->flips.empty())
        throw ArgumentError("P needs a plain block rule to split it into thick halves");
    if (n < 0) throw ArgumentError("level must be non-negative");
    if (n > (Index{1} << 24)) throw ResourceLimit("level too large");
    const auto p_thick = is_thick(P, horizon);
    if (p_thick.status != SetVerdict::Status::certified) throw ArgumentError("thickness of P is not certified");

    QnFamily out;
    const Formula qs = b->start.subsample(1), ql = b->length.subsample(1);
    out.Q = IntSet::blocks(qs, ql);
    out.Q_complement = complement(out.Q);
    std::vector<Index> extra;
    for (Index v = 1; v <= n; ++v)
        if (P.contains(v) && !out.Q.contains(v)) extra.push_back(v);
    out.Qn = IntSet::blocks(qs, ql, false, extra);

    std::string label = "THICK(" + qs.to_string() + ", " + ql.to_string() + ")";
    if (!extra.empty()) {
        label += " | FIN{";
        for (std::size_t i = 0; i < extra.size(); ++i) label += (i ? "," : "") + std::to_string(extra[i]);
        label += "}";
    }
    out.spec = SubshiftSpec::spacing(out.Qn, label);
    out.q_thick = is_thick(out.Q, horizon);
    out.complement_thick = is_thick(out.Q_complement, horizon);
    out.qn_thick = is_thick(out.Qn, horizon);
    return out;
}

HereditaryCheck hereditary_closed_check(const SubshiftSpec& spec, const SymbolSeq& x, int trials, std::uint64_t seed,
                                        Index horizon) {
    if (trials < 1) throw ArgumentError("trials must be >= 1");
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    const auto bits = x.bits(horizon);
    std::mt19937_64 rng(seed);
    HereditaryCheck out;
    for (int t = 0; t < trials; ++t) {
        std::string y(bits.size(), '0');
        if (t > 0)
            for (std::size_t i = 0; i < bits.size(); ++i)
                if (bits[i] && (rng() & 1u)) y[i] = '1';
        auto point = SymbolSeq::zero(std::move(y));
        ++out.trials_run;
        if (member(spec, point, horizon).status != Membership::Status::yes) {
            out.pass = false;
            out.violator = std::move(point);
            return out;
        }
    }
    return out;
}

}  // namespace bpx
