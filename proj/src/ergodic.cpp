#include "bpx/ergodic.hpp"

#include <algorithm>

#include "bpx/error.hpp"

namespace bpx {

namespace {

constexpr Index kMaxWordLength = 24;

std::string bit_word(const std::vector<std::uint8_t>& bits, Index from, Index len) {
    std::string w(static_cast<std::size_t>(len), '0');
    for (Index i = 0; i < len; ++i) w[i] = bits[from + i] ? '1' : '0';
    return w;
}

void check_word(const std::string& u) {
    if (u.empty()) throw ArgumentError("word must be non-empty");
    for (char c : u)
        if (c != '0' && c != '1') throw ArgumentError("word must consist of 0 and 1");
}

}  // namespace

IntSet visitation_set(const SymbolSeq& x, const std::string& u, Index horizon) {
    check_word(u);
    if (horizon < 1) throw ArgumentError("horizon must be >= 1");
    const Index L = static_cast<Index>(u.size());
    const auto bits = x.bits(horizon + L - 1);
    std::vector<std::uint8_t> out(static_cast<std::size_t>(horizon), 0);
    for (Index n = 0; n < horizon; ++n) {
        bool hit = true;
        for (Index i = 0; i < L && hit; ++i) hit = (bits[n + i] != 0) == (u[i] == '1');
        out[n] = hit;
    }
    return IntSet::window(std::move(out));
}

double EmpiricalMeasure::freq(const std::string& w) const {
    auto it = counts.find(w);
    if (it == counts.end() || total == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(total);
}

EmpiricalMeasure empirical_measure(const SymbolSeq& x, Index a, Index b, Index L) {
    if (L < 1) throw ArgumentError("word length must be >= 1");
    if (a < 0 || b - a <= L) throw ArgumentError("window must be longer than the word length");
    const auto bits = x.bits(b);
    EmpiricalMeasure m{a, b, L, {}, b - a - L + 1};
    for (Index n = a; n + L <= b; ++n) ++m.counts[bit_word(bits, n, L)];
    return m;
}

SupportEstimate support_estimate(const SymbolSeq& x, Index L, Index horizon, double theta,
                                 const std::vector<Index>& schedule) {
    if (L < 1) throw ArgumentError("word length must be >= 1");
    if (L > kMaxWordLength) throw ResourceLimit("word census limited to length 24");
    if (!(theta > 0 && theta <= 1)) throw ArgumentError("theta must lie in (0, 1]");
    SupportEstimate out;
    out.word_length = L;
    out.theta = theta;
    out.horizon = horizon;
    out.schedule = schedule.empty() ? default_schedule(horizon) : schedule;

    const auto bits = x.bits(horizon + L - 1);
    std::map<std::string, std::vector<std::uint8_t>> visits;
    for (Index n = 0; n < horizon; ++n) {
        auto& v = visits[bit_word(bits, n, L)];
        if (v.empty()) v.assign(static_cast<std::size_t>(horizon), 0);
        v[n] = 1;
    }
    for (const auto& [word, v] : visits) {
        const double ratio = estimate_from_bits(v, out.schedule).upper_banach;
        out.ratios[word] = ratio;
        if (ratio >= theta) out.surviving.push_back(word);
    }
    return out;
}

StrongProximalEvidence strongly_proximal_evidence(const SubshiftSpec& spec, int samples, std::uint64_t seed,
                                                  const StrongProximalParams& params) {
    if (samples < 1) throw ArgumentError("samples must be >= 1");
    StrongProximalEvidence out;
    const Index reach = std::max(params.horizon, params.pairs.horizon) + 64;
    std::vector<SymbolSeq> points;
    for (int s = 0; s < samples; ++s) {
        points.push_back(generate_point(spec, Strategy::random, reach, seed + static_cast<std::uint64_t>(s)));
        auto est = support_estimate(points.back(), params.word_length, params.horizon, params.theta, params.schedule);
        if (!est.singleton_zero() && out.pass) {
            out.pass = false;
            // Report the shortest offending word: "1" itself when it already survives.
            const auto single = support_estimate(points.back(), 1, params.horizon, params.theta, params.schedule);
            if (std::find(single.surviving.begin(), single.surviving.end(), "1") != single.surviving.end()) {
                out.witness = "1";
            } else {
                for (const auto& w : est.surviving)
                    if (w.find('1') != std::string::npos) {
                        out.witness = w;
                        break;
                    }
            }
            if (!out.witness) out.witness = std::string(static_cast<std::size_t>(params.word_length), '0') + " missing";
        }
        out.estimates.push_back(std::move(est));
    }
    if (!out.pass) return out;
    // Spot check: every pair of sampled points should be Banach proximal.
    for (int i = 0; i + 1 < samples && out.pairs_checked < params.pair_checks; ++i) {
        ++out.pairs_checked;
        if (passes(classify_pair(points[i], points[i + 1], params.pairs).banach.status)) ++out.pairs_passed;
    }
    if (out.pairs_passed != out.pairs_checked) {
        out.pass = false;
        out.witness = "sampled pair not Banach proximal";
    }
    return out;
}

RecurrenceReport recurrence_pld(const SymbolSeq& x, const std::string& u, Index horizon,
                                const std::vector<Index>& schedule) {
    const auto visits = visitation_set(x, u, horizon);
    const auto rep = estimate_densities(visits, horizon, schedule.empty() ? default_schedule(horizon) : schedule);
    RecurrenceReport out;
    out.profile = rep.profile;
    out.estimate = rep.largest().min_ratio();
    // Positive when the two largest lengths agree on a non-zero floor.
    const auto n = out.profile.size();
    const double prev = n >= 2 ? out.profile[n - 2].min_ratio() : out.estimate;
    out.positive = out.estimate > 0 && prev > 0 && std::abs(prev - out.estimate) <= 0.1 * prev + 1e-12;
    return out;
}

const char* to_string(FixSupportResult::Status s) {
    switch (s) {
        case FixSupportResult::Status::vacuous: return "vacuous";
        case FixSupportResult::Status::pass: return "pass";
        case FixSupportResult::Status::fail: return "fail";
    }
    return "?";
}

FixSupportResult fix_support_check(const SymbolSeq& x, Index n, const FixSupportParams& params) {
    if (n < 1) throw ArgumentError("power must be >= 1");
    FixSupportResult out;
    out.banach = classify_pair(x, seq_shift(x, n), params.pairs).banach.status;
    if (!passes(out.banach)) return out;
    const Index L = std::max(params.word_length, 2 * n);
    const auto est = support_estimate(x, L, params.horizon, params.theta);
    out.surviving = est.surviving;
    out.status = FixSupportResult::Status::pass;
    for (const auto& w : est.surviving) {
        bool periodic = true;
        for (std::size_t i = 0; i + static_cast<std::size_t>(n) < w.size() && periodic; ++i)
            periodic = w[i] == w[i + static_cast<std::size_t>(n)];
        if (!periodic) {
            out.status = FixSupportResult::Status::fail;
            out.witness = w;
            break;
        }
    }
    return out;
}

}  // namespace bpx
