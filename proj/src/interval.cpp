#include "bpx/interval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>

#include "bpx/error.hpp"

namespace bpx {

namespace {

constexpr double kTolerance = 1e-12;
const Rational kHalf{1, 2};
using boost::multiprecision::cpp_int;

std::string shortest(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw ArgumentError("bad number '" + s + "' in map spec");
    return v;
}

double clamp_unit(double v) {
    if (v >= 0.0 && v <= 1.0) return v;
    if (v < 0.0 && v > -kTolerance) return 0.0;
    if (v > 1.0 && v < 1.0 + kTolerance) return 1.0;
    throw InvariantViolation("orbit left [0, 1]");
}

/// Common exponent K when f is Tent(2) and every point is a dyadic rational.
std::optional<unsigned> tent2_dyadic_exponent(const std::vector<Rational>& points, const IntervalMap& f) {
    if (f.kind() != IntervalMap::Kind::tent || f.parameter() != 2.0) return std::nullopt;
    unsigned K = 1;
    for (const auto& p : points) {
        const cpp_int& d = denominator(p);
        if ((d & (d - 1)) != 0) return std::nullopt;
        K = std::max(K, static_cast<unsigned>(msb(d)));
    }
    return K;
}

void check_unit(const Rational& x) {
    if (x < 0 || x > 1) throw ArgumentError("point must lie in [0, 1]");
}

template <class T>
T segment_value(const T& x, const T& x0, const T& y0, const T& x1, const T& y1) {
    return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

}  // namespace

IntervalMap::IntervalMap(Kind kind, double param, std::vector<std::pair<double, double>> fpoints)
    : kind_(kind), param_(param), fpoints_(std::move(fpoints)) {
    for (const auto& [x, y] : fpoints_) points_.emplace_back(Rational(x), Rational(y));
}

IntervalMap IntervalMap::tent(double slope) {
    if (!(slope > 0 && slope <= 2)) throw ArgumentError("tent slope must lie in (0, 2]");
    return IntervalMap(Kind::tent, slope, {{0.0, 0.0}, {0.5, slope / 2}, {1.0, 0.0}});
}

IntervalMap IntervalMap::logistic(double r) {
    if (!(r > 0 && r <= 4)) throw ArgumentError("logistic parameter must lie in (0, 4]");
    return IntervalMap(Kind::logistic, r, {});
}

IntervalMap IntervalMap::piecewise_linear(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 2) throw ArgumentError("piecewise-linear map needs at least two breakpoints");
    if (points.front().first != 0.0 || points.back().first != 1.0)
        throw ArgumentError("breakpoints must start at x = 0 and end at x = 1");
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto [x, y] = points[i];
        if (!std::isfinite(y) || y < 0 || y > 1) throw ArgumentError("breakpoint value outside [0, 1]");
        if (i > 0 && !(x > points[i - 1].first)) throw ArgumentError("breakpoints must increase strictly in x");
    }
    return IntervalMap(Kind::piecewise_linear, 0.0, points);
}

IntervalMap IntervalMap::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ArgumentError("map spec needs the form kind:params");
    const auto kind = text.substr(0, colon), rest = text.substr(colon + 1);
    if (kind == "tent") return tent(parse_double(rest));
    if (kind == "logistic") return logistic(parse_double(rest));
    if (kind != "pl") throw ArgumentError("unknown map kind '" + kind + "'");
    std::vector<std::pair<double, double>> pts;
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw ArgumentError("breakpoint '" + item + "' needs x,y");
        pts.emplace_back(parse_double(item.substr(0, comma)), parse_double(item.substr(comma + 1)));
    }
    return piecewise_linear(pts);
}

double IntervalMap::operator()(double x) const {
    if (kind_ == Kind::logistic) return param_ * x * (1.0 - x);
    if (kind_ == Kind::tent) return param_ * std::min(x, 1.0 - x);
    auto it = std::upper_bound(fpoints_.begin(), fpoints_.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    if (it == fpoints_.begin()) ++it;
    if (it == fpoints_.end()) --it;
    const auto& a = *(it - 1);
    const auto& b = *it;
    return segment_value(x, a.first, a.second, b.first, b.second);
}

Rational IntervalMap::operator()(const Rational& x) const {
    if (kind_ == Kind::logistic) throw WrongVariant("logistic maps have no exact evaluation");
    auto it = std::upper_bound(points_.begin(), points_.end(), x,
                               [](const Rational& v, const Breakpoint& p) { return v < p.first; });
    if (it == points_.begin()) ++it;
    if (it == points_.end()) --it;
    const auto& a = *(it - 1);
    const auto& b = *it;
    return segment_value(x, a.first, a.second, b.first, b.second);
}

std::string IntervalMap::to_string() const {
    switch (kind_) {
        case Kind::tent: return "tent:" + shortest(param_);
        case Kind::logistic: return "logistic:" + shortest(param_);
        case Kind::piecewise_linear: break;
    }
    std::string out = "pl:";
    for (std::size_t i = 0; i < fpoints_.size(); ++i) {
        if (i) out += ';';
        out += shortest(fpoints_[i].first) + "," + shortest(fpoints_[i].second);
    }
    return out;
}

std::vector<double> orbit(const IntervalMap& f, double x0, Index n) {
    if (!(x0 >= 0 && x0 <= 1)) throw ArgumentError("point must lie in [0, 1]");
    if (n < 0) throw ArgumentError("orbit length must be >= 0");
    std::vector<double> out{x0};
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (Index i = 0; i < n; ++i) out.push_back(clamp_unit(f(out.back())));
    return out;
}

std::vector<Rational> orbit(const IntervalMap& f, const Rational& x0, Index n) {
    check_unit(x0);
    if (n < 0) throw ArgumentError("orbit length must be >= 0");
    std::vector<Rational> out{x0};
    out.reserve(static_cast<std::size_t>(n) + 1);
    for (Index i = 0; i < n; ++i) out.push_back(f(out.back()));
    return out;
}

Itinerary itinerary(const IntervalMap& f, double x0, Index n) {
    Itinerary it;
    if (n <= 0) return it;
    const auto pts = orbit(f, x0, n - 1);
    for (Index i = 0; i < n; ++i) {
        it.word += pts[i] >= 0.5 ? '1' : '0';
        if (pts[i] == 0.5) it.ties.push_back(i);
    }
    return it;
}

Itinerary itinerary(const IntervalMap& f, const Rational& x0, Index n) {
    Itinerary it;
    if (n <= 0) return it;
    const auto pts = orbit(f, x0, n - 1);
    for (Index i = 0; i < n; ++i) {
        it.word += pts[i] >= kHalf ? '1' : '0';
        if (pts[i] == kHalf) it.ties.push_back(i);
    }
    return it;
}

Cylinder encode_point(const std::string& w, Index slack) {
    if (w.empty()) throw ArgumentError("word must be non-empty");
    if (slack < 0) throw ArgumentError("slack must be >= 0");
    // Pull [0, 1] back through the inverse branches y/2 and 1 - y/2, keeping
    // numerators over 2^k so no normalization happens along the way.
    auto pull = [](const std::string& word) {
        cpp_int lo = 0, hi = 1, scale = 1;
        for (auto c = word.rbegin(); c != word.rend(); ++c) {
            scale <<= 1;
            if (*c == '1') {
                const cpp_int nlo = scale - hi;
                hi = scale - lo;
                lo = nlo;
            } else if (*c != '0') {
                throw ArgumentError("word must consist of 0 and 1");
            }
        }
        return std::make_pair(Rational(lo, scale), Rational(hi, scale));
    };
    const auto [lo, hi] = pull(w);
    const auto [plo, phi] = pull(w + std::string(static_cast<std::size_t>(slack), '0'));
    return {lo, hi, (plo + phi) / 2};
}

ScrambledCandidates cantor_scrambled_candidates(std::size_t m, std::uint64_t seed, Index prefix_length) {
    if (m < 2) throw ArgumentError("need at least two candidates");
    if (prefix_length < 1) throw ArgumentError("prefix length must be >= 1");
    ScrambledCandidates out;
    out.prefix_length = prefix_length;
    out.parameters = witness_parameters(m, seed);
    std::set<std::string> seen;
    for (const auto& c : out.parameters) {
        out.sources.push_back(witness_point(c));
        const auto bits = out.sources.back().bits(prefix_length);
        std::string w(bits.size(), '0');
        for (std::size_t i = 0; i < bits.size(); ++i) w[i] = bits[i] ? '1' : '0';
        if (!seen.insert(w).second) throw ArgumentError("prefix length insufficient to separate parameters");
        out.points.push_back(encode_point(w).point);
    }
    return out;
}

ScrambledMatrix verify_scrambled_interval(const std::vector<Rational>& points, const IntervalMap& f,
                                          const IntervalPairParams& params) {
    if (points.size() < 2) throw ArgumentError("need at least two points");
    if (params.horizon < 1) throw ArgumentError("horizon must be >= 1");
    if (params.eps_grid.empty()) throw ArgumentError("epsilon grid must be non-empty");
    for (const auto& p : points) check_unit(p);
    if (!f.exact() && params.horizon > kFloatHorizonCap)
        throw HorizonError("floating-point orbits are only trusted up to 2^11 steps");
    const auto schedule = params.schedule.empty() ? default_schedule(params.horizon) : params.schedule;
    const Index H = params.horizon;

    const std::size_t P = points.size(), G = params.eps_grid.size();
    std::vector<std::vector<std::vector<std::uint8_t>>> close(
        P * P, std::vector<std::vector<std::uint8_t>>(G, std::vector<std::uint8_t>(static_cast<std::size_t>(H), 0)));
    std::vector<std::vector<Index>> separations(P * P);
    auto record = [&](std::size_t i, std::size_t j, Index n, auto&& below, bool separated) {
        for (std::size_t g = 0; g < G; ++g) close[i * P + j][g][n] = below(g);
        if (separated) separations[i * P + j].push_back(n);
    };

    // All orbits advance in lockstep so only the current iterate of each point is held.
    if (const auto K = tent2_dyadic_exponent(points, f)) {
        // Tent(2) on N / 2^K stays on the same grid: N -> 2N or 2(2^K - N).
        const cpp_int one = cpp_int(1) << *K, half = cpp_int(1) << (*K - 1);
        std::vector<cpp_int> cur;
        for (const auto& p : points) cur.push_back(numerator(p) * (one / denominator(p)));
        std::vector<cpp_int> bound;
        for (const auto& eps : params.eps_grid) bound.push_back(numerator(eps) << *K);
        for (Index n = 0; n < H; ++n) {
            for (std::size_t i = 0; i < P; ++i)
                for (std::size_t j = i + 1; j < P; ++j) {
                    const cpp_int d = abs(cur[i] - cur[j]);
                    record(i, j, n, [&](std::size_t g) { return d * denominator(params.eps_grid[g]) < bound[g]; },
                           4 * d >= one);
                }
            for (auto& v : cur) v = v < half ? cpp_int(2 * v) : cpp_int(2 * (one - v));
        }
    } else if (f.exact()) {
        std::vector<Rational> cur(points);
        for (Index n = 0; n < H; ++n) {
            for (std::size_t i = 0; i < P; ++i)
                for (std::size_t j = i + 1; j < P; ++j) {
                    const Rational d = abs(cur[i] - cur[j]);
                    record(i, j, n, [&](std::size_t g) { return d < params.eps_grid[g]; }, d >= kSeparation);
                }
            for (auto& v : cur) v = f(v);
        }
    } else {
        std::vector<double> cur, eps;
        for (const auto& p : points) cur.push_back(p.convert_to<double>());
        for (const auto& e : params.eps_grid) eps.push_back(e.convert_to<double>());
        for (Index n = 0; n < H; ++n) {
            for (std::size_t i = 0; i < P; ++i)
                for (std::size_t j = i + 1; j < P; ++j) {
                    const double d = std::abs(cur[i] - cur[j]);
                    record(i, j, n, [&](std::size_t g) { return d < eps[g]; }, d >= 0.25);
                }
            for (auto& v : cur) v = clamp_unit(f(v));
        }
    }

    ScrambledMatrix out;
    for (std::size_t i = 0; i < P; ++i)
        for (std::size_t j = i + 1; j < P; ++j) {
            ScrambledEntry e{i, j, false, Verdict::certified, Verdict::certified, {}};
            if (points[i] == points[j]) {
                e.reason = "asymptotic pair not refuted";
                out.entries.push_back(std::move(e));
                continue;
            }
            const auto& bits = close[i * P + j];
            const auto& seps = separations[i * P + j];
            e.banach = Verdict::empirical_pass;
            std::string evidence;
            for (std::size_t g = 0; g < G; ++g) {
                const double ratio = estimate_from_bits(bits[g], schedule).largest().min_ratio();
                if (ratio < params.lambda) {
                    e.banach = Verdict::empirical_fail;
                    evidence = "eps " + params.eps_grid[g].str() + ": min-window ratio " + shortest(ratio) + " < " +
                               shortest(params.lambda);
                    break;
                }
            }
            // Disagreements of sparse sources recur on a logarithmic time scale, so the
            // latest separation only has to clear sqrt(H).
            const bool recurring = seps.size() >= 2 && seps.back() * seps.back() >= H;
            e.asymptotic = recurring ? Verdict::refuted : Verdict::empirical_pass;

            if (!passes(e.banach)) e.reason = "not Banach proximal (" + evidence + ")";
            else if (e.asymptotic != Verdict::refuted) e.reason = "asymptotic pair not refuted";
            else e.qualifies = true;
            out.qualifying += e.qualifies;
            out.entries.push_back(std::move(e));
        }
    out.scrambled = out.qualifying == out.entries.size();
    return out;
}

DiamReport diam_iterates(const IntervalMap& f, Index n) {
    if (n < 0) throw ArgumentError("iteration count must be >= 0");
    DiamReport out;
    out.exact = f.exact();
    if (f.exact()) {
        Rational lo = 0, hi = 1;
        for (Index k = 0;; ++k) {
            out.diam.push_back((hi - lo).convert_to<double>());
            out.image.emplace_back(lo.convert_to<double>(), hi.convert_to<double>());
            if (k == n) break;
            // A continuous piecewise-linear image of [lo, hi] is spanned by its endpoints and interior breakpoints.
            Rational nlo = f(lo), nhi = nlo;
            auto widen = [&](const Rational& v) {
                nlo = std::min(nlo, v);
                nhi = std::max(nhi, v);
            };
            widen(f(hi));
            for (const auto& [x, y] : f.breakpoints())
                if (x > lo && x < hi) widen(y);
            lo = nlo;
            hi = nhi;
        }
    } else {
        double lo = 0, hi = 1;
        for (Index k = 0;; ++k) {
            out.diam.push_back(hi - lo);
            out.image.emplace_back(lo, hi);
            if (k == n) break;
            double nlo = std::min(f(lo), f(hi)), nhi = std::max(f(lo), f(hi));
            if (lo < 0.5 && hi > 0.5) nhi = std::max(nhi, f(0.5));
            lo = nlo;
            hi = nhi;
        }
    }
    out.uniformly_proximal = out.diam.back() < 1e-6;
    return out;
}

}  // namespace bpx
