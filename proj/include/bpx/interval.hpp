#pragma once
// Interval maps on [0, 1] and their symbolic coding against the partition
// {[0, 1/2), [1/2, 1]}. Piecewise-linear maps (tent included) are evaluated
// exactly on rationals; the logistic family only in floating point.

#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bpx/intset.hpp"
#include "bpx/proximal.hpp"
#include "bpx/shiftspace.hpp"

namespace bpx {

using Rational = boost::multiprecision::cpp_rational;

/// Largest orbit length verified in double precision.
inline constexpr Index kFloatHorizonCap = Index{1} << 11;

class IntervalMap {
public:
    enum class Kind { tent, logistic, piecewise_linear };
    using Breakpoint = std::pair<Rational, Rational>;

    static IntervalMap tent(double slope);
    static IntervalMap logistic(double r);
    /// Breakpoints must start at x = 0, end at x = 1, increase strictly in x, and stay in [0, 1].
    static IntervalMap piecewise_linear(const std::vector<std::pair<double, double>>& points);
    /// "tent:2", "logistic:3.9", "pl:0,0;1,0.5".
    static IntervalMap parse(const std::string& text);

    Kind kind() const { return kind_; }
    bool exact() const { return kind_ != Kind::logistic; }
    double parameter() const { return param_; }
    const std::vector<Breakpoint>& breakpoints() const { return points_; }

    double operator()(double x) const;
    /// Exact evaluation; WrongVariant for the logistic family.
    Rational operator()(const Rational& x) const;

    std::string to_string() const;

private:
    IntervalMap(Kind kind, double param, std::vector<std::pair<double, double>> fpoints);

    Kind kind_;
    double param_;
    std::vector<std::pair<double, double>> fpoints_;
    std::vector<Breakpoint> points_;
};

std::vector<double> orbit(const IntervalMap& f, double x0, Index n);
std::vector<Rational> orbit(const IntervalMap& f, const Rational& x0, Index n);

struct Itinerary {
    std::string word;          // symbol 1 iff the orbit point is >= 1/2
    std::vector<Index> ties;   // times at which the orbit sits exactly on 1/2
};

Itinerary itinerary(const IntervalMap& f, double x0, Index n);
Itinerary itinerary(const IntervalMap& f, const Rational& x0, Index n);

struct Cylinder {
    Rational lo;
    Rational hi;
    Rational point;  // interior representative, see encode_point
};

/// Points whose Tent(2) itinerary begins with w form [lo, hi] of width 2^-|w|.
/// The representative is the midpoint of the cylinder of w followed by `slack` zeros.
Cylinder encode_point(const std::string& w, Index slack = 1);

struct ScrambledCandidates {
    std::vector<CantorParameter> parameters;
    std::vector<SymbolSeq> sources;
    std::vector<Rational> points;
    Index prefix_length = 0;
};

/// m witness-family points coded through Tent(2); prefixes of the given length must differ.
ScrambledCandidates cantor_scrambled_candidates(std::size_t m, std::uint64_t seed,
                                                Index prefix_length = (Index{1} << 14) + 64);

struct IntervalPairParams {
    Index horizon = Index{1} << 14;  // logistic orbits are capped at kFloatHorizonCap
    // 2^-m for the symbolic resolutions m = 1, 2, 4.
    std::vector<Rational> eps_grid{Rational(1, 2), Rational(1, 4), Rational(1, 16)};
    double lambda = 0.95;
    std::vector<Index> schedule;  // empty: default for the horizon
};

/// Separation that counts toward refuting asymptoticity.
inline const Rational kSeparation{1, 4};

/// The pairwise Banach-proximal / non-asymptotic matrix under the metric |f^n x - f^n y|.
/// Tent(2) on dyadic points runs on integer numerators; other piecewise-linear maps on rationals.
ScrambledMatrix verify_scrambled_interval(const std::vector<Rational>& points, const IntervalMap& f,
                                          const IntervalPairParams& params = {});

struct DiamReport {
    std::vector<double> diam;                 // diam f^k[0,1], k = 0..n
    std::vector<std::pair<double, double>> image;
    bool exact = false;
    bool uniformly_proximal = false;          // last diameter below 1e-6
};

DiamReport diam_iterates(const IntervalMap& f, Index n);

}  // namespace bpx
