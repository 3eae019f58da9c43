#pragma once
// Subsets of the non-negative integers, with exact density calculus where the
// representation allows it and window-sweep estimation everywhere else.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace bpx {

using Index = std::int64_t;

// ---------------------------------------------------------------------------
// Rule ingredients
// ---------------------------------------------------------------------------

/// value(n) = coef * ratio^n + slope * n + offset, for n >= 0.
///
/// With coef == 0 (or ratio == 1) this is an affine rule; with slope == 0 it is
/// a geometric one. Sums of the two appear when blocks are re-indexed.
struct Formula {
    Index coef = 0;
    Index ratio = 1;
    Index slope = 0;
    Index offset = 0;

    static Formula affine(Index offset, Index slope) { return {0, 1, slope, offset}; }
    static Formula geometric(Index coef, Index ratio, Index offset = 0) { return {coef, ratio, 0, offset}; }

    /// nullopt when the value leaves the 63-bit range.
    std::optional<Index> at(Index n) const;
    /// value(2n + parity), rewritten as a Formula in n.
    Formula subsample(Index parity) const;
    std::string to_string() const;

    friend bool operator==(const Formula&, const Formula&) = default;
};

/// Eventual behaviour of c_1 r_1^n + ... + slope n + constant.
struct Trend {
    enum class Kind { plus_infinity, minus_infinity, constant };
    Kind kind = Kind::constant;
    Index value = 0;  // meaningful for constant
};

/// Trend of start(n+1) - start(n) - len(n) - 1, the number of non-members
/// strictly between block n and block n+1.
Trend gap_trend(const Formula& start, const Formula& len);
Trend formula_trend(const Formula& f);

/// A point c of the Cantor set {0,1}^N: an explicit head followed by a
/// constant or seeded pseudo-random tail.
struct CantorParameter {
    enum class Tail { zeros, ones, random };
    std::string head;
    Tail tail = Tail::zeros;
    std::uint64_t seed = 0;

    bool bit(std::size_t k) const;
    /// True when bit(k) follows from the head or a constant tail.
    bool determined(std::size_t k) const { return k < head.size() || tail != Tail::random; }
    std::string to_string() const;

    friend bool operator==(const CantorParameter&, const CantorParameter&) = default;
};

/// First coordinate k at which two parameters provably differ.
std::optional<std::size_t> certified_difference(const CantorParameter& a, const CantorParameter& b);

/// Triangular repetition coding: rho enumerates 0; 0,1; 0,1,2; ...
std::size_t repetition_index(std::uint64_t j);
/// Every j with repetition_index(j) == k, in increasing order (count of them).
std::vector<std::uint64_t> repetition_positions(std::size_t k, std::size_t count);

/// Keeps generator index j iff c_{rho(j)} == 1.
struct RepetitionFilter {
    CantorParameter parameter;
    bool keep(std::uint64_t j) const { return parameter.bit(repetition_index(j)); }
    friend bool operator==(const RepetitionFilter&, const RepetitionFilter&) = default;
};

enum class Growth { geometric, polynomial };

/// Strictly increasing element rule a(n), n >= 0:
///   geometric:  scale * param^n + offset   (param = ratio >= 2)
///   polynomial: scale * n^param + offset   (param = degree >= 1)
/// An optional filter drops some indices without changing the growth class.
struct GeneratorRule {
    Growth growth = Growth::geometric;
    Index scale = 1;
    Index param = 2;
    Index offset = 0;
    std::optional<RepetitionFilter> filter;

    std::optional<Index> element(Index n) const;
    /// Index n with element(n) == v ignoring the filter, if any.
    std::optional<Index> index_of(Index v) const;
    bool contains(Index v) const;
    /// Window counts of this rule are O(log L) or O(L^(1/d)) with d >= 2.
    bool certifies_density_zero() const { return growth == Growth::geometric || param >= 2; }
    std::string to_string() const;

    friend bool operator==(const GeneratorRule&, const GeneratorRule&) = default;
};

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

/// Explicit membership bits over [0, horizon).
struct WindowRep {
    std::vector<std::uint8_t> bits;
    Index horizon() const { return static_cast<Index>(bits.size()); }
};

/// n >= threshold: member iff n mod modulus is a residue. Below the threshold
/// the residue rule is patched by the `added` / `removed` exception lists.
struct PeriodicRep {
    Index threshold = 0;
    Index modulus = 1;
    std::vector<Index> residues;  // sorted, each < modulus
    std::vector<Index> added;     // sorted, < threshold, residue rule says no
    std::vector<Index> removed;   // sorted, < threshold, residue rule says yes

    bool base(Index n) const;
    bool finite() const { return residues.empty(); }
    bool cofinite() const { return static_cast<Index>(residues.size()) == modulus; }
};

/// Union of blocks [start(n), start(n) + len(n)], optionally complemented,
/// with a finite set of membership flips.
struct BlockRep {
    Formula start;
    Formula length;
    bool complemented = false;
    std::vector<Index> flips;  // sorted
};

/// Union of generator rules, optionally complemented, with finite flips.
struct SparseRep {
    std::vector<GeneratorRule> rules;
    bool complemented = false;
    std::vector<Index> flips;  // sorted
};

enum class SetKind { window, periodic, blocks, sparse };

class IntSet {
public:
    using Rep = std::variant<WindowRep, PeriodicRep, BlockRep, SparseRep>;

    // Validating constructors; each throws ArgumentError on a broken invariant.
    static IntSet window(std::vector<std::uint8_t> bits);
    static IntSet window_of(Index horizon, const std::vector<Index>& elements);
    static IntSet periodic(Index threshold, Index modulus, std::vector<Index> residues,
                           std::vector<Index> added = {}, std::vector<Index> removed = {});
    static IntSet progression(Index first, Index step);
    static IntSet finite(std::vector<Index> elements);
    static IntSet all();
    static IntSet empty();
    static IntSet blocks(Formula start, Formula length, bool complemented = false,
                         std::vector<Index> flips = {});
    static IntSet sparse(std::vector<GeneratorRule> rules, bool complemented = false,
                         std::vector<Index> flips = {});

    SetKind kind() const;
    const Rep& rep() const { return rep_; }
    template <class T> const T* as() const { return std::get_if<T>(&rep_); }

    /// Membership; for Window sets n must lie below the horizon.
    bool contains(Index n) const;
    /// Membership bits over [0, horizon); Window sets must cover the horizon.
    std::vector<std::uint8_t> materialize(Index horizon) const;
    std::vector<Index> elements_below(Index horizon) const;
    /// Horizon of a Window set, nullopt for rule-based sets.
    std::optional<Index> window_horizon() const;
    std::string describe() const;

private:
    explicit IntSet(Rep r) : rep_(std::move(r)) {}
    Rep rep_;
};

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

/// Extreme window counts among all windows [a, a+L) inside the horizon.
struct LengthProfile {
    Index length = 0;
    Index min_count = 0;
    Index max_count = 0;
    Index argmin = 0;
    Index argmax = 0;
    double min_ratio() const { return static_cast<double>(min_count) / static_cast<double>(length); }
    double max_ratio() const { return static_cast<double>(max_count) / static_cast<double>(length); }
};

struct DensityReport {
    double lower_density = 0;
    double upper_density = 0;
    double lower_banach = 0;
    double upper_banach = 0;
    bool exact_lower_density = false;
    bool exact_upper_density = false;
    bool exact_lower_banach = false;
    bool exact_upper_banach = false;
    Index horizon = 0;  // 0 for exact reports
    std::vector<Index> schedule;
    std::vector<LengthProfile> profile;  // one per schedule entry

    bool exact() const {
        return exact_lower_density && exact_upper_density && exact_lower_banach && exact_upper_banach;
    }
    const LengthProfile* at_length(Index L) const;
    const LengthProfile& largest() const { return profile.back(); }
};

/// 2^4, 2^5, ..., 2^(floor(log2 H) - 2); a single power of two for tiny H.
std::vector<Index> default_schedule(Index horizon);

/// lower_banach <= lower_density <= upper_density <= upper_banach, all in [0,1].
bool chain_holds(const DensityReport& r);
/// For every L with 2L also scheduled: max ratio does not grow, min does not shrink.
bool doubling_monotone(const DensityReport& r);
/// Number of reports checked by the library since process start.
std::uint64_t audited_reports();

DensityReport exact_density(const IntSet& s);
DensityReport estimate_densities(const IntSet& s, Index horizon, const std::vector<Index>& schedule);
DensityReport estimate_densities(const IntSet& s, Index horizon);
/// Same sweep over already materialized bits.
DensityReport estimate_from_bits(const std::vector<std::uint8_t>& bits, const std::vector<Index>& schedule);

// ---------------------------------------------------------------------------
// Algebra
// ---------------------------------------------------------------------------

enum class SetOp { shift, complement, intersect, unite };

inline constexpr Index kDefaultAlgebraHorizon = Index{1} << 14;

IntSet shift(const IntSet& s, Index n);
IntSet complement(const IntSet& s);
/// Rule-based operands that cannot be combined exactly fall back to a Window
/// over `horizon`; Window operands must share their horizon.
IntSet intersect(const IntSet& a, const IntSet& b, Index horizon = kDefaultAlgebraHorizon);
IntSet unite(const IntSet& a, const IntSet& b, Index horizon = kDefaultAlgebraHorizon);
IntSet set_algebra(SetOp op, const IntSet& a, const IntSet* b = nullptr, Index amount = 0,
                   Index horizon = kDefaultAlgebraHorizon);

// ---------------------------------------------------------------------------
// Combinatorial verdicts
// ---------------------------------------------------------------------------

struct SetVerdict {
    enum class Status { certified, refuted, empirical };
    Status status = Status::empirical;
    /// certified syndetic: gap bound; refuted syndetic: witness gap;
    /// refuted thick: run-length bound; empirical: observed statistic.
    Index value = 0;
    std::string note;
};

const char* to_string(SetVerdict::Status s);

/// Gap convention: the smallest N such that every window of length N inside
/// the scanned range meets the set (first element + 1 counts as a gap).
SetVerdict is_syndetic(const IntSet& s, Index horizon);
SetVerdict is_thick(const IntSet& s, Index horizon);

struct BdOneVerdict {
    enum class Status { certified_one, certified_not_one, unknown };
    Status status = Status::unknown;
    double value = 0;  // exact Banach density for certified_not_one
    std::string note;
};

const char* to_string(BdOneVerdict::Status s);

BdOneVerdict certify_bd_one(const IntSet& s);

/// Longest run of consecutive members and largest gap within [0, horizon).
Index longest_run(const std::vector<std::uint8_t>& bits);
Index max_gap(const std::vector<std::uint8_t>& bits);

}  // namespace bpx
