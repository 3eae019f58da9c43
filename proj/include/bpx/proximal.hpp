#pragma once
// Closeness sets of pairs of sequences under the shift and a finite-horizon
// classification into asymptotic / proximal / syndetically proximal /
// Banach proximal.

#include <optional>
#include <string>
#include <vector>

#include "bpx/intset.hpp"
#include "bpx/shiftspace.hpp"

namespace bpx {

/// Certified and refuted are proofs from the tail rules; the empirical
/// outcomes are statements about the scanned horizon only.
enum class Verdict { certified, empirical_pass, empirical_fail, refuted };

const char* to_string(Verdict v);
inline bool passes(Verdict v) { return v == Verdict::certified || v == Verdict::empirical_pass; }

struct VerdictRecord {
    Verdict status = Verdict::empirical_fail;
    double statistic = 0;  // the number the threshold was applied to
    std::optional<Index> witness;
    std::string evidence;
};

struct PairParams {
    std::vector<Index> grid{1, 2, 4};  // resolutions m, epsilon = 2^-m
    Index horizon = Index{1} << 14;
    double lambda = 0.99;
    std::vector<Index> schedule;  // empty: default_schedule(horizon)
};

struct PairProfile {
    std::vector<Index> grid;
    Index horizon = 0;
    double lambda = 0;
    std::vector<Index> schedule;
    std::vector<IntSet> closeness;         // Window over [0, horizon), one per grid entry
    std::vector<DensityReport> densities;  // one per grid entry
    /// Per grid entry: BD-one certificate for a subset of the closeness set,
    /// when the tail rules provide one.
    std::vector<std::optional<BdOneVerdict>> certificates;
    VerdictRecord asymptotic;
    VerdictRecord proximal;
    VerdictRecord syndetic;
    VerdictRecord banach;
};

/// {n < horizon : x and y agree on [n, n+m]}; coordinates up to horizon + m are read.
IntSet closeness_set(const SymbolSeq& x, const SymbolSeq& y, Index m, Index horizon);

PairProfile classify_pair(const SymbolSeq& x, const SymbolSeq& y, const PairParams& params = {});

struct PowerReport {
    Index power = 1;
    VerdictRecord banach_T;
    VerdictRecord banach_Tk;
    bool agree = false;
};

/// Banach verdicts of (x, y) under the shift and under its k-th power.
PowerReport power_consistency(const SymbolSeq& x, const SymbolSeq& y, Index k, const PairParams& params = {});

struct DiagonalSupport {
    bool pass = true;
    std::optional<std::pair<std::string, std::string>> witness;
    double witness_ratio = 0;
    std::size_t pairs_seen = 0;
    std::size_t pairs_frequent = 0;
};

/// Joint census of length-m word pairs along the pair orbit; passes iff
/// every pair with max-window ratio >= theta is diagonal.
DiagonalSupport pair_orbit_diag_support(const SymbolSeq& x, const SymbolSeq& y, Index m, Index horizon,
                                        const std::vector<Index>& schedule = {}, double theta = 0.01);

struct ScrambledEntry {
    std::size_t i = 0;
    std::size_t j = 0;
    bool qualifies = false;
    Verdict banach = Verdict::empirical_fail;
    Verdict asymptotic = Verdict::empirical_fail;
    std::string reason;
};

struct ScrambledMatrix {
    std::vector<ScrambledEntry> entries;  // i < j, row-major
    std::size_t qualifying = 0;
    bool scrambled = false;
};

ScrambledMatrix scrambled_matrix(const std::vector<SymbolSeq>& points, const PairParams& params = {});

// ---------------------------------------------------------------------------
// Witness family: x_c has ones exactly on {2^j : c_{rho(j)} = 1}.
// ---------------------------------------------------------------------------

SymbolSeq witness_point(const CantorParameter& c);
/// m parameters with distinct binary-index heads and seeded random tails.
std::vector<CantorParameter> witness_parameters(std::size_t m, std::uint64_t seed);
std::vector<SymbolSeq> witness_family(std::size_t m, std::uint64_t seed);

}  // namespace bpx
