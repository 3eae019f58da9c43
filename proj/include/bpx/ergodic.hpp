#pragma once
// Visitation statistics of cylinder words along a single orbit: empirical
// measures, support estimation by upper Banach density, and the checks built
// on them.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bpx/intset.hpp"
#include "bpx/proximal.hpp"
#include "bpx/shiftspace.hpp"

namespace bpx {

/// {n < horizon : x[n, n+|u|) == u}; coordinates up to horizon + |u| - 1 are read.
IntSet visitation_set(const SymbolSeq& x, const std::string& u, Index horizon);

struct EmpiricalMeasure {
    Index a = 0;
    Index b = 0;
    Index word_length = 0;
    std::map<std::string, Index> counts;  // words that occur at least once
    Index total = 0;                      // b - a - L + 1

    double freq(const std::string& w) const;
};

/// Census of the words x[n, n+L) that fit inside [a, b).
EmpiricalMeasure empirical_measure(const SymbolSeq& x, Index a, Index b, Index L);

struct SupportEstimate {
    Index word_length = 0;
    double theta = 0;
    Index horizon = 0;
    std::vector<Index> schedule;
    std::map<std::string, double> ratios;  // upper Banach estimate of every visited word
    std::vector<std::string> surviving;    // sorted

    bool singleton_zero() const {
        return surviving.size() == 1 && surviving.front() == std::string(static_cast<std::size_t>(word_length), '0');
    }
};

SupportEstimate support_estimate(const SymbolSeq& x, Index L, Index horizon, double theta,
                                 const std::vector<Index>& schedule = {});

struct StrongProximalParams {
    Index horizon = Index{1} << 16;
    Index word_length = 4;
    double theta = 0.05;
    std::vector<Index> schedule;  // empty: default for the horizon
    int pair_checks = 5;
    PairParams pairs{{1, 2, 4}, Index{1} << 16, 0.95, {}};
};

struct StrongProximalEvidence {
    bool pass = true;
    std::optional<std::string> witness;  // a surviving word other than 0^L
    std::vector<SupportEstimate> estimates;
    int pairs_checked = 0;
    int pairs_passed = 0;
};

/// Samples random points of the subshift; passes iff each support estimate
/// is exactly {0^L} and the sampled pairs are Banach proximal.
StrongProximalEvidence strongly_proximal_evidence(const SubshiftSpec& spec, int samples, std::uint64_t seed,
                                                  const StrongProximalParams& params = {});

struct RecurrenceReport {
    std::vector<LengthProfile> profile;
    double estimate = 0;  // min-window ratio at the largest length
    bool positive = false;
};

/// Lower-density evidence for the return times to the cylinder of u.
RecurrenceReport recurrence_pld(const SymbolSeq& x, const std::string& u, Index horizon,
                                const std::vector<Index>& schedule = {});

struct FixSupportParams {
    Index horizon = Index{1} << 14;
    Index word_length = 4;  // raised to 2n when smaller
    double theta = 0.01;
    PairParams pairs{{1, 2, 4}, Index{1} << 14, 0.95, {}};
};

struct FixSupportResult {
    enum class Status { vacuous, pass, fail };
    Status status = Status::vacuous;
    Verdict banach = Verdict::empirical_fail;
    std::vector<std::string> surviving;
    std::optional<std::string> witness;
};

const char* to_string(FixSupportResult::Status s);

/// When (x, sigma^n x) is Banach proximal, every surviving word must be n-periodic.
FixSupportResult fix_support_check(const SymbolSeq& x, Index n, const FixSupportParams& params = {});

}  // namespace bpx
