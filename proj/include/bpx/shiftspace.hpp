#pragma once
// One-sided binary sequences with finitely described tails, the shift map,
// the 2^-k ultrametric, and a handful of subshifts (full shift, spacing
// shifts, a hereditary mixing example and forbidden-word shifts).

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bpx/intset.hpp"

namespace bpx {

// ---------------------------------------------------------------------------
// Sequences
// ---------------------------------------------------------------------------

struct ZeroTail {};
/// The word repeats forever starting right after the prefix.
struct PeriodicTail {
    std::string word;
};
/// Beyond the prefix, x_i = 1 exactly when i is in `support` (absolute index).
struct SupportTail {
    IntSet support = IntSet::empty();
    std::string label;  // DSL text naming `support`
};

class SymbolSeq {
public:
    using Tail = std::variant<ZeroTail, PeriodicTail, SupportTail>;

    static SymbolSeq zero(std::string prefix = {});
    static SymbolSeq periodic(std::string prefix, std::string word);
    static SymbolSeq with_support(std::string prefix, IntSet support, std::string label);
    /// Ones exactly at the listed positions.
    static SymbolSeq ones_at(const std::vector<Index>& positions);
    /// Textual form "<prefix>|zero", "<prefix>|per:<word>" or "<prefix>|supp:<set>".
    static SymbolSeq parse(const std::string& text, Index horizon = kDefaultAlgebraHorizon);

    const std::string& prefix() const { return prefix_; }
    const Tail& tail() const { return tail_; }
    std::string to_string() const;

    /// Coordinates [0, horizon) as 0/1 bytes.
    std::vector<std::uint8_t> bits(Index horizon) const;

private:
    SymbolSeq(std::string prefix, Tail tail);
    std::string prefix_;
    Tail tail_;
};

std::uint8_t coord(const SymbolSeq& x, Index i);
SymbolSeq seq_shift(const SymbolSeq& x, Index n);

/// x_i for i >= start is periodic with the given word.
struct EventualPeriod {
    Index start = 0;
    std::string word;
};
/// Exact description when the tail is eventually periodic, nullopt otherwise.
std::optional<EventualPeriod> eventual_period(const SymbolSeq& x);

/// Same prefix and structurally identical tail rule.
bool same_description(const SymbolSeq& x, const SymbolSeq& y);
/// Equality as sequences when it is decidable from the descriptions.
std::optional<bool> decide_equal(const SymbolSeq& x, const SymbolSeq& y);

/// First coordinate in [0, limit] where x and y differ.
std::optional<Index> first_disagreement(const SymbolSeq& x, const SymbolSeq& y, Index limit);
/// 2^-k for the first disagreement k <= m, else 0.
double seq_dist(const SymbolSeq& x, const SymbolSeq& y, Index m);

// ---------------------------------------------------------------------------
// Subshifts
// ---------------------------------------------------------------------------

struct FullShift {};
/// Points whose ones sit at pairwise distances in P or 0.
struct Spacing {
    IntSet P = IntSet::empty();
    std::string label;
};
/// Every window of length 2^n (n >= 1) that starts with a one holds at most n ones.
struct HereditaryMixing {};
struct ForbiddenWords {
    std::vector<std::string> words;
};

class SubshiftSpec {
public:
    using Variant = std::variant<FullShift, Spacing, HereditaryMixing, ForbiddenWords>;

    static SubshiftSpec full();
    static SubshiftSpec spacing(IntSet P, std::string label);
    static SubshiftSpec hereditary_mixing();
    static SubshiftSpec forbidden(std::vector<std::string> words);
    /// "full", "spacing:<set>", "hereditary-mixing" or "forbidden:w1,w2,...".
    static SubshiftSpec parse(const std::string& text, Index horizon = kDefaultAlgebraHorizon);

    const Variant& variant() const { return v_; }
    bool hereditary() const { return !std::holds_alternative<ForbiddenWords>(v_); }
    std::string to_string() const;

private:
    explicit SubshiftSpec(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct Membership {
    enum class Status { yes, no, unknown };
    Status status = Status::unknown;
    /// yes: whether the tail rule certified it beyond the scanned range.
    bool certified = false;
    /// Violating pair (Spacing) or window start and length (HereditaryMixing)
    /// or word position and length (ForbiddenWords).
    std::pair<Index, Index> witness{0, 0};
    std::string note;
};

const char* to_string(Membership::Status s);

Membership member(const SubshiftSpec& spec, const SymbolSeq& x, Index horizon);

/// Admissible words of each length 1..k; entry [len - 1] is sorted.
std::vector<std::vector<std::string>> language(const SubshiftSpec& spec, int k);
/// Whether a finite word occurs in some point of the subshift.
bool admissible_word(const SubshiftSpec& spec, const std::string& w);

enum class Strategy { greedy_max_ones, random, zero };

SymbolSeq generate_point(const SubshiftSpec& spec, Strategy strategy, Index length, std::uint64_t seed = 0);

SetVerdict is_weakly_mixing_spacing(const IntSet& P, Index horizon);

struct QnFamily {
    IntSet Q = IntSet::empty();
    IntSet Q_complement = IntSet::empty();
    IntSet Qn = IntSet::empty();
    SubshiftSpec spec = SubshiftSpec::full();
    SetVerdict q_thick;
    SetVerdict complement_thick;
    SetVerdict qn_thick;
};

/// P must be a plain block rule with certified thickness.
QnFamily build_Qn_family(const IntSet& P, Index n, Index horizon = kDefaultAlgebraHorizon);

struct HereditaryCheck {
    bool pass = true;
    int trials_run = 0;
    std::optional<SymbolSeq> violator;
};

/// Samples points below x coordinatewise (the first one is all zeros) and
/// checks each of them for membership.
HereditaryCheck hereditary_closed_check(const SubshiftSpec& spec, const SymbolSeq& x, int trials, std::uint64_t seed,
                                        Index horizon);

}  // namespace bpx
