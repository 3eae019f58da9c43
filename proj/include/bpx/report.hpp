#pragma once
// JSON renderings of analysis results, shared by the command line and tests.

#include <json.hpp>

#include "bpx/ergodic.hpp"
#include "bpx/interval.hpp"
#include "bpx/intset.hpp"
#include "bpx/proximal.hpp"
#include "bpx/shiftspace.hpp"

namespace bpx::report {

using Json = nlohmann::json;

Json to_json(const LengthProfile& p);
Json to_json(const DensityReport& r);
Json to_json(const SetVerdict& v);
Json to_json(const BdOneVerdict& v);
Json to_json(const VerdictRecord& v);
Json to_json(const PairProfile& p);
Json to_json(const PowerReport& r);
Json to_json(const DiagonalSupport& d);
Json to_json(const ScrambledEntry& e);
Json to_json(const Membership& m);
Json to_json(const QnFamily& q);
Json to_json(const EmpiricalMeasure& m);
Json to_json(const SupportEstimate& s);
Json to_json(const StrongProximalEvidence& e);
Json to_json(const Itinerary& it);
Json to_json(const Cylinder& c);
Json to_json(const DiamReport& d);

/// Exact rational as "p/q" (or "p" when integral).
std::string exact_text(const Rational& r);

}  // namespace bpx::report
