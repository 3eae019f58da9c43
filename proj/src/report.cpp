#include "bpx/report.hpp"

namespace bpx::report {

namespace {

const char* status_name(SetVerdict::Status s) {
    switch (s) {
        case SetVerdict::Status::certified: return "certified";
        case SetVerdict::Status::refuted: return "refuted";
        case SetVerdict::Status::empirical: return "empirical";
    }
    return "?";
}

template <class T>
Json optional_value(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

std::string exact_text(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Json to_json(const LengthProfile& p) {
    return {{"length", p.length},       {"min_count", p.min_count}, {"max_count", p.max_count},
            {"argmin", p.argmin},       {"argmax", p.argmax},       {"min_ratio", p.min_ratio()},
            {"max_ratio", p.max_ratio()}};
}

Json to_json(const DensityReport& r) {
    Json profile = Json::array();
    for (const auto& p : r.profile) profile.push_back(to_json(p));
    return {{"lower_density", r.lower_density},
            {"upper_density", r.upper_density},
            {"lower_banach", r.lower_banach},
            {"upper_banach", r.upper_banach},
            {"exact", {{"lower_density", r.exact_lower_density},
                       {"upper_density", r.exact_upper_density},
                       {"lower_banach", r.exact_lower_banach},
                       {"upper_banach", r.exact_upper_banach}}},
            {"horizon", r.horizon},
            {"schedule", r.schedule},
            {"profile", profile}};
}

Json to_json(const SetVerdict& v) { return {{"status", status_name(v.status)}, {"value", v.value}, {"note", v.note}}; }

Json to_json(const BdOneVerdict& v) {
    return {{"status", to_string(v.status)}, {"value", v.value}, {"note", v.note}};
}

Json to_json(const VerdictRecord& v) {
    return {{"status", to_string(v.status)},
            {"statistic", v.statistic},
            {"witness", optional_value(v.witness)},
            {"evidence", v.evidence}};
}

Json to_json(const PairProfile& p) {
    Json densities = Json::array(), certificates = Json::array();
    for (const auto& d : p.densities) densities.push_back(to_json(d));
    for (const auto& c : p.certificates) certificates.push_back(c ? to_json(*c) : Json(nullptr));
    return {{"grid", p.grid},
            {"horizon", p.horizon},
            {"lambda", p.lambda},
            {"schedule", p.schedule},
            {"verdicts", {{"asymptotic", to_json(p.asymptotic)},
                          {"proximal", to_json(p.proximal)},
                          {"syndetic", to_json(p.syndetic)},
                          {"banach", to_json(p.banach)}}},
            {"closeness_densities", densities},
            {"certificates", certificates}};
}

Json to_json(const PowerReport& r) {
    return {{"power", r.power}, {"banach_T", to_json(r.banach_T)}, {"banach_Tk", to_json(r.banach_Tk)},
            {"agree", r.agree}};
}

Json to_json(const DiagonalSupport& d) {
    Json witness = nullptr;
    if (d.witness) witness = {d.witness->first, d.witness->second};
    return {{"pass", d.pass},
            {"witness", witness},
            {"witness_ratio", d.witness_ratio},
            {"pairs_seen", d.pairs_seen},
            {"pairs_frequent", d.pairs_frequent}};
}

Json to_json(const ScrambledEntry& e) {
    return {{"i", e.i},
            {"j", e.j},
            {"qualifies", e.qualifies},
            {"banach", to_string(e.banach)},
            {"asymptotic", to_string(e.asymptotic)},
            {"reason", e.reason}};
}

Json to_json(const Membership& m) {
    return {{"status", to_string(m.status)},
            {"certified", m.certified},
            {"witness", {m.witness.first, m.witness.second}},
            {"note", m.note}};
}

Json to_json(const QnFamily& q) {
    return {{"spec", q.spec.to_string()},
            {"Q_thick", to_json(q.q_thick)},
            {"Q_complement_thick", to_json(q.complement_thick)},
            {"Qn_thick", to_json(q.qn_thick)}};
}

Json to_json(const EmpiricalMeasure& m) {
    Json freq = Json::object(), counts = Json::object();
    for (const auto& [w, c] : m.counts) {
        counts[w] = c;
        freq[w] = m.freq(w);
    }
    return {{"window", {m.a, m.b}}, {"word_length", m.word_length}, {"total", m.total},
            {"counts", counts},     {"freq", freq}};
}

Json to_json(const SupportEstimate& s) {
    return {{"word_length", s.word_length}, {"theta", s.theta},     {"horizon", s.horizon},
            {"schedule", s.schedule},       {"ratios", s.ratios},   {"surviving", s.surviving},
            {"singleton_zero", s.singleton_zero()}};
}

Json to_json(const StrongProximalEvidence& e) {
    Json survivors = Json::array();
    for (const auto& est : e.estimates) survivors.push_back(est.surviving);
    return {{"pass", e.pass},
            {"witness", optional_value(e.witness)},
            {"samples", e.estimates.size()},
            {"surviving", survivors},
            {"pairs_checked", e.pairs_checked},
            {"pairs_passed", e.pairs_passed}};
}

Json to_json(const Itinerary& it) { return {{"word", it.word}, {"ties", it.ties}}; }

Json to_json(const Cylinder& c) {
    return {{"lo", exact_text(c.lo)},
            {"hi", exact_text(c.hi)},
            {"point", exact_text(c.point)},
            {"point_decimal", c.point.convert_to<double>()}};
}

Json to_json(const DiamReport& d) {
    Json image = Json::array();
    for (const auto& [lo, hi] : d.image) image.push_back({lo, hi});
    return {{"diam", d.diam}, {"image", image}, {"exact", d.exact}, {"uniformly_proximal", d.uniformly_proximal}};
}

}  // namespace bpx::report
