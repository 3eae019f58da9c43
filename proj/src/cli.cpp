#include "bpx/cli.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "bpx/error.hpp"
#include "bpx/report.hpp"
#include "bpx/setlang.hpp"

namespace bpx::cli {

namespace {

using report::Json;
using report::to_json;

constexpr std::size_t kMaxListedWords = 1 << 16;

/// Writes records in the selected format; every record carries the run config.
class Emitter {
public:
    Emitter(const RunConfig& cfg, std::ostream& out) : format_(cfg.format), out_(out) {
        config_ = {{"horizon", cfg.horizon}, {"schedule", cfg.schedule}, {"grid", cfg.grid},
                   {"lambda", cfg.lambda},   {"theta", cfg.theta},       {"seed", cfg.seed},
                   {"format", cfg.format}};
    }

    void emit(Json record) {
        record["config"] = config_;
        if (format_ == "json-lines") {
            out_ << record.dump() << '\n';
        } else if (format_ == "csv") {
            csv_rows(record.value("kind", ""), "", record);
        } else {
            out_ << "== " << record.value("kind", "record") << " ==\n";
            pretty(record, 1);
        }
    }

private:
    // Density profiles only, one row per scheduled length.
    void csv_rows(const std::string& kind, const std::string& path, const Json& j) {
        if (j.is_object()) {
            if (j.contains("profile") && j["profile"].is_array()) {
                for (const auto& p : j["profile"]) {
                    if (!header_) {
                        out_ << "kind,path,length,min_count,max_count,min_ratio,max_ratio\n";
                        header_ = true;
                    }
                    out_ << kind << ',' << (path.empty() ? "." : path) << ',' << p["length"].dump() << ','
                         << p["min_count"].dump() << ',' << p["max_count"].dump() << ',' << p["min_ratio"].dump()
                         << ',' << p["max_ratio"].dump() << '\n';
                }
            }
            for (const auto& [k, v] : j.items())
                if (k != "config" && k != "profile") csv_rows(kind, path.empty() ? k : path + "." + k, v);
        } else if (j.is_array()) {
            for (std::size_t i = 0; i < j.size(); ++i) csv_rows(kind, path + "[" + std::to_string(i) + "]", j[i]);
        }
    }

    void pretty(const Json& j, int depth) {
        const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
        for (const auto& [k, v] : j.items()) {
            if (v.is_object()) {
                out_ << pad << k << ":\n";
                pretty(v, depth + 1);
            } else if (v.is_array() && !v.empty() && v.front().is_object()) {
                out_ << pad << k << ":\n";
                for (std::size_t i = 0; i < v.size(); ++i) {
                    out_ << pad << "  [" << i << "]\n";
                    pretty(v[i], depth + 2);
                }
            } else {
                out_ << pad << k << ": " << v.dump() << '\n';
            }
        }
    }

    std::string format_;
    std::ostream& out_;
    Json config_;
    bool header_ = false;
};

boost::multiprecision::cpp_int cpp_int_from(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ArgumentError("bad integer");
    return boost::multiprecision::cpp_int(s);
}

Rational parse_point(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash != std::string::npos)
            return Rational(cpp_int_from(text.substr(0, slash)), cpp_int_from(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw ArgumentError("bad fraction '" + text + "'");
    }
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || text.empty()) throw ArgumentError("bad point '" + text + "'");
    return Rational(v);
}

Strategy parse_strategy(const std::string& s) {
    if (s == "greedy") return Strategy::greedy_max_ones;
    if (s == "random") return Strategy::random;
    if (s == "zero") return Strategy::zero;
    throw ArgumentError("unknown strategy '" + s + "' (greedy, random, zero)");
}

Json decimals(const std::vector<Rational>& v) {
    Json out = Json::array();
    for (const auto& r : v) out.push_back(r.convert_to<double>());
    return out;
}

/// Flag values for every subcommand; CLI11 binds into these.
struct Inputs {
    std::string set_text, x, y, spec, p, family = "symbolic", strategy = "greedy", map = "tent:2", x0, word;
    bool exact = false;
    Index power = 0, k = 4, len = 64, n = 0, wordlen = 4, samples = 20, m = 8, steps = 20, slack = 1, diam_n = 40;
};

class Runner {
public:
    Runner(const RunConfig& cfg, const Inputs& in, Emitter& em) : cfg_(cfg), in_(in), em_(em) {}

    PairParams pair_params() const { return {cfg_.grid, cfg_.horizon, cfg_.lambda, cfg_.schedule}; }

    Index point_reach(Index power = 1) const {
        const Index m = cfg_.grid.empty() ? 0 : *std::max_element(cfg_.grid.begin(), cfg_.grid.end());
        return (cfg_.horizon + m + 1) * std::max<Index>(power, 1) + 64;
    }

    int density() {
        const auto expr = parse_set_expr(in_.set_text);
        const auto set = eval_set_expr(*expr, cfg_.horizon);
        const auto rep = in_.exact ? exact_density(set) : estimate_densities(set, cfg_.horizon, cfg_.schedule);
        em_.emit({{"kind", "density"}, {"input", in_.set_text}, {"normalized", print_set_expr(*expr)},
                  {"report", to_json(rep)}});
        return ok;
    }

    int classify() {
        const auto x = SymbolSeq::parse(in_.x, point_reach(in_.power));
        const auto y = SymbolSeq::parse(in_.y, point_reach(in_.power));
        const auto prof = classify_pair(x, y, pair_params());
        em_.emit({{"kind", "pair"}, {"x", x.to_string()}, {"y", y.to_string()}, {"profile", to_json(prof)}});
        bool fine = passes(prof.banach.status);
        if (in_.power > 0) {
            const auto pr = power_consistency(x, y, in_.power, pair_params());
            em_.emit({{"kind", "power"}, {"x", x.to_string()}, {"y", y.to_string()}, {"report", to_json(pr)}});
            fine = fine && pr.agree;
        }
        return fine ? ok : verdict_fail;
    }

    int subshift_lang() {
        const auto spec = SubshiftSpec::parse(in_.spec, cfg_.horizon);
        if (in_.k < 1) throw ArgumentError("word length must be >= 1");
        if (in_.k > 24) throw ResourceLimit("language enumeration is limited to length 24");
        const auto lang = language(spec, static_cast<int>(in_.k));
        for (std::size_t i = 0; i < lang.size(); ++i) {
            const bool listed = lang[i].size() <= kMaxListedWords;
            em_.emit({{"kind", "language"},
                      {"spec", spec.to_string()},
                      {"length", i + 1},
                      {"count", lang[i].size()},
                      {"words", listed ? Json(lang[i]) : Json::array()},
                      {"words_truncated", !listed}});
        }
        return ok;
    }

    int subshift_gen() {
        const auto spec = SubshiftSpec::parse(in_.spec, cfg_.horizon);
        if (in_.len < 1) throw ArgumentError("length must be >= 1");
        const auto x = generate_point(spec, parse_strategy(in_.strategy), in_.len, cfg_.seed);
        std::string prefix;
        for (auto b : x.bits(in_.len)) prefix += b ? '1' : '0';
        em_.emit({{"kind", "point"}, {"spec", spec.to_string()}, {"strategy", in_.strategy}, {"length", in_.len},
                  {"point", x.to_string()}, {"prefix", prefix}, {"membership", to_json(member(spec, x, in_.len))}});
        return ok;
    }

    int subshift_qn() {
        const auto P = parse_set(in_.p, cfg_.horizon);
        const auto fam = build_Qn_family(P, in_.n, cfg_.horizon);
        auto rec = to_json(fam);
        rec["kind"] = "qn-family";
        rec["P"] = in_.p;
        rec["n"] = in_.n;
        em_.emit(rec);
        const bool thick = fam.q_thick.status == SetVerdict::Status::certified &&
                           fam.complement_thick.status == SetVerdict::Status::certified;
        return thick ? ok : verdict_fail;
    }

    int support() {
        if (!in_.x.empty() == !in_.spec.empty()) throw ArgumentError("support needs exactly one of --x and --spec");
        if (!in_.x.empty()) {
            const auto x = SymbolSeq::parse(in_.x, point_reach());
            const auto est = support_estimate(x, in_.wordlen, cfg_.horizon, cfg_.theta, cfg_.schedule);
            const auto meas = empirical_measure(x, 0, cfg_.horizon, in_.wordlen);
            em_.emit({{"kind", "support"}, {"x", x.to_string()}, {"estimate", to_json(est)},
                      {"empirical_measure", to_json(meas)}});
            return ok;
        }
        const auto spec = SubshiftSpec::parse(in_.spec, cfg_.horizon);
        StrongProximalParams sp;
        sp.horizon = cfg_.horizon;
        sp.word_length = in_.wordlen;
        sp.theta = cfg_.theta;
        sp.schedule = cfg_.schedule;
        sp.pairs = pair_params();
        const auto ev = strongly_proximal_evidence(spec, static_cast<int>(in_.samples), cfg_.seed, sp);
        em_.emit({{"kind", "strong-proximality"}, {"spec", spec.to_string()}, {"evidence", to_json(ev)}});
        return ev.pass ? ok : verdict_fail;
    }

    int scramble() {
        if (in_.m < 2) throw ArgumentError("need at least two candidates");
        const auto m = static_cast<std::size_t>(in_.m);
        Json labels = Json::array();
        ScrambledMatrix matrix;
        std::optional<ScrambledMatrix> symbolic;
        if (in_.family == "symbolic") {
            const auto fam = witness_family(m, cfg_.seed);
            for (const auto& x : fam) labels.push_back(x.to_string());
            matrix = scrambled_matrix(fam, pair_params());
        } else if (in_.family == "tent") {
            const auto cand = cantor_scrambled_candidates(m, cfg_.seed, cfg_.horizon + 64);
            for (std::size_t i = 0; i < m; ++i) labels.push_back(cand.sources[i].to_string());
            IntervalPairParams ip;
            ip.horizon = cfg_.horizon;
            ip.lambda = cfg_.lambda;
            ip.schedule = cfg_.schedule;
            ip.eps_grid.clear();
            for (Index g : cfg_.grid) ip.eps_grid.push_back(Rational(1, boost::multiprecision::cpp_int(1) << g));
            matrix = verify_scrambled_interval(cand.points, IntervalMap::tent(2), ip);
            symbolic = scrambled_matrix(cand.sources, pair_params());
        } else {
            throw ArgumentError("unknown family '" + in_.family + "' (symbolic, tent)");
        }
        for (const auto& e : matrix.entries) {
            auto rec = to_json(e);
            rec["kind"] = "scramble-pair";
            rec["family"] = in_.family;
            em_.emit(rec);
        }
        Json summary{{"kind", "scramble-summary"}, {"family", in_.family}, {"m", in_.m},
                     {"sources", labels},          {"pairs", matrix.entries.size()},
                     {"qualifying", matrix.qualifying}, {"scrambled", matrix.scrambled}};
        if (symbolic) {
            std::size_t agree = 0;
            for (std::size_t i = 0; i < matrix.entries.size(); ++i)
                agree += matrix.entries[i].qualifies == symbolic->entries[i].qualifies;
            summary["symbolic_qualifying"] = symbolic->qualifying;
            summary["symbolic_agreement"] = agree;
        }
        em_.emit(summary);
        return matrix.scrambled ? ok : verdict_fail;
    }

    int interval_orbit() {
        const auto f = IntervalMap::parse(in_.map);
        const auto x0 = parse_point(in_.x0);
        const Json values = f.exact() ? decimals(orbit(f, x0, in_.steps)) : Json(orbit(f, x0.convert_to<double>(), in_.steps));
        em_.emit({{"kind", "orbit"}, {"map", f.to_string()}, {"x0", report::exact_text(x0)}, {"n", in_.steps},
                  {"exact_arithmetic", f.exact()}, {"values", values}});
        return ok;
    }

    int interval_itinerary() {
        const auto f = IntervalMap::parse(in_.map);
        const auto x0 = parse_point(in_.x0);
        const auto it = f.exact() ? itinerary(f, x0, in_.steps) : itinerary(f, x0.convert_to<double>(), in_.steps);
        em_.emit({{"kind", "itinerary"}, {"map", f.to_string()}, {"x0", report::exact_text(x0)}, {"n", in_.steps},
                  {"exact_arithmetic", f.exact()}, {"itinerary", to_json(it)}});
        return ok;
    }

    int interval_encode() {
        const auto c = encode_point(in_.word, in_.slack);
        em_.emit({{"kind", "encode"}, {"word", in_.word}, {"slack", in_.slack}, {"cylinder", to_json(c)}});
        return ok;
    }

    int interval_diam() {
        const auto f = IntervalMap::parse(in_.map);
        const auto d = diam_iterates(f, in_.diam_n);
        em_.emit({{"kind", "diam"}, {"map", f.to_string()}, {"n", in_.diam_n}, {"report", to_json(d)}});
        return ok;
    }

private:
    const RunConfig& cfg_;
    const Inputs& in_;
    Emitter& em_;
};

void validate(RunConfig& cfg) {
    if (cfg.horizon < 1) throw ArgumentError("horizon must be >= 1");
    if (cfg.schedule.empty()) cfg.schedule = default_schedule(cfg.horizon);
    if (!std::is_sorted(cfg.schedule.begin(), cfg.schedule.end()) || cfg.schedule.front() < 1)
        throw ArgumentError("schedule must be increasing positive lengths");
    if (cfg.schedule.back() > cfg.horizon) throw ArgumentError("horizon must be >= the largest schedule length");
    if (!(cfg.lambda > 0 && cfg.lambda < 1)) throw ArgumentError("lambda must lie in (0, 1)");
    if (!(cfg.theta > 0 && cfg.theta < 1)) throw ArgumentError("theta must lie in (0, 1)");
    if (cfg.grid.empty()) throw ArgumentError("grid must be non-empty");
    for (Index m : cfg.grid)
        if (m < 0 || m > 62) throw ArgumentError("grid entries must lie in 0..62");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    Inputs in;
    CLI::App app{"Banach proximality toolkit: densities, subshifts, pair classification, interval coding", "bpx"};
    app.set_config("--config", "", "Read options from a TOML/INI file (keys as flags)");
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--horizon", cfg.horizon, "Scan horizon H")->capture_default_str();
    app.add_option("--schedule", cfg.schedule, "Window lengths, comma separated")->delimiter(',');
    app.add_option("--grid", cfg.grid, "Resolutions m, comma separated")->delimiter(',')->capture_default_str();
    app.add_option("--lambda", cfg.lambda, "Banach threshold")->capture_default_str();
    app.add_option("--theta", cfg.theta, "Support threshold")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    app.add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"json-lines", "csv", "pretty"}))
        ->capture_default_str();

    std::function<int(Runner&)> action;
    auto bind = [&](CLI::App* sub, int (Runner::*fn)()) { sub->callback([&action, fn] { action = [fn](Runner& r) { return (r.*fn)(); }; }); };

    auto* density = app.add_subcommand("density", "Density report of a set expression");
    density->add_option("set", in.set_text, "Set DSL expression")->required();
    density->add_flag("--exact", in.exact, "Exact densities (eventually periodic sets)");
    bind(density, &Runner::density);

    auto* classify = app.add_subcommand("classify", "Classify a pair of sequences");
    classify->add_option("--x", in.x, "First sequence")->required();
    classify->add_option("--y", in.y, "Second sequence")->required();
    classify->add_option("--power", in.power, "Also compare Banach verdicts under the k-th power");
    bind(classify, &Runner::classify);

    auto* subshift = app.add_subcommand("subshift", "Subshift languages, points and spacing families");
    subshift->require_subcommand(1);
    auto* lang = subshift->add_subcommand("lang", "Admissible words of each length up to k");
    lang->add_option("--spec", in.spec, "Subshift spec")->required();
    lang->add_option("--k", in.k, "Largest word length")->capture_default_str();
    bind(lang, &Runner::subshift_lang);
    auto* gen = subshift->add_subcommand("gen", "Generate an admissible point");
    gen->add_option("--spec", in.spec, "Subshift spec")->required();
    gen->add_option("--strategy", in.strategy, "greedy, random or zero")->capture_default_str();
    gen->add_option("--len", in.len, "Length to construct")->capture_default_str();
    bind(gen, &Runner::subshift_gen);
    auto* qn = subshift->add_subcommand("qn", "Thick spacing family built from P");
    qn->add_option("--p", in.p, "Thick block-rule set")->required();
    qn->add_option("--n", in.n, "Extra spacings from [1, n]")->capture_default_str();
    bind(qn, &Runner::subshift_qn);

    auto* support = app.add_subcommand("support", "Support estimate of a point, or singleton-support evidence");
    support->add_option("--x", in.x, "Sequence");
    support->add_option("--spec", in.spec, "Subshift spec");
    support->add_option("--wordlen", in.wordlen, "Cylinder word length")->capture_default_str();
    support->add_option("--samples", in.samples, "Sampled points (with --spec)")->capture_default_str();
    bind(support, &Runner::support);

    auto* scramble = app.add_subcommand("scramble", "Pairwise scrambled-set verification");
    scramble->add_option("--family", in.family, "symbolic or tent")->capture_default_str();
    scramble->add_option("--m", in.m, "Number of candidates")->capture_default_str();
    bind(scramble, &Runner::scramble);

    auto* interval = app.add_subcommand("interval", "Interval maps and Tent(2) coding");
    interval->require_subcommand(1);
    auto* iorbit = interval->add_subcommand("orbit", "Orbit of a point");
    auto* iitin = interval->add_subcommand("itinerary", "Itinerary against [0,1/2) | [1/2,1]");
    for (auto* sub : {iorbit, iitin}) {
        sub->add_option("--map", in.map, "tent:s, logistic:r or pl:x,y;...")->capture_default_str();
        sub->add_option("--x0", in.x0, "Start point, decimal or p/q")->required();
        sub->add_option("--n", in.steps, "Steps")->capture_default_str();
    }
    bind(iorbit, &Runner::interval_orbit);
    bind(iitin, &Runner::interval_itinerary);
    auto* ienc = interval->add_subcommand("encode", "Tent(2) cylinder of a word");
    ienc->add_option("--word", in.word, "Binary word")->required();
    ienc->add_option("--slack", in.slack, "Zeros appended before taking the midpoint")->capture_default_str();
    bind(ienc, &Runner::interval_encode);
    auto* idiam = interval->add_subcommand("diam", "Diameters of f^k[0,1]");
    idiam->add_option("--map", in.map, "tent:s, logistic:r or pl:x,y;...")->capture_default_str();
    idiam->add_option("--n", in.diam_n, "Iterations")->capture_default_str();
    bind(idiam, &Runner::interval_diam);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return ok;
        err << app.help();
        return usage_error;
    }

    try {
        validate(cfg);
        Emitter em(cfg, out);
        Runner runner(cfg, in, em);
        return action(runner);
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return resource_limit;
    } catch (const EvalOverflow& e) {
        err << "resource limit: " << e.what() << '\n';
        return resource_limit;
    } catch (const ExtensionFailure& e) {
        err << "construction failed: " << e.what() << " (prefix " << e.prefix() << ")\n";
        return verdict_fail;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return usage_error;
    }
}

}  // namespace bpx::cli
