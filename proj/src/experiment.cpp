#include "rfp/experiment.hpp"

#include "rfp/codebook_io.hpp"
#include "rfp/parallel.hpp"
#include "rfp/validation.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>

namespace rfp {

using json = nlohmann::ordered_json;

std::string_view to_string(CoalitionPolicy policy) {
    return policy == CoalitionPolicy::FirstT ? "first" : "random";
}

std::string_view to_string(AttackKind attack) {
    switch (attack) {
    case AttackKind::Xor: return "xor";
    case AttackKind::Affine: return "affine";
    case AttackKind::RandomEnvelope: return "random-envelope";
    }
    return "?";
}

std::string_view to_string(FramingCheck check) { return check == FramingCheck::Assigned ? "assigned" : "full"; }

CoalitionPolicy parse_coalition_policy(std::string_view name) {
    if (name == "first")
        return CoalitionPolicy::FirstT;
    if (name == "random")
        return CoalitionPolicy::RandomPerTrial;
    throw std::invalid_argument("unknown coalition policy '" + std::string(name) + "' (first, random)");
}

AttackKind parse_attack_kind(std::string_view name) {
    if (name == "xor")
        return AttackKind::Xor;
    if (name == "affine")
        return AttackKind::Affine;
    if (name == "random-envelope")
        return AttackKind::RandomEnvelope;
    throw std::invalid_argument("unknown attack '" + std::string(name) + "' (xor, affine, random-envelope)");
}

FramingCheck parse_framing_check(std::string_view name) {
    if (name == "assigned")
        return FramingCheck::Assigned;
    if (name == "full")
        return FramingCheck::LinearFull;
    throw std::invalid_argument("unknown framing check '" + std::string(name) + "' (assigned, full)");
}

ReportFormat parse_report_format(std::string_view name) {
    if (name == "json")
        return ReportFormat::Json;
    if (name == "csv")
        return ReportFormat::Csv;
    throw std::invalid_argument("unknown report format '" + std::string(name) + "' (json, csv)");
}

namespace {

std::uint64_t user_count(const Key& key) {
    if (const auto* p = std::get_if<BernoulliParams>(&key.params))
        return p->users;
    if (const auto* p = std::get_if<LinearParams>(&key.params))
        return p->user_count();
    const auto& p = std::get<ConcatParams>(key.params);
    std::uint64_t users = 1;
    for (std::size_t i = 0; i < p.outer_dimension; ++i) {
        if (users > (std::uint64_t{1} << 62) / p.alphabet_size())
            throw std::overflow_error("concatenated code size q^K exceeds 2^62");
        users *= p.alphabet_size();
    }
    return users;
}

bool is_binary_linear(const Key& key) {
    const auto* p = std::get_if<LinearParams>(&key.params);
    return p && p->field_bits == 1;
}

} // namespace

void ExperimentSpec::validate() const {
    if (trials == 0)
        throw std::invalid_argument("experiment needs at least one trial");
    if (coalition_size == 0)
        throw std::invalid_argument("coalition size must be at least 1");
    const std::uint64_t users = user_count(key);
    if (coalition_size > users)
        throw std::invalid_argument("coalition size " + std::to_string(coalition_size) + " exceeds the " +
                                    std::to_string(users) + " users");
    if (check == FramingCheck::LinearFull && !is_binary_linear(key))
        throw std::invalid_argument("the full-code framing check needs the binary linear ensemble");
    if (!(gamma >= 0.0))
        throw std::invalid_argument("gamma must be non-negative");
}

std::uint64_t SimulationReport::count(std::string_view name) const {
    for (const auto& [k, v] : counts)
        if (k == name)
            return v;
    throw std::out_of_range("report has no count '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// spec JSON

namespace {

const std::set<std::string>& allowed_params(EnsembleKind kind) {
    static const std::set<std::string> bernoulli{"n", "M", "p", "distinct"};
    static const std::set<std::string> linear{"n", "rate", "M", "field_bits"};
    static const std::set<std::string> concat{"q", "K", "t", "xi", "m", "p", "distinct"};
    switch (kind) {
    case EnsembleKind::Bernoulli: return bernoulli;
    case EnsembleKind::Linear: return linear;
    case EnsembleKind::Concatenated: return concat;
    }
    return bernoulli;
}

std::string scalar_text(const std::string& name, const json& v) {
    if (v.is_boolean())
        return v.get<bool>() ? "1" : "0";
    if (v.is_number_unsigned())
        return std::to_string(v.get<std::uint64_t>());
    if (v.is_number_integer())
        throw std::invalid_argument("parameter '" + name + "' must be non-negative");
    if (v.is_number_float())
        return format_double(v.get<double>());
    if (v.is_string())
        return v.get<std::string>();
    throw std::invalid_argument("parameter '" + name + "' must be a number, flag or string");
}

std::size_t get_count(const json& j, const char* name) {
    const json& v = j.at(name);
    if (!v.is_number_unsigned())
        throw std::invalid_argument(std::string("'") + name + "' must be a non-negative integer");
    return v.get<std::size_t>();
}

json params_json(const Key& key) {
    json out = json::object();
    if (const auto* p = std::get_if<BernoulliParams>(&key.params)) {
        out["n"] = p->length;
        out["M"] = p->users;
        out["p"] = p->bias;
        out["distinct"] = p->distinct_rows;
    } else if (const auto* p = std::get_if<LinearParams>(&key.params)) {
        out["n"] = p->length;
        out["rate"] = p->rate;
        out["M"] = p->user_count();
        out["field_bits"] = p->field_bits;
    } else {
        const auto& c = std::get<ConcatParams>(key.params);
        out["q"] = c.alphabet_size();
        out["K"] = c.outer_dimension;
        out["t"] = c.coalition_size;
        out["xi"] = c.slack;
        out["m"] = c.resolved_inner_length();
        out["p"] = c.resolved_inner_bias();
        out["distinct"] = c.distinct_inner_rows;
    }
    return out;
}

} // namespace

ExperimentSpec parse_experiment_spec(const json& j) {
    static const std::set<std::string> fields{"ensemble", "seed",  "params", "t",      "coalition",
                                              "mode",     "trials", "check", "gamma", "attack", "threads"};
    if (!j.is_object())
        throw std::invalid_argument("experiment spec must be a JSON object");
    for (const auto& [name, value] : j.items())
        if (!fields.count(name))
            throw std::invalid_argument("unknown experiment spec field '" + name + "'");
    for (const char* name : {"ensemble", "seed", "params", "t", "trials"})
        if (!j.contains(name))
            throw std::invalid_argument(std::string("experiment spec is missing '") + name + "'");

    const EnsembleKind kind = parse_ensemble_kind(j.at("ensemble").get<std::string>());
    std::map<std::string, std::string> params{{"ensemble", std::string(to_string(kind))}};
    const json& pj = j.at("params");
    if (!pj.is_object())
        throw std::invalid_argument("'params' must be an object");
    for (const auto& [name, value] : pj.items()) {
        if (!allowed_params(kind).count(name))
            throw std::invalid_argument("parameter '" + name + "' does not apply to the " +
                                        std::string(to_string(kind)) + " ensemble");
        params[name] = scalar_text(name, value);
    }

    ExperimentSpec spec;
    spec.key = key_from_parameters(seed_from_short_hex(j.at("seed").get<std::string>()), params);
    spec.coalition_size = get_count(j, "t");
    spec.trials = get_count(j, "trials");
    if (j.contains("coalition"))
        spec.policy = parse_coalition_policy(j.at("coalition").get<std::string>());
    if (j.contains("mode"))
        spec.mode = parse_envelope_mode(j.at("mode").get<std::string>());
    if (j.contains("check"))
        spec.check = parse_framing_check(j.at("check").get<std::string>());
    if (j.contains("gamma"))
        spec.gamma = j.at("gamma").get<double>();
    if (j.contains("attack") && !j.at("attack").is_null())
        spec.attack = parse_attack_kind(j.at("attack").get<std::string>());
    if (j.contains("threads"))
        spec.threads = std::max<std::size_t>(1, get_count(j, "threads"));
    spec.validate();
    return spec;
}

ExperimentSpec parse_experiment_spec_text(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("experiment spec is not valid JSON: ") + e.what());
    }
    return parse_experiment_spec(j);
}

json experiment_spec_json(const ExperimentSpec& spec) {
    json j;
    j["ensemble"] = std::string(to_string(spec.key.kind()));
    j["seed"] = seed_to_hex(spec.key.seed);
    j["params"] = params_json(spec.key);
    j["t"] = spec.coalition_size;
    j["coalition"] = std::string(to_string(spec.policy));
    j["mode"] = std::string(to_string(spec.mode));
    j["trials"] = spec.trials;
    j["check"] = std::string(to_string(spec.check));
    j["gamma"] = spec.gamma;
    j["attack"] = spec.attack ? json(std::string(to_string(*spec.attack))) : json(nullptr);
    return j;
}

Interval clopper_pearson(std::size_t successes, std::size_t trials, double level) {
    if (trials == 0)
        throw std::invalid_argument("clopper_pearson needs at least one trial");
    if (successes > trials)
        throw std::invalid_argument("clopper_pearson: more successes than trials");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("confidence level must lie in (0, 1)");
    const double alpha = 1.0 - level;
    const auto k = static_cast<double>(successes);
    const auto n = static_cast<double>(trials);
    Interval ci;
    ci.lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, n - k + 1.0, alpha / 2.0);
    ci.hi = successes == trials ? 1.0 : boost::math::ibeta_inv(k + 1.0, n - k, 1.0 - alpha / 2.0);
    return ci;
}

// ---------------------------------------------------------------------------
// trials

namespace {

/// The code drawn for one trial.
struct TrialCode {
    Key key;
    Codebook codebook; // assigned fingerprints (Bernoulli, linear)
    std::optional<LinearCodeInstance> linear;
    std::optional<QaryLinearCodeInstance> qary;
    std::optional<ConcatenatedCodeInstance> concat;

    std::uint64_t users() const { return concat ? concat->size() : codebook.size(); }

    SymbolVector fingerprint(std::uint64_t u) const {
        if (concat) {
            const auto& p = concat->params;
            return concat_encode(*concat, message_from_index(u, p.alphabet_size(), p.outer_dimension));
        }
        return codebook[static_cast<std::size_t>(u)];
    }

    ValidationVerdict validate(const SymbolVector& y) const {
        if (concat)
            return validate_concatenated(*concat, y);
        if (linear)
            return validate_linear(*linear, y);
        if (qary)
            return validate_linear(*qary, y);
        return validate_lookup(codebook, y);
    }
};

TrialCode draw_trial(const ExperimentSpec& spec, std::size_t trial) {
    TrialCode tc;
    tc.key = Key{derive_seed(spec.key.seed, "trial", trial), spec.key.params};
    switch (tc.key.kind()) {
    case EnsembleKind::Bernoulli:
        tc.codebook = sample_bernoulli(tc.key);
        break;
    case EnsembleKind::Linear: {
        const auto& p = std::get<LinearParams>(tc.key.params);
        if (p.field_bits == 1) {
            tc.linear = sample_linear(tc.key);
            tc.codebook = assign_linear_fingerprints(*tc.linear, p.user_count(), tc.key);
        } else {
            tc.qary = sample_linear_qary(tc.key);
            tc.codebook = assign_linear_fingerprints(*tc.qary, p.user_count(), tc.key);
        }
        break;
    }
    case EnsembleKind::Concatenated:
        tc.concat = build_concatenated(tc.key);
        break;
    }
    return tc;
}

Coalition pick_coalition(const ExperimentSpec& spec, const TrialCode& tc) {
    if (spec.policy == CoalitionPolicy::FirstT)
        return Coalition::first(spec.coalition_size);
    RandomStream rng(derive_seed(tc.key.seed, "coalition", 0));
    return Coalition::random(rng, spec.coalition_size, static_cast<std::size_t>(tc.users()));
}

std::vector<SymbolVector> coalition_fingerprints(const TrialCode& tc, const Coalition& u) {
    std::vector<SymbolVector> fps;
    fps.reserve(u.size());
    for (std::size_t m : u.members)
        fps.push_back(tc.fingerprint(m));
    return fps;
}

bool is_typical(const ExperimentSpec& spec, const TrialCode& tc, std::span<const SymbolVector> fps) {
    if (tc.concat || !fps.front().is_binary())
        return false;
    if (tc.linear && fps.size() == 2)
        return typicality_pairs(fps[0], fps[1], spec.gamma);
    const double p = tc.linear ? 0.5 : std::get<BernoulliParams>(tc.key.params).bias;
    return typicality_t1(fps, p, spec.gamma);
}

SimulationReport start_report(const ExperimentSpec& spec, std::optional<AttackKind> attack) {
    SimulationReport rep;
    ExperimentSpec echo = spec;
    echo.attack = attack;
    rep.spec = experiment_spec_json(echo);
    rep.spec_hash = sha256_hex(rep.spec.dump());
    rep.attack = attack;
    rep.trials = spec.trials;
    return rep;
}

void finish_report(SimulationReport& rep) {
    rep.estimate = static_cast<double>(rep.framings) / static_cast<double>(rep.trials);
    const Interval ci = clopper_pearson(rep.framings, rep.trials);
    rep.ci_lo = ci.lo;
    rep.ci_hi = ci.hi;
}

struct FramingOutcome {
    bool assigned = false;
    bool full = false;
    bool typical = false;
};

} // namespace

SimulationReport run_framing_experiment(const ExperimentSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    SimulationReport rep = start_report(spec, std::nullopt);

    std::vector<FramingOutcome> outcomes(spec.trials);
    parallel_for(spec.trials, spec.threads, [&](std::size_t i) {
        const TrialCode tc = draw_trial(spec, i);
        const Coalition u = pick_coalition(spec, tc);
        FramingOutcome& out = outcomes[i];
        if (tc.concat) {
            out.assigned = framing_check_concatenated(*tc.concat, u, spec.mode).has_value();
        } else {
            out.assigned = framing_check_assigned(tc.codebook, u, spec.mode).has_value();
            if (tc.linear) {
                const auto fps = fingerprints_of(tc.codebook, u);
                out.full = framing_check_linear_full(*tc.linear, fps, spec.mode).has_value();
            }
        }
        const auto fps = coalition_fingerprints(tc, u);
        out.typical = is_typical(spec, tc, fps);
    });

    std::uint64_t assigned = 0, full = 0, typical = 0;
    for (const auto& o : outcomes) {
        assigned += o.assigned;
        full += o.full;
        typical += o.typical;
    }
    rep.framings = spec.check == FramingCheck::LinearFull ? full : assigned;
    rep.counts.emplace_back("framings_assigned", assigned);
    if (is_binary_linear(spec.key))
        rep.counts.emplace_back("framings_full", full);
    rep.counts.emplace_back("typical_coalitions", typical);
    finish_report(rep);
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

namespace {

void require_applicable(const ExperimentSpec& spec, AttackKind attack) {
    if (attack == AttackKind::RandomEnvelope)
        return;
    const auto* p = std::get_if<LinearParams>(&spec.key.params);
    if (!p)
        throw std::invalid_argument(std::string(to_string(attack)) + " attack needs the linear ensemble, not " +
                                    std::string(to_string(spec.key.kind())));
    const std::size_t q = std::size_t{1} << p->field_bits;
    if (attack == AttackKind::Xor && spec.coalition_size != q + 1)
        throw std::invalid_argument("xor attack needs t = q + 1 = " + std::to_string(q + 1) + ", got t = " +
                                    std::to_string(spec.coalition_size));
    if (attack == AttackKind::Affine) {
        if (q <= 2)
            throw std::invalid_argument("affine attack needs a linear code over q > 2");
        if (spec.coalition_size != 2)
            throw std::invalid_argument("affine attack needs t = 2, got t = " + std::to_string(spec.coalition_size));
    }
}

struct AttackOutcome {
    AttackRecord record;
    bool in_envelope = false;
};

} // namespace

SimulationReport run_attack_experiment(const ExperimentSpec& spec, AttackKind attack) {
    spec.validate();
    require_applicable(spec, attack);
    const auto t0 = std::chrono::steady_clock::now();
    SimulationReport rep = start_report(spec, attack);

    std::vector<AttackOutcome> outcomes(spec.trials);
    parallel_for(spec.trials, spec.threads, [&](std::size_t i) {
        const TrialCode tc = draw_trial(spec, i);
        const Coalition u = pick_coalition(spec, tc);
        const auto fps = coalition_fingerprints(tc, u);
        RandomStream rng(derive_seed(tc.key.seed, "attack", 0));

        SymbolVector y;
        switch (attack) {
        case AttackKind::Xor:
            y = xor_attack(fps);
            break;
        case AttackKind::Affine: {
            const FieldTable& field = tc.qary->field;
            const auto alpha = static_cast<Symbol>(2 + rng.uniform_below(field.size() - 2));
            y = affine_attack(fps[0], fps[1], alpha, field);
            break;
        }
        case AttackKind::RandomEnvelope:
            y = sample_envelope(build_envelope(fps, spec.mode), rng);
            break;
        }

        AttackOutcome& out = outcomes[i];
        AttackRecord& r = out.record;
        r.trial = i;
        r.coalition.assign(u.members.begin(), u.members.end());
        r.mode = spec.mode;
        r.forgery = to_hex(y);
        r.valid = tc.validate(y).valid;
        r.success = r.valid && std::find(fps.begin(), fps.end(), y) == fps.end();
        out.in_envelope = build_envelope(fps, spec.mode).contains(y);
        if (r.success) {
            if (tc.concat) {
                const SymbolVector outer = *decode_inner_blocks(*tc.concat, y);
                r.framed = index_from_message(tc.concat->outer.message_of(outer), tc.concat->params.alphabet_size());
            } else {
                for (std::size_t v = 0; v < tc.codebook.size(); ++v) {
                    if (!u.contains(v) && tc.codebook[v] == y) {
                        r.framed = v;
                        break;
                    }
                }
            }
        }
    });

    std::uint64_t valid = 0, in_envelope = 0, framed = 0;
    for (auto& o : outcomes) {
        valid += o.record.valid;
        in_envelope += o.in_envelope;
        framed += o.record.framed.has_value();
        rep.framings += o.record.success;
        rep.transcript.push_back(std::move(o.record));
    }
    rep.counts.emplace_back("accepted", valid);
    rep.counts.emplace_back("in_envelope", in_envelope);
    rep.counts.emplace_back("framed_users", framed);
    finish_report(rep);
    rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

SimulationReport run_experiment(const ExperimentSpec& spec) {
    return spec.attack ? run_attack_experiment(spec, *spec.attack) : run_framing_experiment(spec);
}

// ---------------------------------------------------------------------------
// emission

json report_json(const SimulationReport& rep, bool include_timing) {
    json j;
    j["experiment"] = rep.attack ? "attack" : "framing";
    j["spec"] = rep.spec;
    j["spec_hash"] = rep.spec_hash;
    j["seed_rule"] = std::string(kTrialSeedRule);
    j["coalition_note"] = std::string(kCoalitionNote);
    j["trials"] = rep.trials;
    j["framings"] = rep.framings;
    j["estimate"] = rep.estimate;
    j["confidence"] = 0.95;
    j["ci_lo"] = rep.ci_lo;
    j["ci_hi"] = rep.ci_hi;
    json counts = json::object();
    for (const auto& [name, value] : rep.counts)
        counts[name] = value;
    j["counts"] = counts;
    if (include_timing)
        j["wall_clock_seconds"] = rep.wall_clock_seconds;
    if (rep.attack) {
        json transcript = json::array();
        for (const AttackRecord& r : rep.transcript) {
            json rec;
            rec["trial"] = r.trial;
            rec["coalition"] = r.coalition;
            rec["mode"] = std::string(to_string(r.mode));
            rec["forgery"] = r.forgery;
            rec["valid"] = r.valid;
            rec["framed"] = r.framed ? json(*r.framed) : json(nullptr);
            transcript.push_back(std::move(rec));
        }
        j["transcript"] = std::move(transcript);
    }
    return j;
}

std::string report_emit(const SimulationReport& rep, ReportFormat format, bool include_timing) {
    if (format == ReportFormat::Json)
        return report_json(rep, include_timing).dump(2) + "\n";
    std::string out = "spec_hash,trials,framings,estimate,ci_lo,ci_hi\n";
    out += rep.spec_hash + "," + std::to_string(rep.trials) + "," + std::to_string(rep.framings) + "," +
           format_double(rep.estimate) + "," + format_double(rep.ci_lo) + "," + format_double(rep.ci_hi) + "\n";
    return out;
}

} // namespace rfp
