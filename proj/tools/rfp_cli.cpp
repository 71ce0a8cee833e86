// rfp: command-line front end for the frameproof code library.

#include "rfp/codebook_io.hpp"
#include "rfp/coalition.hpp"
#include "rfp/ensembles.hpp"
#include "rfp/experiment.hpp"
#include "rfp/minimal.hpp"
#include "rfp/rates.hpp"
#include "rfp/validation.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <bit>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

std::string fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

// Ensemble parameters shared by gen and attack.
struct EnsembleOptions {
    std::string ensemble = "bernoulli";
    std::string seed;
    std::size_t n = 0;
    std::optional<std::size_t> users;
    std::optional<double> p;
    std::optional<int> distinct;
    double rate = 0.5;
    unsigned field_bits = 1;
    std::size_t q = 16;
    std::size_t outer_dimension = 0;
    std::optional<std::size_t> design_t;
    double xi = 0.2;
    std::optional<std::size_t> m;

    void add_to(CLI::App& app, const std::string& design_t_flag) {
        app.add_option("--ensemble", ensemble, "bernoulli, linear or concat")
            ->check(CLI::IsMember({"bernoulli", "linear", "concat"}));
        app.add_option("--seed", seed, "master seed, up to 64 hex digits")->required();
        app.add_option("--n", n, "code length (bernoulli, linear)");
        app.add_option("--M", users, "number of users (bernoulli, linear)");
        app.add_option("--p", p, "bias (bernoulli, default 0.5) or inner bias (concat, default p*)");
        app.add_option("--distinct", distinct, "resample repeated rows: 0 or 1");
        app.add_option("--rate", rate, "design rate R (linear)");
        app.add_option("--field-bits", field_bits, "s with q = 2^s (linear)");
        app.add_option("--q", q, "alphabet size (concat)");
        app.add_option("--K", outer_dimension, "outer RS dimension (concat, default from the design)");
        app.add_option(design_t_flag, design_t, "coalition size of the design (concat)");
        app.add_option("--xi", xi, "slack (concat)");
        app.add_option("--m", m, "inner length (concat, default ceil(4 log2 N))");
    }

    rfp::Key key(std::size_t fallback_t) const {
        rfp::Key key;
        key.seed = rfp::seed_from_short_hex(seed);
        switch (rfp::parse_ensemble_kind(ensemble)) {
        case rfp::EnsembleKind::Bernoulli: {
            if (!users)
                throw std::invalid_argument("--M is required for the bernoulli ensemble");
            rfp::BernoulliParams bp;
            bp.length = n;
            bp.users = *users;
            bp.bias = p.value_or(0.5);
            bp.distinct_rows = distinct.value_or(0) != 0;
            key.params = bp;
            break;
        }
        case rfp::EnsembleKind::Linear: {
            rfp::LinearParams lp;
            lp.length = n;
            lp.rate = rate;
            lp.users = users;
            lp.field_bits = field_bits;
            key.params = lp;
            break;
        }
        case rfp::EnsembleKind::Concatenated: {
            rfp::ConcatParams cp;
            const std::size_t t = design_t.value_or(fallback_t);
            if (q < 4 || q > 256 || (q & (q - 1)) != 0)
                throw std::invalid_argument("--q must be a power of two in [4, 256]");
            cp.field_bits = static_cast<unsigned>(std::countr_zero(q));
            cp.outer_dimension = outer_dimension ? outer_dimension : rfp::concat_design(t, q, xi, m).outer_dimension;
            cp.coalition_size = t;
            cp.slack = xi;
            cp.inner_length = m;
            cp.inner_bias = p;
            cp.distinct_inner_rows = distinct.value_or(1) != 0;
            key.params = cp;
            break;
        }
        }
        return key;
    }
};

// --- rates ---------------------------------------------------------------

std::string rates_table(std::size_t tmax, bool reference) {
    std::string out = reference ? "t,p_star,rate,deterministic_frameproof,fingerprinting\n" : "t,p_star,rate\n";
    for (std::size_t t = 2; t <= tmax; ++t) {
        const auto r = rfp::optimal_rate(t);
        out += std::to_string(t) + "," + fixed(r.p_star, 6) + "," + fixed(r.rate, 4);
        if (reference) {
            const auto ref = rfp::reference_rates(t);
            out += ref ? "," + fixed(ref->deterministic_frameproof, 4) + "," + fixed(ref->fingerprinting, 4) : ",,";
        }
        out += "\n";
    }
    return out;
}

// --- validate ------------------------------------------------------------

// Validator rebuilt from a codebook or key file.
struct Validator {
    std::optional<rfp::Codebook> codebook;
    std::optional<rfp::LinearCodeInstance> linear;
    std::optional<rfp::QaryLinearCodeInstance> qary;
    std::optional<rfp::ConcatenatedCodeInstance> concat;
    std::size_t length = 0;
    unsigned bits = 1;

    static Validator load(const std::string& path) {
        const std::string text = read_file(path);
        Validator v;
        rfp::Key key;
        if (text.find("\n--") != std::string::npos || text.rfind("--", 0) == 0) {
            std::istringstream in(text);
            v.codebook = rfp::read_codebook(in);
            key = v.codebook->key;
        } else {
            key = rfp::parse_key(text);
        }
        switch (key.kind()) {
        case rfp::EnsembleKind::Bernoulli:
            if (!v.codebook)
                v.codebook = rfp::sample_bernoulli(key);
            v.length = v.codebook->length();
            break;
        case rfp::EnsembleKind::Linear:
            if (std::get<rfp::LinearParams>(key.params).field_bits == 1) {
                v.linear = rfp::sample_linear(key);
                v.length = v.linear->length();
            } else {
                v.qary = rfp::sample_linear_qary(key);
                v.length = v.qary->length();
                v.bits = v.qary->field.bits();
            }
            break;
        case rfp::EnsembleKind::Concatenated:
            v.concat = rfp::build_concatenated(key);
            v.length = v.concat->length();
            break;
        }
        if (v.concat)
            v.bits = 1;
        return v;
    }

    rfp::ValidationVerdict check(const rfp::SymbolVector& y) const {
        if (concat)
            return rfp::validate_concatenated(*concat, y);
        if (linear)
            return rfp::validate_linear(*linear, y);
        if (qary)
            return rfp::validate_linear(*qary, y);
        return rfp::validate_lookup(*codebook, y);
    }
};

int run_validate(const std::string& code_path, const std::string& out_path) {
    const Validator v = Validator::load(code_path);
    std::string out;
    bool all = true;
    std::string line;
    while (std::getline(std::cin, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty())
            continue;
        json rec;
        rec["input"] = line;
        try {
            const auto verdict = v.check(rfp::from_hex(line, v.length, v.bits));
            rec["valid"] = verdict.valid;
            rec["detail"] = std::string(rfp::to_string(verdict.detail));
            rec["coordinate"] = verdict.coordinate ? json(*verdict.coordinate) : json(nullptr);
            all = all && verdict.valid;
        } catch (const std::invalid_argument& e) {
            rec["valid"] = false;
            rec["detail"] = "malformed";
            rec["error"] = e.what();
            all = false;
        }
        out += rec.dump() + "\n";
    }
    write_output(out_path, out);
    return all ? 0 : 1;
}

// --- minimal -------------------------------------------------------------

json report_to_json(const rfp::MinimalityReport& r) {
    json j;
    j["code_size"] = r.code_size;
    j["minimal_count"] = r.minimal_count;
    j["fraction"] = r.fraction;
    j["fraction_nonzero"] = r.fraction_nonzero;
    j["inspected"] = r.inspected;
    j["sampled"] = r.sampled;
    return j;
}

// --- concat-design -------------------------------------------------------

json design_to_json(const rfp::ConcatDesign& d) {
    json j;
    j["t"] = d.t;
    j["q"] = d.q;
    j["xi"] = d.xi;
    j["outer_length"] = d.outer_length;
    j["outer_dimension"] = d.outer_dimension;
    j["outer_distance"] = d.outer_distance;
    j["relative_distance"] = d.relative_distance;
    j["required_relative_distance"] = d.required_relative_distance;
    j["distance_condition"] = d.distance_condition;
    j["outer_rate"] = d.outer_rate;
    j["inner_length"] = d.inner_length;
    j["inner_bias"] = d.inner_bias;
    j["concatenated_rate"] = d.concatenated_rate;
    j["asymptotic_rate"] = d.asymptotic_rate;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Randomized frameproof codes: generation, validation, attacks and simulation"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    app.add_option("-o,--output", out_path, "output file (default stdout)");

    // rates
    auto* rates = app.add_subcommand("rates", "optimal Bernoulli rates R_t as CSV");
    std::size_t tmax = 5;
    bool reference = false;
    rates->add_option("--tmax", tmax, "largest coalition size")->check(CLI::Range(2, 64));
    rates->add_flag("--reference", reference, "append comparison columns for deterministic frameproof and fingerprinting codes");

    // gen
    auto* gen = app.add_subcommand("gen", "sample a codebook and write it");
    EnsembleOptions gen_opts;
    gen_opts.add_to(*gen, "--t");
    std::optional<std::uint64_t> max_users;
    std::string key_out;
    gen->add_option("--max-users", max_users, "concat: write only the first users");
    gen->add_option("--key-out", key_out, "also write the key file");

    // validate
    auto* validate = app.add_subcommand("validate", "validate hex fingerprints read from stdin");
    std::string code_path;
    validate->add_option("--code", code_path, "codebook or key file")->required();

    // attack
    auto* attack = app.add_subcommand("attack", "run an attack campaign");
    EnsembleOptions attack_opts;
    attack_opts.add_to(*attack, "--design-t");
    std::string attack_name;
    std::size_t attack_t = 2, attack_trials = 100, attack_threads = 1;
    std::string attack_mode = "narrow", attack_policy = "first", attack_format = "json";
    attack->add_option("--attack", attack_name, "xor, affine or random-envelope")
        ->required()
        ->check(CLI::IsMember({"xor", "affine", "random-envelope"}));
    attack->add_option("--t", attack_t, "coalition size");
    attack->add_option("--trials", attack_trials, "number of trials");
    attack->add_option("--mode", attack_mode, "narrow or wide")->check(CLI::IsMember({"narrow", "wide"}));
    attack->add_option("--coalition", attack_policy, "first or random")->check(CLI::IsMember({"first", "random"}));
    attack->add_option("--threads", attack_threads, "worker threads");
    attack->add_option("--format", attack_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run an experiment described by a JSON spec");
    std::string spec_path, sim_format = "json";
    std::optional<std::size_t> sim_threads;
    bool timing = false;
    simulate->add_option("--spec", spec_path, "experiment spec file")->required();
    simulate->add_option("--threads", sim_threads, "worker threads (overrides the spec)");
    simulate->add_option("--format", sim_format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    simulate->add_flag("--timing", timing, "include wall-clock time (output is then not reproducible)");

    // minimal
    auto* minimal = app.add_subcommand("minimal", "minimal-codeword statistics of random binary linear codes");
    std::size_t min_n = 0, instances = 1, max_dim = 24, min_threads = 1;
    double min_rate = 0.5;
    std::string min_seed;
    std::optional<std::size_t> sample;
    minimal->add_option("--n", min_n, "code length")->required();
    minimal->add_option("--rate", min_rate, "design rate R");
    minimal->add_option("--seed", min_seed, "master seed")->required();
    minimal->add_option("--instances", instances, "number of codes (1: report on the code of --seed itself)");
    minimal->add_option("--max-dim", max_dim, "enumerate exhaustively up to this dimension");
    minimal->add_option("--sample", sample, "sample size above --max-dim");
    minimal->add_option("--threads", min_threads, "worker threads");

    // concat-design
    auto* design = app.add_subcommand("concat-design", "parameters of the RS-concatenated construction");
    std::size_t design_t = 2, design_q = 16;
    double design_xi = 0.2;
    std::optional<std::size_t> design_m;
    std::optional<double> design_eps;
    design->add_option("--t", design_t, "coalition size")->required();
    design->add_option("--q", design_q, "alphabet size")->required();
    design->add_option("--xi", design_xi, "slack")->required();
    design->add_option("--m", design_m, "inner length");
    design->add_option("--eps", design_eps, "inner error rate for the outer error bound");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*rates) {
            write_output(out_path, rates_table(tmax, reference));
        } else if (*gen) {
            const rfp::Key key = gen_opts.key(2);
            const rfp::Codebook cb = rfp::expand_codebook(key, max_users);
            std::ostringstream ss;
            rfp::write_codebook(ss, cb);
            write_output(out_path, ss.str());
            if (!key_out.empty())
                write_output(key_out, rfp::format_key(key));
        } else if (*validate) {
            return run_validate(code_path, out_path);
        } else if (*attack) {
            rfp::ExperimentSpec spec;
            spec.key = attack_opts.key(attack_t);
            spec.coalition_size = attack_t;
            spec.trials = attack_trials;
            spec.mode = rfp::parse_envelope_mode(attack_mode);
            spec.policy = rfp::parse_coalition_policy(attack_policy);
            spec.threads = attack_threads;
            const auto rep = rfp::run_attack_experiment(spec, rfp::parse_attack_kind(attack_name));
            write_output(out_path, rfp::report_emit(rep, rfp::parse_report_format(attack_format)));
        } else if (*simulate) {
            rfp::ExperimentSpec spec = rfp::parse_experiment_spec_text(read_file(spec_path));
            if (sim_threads)
                spec.threads = std::max<std::size_t>(1, *sim_threads);
            const auto rep = rfp::run_experiment(spec);
            write_output(out_path, rfp::report_emit(rep, rfp::parse_report_format(sim_format), timing));
        } else if (*minimal) {
            rfp::LinearParams params;
            params.length = min_n;
            params.rate = min_rate;
            const rfp::Seed seed = rfp::seed_from_short_hex(min_seed);
            json j;
            if (instances <= 1) {
                const auto code = rfp::sample_linear(rfp::Key{seed, params});
                j = report_to_json(rfp::minimality_report(code, max_dim, sample));
                j["dimension"] = code.dimension();
            } else {
                const auto est =
                    rfp::minimal_fraction_estimate(params, instances, seed, min_threads, max_dim, sample);
                j["instances"] = est.instances;
                j["mean"] = est.mean;
                j["stderr"] = est.stderr_mean;
                j["mean_nonzero"] = est.mean_nonzero;
                j["stderr_nonzero"] = est.stderr_nonzero;
                json reports = json::array();
                for (const auto& r : est.reports)
                    reports.push_back(report_to_json(r));
                j["reports"] = std::move(reports);
            }
            write_output(out_path, j.dump(2) + "\n");
        } else if (*design) {
            const auto d = rfp::concat_design(design_t, design_q, design_xi, design_m);
            json j = design_to_json(d);
            if (design_eps)
                j["error_bound"] = rfp::concat_error_bound(d.outer_length, design_xi, *design_eps);
            write_output(out_path, j.dump(2) + "\n");
        }
    } catch (const std::exception& e) {
        std::cerr << "rfp: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
