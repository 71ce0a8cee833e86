// Python bindings for the main operations. Fingerprints cross the boundary
// as hex strings (the codebook file form) or as lists of symbols.

#include "rfp/codebook_io.hpp"
#include "rfp/coalition.hpp"
#include "rfp/experiment.hpp"
#include "rfp/minimal.hpp"
#include "rfp/rates.hpp"
#include "rfp/validation.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <string>
#include <variant>

namespace py = pybind11;
using namespace rfp;

namespace {

using ParamValue = std::variant<bool, std::size_t, double, std::string>;

Key make_key(const std::string& ensemble, const std::string& seed, const std::map<std::string, ParamValue>& params) {
    std::map<std::string, std::string> text{{"ensemble", ensemble}};
    for (const auto& [name, value] : params) {
        text[name] = std::visit(
            [](const auto& v) -> std::string {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, bool>)
                    return v ? "1" : "0";
                else if constexpr (std::is_same_v<T, std::size_t>)
                    return std::to_string(v);
                else if constexpr (std::is_same_v<T, double>)
                    return format_double(v);
                else
                    return v;
            },
            value);
    }
    return key_from_parameters(seed_from_short_hex(seed), text);
}

std::vector<SymbolVector> from_symbol_lists(const std::vector<std::vector<unsigned>>& words, unsigned bits) {
    std::vector<SymbolVector> out;
    for (const auto& w : words) {
        std::vector<Symbol> s(w.begin(), w.end());
        for (unsigned x : w)
            if (x >> bits)
                throw std::invalid_argument("symbol out of range for the alphabet");
        out.push_back(SymbolVector::from_symbols(s, bits));
    }
    return out;
}

py::dict verdict_dict(const ValidationVerdict& v) {
    py::dict d;
    d["valid"] = v.valid;
    d["detail"] = std::string(to_string(v.detail));
    d["coordinate"] = v.coordinate ? py::object(py::int_(*v.coordinate)) : py::object(py::none());
    return d;
}

// Validator for any ensemble: lookup for Bernoulli codebooks, parity checks
// for linear codes, the two-step check for concatenated codes.
class Validator {
public:
    explicit Validator(const Key& key) : key_(key) {
        switch (key.kind()) {
        case EnsembleKind::Bernoulli:
            lookup_.emplace(sample_bernoulli(key));
            length_ = std::get<BernoulliParams>(key.params).length;
            break;
        case EnsembleKind::Linear:
            if (std::get<LinearParams>(key.params).field_bits == 1)
                linear_ = sample_linear(key);
            else
                qary_ = sample_linear_qary(key);
            length_ = std::get<LinearParams>(key.params).length;
            bits_ = std::get<LinearParams>(key.params).field_bits;
            break;
        case EnsembleKind::Concatenated:
            concat_ = build_concatenated(key);
            length_ = concat_->length();
            break;
        }
    }

    py::dict validate(const std::string& hex) const {
        const SymbolVector y = from_hex(hex, length_, bits_);
        if (lookup_)
            return verdict_dict(lookup_->validate(y));
        if (linear_)
            return verdict_dict(validate_linear(*linear_, y));
        if (qary_)
            return verdict_dict(validate_linear(*qary_, y));
        return verdict_dict(validate_concatenated(*concat_, y));
    }

    std::size_t length() const { return length_; }
    unsigned bits_per_symbol() const { return bits_; }

private:
    Key key_;
    std::optional<LookupValidator> lookup_;
    std::optional<LinearCodeInstance> linear_;
    std::optional<QaryLinearCodeInstance> qary_;
    std::optional<ConcatenatedCodeInstance> concat_;
    std::size_t length_ = 0;
    unsigned bits_ = 1;
};

} // namespace

PYBIND11_MODULE(rfpcodes, m) {
    m.doc() = "Randomized frameproof codes: ensembles, validation, attacks and experiments";

    m.def("rate_bound", &rate_bound, py::arg("p"), py::arg("t"));
    m.def(
        "optimal_rate",
        [](std::size_t t) {
            const auto r = optimal_rate(t);
            return py::make_tuple(r.p_star, r.rate);
        },
        py::arg("t"), "(p_star, rate) maximising rate_bound(p, t)");
    m.def("binary_entropy", &binary_entropy, py::arg("p"));
    m.def("divergence", &divergence, py::arg("a"), py::arg("b"));
    m.def("concat_error_bound", &concat_error_bound, py::arg("N"), py::arg("xi"), py::arg("eps"));
    m.def(
        "concat_design",
        [](std::size_t t, std::size_t q, double xi, std::optional<std::size_t> m) {
            const auto d = m ? concat_design(t, q, xi, *m) : concat_design(t, q, xi);
            py::dict out;
            out["N"] = d.outer_length;
            out["K"] = d.outer_dimension;
            out["Delta"] = d.outer_distance;
            out["relative_distance"] = d.relative_distance;
            out["required_relative_distance"] = d.required_relative_distance;
            out["distance_condition"] = d.distance_condition;
            out["m"] = d.inner_length;
            out["inner_bias"] = d.inner_bias;
            out["concatenated_rate"] = d.concatenated_rate;
            out["asymptotic_rate"] = d.asymptotic_rate;
            return out;
        },
        py::arg("t"), py::arg("q"), py::arg("xi"), py::arg("m") = py::none());

    m.def(
        "codebook",
        [](const std::string& ensemble, const std::string& seed, const std::map<std::string, ParamValue>& params,
           std::optional<std::uint64_t> max_users) {
            const Codebook cb = expand_codebook(make_key(ensemble, seed, params), max_users);
            std::vector<std::string> out;
            out.reserve(cb.size());
            for (const auto& x : cb.fingerprints)
                out.push_back(to_hex(x));
            return out;
        },
        py::arg("ensemble"), py::arg("seed"), py::arg("params"), py::arg("max_users") = py::none(),
        "Hex fingerprints of users 0, 1, ... for the keyed ensemble");
    m.def(
        "key_text",
        [](const std::string& ensemble, const std::string& seed, const std::map<std::string, ParamValue>& params) {
            return format_key(make_key(ensemble, seed, params));
        },
        py::arg("ensemble"), py::arg("seed"), py::arg("params"));

    py::class_<Validator>(m, "Validator")
        .def(py::init([](const std::string& ensemble, const std::string& seed,
                         const std::map<std::string, ParamValue>& params) {
                 return Validator(make_key(ensemble, seed, params));
             }),
             py::arg("ensemble"), py::arg("seed"), py::arg("params"))
        .def("validate", &Validator::validate, py::arg("fingerprint"))
        .def_property_readonly("length", &Validator::length)
        .def_property_readonly("bits_per_symbol", &Validator::bits_per_symbol);

    m.def(
        "envelope_contains",
        [](const std::vector<std::vector<unsigned>>& coalition, const std::vector<unsigned>& y, unsigned bits,
           const std::string& mode) {
            const auto fps = from_symbol_lists(coalition, bits);
            const auto env = build_envelope(fps, parse_envelope_mode(mode));
            return envelope_contains(env, from_symbol_lists({y}, bits).front());
        },
        py::arg("coalition"), py::arg("y"), py::arg("bits") = 1, py::arg("mode") = "narrow");
    m.def(
        "envelope_size",
        [](const std::vector<std::vector<unsigned>>& coalition, unsigned bits, const std::string& mode) {
            return build_envelope(from_symbol_lists(coalition, bits), parse_envelope_mode(mode)).cardinality();
        },
        py::arg("coalition"), py::arg("bits") = 1, py::arg("mode") = "narrow");

    m.def(
        "simulate",
        [](const std::string& spec_json, std::optional<std::size_t> threads, const std::string& format) {
            ExperimentSpec spec = parse_experiment_spec_text(spec_json);
            if (threads)
                spec.threads = std::max<std::size_t>(1, *threads);
            SimulationReport report;
            {
                py::gil_scoped_release release;
                report = run_experiment(spec);
            }
            return report_emit(report, parse_report_format(format));
        },
        py::arg("spec"), py::arg("threads") = py::none(), py::arg("format") = "json",
        "Run an experiment from its JSON spec and return the report text");
    m.def(
        "minimal_fraction",
        [](std::size_t n, double rate, std::size_t instances, const std::string& seed, std::size_t threads) {
            MinimalFractionEstimate e;
            {
                py::gil_scoped_release release;
                e = minimal_fraction_estimate(LinearParams{n, rate}, instances, seed_from_short_hex(seed), threads);
            }
            py::dict out;
            out["instances"] = e.instances;
            out["mean"] = e.mean;
            out["stderr"] = e.stderr_mean;
            out["mean_nonzero"] = e.mean_nonzero;
            out["stderr_nonzero"] = e.stderr_nonzero;
            return out;
        },
        py::arg("n"), py::arg("rate"), py::arg("instances"), py::arg("seed"), py::arg("threads") = 1);
    m.def(
        "clopper_pearson",
        [](std::size_t k, std::size_t n, double level) {
            const auto ci = clopper_pearson(k, n, level);
            return py::make_tuple(ci.lo, ci.hi);
        },
        py::arg("successes"), py::arg("trials"), py::arg("level") = 0.95);
}
