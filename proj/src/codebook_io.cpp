#include "rfp/codebook_io.hpp"

#include <bit>
#include <charconv>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rfp {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

const std::string& require(const std::map<std::string, std::string>& params, const std::string& name) {
    const auto it = params.find(name);
    if (it == params.end())
        throw std::invalid_argument("missing parameter '" + name + "'");
    return it->second;
}

std::size_t parse_count(const std::string& name, const std::string& value) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("parameter '" + name + "' is not a count: " + value);
    return out;
}

double parse_real(const std::string& name, const std::string& value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw std::invalid_argument("parameter '" + name + "' is not a number: " + value);
    return out;
}

bool parse_flag(const std::string& name, const std::string& value) {
    if (value == "1" || value == "true")
        return true;
    if (value == "0" || value == "false")
        return false;
    throw std::invalid_argument("parameter '" + name + "' is not a flag: " + value);
}

std::pair<std::string, std::string> split_assignment(std::string_view line) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw std::invalid_argument("expected key=value, got '" + std::string(line) + "'");
    return {trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
}

} // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{})
        throw std::runtime_error("failed to format double");
    return std::string(buf, ptr);
}

std::map<std::string, std::string> key_parameters(const Key& key) {
    std::map<std::string, std::string> out;
    out["ensemble"] = std::string(to_string(key.kind()));
    if (const auto* p = std::get_if<BernoulliParams>(&key.params)) {
        out["n"] = std::to_string(p->length);
        out["M"] = std::to_string(p->users);
        out["p"] = format_double(p->bias);
        out["distinct"] = p->distinct_rows ? "1" : "0";
    } else if (const auto* p = std::get_if<LinearParams>(&key.params)) {
        out["n"] = std::to_string(p->length);
        out["rate"] = format_double(p->rate);
        if (p->users)
            out["M"] = std::to_string(*p->users);
        out["field_bits"] = std::to_string(p->field_bits);
    } else if (const auto* p = std::get_if<ConcatParams>(&key.params)) {
        out["q"] = std::to_string(p->alphabet_size());
        out["K"] = std::to_string(p->outer_dimension);
        out["t"] = std::to_string(p->coalition_size);
        out["xi"] = format_double(p->slack);
        if (p->inner_length)
            out["m"] = std::to_string(*p->inner_length);
        if (p->inner_bias)
            out["p"] = format_double(*p->inner_bias);
        out["distinct"] = p->distinct_inner_rows ? "1" : "0";
    }
    return out;
}

Key key_from_parameters(const Seed& seed, const std::map<std::string, std::string>& params) {
    Key key;
    key.seed = seed;
    switch (parse_ensemble_kind(require(params, "ensemble"))) {
    case EnsembleKind::Bernoulli: {
        BernoulliParams p;
        p.length = parse_count("n", require(params, "n"));
        p.users = parse_count("M", require(params, "M"));
        if (params.count("p"))
            p.bias = parse_real("p", params.at("p"));
        if (params.count("distinct"))
            p.distinct_rows = parse_flag("distinct", params.at("distinct"));
        key.params = p;
        break;
    }
    case EnsembleKind::Linear: {
        LinearParams p;
        p.length = parse_count("n", require(params, "n"));
        p.rate = parse_real("rate", require(params, "rate"));
        if (params.count("M"))
            p.users = parse_count("M", params.at("M"));
        if (params.count("field_bits"))
            p.field_bits = static_cast<unsigned>(parse_count("field_bits", params.at("field_bits")));
        key.params = p;
        break;
    }
    case EnsembleKind::Concatenated: {
        ConcatParams p;
        const std::size_t q = parse_count("q", require(params, "q"));
        if (q < 4 || q > 256 || (q & (q - 1)) != 0)
            throw std::invalid_argument("q must be a power of two in [4, 256]");
        p.field_bits = static_cast<unsigned>(std::countr_zero(q));
        p.outer_dimension = parse_count("K", require(params, "K"));
        p.coalition_size = parse_count("t", require(params, "t"));
        p.slack = parse_real("xi", require(params, "xi"));
        if (params.count("m"))
            p.inner_length = parse_count("m", params.at("m"));
        if (params.count("p"))
            p.inner_bias = parse_real("p", params.at("p"));
        if (params.count("distinct"))
            p.distinct_inner_rows = parse_flag("distinct", params.at("distinct"));
        key.params = p;
        break;
    }
    }
    return key;
}

std::string format_key(const Key& key) {
    std::string out = seed_to_hex(key.seed) + "\n";
    // ensemble first, remaining parameters in name order
    const auto params = key_parameters(key);
    out += "ensemble=" + params.at("ensemble") + "\n";
    for (const auto& [name, value] : params)
        if (name != "ensemble")
            out += name + "=" + value + "\n";
    return out;
}

Key parse_key(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::optional<Seed> seed;
    std::map<std::string, std::string> params;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        if (!seed) {
            seed = seed_from_hex(line);
            continue;
        }
        params.insert(split_assignment(line));
    }
    if (!seed)
        throw std::invalid_argument("key file has no seed line");
    return key_from_parameters(*seed, params);
}

void write_codebook(std::ostream& out, const Codebook& cb) {
    out << "# rfp codebook v1\n";
    out << "seed=" << seed_to_hex(cb.key.seed) << "\n";
    const auto params = key_parameters(cb.key);
    out << "ensemble=" << params.at("ensemble") << "\n";
    for (const auto& [name, value] : params)
        if (name != "ensemble")
            out << name << "=" << value << "\n";
    const std::size_t q = cb.size() == 0 ? 2 : cb[0].alphabet_size();
    out << "length=" << cb.length() << "\n";
    out << "alphabet=" << q << "\n";
    out << "count=" << cb.size() << "\n";
    out << "--\n";
    for (const SymbolVector& x : cb.fingerprints)
        out << to_hex(x) << "\n";
}

Codebook read_codebook(std::istream& in) {
    std::string line;
    std::map<std::string, std::string> header;
    bool body = false;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line.front() == '#')
            continue;
        if (line == "--") {
            body = true;
            break;
        }
        header.insert(split_assignment(line));
    }
    if (!body)
        throw std::invalid_argument("codebook file has no '--' separator");
    const Seed seed = seed_from_hex(require(header, "seed"));
    std::map<std::string, std::string> params = header;
    const std::size_t length = parse_count("length", require(header, "length"));
    const std::size_t q = parse_count("alphabet", require(header, "alphabet"));
    const std::size_t count = parse_count("count", require(header, "count"));
    for (const char* meta : {"seed", "length", "alphabet", "count"})
        params.erase(meta);
    if (q < 2 || q > 256 || (q & (q - 1)) != 0)
        throw std::invalid_argument("alphabet must be a power of two in [2, 256]");
    const auto bits = static_cast<unsigned>(std::countr_zero(q));

    Codebook cb;
    cb.key = key_from_parameters(seed, params);
    cb.fingerprints.reserve(count);
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty())
            continue;
        cb.fingerprints.push_back(from_hex(line, length, bits));
    }
    if (cb.fingerprints.size() != count)
        throw std::invalid_argument("codebook declares " + std::to_string(count) + " fingerprints but holds " +
                                    std::to_string(cb.fingerprints.size()));
    return cb;
}

} // namespace rfp
