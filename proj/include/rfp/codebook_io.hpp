#pragma once

#include "rfp/ensembles.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

namespace rfp {

/// Key file: the seed as 64 hex digits on the first line, then one
/// key=value line per parameter.
///
///   3f9a...e1
///   ensemble=bernoulli
///   n=40
///   M=16384
///   p=0.5
///   distinct=0
std::string format_key(const Key& key);
Key parse_key(std::string_view text);

/// Parameter block only (no seed line), as used in both file formats.
std::map<std::string, std::string> key_parameters(const Key& key);
Key key_from_parameters(const Seed& seed, const std::map<std::string, std::string>& params);

/// Codebook file: a header of key=value lines (seed, ensemble, params, then
/// length, alphabet and count), a line "--", and one hex fingerprint per line
/// (see to_hex).
void write_codebook(std::ostream& out, const Codebook& cb);
Codebook read_codebook(std::istream& in);

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

} // namespace rfp
