#pragma once

#include "rfp/coalition.hpp"
#include "rfp/ensembles.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rfp {

enum class CoalitionPolicy { FirstT, RandomPerTrial };
enum class AttackKind { Xor, Affine, RandomEnvelope };
enum class FramingCheck { Assigned, LinearFull };

std::string_view to_string(CoalitionPolicy policy);
std::string_view to_string(AttackKind attack);
std::string_view to_string(FramingCheck check);
CoalitionPolicy parse_coalition_policy(std::string_view name);
AttackKind parse_attack_kind(std::string_view name);
FramingCheck parse_framing_check(std::string_view name);

/// One Monte Carlo experiment. Trial i runs on the key
/// (derive_seed(key.seed, "trial", i), key.params).
struct ExperimentSpec {
    Key key;
    std::size_t coalition_size = 2;
    CoalitionPolicy policy = CoalitionPolicy::FirstT;
    EnvelopeMode mode = EnvelopeMode::Narrow;
    std::size_t trials = 1;
    /// Which check decides a framing for the linear ensemble; both are
    /// always counted when the code is binary.
    FramingCheck check = FramingCheck::Assigned;
    /// Typicality tolerance used for the diagnostic counts.
    double gamma = 0.02;
    std::optional<AttackKind> attack;
    /// Execution only; never affects the report.
    std::size_t threads = 1;

    /// Throws std::invalid_argument for trials = 0, t = 0 or t > M.
    void validate() const;
};

/// JSON form (see README): ensemble, seed, params, t, coalition, mode,
/// trials, check, gamma, attack, threads. Unknown fields are rejected.
ExperimentSpec parse_experiment_spec(const nlohmann::ordered_json& j);
ExperimentSpec parse_experiment_spec_text(std::string_view text);
/// Canonical echo with a fixed field order; `threads` is left out.
nlohmann::ordered_json experiment_spec_json(const ExperimentSpec& spec);

struct AttackRecord {
    std::size_t trial = 0;
    std::vector<std::uint64_t> coalition;
    EnvelopeMode mode = EnvelopeMode::Narrow;
    std::string forgery; // hex
    bool valid = false;
    /// Valid, outside the coalition's fingerprints: a successful forgery.
    bool success = false;
    /// Innocent user whose fingerprint equals the forgery, if any.
    std::optional<std::uint64_t> framed;
};

struct SimulationReport {
    nlohmann::ordered_json spec;
    std::string spec_hash;
    std::optional<AttackKind> attack;
    std::size_t trials = 0;
    /// Framed trials, or successful forgeries for attack experiments.
    std::size_t framings = 0;
    double estimate = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 1.0;
    /// Secondary counters in a fixed order.
    std::vector<std::pair<std::string, std::uint64_t>> counts;
    double wall_clock_seconds = 0.0;
    std::vector<AttackRecord> transcript;

    std::uint64_t count(std::string_view name) const;
};

inline constexpr std::string_view kTrialSeedRule = "trial-seed/sha256(master||'trial'||le64(i))";
inline constexpr std::string_view kCoalitionNote =
    "the ensembles are exchangeable over user indices, so one coalition per trial represents every coalition "
    "of the same size; this is a modeling argument for the Monte Carlo estimate";

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
};

/// Exact binomial interval at the given two-sided confidence level.
Interval clopper_pearson(std::size_t successes, std::size_t trials, double level = 0.95);

SimulationReport run_framing_experiment(const ExperimentSpec& spec);
/// Throws std::invalid_argument when the attack does not apply to the
/// ensemble: xor needs a linear code and t = q + 1, affine a linear code over
/// q > 2 and t = 2.
SimulationReport run_attack_experiment(const ExperimentSpec& spec, AttackKind attack);
/// Dispatches on spec.attack.
SimulationReport run_experiment(const ExperimentSpec& spec);

enum class ReportFormat { Json, Csv };
ReportFormat parse_report_format(std::string_view name);

/// Stable field order. Wall-clock time is written only on request, so the
/// default output depends on the spec alone.
std::string report_emit(const SimulationReport& report, ReportFormat format, bool include_timing = false);
nlohmann::ordered_json report_json(const SimulationReport& report, bool include_timing = false);

} // namespace rfp
