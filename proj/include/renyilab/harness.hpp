#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "renyilab/json_io.hpp"
#include "renyilab/reldiff.hpp"

namespace renyi {

// Reproducible randomized campaign: every trial draws its own stream from
// (seed, trial index), so any row can be regenerated bit-exactly.
struct CampaignSpec {
    std::string name;
    int dims = 3;
    std::vector<double> alpha_grid;
    int trials = 1000;
    std::uint64_t seed = 1;
    double reject_eps = 1e-6;
    double violation_threshold = -1e-8;
    int jobs = 1;

    void validate() const;
};

struct CampaignReport {
    Json body;              // {"name", "params", "trials", "aggregate"}
    double wall_time_s = 0; // metadata only, never part of the body

    std::string body_string() const { return body.dump(2); }
    std::string csv() const;
    double min_margin() const;
    long violations() const;
};

// Writes {"meta": {...timing...}, "report": body} to `path` and, when
// csv_path is nonempty, one CSV row per trial.
void write_report(const CampaignReport& report, const std::string& path,
                  const std::string& csv_path = "");

// Local-channel monotonicity of the Renyi CMI: CPTP maps on A (conjectured)
// with the proven B side as a control.
CampaignReport run_conjecture1(const CampaignSpec& spec);

// Monotonicity of Delta_alpha and the sandwiched variant in alpha over all
// ordered pairs from the grid; random states and channels with input/output
// dimensions up to spec.dims.
CampaignReport run_conjecture2(const CampaignSpec& spec);

// Monotonicity of the sandwiched CMI in alpha; evidence only.
CampaignReport run_cmi_alpha_mono(const CampaignSpec& spec);

// Rejection-sampled positive-definite instance for the reldiff campaigns;
// input/output dimensions are drawn in [2, max_dim].
RelDiffInstance sample_reldiff_instance(SplitRng& rng, int max_dim, double reject_eps,
                                        int* d_in = nullptr, int* d_out = nullptr);

enum class RemainderKind { Monotonicity, JointConvexity, Holevo, Discord };

// Remainder-term margins for the named inequality; margins are recorded with
// seeds, violations counted against spec.violation_threshold.
CampaignReport run_remainder_campaign(const CampaignSpec& spec, RemainderKind kind);

std::string remainder_kind_name(RemainderKind kind);

struct PropertyOptions {
    std::uint64_t seed = 20150408;
    double tol_override = 0.0; // > 0 replaces every gated tolerance
    std::ostream* out = nullptr;
    bool quick = false; // smaller counts for unit-test use
};

struct PropertyCheck {
    std::string name;
    bool gated = true;
    bool passed = true;
    std::string detail;
};

struct PropertyResult {
    std::vector<PropertyCheck> checks;
    int gated_failures = 0;

    bool ok() const { return gated_failures == 0; }
};

// Fixed-seed battery of every module's invariants; non-conjectural checks
// gate, conjectural margins are reported only.
PropertyResult run_property_suite(const PropertyOptions& options);

} // namespace renyi
