#include "renyilab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>
#include <thread>

#include "renyilab/errors.hpp"
#include "renyilab/measures.hpp"
#include "renyilab/sampling.hpp"

namespace renyi {

namespace {

void parallel_trials(int trials, int jobs, const std::function<void(int)>& body) {
    if (jobs <= 1) {
        for (int t = 0; t < trials; ++t) body(t);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    for (int j = 0; j < jobs; ++j)
        workers.emplace_back([&] {
            for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) body(t);
        });
    for (auto& w : workers) w.join();
}

double min_eigenvalue(const Mat& m) {
    return eig_hermitian(m).values.minCoeff();
}

DensityOperator sample_full_rank(SplitRng& rng, int dim, double reject_eps,
                                 const std::string& label = "S") {
    for (int tries = 0; tries < 512; ++tries) {
        DensityOperator rho = random_density(dim, dim, rng, label);
        if (min_eigenvalue(rho.rho) >= reject_eps) return rho;
    }
    throw Error("harness: full-rank rejection sampling exhausted");
}

} // namespace

RelDiffInstance sample_reldiff_instance(SplitRng& rng, int max_dim, double reject_eps,
                                        int* d_in_out, int* d_out_out) {
    for (int tries = 0; tries < 512; ++tries) {
        int d_in = 2 + static_cast<int>(rng.below(std::max(max_dim - 1, 1)));
        int d_out = 2 + static_cast<int>(rng.below(std::max(max_dim - 1, 1)));
        DensityOperator rho = random_density(d_in, d_in, rng);
        DensityOperator sigma = random_density(d_in, d_in, rng);
        QuantumChannel n = random_channel(d_in, d_out, d_in, rng);
        if (min_eigenvalue(rho.rho) < reject_eps) continue;
        if (min_eigenvalue(sigma.rho) < reject_eps) continue;
        if (min_eigenvalue(hermitize(n.apply(rho.rho))) < reject_eps) continue;
        if (min_eigenvalue(hermitize(n.apply(sigma.rho))) < reject_eps) continue;
        if (d_in_out) *d_in_out = d_in;
        if (d_out_out) *d_out_out = d_out;
        return RelDiffInstance(std::move(rho), std::move(sigma), std::move(n));
    }
    throw Error("harness: relative-entropy-difference sampling exhausted");
}

namespace {

Json aggregate_of(const Json& trials, double violation_threshold,
                  const char* margin_key = "margin") {
    double min_margin = std::numeric_limits<double>::infinity();
    long violations = 0, near = 0;
    for (const auto& row : trials) {
        if (!row.contains(margin_key)) continue;
        double m = row[margin_key].get<double>();
        min_margin = std::min(min_margin, m);
        if (m < violation_threshold) ++violations;
        else if (m < 0.0) ++near;
    }
    Json agg;
    agg["trials"] = trials.size();
    agg["min_margin"] = min_margin;
    agg["violations"] = violations;
    agg["near_violations"] = near;
    return agg;
}

Json params_of(const CampaignSpec& spec) {
    Json p;
    p["dims"] = spec.dims;
    p["alpha_grid"] = spec.alpha_grid;
    p["trials"] = spec.trials;
    p["seed"] = spec.seed;
    p["reject_eps"] = spec.reject_eps;
    p["violation_threshold"] = spec.violation_threshold;
    return p;
}

} // namespace

void CampaignSpec::validate() const {
    if (trials < 1) throw Error("campaign: trials must be >= 1");
    if (dims < 2) throw Error("campaign: dims must be >= 2");
    for (double a : alpha_grid)
        if (a <= 0.0 || std::abs(a - 1.0) < 1e-6)
            throw Error("campaign: alpha grid must avoid 0 and the unit window");
}

double CampaignReport::min_margin() const {
    return body.at("aggregate").at("min_margin").get<double>();
}

long CampaignReport::violations() const {
    return body.at("aggregate").at("violations").get<long>();
}

std::string CampaignReport::csv() const {
    const Json& trials = body.at("trials");
    std::ostringstream out;
    if (trials.empty()) return "";
    std::vector<std::string> cols;
    for (auto it = trials[0].begin(); it != trials[0].end(); ++it) cols.push_back(it.key());
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << cols[i] << (i + 1 < cols.size() ? ',' : '\n');
    out.precision(17);
    for (const auto& row : trials) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const Json& v = row.at(cols[i]);
            if (v.is_number_float())
                out << v.get<double>();
            else
                out << v.dump();
            out << (i + 1 < cols.size() ? ',' : '\n');
        }
    }
    return out.str();
}

void write_report(const CampaignReport& report, const std::string& path,
                  const std::string& csv_path) {
    Json doc;
    Json meta;
    meta["wall_time_s"] = report.wall_time_s;
    meta["generated_at"] = static_cast<long>(
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count());
    doc["meta"] = std::move(meta);
    doc["report"] = report.body;
    write_text_file(path, doc.dump(2) + "\n");
    if (!csv_path.empty()) write_text_file(csv_path, report.csv());
}

CampaignReport run_conjecture2(const CampaignSpec& spec) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    std::vector<std::pair<double, double>> pairs;
    for (std::size_t i = 0; i < spec.alpha_grid.size(); ++i)
        for (std::size_t j = i + 1; j < spec.alpha_grid.size(); ++j) {
            double a = spec.alpha_grid[i], b = spec.alpha_grid[j];
            pairs.emplace_back(std::min(a, b), std::max(a, b));
        }
    if (pairs.empty()) throw Error("conjecture2: need at least two grid points");

    const int rows_per_trial = 2;
    const int total = static_cast<int>(pairs.size()) * spec.trials;
    std::vector<Json> rows(static_cast<std::size_t>(total) * rows_per_trial);
    SplitRng root(spec.seed);

    parallel_trials(total, spec.jobs, [&](int k) {
        const int pair_idx = k / spec.trials;
        const int trial = k % spec.trials;
        auto [a, b] = pairs[pair_idx];
        SplitRng stream = root.split(static_cast<std::uint64_t>(k));
        int d_in = 0, d_out = 0;
        RelDiffInstance inst =
            sample_reldiff_instance(stream, spec.dims, spec.reject_eps, &d_in, &d_out);

        double da = delta_alpha(inst, a), db = delta_alpha(inst, b);
        double ta = delta_tilde_alpha(inst, a), tb = delta_tilde_alpha(inst, b);
        for (int v = 0; v < 2; ++v) {
            Json row;
            row["pair"] = pair_idx;
            row["trial"] = trial;
            row["seed"] = stream.key();
            row["d_in"] = d_in;
            row["d_out"] = d_out;
            row["alpha"] = a;
            row["beta"] = b;
            row["variant"] = v == 0 ? "delta" : "delta_tilde";
            row["delta_alpha"] = v == 0 ? da : ta;
            row["delta_beta"] = v == 0 ? db : tb;
            row["margin"] = v == 0 ? db - da : tb - ta;
            rows[static_cast<std::size_t>(k) * 2 + v] = std::move(row);
        }
    });

    CampaignReport report;
    Json trials = Json::array();
    for (auto& r : rows) trials.push_back(std::move(r));
    report.body["name"] = spec.name.empty() ? "conjecture2-delta-mono" : spec.name;
    report.body["params"] = params_of(spec);
    report.body["aggregate"] = aggregate_of(trials, spec.violation_threshold);
    report.body["trials"] = std::move(trials);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

CampaignReport run_conjecture1(const CampaignSpec& spec) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    const auto& grid = spec.alpha_grid;
    if (grid.empty()) throw Error("conjecture1: empty alpha grid");

    const int rows_per_trial = static_cast<int>(grid.size()) * 2;
    std::vector<Json> rows(static_cast<std::size_t>(spec.trials) * rows_per_trial);
    SplitRng root(spec.seed);

    parallel_trials(spec.trials, spec.jobs, [&](int t) {
        SplitRng stream = root.split(static_cast<std::uint64_t>(t));
        int da = 2 + static_cast<int>(stream.below(spec.dims - 1));
        int db = 2 + static_cast<int>(stream.below(spec.dims - 1));
        int de = 2 + static_cast<int>(stream.below(spec.dims - 1));
        SubsystemShape shape({da, db, de}, {"A", "B", "E"});
        DensityOperator rho = random_density(shape, static_cast<int>(shape.total_dim()), stream);
        int da2 = 2 + static_cast<int>(stream.below(spec.dims - 1));
        int db2 = 2 + static_cast<int>(stream.below(spec.dims - 1));
        QuantumChannel on_a = random_channel(da, da2, da, stream);
        QuantumChannel on_b = random_channel(db, db2, db, stream);
        DensityOperator rho_a = apply_channel(on_a, rho, "A");
        DensityOperator rho_b = apply_channel(on_b, rho, "B");

        for (std::size_t g = 0; g < grid.size(); ++g) {
            double alpha = grid[g];
            double before = renyi_cmi(rho, {"A"}, {"B"}, {"E"}, alpha);
            for (int side = 0; side < 2; ++side) {
                double after = side == 0
                                   ? renyi_cmi(rho_a, {"A"}, {"B"}, {"E"}, alpha)
                                   : renyi_cmi(rho_b, {"A"}, {"B"}, {"E"}, alpha);
                Json row;
                row["trial"] = t;
                row["seed"] = stream.key();
                row["alpha"] = alpha;
                row["side"] = side == 0 ? "A" : "B";
                row["before"] = before;
                row["after"] = after;
                row["margin"] = before - after;
                rows[static_cast<std::size_t>(t) * rows_per_trial + g * 2 + side] =
                    std::move(row);
            }
        }
    });

    CampaignReport report;
    Json trials = Json::array();
    for (auto& r : rows) trials.push_back(std::move(r));
    Json agg = aggregate_of(trials, spec.violation_threshold);
    double min_b = std::numeric_limits<double>::infinity();
    long viol_b = 0;
    for (const auto& row : trials)
        if (row["side"] == "B") {
            double m = row["margin"].get<double>();
            min_b = std::min(min_b, m);
            if (m < -1e-9) ++viol_b;
        }
    agg["control_min_margin"] = min_b;
    agg["control_violations"] = viol_b;
    report.body["name"] = spec.name.empty() ? "conjecture1-cmi-local-mono" : spec.name;
    report.body["params"] = params_of(spec);
    report.body["aggregate"] = std::move(agg);
    report.body["trials"] = std::move(trials);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

CampaignReport run_cmi_alpha_mono(const CampaignSpec& spec) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> grid = spec.alpha_grid;
    std::sort(grid.begin(), grid.end());
    if (grid.size() < 2) throw Error("cmi_alpha_mono: need at least two grid points");

    const int rows_per_trial = static_cast<int>(grid.size()) - 1;
    std::vector<Json> rows(static_cast<std::size_t>(spec.trials) * rows_per_trial);
    SplitRng root(spec.seed);

    parallel_trials(spec.trials, spec.jobs, [&](int t) {
        SplitRng stream = root.split(static_cast<std::uint64_t>(t));
        int da = 2 + static_cast<int>(stream.below(spec.dims - 1));
        int db = 2 + static_cast<int>(stream.below(spec.dims - 1));
        int dc = 2 + static_cast<int>(stream.below(spec.dims - 1));
        SubsystemShape shape({da, db, dc}, {"A", "B", "C"});
        DensityOperator rho = random_density(shape, static_cast<int>(shape.total_dim()), stream);
        std::vector<double> vals;
        for (double a : grid) vals.push_back(sandwiched_cmi(rho, {"A"}, {"B"}, {"C"}, a));
        for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
            Json row;
            row["trial"] = t;
            row["seed"] = stream.key();
            row["alpha_lo"] = grid[g];
            row["alpha_hi"] = grid[g + 1];
            row["value_lo"] = vals[g];
            row["value_hi"] = vals[g + 1];
            row["margin"] = vals[g + 1] - vals[g];
            rows[static_cast<std::size_t>(t) * rows_per_trial + g] = std::move(row);
        }
    });

    CampaignReport report;
    Json trials = Json::array();
    for (auto& r : rows) trials.push_back(std::move(r));
    report.body["name"] = spec.name.empty() ? "cmi-alpha-mono" : spec.name;
    report.body["params"] = params_of(spec);
    report.body["aggregate"] = aggregate_of(trials, spec.violation_threshold);
    report.body["trials"] = std::move(trials);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

std::string remainder_kind_name(RemainderKind kind) {
    switch (kind) {
        case RemainderKind::Monotonicity: return "remainder-monotonicity";
        case RemainderKind::JointConvexity: return "remainder-joint-convexity";
        case RemainderKind::Holevo: return "remainder-holevo";
        case RemainderKind::Discord: return "remainder-discord";
    }
    return "remainder";
}

CampaignReport run_remainder_campaign(const CampaignSpec& spec, RemainderKind kind) {
    spec.validate();
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Json> rows(spec.trials);
    SplitRng root(spec.seed);

    parallel_trials(spec.trials, spec.jobs, [&](int t) {
        SplitRng stream = root.split(static_cast<std::uint64_t>(t));
        Json row;
        row["trial"] = t;
        row["seed"] = stream.key();
        switch (kind) {
            case RemainderKind::Monotonicity: {
                RelDiffInstance inst = sample_reldiff_instance(stream, spec.dims, spec.reject_eps);
                row["margin"] = monotonicity_remainder(inst);
                break;
            }
            case RemainderKind::JointConvexity: {
                int d = 2 + static_cast<int>(stream.below(spec.dims - 1));
                int n = 2 + static_cast<int>(stream.below(2));
                std::vector<double> probs = random_probs(n, stream);
                std::vector<DensityOperator> rhos, sigmas;
                for (int x = 0; x < n; ++x) {
                    rhos.push_back(sample_full_rank(stream, d, spec.reject_eps, "B"));
                    sigmas.push_back(sample_full_rank(stream, d, spec.reject_eps, "B"));
                }
                JointConvexityResult r = joint_convexity_remainder(probs, rhos, sigmas);
                row["margin"] = r.margin;
                row["equivalence_gap"] = r.equivalence_gap;
                break;
            }
            case RemainderKind::Holevo: {
                int d = 2 + static_cast<int>(stream.below(spec.dims - 1));
                int n_states = 3;
                std::vector<double> probs = random_probs(n_states, stream);
                std::vector<DensityOperator> rho_bs;
                for (int x = 0; x < n_states; ++x)
                    rho_bs.push_back(sample_full_rank(stream, d, spec.reject_eps, "B"));
                Povm povm = random_rank_one_povm(d, d * d, stream);
                HolevoRemainderResult r = holevo_remainder(probs, rho_bs, povm);
                row["holevo_gap"] = r.holevo_gap;
                row["margin"] = r.margin;
                break;
            }
            case RemainderKind::Discord: {
                int da = 2, db = 2 + static_cast<int>(stream.below(spec.dims - 1));
                SubsystemShape shape({da, db}, {"A", "B"});
                DensityOperator rho =
                    random_density(shape, static_cast<int>(shape.total_dim()), stream);
                Povm povm = random_rank_one_povm(da, da * da, stream);
                row["margin"] = discord_remainder(rho, povm);
                break;
            }
        }
        rows[t] = std::move(row);
    });

    CampaignReport report;
    Json trials = Json::array();
    for (auto& r : rows) trials.push_back(std::move(r));
    report.body["name"] = spec.name.empty() ? remainder_kind_name(kind) : spec.name;
    report.body["params"] = params_of(spec);
    report.body["aggregate"] = aggregate_of(trials, spec.violation_threshold);
    report.body["trials"] = std::move(trials);
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace renyi
