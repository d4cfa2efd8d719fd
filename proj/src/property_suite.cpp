#include <cmath>
#include <iostream>
#include <sstream>

#include "renyilab/harness.hpp"
#include "renyilab/measures.hpp"
#include "renyilab/sampling.hpp"

namespace renyi {

namespace {

struct Suite {
    const PropertyOptions& opt;
    PropertyResult result;

    double tol(double spec_tol) const {
        return opt.tol_override > 0.0 ? opt.tol_override : spec_tol;
    }

    void record(const std::string& name, bool gated, bool passed,
                const std::string& detail) {
        result.checks.push_back({name, gated, passed, detail});
        if (gated && !passed) ++result.gated_failures;
        if (opt.out) {
            (*opt.out) << (passed ? "[PASS] " : (gated ? "[FAIL] " : "[info] ")) << name
                       << " (" << detail << ")\n";
        }
    }

    void gate(const std::string& name, double worst, double threshold) {
        std::ostringstream ss;
        ss << "worst=" << worst << " threshold=" << threshold;
        record(name, true, worst <= threshold, ss.str());
    }

    void report_margin(const std::string& name, double min_margin) {
        std::ostringstream ss;
        ss << "min_margin=" << min_margin;
        record(name, false, min_margin >= -1e-8, ss.str());
    }
};

Mat random_psd(SplitRng& rng, int d, int rank) {
    Mat g(d, rank);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < rank; ++j) g(i, j) = rng.complex_gaussian();
    Mat w = g * g.adjoint();
    return w / w.trace().real();
}

} // namespace

PropertyResult run_property_suite(const PropertyOptions& opt) {
    Suite s{opt, {}};
    SplitRng root(opt.seed);
    const int scale = opt.quick ? 4 : 1;

    // --- matrix calculus ---------------------------------------------------
    {
        SplitRng rng = root.split(1);
        double worst = 0.0;
        const std::vector<std::pair<double, double>> exps = {
            {0.5, 0.5}, {1.0 / 3.0, 2.0 / 3.0}, {0.25, 1.5}, {-1.0, 1.0}, {0.0, 1.0}};
        for (int t = 0; t < 20 / scale + 1; ++t) {
            int d = 2 + static_cast<int>(rng.below(4));
            Mat a = random_psd(rng, d, d);
            Mat p = support_projector(a);
            for (auto [x, y] : exps) {
                Mat lhs = p * (matrix_power(a, x) * matrix_power(a, y)) * p;
                Mat rhs = p * matrix_power(a, x + y) * p;
                worst = std::max(worst, (lhs - rhs).norm() / a.norm());
            }
        }
        s.gate("linop.power-addition-on-support", worst, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(2);
        double worst = 0.0;
        for (int t = 0; t < 20 / scale + 1; ++t) {
            int d = 2 + static_cast<int>(rng.below(4));
            Mat a = random_psd(rng, d, std::max(1, d - 1));
            Mat p = support_projector(a);
            worst = std::max(worst, (p * p - p).cwiseAbs().maxCoeff());
            worst = std::max(worst, (p * a - a * p).cwiseAbs().maxCoeff());
        }
        s.gate("linop.support-projector", worst, s.tol(1e-10));
    }
    {
        SplitRng rng = root.split(3);
        double worst_tr = 0.0, worst_neg = 0.0, worst_comp = 0.0;
        SubsystemShape abc({2, 3, 2}, {"A", "B", "C"});
        for (int t = 0; t < 20 / scale + 1; ++t) {
            DensityOperator rho = random_density(abc, 12, rng);
            Mat m_ab = partial_trace(rho.rho, abc, {"A", "B"});
            worst_tr = std::max(worst_tr, std::abs(m_ab.trace().real() - 1.0));
            worst_neg = std::max(worst_neg, -eig_hermitian(hermitize(m_ab)).values.minCoeff());
            Mat m_c1 = partial_trace(rho.rho, abc, {"C"});
            SubsystemShape bc = abc.subshape({"B", "C"});
            Mat m_c2 = partial_trace(partial_trace(rho.rho, abc, {"B", "C"}), bc, {"C"});
            worst_comp = std::max(worst_comp, (m_c1 - m_c2).cwiseAbs().maxCoeff());
        }
        s.gate("linop.partial-trace-trace-preserving", worst_tr, s.tol(1e-12));
        s.gate("linop.partial-trace-positivity", worst_neg, s.tol(1e-10));
        s.gate("linop.partial-trace-composition", worst_comp, s.tol(1e-12));
    }

    // --- states ------------------------------------------------------------
    {
        SplitRng rng = root.split(4);
        double worst = 0.0;
        for (int t = 0; t < 20 / scale + 1; ++t) {
            DensityOperator rho = random_density(4, 3, rng, "S");
            PureState psi = purify(rho);
            Mat back = partial_trace(psi.amplitudes * psi.amplitudes.adjoint(), psi.shape,
                                     {"S"});
            worst = std::max(worst, trace_norm(back - rho.rho));
        }
        s.gate("qstates.purify-partial-trace-roundtrip", worst, s.tol(1e-10));
    }
    {
        SplitRng rng = root.split(5);
        double worst = 0.0;
        for (int t = 0; t < 500 / scale; ++t) {
            DensityOperator r1 = random_density(2, 1 + t % 2, rng, "S");
            DensityOperator r2 = random_density(2, 2, rng, "S");
            double f = fidelity(r1, r2);
            double td = 0.5 * trace_distance(r1, r2);
            worst = std::max(worst, (1.0 - std::sqrt(f)) - td);
            worst = std::max(worst, td - std::sqrt(std::max(1.0 - f, 0.0)));
        }
        s.gate("qstates.fuchs-van-de-graaf", worst, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(6);
        double worst = 0.0;
        for (int t = 0; t < 50 / scale + 1; ++t) {
            int d = 2 + static_cast<int>(rng.below(5));
            Mat u = random_unitary(d, rng);
            worst = std::max(
                worst, (u.adjoint() * u - Mat::Identity(d, d)).cwiseAbs().maxCoeff());
        }
        s.gate("qstates.haar-unitary-isometric", worst, s.tol(1e-12));
    }
    if (!opt.quick) {
        SplitRng rng = root.split(7);
        Mat acc = Mat::Zero(2, 2);
        const int n = 10000;
        for (int t = 0; t < n; ++t) acc += random_density(2, 2, rng, "S").rho;
        acc /= n;
        double worst = (acc - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff();
        s.gate("qstates.haar-mean-maximally-mixed", worst, 0.02);
    }
    {
        SplitRng a(99), b(99);
        Mat ua = random_unitary(3, a), ub = random_unitary(3, b);
        s.gate("qstates.seeded-determinism", (ua - ub).cwiseAbs().maxCoeff(), 0.0);
    }

    // --- channels ----------------------------------------------------------
    {
        SplitRng rng = root.split(8);
        double worst_psd = 0.0, worst_tp = 0.0;
        for (int t = 0; t < 50 / scale + 1; ++t) {
            int d_in = 2 + static_cast<int>(rng.below(2));
            int d_out = 2 + static_cast<int>(rng.below(2));
            QuantumChannel n = random_channel(d_in, d_out, d_in, rng);
            Mat choi = choi_matrix(n);
            worst_psd = std::max(worst_psd, -eig_hermitian(hermitize(choi)).values.minCoeff());
            SubsystemShape pair({d_in, d_out}, {"in", "out"});
            Mat marg = partial_trace(choi, pair, {"in"});
            worst_tp = std::max(
                worst_tp,
                (marg - Mat::Identity(d_in, d_in) / d_in).cwiseAbs().maxCoeff());
        }
        s.gate("channels.choi-psd", worst_psd, s.tol(1e-9));
        s.gate("channels.choi-trace-preserving", worst_tp, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(9);
        double worst = 0.0;
        for (int t = 0; t < 100 / scale; ++t) {
            int d = 2 + static_cast<int>(rng.below(2));
            int n_out = d + static_cast<int>(rng.below(3));
            Povm povm = (t % 2 == 0) ? random_rank_one_povm(d, n_out, rng)
                                     : random_mixed_rank_povm(d, n_out, rng);
            QuantumChannel meas = measurement_channel(povm);
            Isometry u = measurement_dilation(povm);
            DensityOperator rho = random_density(d, d, rng, "A");
            DensityOperator dilated = isometry_apply(u, rho, "A");
            Mat out_x = partial_trace(dilated.rho, dilated.shape, {"X"});
            Mat direct = meas.apply(rho.rho);
            worst = std::max(worst, (out_x - direct).norm());
        }
        s.gate("channels.dilation-reproduces-measurement", worst, s.tol(1e-10));
    }
    {
        SplitRng rng = root.split(10);
        double worst = 0.0, worst_choi = 0.0;
        for (int t = 0; t < 100 / scale; ++t) {
            int d = 2 + static_cast<int>(rng.below(2));
            DensityOperator sigma = random_density(d, d, rng);
            if (eig_hermitian(sigma.rho).values.minCoeff() < 1e-4) continue;
            QuantumChannel n = random_channel(d, d, d, rng);
            QuantumChannel t_map = petz_map(sigma, n);
            Mat recovered = t_map.apply(hermitize(n.apply(sigma.rho)));
            worst = std::max(worst, trace_norm(recovered - sigma.rho));
            worst_choi = std::max(
                worst_choi, -eig_hermitian(hermitize(choi_matrix(t_map))).values.minCoeff());
        }
        s.gate("channels.petz-fixed-point", worst, s.tol(1e-8));
        s.gate("channels.petz-choi-psd", worst_choi, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(11);
        double worst_unital = 0.0, worst_pair = 0.0, worst_stine = 0.0;
        for (int t = 0; t < 50 / scale + 1; ++t) {
            int d_in = 2 + static_cast<int>(rng.below(2));
            int d_out = 2 + static_cast<int>(rng.below(2));
            QuantumChannel n = random_channel(d_in, d_out, d_in, rng);
            worst_unital = std::max(
                worst_unital, (n.adjoint_apply(Mat::Identity(d_out, d_out)) -
                               Mat::Identity(d_in, d_in))
                                  .cwiseAbs()
                                  .maxCoeff());
            DensityOperator rho = random_density(d_in, d_in, rng);
            Mat x = random_psd(rng, d_out, d_out);
            double lhs = (n.apply(rho.rho) * x).trace().real();
            double rhs = (rho.rho * n.adjoint_apply(x)).trace().real();
            worst_pair = std::max(worst_pair, std::abs(lhs - rhs));
            Isometry v = stinespring(n);
            DensityOperator lifted = isometry_apply(v, rho, rho.shape.labels[0]);
            Mat env_traced = partial_trace(lifted.rho, lifted.shape, {"B"});
            worst_stine = std::max(worst_stine, (env_traced - n.apply(rho.rho)).norm());
        }
        s.gate("channels.adjoint-unital", worst_unital, s.tol(1e-10));
        s.gate("channels.adjoint-trace-pairing", worst_pair, s.tol(1e-10));
        s.gate("channels.stinespring-roundtrip", worst_stine, s.tol(1e-10));
    }

    // --- entropic functionals ------------------------------------------------
    {
        SplitRng rng = root.split(12);
        double worst = 0.0;
        for (int t = 0; t < 200 / scale; ++t) {
            int d = 2 + static_cast<int>(rng.below(3));
            int d_out = 2 + static_cast<int>(rng.below(3));
            DensityOperator rho = random_density(d, d, rng);
            DensityOperator sig = random_density(d, d, rng);
            QuantumChannel n = random_channel(d, d_out, d, rng);
            double alpha = std::vector<double>{0.3, 0.7, 1.5, 2.0}[t % 4];
            double before = renyi_relative_entropy(rho.rho, sig.rho, alpha);
            double after = renyi_relative_entropy(hermitize(n.apply(rho.rho)),
                                                  hermitize(n.apply(sig.rho)), alpha);
            if (std::isfinite(before) && std::isfinite(after))
                worst = std::max(worst, after - before);
        }
        s.gate("renyi-info.data-processing", worst, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(13);
        const std::vector<double> grid{0.25, 0.5, 0.75, 1.25, 1.5, 2.0};
        double worst = 0.0;
        for (int t = 0; t < 50 / scale + 1; ++t) {
            int d = 2 + static_cast<int>(rng.below(3));
            DensityOperator rho = random_density(d, d, rng);
            DensityOperator sig = random_density(d, d, rng);
            double prev_d = -infinite_value(), prev_s = -infinite_value();
            for (double a : grid) {
                double da = renyi_relative_entropy(rho.rho, sig.rho, a);
                double ds = sandwiched_relative_entropy(rho.rho, sig.rho, a);
                worst = std::max(worst, prev_d - da);
                worst = std::max(worst, prev_s - ds);
                prev_d = da;
                prev_s = ds;
            }
        }
        s.gate("renyi-info.alpha-monotone-relative-entropies", worst, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(14);
        double worst = 0.0;
        SubsystemShape abe({2, 2, 2}, {"A", "B", "E"});
        for (int t = 0; t < 200 / scale; ++t) {
            DensityOperator rho = random_density(abe, 8, rng);
            QuantumChannel n = random_channel(2, 2, 2, rng);
            DensityOperator mapped = apply_channel(n, rho, "B");
            double alpha = std::vector<double>{0.3, 0.7, 1.5, 2.0}[t % 4];
            double before = renyi_cmi(rho, {"A"}, {"B"}, {"E"}, alpha);
            double after = renyi_cmi(mapped, {"A"}, {"B"}, {"E"}, alpha);
            worst = std::max(worst, after - before);
        }
        s.gate("renyi-info.cmi-monotone-on-B", worst, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(15);
        double worst = 0.0, worst_neg = 0.0;
        SubsystemShape abcd({2, 2, 2, 2}, {"A", "B", "C", "D"});
        for (int t = 0; t < 50 / scale + 1; ++t) {
            PureState phi = random_pure(abcd, rng);
            DensityOperator rho = phi.density();
            for (double a : {0.3, 0.7, 1.5, 2.0}) {
                worst = std::max(worst, std::abs(renyi_cmi(rho, {"A"}, {"B"}, {"C"}, a) -
                                                 renyi_cmi(rho, {"B"}, {"A"}, {"D"}, a)));
                worst_neg = std::max(worst_neg, -renyi_cmi(rho, {"A"}, {"B"}, {"C"}, a));
            }
        }
        s.gate("renyi-info.duality-four-party", worst, s.tol(1e-8));
        SplitRng rng2 = root.split(151);
        SubsystemShape abe({2, 2, 2}, {"A", "B", "E"});
        for (int t = 0; t < 50 / scale + 1; ++t) {
            DensityOperator rho = random_density(abe, 8, rng2);
            for (double a : {0.3, 0.7, 1.5, 2.0})
                worst_neg = std::max(worst_neg, -renyi_cmi(rho, {"A"}, {"B"}, {"E"}, a));
        }
        s.gate("renyi-info.cmi-nonnegative", worst_neg, s.tol(1e-10));
        // above alpha = 2 nonnegativity is not asserted anywhere; record only
        double min_high = infinite_value();
        for (int t = 0; t < 20 / scale + 1; ++t) {
            DensityOperator rho = random_density(abe, 8, rng2);
            for (double a : {2.5, 3.0, 5.0})
                min_high = std::min(min_high, renyi_cmi(rho, {"A"}, {"B"}, {"E"}, a));
        }
        s.report_margin("renyi-info.cmi-above-two-regime (recorded)", min_high);
    }
    {
        SplitRng rng = root.split(16);
        double worst = 0.0;
        SubsystemShape ab({2, 2}, {"A", "B"});
        SubsystemShape abe({2, 2, 2}, {"A", "B", "E"});
        for (int t = 0; t < 100 / scale; ++t) {
            DensityOperator rho = random_density(ab, 4, rng);
            DensityOperator sig = random_density(ab, 4, rng);
            DensityOperator tri = random_density(abe, 8, rng);
            for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
                worst = std::max(worst, std::abs(renyi_entropy(rho, a) - vn_entropy(rho)));
                worst = std::max(worst, std::abs(renyi_relative_entropy(rho, sig, a) -
                                                 vn_relative_entropy(rho, sig)));
                worst = std::max(worst, std::abs(sandwiched_relative_entropy(rho, sig, a) -
                                                 vn_relative_entropy(rho, sig)));
                worst = std::max(worst,
                                 std::abs(renyi_conditional_entropy(rho, {"A"}, a) -
                                          vn_conditional_entropy(rho, {"A"})));
                worst = std::max(worst, std::abs(renyi_mutual_info(rho, {"A"}, {"B"}, a) -
                                                 vn_mutual_info(rho, {"A"}, {"B"})));
                worst = std::max(worst,
                                 std::abs(renyi_cmi(tri, {"A"}, {"B"}, {"E"}, a) -
                                          vn_cmi(tri, {"A"}, {"B"}, {"E"})));
                worst = std::max(worst,
                                 std::abs(sandwiched_cmi(tri, {"A"}, {"B"}, {"E"}, a) -
                                          vn_cmi(tri, {"A"}, {"B"}, {"E"})));
            }
        }
        s.gate("renyi-info.von-neumann-limits", worst, s.tol(1e-3));
    }

    // --- measures ------------------------------------------------------------
    {
        SplitRng rng = root.split(17);
        OptimizerConfig cfg;
        cfg.restarts = 2;
        cfg.max_evals = opt.quick ? 600 : 2500;
        cfg.seed = 31;
        SubsystemShape ab({2, 2}, {"A", "B"});
        double worst_feas = 0.0;
        for (int t = 0; t < (opt.quick ? 1 : 3); ++t) {
            DensityOperator rho = random_density(ab, 4, rng);
            MeasureResult sq = squashed_entanglement(rho, 1.5, 4, cfg);
            MeasureResult dc = discord_renyi(rho, 1.5, 4, cfg);
            MeasureResult ef = eof_renyi(rho, 1.5, 4, cfg);
            worst_feas = std::max({worst_feas, sq.feasibility_residual,
                                   dc.feasibility_residual, ef.feasibility_residual});
        }
        s.gate("measures.argmin-feasibility", worst_feas, s.tol(1e-8));
    }
    {
        SplitRng rng = root.split(18);
        OptimizerConfig cfg;
        cfg.restarts = 2;
        cfg.max_evals = opt.quick ? 800 : 4000;
        cfg.seed = 33;
        SubsystemShape ab({2, 2}, {"A", "B"});
        double alpha = 0.5;
        double worst = 0.0;
        for (int t = 0; t < (opt.quick ? 1 : 2); ++t) {
            DensityOperator r1 = random_density(ab, 2, rng);
            DensityOperator r2 = random_density(ab, 2, rng);
            MeasureResult e1 = squashed_entanglement(r1, alpha, 2, cfg);
            MeasureResult e2 = squashed_entanglement(r2, alpha, 2, cfg);
            DensityOperator mix(0.5 * r1.rho + 0.5 * r2.rho, ab);

            // combine the two argmin extensions behind a classical flag
            auto extend = [&](const DensityOperator& st, const Mat& v) {
                PureState psi = purify(st);
                Isometry iso(v, SubsystemShape({2, static_cast<int>(v.rows()) / 2},
                                               {"E", "F"}));
                DensityOperator big = isometry_apply(iso, psi.density(), "R");
                return big.trace_out({"F"});
            };
            DensityOperator w1 = extend(r1, *e1.extension_isometry);
            DensityOperator w2 = extend(r2, *e2.extension_isometry);
            Mat flag = Mat::Zero(16, 16);
            auto put = [&](const DensityOperator& w, int x) {
                for (long r = 0; r < 8; ++r)
                    for (long c = 0; c < 8; ++c)
                        flag(r * 2 + x, c * 2 + x) += 0.5 * w.rho(r, c);
            };
            put(w1, 0);
            put(w2, 1);
            DensityOperator omega(hermitize(flag),
                                  SubsystemShape({2, 2, 2, 2}, {"A", "B", "E", "G"}));
            DensityOperator merged = omega.merge_labels({"E", "G"}, "E");
            Mat warm = extension_warm_start(mix, merged, {"E"});
            OptimizerConfig warm_cfg = cfg;
            warm_cfg.restarts = 1;
            warm_cfg.max_evals = opt.quick ? 300 : 800;
            MeasureResult em = squashed_entanglement(mix, alpha, 4, warm_cfg, &warm);
            double margin = 0.5 * e1.value + 0.5 * e2.value - em.value;
            worst = std::max(worst, -margin);
        }
        s.gate("measures.squashed-convexity", worst, s.tol(2e-4));
    }
    {
        SplitRng rng = root.split(19);
        OptimizerConfig cfg;
        cfg.restarts = 2;
        cfg.max_evals = opt.quick ? 800 : 4000;
        cfg.seed = 35;
        SubsystemShape ab1({2, 2}, {"A1", "B1"});
        SubsystemShape ab2({2, 2}, {"A2", "B2"});
        DensityOperator sigma = random_density(ab1, 2, rng);
        DensityOperator tau = random_density(ab2, 2, rng);
        double alpha = 1.5;
        MeasureResult e1 = squashed_entanglement(sigma, alpha, 2, cfg);
        MeasureResult e2 = squashed_entanglement(tau, alpha, 2, cfg);

        auto extend = [&](const DensityOperator& st, const Mat& v, const char* e,
                          const char* f) {
            PureState psi = purify(st);
            Isometry iso(v, SubsystemShape({2, static_cast<int>(v.rows()) / 2}, {e, f}));
            DensityOperator big = isometry_apply(iso, psi.density(), "R");
            return big.trace_out({f});
        };
        DensityOperator w1 = extend(sigma, *e1.extension_isometry, "E1", "F1");
        DensityOperator w2 = extend(tau, *e2.extension_isometry, "E2", "F2");
        DensityOperator prod(tensor(w1.rho, w2.rho), w1.shape.tensor_with(w2.shape));
        DensityOperator arranged =
            prod.permuted({"A1", "B1", "A2", "B2", "E1", "E2"}).merge_labels({"E1", "E2"},
                                                                             "E");
        DensityOperator rho_prod(tensor(sigma.rho, tau.rho),
                                 SubsystemShape({2, 2, 2, 2}, {"A1", "B1", "A2", "B2"}));
        Mat warm = extension_warm_start(rho_prod, arranged, {"E"});
        BipartiteSplit split{{"A1", "A2"}, {"B1", "B2"}};
        OptimizerConfig warm_cfg = cfg;
        warm_cfg.restarts = 1;
        warm_cfg.max_evals = opt.quick ? 200 : 500;
        MeasureResult both = squashed_entanglement(rho_prod, alpha, 4, warm_cfg, &warm,
                                                   &split);
        double margin = e1.value + e2.value - both.value;
        s.gate("measures.squashed-subadditive", -margin, s.tol(1e-4));
    }
    {
        SplitRng rng = root.split(20);
        SubsystemShape ab({2, 2}, {"A", "B"});
        DensityOperator rho = random_density(ab, 4, rng);
        const std::string b = ab.labels[1];
        std::vector<double> history;
        auto objective = [&](const Eigen::VectorXd& x) {
            Mat v = polar_retraction(unpack_complex(x, 4, 2));
            std::vector<Vec> vs;
            for (int i = 0; i < 4; ++i) vs.push_back(v.row(i).adjoint());
            Isometry u = measurement_dilation(Povm::from_vectors(vs));
            DensityOperator omega = isometry_apply(u, rho, "A");
            return renyi_cmi(omega, {"E"}, {b}, {"X"}, 1.5);
        };
        SplitRng init = rng.split(3);
        Eigen::VectorXd x0(16);
        for (int i = 0; i < 16; ++i) x0(i) = init.gaussian();
        nelder_mead(objective, x0, 0.5, 1e-9, opt.quick ? 400 : 2000,
                    [&](double v) { history.push_back(v); });
        double worst = 0.0;
        for (std::size_t i = 1; i < history.size(); ++i)
            worst = std::max(worst, history[i] - history[i - 1]);
        s.gate("measures.discord-descent", worst, 0.0);
    }
    {
        SplitRng rng = root.split(21);
        SubsystemShape ab({2, 2}, {"A", "B"});
        double worst = 0.0;
        for (int t = 0; t < (opt.quick ? 5 : 20); ++t) {
            DensityOperator rho = random_density(ab, 4, rng);
            Povm coarse = random_mixed_rank_povm(2, 2, rng);
            double alpha = std::vector<double>{0.5, 1.5, 2.0}[t % 3];
            worst = std::max(worst, -rank_one_refinement_test(rho, coarse, alpha));
        }
        s.gate("measures.rank-one-refinement", worst, s.tol(1e-9));
    }

    // --- relative entropy differences ---------------------------------------
    {
        SplitRng rng = root.split(22);
        double worst_direct = 0.0, worst_tilde = 0.0;
        SubsystemShape abc({2, 2, 2}, {"A", "B", "C"});
        for (int t = 0; t < 100 / scale; ++t) {
            DensityOperator rho = random_density(abc, 8, rng);
            if (eig_hermitian(rho.rho).values.minCoeff() < 1e-4) continue;
            double alpha = std::vector<double>{0.5, 1.5, 2.0}[t % 3];

            // sigma = rho_B (x) rho_AC arranged back into (A, B, C) order,
            // with the channel tracing out A
            Mat rho_b = partial_trace(rho.rho, abc, {"B"});
            Mat rho_ac = partial_trace(rho.rho, abc, {"A", "C"});
            SubsystemShape bac({2, 2, 2}, {"B", "A", "C"});
            Mat sig = permute_systems(tensor(rho_b, rho_ac), bac, {"A", "B", "C"});
            QuantumChannel tr_a = QuantumChannel::trace_out_first(2, 4);
            RelDiffInstance inst(rho, DensityOperator(hermitize(sig), abc), tr_a);

            double d = delta_alpha(inst, alpha);
            double dt = delta_tilde_alpha(inst, alpha);
            double direct = renyi_cmi_direct(rho, {"A"}, {"B"}, {"C"}, alpha);
            double tilde = sandwiched_cmi(rho, {"A"}, {"B"}, {"C"}, alpha);
            worst_direct = std::max(worst_direct, std::abs(d - direct));
            worst_tilde = std::max(worst_tilde, std::abs(dt - tilde));
        }
        s.gate("reldiff.delta-vs-direct-cmi", worst_direct, s.tol(1e-9));
        s.gate("reldiff.delta-tilde-vs-sandwiched-cmi", worst_tilde, s.tol(1e-9));
    }
    {
        SplitRng rng = root.split(23);
        double worst_v = 0.0, worst_slope = 0.0, worst_vn = 0.0, worst_rw = 0.0;
        for (int t = 0; t < 100 / scale; ++t) {
            RelDiffInstance inst = sample_reldiff_instance(rng, 2, 1e-4);
            double v = variance_v(inst);
            worst_v = std::max(worst_v, -v);
            worst_vn = std::max(worst_vn, -delta_vn(inst));
            worst_rw = std::max(worst_rw, std::abs(delta_vn(inst) - delta_vn_rewrite(inst)));
            if (v >= 1e-6) {
                SlopeCheck sc = alpha_slope_check(inst);
                worst_slope = std::max(
                    worst_slope, std::abs(sc.finite_difference - sc.half_variance) /
                                     std::abs(sc.half_variance));
            }
        }
        s.gate("reldiff.variance-nonnegative", worst_v, s.tol(1e-10));
        s.gate("reldiff.delta-vn-nonnegative", worst_vn, s.tol(1e-9));
        s.gate("reldiff.delta-vn-rewrite", worst_rw, s.tol(1e-8));
        s.gate("reldiff.alpha-slope-vs-half-variance", worst_slope, s.tol(1e-2));
    }
    {
        SplitRng rng = root.split(24);
        double worst = 0.0;
        for (int t = 0; t < (opt.quick ? 5 : 20); ++t) {
            RelDiffInstance inst = sample_reldiff_instance(rng, 2, 1e-3);
            auto rows = lie_trotter_limit_check(inst, {1e-1, 1e-2, 1e-3});
            for (std::size_t i = 1; i < rows.size(); ++i)
                worst = std::max(worst,
                                 rows[i].frobenius_distance - rows[i - 1].frobenius_distance);
        }
        s.gate("reldiff.lie-trotter-distance-decreasing", worst, s.tol(1e-12));
    }
    {
        SplitRng rng = root.split(25);
        double worst = 0.0;
        for (int t = 0; t < 50 / scale + 1; ++t) {
            int d = 2 + static_cast<int>(rng.below(2));
            DensityOperator rho = random_full_rank(SubsystemShape::single(d, "S"), rng, 1e-4);
            DensityOperator sig = random_full_rank(SubsystemShape::single(d, "S"), rng, 1e-4);
            QuantumChannel u = QuantumChannel::unitary(random_unitary(d, rng));
            RelDiffInstance inst(rho, sig, u);
            worst = std::max(worst, -unitary_exact_mono_margin(inst, 0.5, 1.5, false));
            worst = std::max(worst,
                             -unitary_exact_mono_margin(inst, 2.0 / 3.0, 2.0, true));
        }
        s.gate("reldiff.unitary-exact-monotonicity", worst, s.tol(1e-9));
    }

    // --- conjectural margins (recorded, not gated) ---------------------------
    {
        CampaignSpec spec;
        spec.trials = opt.quick ? 10 : 100;
        spec.seed = opt.seed + 101;
        spec.alpha_grid = {0.5, 1.5, 2.0};
        spec.dims = 2;
        CampaignReport c1 = run_conjecture1(spec);
        s.report_margin("conjecture.cmi-mono-on-A (evidence)", c1.min_margin());
        double control = c1.body["aggregate"]["control_min_margin"].get<double>();
        s.gate("renyi-info.cmi-mono-on-B-control", -control, s.tol(1e-9));

        spec.alpha_grid = {0.5, 2.0};
        spec.seed = opt.seed + 202;
        CampaignReport c2 = run_conjecture2(spec);
        s.report_margin("conjecture.delta-alpha-mono (evidence)", c2.min_margin());

        spec.seed = opt.seed + 303;
        for (RemainderKind kind :
             {RemainderKind::Monotonicity, RemainderKind::JointConvexity,
              RemainderKind::Holevo, RemainderKind::Discord}) {
            CampaignReport r = run_remainder_campaign(spec, kind);
            s.report_margin(remainder_kind_name(kind) + std::string(" (evidence)"),
                            r.min_margin());
        }

        spec.seed = opt.seed + 404;
        spec.alpha_grid = {0.5, 1.5, 2.0, 3.0};
        CampaignReport mono = run_cmi_alpha_mono(spec);
        s.report_margin("conjecture.sandwiched-cmi-alpha-mono (evidence)",
                        mono.min_margin());
    }

    return s.result;
}

} // namespace renyi
