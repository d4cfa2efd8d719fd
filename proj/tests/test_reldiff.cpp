#include <doctest.h>

#include <cmath>

#include "renyilab/errors.hpp"
#include "renyilab/harness.hpp"
#include "renyilab/reldiff.hpp"
#include "renyilab/sampling.hpp"
#include "test_helpers.hpp"

using namespace renyi;
using namespace renyi::testing;

namespace {

// classical channel from a column-stochastic matrix, Kraus sqrt(T_ji)|j><i|
QuantumChannel classical_channel(const std::vector<std::vector<double>>& t) {
    const int d_out = static_cast<int>(t.size());
    const int d_in = static_cast<int>(t[0].size());
    std::vector<Mat> ks;
    for (int j = 0; j < d_out; ++j)
        for (int i = 0; i < d_in; ++i) {
            if (t[j][i] <= 0.0) continue;
            Mat k = Mat::Zero(d_out, d_in);
            k(j, i) = std::sqrt(t[j][i]);
            ks.push_back(std::move(k));
        }
    return QuantumChannel(std::move(ks));
}

RelDiffInstance diagonal_instance(const std::vector<double>& p,
                                  const std::vector<double>& q,
                                  const std::vector<std::vector<double>>& t) {
    const int d = static_cast<int>(p.size());
    Mat dp = Mat::Zero(d, d), dq = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        dp(i, i) = p[i];
        dq(i, i) = q[i];
    }
    SubsystemShape s = SubsystemShape::single(d, "S");
    return RelDiffInstance(DensityOperator(dp, s), DensityOperator(dq, s),
                           classical_channel(t));
}

} // namespace

TEST_CASE("delta_vn") {
    SplitRng rng(81);
    DensityOperator rho = random_full_rank(SubsystemShape::single(3, "S"), rng, 1e-3);
    DensityOperator sig = random_full_rank(SubsystemShape::single(3, "S"), rng, 1e-3);

    RelDiffInstance idem(rho, sig, QuantumChannel::identity(3));
    CHECK(delta_vn(idem) == doctest::Approx(0.0).epsilon(1e-10));

    // trace-out on a product-extended pair: marginals carry all the divergence
    DensityOperator tau = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    SubsystemShape xs({2, 3}, {"X", "S"});
    RelDiffInstance prod(DensityOperator(tensor(tau.rho, rho.rho), xs),
                         DensityOperator(tensor(tau.rho, sig.rho), xs),
                         QuantumChannel::trace_out_first(2, 3));
    CHECK(delta_vn(prod) == doctest::Approx(0.0).epsilon(1e-9));

    for (int t = 0; t < 10; ++t) {
        RelDiffInstance inst = sample_reldiff_instance(rng, 3, 1e-4);
        double d = delta_vn(inst);
        CHECK(d > -1e-9);
        CHECK(d == doctest::Approx(delta_vn_rewrite(inst)).epsilon(1e-8));
    }
}

TEST_CASE("delta_alpha and delta_tilde_alpha basics") {
    SplitRng rng(82);
    DensityOperator rho = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    RelDiffInstance trivial(rho, rho, QuantumChannel::identity(2));
    for (double a : {0.5, 1.5, 2.0, 5.0}) {
        CHECK(std::abs(delta_alpha(trivial, a)) < 1e-8);
        CHECK(std::abs(delta_tilde_alpha(trivial, a)) < 1e-8);
    }

    // commuting instance against the scalar formula
    std::vector<double> p{0.5, 0.3, 0.2}, q{0.2, 0.5, 0.3};
    std::vector<std::vector<double>> t{{0.9, 0.2, 0.1}, {0.1, 0.8, 0.2}, {0.0, 0.0, 0.7}};
    RelDiffInstance classical = diagonal_instance(p, q, t);
    auto apply_t = [&](const std::vector<double>& v) {
        std::vector<double> out(3, 0.0);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i) out[j] += t[j][i] * v[i];
        return out;
    };
    std::vector<double> tp = apply_t(p), tq = apply_t(q);
    for (double a : {0.5, 1.5, 2.0}) {
        double scalar = 0.0;
        for (int i = 0; i < 3; ++i) {
            double inner = 0.0;
            for (int j = 0; j < 3; ++j)
                inner += t[j][i] * std::pow(tq[j], a - 1.0) * std::pow(tp[j], 1.0 - a);
            scalar += std::pow(p[i], a) * std::pow(q[i], 1.0 - a) * inner;
        }
        double expected = std::log(scalar) / (a - 1.0);
        CHECK(delta_alpha(classical, a) == doctest::Approx(expected).epsilon(1e-10));
        // sandwiched variant: alpha-norm of a diagonal matrix is a scalar sum
        double nrm = 0.0;
        for (int i = 0; i < 3; ++i) {
            double inner = 0.0;
            for (int j = 0; j < 3; ++j)
                inner += t[j][i] * std::pow(tq[j], (a - 1.0) / a) *
                         std::pow(tp[j], (1.0 - a) / a);
            nrm += std::pow(p[i] * std::pow(q[i], (1.0 - a) / a) * inner, a);
        }
        double expected_tilde = (a / (a - 1.0)) * std::log(std::pow(nrm, 1.0 / a));
        CHECK(delta_tilde_alpha(classical, a) ==
              doctest::Approx(expected_tilde).epsilon(1e-10));
    }

    // both variants approach delta_vn near alpha = 1
    SplitRng rng2(83);
    for (int t2 = 0; t2 < 10; ++t2) {
        RelDiffInstance inst = sample_reldiff_instance(rng2, 3, 1e-4);
        double vn = delta_vn(inst);
        for (double a : {1.0 - 1e-4, 1.0 + 1e-4}) {
            CHECK(delta_alpha(inst, a) == doctest::Approx(vn).epsilon(1e-3));
            CHECK(delta_tilde_alpha(inst, a) == doctest::Approx(vn).epsilon(1e-3));
        }
    }
}

TEST_CASE("delta_tilde at 1/2 is the negative log recovery fidelity") {
    SplitRng rng(84);
    for (int t = 0; t < 20; ++t) {
        RelDiffInstance inst = sample_reldiff_instance(rng, 3, 1e-4);
        QuantumChannel petz = petz_map(inst.sigma, inst.channel);
        double f = fidelity(inst.rho.rho, hermitize(petz.apply(inst.n_rho)));
        CHECK(delta_tilde_alpha(inst, 0.5) == doctest::Approx(-std::log(f)).epsilon(1e-9));
    }
}

TEST_CASE("lie-trotter limit") {
    // fully commuting instances (diagonal pair, channel a diagonal unitary)
    // collapse exactly for every p
    Mat phase = Mat::Zero(2, 2);
    phase(0, 0) = 1.0;
    phase(1, 1) = std::polar(1.0, 0.7);
    SubsystemShape qs = SubsystemShape::single(2, "S");
    RelDiffInstance commuting(DensityOperator(diag2(0.6, 0.4), qs),
                              DensityOperator(diag2(0.3, 0.7), qs),
                              QuantumChannel::unitary(phase));
    for (const auto& row : lie_trotter_limit_check(commuting, {1.0, 0.1, 0.01}))
        CHECK(row.frobenius_distance < 1e-10);

    // a genuinely stochastic classical channel converges but is not exact
    std::vector<double> p{0.6, 0.4}, q{0.3, 0.7};
    std::vector<std::vector<double>> t{{0.8, 0.3}, {0.2, 0.7}};
    RelDiffInstance classical = diagonal_instance(p, q, t);
    auto classical_rows = lie_trotter_limit_check(classical, {1e-1, 1e-2, 1e-3});
    CHECK(classical_rows[0].frobenius_distance > 1e-6);
    CHECK(classical_rows[2].frobenius_distance <
          0.05 * classical_rows[0].frobenius_distance);

    SplitRng rng(85);
    RelDiffInstance inst = sample_reldiff_instance(rng, 2, 1e-3);
    auto rows = lie_trotter_limit_check(inst, {1e-2, 1e-3, 1e-4});
    CHECK(rows[0].frobenius_distance > rows[1].frobenius_distance);
    CHECK(rows[1].frobenius_distance > rows[2].frobenius_distance);
    // first-order convergence: successive distances shrink about tenfold
    double r1 = rows[0].frobenius_distance / rows[1].frobenius_distance;
    double r2 = rows[1].frobenius_distance / rows[2].frobenius_distance;
    CHECK(r1 > 5.0);
    CHECK(r1 < 20.0);
    CHECK(r2 > 5.0);
    CHECK(r2 < 20.0);

    // identity channel: the sigma powers cancel and the product collapses to
    // rho for every p (two-operator case)
    DensityOperator rho = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    DensityOperator sig = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    RelDiffInstance ident(rho, sig, QuantumChannel::identity(2));
    for (const auto& row : lie_trotter_limit_check(ident, {1e-2, 1e-3}))
        CHECK(row.frobenius_distance < 1e-10);
}

TEST_CASE("variance") {
    SplitRng rng(86);
    DensityOperator rho = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    RelDiffInstance trivial(rho, rho, QuantumChannel::identity(2));
    CHECK(std::abs(variance_v(trivial)) < 1e-10);

    // classical scalar oracle
    std::vector<double> p{0.5, 0.3, 0.2}, q{0.2, 0.5, 0.3};
    std::vector<std::vector<double>> t{{0.9, 0.2, 0.1}, {0.1, 0.8, 0.2}, {0.0, 0.0, 0.7}};
    RelDiffInstance classical = diagonal_instance(p, q, t);
    std::vector<double> tp(3, 0.0), tq(3, 0.0);
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
            tp[j] += t[j][i] * p[i];
            tq[j] += t[j][i] * q[i];
        }
    // Tr{rho H^2} - Delta^2 + Tr{N(rho) A^2} - Tr{rho N^dag(A)^2}
    double delta = 0.0, h2 = 0.0, na2 = 0.0, adj2 = 0.0;
    std::vector<double> adj_a(3, 0.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            adj_a[i] += t[j][i] * (std::log(tp[j]) - std::log(tq[j]));
    for (int i = 0; i < 3; ++i) {
        double h = std::log(p[i]) - std::log(q[i]) - adj_a[i];
        delta += p[i] * h;
        h2 += p[i] * h * h;
        adj2 += p[i] * adj_a[i] * adj_a[i];
    }
    for (int j = 0; j < 3; ++j) {
        double a = std::log(tp[j]) - std::log(tq[j]);
        na2 += tp[j] * a * a;
    }
    double expected = (h2 - delta * delta) + (na2 - adj2);
    CHECK(variance_v(classical) == doctest::Approx(expected).epsilon(1e-10));

    for (int k = 0; k < 20; ++k) {
        RelDiffInstance inst = sample_reldiff_instance(rng, 3, 1e-4);
        CHECK(variance_v(inst) > -1e-10);
    }
}

TEST_CASE("slope of delta_alpha at one is half the variance") {
    SplitRng rng(87);
    DensityOperator rho = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    RelDiffInstance trivial(rho, rho, QuantumChannel::identity(2));
    SlopeCheck flat = alpha_slope_check(trivial);
    CHECK(std::abs(flat.finite_difference) < 1e-6);

    int checked = 0;
    for (int t = 0; t < 20; ++t) {
        RelDiffInstance inst = sample_reldiff_instance(rng, 2, 1e-4);
        double v = variance_v(inst);
        if (v < 1e-6) continue; // the expansion argument needs V > 0
        ++checked;
        SlopeCheck plain = alpha_slope_check(inst);
        CHECK(std::abs(plain.finite_difference - plain.half_variance) <
              1e-2 * std::abs(plain.half_variance));
        SlopeCheck tilde = alpha_slope_check(inst, 1e-4, true);
        CHECK(std::abs(tilde.finite_difference - tilde.half_variance) <
              1e-2 * std::abs(tilde.half_variance));
    }
    CHECK(checked > 0);
}

TEST_CASE("monotonicity remainder") {
    SplitRng rng(88);
    DensityOperator rho = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    DensityOperator sig = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);

    // identity channel: zero difference and perfect recovery, so the margin
    // vanishes
    RelDiffInstance ident(rho, sig, QuantumChannel::identity(2));
    CHECK(std::abs(monotonicity_remainder(ident)) < 1e-9);

    // trace-everything channel: the difference survives whole and the Petz map
    // reprepares sigma, margin D(rho||sigma) + log F(rho, sigma) >= 0
    std::vector<Mat> bra{Mat::Zero(1, 2), Mat::Zero(1, 2)};
    bra[0](0, 0) = 1.0;
    bra[1](0, 1) = 1.0;
    RelDiffInstance erase(rho, sig, QuantumChannel(bra));
    double expected = vn_relative_entropy(rho, sig) +
                      std::log(fidelity(rho.rho, sig.rho));
    CHECK(monotonicity_remainder(erase) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(monotonicity_remainder(erase) > -1e-9);

    RelDiffInstance equal(rho, rho, QuantumChannel::identity(2));
    CHECK(monotonicity_remainder(equal) == doctest::Approx(0.0).epsilon(1e-9));

    for (int t = 0; t < 20; ++t) {
        RelDiffInstance inst = sample_reldiff_instance(rng, 3, 1e-4);
        CHECK(monotonicity_remainder(inst) > -1e-8);
    }
}

TEST_CASE("joint convexity remainder and its flag equivalence") {
    SplitRng rng(89);
    DensityOperator r1 = random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3);
    DensityOperator s1 = random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3);

    JointConvexityResult single = joint_convexity_remainder({1.0}, {r1}, {s1});
    CHECK(single.margin == doctest::Approx(0.0).epsilon(1e-9));

    // sigma_x = rho_x: margins reduce to the mixing remainder, still >= 0
    DensityOperator r2 = random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3);
    JointConvexityResult same =
        joint_convexity_remainder({0.4, 0.6}, {r1, r2}, {r1, r2});
    CHECK(same.margin > -1e-8);
    CHECK(same.equivalence_gap < 1e-9);

    for (int t = 0; t < 10; ++t) {
        std::vector<double> probs = random_probs(2, rng);
        std::vector<DensityOperator> rhos, sigmas;
        for (int x = 0; x < 2; ++x) {
            rhos.push_back(random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3));
            sigmas.push_back(random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3));
        }
        JointConvexityResult res = joint_convexity_remainder(probs, rhos, sigmas);
        CHECK(res.margin > -1e-8);
        CHECK(res.equivalence_gap < 1e-9);
    }
}

TEST_CASE("holevo remainder") {
    SplitRng rng(90);
    // commuting ensemble measured in the shared eigenbasis: zero gap and margin
    std::vector<DensityOperator> diag_states{qubit_diag(0.8, 0.2, "B"),
                                             qubit_diag(0.3, 0.7, "B")};
    HolevoRemainderResult classical =
        holevo_remainder({0.5, 0.5}, diag_states, Povm::computational_basis(2));
    CHECK(classical.holevo_gap == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(classical.margin == doctest::Approx(0.0).epsilon(1e-8));

    // a single-state ensemble carries no information
    HolevoRemainderResult lone =
        holevo_remainder({1.0}, {diag_states[0]}, Povm::computational_basis(2));
    CHECK(lone.holevo_gap == doctest::Approx(0.0).epsilon(1e-10));

    for (int t = 0; t < 10; ++t) {
        std::vector<double> probs = random_probs(3, rng);
        std::vector<DensityOperator> states;
        for (int x = 0; x < 3; ++x)
            states.push_back(random_full_rank(SubsystemShape::single(2, "B"), rng, 1e-3));
        Povm povm = random_rank_one_povm(2, 4, rng);
        HolevoRemainderResult res = holevo_remainder(probs, states, povm);
        CHECK(res.holevo_gap > -1e-9); // the Holevo bound itself
        CHECK(res.margin > -1e-8);
    }
}

TEST_CASE("discord remainder") {
    SplitRng rng(91);
    // classical-quantum state measured in its flag basis: both sides vanish
    CqSample cq = random_cq(2, 2, 2, rng);
    double classical = discord_remainder(cq.state, Povm::computational_basis(2));
    CHECK(classical == doctest::Approx(0.0).epsilon(1e-8));

    // maximally entangled state: the CMI side is log 2
    DensityOperator phi = maximally_entangled(2).density();
    Isometry u = measurement_dilation(Povm::computational_basis(2));
    DensityOperator omega = isometry_apply(u, phi, "A");
    CHECK(vn_cmi(omega, {"E"}, {"B"}, {"X"}) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-9));
    CHECK(discord_remainder(phi, Povm::computational_basis(2)) > -1e-8);

    for (int t = 0; t < 10; ++t) {
        DensityOperator rho = random_density(SubsystemShape({2, 2}, {"A", "B"}), 4, rng);
        Povm povm = random_rank_one_povm(2, 4, rng);
        CHECK(discord_remainder(rho, povm) > -1e-8);
    }
}

TEST_CASE("proven unitary-channel monotonicity cases") {
    SplitRng rng(92);
    for (int t = 0; t < 10; ++t) {
        int d = 2 + static_cast<int>(rng.below(2));
        DensityOperator rho = random_full_rank(SubsystemShape::single(d, "S"), rng, 1e-3);
        DensityOperator sig = random_full_rank(SubsystemShape::single(d, "S"), rng, 1e-3);
        RelDiffInstance inst(rho, sig, QuantumChannel::unitary(random_unitary(d, rng)));
        CHECK(unitary_exact_mono_margin(inst, 0.5, 1.5, false) > -1e-9);
        CHECK(unitary_exact_mono_margin(inst, 2.0 / 3.0, 2.0, true) > -1e-9);
        CHECK(unitary_exact_mono_margin(inst, 1.5, 1.5, false) ==
              doctest::Approx(0.0));
    }
}

TEST_CASE("reldiff rejects singular inputs") {
    SplitRng rng(93);
    DensityOperator full = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
    DensityOperator singular = qubit_diag(1.0, 0.0);
    CHECK_THROWS_AS(RelDiffInstance(singular, full, QuantumChannel::identity(2)),
                    SingularSigma);
    CHECK_THROWS_AS(RelDiffInstance(full, singular, QuantumChannel::identity(2)),
                    SingularSigma);
}
