#include <doctest.h>

#include "renyilab/channels.hpp"
#include "renyilab/entropy.hpp"
#include "renyilab/errors.hpp"
#include "renyilab/sampling.hpp"
#include "test_helpers.hpp"

using namespace renyi;
using namespace renyi::testing;

TEST_CASE("apply_channel acts on the labeled factor") {
    SplitRng rng(31);
    SubsystemShape ab({2, 2}, {"A", "B"});
    DensityOperator rho = random_density(ab, 4, rng);

    DensityOperator same = apply_channel(QuantumChannel::identity(2), rho, "A");
    CHECK((same.rho - rho.rho).norm() < 1e-13);

    DensityOperator depol = apply_channel(QuantumChannel::depolarizing(2, 1.0), rho, "A");
    Mat rho_b = partial_trace(rho.rho, ab, {"B"});
    CHECK((depol.rho - tensor(0.5 * Mat::Identity(2, 2), rho_b)).norm() < 1e-12);

    QuantumChannel n = random_channel(2, 3, 2, rng);
    DensityOperator out = apply_channel(n, rho, "B");
    CHECK(out.shape.dim_of("B") == 3);
    CHECK(out.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adjoint map") {
    SplitRng rng(32);
    Mat u = random_unitary(3, rng);
    QuantumChannel uc = QuantumChannel::unitary(u);
    Mat x = Mat::Identity(3, 3) - 0.2 * u * u.adjoint();
    CHECK((uc.adjoint_apply(x) - u.adjoint() * x * u).norm() < 1e-13);

    // trace-out adjoint tensors the identity on the traced factor
    QuantumChannel tr = QuantumChannel::trace_out_first(2, 3);
    Mat y(3, 3);
    y.setRandom();
    y = hermitize(y);
    CHECK((tr.adjoint_apply(y) - tensor(Mat::Identity(2, 2), y)).norm() < 1e-13);

    QuantumChannel n = random_channel(3, 2, 3, rng);
    CHECK((n.adjoint_apply(Mat::Identity(2, 2)) - Mat::Identity(3, 3)).norm() < 1e-10);
    DensityOperator rho = random_density(3, 3, rng, "S");
    Mat obs(2, 2);
    obs.setRandom();
    obs = hermitize(obs);
    double lhs = (n.apply(rho.rho) * obs).trace().real();
    double rhs = (rho.rho * n.adjoint_apply(obs)).trace().real();
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("stinespring dilation") {
    SplitRng rng(33);
    Mat u = random_unitary(2, rng);
    Isometry v = stinespring(QuantumChannel::unitary(u));
    CHECK(v.output_shape.dim_of("E") == 1);
    CHECK((v.matrix - u).norm() < 1e-14);

    QuantumChannel n = random_channel(2, 3, 2, rng);
    Isometry vn = stinespring(n);
    DensityOperator rho = random_density(2, 2, rng, "A");
    DensityOperator lifted = isometry_apply(vn, rho, "A");
    Mat out = partial_trace(lifted.rho, lifted.shape, {"B"});
    CHECK((out - n.apply(rho.rho)).norm() < 1e-10);
}

TEST_CASE("measurement dilation reproduces the measurement map") {
    SplitRng rng(34);

    // projective Z measurement on |+>
    Vec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    DensityOperator rho_plus = pure_ket(plus, SubsystemShape::single(2, "A"));
    Povm z = Povm::computational_basis(2);
    Isometry u = measurement_dilation(z);
    CHECK((u.matrix.adjoint() * u.matrix - Mat::Identity(2, 2)).norm() < 1e-12);
    DensityOperator dil = isometry_apply(u, rho_plus, "A");
    Mat marginal_x = partial_trace(dil.rho, dil.shape, {"X"});
    CHECK((marginal_x - 0.5 * Mat::Identity(2, 2)).norm() < 1e-12);

    for (int t = 0; t < 25; ++t) {
        int d = 2 + static_cast<int>(rng.below(2));
        int n_out = d + static_cast<int>(rng.below(3));
        Povm povm = (t % 2 == 0) ? random_rank_one_povm(d, n_out, rng)
                                 : random_mixed_rank_povm(d, n_out, rng);
        QuantumChannel meas = measurement_channel(povm);
        DensityOperator rho = random_density(d, d, rng, "A");
        Isometry dilation = measurement_dilation(povm);
        DensityOperator big = isometry_apply(dilation, rho, "A");
        CHECK((partial_trace(big.rho, big.shape, {"X"}) - meas.apply(rho.rho)).norm() <
              1e-10);
    }
}

TEST_CASE("refined dilation matches the coarse channel after discarding outcomes") {
    SplitRng rng(35);
    Povm coarse = random_mixed_rank_povm(2, 2, rng);
    Isometry u = measurement_dilation_refined(coarse);
    CHECK((u.matrix.adjoint() * u.matrix - Mat::Identity(2, 2)).norm() < 1e-10);

    DensityOperator rho = random_density(2, 2, rng, "A");
    DensityOperator big = isometry_apply(u, rho, "A");
    Mat x_marginal = partial_trace(big.rho, big.shape, {"X"});
    Mat direct = measurement_channel(coarse).apply(rho.rho);
    CHECK((x_marginal - direct).norm() < 1e-10);
}

TEST_CASE("petz recovery map") {
    SplitRng rng(36);
    DensityOperator sigma = random_full_rank(SubsystemShape::single(3, "S"), rng, 1e-3);

    QuantumChannel t_id = petz_map(sigma, QuantumChannel::identity(3));
    DensityOperator rho = random_density(3, 3, rng, "S");
    CHECK((t_id.apply(rho.rho) - rho.rho).norm() < 1e-10);

    for (int t = 0; t < 20; ++t) {
        DensityOperator s = random_full_rank(SubsystemShape::single(2, "S"), rng, 1e-3);
        QuantumChannel n = random_channel(2, 2, 2, rng);
        QuantumChannel tmap = petz_map(s, n);
        CHECK(trace_norm(tmap.apply(hermitize(n.apply(s.rho))) - s.rho) < 1e-8);
        Mat choi = choi_matrix(tmap);
        CHECK(eig_hermitian(hermitize(choi)).values.minCoeff() > -1e-9);
    }

    DensityOperator singular = qubit_diag(1.0, 0.0);
    CHECK_THROWS_AS(petz_map(singular, QuantumChannel::identity(2)), SingularSigma);
    CHECK_NOTHROW(petz_map(singular, QuantumChannel::identity(2), true));
}

TEST_CASE("petz conditional recovery") {
    SplitRng rng(37);
    // Markov case rho_A (x) rho_BC is recovered exactly
    DensityOperator rho_a = random_full_rank(SubsystemShape::single(2, "A"), rng, 1e-3);
    DensityOperator rho_bc =
        random_full_rank(SubsystemShape({2, 2}, {"B", "C"}), rng, 1e-3);
    DensityOperator rho(tensor(rho_a.rho, rho_bc.rho),
                        SubsystemShape({2, 2, 2}, {"A", "B", "C"}));
    DensityOperator rec = petz_conditional_extend(rho, PetzDirection::CtoAC);
    CHECK(trace_norm(rec.rho - rho.rho) < 1e-10);

    // random full-rank input: output is a state
    DensityOperator r = random_full_rank(SubsystemShape({2, 2, 2}, {"A", "B", "C"}), rng,
                                         1e-4);
    DensityOperator out = petz_conditional_extend(r, PetzDirection::CtoBC);
    CHECK(eig_hermitian(out.rho).values.minCoeff() > -1e-10);
    CHECK(out.rho.trace().real() == doctest::Approx(1.0).epsilon(1e-9));

    // pure tripartite: -log F(rho, R(rho_BC)) lower-bounds the CMI
    Vec ghz = Vec::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    DensityOperator ghz_rho = pure_ket(ghz, SubsystemShape({2, 2, 2}, {"A", "B", "C"}));
    DensityOperator ghz_rec = petz_conditional_extend(ghz_rho, PetzDirection::CtoAC);
    double bound = -std::log(std::max(fidelity(ghz_rho, ghz_rec), 1e-300));
    double cmi = vn_cmi(ghz_rho, {"A"}, {"B"}, {"C"});
    CHECK(cmi == doctest::Approx(std::log(2.0)).epsilon(1e-10));
    CHECK(bound <= cmi + 1e-9);
}

TEST_CASE("entanglement-breaking constructions") {
    SplitRng rng(38);

    // maximally mixed reference and a basis POVM give the dephasing channel
    DensityOperator rho_ab(tensor(0.5 * Mat::Identity(2, 2), diag2(0.6, 0.4)),
                           SubsystemShape({2, 2}, {"A", "B"}));
    QuantumChannel eb = discord_eb_channel(rho_ab, Povm::computational_basis(2));
    Mat x(2, 2);
    x << 0.7, cxd(0.1, 0.2), cxd(0.1, -0.2), 0.3;
    Mat dephased = eb.apply(x);
    CHECK((dephased - diag2(0.7, 0.3)).norm() < 1e-12);

    for (int t = 0; t < 10; ++t) {
        SubsystemShape ab({2, 2}, {"A", "B"});
        DensityOperator rho = random_density(ab, 4, rng);
        Povm povm = random_rank_one_povm(2, 4, rng);
        QuantumChannel e = discord_eb_channel(rho, povm);
        Mat rho_a = partial_trace(rho.rho, ab, {"A"});
        CHECK((e.apply(rho_a) - rho_a).norm() < 1e-10); // fixed point
        // entanglement breaking at qubit level: Choi is PPT
        Mat choi = choi_matrix(e);
        Mat pt = partial_transpose_b(choi, 2, 2);
        CHECK(eig_hermitian(hermitize(pt)).values.minCoeff() > -1e-9);
    }

    DensityOperator rho_b = random_density(2, 2, rng, "B");
    Povm povm_b = random_rank_one_povm(2, 4, rng);
    QuantumChannel eb2 = holevo_eb_channel(rho_b, povm_b);
    CHECK((eb2.apply(rho_b.rho) - rho_b.rho).norm() < 1e-10);
    DensityOperator probe = random_density(2, 2, rng, "B");
    CHECK(eb2.apply(probe.rho).trace().real() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("povm validation") {
    std::vector<Mat> not_complete{0.5 * Mat::Identity(2, 2)};
    CHECK_THROWS_AS(Povm{not_complete}, InvalidPovm);

    std::vector<Mat> negative{diag2(1.5, 1.0), diag2(-0.5, 0.0)};
    CHECK_THROWS_AS(Povm{negative}, InvalidPovm);

    Povm basis = Povm::computational_basis(3);
    CHECK(basis.rank_one);
    CHECK(basis.outcomes() == 3);

    SplitRng rng(39);
    Povm mixed = random_mixed_rank_povm(3, 3, rng);
    QuantumChannel meas = measurement_channel(mixed);
    CHECK(meas.d_in == 3);
    CHECK(meas.d_out == 3);
}
