#include <doctest.h>

#include "renyilab/errors.hpp"
#include "renyilab/sampling.hpp"
#include "renyilab/states.hpp"
#include "test_helpers.hpp"

using namespace renyi;
using namespace renyi::testing;

TEST_CASE("schmidt decomposition") {
    PureState phi = maximally_entangled(2);
    SchmidtDecomposition sd = schmidt(phi);
    CHECK(sd.coeffs(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(sd.coeffs(1) == doctest::Approx(1.0 / std::sqrt(2.0)));

    // product state |0>|1>
    Vec v = Vec::Zero(4);
    v(1) = 1.0;
    PureState prod(v, SubsystemShape({2, 2}, {"A", "B"}));
    SchmidtDecomposition sp = schmidt(prod);
    CHECK(sp.coeffs(0) == doctest::Approx(1.0));
    CHECK(sp.coeffs(1) == doctest::Approx(0.0));

    SplitRng rng(21);
    PureState psi = random_pure(SubsystemShape({3, 3}, {"A", "B"}), rng);
    SchmidtDecomposition sr = schmidt(psi);
    // squared coefficients match the reduced-state spectrum
    Mat red = partial_trace(psi.amplitudes * psi.amplitudes.adjoint(), psi.shape, {"A"});
    EigH eig = eig_hermitian(hermitize(red));
    for (int i = 0; i < 3; ++i) {
        CHECK(sr.coeffs(i) >= -1e-12);
        CHECK(sr.coeffs(i) * sr.coeffs(i) ==
              doctest::Approx(eig.values(2 - i)).epsilon(1e-10));
    }
    // reconstruction
    Vec rebuilt = Vec::Zero(9);
    for (int k = 0; k < 3; ++k)
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                rebuilt(a * 3 + b) += sr.coeffs(k) * sr.basis_a(a, k) * sr.basis_b(b, k);
    CHECK((rebuilt - psi.amplitudes).norm() < 1e-10);

    CHECK_THROWS_AS(schmidt(random_pure(SubsystemShape({2, 2, 2}, {"A", "B", "C"}), rng)),
                    ShapeMismatch);
}

TEST_CASE("purification") {
    // pure input: trivial one-dimensional reference
    PureState phi = maximally_entangled(2);
    PureState purified = purify(phi.density());
    CHECK(purified.shape.dim_of("R") == 1);

    DensityOperator mixed = qubit_diag(0.5, 0.5);
    PureState p2 = purify(mixed);
    Mat back = partial_trace(p2.amplitudes * p2.amplitudes.adjoint(), p2.shape, {"S"});
    CHECK((back - mixed.rho).norm() < 1e-12);

    SplitRng rng(22);
    DensityOperator rank3 = random_density(4, 3, rng, "S");
    PureState p3 = purify(rank3);
    CHECK(p3.shape.dim_of("R") == 3);
    Mat back3 = partial_trace(p3.amplitudes * p3.amplitudes.adjoint(), p3.shape, {"S"});
    CHECK(trace_norm(back3 - rank3.rho) < 1e-10);
}

TEST_CASE("fidelity") {
    SplitRng rng(23);
    DensityOperator rho = random_density(3, 3, rng, "S");
    CHECK(fidelity(rho, rho) == doctest::Approx(1.0).epsilon(1e-9));

    SubsystemShape q = SubsystemShape::single(2, "S");
    Vec zero = Vec::Zero(2), one = Vec::Zero(2), plus(2);
    zero(0) = 1.0;
    one(1) = 1.0;
    plus << 1.0, 1.0;
    CHECK(fidelity(pure_ket(zero, q), pure_ket(one, q)) == doctest::Approx(0.0));
    CHECK(fidelity(pure_ket(zero, q), pure_ket(plus, q)) == doctest::Approx(0.5));
    // symmetry
    DensityOperator sig = random_density(3, 2, rng, "S");
    CHECK(fidelity(rho, sig) == doctest::Approx(fidelity(sig, rho)).epsilon(1e-9));
}

TEST_CASE("trace distance") {
    SplitRng rng(24);
    DensityOperator rho = random_density(3, 3, rng, "S");
    CHECK(trace_distance(rho, rho) == doctest::Approx(0.0));

    SubsystemShape q = SubsystemShape::single(2, "S");
    Vec zero = Vec::Zero(2), one = Vec::Zero(2);
    zero(0) = 1.0;
    one(1) = 1.0;
    CHECK(trace_distance(pure_ket(zero, q), pure_ket(one, q)) == doctest::Approx(2.0));
    CHECK(trace_distance(qubit_diag(0.7, 0.3), qubit_diag(0.5, 0.5)) ==
          doctest::Approx(0.4));
}

TEST_CASE("samplers are deterministic and well formed") {
    SplitRng a(7), b(7);
    Mat u1 = random_unitary(2, a);
    Mat u2 = random_unitary(2, b);
    CHECK((u1 - u2).cwiseAbs().maxCoeff() == 0.0);

    SplitRng rng(25);
    DensityOperator r1 = random_density(3, 1, rng, "S");
    EigH eig = eig_hermitian(r1.rho);
    CHECK(eig.values(2) == doctest::Approx(1.0).epsilon(1e-10));

    // split streams are independent of call order
    SplitRng root(9);
    SplitRng s5 = root.split(5);
    SplitRng s5_again = SplitRng(9).split(5);
    CHECK(s5.next_u64() == s5_again.next_u64());
}

TEST_CASE("mean of Haar-induced qubit states is maximally mixed") {
    SplitRng rng(26);
    Mat acc = Mat::Zero(2, 2);
    const int n = 10000;
    for (int t = 0; t < n; ++t) acc += random_density(2, 2, rng, "S").rho;
    acc /= n;
    CHECK((acc - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.02);
}

TEST_CASE("maximally entangled, cq states, separable sampler") {
    PureState phi3 = maximally_entangled(3);
    Mat red = partial_trace(phi3.amplitudes * phi3.amplitudes.adjoint(), phi3.shape, {"A"});
    CHECK((red - Mat::Identity(3, 3) / 3.0).norm() < 1e-12);

    // one-term cq state is a product state, with the flag first
    DensityOperator cond = qubit_diag(0.8, 0.2, "B");
    DensityOperator cq = cq_state({1.0}, {cond});
    CHECK(cq.shape.labels == std::vector<std::string>{"X", "B"});
    CHECK((cq.rho - cond.rho).norm() < 1e-14);

    SplitRng rng(27);
    for (int t = 0; t < 10; ++t) {
        SeparableSample sep = random_separable(2, 2, 4, rng);
        // Peres criterion: separable two-qubit states have PSD partial transpose
        Mat pt = partial_transpose_b(sep.state.rho, 2, 2);
        CHECK(eig_hermitian(hermitize(pt)).values.minCoeff() > -1e-10);
        // terms reconstruct the state
        Mat acc = Mat::Zero(4, 4);
        for (std::size_t k = 0; k < sep.probs.size(); ++k)
            acc += sep.probs[k] *
                   (sep.terms[k].amplitudes * sep.terms[k].amplitudes.adjoint());
        CHECK((acc - sep.state.rho).norm() < 1e-12);
    }
}

TEST_CASE("ensemble and state validation") {
    CHECK_THROWS_AS(qubit_diag(0.8, 0.8), InvalidState);
    Ensemble bad;
    bad.probs = {0.5, 0.6};
    bad.states = {qubit_diag(1.0, 0.0), qubit_diag(0.0, 1.0)};
    CHECK_THROWS_AS(bad.validate(), InvalidState);

    Ensemble good;
    good.probs = {0.5, 0.5};
    good.states = {qubit_diag(1.0, 0.0), qubit_diag(0.0, 1.0)};
    CHECK((good.average().rho - 0.5 * Mat::Identity(2, 2)).norm() < 1e-14);
}
