#pragma once

#include "renyilab/channels.hpp"
#include "renyilab/rng.hpp"
#include "renyilab/states.hpp"

namespace renyi {

// Haar-distributed unitary: QR of a Ginibre matrix with the phases of the
// diagonal of R fixed.
Mat random_unitary(int d, SplitRng& rng);

// First n_cols columns of a Haar unitary (n_rows >= n_cols).
Mat random_isometry(int n_rows, int n_cols, SplitRng& rng);

PureState random_pure(const SubsystemShape& shape, SplitRng& rng);

// Partial trace of a Haar-random purification on dim * rank.
DensityOperator random_density(const SubsystemShape& shape, int rank, SplitRng& rng);
DensityOperator random_density(int dim, int rank, SplitRng& rng,
                               const std::string& label = "S");

// Resamples until every eigenvalue is >= min_eig.
DensityOperator random_full_rank(const SubsystemShape& shape, SplitRng& rng,
                                 double min_eig = 1e-6, int max_tries = 256);

// Haar-random channel: truncate a Haar unitary on d_out * d_env to an
// isometry from d_in, then read off Kraus operators.
QuantumChannel random_channel(int d_in, int d_out, int d_env, SplitRng& rng);
inline QuantumChannel random_channel(int d_in, int d_out, SplitRng& rng) {
    return random_channel(d_in, d_out, d_in, rng);
}

// n rank-one effects from the rows of a Haar isometry d -> n.
Povm random_rank_one_povm(int d, int n, SplitRng& rng);

// Effects of random mixed ranks: normalize random Wishart blocks.
Povm random_mixed_rank_povm(int d, int n, SplitRng& rng);

// Flat Dirichlet weights.
std::vector<double> random_probs(int n, SplitRng& rng);

struct SeparableSample {
    DensityOperator state;       // on (A, B)
    std::vector<double> probs;
    std::vector<PureState> terms; // product pure states on (A, B)
};

SeparableSample random_separable(int d_a, int d_b, int n_terms, SplitRng& rng);

struct CqSample {
    DensityOperator state; // flag first: (X, B)
    std::vector<double> probs;
    std::vector<DensityOperator> conditionals;
};

CqSample random_cq(int n_flags, int d_b, int rank, SplitRng& rng);

} // namespace renyi
