#pragma once

#include <optional>
#include <string>
#include <vector>

#include "renyilab/states.hpp"

namespace renyi {

// Completely positive map in Kraus form; not necessarily trace preserving.
struct CpMap {
    std::vector<Mat> kraus;
    int d_in = 0;
    int d_out = 0;

    Mat apply(const Mat& x) const;
};

// CPTP map: sum K^dag K = I within 1e-10 (or the support projector of the
// reference state for recovery maps built on a singular input).
struct QuantumChannel {
    std::vector<Mat> kraus;
    int d_in = 0;
    int d_out = 0;

    QuantumChannel() = default;
    QuantumChannel(std::vector<Mat> ks, bool allow_subnormalized = false);

    static QuantumChannel identity(int d);
    static QuantumChannel unitary(const Mat& u);
    static QuantumChannel depolarizing(int d, double p);
    static QuantumChannel trace_out_first(int d_drop, int d_keep);

    Mat apply(const Mat& x) const;
    // Adjoint map X -> sum K^dag X K (unital when the channel is TP).
    Mat adjoint_apply(const Mat& x) const;
    CpMap adjoint() const;
};

struct Povm {
    std::vector<Mat> effects;
    int dim = 0;
    bool rank_one = false;

    Povm() = default;
    Povm(std::vector<Mat> es, bool expect_rank_one = false);

    static Povm computational_basis(int d, int n_outcomes = -1);
    // Rank-one POVM from subnormalized vectors v_x with sum |v_x><v_x| = I.
    static Povm from_vectors(const std::vector<Vec>& vs);

    int outcomes() const { return static_cast<int>(effects.size()); }
    // Subnormalized vectors of a rank-one POVM.
    std::vector<Vec> vectors() const;
};

struct Isometry {
    Mat matrix; // d_out x d_in, V^dag V = I
    SubsystemShape output_shape;

    Isometry() = default;
    Isometry(Mat v, SubsystemShape out_shape);
};

// id (x) N on the labeled factor; the factor's dimension becomes d_out.
DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho,
                              const std::string& target_label);

// Isometric extension V = sum_k K_k (x) |k>_E, output ordered (out, env).
Isometry stinespring(const QuantumChannel& n, const std::string& out_label = "B",
                     const std::string& env_label = "E");

// Measurement channel sigma -> sum_x Tr{L_x sigma} |x><x|.
QuantumChannel measurement_channel(const Povm& povm);

// Dilation of the measurement channel. Rank-one POVMs get the compact form
// U = sum_x |x>_X |x>_E <v_x| with output (X, E), dims (n, n); general POVMs
// get U|psi> = sum_x |x>_X (x) (sqrt(L_x)|psi>) (x) |x>_F with output
// (X, E) where E fuses the pre-measurement system and the flag, dim d*n.
Isometry measurement_dilation(const Povm& povm, const std::string& out_label = "X",
                              const std::string& env_label = "E");

// Spectral refinement dilation with output factors (E, XE, Y, X): (E, XE) is
// the environment of the refined rank-one measurement, (E, XE, Y) the
// environment of the coarse one.
Isometry measurement_dilation_refined(const Povm& povm);

DensityOperator isometry_apply(const Isometry& v, const DensityOperator& rho,
                               const std::string& target_label);

// Petz recovery channel T(w) = s^1/2 N^dag(N(s)^-1/2 w N(s)^-1/2) s^1/2.
QuantumChannel petz_map(const DensityOperator& sigma, const QuantumChannel& n,
                        bool allow_singular = false);

enum class PetzDirection { CtoAC, CtoBC };

// Petz conditional recovery applied to the complementary marginal of a
// tripartite state with labels (A, B, C); returns a state on (A, B, C).
DensityOperator petz_conditional_extend(const DensityOperator& rho_abc,
                                        PetzDirection direction);

// Measure-and-reprepare channel sigma -> sum_x <v_x|sigma|v_x>
// r^1/2 |v_x><v_x| r^1/2 / <v_x|r|v_x> for a reference state r; entanglement
// breaking by construction.
QuantumChannel measure_reprepare_channel(const Mat& reference_state, const Povm& rank_one);

QuantumChannel discord_eb_channel(const DensityOperator& rho_ab, const Povm& rank_one_on_a);
QuantumChannel holevo_eb_channel(const DensityOperator& rho_b, const Povm& rank_one_on_b);

// Normalized Choi state (id (x) N)(Phi_d); PSD iff CP, Tr_out = I/d iff TP.
Mat choi_matrix(const QuantumChannel& n);

} // namespace renyi
