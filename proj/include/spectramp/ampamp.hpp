#pragma once
// Amplitude amplification on a state preparation G.
//
// Registers are laid out so that both marked subspaces are index prefixes: the input subspace is
// the first `in_dim` basis states and the good (flagged) subspace the first `good_dim`. For the
// single-target setting G acts on b (x) a with the flag qubit b major, so |0>_a|0>_b is index 0 and
// the good subspace |.>_a|0>_b is the first d indices. Circuits that add the qubit c put it in
// front (most major), so |0>_c keeps both prefixes.

#include <vector>

#include "spectramp/blockenc.hpp"
#include "spectramp/chebpoly.hpp"
#include "spectramp/qsp.hpp"
#include "spectramp/report.hpp"

namespace spectramp {

struct StatePrep {
    LinearOp G;
    Eigen::Index in_dim = 1;
    Eigen::Index good_dim = 1;
    /// Designated target inside the good subspace; empty means the normalized good part of G|0>.
    Vec target;

    /// G on C^{2d} with the flag qubit b major (good subspace = first d indices).
    static StatePrep single(const Mat& G, Vec target = {});

    Eigen::Index dim() const { return G.dim; }
    /// Unit target vector of length good_dim.
    Vec target_vector() const;
    /// lambda = <t, 0_b| G |0, 0_b>.
    cplx overlap() const;
};

/// Target amplitude after (-Ref_s Ref_t)^N G|0>; equals sin((2N + 1) arcsin(lambda)) for real lambda.
/// The sign per iterate is chosen so the closed form carries no (-1)^N.
cplx grover_amplify(const StatePrep& prep, int N);

/// I - (1 - e^{-i angle}) |s><s| for a unit vector s.
Mat partial_reflection(const Vec& s, double angle);
/// Same for the basis state |index> of C^dim.
Mat partial_reflection(Eigen::Index dim, Eigen::Index index, double angle);

/// Circuit on c (x) register realizing <0_c t| W |0_c 0> = D(lambda).
class AmpCircuit {
  public:
    /// W = V_phi (x) |+><+| + V_{pi - phi} (x) |-><-| built from phases for D.
    static AmpCircuit flexible(const StatePrep& prep, const PhaseSequence& phi);
    /// Dilution |Gamma>_c (x) G for Gamma >= 1/2: amplitude lambda / (2 Gamma) with one query.
    static AmpCircuit dilution(const StatePrep& prep, double Gamma);

    const StatePrep& prep() const { return prep_; }
    Eigen::Index dim() const { return 2 * prep_.dim(); }
    /// Queries to G and G^dagger per application.
    long queries() const { return queries_; }
    /// Degree of the realized amplitude polynomial.
    int degree() const { return degree_; }
    const PhaseSequence& phases() const { return phi_; }

    /// W x for x on c (x) register (c major).
    Mat apply(const Mat& x) const;
    /// W (|0>_c (x) x) for x on the input subspace (in_dim rows).
    Mat apply_input(const Mat& x) const;
    Mat dense() const;

    /// <0_c t, 0| W |0_c 0> for the prep's target.
    cplx target_amplitude() const;
    /// Amplitude realized by the phases at a given real overlap lambda (includes synthesis residual).
    double achieved_amplitude(double lambda) const;

  private:
    struct Gate {
        bool output;   // phase on the good subspace (true) or on the input subspace
        double angle;  // the marked rows are multiplied by e^{i angle}
    };
    Mat run_branch(int b, Mat x) const;

    StatePrep prep_;
    PhaseSequence phi_;
    std::vector<Gate> branch_[2];
    cplx global_[2] = {1.0, 1.0};
    double dilution_ = 0;  // > 0 selects the dilution circuit
    long queries_ = 0;
    int degree_ = 0;
};

AmpCircuit flexible_amp_amp(const StatePrep& prep, const ChebPoly& D);

struct AmpMultiply {
    AmpCircuit circuit;
    SimReport report;
};

/// Output amplitude lambda / (2 Gamma) (1 + delta), |delta| <= eps, for |lambda| <= Gamma.
/// Gamma >= 1/2 takes the dilution path. The report carries the measured relative error for the
/// prep's own overlap.
AmpMultiply amplitude_multiply(const StatePrep& prep, double Gamma, double eps);

} // namespace spectramp
