#pragma once

#include "spectramp/blockenc.hpp"
#include "spectramp/chebpoly.hpp"
#include "spectramp/qsp.hpp"
#include "spectramp/report.hpp"

namespace spectramp {

/// Eigendecomposition of a Hermitian block: block = V diag(lambda) V^dagger.
struct SpectralFrame {
    Mat V;
    RVec lambda;
};
SpectralFrame spectral_frame(const BlockEncoding& enc);

/// Phased qubiterate. The ancilla of W is a (x) b with the source ancilla a major and the new
/// qubit b minor. On span{|0>_a|0>_b|l>, |0>_a|1>_b|l>} W acts as e^{-i sigma_phi theta_l},
/// theta_l = arccos(l); the second vector plays the role of |0 l-perp>. W is the identity for
/// a != 0. The 2D subspaces stay two-dimensional at l = +-1 (theta = 0 or pi).
struct Qubiterate {
    Mat W;  // active part on (b, s), dimension 2n
    BlockEncoding source;
    double phase = 0;

    BlockEncoding as_encoding() const;
};

Qubiterate qubiterate(const BlockEncoding& enc, double phi);

/// Circuit form for a Hermitian signal unitary (U = U^dagger):
/// P(beta) (2 Pi - I) U P(-beta), P(beta) = e^{-i beta (2 Pi - I) / 2}, beta = phi + pi/2.
/// It realizes the same 2D rotations with ancilla dimension d; used as a cross-check.
BlockEncoding qubiterate_circuit(const BlockEncoding& enc, double phi);

/// Product of N phased qubiterates and the frame rotation; block A[H/alpha] + i B[H/alpha].
BlockEncoding composite_qubiterate(const BlockEncoding& enc, const PhaseSequence& phi);

struct FlexibleOptions {
    bool require_zero_at_origin = true;
};

/// Encoding of B[H/alpha] with ancilla a (x) b (x) c (dimension 4d) and normalization 1:
/// V = Had_c (-i |1><0|_c W_phi + i |0><1|_c W_{-phi}) Had_c. One application costs N queries
/// to controlled U (the c qubit controls only the phases).
BlockEncoding flexible_qsp_apply(const BlockEncoding& enc, const ChebPoly& B, const FlexibleOptions& opt = {});
/// Same with precomputed phases for B.
BlockEncoding flexible_qsp_apply(const BlockEncoding& enc, const PhaseSequence& phi);

struct HamSimResult {
    BlockEncoding encoding;
    SimReport report;
};

/// ||X - e^{-iHt}|| <= eps for H = alpha * block. The even and odd parts of e^{-i tau x} are
/// realized by flexible QSP, combined by a one-qubit LCU into (C - iS)/2, and restored to
/// normalization 1 by one round of oblivious amplitude amplification. Ancilla dimension 8d;
/// queries 3 (n_cos + n_sin) per application of X.
HamSimResult hamsim_qubitization(const BlockEncoding& enc, double t, double eps);

} // namespace spectramp
