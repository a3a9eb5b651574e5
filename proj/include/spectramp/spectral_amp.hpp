#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "spectramp/ampamp.hpp"
#include "spectramp/blockenc.hpp"
#include "spectramp/report.hpp"

namespace spectramp {

struct AmpResult {
    BlockEncoding enc_out;
    double new_alpha = 1;
    /// Operator-norm distortion in the form the corresponding contract states it.
    double measured_distortion = 0;
    long queries = 0;
    nlohmann::json meta = nlohmann::json::object();
};

/// Block of the result is H_amp / (2 Lambda) with (1 / 2 Lambda) ||H_amp - H|| <= eps.
/// Lambda / alpha > 1/2 takes the exact dilution path (one extra ancilla qubit, no polynomial).
AmpResult spectral_multiply(const BlockEncoding& enc, double Lambda, double eps);

/// Block of the result is gap_amp_poly(Delta, eps)[H / alpha], normalization Delta * alpha. The
/// distortion is the largest deviation from (l + 1 - Delta) / Delta over eigenvalues l of H / alpha
/// in [-1, -1 + Delta], and from the mirrored law on [1 - Delta, 1].
AmpResult low_energy_amplify(const BlockEncoding& enc, double Delta, double eps);

/// Amplitude multiplication on both overlap factors, each with its own c qubit and target
/// Gamma_side = sqrt(Lambda_side) at relative error eps / 2. The composite block is
/// H_lin / (4 alpha sqrt(Lambda_beta Lambda_gamma)). enc_out is the d = 2 dilation of the Hermitian
/// part of H_lin (what downstream qubitization consumes); meta carries the discarded anti-Hermitian
/// norm, the raw block and per-side query counts. The distortion is ||H_lin - H|| / ||H||.
AmpResult overlap_amplify(const OverlapFactors& factors, double LambdaB, double LambdaG, double eps);

/// Cross-check with known row sums: each flag amplitude is multiplied by exactly 1 / (2 Gamma_side).
/// Returns the composite block, H / (4 alpha sqrt(Lambda_beta Lambda_gamma)) up to rounding.
Mat overlap_block_exact(const OverlapFactors& factors, double LambdaB, double LambdaG);

/// Composite block U_row^dagger U_mix U_col restricted to |0>_a, from the matrix-free factors.
Mat overlap_block(const OverlapFactors& factors);

struct SimResult {
    Mat X;  // approximation of e^{-iHt} on the system
    SimReport report;
};

/// Overlap factors, amplification at Lambda_beta = Lambda_gamma = Lambda_1 / (d Lambda_max), then
/// qubitization. Lambda_beta > 1/2 leaves the composite encoding unamplified. Budget: relative
/// error 0.4 eps / (t Lambda) in the amplification, eps / 2 in the simulation.
SimResult sparse_simulate(const SparseOracle& oracle, double t, double eps);

/// Low-energy amplification at eps / (2 t Delta alpha), then qubitization at eps / 2. On the low
/// subspace X matches e^{-i (H + (1 - Delta) alpha) t}; the reported error is measured there.
SimResult simulate_low_energy(const BlockEncoding& enc, double Delta, double t, double eps);

struct ExpTerm {
    double alpha = 1;
    Mat V;          // e^{-i H_j}
    Mat reference;  // H_j when known; otherwise the principal logarithm of V is used
};

/// Encodings from exponentials at eps / (2 t alpha), an LCU over them, then qubitization at
/// eps / 2, for H = sum_j alpha_j H_j.
SimResult simulate_with_exponentials(const std::vector<ExpTerm>& terms, double t, double eps);

/// Principal Hermitian logarithm: H with e^{-iH} = V, spectrum in (-pi, pi].
Mat log_unitary(const Mat& V);

} // namespace spectramp
