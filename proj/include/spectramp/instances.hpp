#pragma once
// Test Hamiltonians: the spin-chain transfer family, the PARITY / OR / PARITY-of-OR constructions
// used for query lower bounds, and random sparse instances with a chosen one-norm ratio.
//
// Dense matrices are the source of truth; the sparse oracle is derived from them with exact norms.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectramp/blockenc.hpp"

namespace spectramp {

struct Instance {
    Mat H;
    SparseOracle oracle;
    /// family, d, max_norm, one_norm, spectral_norm and the constructor parameters.
    nlohmann::json meta;
};

/// Wraps a Hermitian matrix; norms and sparsity are measured from H.
Instance make_instance(const Mat& H, const std::string& family, nlohmann::json params = nlohmann::json::object());

/// (N+1)-dimensional chain, <j-1|H|j> = sqrt(j (N - j + 1)) / N. Transfers |0> to |N> at t = pi N / 2.
Instance h_spin(int N);

/// Chain (n+1) (x) clique (s) (x) output qubit. The hop j -> j+1 carries sqrt((j+1)(n-j)) / n times
/// the all-ones clique matrix times X^{x_j} on the output. At t = pi n / (2 s) the state
/// |0>|u>|0> becomes |n>|u>|parity(x)>.
Instance h_parity(const std::vector<int>& x, int s);

/// 2m-dimensional [[C1, C0], [C0^dagger, C1]] on (output, o); C0 holds the cyclic shifts of x.
/// Requires at most one nonzero bit. H |k>|u> = |k xor OR(x)>|u>.
Instance h_or(const std::vector<int>& x);

/// Chain (n+1) (x) clique (s) (x) [output (x) o] with H_OR of row j on the hop j -> j+1.
/// At t = pi n / (2 s) the output register holds the parity of the row-wise ORs.
Instance h_parity_or(const std::vector<std::vector<int>>& x, int s);

/// Index of |0>_chain |u>_clique |u>_o |0>_out amplitudes: the input state of h_parity_or.
Vec parity_or_input(int n, int m, int s);
/// Probability that measuring the output qubit of h_parity_or gives 1.
double parity_or_output_one(const Vec& psi, int n, int m, int s);

/// d-sparse Hermitian instance with ||H||_1 / (d ||H||_max) close to `ratio` (exact for circulant
/// patterns). Diagonal entries are +-1, off-diagonal entries have modulus (d ratio - 1) / (d - 1)
/// and random phases. Requires d <= n and ratio in (1/d, 1]; d = 1 gives a diagonal with ratio 1.
Instance random_sparse(int n, int d, double ratio, unsigned seed);

nlohmann::json to_json(const Instance& inst);

} // namespace spectramp
