#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "spectramp/chebpoly.hpp"
#include "spectramp/detail/cheb_core.hpp"

namespace spectramp {

enum class PhaseKind { AB, B_only, CD, D_only };

std::string to_string(PhaseKind k);
PhaseKind phase_kind_from_string(const std::string& s);

/// Phases phi_1..phi_N of the rotation product
///   U(theta) = e^{-i frame Z} e^{-i sigma_{phi_N} theta} ... e^{-i sigma_{phi_1} theta}
///            = A I + i B Z + i C X + i D Y.
/// `frame` is a query-free partial reflection; it is 0 for sequences realizing a full (A,B)
/// specification with A(1) = 1, and lets a lone B or D component be placed without the
/// A(1) = 1 constraint.
template <class T>
struct BasicPhaseSequence {
    std::vector<T> phases;
    T frame{0};
    PhaseKind kind = PhaseKind::AB;
    int target_degree() const { return static_cast<int>(phases.size()); }
};

using PhaseSequence = BasicPhaseSequence<double>;
using PhaseSequenceX = BasicPhaseSequence<detail::xreal>;

PhaseSequence to_double(const PhaseSequenceX& p);

/// Variable in which the polynomial components are expressed.
/// cos: A, B are polynomials in x = cos(theta); C = sin(theta) C~(x), D = sin(theta) D~(x) and the
///      fields C, D hold the reduced C~, D~.
/// sin: C, D are polynomials in y = sin(theta); A = cos(theta) A~(y), B = cos(theta) B~(y).
enum class SpecVariable { cos, sin };

struct FullSpec {
    ChebPoly A, B, C, D;
    SpecVariable var = SpecVariable::cos;
};

struct Components {
    double A = 0, B = 0, C = 0, D = 0;
};

Components spec_components(const FullSpec& s, double theta);
Components rotation_components(const PhaseSequence& phi, double theta);

/// Sample the rotation product and project onto Chebyshev polynomials in the given variable.
FullSpec spec_from_phases(const PhaseSequence& phi, SpecVariable var = SpecVariable::cos);

/// Raised by complete_ab when a condition of the (A,B) characterization fails.
class InfeasibleSpec : public PreconditionError {
  public:
    InfeasibleSpec(const std::string& condition, double witness, double value);
    std::string condition;
    double witness;
    double value;
};

struct CompletionOptions {
    double tol = 1e-10;
    double outside_max = 3.0;  // conditions (4),(5) are checked on [1, outside_max]
};

/// Completes an achievable (A, B) with C, D from a factorization of 1 - A^2 - B^2.
FullSpec complete_ab(const ChebPoly& A, const ChebPoly& B, const CompletionOptions& opt = {});

/// Layer stripping on the Laurent coefficients of U(e^{i theta}), followed by a Gauss-Newton
/// polish when the stripped sequence misses `tol`. Only the components are a contract; the phases
/// of ill-conditioned sequences are not unique at working precision.
PhaseSequence phases_from_full(const FullSpec& spec, double tol = 1e-8);
PhaseSequenceX phases_from_full_extended(const FullSpec& spec, double tol = 1e-12);

/// Phases whose B component is the given polynomial in cos(theta).
PhaseSequence phases_for_B(const ChebPoly& B);
PhaseSequenceX phases_for_B_extended(const ChebPoly& B);
/// Same without the B(0) = 0 precondition (valid for the flexible construction).
PhaseSequence phases_for_B_unchecked(const ChebPoly& B);

/// Phases whose D component is the given odd polynomial in sin(theta).
PhaseSequence phases_for_D(const ChebPoly& D);

/// Max deviation of the rotation product from every component of the spec on `grid` points.
double verify_phases(const PhaseSequence& phi, const FullSpec& spec, int grid);
/// Deviation from a single component ('A', 'B', 'C' or 'D') expressed in the given variable.
/// For the reduced components (C, D under cos; A, B under sin) `target` is the reduced polynomial.
double verify_phases(const PhaseSequence& phi, char component, const ChebPoly& target, SpecVariable var,
                     int grid);
/// Extended-precision verification of a single component.
double verify_phases_extended(const PhaseSequenceX& phi, char component, const ChebPoly& target,
                              SpecVariable var, int grid);
double verify_phases_extended(const PhaseSequenceX& phi, const FullSpec& spec, int grid);

nlohmann::json to_json(const PhaseSequence& p);
PhaseSequence phases_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FullSpec& s);
FullSpec spec_from_json(const nlohmann::json& j);

/// Reduce to (-pi, pi].
double canonical_phase(double a);

namespace detail {

struct NewtonStats {
    int iterations = 0;
    double residual = 0;
};

/// Symmetric phases (size d+1) with Re P(x) = g(x) for the standard
/// e^{i p_0 Z} W(x) e^{i p_1 Z} ... W(x) e^{i p_d Z}, W(x) = e^{i arccos(x) X}.
std::vector<double> solve_symmetric_re(const ChebPoly& g, int d, NewtonStats* stats = nullptr);
std::vector<xreal> refine_symmetric_re(const ChebPoly& g, int d, const std::vector<double>& start,
                                       NewtonStats* stats = nullptr);

/// Gauss-Newton refinement of all phases and the frame against a full spec.
PhaseSequence polish_full(PhaseSequence start, const FullSpec& spec, int iters);

} // namespace detail

} // namespace spectramp
