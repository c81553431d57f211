#pragma once

// D_W xi = eta through the even-odd reduced system
//   (1 - D_eo D_oe) xi_e = eta_e - D_eo eta_o,   xi_o = eta_o - D_oe xi_e
// with CG on the normal equations of the reduced operator.

#include <vector>

#include "eowilson/layout.hpp"
#include "eowilson/wilson.hpp"

namespace eowilson {

struct SolverParams {
  double tol = 1e-8;  // on |D_W xi - eta| / |eta|
  int max_iter = 1000;
  // The recurrence residual is replaced by the true one this often.
  int true_residual_interval = 50;

  // Throws ConfigError unless tol > 0 and max_iter > 0.
  void validate() const;
};

template <class Real>
struct SolverResult {
  FermionField<Real> solution;
  int iterations = 0;
  // |D_W xi - eta| / |eta|, recomputed from the solution.
  double residual = 0;
  bool converged = false;
  // Relative residual after each iteration (index 0 is the start).
  std::vector<double> history;

  explicit SolverResult(const LatticeGeometry& geom) : solution(geom) {}
};

// Non-convergence is reported through `converged`; a NaN or infinite
// residual throws NumericalError.
template <class Real>
SolverResult<Real> solve_even_odd(WilsonOperator<Real>& op, const FermionField<Real>& eta,
                                  const SolverParams& params);

// Reference: CGNR on the unreduced operator, D_W^dagger = gamma5 D_W gamma5.
template <class Real>
SolverResult<Real> solve_full_cgnr(WilsonOperator<Real>& op, const FermionField<Real>& eta,
                                   const SolverParams& params);

// out = M^dagger in for M = 1 - D_eo D_oe.
template <class Real>
void adjoint_apply_prec(WilsonOperator<Real>& op, const PackedSpinorField<Real>& in,
                        PackedSpinorField<Real>& out);

// |D_W xi - eta| / |eta|
template <class Real>
double full_residual(WilsonOperator<Real>& op, const FermionField<Real>& xi,
                     const FermionField<Real>& eta);

}  // namespace eowilson
