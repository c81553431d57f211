#include "eowilson/solver.hpp"

#include <cmath>

#include "eowilson/errors.hpp"
#include "eowilson/linalg.hpp"

namespace eowilson {

void SolverParams::validate() const {
  if (!(tol > 0)) throw ConfigError("solver tolerance must be positive");
  if (max_iter < 1) throw ConfigError("solver needs at least one iteration");
  if (true_residual_interval < 1) throw ConfigError("true residual interval must be positive");
}

namespace {

// Both-parity field operations for the unreduced reference.
template <class Real>
double norm2(const FermionField<Real>& f) {
  return eowilson::norm2(f.even) + eowilson::norm2(f.odd);
}
template <class Real>
void axpy(double a, const FermionField<Real>& x, FermionField<Real>& y) {
  eowilson::axpy(a, x.even, y.even);
  eowilson::axpy(a, x.odd, y.odd);
}
template <class Real>
void xpay(const FermionField<Real>& x, double a, FermionField<Real>& y) {
  eowilson::xpay(x.even, a, y.even);
  eowilson::xpay(x.odd, a, y.odd);
}
template <class Real>
void copy(const FermionField<Real>& x, FermionField<Real>& y) {
  eowilson::copy(x.even, y.even);
  eowilson::copy(x.odd, y.odd);
}
template <class Real>
void set_zero(FermionField<Real>& f) {
  f.even.set_zero();
  f.odd.set_zero();
}
template <class Real>
void set_zero(PackedSpinorField<Real>& f) {
  f.set_zero();
}

double checked_sqrt(double n2) {
  if (!std::isfinite(n2)) throw NumericalError("residual is not finite");
  return std::sqrt(n2);
}

// CGNR for A x = b starting from x = 0. `converged_check` receives x and
// returns the true relative residual the caller reports.
template <class Field, class Apply, class ApplyDag, class Check>
void cgnr(Apply&& apply, ApplyDag&& apply_dag, Check&& converged_check, const Field& b,
          double b_scale, Field& x, Field& r, Field& p, Field& z, Field& w,
          const SolverParams& params, int& iterations, double& residual, bool& converged,
          std::vector<double>& history) {
  set_zero(x);
  copy(b, r);
  double rnorm = checked_sqrt(norm2(r));
  history.push_back(rnorm / b_scale);
  iterations = 0;
  converged = false;
  residual = rnorm / b_scale;
  if (rnorm <= params.tol * b_scale) {
    residual = converged_check(x);
    converged = residual <= params.tol;
    if (converged) return;
  }
  apply_dag(r, z);
  copy(z, p);
  double gamma = norm2(z);
  for (int k = 1; k <= params.max_iter; ++k) {
    apply(p, w);
    const double wn = norm2(w);
    if (!std::isfinite(wn)) throw NumericalError("operator produced a non-finite vector");
    if (wn == 0.0) break;
    const double alpha = gamma / wn;
    axpy(alpha, p, x);
    axpy(-alpha, w, r);
    iterations = k;
    if (k % params.true_residual_interval == 0) {
      apply(x, w);
      xpay(b, -1.0, w);  // w = b - A x
      copy(w, r);
    }
    rnorm = checked_sqrt(norm2(r));
    history.push_back(rnorm / b_scale);
    if (rnorm <= params.tol * b_scale) {
      residual = converged_check(x);
      if (residual <= params.tol) {
        converged = true;
        return;
      }
      apply(x, w);
      xpay(b, -1.0, w);
      copy(w, r);
    }
    apply_dag(r, z);
    const double gamma_next = norm2(z);
    if (!std::isfinite(gamma_next)) throw NumericalError("normal residual is not finite");
    xpay(z, gamma_next / gamma, p);
    gamma = gamma_next;
  }
  residual = converged_check(x);
  converged = residual <= params.tol;
}

}  // namespace

template <class Real>
double full_residual(WilsonOperator<Real>& op, const FermionField<Real>& xi,
                     const FermionField<Real>& eta) {
  FermionField<Real> dxi(op.geometry());
  op.apply_full(xi, dxi);
  axpy(-1.0, eta, dxi);
  const double en = norm2(eta);
  const double rn = checked_sqrt(norm2(dxi));
  return en > 0 ? rn / std::sqrt(en) : rn;
}

template <class Real>
void adjoint_apply_prec(WilsonOperator<Real>& op, const PackedSpinorField<Real>& in,
                        PackedSpinorField<Real>& out) {
  op.apply_prec_dag(in, out);
}

template <class Real>
SolverResult<Real> solve_even_odd(WilsonOperator<Real>& op, const FermionField<Real>& eta,
                                  const SolverParams& params) {
  params.validate();
  const LatticeGeometry& geom = op.geometry();
  SolverResult<Real> result(geom);
  const double eta_norm = checked_sqrt(norm2(eta));
  if (eta_norm == 0.0) {
    result.converged = true;
    result.history.push_back(0.0);
    return result;
  }

  // eta'_e = eta_e - D_eo eta_o
  PackedSpinorField<Real> rhs(geom, Parity::kEven);
  op.apply_deo(eta.odd, rhs);
  xpay(eta.even, -1.0, rhs);

  PackedSpinorField<Real> r(geom, Parity::kEven), p(geom, Parity::kEven),
      z(geom, Parity::kEven), w(geom, Parity::kEven);
  FermionField<Real>& xi = result.solution;
  auto reconstruct_odd = [&](const PackedSpinorField<Real>& xe) {
    op.apply_doe(xe, xi.odd);
    xpay(eta.odd, -1.0, xi.odd);  // xi_o = eta_o - D_oe xi_e
  };
  auto check = [&](const PackedSpinorField<Real>& xe) {
    reconstruct_odd(xe);
    return full_residual(op, xi, eta);
  };
  cgnr(
      [&](const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out) { op.apply_prec(in, out); },
      [&](const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out) {
        op.apply_prec_dag(in, out);
      },
      check, rhs, eta_norm, xi.even, r, p, z, w, params, result.iterations, result.residual,
      result.converged, result.history);
  reconstruct_odd(xi.even);
  return result;
}

template <class Real>
SolverResult<Real> solve_full_cgnr(WilsonOperator<Real>& op, const FermionField<Real>& eta,
                                   const SolverParams& params) {
  params.validate();
  const LatticeGeometry& geom = op.geometry();
  SolverResult<Real> result(geom);
  const double eta_norm = checked_sqrt(norm2(eta));
  if (eta_norm == 0.0) {
    result.converged = true;
    result.history.push_back(0.0);
    return result;
  }
  FermionField<Real> r(geom), p(geom), z(geom), w(geom), tmp(geom);
  auto apply = [&](const FermionField<Real>& in, FermionField<Real>& out) { op.apply_full(in, out); };
  auto apply_dag = [&](const FermionField<Real>& in, FermionField<Real>& out) {
    apply_gamma5(in.even, tmp.even);
    apply_gamma5(in.odd, tmp.odd);
    op.apply_full(tmp, out);
    apply_gamma5(out.even, out.even);
    apply_gamma5(out.odd, out.odd);
  };
  auto check = [&](const FermionField<Real>& x) { return full_residual(op, x, eta); };
  cgnr(apply, apply_dag, check, eta, eta_norm, result.solution, r, p, z, w, params,
       result.iterations, result.residual, result.converged, result.history);
  return result;
}

#define EOWILSON_INSTANTIATE_SOLVER(Real)                                                       \
  template SolverResult<Real> solve_even_odd<Real>(WilsonOperator<Real>&,                       \
                                                   const FermionField<Real>&, const SolverParams&); \
  template SolverResult<Real> solve_full_cgnr<Real>(WilsonOperator<Real>&,                      \
                                                    const FermionField<Real>&,                  \
                                                    const SolverParams&);                       \
  template void adjoint_apply_prec<Real>(WilsonOperator<Real>&, const PackedSpinorField<Real>&, \
                                         PackedSpinorField<Real>&);                             \
  template double full_residual<Real>(WilsonOperator<Real>&, const FermionField<Real>&,        \
                                      const FermionField<Real>&);

EOWILSON_INSTANTIATE_SOLVER(float)
EOWILSON_INSTANTIATE_SOLVER(double)

}  // namespace eowilson
