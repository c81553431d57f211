#pragma once

// Lane-vector complex/color/spin arithmetic shared by the bulk, EO1 and EO2
// kernels. Real and imaginary parts are separate vectors; gamma phases are
// resolved at compile time from kGamma.

#include <array>

#include "eowilson/algebra.hpp"
#include "eowilson/layout.hpp"
#include "eowilson/shift_tables.hpp"

namespace eowilson::detail {

template <class V>
struct CVec {
  V re, im;
};

template <class V>
using HalfSpinorV = std::array<std::array<CVec<V>, kNumColors>, kNumHalfSpins>;  // [spin][color]

template <class V>
using SpinorV = std::array<std::array<CVec<V>, kNumColors>, kNumSpins>;

template <class V>
struct LinkV {
  CVec<V> u[kNumColors][kNumColors];
};

// a + phase * b
template <Phase P, class V>
inline CVec<V> add_phase(const CVec<V>& a, const CVec<V>& b) {
  if constexpr (P == Phase::kPlusOne) return {a.re + b.re, a.im + b.im};
  if constexpr (P == Phase::kMinusOne) return {a.re - b.re, a.im - b.im};
  if constexpr (P == Phase::kPlusI) return {a.re - b.im, a.im + b.re};
  if constexpr (P == Phase::kMinusI) return {a.re + b.im, a.im - b.re};
}

template <class V>
inline CVec<V> load_cvec(const typename V::value_type* re, const typename V::value_type* im) {
  return {V::load(re), V::load(im)};
}

template <class V>
inline HalfSpinorV<V> zero_half() {
  HalfSpinorV<V> h;
  for (auto& s : h)
    for (auto& c : s) c = {V::zero(), V::zero()};
  return h;
}

template <class V>
inline SpinorV<V> zero_spinor() {
  SpinorV<V> a;
  for (auto& s : a)
    for (auto& c : s) c = {V::zero(), V::zero()};
  return a;
}

// Upper half of (1 + S gamma_Mu) applied to a packed spinor block.
template <int Mu, Sign S, class V>
inline HalfSpinorV<V> project_block(const typename V::value_type* blk) {
  using Real = typename V::value_type;
  using Field = PackedSpinorField<Real>;
  constexpr int j0 = kGamma.perm[Mu][0];
  constexpr int j1 = kGamma.perm[Mu][1];
  constexpr Phase p0 = with_sign(kGamma.phase[Mu][0], S);
  constexpr Phase p1 = with_sign(kGamma.phase[Mu][1], S);
  HalfSpinorV<V> h;
  for (int c = 0; c < kNumColors; ++c) {
    const CVec<V> s0 = load_cvec<V>(blk + Field::offset(c, 0, 0), blk + Field::offset(c, 0, 1));
    const CVec<V> s1 = load_cvec<V>(blk + Field::offset(c, 1, 0), blk + Field::offset(c, 1, 1));
    const CVec<V> sj0 = load_cvec<V>(blk + Field::offset(c, j0, 0), blk + Field::offset(c, j0, 1));
    const CVec<V> sj1 = load_cvec<V>(blk + Field::offset(c, j1, 0), blk + Field::offset(c, j1, 1));
    h[0][c] = add_phase<p0>(s0, sj0);
    h[1][c] = add_phase<p1>(s1, sj1);
  }
  return h;
}

template <int Mu, Sign S, class V>
inline void reconstruct_acc(const HalfSpinorV<V>& h, SpinorV<V>& acc) {
  constexpr int j2 = kGamma.perm[Mu][2];
  constexpr int j3 = kGamma.perm[Mu][3];
  constexpr Phase p2 = with_sign(kGamma.phase[Mu][2], S);
  constexpr Phase p3 = with_sign(kGamma.phase[Mu][3], S);
  for (int c = 0; c < kNumColors; ++c) {
    acc[0][c] = {acc[0][c].re + h[0][c].re, acc[0][c].im + h[0][c].im};
    acc[1][c] = {acc[1][c].re + h[1][c].re, acc[1][c].im + h[1][c].im};
    acc[2][c] = add_phase<p2>(acc[2][c], h[j2][c]);
    acc[3][c] = add_phase<p3>(acc[3][c], h[j3][c]);
  }
}

template <class V>
inline LinkV<V> load_link(const typename V::value_type* blk) {
  using Real = typename V::value_type;
  using Field = PackedGaugeField<Real>;
  LinkV<V> u;
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b)
      u.u[a][b] = load_cvec<V>(blk + Field::offset(a, b, 0), blk + Field::offset(a, b, 1));
  return u;
}

template <class V>
inline LinkV<V> zero_link() {
  LinkV<V> u;
  for (auto& row : u.u)
    for (auto& e : row) e = {V::zero(), V::zero()};
  return u;
}

// w = U v per half-spin component.
template <class V>
inline HalfSpinorV<V> mul_link(const LinkV<V>& u, const HalfSpinorV<V>& h) {
  HalfSpinorV<V> w;
  for (int s = 0; s < kNumHalfSpins; ++s)
    for (int a = 0; a < kNumColors; ++a) {
      V re = u.u[a][0].re * h[s][0].re;
      V im = u.u[a][0].re * h[s][0].im;
      re = fnma(u.u[a][0].im, h[s][0].im, re);
      im = fma(u.u[a][0].im, h[s][0].re, im);
      for (int b = 1; b < kNumColors; ++b) {
        re = fma(u.u[a][b].re, h[s][b].re, re);
        re = fnma(u.u[a][b].im, h[s][b].im, re);
        im = fma(u.u[a][b].re, h[s][b].im, im);
        im = fma(u.u[a][b].im, h[s][b].re, im);
      }
      w[s][a] = {re, im};
    }
  return w;
}

// w = U^dagger v.
template <class V>
inline HalfSpinorV<V> mul_link_dag(const LinkV<V>& u, const HalfSpinorV<V>& h) {
  HalfSpinorV<V> w;
  for (int s = 0; s < kNumHalfSpins; ++s)
    for (int a = 0; a < kNumColors; ++a) {
      V re = u.u[0][a].re * h[s][0].re;
      V im = u.u[0][a].re * h[s][0].im;
      re = fma(u.u[0][a].im, h[s][0].im, re);
      im = fnma(u.u[0][a].im, h[s][0].re, im);
      for (int b = 1; b < kNumColors; ++b) {
        re = fma(u.u[b][a].re, h[s][b].re, re);
        re = fma(u.u[b][a].im, h[s][b].im, re);
        im = fma(u.u[b][a].re, h[s][b].im, im);
        im = fnma(u.u[b][a].im, h[s][b].re, im);
      }
      w[s][a] = {re, im};
    }
  return w;
}

template <class V, class Shift>
inline HalfSpinorV<V> shift_half(const Shift& shift, const HalfSpinorV<V>& cur,
                                 const HalfSpinorV<V>& nb) {
  HalfSpinorV<V> out;
  for (int s = 0; s < kNumHalfSpins; ++s)
    for (int c = 0; c < kNumColors; ++c)
      out[s][c] = {shift.apply(cur[s][c].re, nb[s][c].re), shift.apply(cur[s][c].im, nb[s][c].im)};
  return out;
}

template <class V, class Shift>
inline LinkV<V> shift_link(const Shift& shift, const LinkV<V>& cur, const LinkV<V>& nb) {
  LinkV<V> out;
  for (int a = 0; a < kNumColors; ++a)
    for (int b = 0; b < kNumColors; ++b)
      out.u[a][b] = {shift.apply(cur.u[a][b].re, nb.u[a][b].re),
                     shift.apply(cur.u[a][b].im, nb.u[a][b].im)};
  return out;
}

// dst = scale * acc, one flat pass of whole-vector stores.
template <class V>
inline void store_scaled(const SpinorV<V>& acc, typename V::value_type scale,
                         typename V::value_type* dst) {
  using Real = typename V::value_type;
  using Field = PackedSpinorField<Real>;
  const V k = V::broadcast(scale);
  for (int c = 0; c < kNumColors; ++c)
    for (int s = 0; s < kNumSpins; ++s) {
      (k * acc[s][c].re).store(dst + Field::offset(c, s, 0));
      (k * acc[s][c].im).store(dst + Field::offset(c, s, 1));
    }
}

// dst += scale * acc.
template <class V>
inline void accumulate_scaled(const SpinorV<V>& acc, typename V::value_type scale,
                              typename V::value_type* dst) {
  using Real = typename V::value_type;
  using Field = PackedSpinorField<Real>;
  const V k = V::broadcast(scale);
  for (int c = 0; c < kNumColors; ++c)
    for (int s = 0; s < kNumSpins; ++s) {
      Real* re = dst + Field::offset(c, s, 0);
      Real* im = dst + Field::offset(c, s, 1);
      fma(k, acc[s][c].re, V::load(re)).store(re);
      fma(k, acc[s][c].im, V::load(im)).store(im);
    }
}

// Half-spinor buffer entries are ordered [color][spin][re,im][lane].
inline constexpr int half_offset(int color, int spin, int reim) {
  return (color * kNumHalfSpins + spin) * 2 + reim;
}

}  // namespace eowilson::detail
