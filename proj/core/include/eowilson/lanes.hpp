#pragma once

// Fixed-width lane vectors and the shuffle primitives used by the stencil.
//
// Two backends share one interface:
//   ScalarVec  - plain array and loops; the reference, always available.
//   NativeVec  - GCC/Clang vector extensions (vector_size), shuffles through
//                __builtin_shuffle where the compiler has it.
// LaneVector<T, N> names the backend the kernels are compiled with.
//
// Shuffle semantics (out = result, i = lane):
//   select(p, a, b)   out[i] = p[i] ? a[i] : b[i]
//   table(idx, a)     out[i] = idx[i] < N ? a[idx[i]] : 0
//   ext(a, b, imm)    out[i] = concat(a, b)[imm + i], 0 <= imm < N
//   compact(p, a)     active lanes of a moved to 0..k-1 in order, rest 0
//
// There is no gather or scatter: data moves with whole-vector (or
// leading-lanes) loads and stores plus the shuffles above.

#include <array>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <stdexcept>
#include <type_traits>

#if defined(__GNUC__) || defined(__clang__)
#define EOWILSON_HAVE_VECTOR_EXT 1
#endif

namespace eowilson::lanes {

// 512-bit vectors: 16 floats or 8 doubles.
inline constexpr int kVectorBytes = 64;
template <class T>
inline constexpr int kWidth = kVectorBytes / static_cast<int>(sizeof(T));

template <class T>
using mask_int_t = std::conditional_t<sizeof(T) == 4, std::int32_t, std::int64_t>;

template <class T, int N>
class Predicate {
 public:
  using storage_type = std::array<mask_int_t<T>, N>;

  Predicate() = default;
  Predicate(std::initializer_list<bool> bits) {
    int i = 0;
    for (bool b : bits) {
      if (i < N) set(i, b);
      ++i;
    }
  }
  static Predicate all(bool value) {
    Predicate p;
    for (int i = 0; i < N; ++i) p.set(i, value);
    return p;
  }

  bool operator[](int i) const { return bits_[i] != 0; }
  void set(int i, bool value) { bits_[i] = value ? mask_int_t<T>(-1) : mask_int_t<T>(0); }
  int count() const {
    int c = 0;
    for (auto b : bits_) c += (b != 0);
    return c;
  }
  const storage_type& raw() const { return bits_; }
  friend bool operator==(const Predicate&, const Predicate&) = default;

 private:
  alignas(kVectorBytes) storage_type bits_{};
};

template <class T, int N>
class IndexVector {
 public:
  using storage_type = std::array<mask_int_t<T>, N>;

  IndexVector() = default;
  IndexVector(std::initializer_list<int> idx) {
    int i = 0;
    for (int v : idx) {
      if (i < N) set(i, v);
      ++i;
    }
  }
  static IndexVector identity() {
    IndexVector v;
    for (int i = 0; i < N; ++i) v.set(i, i);
    return v;
  }
  // Every entry out of range: table() yields zero.
  static IndexVector none() {
    IndexVector v;
    for (int i = 0; i < N; ++i) v.set(i, N);
    return v;
  }

  int operator[](int i) const { return static_cast<int>(idx_[i]); }
  void set(int i, int value) {
    if (value < 0) throw std::invalid_argument("lane index must be non-negative");
    idx_[i] = static_cast<mask_int_t<T>>(value);
  }
  const storage_type& raw() const { return idx_; }
  friend bool operator==(const IndexVector&, const IndexVector&) = default;

 private:
  alignas(kVectorBytes) storage_type idx_{};
};

inline void check_ext_immediate(int imm, int n) {
  if (imm < 0 || imm >= n) throw std::out_of_range("ext immediate must lie in [0, vlen)");
}

template <class T, int N>
class ScalarVec {
 public:
  using value_type = T;
  static constexpr int width = N;
  using predicate_type = Predicate<T, N>;
  using index_type = IndexVector<T, N>;

  ScalarVec() = default;

  static ScalarVec zero() { return broadcast(T(0)); }
  static ScalarVec broadcast(T v) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = v;
    return r;
  }
  static ScalarVec load(const T* p) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = p[i];
    return r;
  }
  // Lanes [count, N) are zero.
  static ScalarVec load_first(const T* p, int count) {
    ScalarVec r = zero();
    for (int i = 0; i < count; ++i) r.v_[i] = p[i];
    return r;
  }
  void store(T* p) const {
    for (int i = 0; i < N; ++i) p[i] = v_[i];
  }
  void store_first(T* p, int count) const {
    for (int i = 0; i < count; ++i) p[i] = v_[i];
  }

  T operator[](int i) const { return v_[i]; }
  void set(int i, T value) { v_[i] = value; }

  friend ScalarVec operator+(const ScalarVec& a, const ScalarVec& b) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = a.v_[i] + b.v_[i];
    return r;
  }
  friend ScalarVec operator-(const ScalarVec& a, const ScalarVec& b) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = a.v_[i] - b.v_[i];
    return r;
  }
  friend ScalarVec operator*(const ScalarVec& a, const ScalarVec& b) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = a.v_[i] * b.v_[i];
    return r;
  }
  friend ScalarVec operator-(const ScalarVec& a) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = -a.v_[i];
    return r;
  }
  ScalarVec& operator+=(const ScalarVec& b) { return *this = *this + b; }
  ScalarVec& operator-=(const ScalarVec& b) { return *this = *this - b; }

  // a * b + c
  friend ScalarVec fma(const ScalarVec& a, const ScalarVec& b, const ScalarVec& c) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = a.v_[i] * b.v_[i] + c.v_[i];
    return r;
  }
  // c - a * b
  friend ScalarVec fnma(const ScalarVec& a, const ScalarVec& b, const ScalarVec& c) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = c.v_[i] - a.v_[i] * b.v_[i];
    return r;
  }

  friend ScalarVec select(const predicate_type& p, const ScalarVec& a, const ScalarVec& b) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = p[i] ? a.v_[i] : b.v_[i];
    return r;
  }
  friend ScalarVec table(const index_type& idx, const ScalarVec& a) {
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = idx[i] < N ? a.v_[idx[i]] : T(0);
    return r;
  }
  friend ScalarVec ext(const ScalarVec& a, const ScalarVec& b, int imm) {
    check_ext_immediate(imm, N);
    ScalarVec r;
    for (int i = 0; i < N; ++i) r.v_[i] = (imm + i < N) ? a.v_[imm + i] : b.v_[imm + i - N];
    return r;
  }
  friend ScalarVec compact(const predicate_type& p, const ScalarVec& a) {
    ScalarVec r = zero();
    int k = 0;
    for (int i = 0; i < N; ++i)
      if (p[i]) r.v_[k++] = a.v_[i];
    return r;
  }

 private:
  alignas(kVectorBytes) std::array<T, N> v_{};
};

#ifdef EOWILSON_HAVE_VECTOR_EXT

template <class T, int N>
class NativeVec {
 public:
  using value_type = T;
  static constexpr int width = N;
  using predicate_type = Predicate<T, N>;
  using index_type = IndexVector<T, N>;
  using mask_int = mask_int_t<T>;
  typedef T reg_type __attribute__((vector_size(sizeof(T) * N)));
  typedef mask_int ireg_type __attribute__((vector_size(sizeof(T) * N)));

  NativeVec() : r_{} {}

  static NativeVec zero() { return NativeVec(reg_type{}); }
  static NativeVec broadcast(T v) { return NativeVec(reg_type{} + v); }
  static NativeVec load(const T* p) {
    reg_type r;
    std::memcpy(&r, p, sizeof(r));
    return NativeVec(r);
  }
  static NativeVec load_first(const T* p, int count) {
    alignas(kVectorBytes) T tmp[N] = {};
    for (int i = 0; i < count; ++i) tmp[i] = p[i];
    return load(tmp);
  }
  void store(T* p) const { std::memcpy(p, &r_, sizeof(r_)); }
  void store_first(T* p, int count) const {
    for (int i = 0; i < count; ++i) p[i] = r_[i];
  }

  T operator[](int i) const { return r_[i]; }
  void set(int i, T value) { r_[i] = value; }

  friend NativeVec operator+(const NativeVec& a, const NativeVec& b) { return NativeVec(a.r_ + b.r_); }
  friend NativeVec operator-(const NativeVec& a, const NativeVec& b) { return NativeVec(a.r_ - b.r_); }
  friend NativeVec operator*(const NativeVec& a, const NativeVec& b) { return NativeVec(a.r_ * b.r_); }
  friend NativeVec operator-(const NativeVec& a) { return NativeVec(-a.r_); }
  NativeVec& operator+=(const NativeVec& b) {
    r_ += b.r_;
    return *this;
  }
  NativeVec& operator-=(const NativeVec& b) {
    r_ -= b.r_;
    return *this;
  }
  friend NativeVec fma(const NativeVec& a, const NativeVec& b, const NativeVec& c) {
    return NativeVec(a.r_ * b.r_ + c.r_);
  }
  friend NativeVec fnma(const NativeVec& a, const NativeVec& b, const NativeVec& c) {
    return NativeVec(c.r_ - a.r_ * b.r_);
  }

  friend NativeVec select(const predicate_type& p, const NativeVec& a, const NativeVec& b) {
    const ireg_type m = load_int(p.raw());
    ireg_type ia, ib;
    std::memcpy(&ia, &a.r_, sizeof(ia));
    std::memcpy(&ib, &b.r_, sizeof(ib));
    const ireg_type out = (ia & m) | (ib & ~m);
    reg_type r;
    std::memcpy(&r, &out, sizeof(r));
    return NativeVec(r);
  }

  friend NativeVec table(const index_type& idx, const NativeVec& a) {
    const ireg_type iv = load_int(idx.raw());
#if defined(__GNUC__) && !defined(__clang__)
    const reg_type shuffled = __builtin_shuffle(a.r_, iv);
    const ireg_type in_range = iv < static_cast<mask_int>(N);
    ireg_type bits;
    std::memcpy(&bits, &shuffled, sizeof(bits));
    bits &= in_range;
    reg_type r;
    std::memcpy(&r, &bits, sizeof(r));
    return NativeVec(r);
#else
    NativeVec r;
    for (int i = 0; i < N; ++i) r.r_[i] = iv[i] < N ? a.r_[iv[i]] : T(0);
    return r;
#endif
  }

  friend NativeVec ext(const NativeVec& a, const NativeVec& b, int imm) {
    check_ext_immediate(imm, N);
#if defined(__GNUC__) && !defined(__clang__)
    ireg_type sel;
    for (int i = 0; i < N; ++i) sel[i] = static_cast<mask_int>(imm + i);
    return NativeVec(__builtin_shuffle(a.r_, b.r_, sel));
#else
    NativeVec r;
    for (int i = 0; i < N; ++i) r.r_[i] = (imm + i < N) ? a.r_[imm + i] : b.r_[imm + i - N];
    return r;
#endif
  }

  friend NativeVec compact(const predicate_type& p, const NativeVec& a) {
    NativeVec r;
    int k = 0;
    for (int i = 0; i < N; ++i)
      if (p[i]) r.r_[k++] = a.r_[i];
    return r;
  }

 private:
  explicit NativeVec(reg_type r) : r_(r) {}

  static ireg_type load_int(const std::array<mask_int, N>& v) {
    ireg_type r;
    std::memcpy(&r, v.data(), sizeof(r));
    return r;
  }

  reg_type r_;
};

template <class T, int N>
using LaneVector = NativeVec<T, N>;
inline constexpr const char* kBackendName = "native";

#else

template <class T, int N>
using LaneVector = ScalarVec<T, N>;
inline constexpr const char* kBackendName = "scalar";

#endif

}  // namespace eowilson::lanes
