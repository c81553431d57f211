#pragma once

// Packed Wilson hopping operator.
//
//   D_eo / D_oe :  out(x) = -kappa sum_mu [ (1 - gamma_mu) U_mu(x) in(x + mu)
//                                        + (1 + gamma_mu) U_mu(x - mu)^dagger in(x - mu) ]
//   full        :  out_e = in_e + D_eo in_o,   out_o = in_o + D_oe in_e
//   prec        :  M = 1 - D_eo D_oe on even sites
//
// Each hop is project -> shift -> link multiply -> reconstruct, over x, y,
// z, t with the forward hop before the backward one. One application runs,
// per domain: EO1 pack, post exchange, bulk, wait, EO2.

#include <cstdint>
#include <memory>
#include <vector>

#include "eowilson/geometry.hpp"
#include "eowilson/halo.hpp"
#include "eowilson/layout.hpp"
#include "eowilson/shift_tables.hpp"
#include "eowilson/timing.hpp"

namespace eowilson {

inline constexpr std::int64_t kFlopsPerSite = 1368;

struct HoppingParams {
  double kappa = 0.125;
  // Antiperiodic boundary in t: links crossing the global t boundary are negated.
  bool antiperiodic_t = false;

  // kappa = 1 / (8 + 2 m); throws ConfigError when m = -4 or the result is not finite.
  static HoppingParams from_mass(double mass);
  // Throws ConfigError for a non-finite kappa.
  void validate() const;
};

struct OperatorOptions {
  bool enforce_self_comm = true;
  int threads = 1;  // per domain
  bool poison_halo = false;
  double comm_timeout_seconds = 60.0;
};

// Test hook selecting which parts of an application contribute.
struct StageMask {
  bool bulk = true;
  bool halo = true;
};

// 1368 * sites / 2 for one off-diagonal block, over the global lattice.
std::int64_t hopping_flops(const Dims& lattice);
std::int64_t hopping_flops(const LatticeGeometry& geom);
// One application of D_eo D_oe (also of 1 - D_eo D_oe): 1368 * sites.
std::int64_t prec_flops(const LatticeGeometry& geom);

template <class Real>
class WilsonOperator {
 public:
  // The operator keeps its own copy of the links (boundary phases applied).
  WilsonOperator(const PackedGaugeField<Real>& gauge, const HoppingParams& params,
                 const OperatorOptions& options = {});
  ~WilsonOperator();
  WilsonOperator(const WilsonOperator&) = delete;
  WilsonOperator& operator=(const WilsonOperator&) = delete;

  const LatticeGeometry& geometry() const { return geom_; }
  const HoppingParams& params() const { return params_; }
  const OperatorOptions& options() const { return options_; }

  // out (parity opposite to in) = D in. Throws LayoutError on mismatch.
  void apply_hopping(const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out);
  void apply_deo(const PackedSpinorField<Real>& in_odd, PackedSpinorField<Real>& out_even);
  void apply_doe(const PackedSpinorField<Real>& in_even, PackedSpinorField<Real>& out_odd);
  void apply_full(const FermionField<Real>& in, FermionField<Real>& out);
  void apply_prec(const PackedSpinorField<Real>& in_even, PackedSpinorField<Real>& out_even);
  // M^dagger = gamma5 M gamma5.
  void apply_prec_dag(const PackedSpinorField<Real>& in_even, PackedSpinorField<Real>& out_even);

  ShiftTables<Real>& shift_tables() { return tables_; }
  const ShiftTables<Real>& shift_tables() const { return tables_; }
  const HaloPlan<Real>& halo_plan(Parity output) const { return plans_[index(output)]; }
  const PackedGaugeField<Real>& gauge() const { return gauge_; }

  void set_stage_mask(const StageMask& mask) { mask_ = mask; }
  StageTimer& timer() { return timer_; }
  const StageTimer& timer() const { return timer_; }

 private:
  struct DomainState;

  void run_domain(int domain, const PackedSpinorField<Real>& in, PackedSpinorField<Real>& out);

  LatticeGeometry geom_;
  HoppingParams params_;
  OperatorOptions options_;
  PackedGaugeField<Real> gauge_;
  ShiftTables<Real> tables_;
  std::array<HaloPlan<Real>, kEvenOdd> plans_;
  std::unique_ptr<LoopbackHub> hub_;
  std::vector<std::unique_ptr<DomainState>> domains_;
  StageTimer timer_;
  StageMask mask_;
  std::unique_ptr<PackedSpinorField<Real>> scratch_odd_;
  std::unique_ptr<PackedSpinorField<Real>> scratch_even_;
};

// Single-domain lane shift: out(x) = in(x + step * mu) for every site of the
// parity opposite to in. With wrap, the domain is periodic; otherwise lanes
// whose source lies across the domain face are zero (left for the halo).
enum class ShiftBoundary { kWrap, kZero };
template <class Real>
PackedSpinorField<Real> shift_packed(const PackedSpinorField<Real>& in, int mu, int step,
                                     const ShiftTables<Real>& tables,
                                     ShiftBoundary boundary = ShiftBoundary::kWrap);

}  // namespace eowilson
