#include <gtest/gtest.h>

#include <cstring>
#include <set>

#include "eowilson/halo.hpp"
#include "operator_support.hpp"

using namespace eowilson;
using namespace eowilson::testing_support;

namespace {

template <class Real>
std::size_t channel_index_of(const FaceEntry<Real>& e, int color, int spin, int reim, int j) {
  return e.offset + static_cast<std::size_t>((color * 2 + spin) * 2 + reim) * e.count + j;
}

template <class Real>
std::vector<int> active_lanes(const FaceEntry<Real>& e) {
  std::vector<int> out;
  for (int l = 0; l < lanes::kWidth<Real>; ++l)
    if (e.active[l]) out.push_back(l);
  return out;
}

}  // namespace

TEST(HaloPlan, XFaceUsesTwoOfSixteenLanes) {
  const auto g = make_geom<float>({16, 16, 4, 4}, {4, 4});
  const auto plan = make_halo_plan<float>(g, Parity::kEven, true);
  for (Travel tr : {Travel::kDown, Travel::kUp}) {
    const auto& ch = plan.channel(kX, tr);
    ASSERT_TRUE(ch.active);
    for (const auto* side : {&ch.send, &ch.recv})
      for (const auto& e : *side) {
        EXPECT_EQ(e.count, 2);
        EXPECT_EQ(e.active.count(), 2);
        EXPECT_FALSE(e.whole);
      }
    EXPECT_EQ(ch.total_lanes, 16 * 4 * 4 / 2);
    EXPECT_EQ(ch.buffer_reals, static_cast<std::size_t>(ch.total_lanes) * 12);
  }
}

// Every face carries half its sites (one parity), and the buffers have no slack.
TEST(HaloPlan, FaceCountsMatchGeometry) {
  for (const Dims& grid : {Dims{1, 1, 1, 1}, Dims{1, 1, 2, 2}, Dims{2, 2, 1, 1}}) {
    const auto g = make_geom<float>({16, 16, 16, 16}, {4, 4}, grid);
    const Dims& l = g.local_size();
    for (Parity p : {Parity::kEven, Parity::kOdd}) {
      const auto plan = make_halo_plan<float>(g, p, true);
      for (int mu = 0; mu < kNumDims; ++mu) {
        const int face = static_cast<int>(g.local_volume() / l[mu] / 2);
        for (Travel tr : {Travel::kDown, Travel::kUp}) {
          const auto& ch = plan.channel(mu, tr);
          EXPECT_EQ(ch.total_lanes, face);
          int sent = 0, received = 0;
          for (const auto& e : ch.send) sent += e.count;
          for (const auto& e : ch.recv) received += e.count;
          EXPECT_EQ(sent, face);
          EXPECT_EQ(received, face);
          EXPECT_EQ(ch.buffer_reals, static_cast<std::size_t>(face) * 12);
        }
      }
    }
  }
  const auto g = make_geom<float>({16, 16, 16, 16}, {4, 4}, {1, 1, 2, 2});
  EXPECT_EQ(make_halo_plan<float>(g, Parity::kEven, false).channel(kT, Travel::kDown).total_lanes,
            16 * 16 * 8 / 2);
}

TEST(HaloPlan, WholeFacesAndPrefixFaces) {
  const auto g = make_geom<float>({16, 16, 4, 4}, {4, 4});
  const auto plan = make_halo_plan<float>(g, Parity::kOdd, true);
  for (int mu : {kZ, kT})
    for (const auto& e : plan.channel(mu, Travel::kUp).send) EXPECT_TRUE(e.whole);
  // The lower y-face is the first row of a block vector.
  for (const auto& e : plan.channel(kY, Travel::kDown).send) {
    EXPECT_EQ(e.count, 4);
    EXPECT_TRUE(e.prefix);
  }
  for (const auto& e : plan.channel(kY, Travel::kUp).send) EXPECT_FALSE(e.prefix);
}

TEST(HaloPlan, EmptyWithoutDecompositionOrEnforcement) {
  const auto g = make_geom<double>({8, 8, 4, 4}, {2, 4});
  const auto plan = make_halo_plan<double>(g, Parity::kEven, false);
  EXPECT_TRUE(plan.empty());
  for (int c = 0; c < kNumChannels; ++c) EXPECT_EQ(plan.channel(c).buffer_reals, 0u);
  for (int b = 0; b < g.blocks_per_parity(); ++b) EXPECT_TRUE(plan.recv_for_block(b).empty());
  EXPECT_FALSE(make_halo_plan<double>(g, Parity::kEven, true).empty());

  const auto split = make_geom<double>({8, 8, 4, 4}, {2, 4}, {1, 1, 1, 2});
  const auto partial = make_halo_plan<double>(split, Parity::kEven, false);
  for (int mu = 0; mu < kNumDims; ++mu) EXPECT_EQ(partial.communicated(mu), mu == kT);
}

TEST(HaloPlan, RejectsWrongPrecision) {
  const auto g = make_geom<double>({8, 8, 4, 4}, {2, 4});
  EXPECT_THROW(make_halo_plan<float>(g, Parity::kEven, true), ConfigError);
}

TEST(HaloPlan, ReceiveReferencesCoverEveryEntryOnce) {
  const auto g = make_geom<float>({16, 16, 8, 8}, {8, 2}, {1, 1, 2, 1});
  const auto plan = make_halo_plan<float>(g, Parity::kEven, true);
  std::set<std::pair<int, int>> seen;
  for (int b = 0; b < g.blocks_per_parity(); ++b)
    for (const RecvRef& r : plan.recv_for_block(b)) {
      EXPECT_EQ(plan.channel(r.channel).recv[r.entry].block, b);
      EXPECT_TRUE(seen.insert({r.channel, r.entry}).second);
    }
  std::size_t total = 0;
  for (int c = 0; c < kNumChannels; ++c) total += plan.channel(c).recv.size();
  EXPECT_EQ(seen.size(), total);
}

template <class Real>
class HaloPack : public ::testing::Test {};
using Reals = ::testing::Types<float, double>;
TYPED_TEST_SUITE(HaloPack, Reals);

TYPED_TEST(HaloPack, ZeroFieldGivesZeroBuffers) {
  using Real = TypeParam;
  const auto g = make_geom<Real>({16, 8, 4, 4}, candidate_tilings<Real>()[1]);
  const auto gauge = pack_gauge<Real>(random_gauge(g.global_size(), 1), g);
  const auto plan = make_halo_plan<Real>(g, Parity::kEven, true);
  HaloBuffers<Real> buf(plan);
  for (auto& s : buf.send) std::fill(s.begin(), s.end(), Real(9));
  pack_boundary_eo1(PackedSpinorField<Real>(g, Parity::kOdd), gauge, plan, 0, buf);
  for (const auto& s : buf.send)
    for (Real v : s) ASSERT_EQ(v, Real(0));
  // Zero receive buffers leave the output unchanged.
  PackedSpinorField<Real> out(g, Parity::kEven);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = static_cast<Real>(i % 7);
  const auto before = out;
  unpack_boundary_eo2(buf, gauge, plan, 0, Real(-0.1), out);
  EXPECT_TRUE(std::equal(out.values().begin(), out.values().end(), before.values().begin()));
}

// Send buffers hold exactly the projected (and for kUp, U^dagger-multiplied)
// boundary half spinors, gathered here site by site.
TYPED_TEST(HaloPack, SendBuffersMatchGatheredBoundary) {
  using Real = TypeParam;
  for (const Tiling& tl : valid_tilings<Real>({16, 8, 8, 4}, {1, 2, 1, 1})) {
    const auto g = make_geom<Real>({16, 8, 8, 4}, tl, {1, 2, 1, 1});
    const ScalarGaugeField u = random_gauge(g.global_size(), 4);
    const auto gauge = pack_gauge<Real>(u, g);
    const ScalarSpinorField f = rounded<Real>(random_spinor_field(g.global_size(), 5));
    const auto in = pack_spinor<Real>(f, Parity::kOdd, g);
    const auto plan = make_halo_plan<Real>(g, Parity::kEven, true);
    HaloBuffers<Real> buf(plan);
    for (int d = 0; d < g.num_domains(); ++d) {
      pack_boundary_eo1(in, gauge, plan, d, buf, 2);
      for (int mu = 0; mu < kNumDims; ++mu)
        for (Travel tr : {Travel::kDown, Travel::kUp}) {
          const auto& ch = plan.channel(mu, tr);
          const auto& data = buf.send[channel_index(mu, tr)];
          for (const auto& e : ch.send) {
            const auto lanes_on_face = active_lanes(e);
            ASSERT_EQ(static_cast<int>(lanes_on_face.size()), e.count);
            for (int j = 0; j < e.count; ++j) {
              const SiteCoord site = g.to_global(d, g.site(Parity::kOdd, e.block, lanes_on_face[j]));
              ASSERT_EQ(site[mu] % g.local_size(mu), tr == Travel::kDown ? 0 : g.local_size(mu) - 1);
              HalfSpinor h = project(mu, tr == Travel::kDown ? Sign::kMinus : Sign::kPlus, f.at(site));
              if (tr == Travel::kUp)
                for (auto& row : h) row = su3_dag_mul(u.at(site, mu), row);
              for (int c = 0; c < 3; ++c)
                for (int s = 0; s < 2; ++s) {
                  ASSERT_NEAR(data[channel_index_of(e, c, s, 0, j)], h[s][c].real(), 10 * tolerance<Real>());
                  ASSERT_NEAR(data[channel_index_of(e, c, s, 1, j)], h[s][c].imag(), 10 * tolerance<Real>());
                }
            }
          }
        }
    }
  }
}

TEST(Transport, TwoDomainRingInTEchoesBuffers) {
  const auto g = make_geom<double>({8, 8, 4, 8}, {2, 4}, {1, 1, 1, 2});
  const auto plan = make_halo_plan<double>(g, Parity::kEven, true);
  LoopbackHub hub(2, 5.0);
  std::vector<std::unique_ptr<Transport>> ends;
  std::vector<HaloBuffers<double>> bufs;
  for (int r = 0; r < 2; ++r) {
    ends.push_back(hub.endpoint(r));
    bufs.emplace_back(plan);
    for (int c = 0; c < kNumChannels; ++c)
      for (std::size_t i = 0; i < bufs[r].send[c].size(); ++i)
        bufs[r].send[c][i] = 1000.0 * r + 100.0 * c + static_cast<double>(i);
  }
  std::vector<PendingExchange> pending;
  for (int r = 0; r < 2; ++r) pending.push_back(exchange(*ends[r], plan, g.grid(), bufs[r]));
  for (auto& p : pending) p.wait();
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < kNumChannels; ++c) {
      // t channels come from the other domain; the rest are self-sends.
      const int from = c / 2 == kT ? 1 - r : r;
      EXPECT_EQ(bufs[r].recv[c], bufs[from].send[c]) << "rank " << r << " channel " << c;
    }
}

TEST(Transport, DisabledDirectionsAreNoOps) {
  const auto g = make_geom<double>({8, 8, 4, 4}, {2, 4});
  const auto plan = make_halo_plan<double>(g, Parity::kEven, false);
  LoopbackHub hub(1, 0.01);
  auto end = hub.endpoint(0);
  HaloBuffers<double> buf(plan);
  PendingExchange p = exchange(*end, plan, g.grid(), buf);
  EXPECT_NO_THROW(p.wait());
}

TEST(Transport, MissingMessageTimesOutWithDirection) {
  const auto g = make_geom<double>({8, 8, 4, 8}, {2, 4}, {1, 1, 1, 2});
  const auto plan = make_halo_plan<double>(g, Parity::kEven, true);
  LoopbackHub hub(2, 0.05);
  auto end = hub.endpoint(0);
  HaloBuffers<double> buf(plan);
  PendingExchange p = exchange(*end, plan, g.grid(), buf);  // rank 1 never sends
  try {
    p.wait();
    FAIL() << "expected a communication error";
  } catch (const CommunicationError& e) {
    EXPECT_EQ(e.direction(), kT);
  }
  EXPECT_THROW(hub.endpoint(2), ConfigError);
}

TEST(Transport, SizeMismatchIsReported) {
  LoopbackHub hub(1, 1.0);
  auto end = hub.endpoint(0);
  std::vector<std::byte> small(4), large(8);
  end->post_recv(0, 5, large);
  end->post_send(0, 5, small);
  try {
    end->wait_all();
    FAIL() << "expected a communication error";
  } catch (const CommunicationError& e) {
    EXPECT_EQ(e.direction(), 2);
  }
}

TEST(Transport, MessagesAreFifoPerTag) {
  LoopbackHub hub(1, 1.0);
  auto end = hub.endpoint(0);
  int a = 1, b = 2, ra = 0, rb = 0;
  end->post_send(0, 0, std::as_bytes(std::span(&a, 1)));
  end->post_send(0, 0, std::as_bytes(std::span(&b, 1)));
  end->post_recv(0, 0, std::as_writable_bytes(std::span(&ra, 1)));
  end->post_recv(0, 0, std::as_writable_bytes(std::span(&rb, 1)));
  end->wait_all();
  EXPECT_EQ(ra, 1);
  EXPECT_EQ(rb, 2);
}

TEST(Poison, ReceiveBuffersArePoisonedUntilDelivery) {
  const auto g = make_geom<float>({16, 8, 4, 4}, {4, 4});
  const auto plan = make_halo_plan<float>(g, Parity::kEven, true);
  LoopbackHub hub(1, 1.0);
  auto end = hub.endpoint(0);
  HaloBuffers<float> buf(plan);
  PendingExchange p = exchange(*end, plan, g.grid(), buf, true);
  for (const auto& r : buf.recv) EXPECT_EQ(count_poisoned<float>({r.data(), r.size()}), r.size());
  p.wait();
  for (const auto& r : buf.recv) EXPECT_EQ(count_poisoned<float>({r.data(), r.size()}), 0u);
  const float poison = halo_poison<float>();
  EXPECT_TRUE(std::isnan(poison));
  std::uint32_t bits;
  std::memcpy(&bits, &poison, 4);
  EXPECT_EQ(bits, 0x7FA5A5A5u);
}

TEST(Poison, PoisonedRunsMatchTheOracle) {
  OperatorOptions o;
  o.poison_halo = true;
  const auto g = make_geom<double>({8, 8, 8, 8}, {2, 4}, {2, 1, 1, 2});
  EXPECT_LE(hopping_error<double>(g, random_gauge(g.global_size(), 6), 0.13, Parity::kOdd, 7, o), 1e-12);
}

namespace {

// Hops that leave the local domain through a communicated face.
bool crosses_face(const LatticeGeometry& g, const SiteCoord& global, int mu, int step) {
  const int local = global[mu] % g.local_size(mu);
  const int src = local + step;
  return src < 0 || src >= g.local_size(mu);
}

template <class Real>
ScalarSpinorField masked_apply(const LatticeGeometry& g, const ScalarGaugeField& u,
                               const ScalarSpinorField& src, StageMask mask) {
  WilsonOperator<Real> op(pack_gauge<Real>(u, g), {0.11, false});
  op.set_stage_mask(mask);
  PackedSpinorField<Real> out(g, Parity::kEven);
  op.apply_hopping(pack_spinor<Real>(src, Parity::kOdd, g), out);
  return unpack_spinor(out);
}

}  // namespace

// Bulk contributes exactly the hops inside the domain and EO2 exactly the
// hops across faces, so the two write disjoint contributions.
TYPED_TEST(HaloPack, BulkAndBoundaryContributionsAreDisjoint) {
  using Real = TypeParam;
  for (const Dims& grid : {Dims{1, 1, 1, 1}, Dims{2, 1, 1, 2}}) {
    const Dims size = sizeof(Real) == 4 ? Dims{16, 8, 4, 4} : Dims{8, 8, 4, 4};
    for (const Tiling& tl : valid_tilings<Real>(size, grid)) {
      const auto g = make_geom<Real>(size, tl, grid);
      const ScalarGaugeField u = random_gauge(size, 8);
      const ScalarSpinorField src =
          restrict_parity(rounded<Real>(random_spinor_field(size, 9)), Parity::kOdd);
      OracleOptions inner, outer;
      inner.include_hop = [&](const SiteCoord& s, int mu, int step) { return !crosses_face(g, s, mu, step); };
      outer.include_hop = [&](const SiteCoord& s, int mu, int step) { return crosses_face(g, s, mu, step); };
      const auto bulk = masked_apply<Real>(g, u, src, {true, false});
      const auto halo = masked_apply<Real>(g, u, src, {false, true});
      const auto expect_bulk = restrict_parity(naive_hopping(u, src, 0.11, inner), Parity::kEven);
      const auto expect_halo = restrict_parity(naive_hopping(u, src, 0.11, outer), Parity::kEven);
      EXPECT_LE(relative_l2(bulk, expect_bulk), tolerance<Real>()) << to_string(tl);
      EXPECT_LE(relative_l2(halo, expect_halo), tolerance<Real>()) << to_string(tl);
      // Sites with no face hop receive nothing from EO2.
      for (std::int64_t i = 0; i < g.global_volume(); ++i) {
        const SiteCoord c = from_lexicographic(i, size);
        bool on_face = false;
        for (int mu = 0; mu < kNumDims; ++mu)
          on_face = on_face || crosses_face(g, c, mu, 1) || crosses_face(g, c, mu, -1);
        if (!on_face) ASSERT_EQ(halo.sites[i], Spinor{});
      }
    }
  }
}

TYPED_TEST(HaloPack, DecompositionInvariance) {
  using Real = TypeParam;
  const Dims size = sizeof(Real) == 4 ? Dims{16, 16, 8, 8} : Dims{8, 8, 8, 8};
  const Tiling tl = sizeof(Real) == 4 ? Tiling{4, 4} : Tiling{2, 4};
  const ScalarGaugeField u = random_gauge(size, 10);
  const ScalarSpinorField src = rounded<Real>(random_spinor_field(size, 11));
  ScalarSpinorField reference;
  for (const Dims& grid : {Dims{1, 1, 1, 1}, Dims{2, 1, 1, 1}, Dims{1, 1, 2, 2}, Dims{2, 2, 2, 2}}) {
    const auto g = make_geom<Real>(size, tl, grid);
    OperatorOptions o;
    o.threads = 2;
    WilsonOperator<Real> op(pack_gauge<Real>(u, g), {0.12, true}, o);
    PackedSpinorField<Real> out(g, Parity::kOdd);
    op.apply_hopping(pack_spinor<Real>(src, Parity::kEven, g), out);
    const ScalarSpinorField r = unpack_spinor(out);
    if (reference.sites.empty())
      reference = r;
    else
      EXPECT_LE(relative_l2(r, reference), tolerance<Real>()) << to_string(grid);
  }
}
