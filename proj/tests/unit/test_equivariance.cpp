#include <gtest/gtest.h>

#include <random>

#include "equichain/chain_spec.hpp"
#include "equichain/equivariance.hpp"

using namespace equichain;

namespace {

Monomial v(std::uint32_t k, std::uint32_t j, std::uint32_t e = 1) { return Monomial::variable({k, j}, e); }
Monomial x(std::uint32_t j, std::uint32_t e = 1) { return v(1, j, e); }

ChainSpec partition_chain(std::vector<std::vector<std::uint32_t>> parts, std::uint32_t horizon) {
  ChainSpec spec;
  for (auto& p : parts) spec.generators.push_back(ChainGenerator::from_partition(Partition(std::move(p))));
  spec.horizon = horizon;
  return spec;
}

ChainSpec inc3_chain() {
  ChainSpec spec;
  spec.rows = 3;
  spec.symmetry = Symmetry::inc;
  for (auto u : {v(1, 1, 2) * v(2, 1, 3) * v(2, 2), v(1, 3, 3) * v(2, 2, 4) * v(3, 2, 5), v(3, 1), v(1, 4, 2)}) {
    ChainGenerator g;
    g.element = u;
    g.width = 4;
    spec.generators.push_back(g);
  }
  spec.horizon = 7;
  return spec;
}

}  // namespace

TEST(Partition, Validation) {
  EXPECT_THROW(Partition(std::vector<std::uint32_t>{}), SpecError);
  EXPECT_THROW(Partition({1, 2}), SpecError);
  EXPECT_THROW(Partition({2, 0}), SpecError);
  Partition p({4, 1});
  EXPECT_EQ(p.length(), 2u);
  EXPECT_EQ(p.monomial(), x(1, 4) * x(2));
}

TEST(Orbits, SymOrbitSizes) {
  // |Sym(n) u| = n! / ((n - k)! * prod of multiplicities of equal column patterns)
  EXPECT_EQ(sym_orbit(x(1, 4) * x(2), 2).size(), 2u);
  EXPECT_EQ(sym_orbit(x(1, 4) * x(2), 5).size(), 20u);
  EXPECT_EQ(sym_orbit(x(1, 3) * x(2, 3), 5).size(), 10u);
  EXPECT_EQ(sym_orbit(x(1, 2) * x(2, 2) * x(3), 4).size(), 12u);
  EXPECT_EQ(sym_orbit(Monomial{}, 3).size(), 1u);
  EXPECT_EQ(sym_orbit(v(1, 1) * v(2, 2), 3).size(), 6u);
  EXPECT_EQ(sym_orbit(v(1, 1) * v(2, 1), 3).size(), 3u);
  EXPECT_THROW(sym_orbit(x(3), 2), DomainError);
}

TEST(Orbits, SymOrbitMatchesAllPermutations) {
  std::mt19937_64 rng(3);
  for (int it = 0; it < 50; ++it) {
    std::vector<Factor> fs;
    for (std::uint32_t j = 1; j <= 3; ++j)
      for (std::uint32_t k = 1; k <= 2; ++k)
        if (auto e = rng() % 3) fs.push_back({{k, j}, static_cast<std::uint32_t>(e)});
    auto u = Monomial::from_factors(fs);
    std::vector<std::uint32_t> perm = {1, 2, 3, 4};
    std::set<Monomial> brute;
    do {
      brute.insert(apply_perm(Permutation(perm), u));
    } while (std::next_permutation(perm.begin(), perm.end()));
    EXPECT_EQ(sym_orbit(u, 4), std::vector<Monomial>(brute.begin(), brute.end()));
  }
}

TEST(Orbits, IncImages) {
  std::size_t count = 0;
  for_each_inc_map(2, 5, [&](const IncMap&) { ++count; });
  EXPECT_EQ(count, 10u);
  EXPECT_EQ(inc_images(x(1) * x(2, 2), 2, 4).size(), 6u);
  EXPECT_EQ(inc_images(x(2), 2, 4), (std::vector<Monomial>{x(2), x(3), x(4)}));
  EXPECT_THROW(for_each_inc_map(3, 2, [](const IncMap&) {}), DomainError);
}

TEST(Orbits, PolynomialOrbit) {
  auto f = parse_polynomial("x[1]^2+x[2]*x[3]", 1);
  auto orb3 = sym_orbit(f, 3);
  EXPECT_EQ(orb3.size(), 3u);
  EXPECT_EQ(sym_orbit(f, 4).size(), 12u);
  auto p2 = parse_polynomial("x[1]^2+x[2]^2", 1);
  EXPECT_EQ(sym_orbit(p2, 3).size(), 3u);
  // x1 - x2 and x2 - x1 agree up to a scalar
  auto d = parse_polynomial("x[1]-x[2]", 1);
  EXPECT_EQ(sym_orbit(d, 2).size(), 1u);
}

TEST(Chains, PartitionChainTruncations) {
  auto snaps = materialize(partition_chain({{4, 1}, {3, 3}}, 3), 3);
  ASSERT_EQ(snaps.size(), 3u);
  EXPECT_TRUE(snaps[0].monomial().is_zero());
  RingContext R2(1, 2);
  EXPECT_EQ(snaps[1].monomial(), MonomialIdeal::minimalize({x(1, 4) * x(2), x(1) * x(2, 4), x(1, 3) * x(2, 3)}, R2));
  RingContext R3(1, 3);
  EXPECT_EQ(snaps[2].monomial(),
            MonomialIdeal::minimalize({x(1, 4) * x(2), x(1, 4) * x(3), x(1) * x(2, 4), x(1) * x(3, 4), x(2, 4) * x(3),
                                       x(2) * x(3, 4), x(1, 3) * x(2, 3), x(1, 3) * x(3, 3), x(2, 3) * x(3, 3)},
                                      R3));
}

TEST(Chains, PolynomialSymChain) {
  ChainSpec spec = parse_chain_spec(R"({"symmetry": "sym", "generators": [{"width": 3, "polynomial": [
      {"monomial": [[1,1,2]]}, {"monomial": [[1,2,1],[1,3,1]]}]}], "horizon": 4})");
  auto snaps = materialize(spec, 4);
  EXPECT_TRUE(snaps[0].polynomials().empty());
  EXPECT_TRUE(snaps[1].polynomials().empty());
  EXPECT_EQ(snaps[2].polynomials().size(), 3u);
  EXPECT_EQ(snaps[3].polynomials().size(), 12u);
}

TEST(Chains, ThreeRowIncChainStabilityAndWeights) {
  auto spec = inc3_chain();
  auto snaps = materialize(spec, 7);
  auto inv = chain_invariants(snaps);
  ASSERT_TRUE(inv.stability_index.has_value());
  EXPECT_EQ(*inv.stability_index, 4u);
  EXPECT_EQ(inv.w, (std::vector<std::uint32_t>{2, 3, 1}));
  EXPECT_EQ(inv.omega, 1u);
  const auto& w4 = inv.rows[3];
  EXPECT_EQ(w4.w, (std::vector<std::uint32_t>{3, 4, 5}));
  EXPECT_EQ(w4.omega, 1u);
  // closed form for n >= 5
  for (std::uint32_t n = 5; n <= 7; ++n) {
    std::vector<Monomial> g;
    for (std::uint32_t j = 1; j < 4; ++j)
      for (std::uint32_t k = j + 1; k <= n - 2; ++k) g.push_back(v(1, j, 2) * v(2, j, 3) * v(2, k));
    for (std::uint32_t j = 1; j <= n - 3; ++j) g.push_back(v(3, j));
    for (std::uint32_t j = 4; j <= n; ++j) g.push_back(v(1, j, 2));
    EXPECT_EQ(snaps[n - 1].monomial(), MonomialIdeal::minimalize(g, RingContext(3, n))) << "n=" << n;
  }
}

TEST(Chains, KnnChainIsEdgeIdeal) {
  auto spec = load_chain_spec(std::string(CHAINS_DIR) + "/knn.chain");
  auto snaps = materialize(spec, 4);
  for (const auto& s : snaps) {
    std::vector<Monomial> g;
    for (std::uint32_t i = 1; i <= s.width; ++i)
      for (std::uint32_t j = 1; j <= s.width; ++j) g.push_back(v(1, i) * v(2, j));
    EXPECT_EQ(s.monomial(), MonomialIdeal::minimalize(g, RingContext(2, s.width)));
  }
  auto inv = chain_invariants(snaps);
  EXPECT_EQ(inv.gamma, 1u);
  for (const auto& r : inv.rows) EXPECT_EQ(r.gamma, 1u);
  EXPECT_EQ(covers(snaps[2].monomial()).minimal_covers, (std::vector<std::vector<std::uint32_t>>{{1}, {2}}));
  EXPECT_EQ(inv.stability_index, std::optional<std::uint32_t>(2));
}

TEST(Chains, IncInvarianceOfMaterializedChains) {
  for (auto spec : {partition_chain({{4, 1}, {3, 3}}, 5), inc3_chain()}) {
    auto snaps = materialize(spec, 6);
    for (std::size_t i = 0; i + 1 < snaps.size(); ++i) {
      auto img = inc_closure(snaps[i].monomial(), snaps[i].width, snaps[i + 1].width);
      EXPECT_TRUE(snaps[i + 1].monomial().contains(img));
    }
  }
}

TEST(Chains, StabilityNeedsHorizon) {
  auto snaps = materialize(partition_chain({{1}}, 1), 1);
  EXPECT_THROW(stability_index(snaps), HorizonError);
  auto spec = partition_chain({{2, 2}}, 3);
  EXPECT_THROW(materialize(spec, 1), HorizonError);
}

TEST(Chains, SpecValidation) {
  ChainSpec empty;
  EXPECT_THROW(empty.validate(), SpecError);
  auto spec = partition_chain({{4, 1}}, 3);
  spec.rows = 2;
  EXPECT_THROW(spec.validate(), SpecError);
  ChainSpec wide;
  ChainGenerator g;
  g.element = x(3);
  g.width = 2;
  wide.generators.push_back(g);
  wide.horizon = 3;
  EXPECT_THROW(wide.validate(), SpecError);
  auto bad_char = partition_chain({{1}}, 2);
  bad_char.characteristic = 4;
  EXPECT_THROW(bad_char.validate(), SpecError);
}
