#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "../support/partition_tables.hpp"
#include "equichain/equichain.hpp"

using namespace equichain;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
  void info(const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

Monomial v(std::uint32_t k, std::uint32_t j, std::uint32_t e = 1) { return Monomial::variable({k, j}, e); }
Monomial x(std::uint32_t j, std::uint32_t e = 1) { return v(1, j, e); }

MonomialIdeal ideal(std::vector<Monomial> g, RingContext R) { return MonomialIdeal::minimalize(std::move(g), R); }

ChainSpec chain(const std::string& name) { return load_chain_spec(std::string(CHAINS_DIR) + "/" + name + ".chain"); }

Outcome partition_betti() {
  Outcome o;
  auto snaps = materialize(chain("p41_33"), 6);
  auto expected = testdata::p41_33_tables();
  for (std::uint32_t n = 2; n <= 6; ++n) {
    auto t = betti_table(snaps[n - 1].monomial());
    o.require(t == expected.at(n), "I" + std::to_string(n) + " differs:\n" + render_layout(t, "I" + std::to_string(n)));
  }
  auto i4 = betti_table(snaps[3].monomial());
  o.require(i4.at(0, 5) == 12 && i4.at(1, 6) == 12 && i4.at(2, 7) == 4 && i4.at(0, 6) == 6 && i4.at(1, 7) == 12 &&
                i4.at(1, 9) == 8 && i4.at(2, 10) == 12 && i4.at(2, 12) == 3 && i4.at(3, 13) == 4,
            "I4 spot entries");
  return o;
}

Outcome quadratic_initial_ideals() {
  Outcome o;
  auto snaps = materialize(chain("quad_sym"), 4);
  auto ini = initial_chain(snaps, TermOrder{OrderKind::grevlex});
  const auto& ini3 = ini.snapshots[2].monomial();
  const auto& ini4 = ini.snapshots[3].monomial();
  RingContext R3(1, 3), R4(1, 4);
  o.require(ini3 == ideal({x(2, 2), x(3) * x(2), x(3, 2), x(2) * x(1, 2), x(3) * x(1, 2), x(1, 4)}, R3),
            "ini(I3) = " + render(ini3));
  o.require(ini4 == ideal({x(2) * x(1), x(3) * x(1), x(4) * x(1), x(2, 2), x(3) * x(2), x(4) * x(2), x(3, 2), x(4) * x(3),
                           x(4, 2), x(1, 3)},
                          R4),
            "ini(I4) = " + render(ini4));
  o.require(ini3.contains(x(2, 2)) && !ini3.contains(x(1, 2)), "Sym-failure witness");
  o.require(ini4.contains(inc_closure(ini3, 3, 4)), "Inc_{3,4}(ini I3) inside ini I4");
  return o;
}

Outcome knn_series() {
  Outcome o;
  auto snaps = materialize(chain("knn"), 12);
  for (std::uint32_t n = 1; n <= 6; ++n) {
    auto h = hilbert_series(snaps[n - 1].monomial());
    o.require(h.dim == n, "dim at n=" + std::to_string(n));
    o.require(h.reduced == IntPoly::constant(2) - one_minus_t_power(n), "Q_" + std::to_string(n) + " = " + h.reduced.to_string());
  }
  auto table = series_table(snaps, 12);
  using B = BivariatePoly;
  auto one = B::constant(1);
  auto s = B::s();
  auto t = B::t();
  auto den = (one - t - s) * (one - s);
  auto literal = B::constant(2) * (one - s) * (one - t) - one;
  auto mismatch = verify_bivariate_form(table, literal, den, 12);
  if (mismatch) {
    o.require(false, "[2(1-s)(1-t)-1]/[(1-t-s)(1-s)] disagrees at s^" + std::to_string(mismatch->n) + " t^" +
                         std::to_string(mismatch->u) + ": series " + mismatch->table_value.get_str() + ", candidate " +
                         mismatch->candidate_value.get_str());
  }
  auto combined = B::constant(2) * (one - s) * (one - t) - (one - t - s);
  bool combined_ok = !verify_bivariate_form(table, combined, den, 12).has_value();
  o.info(std::string("2(1-t)/(1-t-s) - 1/(1-s) = [2(1-s)(1-t)-(1-t-s)]/[(1-t-s)(1-s)] ") +
         (combined_ok ? "matches" : "does not match") + " through total degree 12");
  return o;
}

Outcome covers_gamma() {
  Outcome o;
  auto snaps = materialize(chain("knn"), 6);
  auto inv = chain_invariants(snaps);
  o.require(inv.gamma == 1, "gamma of the K_{n,n} chain is " + std::to_string(inv.gamma));
  for (const auto& s : snaps) o.require(covers(s.monomial()).gamma == 1, "gamma at n=" + std::to_string(s.width));
  RingContext R(4, 3);
  auto I = ideal({v(1, 2, 2) * v(2, 3, 3), v(1, 1) * v(3, 2, 2), v(4, 2, 2)}, R);
  auto pd = minimal_primes(I);
  o.require(pd.primes.size() == 4, "four minimal primes");
  std::set<std::vector<std::uint32_t>> images;
  for (const auto& p : pd.primes) images.insert(row_image(p));
  o.require(images == std::set<std::vector<std::uint32_t>>{{1, 4}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}, "row images");
  o.require(covers(I).gamma == 2, "gamma(I3) = 2");
  return o;
}

Outcome weights_stability() {
  Outcome o;
  auto spec = chain("inc3");
  auto snaps = materialize(spec, 7);
  auto w4 = weights(snaps[3].monomial());
  o.require(w4.w == std::vector<std::uint32_t>{3, 4, 5} && w4.omega == 1, "weights of I4");
  auto inv = chain_invariants(snaps);
  o.require(inv.stability_index == std::optional<std::uint32_t>(4),
            "stability index " + (inv.stability_index ? std::to_string(*inv.stability_index) : std::string("none")));
  o.require(inv.w == std::vector<std::uint32_t>{2, 3, 1} && inv.omega == 1, "stabilized weights");
  return o;
}

Outcome regularity() {
  Outcome o;
  auto spec = chain("p41_33");
  auto snaps = materialize(spec, 6);
  auto tables = chain_betti_tables(snaps);
  auto p = predict_reg_c1(spec, snaps, tables);
  o.require(p.omega == 3, "omega");
  o.require(p.colon_reg == 2, "reg(I2:alpha)");
  o.require(p.colon_ideal == ideal({x(1, 2), x(2, 2), x(1) * x(2)}, RingContext(1, 2)), "I2:alpha = " + render(p.colon_ideal));
  o.require(p.report.predicted == "2n+2", "predicted " + p.report.predicted);
  for (std::uint32_t n = 2; n <= 6; ++n)
    o.require(p.report.values.count(n) && p.report.values.at(n) == static_cast<long>(2 * n + 2), "reg at n=" + std::to_string(n));
  o.require(p.report.verdict == Verdict::match, "verdict " + to_string(p.report.verdict));
  return o;
}

Outcome projective_dimension() {
  Outcome o;
  auto snaps = materialize(chain("p41_33"), 6);
  auto tables = chain_betti_tables(snaps);
  for (std::uint32_t n = 2; n <= 6; ++n) o.require(tables.at(n).pd() == n - 1, "pd(I" + std::to_string(n) + ")");
  std::size_t checked = 0;
  for (const auto& f : chain_files(CHAINS_DIR)) {
    auto spec = load_chain_spec(f);
    if (!spec.is_monomial()) continue;
    auto s = materialize(spec, spec.horizon);
    auto rep = pd_bounds_check(s, chain_betti_tables(s));
    o.require(rep.verdict == Verdict::bound_holds, spec.name + ": " + to_string(rep.verdict));
    ++checked;
  }
  o.info(std::to_string(checked) + " monomial corpus chains within codim-1 <= pd <= cn-1");
  return o;
}

Outcome segments() {
  Outcome o;
  auto snaps = materialize(chain("p41_33"), 6);
  auto res = segment_decomposition(chain_betti_tables(snaps), 2);
  if (!res.decomposition) {
    o.require(false, "no decomposition: " + res.failure);
    return o;
  }
  const auto& d = *res.decomposition;
  o.require(d.r == 2 && d.base.empty(), "base");
  o.require(d.segments == std::vector<LineSegment>{{{0, 5}, 0}, {{0, 6}, 2}, {{1, 6}, 2}}, "segments");
  o.require(d.verified_through == 6, "verified through n=6");
  return o;
}

Outcome minors() {
  Outcome o;
  auto snaps = materialize(chain("minors"), 4);
  auto ini = initial_chain(snaps, TermOrder{OrderKind::lex});
  for (std::uint32_t n = 3; n <= 4; ++n) {
    std::vector<Monomial> diag;
    for (std::uint32_t k1 = 1; k1 <= 3; ++k1)
      for (std::uint32_t k2 = k1 + 1; k2 <= 3; ++k2)
        for (std::uint32_t j1 = 1; j1 <= n; ++j1)
          for (std::uint32_t j2 = j1 + 1; j2 <= n; ++j2) diag.push_back(v(k1, j1) * v(k2, j2));
    const auto& I = ini.snapshots[n - 1].monomial();
    std::string tag = " at n=" + std::to_string(n);
    o.require(I == ideal(diag, RingContext(3, n)) && I.is_squarefree(), "diagonal initial ideal" + tag);
    o.require(codim(I) == 2 * (n - 1), "codim via minimal primes" + tag);
    o.require(3 * n - hilbert_series(I).dim == 2 * (n - 1), "codim via Hilbert dimension" + tag);
  }
  auto rep = predict_codim(snaps, TermOrder{OrderKind::lex});
  o.require(rep.predicted_slope == 2 && rep.verdict == Verdict::match, "codim slope " + to_string(rep.verdict));
  return o;
}

Monomial random_monomial(std::mt19937_64& rng, std::uint32_t rows, std::uint32_t width, std::uint32_t max_exp) {
  std::uniform_int_distribution<std::uint32_t> e(0, max_exp);
  std::vector<Factor> fs;
  for (std::uint32_t k = 1; k <= rows; ++k)
    for (std::uint32_t j = 1; j <= width; ++j)
      if (auto a = e(rng)) fs.push_back({{k, j}, a});
  return Monomial::from_factors(std::move(fs));
}

std::vector<long> brute_counts(const MonomialIdeal& I, std::uint32_t max_degree) {
  const auto& ctx = I.ambient();
  const std::uint32_t N = ctx.num_vars();
  std::vector<long> counts(max_degree + 1, 0);
  std::vector<std::uint32_t> e(N, 0);
  std::function<void(std::uint32_t, std::uint32_t, std::uint32_t)> rec = [&](std::uint32_t i, std::uint32_t left,
                                                                            std::uint32_t deg) {
    if (i == N) {
      std::vector<Factor> fs;
      for (std::uint32_t k = 0; k < N; ++k)
        if (e[k]) fs.push_back({ctx.var_at(k), e[k]});
      if (!I.contains(Monomial::from_factors(fs))) ++counts[deg];
      return;
    }
    for (std::uint32_t a = 0; a <= left; ++a) {
      e[i] = a;
      rec(i + 1, left - a, deg + a);
    }
    e[i] = 0;
  };
  rec(0, max_degree, 0);
  return counts;
}

Outcome oracle_suite() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::size_t tested = 0;
  while (tested < 40) {
    std::uint32_t rows = 1 + rng() % 2;
    std::uint32_t width = 1 + rng() % 4;
    std::size_t count = 1 + rng() % 5;
    std::vector<Monomial> g;
    while (g.size() < count) {
      auto u = random_monomial(rng, rows, width, 4);
      if (!u.is_one()) g.push_back(u);
    }
    RingContext R(rows, width);
    auto I = ideal(g, R);
    ++tested;
    auto tag = " for " + render(I);
    auto t = betti_table(I);
    o.require(t == taylor_betti(I), "Taylor" + tag);
    auto h = hilbert_series(I);
    auto counts = brute_counts(I, 8);
    for (std::uint32_t u = 0; u <= 8; ++u) o.require(h.coefficient(u) == counts[u], "Hilbert function" + tag);
    o.require(codim(I) == rows * width - h.dim, "codim" + tag);
    o.require(k_polynomial(t) == h.raw, "K-polynomial" + tag);
  }
  o.info(std::to_string(tested) + " ideals");
  return o;
}

Outcome property_suite() {
  Outcome o;
  for (auto kind : {OrderKind::lex, OrderKind::glex, OrderKind::grevlex})
    o.require(!check_order_respects_inc(TermOrder{kind}, 10000, 2024).has_value(), "order " + to_string(kind) + " respects Inc");
  std::mt19937_64 rng(23);
  for (int it = 0; it < 1000; ++it) {
    std::uniform_int_distribution<std::uint32_t> wm(1, 4);
    std::uint32_t m = wm(rng);
    std::uint32_t n = m + wm(rng) - 1;
    auto u = random_monomial(rng, 2, m, 2);
    std::vector<std::uint32_t> cols(n);
    for (std::uint32_t i = 0; i < n; ++i) cols[i] = i + 1;
    std::shuffle(cols.begin(), cols.end(), rng);
    cols.resize(m);
    std::sort(cols.begin(), cols.end());
    IncMap pi(cols);
    if (apply_perm(extend_to_permutation(pi, u, n), u) != apply_inc(pi, u)) {
      o.require(false, "sigma construction");
      break;
    }
  }
  std::mt19937_64 rng2(31);
  for (int it = 0; it < 1000; ++it) {
    std::vector<Monomial> g;
    std::size_t count = 1 + rng2() % 4;
    while (g.size() < count) {
      auto u = random_monomial(rng2, 2, 3, 3);
      if (!u.is_one()) g.push_back(u);
    }
    auto I = ideal(g, RingContext(2, 3));
    auto alpha = random_monomial(rng2, 2, 3, 2);
    auto u = random_monomial(rng2, 2, 3, 3);
    if (colon(I, alpha).contains(u) != I.contains(u * alpha)) {
      o.require(false, "colon adjunction for " + render(I));
      break;
    }
  }
  for (const auto& name : {"quad_sym", "minors"}) {
    auto spec = chain(name);
    auto snaps = materialize(spec, spec.horizon);
    auto g_lex = chain_invariants(initial_chain(snaps, TermOrder{OrderKind::lex}).snapshots).gamma;
    auto g_grevlex = chain_invariants(initial_chain(snaps, TermOrder{OrderKind::grevlex}).snapshots).gamma;
    o.require(g_lex == g_grevlex, std::string("gamma order independence on ") + name);
  }
  for (const auto& name : {"square22", "linear", "p41_33"}) {
    auto spec = chain(name);
    auto snaps = materialize(spec, 6);
    auto rep = cm_criterion(spec, snaps, chain_betti_tables(snaps));
    o.require(rep.all_agree() && !rep.widths.empty(), std::string("Cohen-Macaulay criterion on ") + name);
  }
  return o;
}

Outcome power_sums() {
  Outcome o;
  auto snap = materialize_width(chain("powersums"), 5);
  auto G = buchberger(snap.polynomials(), TermOrder{OrderKind::grevlex}, snap.ambient);
  auto r = normal_form(Polynomial::from_monomial(x(1, 2)), G.elements, TermOrder{OrderKind::grevlex});
  o.require(r.is_zero(), "normal form of x1^2 is " + render(r, 1, TermOrder{OrderKind::grevlex}));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  Outcome (*run)();
};

}  // namespace


int main() {
  const std::vector<Criterion> criteria = {
      {1, "Betti tables of the (4,1),(3,3) chain for n=2..6", 60, partition_betti},
      {2, "grevlex initial ideals of the x1^2+x2x3 chain", 5, quadratic_initial_ideals},
      {3, "K_{n,n} Hilbert data and bivariate series", 10, knn_series},
      {4, "minimal primes, covers and gamma", 0, covers_gamma},
      {5, "weights and stability index", 0, weights_stability},
      {6, "regularity line 2n+2", 0, regularity},
      {7, "projective dimension and bounds", 0, projective_dimension},
      {8, "Betti support line segments", 0, segments},
      {9, "2-minors of a 3 x n matrix", 0, minors},
      {10, "oracle equivalence suite", 120, oracle_suite},
      {11, "property suite", 0, property_suite},
      {12, "power sum membership", 30, power_sums},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0) o.require(secs < c.limit_s, "time limit " + std::to_string(static_cast<int>(c.limit_s)) + " s exceeded");
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << timing << ")";
    if (!o.detail.empty()) std::cout << " [" << o.detail << "]";
    std::cout << std::endl;
    if (!o.pass) ++failed;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
