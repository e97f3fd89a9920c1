#pragma once

// Buchberger's algorithm over exact coefficients, normal forms, initial ideals
// and initial chains.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "equichain/equivariance.hpp"
#include "equichain/errors.hpp"
#include "equichain/monomial_ideal.hpp"
#include "equichain/parallel.hpp"
#include "equichain/polynomial.hpp"

namespace equichain {

struct GroebnerStats {
  std::size_t pairs_total = 0;
  std::size_t pairs_coprime = 0;
  std::size_t pairs_chain = 0;
  std::size_t reductions = 0;
  std::size_t zero_reductions = 0;
  std::vector<std::string> log;  // filled when verbose
};

struct GroebnerBasis {
  std::vector<Polynomial> elements;  // reduced, monic, ascending by leading monomial
  TermOrder order;
  RingContext ambient;
  GroebnerStats stats;
};

namespace detail {

struct Descending {
  TermOrder ord;
  bool operator()(const Monomial& a, const Monomial& b) const { return cmp(a, b, ord) > 0; }
};

using OrderedPoly = std::map<Monomial, Coefficient, Descending>;

inline OrderedPoly ordered(const Polynomial& f, TermOrder ord) {
  OrderedPoly p(Descending{ord});
  for (const auto& [u, c] : f.terms()) p.emplace(u, c);
  return p;
}

inline Polynomial unordered(const OrderedPoly& p, std::uint32_t ch) {
  Polynomial f(ch);
  for (const auto& [u, c] : p) f.add_term(u, c);
  return f;
}

inline void make_monic(OrderedPoly& p) {
  if (p.empty()) return;
  Coefficient inv = p.begin()->second.inverse();
  for (auto& [_, c] : p) c *= inv;
}

// p -= c * u * g
inline void subtract_multiple(OrderedPoly& p, const Coefficient& c, const Monomial& u, const OrderedPoly& g) {
  for (const auto& [v, d] : g) {
    Monomial w = u * v;
    Coefficient delta = c * d;
    auto it = p.find(w);
    if (it == p.end()) {
      p.emplace(std::move(w), -delta);
    } else {
      it->second -= delta;
      if (it->second.is_zero()) p.erase(it);
    }
  }
}

// Full division remainder; divisors tried in list order.
inline OrderedPoly reduce(OrderedPoly p, const std::vector<const OrderedPoly*>& G) {
  OrderedPoly rem(p.key_comp());
  while (!p.empty()) {
    auto lt = p.begin();
    const OrderedPoly* div = nullptr;
    for (const auto* g : G) {
      if (!g->empty() && g->begin()->first.divides(lt->first)) {
        div = g;
        break;
      }
    }
    if (!div) {
      rem.insert(rem.end(), *lt);
      p.erase(lt);
      continue;
    }
    Coefficient c = lt->second / div->begin()->second;
    Monomial u = quotient(lt->first, div->begin()->first);
    subtract_multiple(p, c, u, *div);
  }
  return rem;
}

}  // namespace detail

/// Remainder of f on division by G: no term is divisible by a leading monomial of G.
inline Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G, TermOrder ord) {
  std::vector<detail::OrderedPoly> gs;
  gs.reserve(G.size());
  for (const auto& g : G) gs.push_back(detail::ordered(g, ord));
  std::vector<const detail::OrderedPoly*> ptrs;
  for (const auto& g : gs) ptrs.push_back(&g);
  return detail::unordered(detail::reduce(detail::ordered(f, ord), ptrs), f.characteristic());
}

/// Reduced monic Groebner basis. Pairs are processed by ascending degree of the
/// lcm of leading monomials; pairs with coprime leading monomials and pairs
/// covered by the chain criterion are skipped.
inline GroebnerBasis buchberger(const std::vector<Polynomial>& gens, TermOrder ord, RingContext ambient,
                                bool verbose = false) {
  GroebnerBasis out{{}, ord, std::move(ambient), {}};
  const std::uint32_t ch = out.ambient.characteristic;
  std::vector<detail::OrderedPoly> G;
  for (const auto& f : gens) {
    if (f.characteristic() != ch) throw DomainError("buchberger: generator field differs from the ring");
    if (f.is_zero()) continue;
    auto p = detail::ordered(f, ord);
    detail::make_monic(p);
    G.push_back(std::move(p));
  }
  if (G.empty()) return out;

  auto lm = [&](std::size_t i) -> const Monomial& { return G[i].begin()->first; };
  struct Pair {
    std::uint32_t degree;
    std::size_t i, j;
    bool operator<(const Pair& o) const { return std::tie(degree, j, i) < std::tie(o.degree, o.j, o.i); }
  };
  std::set<Pair> queue;
  std::set<std::pair<std::size_t, std::size_t>> pending;
  auto add_pairs = [&](std::size_t j) {
    for (std::size_t i = 0; i < j; ++i) {
      queue.insert({lcm(lm(i), lm(j)).degree(), i, j});
      pending.emplace(i, j);
    }
  };
  for (std::size_t j = 0; j < G.size(); ++j) add_pairs(j);

  auto is_pending = [&](std::size_t a, std::size_t b) { return pending.count({std::min(a, b), std::max(a, b)}) > 0; };
  while (!queue.empty()) {
    Pair pr = *queue.begin();
    queue.erase(queue.begin());
    pending.erase({pr.i, pr.j});
    ++out.stats.pairs_total;
    const Monomial L = lcm(lm(pr.i), lm(pr.j));
    if (gcd(lm(pr.i), lm(pr.j)).is_one()) {
      ++out.stats.pairs_coprime;
      continue;
    }
    bool chain = false;
    for (std::size_t k = 0; k < G.size() && !chain; ++k) {
      if (k == pr.i || k == pr.j) continue;
      chain = lm(k).divides(L) && !is_pending(pr.i, k) && !is_pending(pr.j, k);
    }
    if (chain) {
      ++out.stats.pairs_chain;
      continue;
    }
    detail::OrderedPoly s(detail::Descending{ord});
    detail::subtract_multiple(s, Coefficient(-1, ch), quotient(L, lm(pr.i)), G[pr.i]);
    detail::subtract_multiple(s, Coefficient(1, ch), quotient(L, lm(pr.j)), G[pr.j]);
    std::vector<const detail::OrderedPoly*> ptrs;
    for (const auto& g : G) ptrs.push_back(&g);
    auto r = detail::reduce(std::move(s), ptrs);
    ++out.stats.reductions;
    if (r.empty()) {
      ++out.stats.zero_reductions;
      continue;
    }
    detail::make_monic(r);
    if (verbose) {
      out.stats.log.push_back("pair (" + std::to_string(pr.i) + "," + std::to_string(pr.j) + ") -> new element " +
                              std::to_string(G.size()) + " with leading monomial " +
                              render(r.begin()->first, out.ambient.rows));
    }
    G.push_back(std::move(r));
    add_pairs(G.size() - 1);
  }

  // minimal basis: drop elements whose leading monomial is divisible by another's
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < G.size(); ++i) {
    bool redundant = false;
    for (std::size_t k = 0; k < G.size() && !redundant; ++k) {
      if (k == i) continue;
      if (lm(k).divides(lm(i)) && (lm(k) != lm(i) || k < i)) redundant = true;
    }
    if (!redundant) keep.push_back(i);
  }
  // interreduce
  std::vector<detail::OrderedPoly> reduced;
  for (std::size_t a = 0; a < keep.size(); ++a) {
    std::vector<const detail::OrderedPoly*> others;
    for (std::size_t b = 0; b < keep.size(); ++b)
      if (b != a) others.push_back(&G[keep[b]]);
    auto head = *G[keep[a]].begin();
    detail::OrderedPoly tail = G[keep[a]];
    tail.erase(tail.begin());
    auto r = detail::reduce(std::move(tail), others);
    r.emplace(head.first, head.second);
    reduced.push_back(std::move(r));
  }
  std::sort(reduced.begin(), reduced.end(),
            [&](const auto& x, const auto& y) { return cmp(x.begin()->first, y.begin()->first, ord) < 0; });
  for (const auto& r : reduced) out.elements.push_back(detail::unordered(r, ch));
  if (verbose) {
    out.stats.log.push_back("pairs " + std::to_string(out.stats.pairs_total) + ", coprime " +
                            std::to_string(out.stats.pairs_coprime) + ", chain " + std::to_string(out.stats.pairs_chain) +
                            ", reductions " + std::to_string(out.stats.reductions) + ", to zero " +
                            std::to_string(out.stats.zero_reductions));
  }
  return out;
}

inline MonomialIdeal initial_ideal(const GroebnerBasis& G) {
  std::vector<Monomial> lms;
  for (const auto& f : G.elements) lms.push_back(f.leading_term(G.order).monomial);
  return MonomialIdeal::minimalize(std::move(lms), G.ambient);
}

struct InitialChain {
  std::vector<ChainSnapshot> snapshots;  // monomial
  std::vector<std::optional<GroebnerBasis>> bases;  // empty for monomial input widths
};

/// Initial ideals of every width. Throws AssertionFailure if some
/// Inc_{n,n+1}-image of ini(I_n) is missing from ini(I_{n+1}).
inline InitialChain initial_chain(const std::vector<ChainSnapshot>& snaps, TermOrder ord, std::size_t jobs = 1,
                                  bool verbose = false) {
  detail::require_contiguous(snaps);
  InitialChain out;
  auto results = parallel_map(snaps.size(), jobs, [&](std::size_t i) {
    const auto& s = snaps[i];
    std::pair<ChainSnapshot, std::optional<GroebnerBasis>> r{s, std::nullopt};
    if (!s.is_monomial()) {
      auto G = buchberger(s.polynomials(), ord, s.ambient, verbose);
      r.first.ideal = initial_ideal(G);
      r.second = std::move(G);
    }
    return r;
  });
  for (auto& [snap, basis] : results) {
    out.snapshots.push_back(std::move(snap));
    out.bases.push_back(std::move(basis));
  }
  for (std::size_t i = 0; i + 1 < out.snapshots.size(); ++i) {
    const auto& a = out.snapshots[i];
    const auto& b = out.snapshots[i + 1];
    if (!b.monomial().contains(inc_closure(a.monomial(), a.width, b.width))) {
      throw AssertionFailure("initial chain is not Inc-invariant between widths " + std::to_string(a.width) + " and " +
                             std::to_string(b.width));
    }
  }
  return out;
}

}  // namespace equichain
