#pragma once

// Randomized and exhaustive checkers for the identities the library relies
// on. Each returns a LemmaResult with a trial count, a failure count and the
// first counterexample. Trials are driven by a seeded std::mt19937_64, so a
// (parameters, seed) pair always replays the same inputs.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "coindex/complex.hpp"
#include "coindex/homology.hpp"
#include "coindex/index.hpp"
#include "coindex/sequence_maps.hpp"
#include "coindex/subshift.hpp"
#include "coindex/zspace.hpp"

namespace coindex {

using Json = nlohmann::ordered_json;

struct LemmaResult {
  explicit LemmaResult(std::string id = {}) : lemma(std::move(id)) {}

  std::string lemma;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  std::optional<Json> first_counterexample;
  /// Extra facts established along the way (counts, Betti numbers, reports).
  Json details = Json::object();

  bool passed() const noexcept { return failures == 0; }

  void fail(Json counterexample) {
    ++failures;
    if (!first_counterexample) first_counterexample = std::move(counterexample);
  }
};

inline Json window_json(const Alphabet& a, const Window& w) {
  Json letters = Json::array();
  for (const auto& e : w.letters()) letters.push_back(a.format(e));
  return Json{{"offset", w.offset()}, {"letters", letters}};
}

inline Json range_json(const IndexRange& r) { return Json::array({r.lo, r.hi}); }

/// The default Sigma_m-style threshold for an alphabet.
inline Rational default_delta(const Alphabet&) { return Rational(1, 2); }

namespace detail {

/// One random input for the eta checks: the requested output range of y and
/// an x window wide enough for both eta on that range and, when `for_theta`,
/// theta back down to `out`.
struct EtaTrial {
  IndexRange out;        // where theta(eta(x)) is compared with x
  IndexRange y_range;    // where eta is evaluated
  std::uint64_t anchor_seed = 0;
  bool zero_anchor = false;
};

template <class Rng>
EtaTrial draw_eta_trial(int m, Rng& rng, bool for_theta) {
  const auto block = static_cast<std::int64_t>(factorial(m));
  std::uniform_int_distribution<std::int64_t> lo_dist(-3 * block, 3 * block);
  std::uniform_int_distribution<std::int64_t> len_dist(1, 2 * block + 2);
  EtaTrial t;
  t.out.lo = lo_dist(rng);
  t.out.hi = t.out.lo + len_dist(rng) - 1;
  t.y_range = for_theta ? IndexRange{t.out.lo, t.out.hi + theta_reach(m)}
                        : IndexRange{t.out.lo, t.out.hi + block};
  t.anchor_seed = rng();
  t.zero_anchor = (t.anchor_seed % 4) == 0;
  return t;
}

}  // namespace detail

/// theta_{m,m-1}(eta_{m-1,m}(x)) = x on random windows of X_{m-1} and random anchors.
inline LemmaResult verify_theta_eta_identity(const Alphabet& a, int m, std::uint64_t trials, std::uint64_t seed,
                                             Rational delta) {
  LemmaResult res("3.2");
  std::mt19937_64 rng(seed);
  const auto step = static_cast<std::int64_t>(factorial(m - 1));
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto trial = detail::draw_eta_trial(m, rng, true);
    const auto anchor = trial.zero_anchor ? AnchorSeq::identity(a) : AnchorSeq::seeded(a, trial.anchor_seed);
    const auto x_range = hull(eta_input_window(m, trial.y_range), trial.out);
    const auto x = random_constrained_window(a, step, delta, x_range, rng);
    const auto y = eta_apply(a, m, anchor, x, trial.y_range);
    const auto back = theta_apply(a, m, y);
    ++res.trials;
    if (back != x.restrict(trial.out))
      res.fail(Json{{"trial", t},
                    {"x", window_json(a, x)},
                    {"anchor", trial.zero_anchor ? "identity" : "seeded:" + std::to_string(trial.anchor_seed)},
                    {"compared_range", range_json(trial.out)},
                    {"theta_eta_x", window_json(a, back)}});
  }
  res.details = Json{{"alphabet", a.to_string()}, {"m", m}, {"delta", to_string(delta)}};
  return res;
}

/// eta_{m-1,m} maps X_{m-1} into X_m: letters m! apart in eta's output are >= delta apart.
inline LemmaResult verify_eta_containment(const Alphabet& a, int m, std::uint64_t trials, std::uint64_t seed,
                                          Rational delta) {
  LemmaResult res("3.1");
  std::mt19937_64 rng(seed);
  const auto step = static_cast<std::int64_t>(factorial(m - 1));
  const auto block = static_cast<std::int64_t>(factorial(m));
  std::uint64_t pairs = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const auto trial = detail::draw_eta_trial(m, rng, false);
    const auto anchor = trial.zero_anchor ? AnchorSeq::identity(a) : AnchorSeq::seeded(a, trial.anchor_seed);
    auto x_range = eta_input_window(m, trial.y_range);
    if (x_range.empty()) x_range = {0, 0};
    const auto x = random_constrained_window(a, step, delta, x_range, rng);
    const auto y = eta_apply(a, m, anchor, x, trial.y_range);
    ++res.trials;
    pairs += static_cast<std::uint64_t>(std::max<std::int64_t>(0, trial.y_range.size() - block));
    if (const auto bad = window_violation(a, block, delta, y))
      res.fail(Json{{"trial", t},
                    {"x", window_json(a, x)},
                    {"anchor", trial.zero_anchor ? "identity" : "seeded:" + std::to_string(trial.anchor_seed)},
                    {"y", window_json(a, y)},
                    {"violating_index", *bad}});
  }
  res.details = Json{{"alphabet", a.to_string()}, {"m", m}, {"delta", to_string(delta)}, {"pairs_checked", pairs}};
  return res;
}

/// Searches for (x, k) with eta(shift x) != shift(eta x) on a common range.
inline std::optional<Json> find_eta_nonequivariance(const Alphabet& a, int m, std::uint64_t seed,
                                                    std::uint64_t max_trials = 1000) {
  std::mt19937_64 rng(seed);
  const auto step = static_cast<std::int64_t>(factorial(m - 1));
  const auto delta = default_delta(a);
  const auto anchor = AnchorSeq::identity(a);
  for (std::uint64_t t = 0; t < max_trials; ++t) {
    const auto block = static_cast<std::int64_t>(factorial(m));
    const IndexRange req{-block, 2 * block};
    // eta(shift x) on req reads x on (eta window of req) + 1; eta(x) on req+1 reads the window of req+1.
    const auto need = hull(eta_input_window(m, req), eta_input_window(m, {req.lo + 1, req.hi + 1}));
    const auto x = random_constrained_window(a, step, delta, {need.lo, need.hi + 1}, rng);
    const auto lhs = eta_apply(a, m, anchor, x.shifted(1), req);
    const auto rhs = eta_apply(a, m, anchor, x, {req.lo + 1, req.hi + 1}).shifted(1);
    if (lhs != rhs) {
      for (std::int64_t k = req.lo; k <= req.hi; ++k)
        if (lhs.at(k) != rhs.at(k))
          return Json{{"m", m}, {"x", window_json(a, x)}, {"shift", 1}, {"index", k},
                      {"eta_of_shift", a.format(lhs.at(k))}, {"shift_of_eta", a.format(rhs.at(k))}};
    }
  }
  return std::nullopt;
}

/// The finite Z_p-set P_p(spec) as a discrete complex with the shift action.
inline SimplicialComplex periodic_point_set(const SubshiftSpec& spec, unsigned p, const EnumerateOptions& opts = {}) {
  require_prime(p);
  const auto words = enumerate_periodic(spec, p, opts);
  std::map<CyclicWord, std::uint32_t> index;
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < words.size(); ++i) {
    index.emplace(words[i], i);
    labels.push_back(format_word(spec.alphabet(), words[i]));
  }
  std::vector<std::uint32_t> gen;
  for (const auto& w : words) {
    const auto it = index.find(shift(w, 1));
    if (it == index.end()) throw ShapeError("periodic point set is not shift-closed");
    gen.push_back(it->second);
  }
  return SimplicialComplex::discrete(p, std::move(labels), std::move(gen));
}

/// P_1 is empty and, for primes p > m!, P_p(Sigma_m) is nonempty, finite and
/// free, and recodes bijectively onto P_p(Sigma_1).
inline LemmaResult verify_sigma_periodic(int m, unsigned p) {
  LemmaResult res("4.1");
  require_prime(p);
  if (p <= factorial(m))
    throw ShapeError("needs a prime p > m! = " + std::to_string(factorial(m)) + ", got " + std::to_string(p));
  const auto spec = SubshiftSpec::sigma(m);
  auto check = [&](bool ok, Json what) {
    ++res.trials;
    if (!ok) res.fail(std::move(what));
  };
  const auto fixed = enumerate_periodic(spec, 1);
  check(fixed.empty(), Json{{"check", "no fixed point"}, {"fixed_points", fixed.size()}});
  const auto words = enumerate_periodic(spec, p);
  check(!words.empty(), Json{{"check", "nonempty"}});
  const auto counted = count_periodic(spec, p);
  check(counted == words.size(), Json{{"check", "transfer count equals enumeration"},
                                      {"count", counted.str()}, {"enumerated", words.size()}});
  const auto orbits = orbit_decompose(words, p);
  check(orbits.free, Json{{"check", "free shift action"}});
  const auto base = enumerate_periodic(SubshiftSpec::sigma(1), p);
  check(base.size() == words.size(), Json{{"check", "recoding bijection onto Sigma_1"},
                                          {"sigma_m", words.size()}, {"sigma_1", base.size()}});
  res.details = Json{{"m", m}, {"p", p}, {"count", words.size()}, {"orbits", orbits.orbits.size()}, {"free", orbits.free}};
  return res;
}

/// P_p(Sigma_m)^{*(K+1)} is a free E_K Z_p-complex with b~_K = (N-1)^{K+1},
/// and its index and coindex both equal K.
inline LemmaResult verify_join_of_periodic(int m, unsigned p, int k, bool with_homology = true) {
  LemmaResult res("4.2");
  if (k < 0) throw ShapeError("K must be >= 0");
  const auto factor = periodic_point_set(SubshiftSpec::sigma(m), p);
  const auto n_points = factor.vertex_count();
  const std::vector<SimplicialComplex> factors(static_cast<std::size_t>(k + 1), factor);
  auto check = [&](bool ok, Json what) {
    ++res.trials;
    if (!ok) res.fail(std::move(what));
  };

  const auto report = index_of_join_of_finite(factors, "P_" + std::to_string(p) + "(Sigma_" + std::to_string(m) +
                                                           ")^{*" + std::to_string(k + 1) + "}");
  check(report.exact() && report.coind_lower() == k, Json{{"check", "exact index K"}, {"coind", report.coind_lower()}});

  // Iterate the join rule from the exact value 0 of one factor.
  auto acc = exact_index_finite_free(factor);
  const auto one = acc;
  for (int i = 0; i < k; ++i) acc = join_report(acc, one);
  check(acc.coind_lower() == k, Json{{"check", "iterated join rule"}, {"coind_lower", acc.coind_lower()}});

  res.details = Json{{"m", m}, {"p", p}, {"K", k}, {"N", n_points}, {"exact", report.exact()}, {"index", k}};
  if (with_homology) {
    const auto joined = join_complexes(factors);
    const auto en = is_EnZp(joined, k);
    BigInt expected = 1;
    for (int i = 0; i <= k; ++i) expected *= BigInt(n_points - 1);
    const bool low_vanish = en.homology_connectivity >= k - 1;
    check(en.free, Json{{"check", "free"}, {"witness", en.free_witness}});
    check(en.dimension == k, Json{{"check", "dimension"}, {"dimension", en.dimension}});
    check(low_vanish, Json{{"check", "reduced homology vanishes below K"}, {"connectivity", en.homology_connectivity}});
    check(en.dimension == k && BigInt(en.betti.reduced.back()) == expected,
          Json{{"check", "top Betti number (N-1)^{K+1}"}, {"expected", expected.str()},
               {"got", en.dimension >= 0 ? en.betti.reduced.back() : 0}});
    check(en.certified, Json{{"check", "E_K recognition certified"}, {"evidence", en.evidence}});
    res.details["reduced_betti"] = en.betti.reduced;
    res.details["cells_by_dim"] = en.betti.cells;
    res.details["certified"] = en.certified;
  }
  return res;
}

/// pair_embed sends every grid word of P_p(Zcal) into P_p(X(S^2, 1, 1/2)),
/// commutes with the shift and is undone by projecting to the first factor;
/// then the coindex bound of the grid words is carried along it.
inline LemmaResult verify_pair_embedding(unsigned p, std::int32_t q, const EnumerateOptions& opts = {}) {
  LemmaResult res("embed-1.5");
  require_prime(p);
  const auto z = SubshiftSpec::zcal(q);
  const auto target = SubshiftSpec::xgm(Alphabet::power(Alphabet::circle(q), 2), 1, Rational(1, 2));
  const auto words = enumerate_periodic(z, p, opts);
  for (const auto& w : words) {
    ++res.trials;
    const auto e = pair_embed(w);
    if (!satisfies(target, e) || pair_project(e, 1) != w || pair_embed(shift(w, 1)) != shift(e, 1))
      res.fail(Json{{"word", format_word(z.alphabet(), w)}, {"image", format_word(target.alphabet(), e)}});
  }

  const auto grid_words = periodic_point_set(z, p, opts);
  const auto subset = exact_index_finite_free(grid_words, "grid words of P_" + std::to_string(p) + "(Zcal) at q=" +
                                                              std::to_string(q));
  IndexReport zrep(p, "P_" + std::to_string(p) + "(Zcal)");
  coindex_transport(MapEvidence::structural(p, "inclusion of grid words"), subset, zrep);
  IndexReport xrep(p, "P_" + std::to_string(p) + "(X(S^2,1,1/2))");
  if (res.passed()) coindex_transport(MapEvidence::structural(p, "pair embedding x -> (x_k, x_{k+1})"), zrep, xrep);
  res.details = Json{{"p", p}, {"q", q}, {"words", words.size()}, {"orbits", words.size() / p},
                     {"target_coind_lower", xrep.coind_lower()}, {"provenance", xrep.provenance()}};
  return res;
}

}  // namespace coindex
