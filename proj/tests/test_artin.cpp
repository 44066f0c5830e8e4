// Tests for transfer homomorphisms, transfer kernels, layered patterns, and
// second-order abelianization data.
//
// Oracles used here:
//  * for an abelian group the transfer to an index-m subgroup is the m-th
//    power map, literally at element level (the derived subgroups are
//    trivial), which pins every map and kernel on the C9 x C9 root;
//  * for a maximal (index-p) subgroup S of any p-group the classical
//    evaluation is frozen: T(x) = x^p mod S' when x lies outside S, and
//    T(x) = x * x^h * x^{h^2} mod S' with any h outside S when x lies in S;
//  * on the nonabelian group R of order 243 (relation [b,a] = c central of
//    order 3) the layer shapes are derived by hand: every H_i is abelian of
//    type C9 x C3 x C3, every J_ik is C9 x C3, J0 is elementary of rank 3,
//    and the kernel chain collapses to kappa_1 = (J0^4) with everything
//    deeper capitulating completely;
//  * transversal independence, the compositum law, and the kernel inclusion
//    laws are checked as universal properties.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pgsieve/artin.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <vector>

using namespace pgsieve;

namespace {

PcPresentation heisenberg() {
  PcPresentation g;
  g.p = 3;
  g.n = 3;
  g.power_words.assign(3, {});
  g.comm_words.assign(3, {});
  g.comm_words[PcPresentation::comm_index(1, 0)] = {0, 0, 1};
  g.finalize();
  g.weights = {1, 1, 2};
  scan_definitions(g);
  return g;
}

// The nonabelian group of order 243 with presentation
// < a, b | a^9 = b^9 = 1, [b, a] central of order 3 >.
PcPresentation nonabelian243() {
  return read_presentation(
      "p 3\n"
      "ngens 5\n"
      "pow 1 = 3^1\n"
      "pow 2 = 4^1\n"
      "comm 2 1 = 5^1\n");
}

std::vector<Element> all_elements(const PcPresentation& g) {
  std::vector<Element> out;
  Element e = g.identity();
  for (;;) {
    out.push_back(e);
    int k = 0;
    while (k < g.n && ++e.exponents[k] == g.p) e.exponents[k++] = 0;
    if (k == g.n) break;
  }
  return out;
}

std::vector<Element> subgroup_elements(const Subgroup& s) {
  const PcPresentation& g = *s.parent;
  std::vector<Element> out;
  std::vector<uint8_t> exps(s.igs.size(), 0);
  for (;;) {
    Element e = g.identity();
    for (size_t k = 0; k < s.igs.size(); ++k)
      if (exps[k]) e = g.multiply(e, g.power(s.igs[k], exps[k]));
    out.push_back(e);
    size_t k = 0;
    while (k < exps.size() && ++exps[k] == g.p) exps[k++] = 0;
    if (k == exps.size()) break;
  }
  return out;
}

// Classical evaluation of the transfer to a maximal subgroup.
Element maximal_transfer_oracle(const PcPresentation& g, const Subgroup& s,
                                const Element& h, const Element& x) {
  if (!s.contains(x)) return g.power(x, g.p);
  Element out = g.identity();
  for (int i = 0; i < g.p; ++i)
    out = g.multiply(out, g.conjugate(x, g.power(h, i)));
  return out;
}

bool leq(const Subgroup& a, const Subgroup& b) {
  return std::all_of(a.igs.begin(), a.igs.end(),
                     [&](const Element& e) { return b.contains(e); });
}

AbelianTypeInvariants ati(std::vector<int> logs) {
  return AbelianTypeInvariants{std::move(logs)};
}

}  // namespace

TEST_CASE("abelianization coordinates invert and respect orders") {
  PcPresentation r = nonabelian243();
  NormalLattice lat = build_lattice(r);

  AbelianQuotient full(full_subgroup(r));
  CHECK(full.type() == ati({2, 2}));
  AbelianQuotient h1(lat.member({LatticeLabel::H, 1, 0}));
  CHECK(h1.type() == ati({2, 1, 1}));  // H1 = <a, b^3, c> is abelian

  // representative / coordinates are mutually inverse over every class.
  std::vector<int> c(2, 0);
  for (c[0] = 0; c[0] < 9; ++c[0])
    for (c[1] = 0; c[1] < 9; ++c[1]) {
      Element e = full.representative(c);
      CHECK(full.coordinates(e) == c);
    }

  // Coordinates are constant on classes modulo the derived subgroup.
  Subgroup rprime = derived_subgroup(r);
  Element a = r.generator(0);
  for (const Element& d : subgroup_elements(rprime))
    CHECK(full.coordinates(r.multiply(a, d)) == full.coordinates(a));
}

TEST_CASE("coset representatives are canonical") {
  PcPresentation r = nonabelian243();
  NormalLattice lat = build_lattice(r);
  for (const auto& [label, s] : lat.members) {
    std::vector<Element> reps = left_coset_reps(full_subgroup(r), s);
    CHECK(reps.size() == (full_subgroup(r).size() / s.size()));
    std::set<Element> seen(reps.begin(), reps.end());
    CHECK(seen.size() == reps.size());
    for (const Element& rep : reps) CHECK(sift(s, rep) == rep);
  }
  // Proper ambient subgroup: cosets of K1 inside H1.
  const Subgroup& h1 = lat.member({LatticeLabel::H, 1, 0});
  const Subgroup& k1 = lat.member({LatticeLabel::K, 1, 0});
  std::vector<Element> reps = left_coset_reps(h1, k1);
  CHECK(reps.size() == 9);
  for (const Element& rep : reps) CHECK(h1.contains(rep));
  CHECK_THROWS_AS((void)left_coset_reps(k1, h1), std::invalid_argument);
}

TEST_CASE("transfer on the abelian root is the index-power map") {
  PcPresentation a = presentation_c9c9();
  NormalLattice lat = build_lattice(a);
  for (const auto& [label, s] : lat.members) {
    long long index = full_subgroup(a).size() / s.size();
    for (const Element& x : all_elements(a))
      CHECK(transfer_element(a, s, x) == a.power(x, index));
  }

  // Kernels: maximal subgroups pull back to the 3-torsion (= Frattini)
  // subgroup; from index 9 on the ninth-power map kills everything.
  Subgroup phi = frattini_subgroup(a);
  for (int i = 1; i <= 4; ++i) {
    CHECK(transfer_kernel(a, lat.member({LatticeLabel::H, i, 0})) == phi);
    CHECK(transfer_kernel(a, lat.member({LatticeLabel::K, i, 0})) ==
          full_subgroup(a));
    for (int k = 1; k <= 3; ++k)
      CHECK(transfer_kernel(a, lat.member({LatticeLabel::J, i, k})) ==
            full_subgroup(a));
  }
  CHECK(transfer_kernel(a, full_subgroup(a)) == trivial_subgroup(a));
  CHECK(transfer_kernel(a, trivial_subgroup(a)) == full_subgroup(a));
}

TEST_CASE("transfer to maximal subgroups matches the classical evaluation") {
  for (const PcPresentation& g : {nonabelian243(), heisenberg()}) {
    Subgroup phi = frattini_subgroup(g);
    std::vector<Element> elems = all_elements(g);
    // Enumerate the maximal subgroups as Frattini preimages of the lines
    // outside each candidate... simpler: closures <e, phi> over e outside.
    std::set<std::vector<Element>> seen;
    for (const Element& e : elems) {
      if (phi.contains(e)) continue;
      std::vector<Element> gens = phi.igs;
      gens.push_back(e);
      Subgroup m = subgroup_closure(g, gens);
      if (!seen.insert(m.igs).second) continue;
      Subgroup mprime = derived_of(m);
      Element h = g.identity();
      for (const Element& cand : elems)
        if (!m.contains(cand)) {
          h = cand;
          break;
        }
      for (const Element& x : elems) {
        Element got = transfer_element(g, m, x);
        Element want = maximal_transfer_oracle(g, m, h, x);
        CHECK(mprime.contains(g.multiply(got, g.inverse(want))));
      }
    }
    CHECK(seen.size() == 4);  // both test groups have rank 2
  }
}

TEST_CASE("transfer is independent of the transversal") {
  PcPresentation r = nonabelian243();
  NormalLattice lat = build_lattice(r);
  Subgroup full = full_subgroup(r);
  std::vector<LatticeLabel> picks = {{LatticeLabel::H, 2, 0},
                                     {LatticeLabel::J, 2, 2},
                                     {LatticeLabel::J0, 0, 0},
                                     {LatticeLabel::K, 3, 0},
                                     {LatticeLabel::Gprime, 0, 0}};
  for (const LatticeLabel& label : picks) {
    const Subgroup& s = lat.member(label);
    Subgroup sprime = derived_of(s);
    // Skew every canonical representative by a different member of s and
    // shuffle the order deterministically.
    std::vector<Element> members = subgroup_elements(s);
    std::vector<Element> skewed = left_coset_reps(full, s);
    for (size_t i = 0; i < skewed.size(); ++i)
      skewed[i] = r.multiply(skewed[i], members[(7 * i + 3) % members.size()]);
    std::rotate(skewed.begin(), skewed.begin() + skewed.size() / 3,
                skewed.end());

    for (const Element& x : left_coset_reps(full, derived_subgroup(r))) {
      Element canonical = transfer_element(r, s, x);
      Element redone = transfer_element_with(full, s, x, skewed);
      CHECK(sprime.contains(r.multiply(canonical, r.inverse(redone))));
    }
  }

  // A transversal that misses a coset is rejected.
  const Subgroup& j0 = lat.member({LatticeLabel::J0, 0, 0});
  std::vector<Element> bad = left_coset_reps(full, j0);
  bad[1] = bad[0];
  CHECK_THROWS_AS(
      (void)transfer_element_with(full, j0, r.generator(0), bad),
      std::invalid_argument);
}

TEST_CASE("compositum law for nested subgroups") {
  PcPresentation r = nonabelian243();
  NormalLattice lat = build_lattice(r);
  Subgroup full = full_subgroup(r);
  // T_{G,K} = T_{H,K} o T_{G,H} for K < H < G.
  std::vector<std::pair<LatticeLabel, LatticeLabel>> chains = {
      {{LatticeLabel::H, 1, 0}, {LatticeLabel::K, 1, 0}},
      {{LatticeLabel::H, 1, 0}, {LatticeLabel::J, 1, 1}},
      {{LatticeLabel::J, 1, 1}, {LatticeLabel::K, 1, 0}},
      {{LatticeLabel::H, 4, 0}, {LatticeLabel::J0, 0, 0}},
      {{LatticeLabel::J0, 0, 0}, {LatticeLabel::Gprime, 0, 0}},
  };
  for (const auto& [hl, kl] : chains) {
    const Subgroup& h = lat.member(hl);
    const Subgroup& k = lat.member(kl);
    REQUIRE(leq(k, h));
    Subgroup kprime = derived_of(k);
    for (const Element& x : left_coset_reps(full, derived_subgroup(r))) {
      Element direct = transfer_element(r, k, x);
      Element via = transfer_element_in(h, k, transfer_element(r, h, x));
      CHECK(kprime.contains(r.multiply(direct, r.inverse(via))));
    }
  }
}

TEST_CASE("artin pattern of the abelian root") {
  PcPresentation a = presentation_c9c9();
  ArtinPattern ap = artin_pattern(a);

  CHECK(ap.tau[0] == std::vector<AbelianTypeInvariants>{ati({2, 2})});
  CHECK(ap.tau[1] == std::vector<AbelianTypeInvariants>(4, ati({2, 1})));
  std::vector<AbelianTypeInvariants> tau2(12, ati({2}));
  tau2.push_back(ati({1, 1}));  // J0 comes last in pattern order
  CHECK(ap.tau[2] == tau2);
  CHECK(ap.tau[3] == std::vector<AbelianTypeInvariants>(4, ati({1})));
  CHECK(ap.tau[4] == std::vector<AbelianTypeInvariants>{ati({})});

  auto labels = [](const std::vector<KappaEntry>& v) {
    std::vector<std::string> out;
    for (const KappaEntry& e : v) {
      REQUIRE(e.label.has_value());
      out.push_back(e.descriptor);
    }
    return out;
  };
  CHECK(labels(ap.kappa[0]) == std::vector<std::string>{"G'"});
  CHECK(labels(ap.kappa[1]) ==
        std::vector<std::string>(4, "J0"));  // 3-torsion preimage
  CHECK(labels(ap.kappa[2]) == std::vector<std::string>(13, "G"));
  CHECK(labels(ap.kappa[3]) == std::vector<std::string>(4, "G"));
  CHECK(labels(ap.kappa[4]) == std::vector<std::string>{"G"});

  // Byte-stable serialization, frozen.
  std::string golden =
      "{\"tau\":[[\"22\"],[\"21\",\"21\",\"21\",\"21\"],"
      "[\"2\",\"2\",\"2\",\"2\",\"2\",\"2\",\"2\",\"2\",\"2\",\"2\",\"2\","
      "\"2\",\"11\"],[\"1\",\"1\",\"1\",\"1\"],[\"1\"]],"
      "\"kappa\":[[\"G'\"],[\"J0\",\"J0\",\"J0\",\"J0\"],"
      "[\"G\",\"G\",\"G\",\"G\",\"G\",\"G\",\"G\",\"G\",\"G\",\"G\",\"G\","
      "\"G\",\"G\"],[\"G\",\"G\",\"G\",\"G\"],[\"G\"]]}";
  CHECK(to_json(ap) == golden);
  CHECK(to_json(artin_pattern(a)) == golden);
}

TEST_CASE("artin pattern of the nonabelian group of order 243") {
  PcPresentation r = nonabelian243();
  NormalLattice lat = build_lattice(r);
  ArtinPattern ap = artin_pattern(lat);

  CHECK(ap.tau[0] == std::vector<AbelianTypeInvariants>{ati({2, 2})});
  CHECK(ap.tau[1] == std::vector<AbelianTypeInvariants>(4, ati({2, 1, 1})));
  std::vector<AbelianTypeInvariants> tau2(12, ati({2, 1}));
  tau2.push_back(ati({1, 1, 1}));
  CHECK(ap.tau[2] == tau2);
  CHECK(ap.tau[3] == std::vector<AbelianTypeInvariants>(4, ati({1, 1})));
  CHECK(ap.tau[4] == std::vector<AbelianTypeInvariants>{ati({1})});

  // Hand-derived kernels: the maximal subgroups pull back to J0 (for x in
  // H_i the product collapses to x^3 times a vanishing commutator power, so
  // the kernel is exactly the cube roots of the identity), and every deeper
  // transfer already kills the whole group by the compositum law.
  for (int l = 0; l <= 4; ++l) {
    REQUIRE(ap.kappa[l].size() == ap.tau[l].size());
    for (const KappaEntry& e : ap.kappa[l]) REQUIRE(e.label.has_value());
  }
  CHECK(ap.kappa[0][0].descriptor == "G'");
  for (const KappaEntry& e : ap.kappa[1]) CHECK(e.descriptor == "J0");
  for (const KappaEntry& e : ap.kappa[2]) CHECK(e.descriptor == "G");
  for (const KappaEntry& e : ap.kappa[3]) CHECK(e.descriptor == "G");
  CHECK(ap.kappa[4][0].descriptor == "G");

  // Each reported kernel matches an independent recomputation.
  std::vector<LatticeLabel> order2 = {
      {LatticeLabel::J, 1, 1}, {LatticeLabel::J, 1, 2}, {LatticeLabel::J, 1, 3},
      {LatticeLabel::J, 2, 1}, {LatticeLabel::J, 2, 2}, {LatticeLabel::J, 2, 3},
      {LatticeLabel::J, 3, 1}, {LatticeLabel::J, 3, 2}, {LatticeLabel::J, 3, 3},
      {LatticeLabel::J, 4, 1}, {LatticeLabel::J, 4, 2}, {LatticeLabel::J, 4, 3},
      {LatticeLabel::J0, 0, 0}};
  for (size_t idx = 0; idx < order2.size(); ++idx) {
    Subgroup recomputed = transfer_kernel(r, lat.member(order2[idx]));
    CHECK(lat.member(*ap.kappa[2][idx].label) == recomputed);
  }
}

TEST_CASE("kernel inclusion laws") {
  for (const PcPresentation& g :
       {presentation_c9c9(), nonabelian243()}) {
    NormalLattice lat = build_lattice(g);
    Subgroup gprime = derived_subgroup(g);
    std::array<Subgroup, 5> kh = {
        transfer_kernel(g, lat.member({LatticeLabel::H, 1, 0})),
        transfer_kernel(g, lat.member({LatticeLabel::H, 2, 0})),
        transfer_kernel(g, lat.member({LatticeLabel::H, 3, 0})),
        transfer_kernel(g, lat.member({LatticeLabel::H, 4, 0})),
        transfer_kernel(g, lat.member({LatticeLabel::J0, 0, 0}))};
    for (int i = 1; i <= 4; ++i) {
      const Subgroup& ker_h = kh[i - 1];
      CHECK(leq(gprime, ker_h));
      CHECK(ker_h.size_log() > gprime.size_log());  // strictly above G'
      Subgroup ker_k = transfer_kernel(g, lat.member({LatticeLabel::K, i, 0}));
      for (int k = 1; k <= 3; ++k) {
        Subgroup ker_j =
            transfer_kernel(g, lat.member({LatticeLabel::J, i, k}));
        CHECK(leq(ker_h, ker_j));
        CHECK(leq(ker_j, ker_k));
      }
      // The J0 chain: ker H_i <= ker J0 <= ker K_j for all i, j.
      CHECK(leq(ker_h, kh[4]));
      CHECK(leq(kh[4], ker_k));
    }
    CHECK(transfer_kernel(g, full_subgroup(g)) == gprime);
    CHECK(transfer_kernel(g, gprime) == full_subgroup(g));
  }
}

TEST_CASE("second-order abelianization data") {
  PcPresentation a = presentation_c9c9();
  SecondOrderTau ta = second_order_tau(a);
  REQUIRE(ta.entries.size() == 13);
  for (int i = 0; i < 12; ++i)  // J_ik is cyclic of order 9: one maximal
    CHECK(ta.entries[i] == std::vector<AbelianTypeInvariants>{ati({1})});
  CHECK(ta.entries[12] ==
        std::vector<AbelianTypeInvariants>(4, ati({1})));  // J0 = C3 x C3

  PcPresentation r = nonabelian243();
  SecondOrderTau tr = second_order_tau(r);
  REQUIRE(tr.entries.size() == 13);
  std::vector<AbelianTypeInvariants> jik = {ati({1, 1}), ati({2}), ati({2}),
                                            ati({2})};
  for (int i = 0; i < 12; ++i)  // J_ik = C9 x C3: <gen^3,c> once, <gen c^j> thrice
    CHECK(tr.entries[i] == jik);
  CHECK(tr.entries[12] ==
        std::vector<AbelianTypeInvariants>(13, ati({1, 1})));

  // Determinism.
  CHECK(second_order_tau(a) == ta);
  CHECK(second_order_tau(r) == tr);
}
