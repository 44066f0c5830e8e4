// Tests for the capitulation laws and scenario classification.
//
// Oracles used here:
//  * label_leq is checked against genuine subgroup containment over all
//    23 x 23 pairs of lattice members of the C9 x C9 root;
//  * the kernel maps predicted by hbc_of_permutation_data for the frozen
//    permutation tuples (identity; lambda=(1432) with rho=(1,(23),(12),1);
//    lambda=(14)(23) with rho=((23),1,(123),(13))) are written out by hand
//    and compared entry by entry;
//  * a constraint-respecting random sampler generates kernel maps obeying
//    the inclusion chains, which the checker must accept, while targeted
//    mutations (kernel G' at a maximal, swapped H/K kernels) must be
//    rejected;
//  * classify must round-trip hbc_of_permutation_data over random tuples,
//    and transform equivariantly under a genuine lattice relabeling
//    (generator exchange), with the cycle type of lambda invariant.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pgsieve/capitulation.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace pgsieve;

namespace {

PcPresentation nonabelian243() {
  return read_presentation(
      "p 3\n"
      "ngens 5\n"
      "pow 1 = 3^1\n"
      "pow 2 = 4^1\n"
      "comm 2 1 = 5^1\n");
}

KappaEntry make_entry(LatticeLabel label) {
  return KappaEntry{label, label.str()};
}

// All 23 labels in pattern order (layer 2 with J0 last).
std::vector<LatticeLabel> pattern_order_labels() {
  std::vector<LatticeLabel> out;
  out.push_back({LatticeLabel::G, 0, 0});
  for (int i = 1; i <= 4; ++i) out.push_back({LatticeLabel::H, i, 0});
  for (int i = 1; i <= 4; ++i)
    for (int k = 1; k <= 3; ++k) out.push_back({LatticeLabel::J, i, k});
  out.push_back({LatticeLabel::J0, 0, 0});
  for (int i = 1; i <= 4; ++i) out.push_back({LatticeLabel::K, i, 0});
  out.push_back({LatticeLabel::Gprime, 0, 0});
  return out;
}

// Builds a pattern from a full source-label -> kernel-label map.
ArtinPattern pattern_from_map(
    const std::map<LatticeLabel, LatticeLabel>& kernels) {
  ArtinPattern out;
  const int sizes[5] = {1, 4, 13, 4, 1};
  for (int l = 0; l <= 4; ++l)
    out.tau[l].assign(sizes[l], AbelianTypeInvariants{});
  std::vector<LatticeLabel> order = pattern_order_labels();
  size_t pos = 0;
  for (int l = 0; l <= 4; ++l)
    for (int idx = 0; idx < sizes[l]; ++idx)
      out.kappa[l].push_back(make_entry(kernels.at(order[pos++])));
  return out;
}

std::map<LatticeLabel, LatticeLabel> map_of_pattern(const ArtinPattern& p) {
  std::map<LatticeLabel, LatticeLabel> out;
  std::vector<LatticeLabel> order = pattern_order_labels();
  size_t pos = 0;
  for (int l = 0; l <= 4; ++l)
    for (const KappaEntry& e : p.kappa[l]) {
      REQUIRE(e.label.has_value());
      out[order[pos++]] = *e.label;
    }
  return out;
}

Perm random_perm(int n, std::mt19937& rng) {
  Perm out = perm_identity(n);
  std::shuffle(out.image.begin(), out.image.end(), rng);
  return out;
}

Perm perm_from_cycle_images(std::vector<int> image) {
  return Perm{std::move(image)};
}

}  // namespace

TEST_CASE("permutation utilities") {
  Perm id4 = perm_identity(4);
  CHECK(cycle_string(id4) == "1");
  CHECK(cycle_type(id4) == std::vector<int>{1, 1, 1, 1});

  Perm lam = perm_from_cycle_images({4, 1, 2, 3});  // (1432)
  CHECK(cycle_string(lam) == "(1432)");
  CHECK(cycle_type(lam) == std::vector<int>{4});

  Perm dbl = perm_from_cycle_images({4, 3, 2, 1});  // (14)(23)
  CHECK(cycle_string(dbl) == "(14)(23)");
  CHECK(cycle_type(dbl) == std::vector<int>{2, 2});

  Perm three = perm_from_cycle_images({2, 3, 1});  // (123)
  CHECK(cycle_string(three) == "(123)");
  CHECK(cycle_string(perm_from_cycle_images({3, 1, 2})) == "(132)");
  CHECK(cycle_type(perm_from_cycle_images({1, 3, 2})) ==
        std::vector<int>{2, 1});

  CHECK(is_permutation(lam, 4));
  CHECK_FALSE(is_permutation(lam, 3));
  CHECK_FALSE(is_permutation(perm_from_cycle_images({1, 1, 3, 4}), 4));

  std::mt19937 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    Perm a = random_perm(4, rng);
    Perm b = random_perm(4, rng);
    CHECK(perm_compose(a, perm_inverse(a)) == perm_identity(4));
    CHECK(perm_compose(perm_inverse(a), a) == perm_identity(4));
    // Composition convention: (a o b)(i) = a(b(i)).
    for (int i = 1; i <= 4; ++i)
      CHECK(perm_compose(a, b).image[i - 1] == a.image[b.image[i - 1] - 1]);
    CHECK(cycle_type(perm_compose(perm_compose(a, b), perm_inverse(a))) ==
          cycle_type(b));  // conjugation preserves cycle type
  }
}

TEST_CASE("abstract label containment matches genuine containment") {
  PcPresentation a = presentation_c9c9();
  NormalLattice lat = build_lattice(a);
  for (const auto& [la, sa] : lat.members)
    for (const auto& [lb, sb] : lat.members) {
      bool real = std::all_of(
          sa.igs.begin(), sa.igs.end(),
          [&](const Element& e) { return sb.contains(e); });
      CHECK(label_leq(la, lb) == real);
    }
}

TEST_CASE("arithmetical axioms") {
  // Real groups satisfy both axioms.
  CHECK(check_arithmetical(artin_pattern(presentation_c9c9())));
  CHECK(check_arithmetical(artin_pattern(nonabelian243())));

  // A kernel G' at a maximal subgroup violates the first axiom.
  ArtinPattern broken = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  CHECK(check_arithmetical(broken));
  broken.kappa[1][0] = make_entry({LatticeLabel::Gprime, 0, 0});
  CHECK_FALSE(check_arithmetical(broken));

  // A transfer to G' that does not kill everything violates the second.
  ArtinPattern bottom = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  bottom.kappa[4][0] = make_entry({LatticeLabel::H, 1, 0});
  CHECK_FALSE(check_arithmetical(bottom));

  // Unresolved kernels fail closed.
  ArtinPattern unresolved = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  unresolved.kappa[1][2] = KappaEntry{std::nullopt, "sub{100;010}"};
  CHECK_FALSE(check_arithmetical(unresolved));
}

TEST_CASE("inclusion laws hold for actual groups and consistent samples") {
  CHECK(check_inclusions(artin_pattern(presentation_c9c9())).empty());
  CHECK(check_inclusions(artin_pattern(nonabelian243())).empty());

  // Constraint-respecting sampler: kernels drawn to satisfy the chains.
  std::vector<LatticeLabel> all = pattern_order_labels();
  std::mt19937 rng(20260816);
  auto pick = [&](const std::vector<LatticeLabel>& pool) {
    REQUIRE(!pool.empty());
    return pool[std::uniform_int_distribution<size_t>(0, pool.size() - 1)(
        rng)];
  };
  for (int trial = 0; trial < 1000; ++trial) {
    std::map<LatticeLabel, LatticeLabel> kernels;
    kernels[{LatticeLabel::G, 0, 0}] = {LatticeLabel::Gprime, 0, 0};
    kernels[{LatticeLabel::Gprime, 0, 0}] = {LatticeLabel::G, 0, 0};
    // ker(J0) anywhere above G'.
    std::vector<LatticeLabel> pool;
    for (const LatticeLabel& l : all)
      if (l.kind != LatticeLabel::Gprime) pool.push_back(l);
    LatticeLabel kj0 = pick(pool);
    kernels[{LatticeLabel::J0, 0, 0}] = kj0;
    for (int i = 1; i <= 4; ++i) {
      pool.clear();
      for (const LatticeLabel& l : all)
        if (l.kind != LatticeLabel::Gprime && label_leq(l, kj0))
          pool.push_back(l);
      LatticeLabel kh = pick(pool);
      kernels[{LatticeLabel::H, i, 0}] = kh;
      pool.clear();
      for (const LatticeLabel& l : all)
        if (label_leq(kj0, l)) pool.push_back(l);
      LatticeLabel kk = pick(pool);
      kernels[{LatticeLabel::K, i, 0}] = kk;
      for (int k = 1; k <= 3; ++k) {
        pool.clear();
        for (const LatticeLabel& l : all)
          if (label_leq(kh, l) && label_leq(l, kk)) pool.push_back(l);
        kernels[{LatticeLabel::J, i, k}] = pick(pool);
      }
    }
    CHECK(check_inclusions(pattern_from_map(kernels)).empty());
  }

  // Swapping the kernels at H1 and K1 breaks the chain.
  ArtinPattern swapped = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  std::swap(swapped.kappa[1][0], swapped.kappa[3][0]);
  std::vector<std::string> violations = check_inclusions(swapped);
  CHECK(!violations.empty());
  // The H1 kernel (now H1 itself) no longer sits inside the J1k kernels.
  CHECK(std::any_of(violations.begin(), violations.end(),
                    [](const std::string& v) {
                      return v.find("H1") != std::string::npos;
                    }));
}

TEST_CASE("classification of actual groups") {
  // Both desk groups have kappa_1 = (J0^4) with ker(J0) = G: none of the
  // named shapes applies.
  for (const PcPresentation& g :
       {presentation_c9c9(), nonabelian243()}) {
    CapitulationReport rep = classify(artin_pattern(g));
    CHECK(rep.scenario == Scenario::Other);
    CHECK(rep.arithmetical);
    CHECK(rep.violations.empty());
    CHECK_FALSE(rep.lambda.has_value());
    CHECK_FALSE(rep.rho.has_value());
  }
}

TEST_CASE("predicted kernel maps for frozen permutation tuples") {
  // Identity tuple: every member capitulates in its mirror.
  ArtinPattern id_pattern = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  std::vector<std::string> kappa1, kappa2, kappa3;
  for (const KappaEntry& e : id_pattern.kappa[1]) kappa1.push_back(e.descriptor);
  for (const KappaEntry& e : id_pattern.kappa[2]) kappa2.push_back(e.descriptor);
  for (const KappaEntry& e : id_pattern.kappa[3]) kappa3.push_back(e.descriptor);
  CHECK(kappa1 == std::vector<std::string>{"K1", "K2", "K3", "K4"});
  CHECK(kappa2 == std::vector<std::string>{"J11", "J12", "J13", "J21", "J22",
                                           "J23", "J31", "J32", "J33", "J41",
                                           "J42", "J43", "J0"});
  CHECK(kappa3 == std::vector<std::string>{"H1", "H2", "H3", "H4"});

  // lambda = (1432), rho = (1, (23), (12), 1): the four-cycle tuple.
  ArtinPattern four = hbc_of_permutation_data(
      perm_from_cycle_images({4, 1, 2, 3}),
      {perm_identity(3), perm_from_cycle_images({1, 3, 2}),
       perm_from_cycle_images({2, 1, 3}), perm_identity(3)});
  kappa1.clear();
  kappa2.clear();
  kappa3.clear();
  for (const KappaEntry& e : four.kappa[1]) kappa1.push_back(e.descriptor);
  for (const KappaEntry& e : four.kappa[2]) kappa2.push_back(e.descriptor);
  for (const KappaEntry& e : four.kappa[3]) kappa3.push_back(e.descriptor);
  CHECK(kappa1 == std::vector<std::string>{"K4", "K1", "K2", "K3"});
  CHECK(kappa2 == std::vector<std::string>{"J41", "J42", "J43", "J11", "J13",
                                           "J12", "J22", "J21", "J23", "J31",
                                           "J32", "J33", "J0"});
  CHECK(kappa3 == std::vector<std::string>{"H4", "H1", "H2", "H3"});

  // lambda = (14)(23), rho = ((23), 1, (123), (13)): the double-transposition
  // tuple.
  ArtinPattern dbl = hbc_of_permutation_data(
      perm_from_cycle_images({4, 3, 2, 1}),
      {perm_from_cycle_images({1, 3, 2}), perm_identity(3),
       perm_from_cycle_images({2, 3, 1}), perm_from_cycle_images({3, 2, 1})});
  kappa1.clear();
  kappa2.clear();
  kappa3.clear();
  for (const KappaEntry& e : dbl.kappa[1]) kappa1.push_back(e.descriptor);
  for (const KappaEntry& e : dbl.kappa[2]) kappa2.push_back(e.descriptor);
  for (const KappaEntry& e : dbl.kappa[3]) kappa3.push_back(e.descriptor);
  CHECK(kappa1 == std::vector<std::string>{"K4", "K3", "K2", "K1"});
  CHECK(kappa2 == std::vector<std::string>{"J41", "J43", "J42", "J31", "J32",
                                           "J33", "J22", "J23", "J21", "J13",
                                           "J12", "J11", "J0"});
  CHECK(kappa3 == std::vector<std::string>{"H4", "H3", "H2", "H1"});

  // Invalid permutations are rejected.
  CHECK_THROWS_AS(
      (void)hbc_of_permutation_data(
          perm_from_cycle_images({1, 1, 3, 4}),
          {perm_identity(3), perm_identity(3), perm_identity(3),
           perm_identity(3)}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      (void)hbc_of_permutation_data(
          perm_identity(4),
          {perm_identity(3), perm_identity(2), perm_identity(3),
           perm_identity(3)}),
      std::invalid_argument);
}

TEST_CASE("classify round-trips the permutation data") {
  std::mt19937 rng(424242);
  for (int trial = 0; trial < 100; ++trial) {
    Perm lambda = random_perm(4, rng);
    std::array<Perm, 4> rho = {random_perm(3, rng), random_perm(3, rng),
                               random_perm(3, rng), random_perm(3, rng)};
    CapitulationReport rep = classify(hbc_of_permutation_data(lambda, rho));
    REQUIRE(rep.scenario == Scenario::HBC);
    REQUIRE(rep.lambda.has_value());
    REQUIRE(rep.rho.has_value());
    CHECK(*rep.lambda == lambda);
    CHECK(*rep.rho == rho);
    // Balanced capitulation is arithmetical and obeys the inclusion laws.
    CHECK(rep.arithmetical);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("degenerate scenarios") {
  std::map<LatticeLabel, LatticeLabel> kernels;
  auto reset = [&]() {
    kernels.clear();
    kernels[{LatticeLabel::G, 0, 0}] = {LatticeLabel::Gprime, 0, 0};
    kernels[{LatticeLabel::Gprime, 0, 0}] = {LatticeLabel::G, 0, 0};
    for (int i = 1; i <= 4; ++i) {
      kernels[{LatticeLabel::K, i, 0}] = {LatticeLabel::G, 0, 0};
      for (int k = 1; k <= 3; ++k)
        kernels[{LatticeLabel::J, i, k}] = {LatticeLabel::J0, 0, 0};
    }
  };

  // Two-valued kappa_1 with self-kernel J0: bi-polarized.
  reset();
  kernels[{LatticeLabel::J0, 0, 0}] = {LatticeLabel::J0, 0, 0};
  kernels[{LatticeLabel::H, 1, 0}] = {LatticeLabel::K, 4, 0};
  for (int i = 2; i <= 4; ++i)
    kernels[{LatticeLabel::H, i, 0}] = {LatticeLabel::K, 1, 0};
  CapitulationReport rep = classify(pattern_from_map(kernels));
  CHECK(rep.scenario == Scenario::BiPolarized);
  CHECK(rep.arithmetical);
  CHECK(rep.violations.empty());
  CHECK_FALSE(rep.lambda.has_value());

  // Constant kappa_1 with an exceptional J-valued ker(J0): uni-polarized.
  reset();
  kernels[{LatticeLabel::J0, 0, 0}] = {LatticeLabel::J, 1, 1};
  for (int i = 1; i <= 4; ++i) {
    kernels[{LatticeLabel::H, i, 0}] = {LatticeLabel::K, 1, 0};
    kernels[{LatticeLabel::K, i, 0}] = {LatticeLabel::H, 1, 0};
    for (int k = 1; k <= 3; ++k)
      kernels[{LatticeLabel::J, i, k}] = {LatticeLabel::J, 1, 1};
  }
  rep = classify(pattern_from_map(kernels));
  CHECK(rep.scenario == Scenario::UniPolarized);
  CHECK(rep.arithmetical);
  CHECK(rep.violations.empty());

  // Constant kappa_1 with self-kernel J0 matches no named shape.
  reset();
  kernels[{LatticeLabel::J0, 0, 0}] = {LatticeLabel::J0, 0, 0};
  for (int i = 1; i <= 4; ++i)
    kernels[{LatticeLabel::H, i, 0}] = {LatticeLabel::K, 1, 0};
  CHECK(classify(pattern_from_map(kernels)).scenario == Scenario::Other);

  // Mixed J0/K kappa_1 matches no named shape either.
  reset();
  kernels[{LatticeLabel::J0, 0, 0}] = {LatticeLabel::J0, 0, 0};
  for (int i = 1; i <= 3; ++i)
    kernels[{LatticeLabel::H, i, 0}] = {LatticeLabel::J0, 0, 0};
  kernels[{LatticeLabel::H, 4, 0}] = {LatticeLabel::K, 1, 0};
  CHECK(classify(pattern_from_map(kernels)).scenario == Scenario::Other);

  // Three distinct kappa_1 values: no named shape.
  reset();
  kernels[{LatticeLabel::J0, 0, 0}] = {LatticeLabel::J0, 0, 0};
  kernels[{LatticeLabel::H, 1, 0}] = {LatticeLabel::K, 1, 0};
  kernels[{LatticeLabel::H, 2, 0}] = {LatticeLabel::K, 2, 0};
  kernels[{LatticeLabel::H, 3, 0}] = {LatticeLabel::K, 3, 0};
  kernels[{LatticeLabel::H, 4, 0}] = {LatticeLabel::K, 3, 0};
  CHECK(classify(pattern_from_map(kernels)).scenario == Scenario::Other);
}

TEST_CASE("relabeling equivariance") {
  // A genuine relabeling: exchange the generator pair of the abelian root
  // and read off the induced label permutation phi.
  PcPresentation a = presentation_c9c9();
  NormalLattice lat = build_lattice(a);
  NormalLattice swapped = build_lattice_with(a, lat.y, lat.x);
  std::map<LatticeLabel, LatticeLabel> phi;
  for (const auto& [l2, s2] : swapped.members) {
    std::optional<LatticeLabel> l1 = label_of(lat, s2);
    REQUIRE(l1.has_value());
    phi[*l1] = l2;
  }
  REQUIRE(phi.size() == 23);

  // phi fixes G, G', J0 and permutes the families coherently.
  CHECK(phi.at({LatticeLabel::G, 0, 0}) == LatticeLabel{LatticeLabel::G, 0, 0});
  CHECK(phi.at({LatticeLabel::Gprime, 0, 0}) ==
        LatticeLabel{LatticeLabel::Gprime, 0, 0});
  CHECK(phi.at({LatticeLabel::J0, 0, 0}) ==
        LatticeLabel{LatticeLabel::J0, 0, 0});
  Perm w;
  for (int i = 1; i <= 4; ++i) {
    LatticeLabel img = phi.at({LatticeLabel::H, i, 0});
    REQUIRE(img.kind == LatticeLabel::H);
    w.image.push_back(img.i);
    CHECK(phi.at({LatticeLabel::K, i, 0}) ==
          (LatticeLabel{LatticeLabel::K, img.i, 0}));
  }
  REQUIRE(is_permutation(w, 4));
  CHECK(cycle_string(w) == "(14)");  // generator exchange swaps x- and y-poles
  std::array<Perm, 4> v;
  for (int i = 1; i <= 4; ++i)
    for (int k = 1; k <= 3; ++k) {
      LatticeLabel img = phi.at({LatticeLabel::J, i, k});
      REQUIRE(img.kind == LatticeLabel::J);
      REQUIRE(img.i == w.image[i - 1]);
      v[i - 1].image.push_back(img.k);
    }
  for (const Perm& p : v) REQUIRE(is_permutation(p, 3));

  // Transport a balanced kernel map along phi and re-classify: lambda is
  // conjugated by w (cycle type invariant) and each rho picks up the inner
  // relabelings of the source and target families.
  std::mt19937 rng(99);
  Perm winv = perm_inverse(w);
  for (int trial = 0; trial < 50; ++trial) {
    Perm lambda = random_perm(4, rng);
    std::array<Perm, 4> rho = {random_perm(3, rng), random_perm(3, rng),
                               random_perm(3, rng), random_perm(3, rng)};
    ArtinPattern p = hbc_of_permutation_data(lambda, rho);
    std::map<LatticeLabel, LatticeLabel> kmap = map_of_pattern(p);

    std::map<LatticeLabel, LatticeLabel> inv;
    for (const auto& [from, to] : phi) inv[to] = from;
    std::map<LatticeLabel, LatticeLabel> moved;
    for (const auto& [src, ker] : kmap)
      moved[src] = phi.at(kmap.at(inv.at(src)));
    CapitulationReport rep = classify(pattern_from_map(moved));

    REQUIRE(rep.scenario == Scenario::HBC);
    Perm expected_lambda = perm_compose(perm_compose(w, lambda), winv);
    CHECK(*rep.lambda == expected_lambda);
    CHECK(cycle_type(*rep.lambda) == cycle_type(lambda));
    for (int i = 1; i <= 4; ++i) {
      int j = winv.image[i - 1];
      Perm expected_rho = perm_compose(
          perm_compose(v[lambda.image[j - 1] - 1], rho[j - 1]),
          perm_inverse(v[j - 1]));
      CHECK((*rep.rho)[i - 1] == expected_rho);
    }
  }
}

TEST_CASE("report serialization") {
  ArtinPattern id_pattern = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  CHECK(to_json(classify(id_pattern)) ==
        "{\"scenario\":\"HBC\",\"lambda\":\"1\",\"rho\":[\"1\",\"1\",\"1\","
        "\"1\"],\"arithmetical\":true}");

  ArtinPattern four = hbc_of_permutation_data(
      perm_from_cycle_images({4, 1, 2, 3}),
      {perm_identity(3), perm_from_cycle_images({1, 3, 2}),
       perm_from_cycle_images({2, 1, 3}), perm_identity(3)});
  CHECK(to_json(classify(four)) ==
        "{\"scenario\":\"HBC\",\"lambda\":\"(1432)\",\"rho\":[\"1\",\"(23)\","
        "\"(12)\",\"1\"],\"arithmetical\":true}");

  CHECK(to_json(classify(artin_pattern(nonabelian243()))) ==
        "{\"scenario\":\"Other\",\"arithmetical\":true}");

  // Violations appear in the report.
  ArtinPattern swapped = hbc_of_permutation_data(
      perm_identity(4), {perm_identity(3), perm_identity(3),
                         perm_identity(3), perm_identity(3)});
  std::swap(swapped.kappa[1][0], swapped.kappa[3][0]);
  std::string json = to_json(classify(swapped));
  CHECK(json.find("\"violations\":[") != std::string::npos);
  CHECK(json.find("\"scenario\":\"Other\"") != std::string::npos);
}
