#include "pgsieve/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgsieve {

namespace {

// Abelian type invariants of S/G' for a member S >= G', read off inside the
// abelianization of the ambient group.
AbelianTypeInvariants quotient_shape(const QuotientMap& ab, const Subgroup& s) {
  std::vector<Element> images;
  images.reserve(s.igs.size());
  for (const Element& e : s.igs) images.push_back(ab.project(e));
  return abelian_type_invariants(subgroup_closure(ab.group, images));
}

Subgroup closure_with(const PcPresentation& g, const Subgroup& base,
                      std::vector<Element> gens) {
  gens.insert(gens.end(), base.igs.begin(), base.igs.end());
  return subgroup_closure(g, gens);
}

Subgroup intersection(const PcPresentation& g, const Subgroup& a,
                      const Subgroup& b) {
  // Elementary but sufficient at lattice sizes: collect the members of the
  // smaller subgroup lying in the larger one.  Lattice members have index
  // <= 27, so the smaller side has at most |G|/3 elements; the lattice is
  // built once per analyzed group.
  const Subgroup& small = a.size_log() <= b.size_log() ? a : b;
  const Subgroup& large = a.size_log() <= b.size_log() ? b : a;
  std::vector<Element> inside;
  // Enumerate small by odometer over igs exponents.
  std::vector<uint8_t> exps(small.igs.size(), 0);
  for (;;) {
    Element e = g.identity();
    for (size_t m = 0; m < small.igs.size(); ++m)
      if (exps[m]) e = g.multiply(e, g.power(small.igs[m], exps[m]));
    if (large.contains(e)) inside.push_back(e);
    size_t m = 0;
    while (m < exps.size() && ++exps[m] == g.p) exps[m++] = 0;
    if (m == exps.size()) break;
  }
  return subgroup_closure(g, inside);
}

}  // namespace

std::string LatticeLabel::str() const {
  switch (kind) {
    case G:
      return "G";
    case H:
      return "H" + std::to_string(i);
    case J0:
      return "J0";
    case J:
      return "J" + std::to_string(i) + std::to_string(k);
    case K:
      return "K" + std::to_string(i);
    case Gprime:
      return "G'";
  }
  return {};
}

const Subgroup& NormalLattice::member(const LatticeLabel& label) const {
  for (const auto& [l, s] : members)
    if (l == label) return s;
  throw std::out_of_range("lattice: no such label: " + label.str());
}

std::pair<Element, Element> choose_generators(const PcPresentation& g) {
  if (!(abelian_type_invariants(g) == AbelianTypeInvariants{{2, 2}}))
    throw std::invalid_argument(
        "lattice: derived quotient is not of type (2,2)");

  Subgroup phi = frattini_subgroup(g);
  auto next = [&](Element& e) {
    int m = 0;
    while (m < g.n && ++e.exponents[m] == g.p) e.exponents[m++] = 0;
    return m < g.n;
  };
  Element x = g.identity();
  while (next(x))
    if (!phi.contains(x)) break;

  // y completes a generating pair iff x, y are independent modulo the
  // Frattini subgroup.
  Element y = g.identity();
  while (next(y)) {
    if (phi.contains(y)) continue;
    bool dependent = false;
    for (int e = 1; e < g.p; ++e)
      if (phi.contains(g.multiply(g.power(x, e), y))) dependent = true;
    if (dependent) continue;
    return {x, y};
  }
  throw std::logic_error("lattice: no generating pair found");
}

NormalLattice build_lattice_with(const PcPresentation& g, const Element& x,
                                 const Element& y) {
  if (!(abelian_type_invariants(g) == AbelianTypeInvariants{{2, 2}}))
    throw std::invalid_argument(
        "lattice: derived quotient is not of type (2,2)");
  if (subgroup_closure(g, {x, y}).size_log() != g.n)
    throw std::invalid_argument("lattice: pair does not generate the group");

  NormalLattice lat;
  lat.group = &g;
  lat.x = x;
  lat.y = y;

  Subgroup gprime = derived_subgroup(g);
  auto pw = [&](const Element& e, int k) { return g.power(e, k); };
  Element xy = g.multiply(x, y);
  Element xy2 = g.multiply(x, pw(y, 2));

  Subgroup j0 = closure_with(g, gprime, {pw(x, 3), pw(y, 3)});
  std::array<Subgroup, 4> hs = {
      closure_with(g, j0, {x}), closure_with(g, j0, {xy}),
      closure_with(g, j0, {xy2}), closure_with(g, j0, {y})};
  // J_{ik}: for i = 1..3 the generator x y^{i-1} shifted by y^{3(k-1)}; for
  // i = 4 the generator y shifted by x^{3(k-1)}.
  std::array<std::array<Subgroup, 3>, 4> js;
  for (int i = 0; i < 3; ++i) {
    Element base = g.multiply(x, pw(y, i));
    for (int k = 0; k < 3; ++k)
      js[i][k] = closure_with(g, gprime, {g.multiply(base, pw(y, 3 * k))});
  }
  for (int k = 0; k < 3; ++k)
    js[3][k] = closure_with(g, gprime, {g.multiply(pw(x, 3 * k), y)});
  std::array<Subgroup, 4> ks = {closure_with(g, gprime, {pw(x, 3)}),
                                closure_with(g, gprime, {g.multiply(pw(x, 3), pw(y, 3))}),
                                closure_with(g, gprime, {g.multiply(pw(x, 3), pw(y, 6))}),
                                closure_with(g, gprime, {pw(y, 3)})};

  lat.members.emplace_back(LatticeLabel{LatticeLabel::G, 0, 0},
                           full_subgroup(g));
  lat.layers[0].push_back(lat.members.back().first);
  for (int i = 0; i < 4; ++i) {
    lat.members.emplace_back(LatticeLabel{LatticeLabel::H, i + 1, 0}, hs[i]);
    lat.layers[1].push_back(lat.members.back().first);
  }
  lat.members.emplace_back(LatticeLabel{LatticeLabel::J0, 0, 0}, j0);
  lat.layers[2].push_back(lat.members.back().first);
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 3; ++k) {
      lat.members.emplace_back(LatticeLabel{LatticeLabel::J, i + 1, k + 1},
                               js[i][k]);
      lat.layers[2].push_back(lat.members.back().first);
    }
  for (int i = 0; i < 4; ++i) {
    lat.members.emplace_back(LatticeLabel{LatticeLabel::K, i + 1, 0}, ks[i]);
    lat.layers[3].push_back(lat.members.back().first);
  }
  lat.members.emplace_back(LatticeLabel{LatticeLabel::Gprime, 0, 0}, gprime);
  lat.layers[4].push_back(lat.members.back().first);

  // ----- structural verification -----
  auto fail = [](const char* what) {
    throw std::logic_error(std::string("lattice: ") + what);
  };

  // Distinctness and layer cardinalities (4, 13, 4).
  for (size_t a = 0; a < lat.members.size(); ++a)
    for (size_t b = a + 1; b < lat.members.size(); ++b)
      if (lat.members[a].second == lat.members[b].second)
        fail("members not pairwise distinct");
  if (lat.layers[1].size() != 4 || lat.layers[2].size() != 13 ||
      lat.layers[3].size() != 4)
    fail("layer cardinalities are not (4, 13, 4)");

  // Indices in G: 3, 9, 27 by layer; all members contain G'.
  for (const auto& [label, s] : lat.members) {
    int index_log = g.n - s.size_log();
    int expect = label.kind == LatticeLabel::G        ? 0
                 : label.kind == LatticeLabel::H      ? 1
                 : label.kind == LatticeLabel::Gprime ? g.n - gprime.size_log()
                 : label.kind == LatticeLabel::K      ? 3
                                                      : 2;
    if (index_log != expect) fail("member has wrong index");
    for (const Element& e : gprime.igs)
      if (!s.contains(e)) fail("member does not contain the derived subgroup");
  }

  // Quotient shapes modulo G'.
  QuotientMap ab = quotient(g, gprime);
  for (int i = 0; i < 4; ++i) {
    if (!(quotient_shape(ab, hs[i]) == AbelianTypeInvariants{{2, 1}}))
      fail("maximal member quotient is not (2,1)");
    if (!(quotient_shape(ab, ks[i]) == AbelianTypeInvariants{{1}}))
      fail("third-layer quotient is not (1)");
    for (int k = 0; k < 3; ++k)
      if (!(quotient_shape(ab, js[i][k]) == AbelianTypeInvariants{{2}}))
        fail("second-layer quotient is not cyclic of order 9");
  }
  if (!(quotient_shape(ab, j0) == AbelianTypeInvariants{{1, 1}}))
    fail("Frattini quotient is not (1,1)");
  if (!(j0 == frattini_subgroup(g))) fail("J0 is not the Frattini subgroup");

  // Intersection identity and inclusion diagram.
  Subgroup meet = hs[0];
  for (int i = 1; i < 4; ++i) meet = intersection(g, meet, hs[i]);
  if (!(meet == j0)) fail("J0 is not the intersection of the maximals");
  auto leq = [&](const Subgroup& a, const Subgroup& b) {
    return std::all_of(a.igs.begin(), a.igs.end(),
                       [&](const Element& e) { return b.contains(e); });
  };
  for (int i = 0; i < 4; ++i) {
    if (!leq(j0, hs[i])) fail("J0 not contained in a maximal member");
    for (int k = 0; k < 3; ++k) {
      if (!leq(js[i][k], hs[i])) fail("J_{ik} not contained in H_i");
      if (!leq(ks[i], js[i][k])) fail("K_i not contained in J_{ik}");
    }
    if (!leq(ks[i], j0)) fail("K_i not contained in J0");
  }

  return lat;
}

NormalLattice build_lattice(const PcPresentation& g) {
  auto [x, y] = choose_generators(g);
  return build_lattice_with(g, x, y);
}

std::optional<LatticeLabel> label_of(const NormalLattice& lat,
                                     const Subgroup& s) {
  for (const auto& [label, member] : lat.members)
    if (member == s) return label;
  return std::nullopt;
}

}  // namespace pgsieve
