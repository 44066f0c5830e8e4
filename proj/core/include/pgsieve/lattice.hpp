// The four-layer normal lattice above the derived subgroup for groups with
// derived quotient C9 x C9.
//
// For such a group with generating pair (x, y), the proper members between
// G and G' are, by index in G:
//   index 3:  H1 = <x, J0>, H2 = <xy, J0>, H3 = <xy^2, J0>, H4 = <y, J0>
//   index 9:  J0 = Phi(G) = <x^3, y^3, G'>, plus twelve cyclic-quotient
//             members J_{ik}: J_{1k} = <x y^{3(k-1)}, G'>,
//             J_{2k} = <xy y^{3(k-1)}, G'>, J_{3k} = <xy^2 y^{3(k-1)}, G'>,
//             J_{41} = <y, G'>, J_{42} = <x^3 y, G'>, J_{43} = <x^6 y, G'>
//   index 27: K1 = <x^3, G'>, K2 = <x^3y^3, G'>, K3 = <x^3y^6, G'>,
//             K4 = <y^3, G'>
// Layer 0 is {G} and layer 4 is {G'}.  All members are normal (they contain
// G'), H_i/G' = C9 x C3, J_{ik}/G' = C9, J0/G' = C3 x C3, K_i/G' = C3.
#pragma once

#include <array>
#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgsieve/pcgroup.hpp"

namespace pgsieve {

struct LatticeLabel {
  enum Kind : uint8_t { G, H, J, J0, K, Gprime };
  Kind kind = G;
  int i = 0;  // 1..4 for H, J, K
  int k = 0;  // 1..3 for J

  auto operator<=>(const LatticeLabel&) const = default;
  // "G", "H1", "J0", "J12", "K4", "G'"
  std::string str() const;
};

// The labeled lattice.  Holds a pointer to the presentation it was built
// from, which must outlive the lattice.
struct NormalLattice {
  const PcPresentation* group = nullptr;
  Element x, y;  // the generator pair the labels are relative to
  // All 23 members in deterministic order: G, H1..H4, J0, J11..J43 (i
  // outer), K1..K4, G'.
  std::vector<std::pair<LatticeLabel, Subgroup>> members;
  // layers[l] = the labels of layer l, 0 <= l <= 4; layer 2 leads with J0.
  std::array<std::vector<LatticeLabel>, 5> layers;

  // Throws std::out_of_range for a label not in the lattice.
  const Subgroup& member(const LatticeLabel& label) const;
};

// Deterministic generating pair: x is the first element outside the
// Frattini subgroup in exponent-odometer order, y the first element that
// completes it to a generating pair.  For a group with derived quotient
// C9 x C9 any generating pair automatically satisfies x^3, y^3 not in G'
// and x^9, y^9 in G'.  Throws std::invalid_argument when the derived
// quotient is not of type (2,2).
std::pair<Element, Element> choose_generators(const PcPresentation& g);

// Build the lattice from choose_generators(g) / from an explicit pair.
// Verifies layer cardinalities (4, 13, 4), the quotient shapes above, the
// intersection identity J0 = H1 cap ... cap H4, and the inclusion diagram;
// throws std::logic_error if any check fails, std::invalid_argument for a
// non-generating pair or wrong derived quotient type.
NormalLattice build_lattice(const PcPresentation& g);
NormalLattice build_lattice_with(const PcPresentation& g, const Element& x,
                                 const Element& y);

// The unique label whose member equals s, if any.
std::optional<LatticeLabel> label_of(const NormalLattice& lat,
                                     const Subgroup& s);

}  // namespace pgsieve
