// Transfer homomorphisms between abelianizations, their kernels, layered
// patterns over the (9,9) normal lattice, and second-order abelianization
// data.
//
// For a subgroup S of finite index in H, the transfer T_{H,S} is the
// homomorphism H/H' -> S/S' evaluated through the coset action: fix a right
// transversal t_1..t_m of S in H; then T(x H') = prod_i t_i x t_{sigma(i)}^-1
// mod S', where sigma is the permutation x induces on the cosets S t_i.  The
// product is independent of the transversal and of the coset representative.
// We evaluate it with the canonical residue transversal (t_i = r_i^-1 for the
// sift residues r_i), which turns the formula into
//   T(x) = prod_j sift(x * r_j)^-1 * x * r_j  (mod S').
#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pgsieve/lattice.hpp"
#include "pgsieve/pcgroup.hpp"

namespace pgsieve {

// Canonical coordinates on the abelianization S/S' of a subgroup.  The basis
// is a deterministic decomposition into independent cyclic factors with
// weakly decreasing orders (largest order first, ties broken by element
// enumeration order), so equal subgroups always yield the same coordinate
// system.  The ambient presentation must outlive this object.
class AbelianQuotient {
 public:
  explicit AbelianQuotient(const Subgroup& s);

  // Weakly decreasing logarithmic orders of the cyclic factors.
  const AbelianTypeInvariants& type() const { return type_; }
  int rank() const { return static_cast<int>(type_.logs.size()); }
  // Coordinates of a member of S modulo S'; entry i is reduced modulo
  // p^{type().logs[i]}.  Precondition: e is a member of S.
  std::vector<int> coordinates(const Element& e) const;
  // A member of S whose class modulo S' has the given coordinates.
  Element representative(const std::vector<int>& coords) const;

 private:
  Subgroup sub_;
  // The subgroup on its own generators; behind a stable address so the
  // quotient map below survives moves of this object.
  std::unique_ptr<PcPresentation> induced_;
  QuotientMap mod_derived_;
  std::vector<Element> basis_;  // elements of mod_derived_.group
  AbelianTypeInvariants type_;
  std::map<Element, std::vector<int>> coords_;  // full coordinate table
};

// A homomorphism between two abelianizations, stored in the canonical
// coordinates of AbelianQuotient on both sides so that equal maps compare
// equal.
struct TransferMap {
  AbelianTypeInvariants source_quotient;  // canonical form of H/H'
  AbelianTypeInvariants target_quotient;  // canonical form of S/S'
  // matrix[i] = target coordinates of the image of the i-th canonical
  // source generator; entry j is reduced modulo p^{target logs[j]}.  The
  // matrix respects generator orders: p^{source log i} * matrix[i] vanishes
  // in the target.
  std::vector<std::vector<int>> matrix;
  bool operator==(const TransferMap&) const = default;
};

// Canonical representatives of the left cosets t*S inside h: the sift
// residues, sorted.  h must contain s.
std::vector<Element> left_coset_reps(const Subgroup& h, const Subgroup& s);

// The transfer product of x through the cosets of s in h, as an element of
// s; only its class modulo the derived subgroup of s is well defined.
// Preconditions: s <= h, x a member of h.
Element transfer_element_in(const Subgroup& h, const Subgroup& s,
                            const Element& x);
// Same with h = the whole group.
Element transfer_element(const PcPresentation& g, const Subgroup& s,
                         const Element& x);
// Same with an explicit left transversal of s in h (any order, any coset
// representatives).  Used to confirm transversal independence.  Throws
// std::invalid_argument if the elements do not represent each coset once.
Element transfer_element_with(const Subgroup& h, const Subgroup& s,
                              const Element& x,
                              const std::vector<Element>& transversal);

// The transfer G/G' -> S/S' in canonical coordinates.
TransferMap transfer(const PcPresentation& g, const Subgroup& s);

// Full preimage in G of the kernel of the transfer G/G' -> S/S'; always
// contains G'.
Subgroup transfer_kernel(const PcPresentation& g, const Subgroup& s);

// A transfer kernel resolved against the lattice.  `label` is set whenever
// the kernel is a lattice member (for a group with derived quotient C9 x C9
// every subgroup between G' and G is one); `descriptor` then equals
// label->str(), and otherwise holds a verbatim description of the subgroup,
// so an unexpected kernel is reported rather than dropped.
struct KappaEntry {
  std::optional<LatticeLabel> label;
  std::string descriptor;
  bool operator==(const KappaEntry&) const = default;
};

// The layered pattern of transfer targets and kernels.  tau[l] lists the
// abelianization types of the layer-l members, kappa[l] the transfer
// kernels; both have layer lengths (1, 4, 13, 4, 1).  Entries follow the
// order G | H1..H4 | J11,J12,...,J43 with J0 LAST | K1..K4 | G'.  Note the
// layer-2 order differs from NormalLattice::layers, which lists J0 first;
// pattern displays conventionally append J0 after the twelve cyclic-quotient
// members, and fixtures follow that convention.
struct ArtinPattern {
  std::array<std::vector<AbelianTypeInvariants>, 5> tau;
  std::array<std::vector<KappaEntry>, 5> kappa;
  bool operator==(const ArtinPattern&) const = default;
};

ArtinPattern artin_pattern(const NormalLattice& lat);
// Builds the lattice with the deterministic generating pair first.
ArtinPattern artin_pattern(const PcPresentation& g);

// Compact single-line JSON, {"tau":[[...],...],"kappa":[[...],...]} with the
// five layers in order and entries as strings ("22", "211", ... / "G", "H1",
// "J0", "K4", "G'").  Byte-stable: equal patterns serialize identically.
std::string to_json(const ArtinPattern& ap);

// Abelianization types one level below the second layer: for each layer-2
// member J, the types of ALL maximal subgroups of J — including subgroups of
// G that do not contain G'.  entries[0..11] correspond to J11..J43 in
// lattice order and entries[12] to J0; each entry is sorted ascending and
// has (3^d - 1)/2 values, d the minimal generator count of J.
struct SecondOrderTau {
  std::vector<std::vector<AbelianTypeInvariants>> entries;
  bool operator==(const SecondOrderTau&) const = default;
};

SecondOrderTau second_order_tau(const NormalLattice& lat);
SecondOrderTau second_order_tau(const PcPresentation& g);

}  // namespace pgsieve
