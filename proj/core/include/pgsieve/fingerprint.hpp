// Isomorphism-invariant fingerprints and certified isomorphism search.
//
// A fingerprint packs the cheap invariants (order, classes, abelianization),
// the layer-wise abelian-type multisets of the normal lattice, the cover
// invariants (nu, mu, d2), the sigma flag, and a hash of the layered pattern
// brought to a canonical form under lattice relabelings.  Equal fingerprints
// are a necessary condition for isomorphism; distinct fingerprints certify
// non-isomorphism.
//
// find_isomorphism searches for a genuine isomorphism by lifting candidate
// generator images level by level through the lower exponent-p series,
// verifying the relations in each quotient, so a returned map is a verified
// bijective homomorphism.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgsieve/artin.hpp"
#include "pgsieve/capitulation.hpp"

namespace pgsieve {

uint64_t fnv1a64(std::string_view bytes);

// 16-hex-digit content key of the presentation text.  Deterministic across
// runs; NOT isomorphism-invariant (two presentations of one group differ).
std::string presentation_key(const PcPresentation &g);

// Transport a pattern along the lattice relabeling that renames family i to
// family w(i) and the inner index k of family i to v_i(k): both the entry
// positions and the kernel values move.
ArtinPattern relabel_pattern(const ArtinPattern &pattern, const Perm &w,
                             const std::array<Perm, 4> &v);

// The lexicographically smallest serialization of the pattern over all
// 24 * 6^4 lattice relabelings: a generator-choice-independent normal form.
std::string canonical_pattern_json(const ArtinPattern &pattern);

struct Fingerprint {
  int order_log = 0;       // log_p of the order
  int p_class = 0;         // exponent-p class
  int coclass = 0;         // order_log minus nilpotency class
  int derived_length = 0;
  AbelianTypeInvariants ati;
  // Sorted abelian-type multisets per lattice layer; all empty when the
  // derived quotient is not C9 x C9 (no labeled lattice exists).
  std::array<std::vector<AbelianTypeInvariants>, 5> layer_tau;
  int nu = 0;   // nuclear rank
  int mu = 0;   // multiplicator rank
  int d2 = 0;   // relation rank (= mu)
  bool sigma = false;
  uint64_t pattern_hash = 0;  // of canonical_pattern_json; 0 without lattice

  bool operator==(const Fingerprint &other) const;
  bool operator<(const Fingerprint &other) const;
  // Compact stable key, safe for file names.
  std::string str() const;
};

// Optional precomputed ingredients (from tree bookkeeping) that make the
// fingerprint cheap; anything absent is computed from scratch.
struct FingerprintHints {
  std::optional<bool> sigma;
  std::optional<std::pair<int, int>> nu_mu;
  const ArtinPattern *pattern = nullptr;
};

Fingerprint iso_fingerprint(const PcPresentation &g);
Fingerprint iso_fingerprint(const PcPresentation &g,
                            const FingerprintHints &hints);

// Images of all of g's pc generators in h forming a verified isomorphism,
// or nullopt when none exists.  Exhaustive over generator images of the
// minimal generating set, lifted level by level through the lower
// exponent-p series with relation checks pruning each level.
std::optional<std::vector<Element>> find_isomorphism(const PcPresentation &g,
                                                     const PcPresentation &h);

}  // namespace pgsieve
