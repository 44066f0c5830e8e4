// Finite p-groups presented by refined power-commutator presentations:
// every generator has relative order p, each power g_i^p and commutator
// [g_j, g_i] (j > i) equals a normal word supported on strictly higher
// generator indices.  Elements are exponent vectors in normal form;
// multiplication is collection from the left.  Presentations and subgroups
// are immutable after construction and all operations are pure.

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgsieve/fplinalg.hpp"

namespace pgsieve {

// Group element in normal form g_1^{e_1} ... g_n^{e_n}.
struct Element {
  std::vector<uint8_t> exponents;

  bool is_identity() const;
  int leading_index() const;  // first index with nonzero exponent, -1 if identity
  bool operator==(const Element &) const = default;
  bool operator<(const Element &o) const { return exponents < o.exponents; }
};

// A letter g_i^e of an unnormalized word; exponents may be any nonnegative
// value and are reduced during collection.
using Word = std::vector<std::pair<int, int>>;

struct PcPresentation {
  // How a non-minimal generator arose: as g_i^p (kind power) or as
  // [g_j, g_i] (kind commutator).  Used by the descendant construction.
  struct Definition {
    enum Kind { power, commutator } kind;
    int i = -1;
    int j = -1;  // only for commutator, j > i
    bool operator==(const Definition &) const = default;
  };

  int p = 3;
  int n = 0;
  // power_words[i]: normal word for g_i^p (empty = trivial), support > i.
  std::vector<std::vector<uint8_t>> power_words;
  // comm_words[comm_index(j, i)]: normal word for [g_j, g_i], j > i,
  // support > j (empty = trivial).
  std::vector<std::vector<uint8_t>> comm_words;
  // weights[i]: step of the lower exponent-p central series where g_i lives.
  std::vector<int> weights;
  // definitions[i]: set for generators introduced by a defining relation.
  std::vector<std::optional<Definition>> definitions;

  static size_t comm_index(int j, int i) {
    return static_cast<size_t>(j) * (j - 1) / 2 + i;
  }

  const std::vector<uint8_t> &power_word(int i) const { return power_words[i]; }
  const std::vector<uint8_t> &comm_word(int j, int i) const {
    return comm_words[comm_index(j, i)];
  }

  // Validates shapes and support, then computes the non-commuting partner
  // masks used by collection.  Must be called after the relation tables are
  // filled and before any collection.
  void finalize();

  // ----- collection and element arithmetic -----
  Element identity() const;
  Element generator(int i) const;
  // Normal form of (prefix of given exponents) * word.
  Element collect(const Element &prefix, const Word &word) const;
  Element collect_word(const Word &word) const;
  Element multiply(const Element &a, const Element &b) const;
  Element inverse(const Element &a) const;
  Element power(const Element &a, long long k) const;  // k may be negative
  Element commutator(const Element &a, const Element &b) const;
  Element conjugate(const Element &a, const Element &b) const;  // b^-1 a b
  // Order of a as a power of p.
  long long element_order(const Element &a) const;

  // All standard overlap checks collect equally; true for genuine groups.
  bool is_consistent() const;
  // First failing overlap as a human-readable description, for diagnostics.
  std::optional<std::string> first_inconsistency() const;

  uint64_t order() const;  // p^n (n <= 40 in any supported use)
  int order_log() const { return n; }

  bool operator==(const PcPresentation &) const = default;

 private:
  // noncommuting_[i] holds bits j for which [g_j, g_i] or [g_i, g_j] is a
  // nontrivial relation.
  std::vector<std::array<uint64_t, 4>> noncommuting_;
};

// Subgroup given by an induced generating sequence: member k has strictly
// increasing leading index, leading exponent 1, and (canonically) zero
// exponents at the leading indices of later members.
struct Subgroup {
  const PcPresentation *parent = nullptr;
  std::vector<Element> igs;

  int size_log() const { return static_cast<int>(igs.size()); }
  uint64_t size() const;
  bool contains(const Element &e) const;
  bool operator==(const Subgroup &o) const {
    return parent == o.parent && igs == o.igs;
  }
};

// Residue of e after clearing the leading indices of s's igs by right
// multiplication; identity iff e is a member.
Element sift(const Subgroup &s, const Element &e);
// As sift, but records the member powers used: e = residue-free product
// prod_k igs[k]^{used[k]} read in increasing leading order, with
// e * prod igs[k]^{p - used[k]} ... the recorded value satisfies
// e = (prod_{increasing} igs[k]^{r_k})^{-1} with r_k returned.
Element sift_record(const Subgroup &s, const Element &e, std::vector<int> *r);

// Smallest subgroup containing gens; canonical igs; idempotent.
Subgroup subgroup_closure(const PcPresentation &g, const std::vector<Element> &gens);
// Smallest normal subgroup containing gens.
Subgroup normal_closure(const PcPresentation &g, const std::vector<Element> &gens);
// Subgroup generated by gens inside the ambient subgroup s (closure also
// under conjugation by s's igs members).
Subgroup closure_in(const Subgroup &s, const std::vector<Element> &gens);

Subgroup full_subgroup(const PcPresentation &g);
Subgroup trivial_subgroup(const PcPresentation &g);

Subgroup derived_subgroup(const PcPresentation &g);
Subgroup derived_of(const Subgroup &s);
int derived_length(const PcPresentation &g);

// Lower exponent-p central series P_1 = G, P_{k+1} = [P_k, G] P_k^p, down to
// the trivial subgroup; result[k] is P_{k+1} (result[0] = P_1 = G).
std::vector<Subgroup> lower_exponent_p_series(const PcPresentation &g);
int exponent_p_class(const PcPresentation &g);
// Lower central series and nilpotency class.
std::vector<Subgroup> lower_central_series(const PcPresentation &g);
int nilpotency_class(const PcPresentation &g);

// Frattini subgroup G' G^p.
Subgroup frattini_subgroup(const PcPresentation &g);
// Minimal number of generators d = log_p |G / Frattini|.
int minimal_generator_count(const PcPresentation &g);

// Honest generator weights: weights[i] = the deepest lower exponent-p
// central series term containing g_i.
std::vector<int> weights_from_series(const PcPresentation &g);
// Recompute the definition table from the relation words: a relation
// defines the highest generator of its word when it occurs to the first
// power; scanning order (powers by i, then commutators by (j, i)) is fixed,
// first relation wins, so the result is a deterministic function of the
// relation tables alone.
void scan_definitions(PcPresentation &g);

// Quotient G/N with the projection data needed to push elements through.
// Holds a pointer to the source presentation, which must outlive the map.
struct QuotientMap {
  PcPresentation group;           // presentation of G/N
  std::vector<int> kept_indices;  // quotient generator a = image of g_{kept[a]}
  const PcPresentation *source = nullptr;
  Subgroup nsub;                  // the normal subgroup being factored out

  Element project(const Element &e) const;  // image of an element of G
  // Canonical coset representative of a quotient element.
  Element lift(const Element &q) const;
};

// Throws std::invalid_argument if n is not normal in g.
QuotientMap quotient(const PcPresentation &g, const Subgroup &n);

// Logarithmic abelian type invariants, weakly decreasing; (2,2) = C9 x C9.
struct AbelianTypeInvariants {
  std::vector<int> logs;
  bool operator==(const AbelianTypeInvariants &) const = default;
  bool operator<(const AbelianTypeInvariants &o) const { return logs < o.logs; }
  // "22" for (2,2); parenthesized comma form if any entry exceeds 9.
  std::string str() const;
};

AbelianTypeInvariants abelian_type_invariants(const Subgroup &s);
AbelianTypeInvariants abelian_type_invariants(const PcPresentation &g);

// Exact normal-form coordinates of a member of s over its igs: the unique
// vector a with e = igs[0]^{a_0} * ... * igs[m-1]^{a_{m-1}}, 0 <= a_k < p.
// Precondition: e is a member of s.
std::vector<int> igs_coordinates(const Subgroup &s, const Element &e);

// The refined presentation a subgroup induces on its igs members, with
// relation words expressed in exact igs coordinates.  Presents the subgroup
// as a group in its own right.
PcPresentation induced_presentation(const Subgroup &s);

// ----- presentation text format -----
// Line-oriented: `p <prime>`, `ngens <n>`, `pow <i> = <j1>^<e1> ...`,
// `comm <j> <i> = ...`; omitted relations are trivial; `#` starts a comment.
// Generator indices are 1-based in the format.  write_presentation output is
// canonical and round-trips bit-exactly through read_presentation.
std::string write_presentation(const PcPresentation &g);
// Throws std::invalid_argument on malformed input, bad indices, support on
// non-higher generators, or an inconsistent presentation.
PcPresentation read_presentation(const std::string &text);

// The rank-2 abelian root C9 x C9 on four generators:
// g1^3 = g3, g2^3 = g4, everything commuting.
PcPresentation presentation_c9c9();

}  // namespace pgsieve
