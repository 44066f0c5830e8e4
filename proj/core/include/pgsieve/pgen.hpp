#ifndef PGSIEVE_PGEN_HPP
#define PGSIEVE_PGEN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pgsieve/fplinalg.hpp"
#include "pgsieve/pcgroup.hpp"

namespace pgsieve {

// ---------------------------------------------------------------------------
// Automorphisms.
//
// An automorphism of a pc group is stored as the list of generator images
// together with the images under the inverse map.  Both lists are complete
// (one element per generator); composition, application and verification all
// work from these.  Equality of automorphisms is equality of the image lists.
// ---------------------------------------------------------------------------

struct Automorphism {
  std::vector<Element> images;          // images[i] = image of generator i
  std::vector<Element> inverse_images;  // images under the inverse map

  bool operator==(const Automorphism& other) const {
    return images == other.images;
  }
};

// The identity automorphism of g.
Automorphism aut_identity(const PcPresentation& g);

// Apply an automorphism to an element: phi(x) for x = prod g_i^{e_i} is
// prod phi(g_i)^{e_i}, evaluated by collection.
Element aut_apply(const PcPresentation& g, const Automorphism& a,
                  const Element& x);

// Apply the inverse map.
Element aut_apply_inverse(const PcPresentation& g, const Automorphism& a,
                          const Element& x);

// Composition: (a * b)(x) = a(b(x)).
Automorphism aut_compose(const PcPresentation& g, const Automorphism& a,
                         const Automorphism& b);

// Check that the images define an automorphism: every defining relation is
// preserved, and the images generate modulo the Frattini subgroup.
bool aut_verify(const PcPresentation& g, const std::vector<Element>& images);

// Given images of all generators that define an automorphism, compute the
// inverse image list (layer-by-layer linear solve along the lower exponent-p
// central series).  Throws std::invalid_argument if the images do not define
// an automorphism.
std::vector<Element> aut_invert_images(const PcPresentation& g,
                                       const std::vector<Element>& images);

// Build an Automorphism from images of all generators (inverse computed).
Automorphism aut_from_images(const PcPresentation& g,
                             std::vector<Element> images);

// Given images for the minimal generators only (indices with weight 1),
// derive images for the remaining generators from their definitions.
// Requires every non-minimal generator to carry a definition.
std::vector<Element> aut_derive_images(const PcPresentation& g,
                                       const std::vector<Element>& minimal_images);

// Matrix of the induced action on V = G/Phi(G), a d x d matrix over F_p
// whose column j holds the coordinates of the image of the j-th minimal
// generator.  Requires the generators of weight 1 to be g_0..g_{d-1}.
FpMatrix aut_matrix_on_frattini_quotient(const PcPresentation& g,
                                         const Automorphism& a);

// A generating set for the automorphism group of g.
struct AutGroup {
  std::vector<Automorphism> gens;
};

// ---------------------------------------------------------------------------
// The p-covering group.
//
// p_cover(g) builds the p-cover g* of a consistent presentation in standard
// form (every non-minimal generator carries a definition): one central
// order-p tail is appended to every non-definition relation, the overlap
// consistency equations are solved over F_p, and the pivot tails are
// eliminated.  The surviving tails become the new generators; they span the
// p-multiplicator M, an elementary abelian central subgroup of g*.  The
// nucleus N <= M is the last nontrivial term of the lower exponent-p central
// series of g*.
// ---------------------------------------------------------------------------

// One relation of the original presentation, with its image in M.
struct CoverRelation {
  PcPresentation::Definition::Kind kind;  // Power (i) or Commutator (j, i)
  int i = 0;
  int j = 0;                      // used for commutators only
  bool is_definition = false;     // definitions receive no tail
  std::vector<uint8_t> tail;      // value in M (length mu; zero for definitions)
};

struct PCoverData {
  PcPresentation cover;             // presentation of g* (n + mu generators)
  FpSubspace multiplicator;         // M, as a subspace of the tail block F_p^mu
  FpSubspace nucleus;               // N <= M
  std::vector<Element> generator_map;  // images of g's generators inside g*
  std::vector<CoverRelation> relations;
  std::vector<int> tail_relation;   // tail_relation[l] = index into relations
                                    // of the relation whose tail is the l-th
                                    // surviving tail (the unit vector b_l)
  int n = 0;                        // generators of g
  int mu = 0;                       // dim M
};

PCoverData p_cover(const PcPresentation& g);

// Relation rank d_2(g) = dim M(g) = mu.
int relation_rank(const PcPresentation& g);

// Generator rank d_1(g) = minimal number of generators.
int generator_rank(const PcPresentation& g);

// A Schur group has d_2 = d_1.
bool is_schur(const PcPresentation& g);

// Matrix of the action induced by an automorphism of g on the multiplicator
// M (mu x mu over F_p); column l holds the image of the l-th surviving tail.
// A set-theoretic lift of the images need not be homomorphic, so the matrix
// is obtained by solving the linear system expressing that some central
// correction of the canonical lifts preserves every relation of the cover;
// the matrix part of the solution is unique and is checked to be so.
FpMatrix aut_matrix_on_multiplicator(const PcPresentation& g,
                                     const PCoverData& cover,
                                     const Automorphism& a);

// ---------------------------------------------------------------------------
// Certified order / membership / reduction for automorphism groups.
//
// A layered stabilizer chain: automorphisms are determined by the images of
// the minimal generators, and the chain of actions "images of the minimal
// generators modulo P_2, P_3, ..." has trivial pointwise stabilizer.  Orbits
// at each level live inside a single layer slice, so transversals stay small.
// Provides the exact order of the generated subgroup, a membership test, and
// a small strong generating set certified to generate the same subgroup.
// ---------------------------------------------------------------------------

class AutChain {
 public:
  AutChain(const PcPresentation& g, const std::vector<Automorphism>& gens);

  unsigned long long order() const { return order_; }
  bool contains(const Automorphism& a) const;
  // Strong generating set: generates exactly the same subgroup.
  const std::vector<Automorphism>& strong_gens() const { return strong_gens_; }
  // Generators of the kernel of the action on V = G/Phi(G): the strong
  // generators living at levels that fix the images modulo P_2.
  std::vector<Automorphism> frattini_kernel_gens() const;

 private:
  struct Level {
    int series_index;   // images are compared modulo P_{series_index}
    int truncate_len;   // #generators of weight < series_index
    std::string idkey;  // key of the identity automorphism
    std::map<std::string, Automorphism> transversal;
  };
  std::string key_at_level(const Automorphism& a, const Level& level) const;
  void add(const Automorphism& a, size_t level);
  void rebuild_orbit(size_t level);
  // One pass of Schreier-generator verification over every level; called to
  // a fixpoint so generators discovered late are checked against orbits
  // built early.
  void verify_sweep();

  const PcPresentation* g_;
  int d_ = 0;  // number of minimal generators (the images forming the keys)
  std::vector<Level> levels_;
  std::vector<Automorphism> strong_gens_;
  std::vector<size_t> strong_gen_level_;  // first level where each gen moves
  unsigned long long order_ = 1;
};

// ---------------------------------------------------------------------------
// Descendants (the p-group generation step).
//
// descendants(g, step, aut) forms the p-cover, enumerates the allowable
// subgroups U <= M of codimension `step` (U + N = M), partitions them into
// orbits under the action of aut on M, and returns one child g*/U per orbit
// together with a generating set for its full automorphism group (lifts of
// the stabilizer of U plus the central automorphisms).  Children are
// returned in the deterministic enumeration order of their orbit
// representatives (the key-minimal member of each orbit).
// ---------------------------------------------------------------------------

struct Descendant {
  PcPresentation group;
  AutGroup aut;
  FpSubspace subspace;   // the allowable U that produced this child
  long long orbit_size = 0;
  bool capable = false;  // nu(child) > 0
};

// with_aut=false skips the stabilizer/lifting work and returns children with
// empty automorphism groups — enough for counting and invariant extraction
// at tree leaves that will never be expanded further.
std::vector<Descendant> descendants(const PcPresentation& g, int step,
                                    const AutGroup& aut, bool with_aut = true);

// Orbit representatives of the quotients cover/U over ALL subgroups U <= M
// of codimension `step`, dropping the allowability requirement U + N = M.
// The allowable orbits are exactly the immediate descendants; the extra
// quotients are central extensions of g that do not raise the exponent-p
// class (their new generators land below the top weight).  The metabelian
// node below the rank-2 homocyclic root is of this kind — it is the
// quotient by the nucleus itself, the unique non-allowable direction — so
// root location enumerates these instead of descendants.  1 <= step <= mu.
std::vector<Descendant> cover_quotients(const PcPresentation& g, int step,
                                        const AutGroup& aut,
                                        bool with_aut = true);

// Counts per step: N_s = number of children, C_s = number of capable ones.
struct DescendantStats {
  int nu = 0;   // dim N
  int mu = 0;   // dim M
  int d2 = 0;   // relation rank (= mu)
  std::vector<std::pair<long long, long long>> counts;  // (N_s, C_s), s = 1..nu
};

DescendantStats descendant_stats(const PcPresentation& g, const AutGroup& aut);

// ---------------------------------------------------------------------------
// Roots and sigma machinery.
// ---------------------------------------------------------------------------

// Automorphism group of the abelian root C9 x C9 in its standard
// presentation: GL_2(Z/9) given by elementary/diagonal generators, each
// verified.  Throws std::invalid_argument for any other presentation.
AutGroup aut_root(const PcPresentation& g);

struct SigmaWitness {
  Automorphism aut;          // acts as inversion on G/Phi(G)
  bool inverts_multiplicator = false;
};

// Exhaustive sigma test: search images x -> x^-1 phi, y -> y^-1 psi over
// phi, psi in Phi(G) — exactly the automorphisms acting as inversion on
// G/Phi(G).  Requires a 2-generated standard-form presentation of order at
// most p^9.  is_sigma2 additionally requires the witness to act as
// inversion on the multiplicator; absence means the exhaustive search
// failed.
std::optional<SigmaWitness> is_sigma(const PcPresentation& g);
std::optional<SigmaWitness> is_sigma2(const PcPresentation& g);

// Decide sigma / sigma2 from a carried automorphism group (exact when aut
// generates the full automorphism group — the situation maintained by
// descendants); usable at any order.  sigma: -I lies in the image of Aut(g)
// in GL(V).  sigma2: some automorphism inverts both V and M, found by
// correcting a sigma witness with kernel-of-V-action generators.
std::optional<SigmaWitness> find_sigma_with_aut(const PcPresentation& g,
                                                const AutGroup& aut);
std::optional<SigmaWitness> find_sigma2_with_aut(const PcPresentation& g,
                                                 const AutGroup& aut);

// ---------------------------------------------------------------------------
// Shafarevich bound: for a number field K of signature (r1, r2) and odd
// prime p with zeta_p not in K, a p-tower group G with d_1 generators
// satisfies d_1 <= d_2 <= d_1 + r1 + r2 - 1.  Specialised here to quadratic
// fields and p = 3 (d_1 = 2, theta = 0): returns {2, 2 + r1 + r2 - 1}.
// ---------------------------------------------------------------------------

std::pair<int, int> shafarevich_bound(std::pair<int, int> signature, int p);

}  // namespace pgsieve

#endif  // PGSIEVE_PGEN_HPP
