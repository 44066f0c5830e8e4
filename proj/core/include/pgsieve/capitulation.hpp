// Capitulation analysis over the labeled normal lattice.
//
// The transfer-kernel map of a group with derived quotient C9 x C9 sends
// every lattice member to another lattice member.  This module checks the
// structural laws that map obeys and classifies its shape:
//
//  * the arithmetical axioms: no proper subgroup has kernel G', and the
//    transfer to G' kills everything;
//  * the inclusion laws: kernels grow along descending chains, i.e.
//    ker(H_i) <= ker(J_ik) <= ker(K_i) and ker(H_i) <= ker(J0) <= ker(K_j),
//    with ker(G) = G' and ker(G') = G at the ends;
//  * harmonically balanced capitulation (HBC): ker(J0) = J0 and there are
//    permutations lambda in S4 and rho_1..rho_4 in S3 with
//      ker(H_i) = K_{lambda(i)},
//      ker(J_ik) = J_{lambda(i), rho_i(k)},
//      ker(K_i) = H_{lambda(i)};
//  * two degenerate shapes: bi-polarized (kappa_1 takes exactly two K
//    values, ker(J0) = J0) and uni-polarized (kappa_1 constant with an
//    exceptional J_ik-valued ker(J0)); everything else is Other.
//
// Permutations use the convention that the cycle (abc) maps a -> b -> c -> a;
// lambda acts on the family index 1..4 and rho_i on the inner index 1..3.
#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pgsieve/artin.hpp"

namespace pgsieve {

// A permutation of {1..n} stored by its images: image[i-1] = pi(i).
struct Perm {
  std::vector<int> image;

  bool operator==(const Perm &) const = default;
};

Perm perm_identity(int n);
bool is_permutation(const Perm &pi, int n);
Perm perm_compose(const Perm &f, const Perm &g);  // (f o g)(i) = f(g(i))
Perm perm_inverse(const Perm &pi);

// Disjoint-cycle string with fixed points omitted: "(1432)", "(14)(23)",
// identity rendered as "1".  Cycles start at their smallest member.
std::string cycle_string(const Perm &pi);

// Cycle lengths including fixed points, sorted descending (a partition of n).
std::vector<int> cycle_type(const Perm &pi);

// Abstract containment between lattice labels: true iff the member named a
// is contained in the member named b in every lattice with these labels.
// (The lattice is rigid: G' <= K_i <= J_ik, J0 <= H_j <= G with K_i below
// exactly the J_i* of its own family and J0 below every H_j.)
bool label_leq(const LatticeLabel &a, const LatticeLabel &b);

enum class Scenario : uint8_t { HBC, BiPolarized, UniPolarized, Other };

std::string scenario_name(Scenario s);

struct CapitulationReport {
  Scenario scenario = Scenario::Other;
  std::optional<Perm> lambda;             // present iff scenario == HBC
  std::optional<std::array<Perm, 4>> rho; // present iff scenario == HBC
  bool arithmetical = false;
  std::vector<std::string> violations;    // inclusion-law breaches

  bool operator==(const CapitulationReport &) const = default;
};

// True iff the kernel map satisfies both arithmetical axioms: no kernel of
// a proper member equals G', and the kernel at G' is all of G.
bool check_arithmetical(const ArtinPattern &pattern);

// All breaches of the inclusion laws (empty for any actual group).
std::vector<std::string> check_inclusions(const ArtinPattern &pattern);

// Total classification; extracts and verifies (lambda; rho_1..rho_4) when
// the pattern is harmonically balanced.
CapitulationReport classify(const ArtinPattern &pattern);

// The unique kernel map implied by (lambda; rho_1..rho_4), returned as a
// synthetic pattern (the tau layers are placeholders of the right shape).
// Round-trips with classify.  Throws std::invalid_argument on non-perms.
ArtinPattern hbc_of_permutation_data(const Perm &lambda,
                                     const std::array<Perm, 4> &rho);

// {"scenario":"HBC","lambda":"(142)","rho":["(23)","1","1","(13)"],
//  "arithmetical":true} with lambda/rho present iff HBC and a trailing
// "violations" array only when nonempty.  Byte-stable.
std::string to_json(const CapitulationReport &report);

}  // namespace pgsieve
