#include "pgsieve/artin.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <stdexcept>

#include "pgsieve/fplinalg.hpp"

namespace pgsieve {

namespace {

long long pow_ll(long long b, int e) {
  long long r = 1;
  while (e-- > 0) r *= b;
  return r;
}

int order_log(const PcPresentation& g, const Element& e) {
  long long o = g.element_order(e);
  int log = 0;
  while (o > 1) {
    o /= g.p;
    ++log;
  }
  return log;
}

// Deterministic decomposition of an abelian presentation into independent
// cyclic factors of weakly decreasing order: the first element of maximal
// order in enumeration order generates a direct summand; the remaining
// factors are found in the quotient and their lifts are adjusted to keep
// their order (c^{p^k} lands in <b> with exponent divisible by p^k, so a
// power of b cancels it).
void abelian_basis(const PcPresentation& a, std::vector<Element>* basis,
                   std::vector<int>* logs) {
  basis->clear();
  logs->clear();
  if (a.n == 0) return;

  Element best = a.identity();
  long long best_order = 1;
  Element e = a.identity();
  for (;;) {
    int k = 0;
    while (k < a.n && ++e.exponents[k] == a.p) e.exponents[k++] = 0;
    if (k == a.n) break;
    long long o = a.element_order(e);
    if (o > best_order) {
      best_order = o;
      best = e;
    }
  }
  int log1 = order_log(a, best);

  Subgroup head = subgroup_closure(a, {best});
  if (head.size_log() == a.n) {
    basis->push_back(best);
    logs->push_back(log1);
    return;
  }

  QuotientMap qm = quotient(a, head);
  std::vector<Element> rest;
  std::vector<int> rest_logs;
  abelian_basis(qm.group, &rest, &rest_logs);
  basis->push_back(best);
  logs->push_back(log1);
  for (size_t i = 0; i < rest.size(); ++i) {
    Element c = qm.lift(rest[i]);
    int k = rest_logs[i];
    Element cp = a.power(c, pow_ll(a.p, k));
    long long t = 0;
    while (!(a.power(best, t) == cp)) {
      ++t;
      if (t >= best_order)
        throw std::logic_error("abelian basis: lift power left the head factor");
    }
    if (t % pow_ll(a.p, k) != 0)
      throw std::logic_error("abelian basis: head exponent not divisible");
    c = a.multiply(c, a.power(best, -(t / pow_ll(a.p, k))));
    if (a.element_order(c) != pow_ll(a.p, k))
      throw std::logic_error("abelian basis: adjusted lift changed order");
    basis->push_back(c);
    logs->push_back(k);
  }
}

std::string subgroup_descriptor(const Subgroup& s) {
  std::string out = "sub{";
  for (size_t k = 0; k < s.igs.size(); ++k) {
    if (k) out += ";";
    for (uint8_t x : s.igs[k].exponents) out += static_cast<char>('0' + x);
  }
  out += "}";
  return out;
}

Element element_from_igs(const Subgroup& s, const std::vector<uint8_t>& exps) {
  const PcPresentation& g = *s.parent;
  Element e = g.identity();
  for (size_t k = 0; k < s.igs.size(); ++k)
    if (exps[k]) e = g.multiply(e, g.power(s.igs[k], exps[k]));
  return e;
}

// matrix[i] = target coordinates of the transfer image of the i-th source
// basis representative.
std::vector<std::vector<int>> transfer_matrix(const PcPresentation& g,
                                              const AbelianQuotient& src,
                                              const Subgroup& s,
                                              const AbelianQuotient& tgt) {
  std::vector<std::vector<int>> matrix;
  matrix.reserve(src.rank());
  for (int i = 0; i < src.rank(); ++i) {
    std::vector<int> unit(src.rank(), 0);
    unit[i] = 1;
    Element image = transfer_element(g, s, src.representative(unit));
    matrix.push_back(tgt.coordinates(image));
  }
  // The map respects generator orders: p^{source order} kills every image.
  for (int i = 0; i < src.rank(); ++i)
    for (int j = 0; j < tgt.rank(); ++j)
      if (pow_ll(g.p, src.type().logs[i]) * matrix[i][j] %
          pow_ll(g.p, tgt.type().logs[j]))
        throw std::logic_error("transfer: images do not respect orders");
  return matrix;
}

// Kernel of the transfer as a subgroup of g, from the coordinate matrix:
// scan all source coordinate tuples and close over the vanishing ones.
Subgroup kernel_from_matrix(const PcPresentation& g, const AbelianQuotient& src,
                            const AbelianQuotient& tgt,
                            const std::vector<std::vector<int>>& matrix,
                            const Subgroup& gprime) {
  std::vector<Element> gens = gprime.igs;
  std::vector<int> c(src.rank(), 0);
  for (;;) {
    bool in_kernel = true;
    for (int j = 0; j < tgt.rank() && in_kernel; ++j) {
      long long acc = 0;
      for (int i = 0; i < src.rank(); ++i)
        acc += static_cast<long long>(c[i]) * matrix[i][j];
      if (acc % pow_ll(g.p, tgt.type().logs[j])) in_kernel = false;
    }
    if (in_kernel) gens.push_back(src.representative(c));
    int i = 0;
    while (i < src.rank() &&
           ++c[i] == pow_ll(g.p, src.type().logs[i]))
      c[i++] = 0;
    if (i == src.rank()) break;
  }
  return subgroup_closure(g, gens);
}

KappaEntry kappa_entry(const NormalLattice& lat, const Subgroup& kernel) {
  KappaEntry entry;
  entry.label = label_of(lat, kernel);
  entry.descriptor =
      entry.label ? entry.label->str() : subgroup_descriptor(kernel);
  return entry;
}

// Pattern layers run J11..J43 with J0 last, unlike the lattice's layer
// listing, which leads with J0.
std::vector<LatticeLabel> pattern_layer(const NormalLattice& lat, int l) {
  std::vector<LatticeLabel> order(lat.layers[l].begin(), lat.layers[l].end());
  if (l == 2) {
    std::rotate(order.begin(), order.begin() + 1, order.end());
  }
  return order;
}

}  // namespace

AbelianQuotient::AbelianQuotient(const Subgroup& s)
    : sub_(s),
      induced_(std::make_unique<PcPresentation>(induced_presentation(s))) {
  mod_derived_ = quotient(*induced_, derived_subgroup(*induced_));
  const PcPresentation& a = mod_derived_.group;

  std::vector<int> logs;
  abelian_basis(a, &basis_, &logs);
  type_.logs = logs;

  // Build the full coordinate table; covering the quotient exactly once
  // certifies that the factors are independent and exhaustive.
  std::vector<int> c(basis_.size(), 0);
  for (;;) {
    Element e = a.identity();
    for (size_t i = 0; i < basis_.size(); ++i)
      if (c[i]) e = a.multiply(e, a.power(basis_[i], c[i]));
    if (!coords_.emplace(e, c).second)
      throw std::logic_error("abelianization basis is not independent");
    size_t i = 0;
    while (i < basis_.size() && ++c[i] == pow_ll(a.p, logs[i])) c[i++] = 0;
    if (i == basis_.size()) break;
  }
  if (coords_.size() != static_cast<size_t>(pow_ll(a.p, a.n)))
    throw std::logic_error("abelianization basis does not span");
}

std::vector<int> AbelianQuotient::coordinates(const Element& e) const {
  std::vector<int> igs = igs_coordinates(sub_, e);
  Element in_sub;
  in_sub.exponents.assign(igs.begin(), igs.end());
  return coords_.at(mod_derived_.project(in_sub));
}

Element AbelianQuotient::representative(const std::vector<int>& coords) const {
  const PcPresentation& a = mod_derived_.group;
  Element z = a.identity();
  for (size_t i = 0; i < basis_.size(); ++i)
    if (coords[i]) z = a.multiply(z, a.power(basis_[i], coords[i]));
  return element_from_igs(sub_, mod_derived_.lift(z).exponents);
}

std::vector<Element> left_coset_reps(const Subgroup& h, const Subgroup& s) {
  const PcPresentation& g = *h.parent;
  for (const Element& e : s.igs)
    if (!h.contains(e))
      throw std::invalid_argument("left_coset_reps: s is not a subgroup of h");

  std::vector<Element> reps;
  if (h.size_log() == g.n) {
    // Whole group: the sift residues are exactly the vectors vanishing at
    // the leading indices of s's igs, no arithmetic needed.
    std::vector<bool> is_lead(g.n, false);
    for (const Element& m : s.igs) is_lead[m.leading_index()] = true;
    std::vector<int> free_pos;
    for (int i = 0; i < g.n; ++i)
      if (!is_lead[i]) free_pos.push_back(i);
    Element e = g.identity();
    for (;;) {
      reps.push_back(e);
      size_t k = 0;
      while (k < free_pos.size() && ++e.exponents[free_pos[k]] == g.p)
        e.exponents[free_pos[k++]] = 0;
      if (k == free_pos.size()) break;
    }
    std::sort(reps.begin(), reps.end());
    return reps;
  }

  std::set<Element> seen;
  std::vector<uint8_t> exps(h.igs.size(), 0);
  for (;;) {
    seen.insert(sift(s, element_from_igs(h, exps)));
    size_t k = 0;
    while (k < exps.size() && ++exps[k] == g.p) exps[k++] = 0;
    if (k == exps.size()) break;
  }
  reps.assign(seen.begin(), seen.end());
  return reps;
}

Element transfer_element_in(const Subgroup& h, const Subgroup& s,
                            const Element& x) {
  const PcPresentation& g = *h.parent;
  if (!h.contains(x))
    throw std::invalid_argument("transfer: x is not a member of h");
  Element product = g.identity();
  for (const Element& r : left_coset_reps(h, s)) {
    Element moved = g.multiply(x, r);
    Element term = g.multiply(g.inverse(sift(s, moved)), moved);
    product = g.multiply(product, term);
  }
  return product;
}

Element transfer_element(const PcPresentation& g, const Subgroup& s,
                         const Element& x) {
  return transfer_element_in(full_subgroup(g), s, x);
}

Element transfer_element_with(const Subgroup& h, const Subgroup& s,
                              const Element& x,
                              const std::vector<Element>& transversal) {
  const PcPresentation& g = *h.parent;
  if (!h.contains(x))
    throw std::invalid_argument("transfer: x is not a member of h");
  std::map<Element, size_t> index_of;
  for (size_t i = 0; i < transversal.size(); ++i) {
    if (!h.contains(transversal[i]))
      throw std::invalid_argument("transfer: transversal leaves h");
    if (!index_of.emplace(sift(s, transversal[i]), i).second)
      throw std::invalid_argument("transfer: transversal repeats a coset");
  }
  if (transversal.size() * s.size() != h.size())
    throw std::invalid_argument("transfer: transversal misses cosets");

  Element product = g.identity();
  for (const Element& u : transversal) {
    Element moved = g.multiply(x, u);
    const Element& target = transversal[index_of.at(sift(s, moved))];
    Element term = g.multiply(g.inverse(target), moved);
    product = g.multiply(product, term);
  }
  return product;
}

TransferMap transfer(const PcPresentation& g, const Subgroup& s) {
  AbelianQuotient src(full_subgroup(g));
  AbelianQuotient tgt(s);
  TransferMap tm;
  tm.source_quotient = src.type();
  tm.target_quotient = tgt.type();
  tm.matrix = transfer_matrix(g, src, s, tgt);
  return tm;
}

Subgroup transfer_kernel(const PcPresentation& g, const Subgroup& s) {
  AbelianQuotient src(full_subgroup(g));
  AbelianQuotient tgt(s);
  return kernel_from_matrix(g, src, tgt, transfer_matrix(g, src, s, tgt),
                            derived_subgroup(g));
}

ArtinPattern artin_pattern(const NormalLattice& lat) {
  const PcPresentation& g = *lat.group;
  AbelianQuotient src(full_subgroup(g));
  Subgroup gprime = derived_subgroup(g);

  ArtinPattern ap;
  for (int l = 0; l <= 4; ++l) {
    for (const LatticeLabel& label : pattern_layer(lat, l)) {
      const Subgroup& member = lat.member(label);
      ap.tau[l].push_back(abelian_type_invariants(member));
      AbelianQuotient tgt(member);
      Subgroup kernel = kernel_from_matrix(
          g, src, tgt, transfer_matrix(g, src, member, tgt), gprime);
      ap.kappa[l].push_back(kappa_entry(lat, kernel));
    }
  }
  return ap;
}

ArtinPattern artin_pattern(const PcPresentation& g) {
  return artin_pattern(build_lattice(g));
}

std::string to_json(const ArtinPattern& ap) {
  std::string out = "{\"tau\":[";
  for (int l = 0; l <= 4; ++l) {
    if (l) out += ",";
    out += "[";
    for (size_t i = 0; i < ap.tau[l].size(); ++i) {
      if (i) out += ",";
      out += "\"" + ap.tau[l][i].str() + "\"";
    }
    out += "]";
  }
  out += "],\"kappa\":[";
  for (int l = 0; l <= 4; ++l) {
    if (l) out += ",";
    out += "[";
    for (size_t i = 0; i < ap.kappa[l].size(); ++i) {
      if (i) out += ",";
      out += "\"" + ap.kappa[l][i].descriptor + "\"";
    }
    out += "]";
  }
  out += "]}";
  return out;
}

SecondOrderTau second_order_tau(const NormalLattice& lat) {
  SecondOrderTau result;
  for (const LatticeLabel& label : pattern_layer(lat, 2)) {
    PcPresentation jp = induced_presentation(lat.member(label));
    Subgroup phi = frattini_subgroup(jp);
    QuotientMap qf = quotient(jp, phi);
    std::vector<AbelianTypeInvariants> entry;
    for (const FpSubspace& u : enumerate_subspaces(jp.p, qf.group.n, 1)) {
      std::vector<Element> gens = phi.igs;
      for (int r = 0; r < u.dim(); ++r) {
        Element q;
        q.exponents = u.basis.row(r);
        gens.push_back(qf.lift(q));
      }
      Subgroup maximal = subgroup_closure(jp, gens);
      if (maximal.size_log() != jp.n - 1)
        throw std::logic_error("second_order_tau: preimage is not maximal");
      entry.push_back(abelian_type_invariants(maximal));
    }
    std::sort(entry.begin(), entry.end());
    result.entries.push_back(std::move(entry));
  }
  return result;
}

SecondOrderTau second_order_tau(const PcPresentation& g) {
  return second_order_tau(build_lattice(g));
}

}  // namespace pgsieve
