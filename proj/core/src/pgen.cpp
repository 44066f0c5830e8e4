// The p-group generation step: p-covering groups, induced actions on the
// multiplicator, certified automorphism-group bookkeeping, orbit/stabilizer
// enumeration of allowable subgroups, and descendant construction.

#include "pgsieve/pgen.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace pgsieve {

namespace {

// ----- small helpers ------------------------------------------------------

int count_minimal(const PcPresentation& g) {
  int d = 0;
  for (int i = 0; i < g.n; ++i)
    if (g.weights[i] == 1) ++d;
  return d;
}

int max_weight(const PcPresentation& g) {
  int c = 0;
  for (int i = 0; i < g.n; ++i) c = std::max(c, g.weights[i]);
  return c;
}

void require_standard_form(const PcPresentation& g, const char* who) {
  if (g.n <= 0)
    throw std::invalid_argument(std::string(who) + ": empty presentation");
  if (g.weights[0] != 1)
    throw std::invalid_argument(std::string(who) + ": first generator not minimal");
  for (int i = 1; i < g.n; ++i)
    if (g.weights[i] < g.weights[i - 1])
      throw std::invalid_argument(std::string(who) +
                                  ": generator weights not sorted");
  for (int i = 0; i < g.n; ++i)
    if (g.weights[i] > 1 && !g.definitions[i])
      throw std::invalid_argument(std::string(who) +
                                  ": non-minimal generator lacks a definition");
}

// Canonical lift of an element of the quotient-by-the-new-block into the
// larger presentation: same exponents, zero on the appended generators.
Element lift_element(const PcPresentation& big, const Element& e) {
  Element r = big.identity();
  std::copy(e.exponents.begin(), e.exponents.end(), r.exponents.begin());
  return r;
}

// Evaluate a normal word (exponent-vector form) at the given images.
Element eval_word_at(const PcPresentation& h, const std::vector<uint8_t>& w,
                     const std::vector<Element>& images) {
  Element acc = h.identity();
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k]) acc = h.multiply(acc, h.power(images[k], w[k]));
  return acc;
}

bool images_are_generators(const PcPresentation& g,
                           const std::vector<Element>& images) {
  for (int i = 0; i < g.n; ++i)
    if (!(images[i] == g.generator(i))) return false;
  return true;
}

FpMatrix scalar_matrix(int p, int dim, int value) {
  FpMatrix m = FpMatrix::identity(p, dim);
  for (int i = 0; i < dim; ++i) m.set(i, i, value);
  return m;
}

std::string matrix_key(const FpMatrix& m) {
  std::string s;
  s.reserve(m.entries.size() + 4);
  s.push_back(static_cast<char>(m.rows));
  s.push_back(static_cast<char>(m.cols));
  s.append(m.entries.begin(), m.entries.end());
  return s;
}

}  // namespace

// ----- automorphism basics -------------------------------------------------

Automorphism aut_identity(const PcPresentation& g) {
  Automorphism a;
  a.images.reserve(g.n);
  for (int i = 0; i < g.n; ++i) a.images.push_back(g.generator(i));
  a.inverse_images = a.images;
  return a;
}

Element aut_apply(const PcPresentation& g, const Automorphism& a,
                  const Element& x) {
  Element acc = g.identity();
  for (int i = 0; i < g.n; ++i)
    if (x.exponents[i])
      acc = g.multiply(acc, g.power(a.images[i], x.exponents[i]));
  return acc;
}

Element aut_apply_inverse(const PcPresentation& g, const Automorphism& a,
                          const Element& x) {
  Element acc = g.identity();
  for (int i = 0; i < g.n; ++i)
    if (x.exponents[i])
      acc = g.multiply(acc, g.power(a.inverse_images[i], x.exponents[i]));
  return acc;
}

Automorphism aut_compose(const PcPresentation& g, const Automorphism& a,
                         const Automorphism& b) {
  Automorphism r;
  r.images.reserve(g.n);
  r.inverse_images.reserve(g.n);
  for (int i = 0; i < g.n; ++i) r.images.push_back(aut_apply(g, a, b.images[i]));
  for (int i = 0; i < g.n; ++i)
    r.inverse_images.push_back(aut_apply_inverse(g, b, a.inverse_images[i]));
  return r;
}

static Automorphism aut_flip(const Automorphism& a) {
  return Automorphism{a.inverse_images, a.images};
}

bool aut_verify(const PcPresentation& g, const std::vector<Element>& images) {
  if (static_cast<int>(images.size()) != g.n) return false;
  const int p = g.p;
  for (int i = 0; i < g.n; ++i) {
    Element lhs = g.power(images[i], p);
    Element rhs = eval_word_at(g, g.power_words[i], images);
    if (!(lhs == rhs)) return false;
  }
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      Element lhs = g.commutator(images[j], images[i]);
      Element rhs = eval_word_at(g, g.comm_word(j, i), images);
      if (!(lhs == rhs)) return false;
    }
  // The images must generate modulo the Frattini subgroup: in standard form
  // the minimal generators are the weight-1 ones and every element's
  // Frattini-quotient coordinates are its exponents at those positions.
  int d = count_minimal(g);
  FpMatrix v(p, d, d);
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row) v.set(row, col, images[col].exponents[row]);
  return rref(v).second == d;
}

std::vector<Element> aut_derive_images(const PcPresentation& g,
                                       const std::vector<Element>& minimal_images) {
  require_standard_form(g, "aut_derive_images");
  const int d = count_minimal(g);
  if (static_cast<int>(minimal_images.size()) != d)
    throw std::invalid_argument("aut_derive_images: wrong number of images");
  std::vector<Element> images(minimal_images);
  images.resize(g.n, g.identity());
  for (int k = d; k < g.n; ++k) {
    const auto& def = *g.definitions[k];
    const std::vector<uint8_t>& w =
        def.kind == PcPresentation::Definition::power
            ? g.power_words[def.i]
            : g.comm_word(def.j, def.i);
    // The definition word reads (prefix on generators < k) * g_k.
    Element prefix = g.identity();
    for (int l = 0; l < k; ++l)
      if (l < static_cast<int>(w.size()) && w[l])
        prefix = g.multiply(prefix, g.power(images[l], w[l]));
    Element lhs = def.kind == PcPresentation::Definition::power
                      ? g.power(images[def.i], g.p)
                      : g.commutator(images[def.j], images[def.i]);
    images[k] = g.multiply(g.inverse(prefix), lhs);
  }
  return images;
}

std::vector<Element> aut_invert_images(const PcPresentation& g,
                                       const std::vector<Element>& images) {
  if (!aut_verify(g, images))
    throw std::invalid_argument("aut_invert_images: not an automorphism");
  const int p = g.p;
  const int c = max_weight(g);
  // Positions per weight layer.
  std::vector<std::vector<int>> layer(c + 1);
  for (int i = 0; i < g.n; ++i) layer[g.weights[i]].push_back(i);
  // Inverse of the induced matrix on each layer P_k / P_{k+1}.
  std::vector<FpMatrix> layer_inv(c + 1);
  for (int k = 1; k <= c; ++k) {
    const auto& pos = layer[k];
    int dk = static_cast<int>(pos.size());
    FpMatrix a(p, dk, dk);
    for (int col = 0; col < dk; ++col) {
      const Element& img = images[pos[col]];
      for (int t = 0; t < dk; ++t) a.set(t, col, img.exponents[pos[t]]);
    }
    auto inv = mat_inverse(a);
    if (!inv)
      throw std::logic_error("aut_invert_images: layer action not invertible");
    layer_inv[k] = *inv;
  }
  Automorphism fwd{images, {}};
  std::vector<Element> result(g.n);
  for (int t = 0; t < g.n; ++t) {
    Element x = g.identity();
    Element val = g.identity();  // = fwd(x)
    Element target = g.generator(t);
    for (int k = 1; k <= c; ++k) {
      Element r = g.multiply(g.inverse(val), target);
      const auto& pos = layer[k];
      std::vector<uint8_t> rv(pos.size());
      for (size_t m = 0; m < pos.size(); ++m) rv[m] = r.exponents[pos[m]];
      std::vector<uint8_t> v = mat_apply(layer_inv[k], rv);
      Element delta = g.identity();
      for (size_t m = 0; m < pos.size(); ++m)
        if (v[m]) delta = g.multiply(delta, g.power(g.generator(pos[m]), v[m]));
      x = g.multiply(x, delta);
      val = g.multiply(val, aut_apply(g, fwd, delta));
    }
    if (!(val == target))
      throw std::logic_error("aut_invert_images: layered solve failed");
    result[t] = x;
  }
  return result;
}

Automorphism aut_from_images(const PcPresentation& g,
                             std::vector<Element> images) {
  std::vector<Element> inv = aut_invert_images(g, images);
  return Automorphism{std::move(images), std::move(inv)};
}

FpMatrix aut_matrix_on_frattini_quotient(const PcPresentation& g,
                                         const Automorphism& a) {
  const int d = count_minimal(g);
  FpMatrix m(g.p, d, d);
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row)
      m.set(row, col, a.images[col].exponents[row]);
  return m;
}

// ----- the p-covering group ------------------------------------------------

namespace {

std::vector<CoverRelation> enumerate_relations(const PcPresentation& g) {
  std::vector<CoverRelation> rels;
  // Which relations serve as generator definitions.
  std::vector<bool> power_def(g.n, false);
  std::vector<bool> comm_def(g.comm_words.size(), false);
  for (int k = 0; k < g.n; ++k)
    if (g.definitions[k]) {
      const auto& def = *g.definitions[k];
      if (def.kind == PcPresentation::Definition::power)
        power_def[def.i] = true;
      else
        comm_def[PcPresentation::comm_index(def.j, def.i)] = true;
    }
  for (int i = 0; i < g.n; ++i) {
    CoverRelation r;
    r.kind = PcPresentation::Definition::power;
    r.i = i;
    r.is_definition = power_def[i];
    rels.push_back(r);
  }
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      CoverRelation r;
      r.kind = PcPresentation::Definition::commutator;
      r.i = i;
      r.j = j;
      r.is_definition = comm_def[PcPresentation::comm_index(j, i)];
      rels.push_back(r);
    }
  return rels;
}

const std::vector<uint8_t>& relation_word(const PcPresentation& g,
                                          const CoverRelation& r) {
  return r.kind == PcPresentation::Definition::power
             ? g.power_words[r.i]
             : g.comm_word(r.j, r.i);
}

Element relation_lhs_at(const PcPresentation& h, const CoverRelation& r,
                        const std::vector<Element>& images) {
  return r.kind == PcPresentation::Definition::power
             ? h.power(images[r.i], h.p)
             : h.commutator(images[r.j], images[r.i]);
}

}  // namespace

PCoverData p_cover(const PcPresentation& g) {
  require_standard_form(g, "p_cover");
  const int n = g.n;
  const int p = g.p;
  const int c = max_weight(g);

  std::vector<CoverRelation> rels = enumerate_relations(g);
  std::vector<int> tail_of(rels.size(), -1);
  int q = 0;
  for (size_t r = 0; r < rels.size(); ++r)
    if (!rels[r].is_definition) tail_of[r] = q++;

  // The tailed (pre-consistency) presentation: one central order-p tail on
  // every non-definition relation.
  PcPresentation c0;
  c0.p = p;
  c0.n = n + q;
  c0.power_words.assign(n + q, {});
  c0.comm_words.assign(static_cast<size_t>(n + q) * (n + q - 1) / 2, {});
  {
    size_t r = 0;
    for (int i = 0; i < n; ++i, ++r) {
      std::vector<uint8_t> w(n + q, 0);
      const auto& src = g.power_words[i];
      std::copy(src.begin(), src.end(), w.begin());
      if (tail_of[r] >= 0) w[n + tail_of[r]] = 1;
      bool nz = std::any_of(w.begin(), w.end(), [](uint8_t e) { return e; });
      if (nz) c0.power_words[i] = std::move(w);
    }
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i, ++r) {
        std::vector<uint8_t> w(n + q, 0);
        const auto& src = g.comm_word(j, i);
        std::copy(src.begin(), src.end(), w.begin());
        if (tail_of[r] >= 0) w[n + tail_of[r]] = 1;
        bool nz = std::any_of(w.begin(), w.end(), [](uint8_t e) { return e; });
        if (nz) c0.comm_words[PcPresentation::comm_index(j, i)] = std::move(w);
      }
  }
  c0.weights = g.weights;
  c0.weights.resize(n + q, c + 1);
  c0.finalize();

  // Overlap consistency equations among the original generators.  The tails
  // are central of order p with trivial relations, so overlaps involving
  // them hold syntactically.
  std::vector<std::vector<uint8_t>> rows;
  auto add_eq = [&](const Element& lhs, const Element& rhs) {
    for (int k = 0; k < n; ++k)
      if (lhs.exponents[k] != rhs.exponents[k])
        throw std::logic_error("p_cover: overlap disagrees on base generators");
    std::vector<uint8_t> row(q, 0);
    bool nz = false;
    for (int t = 0; t < q; ++t) {
      int dlt = (lhs.exponents[n + t] - rhs.exponents[n + t] + p) % p;
      row[t] = static_cast<uint8_t>(dlt);
      nz |= dlt != 0;
    }
    if (nz) rows.push_back(std::move(row));
  };
  for (int k = 2; k < n; ++k)
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Element gk = c0.generator(k), gj = c0.generator(j), gi = c0.generator(i);
        add_eq(c0.multiply(gk, c0.multiply(gj, gi)),
               c0.multiply(c0.multiply(gk, gj), gi));
      }
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Element gj = c0.generator(j), gi = c0.generator(i);
      Element pj = c0.collect_word({{j, p}});
      add_eq(c0.multiply(pj, gi),
             c0.multiply(c0.collect_word({{j, p - 1}}), c0.multiply(gj, gi)));
      Element pi = c0.collect_word({{i, p}});
      add_eq(c0.multiply(gj, pi),
             c0.multiply(c0.multiply(gj, gi), c0.collect_word({{i, p - 1}})));
    }
  for (int i = 0; i < n; ++i) {
    Element gi = c0.generator(i);
    Element pi = c0.collect_word({{i, p}});
    add_eq(c0.multiply(pi, gi), c0.multiply(gi, pi));
  }

  // Solve for the eliminated (pivot) tails.
  int rank = 0;
  FpMatrix reduced(p, 0, q);
  if (!rows.empty()) {
    FpMatrix eq(p, static_cast<int>(rows.size()), q);
    for (size_t r = 0; r < rows.size(); ++r)
      for (int t = 0; t < q; ++t) eq.set(static_cast<int>(r), t, rows[r][t]);
    auto rr = rref(eq);
    reduced = rr.first;
    rank = rr.second;
  }
  const int mu = q - rank;

  std::vector<int> col_to_surv(q, -1);
  {
    std::vector<bool> is_pivot(q, false);
    for (int r = 0; r < rank; ++r)
      for (int t = 0; t < q; ++t)
        if (reduced.at(r, t)) {
          is_pivot[t] = true;
          break;
        }
    int l = 0;
    for (int t = 0; t < q; ++t)
      if (!is_pivot[t]) col_to_surv[t] = l++;
  }
  // Expansion of each tail over the surviving ones.
  std::vector<std::vector<uint8_t>> expand(q, std::vector<uint8_t>(mu, 0));
  for (int t = 0; t < q; ++t)
    if (col_to_surv[t] >= 0) expand[t][col_to_surv[t]] = 1;
  for (int r = 0; r < rank; ++r) {
    int piv = -1;
    for (int t = 0; t < q; ++t)
      if (reduced.at(r, t)) {
        piv = t;
        break;
      }
    for (int s = piv + 1; s < q; ++s)
      if (reduced.at(r, s)) {
        // Reduced echelon form: every other nonzero entry sits in a
        // surviving column.
        if (col_to_surv[s] < 0)
          throw std::logic_error("p_cover: non-reduced echelon form");
        expand[piv][col_to_surv[s]] =
            static_cast<uint8_t>((p - reduced.at(r, s)) % p);
      }
  }

  // The consistent cover presentation on n + mu generators.
  PcPresentation cv;
  cv.p = p;
  cv.n = n + mu;
  cv.power_words.assign(n + mu, {});
  cv.comm_words.assign(static_cast<size_t>(n + mu) * (n + mu - 1) / 2, {});
  auto final_word = [&](const std::vector<uint8_t>& src,
                        int tail) -> std::vector<uint8_t> {
    std::vector<uint8_t> w(n + mu, 0);
    std::copy(src.begin(), src.end(), w.begin());
    if (tail >= 0)
      for (int l = 0; l < mu; ++l) w[n + l] = expand[tail][l];
    bool nz = std::any_of(w.begin(), w.end(), [](uint8_t e) { return e; });
    if (!nz) return {};
    return w;
  };
  {
    size_t r = 0;
    for (int i = 0; i < n; ++i, ++r)
      cv.power_words[i] = final_word(g.power_words[i], tail_of[r]);
    for (int j = 1; j < n; ++j)
      for (int i = 0; i < j; ++i, ++r)
        cv.comm_words[PcPresentation::comm_index(j, i)] =
            final_word(g.comm_word(j, i), tail_of[r]);
  }
  cv.weights = g.weights;
  cv.weights.resize(n + mu, c + 1);
  cv.finalize();
  cv.weights = weights_from_series(cv);
  scan_definitions(cv);

  // Tail values per relation.
  for (size_t r = 0; r < rels.size(); ++r)
    rels[r].tail = tail_of[r] >= 0 ? expand[tail_of[r]]
                                   : std::vector<uint8_t>(mu, 0);

  // Nucleus N = P_{c+1} of the cover, inside the tail block.
  FpSubspace nucleus = FpSubspace::zero(p, mu);
  {
    auto series = lower_exponent_p_series(cv);
    if (c < static_cast<int>(series.size())) {
      const Subgroup& term = series[c];
      std::vector<std::vector<int>> data;
      for (const Element& u : term.igs) {
        for (int k = 0; k < n; ++k)
          if (u.exponents[k])
            throw std::logic_error("p_cover: nucleus leaves the tail block");
        std::vector<int> row(mu);
        for (int l = 0; l < mu; ++l) row[l] = u.exponents[n + l];
        data.push_back(std::move(row));
      }
      if (!data.empty())
        nucleus = FpSubspace::span(FpMatrix::from_rows(p, data));
    }
  }

  PCoverData out;
  out.cover = std::move(cv);
  out.multiplicator = FpSubspace::full(p, mu);
  out.nucleus = std::move(nucleus);
  out.generator_map.reserve(n);
  for (int i = 0; i < n; ++i) out.generator_map.push_back(out.cover.generator(i));
  out.relations = std::move(rels);
  out.tail_relation.assign(mu, -1);
  for (size_t r = 0; r < out.relations.size(); ++r)
    if (tail_of[r] >= 0 && col_to_surv[tail_of[r]] >= 0)
      out.tail_relation[col_to_surv[tail_of[r]]] = static_cast<int>(r);
  out.n = n;
  out.mu = mu;
  return out;
}

int relation_rank(const PcPresentation& g) { return p_cover(g).mu; }

int generator_rank(const PcPresentation& g) {
  return minimal_generator_count(g);
}

bool is_schur(const PcPresentation& g) {
  return relation_rank(g) == generator_rank(g);
}

// ----- induced action on the multiplicator ---------------------------------

namespace {

// Shared engine for the "homomorphic lift" linear system.  Given a block of
// central new generators (the tail block of the cover, or the new layer of a
// child), an automorphism alpha of the base group, and the per-relation
// values lambda_r of the relations inside that block, solve for central
// corrections z_i and the induced matrix B on the block:
//     sum_k w_r[k] z_k + B lambda_r = discrepancy_r(canonical lifts).
// The B part of the solution is unique; z need not be.
FpMatrix solve_block_action(const PcPresentation& base,
                            const PcPresentation& big,
                            const std::vector<CoverRelation>& rels,
                            const std::vector<std::vector<uint8_t>>& lambda,
                            const std::vector<Element>& base_images,
                            std::vector<Element>* corrections) {
  const int n = base.n;
  const int p = base.p;
  const int s = big.n - n;
  std::vector<Element> limg(n);
  for (int i = 0; i < n; ++i) limg[i] = lift_element(big, base_images[i]);

  const int rel_count = static_cast<int>(rels.size());
  FpMatrix sys(p, rel_count * s, n * s + s * s);
  std::vector<uint8_t> rhs(static_cast<size_t>(rel_count) * s, 0);
  for (int r = 0; r < rel_count; ++r) {
    const std::vector<uint8_t>& w = relation_word(base, rels[r]);
    Element w_val = eval_word_at(big, w, limg);
    Element lhs_val = relation_lhs_at(big, rels[r], limg);
    Element m = big.multiply(big.inverse(w_val), lhs_val);
    for (int k = 0; k < n; ++k)
      if (m.exponents[k])
        throw std::logic_error("lift system: discrepancy leaves the new block");
    for (int out = 0; out < s; ++out) {
      int row = r * s + out;
      for (int k = 0; k < n; ++k)
        if (k < static_cast<int>(w.size()) && w[k])
          sys.set(row, k * s + out, w[k]);
      for (int l = 0; l < s; ++l)
        if (lambda[r][l]) sys.set(row, n * s + out * s + l, lambda[r][l]);
      rhs[row] = m.exponents[n + out];
    }
  }
  auto x = solve(sys, rhs);
  if (!x) throw std::logic_error("lift system: no homomorphic lift exists");
  // Uniqueness of the matrix part.
  FpSubspace ker = kernel_basis(sys);
  for (int r = 0; r < ker.dim(); ++r)
    for (int cidx = n * s; cidx < n * s + s * s; ++cidx)
      if (ker.basis.at(r, cidx))
        throw std::logic_error("lift system: block action underdetermined");
  if (corrections) {
    corrections->assign(n, big.identity());
    for (int k = 0; k < n; ++k) {
      Element z = big.identity();
      for (int out = 0; out < s; ++out) z.exponents[n + out] = (*x)[k * s + out];
      (*corrections)[k] = z;
    }
  }
  FpMatrix b(p, s, s);
  for (int out = 0; out < s; ++out)
    for (int l = 0; l < s; ++l) b.set(out, l, (*x)[n * s + out * s + l]);
  return b;
}

}  // namespace

FpMatrix aut_matrix_on_multiplicator(const PcPresentation& g,
                                     const PCoverData& cover,
                                     const Automorphism& a) {
  if (cover.mu == 0) return FpMatrix(g.p, 0, 0);
  std::vector<std::vector<uint8_t>> lambda;
  lambda.reserve(cover.relations.size());
  for (const auto& r : cover.relations) lambda.push_back(r.tail);
  FpMatrix m = solve_block_action(g, cover.cover, cover.relations, lambda,
                                  a.images, nullptr);
  if (!mat_inverse(m))
    throw std::logic_error("multiplicator action not invertible");
  return m;
}

// ----- certified stabilizer chain for automorphism groups -------------------

std::string AutChain::key_at_level(const Automorphism& a,
                                   const Level& level) const {
  std::string key;
  key.reserve(static_cast<size_t>(d_) * level.truncate_len);
  for (int m = 0; m < d_; ++m)
    key.append(a.images[m].exponents.begin(),
               a.images[m].exponents.begin() + level.truncate_len);
  return key;
}

AutChain::AutChain(const PcPresentation& g,
                   const std::vector<Automorphism>& gens)
    : g_(&g) {
  require_standard_form(g, "AutChain");
  d_ = count_minimal(g);
  const int c = max_weight(g);
  Automorphism id = aut_identity(g);
  for (int k = 2; k <= c + 1; ++k) {
    Level level;
    level.series_index = k;
    level.truncate_len = 0;
    for (int i = 0; i < g.n; ++i)
      if (g.weights[i] < k) ++level.truncate_len;
    level.idkey = key_at_level(id, level);
    level.transversal.emplace(level.idkey, id);
    levels_.push_back(std::move(level));
  }
  for (const Automorphism& a : gens) add(a, 0);
  // A strong generator discovered at a deep level postdates the orbits
  // already built at shallower levels, so its Schreier generators there have
  // not been sifted.  Re-verify every level until a full sweep finds nothing
  // new; each failed sweep strictly grows some orbit, so this terminates.
  for (;;) {
    size_t before = strong_gens_.size();
    verify_sweep();
    if (strong_gens_.size() == before) break;
  }
  order_ = 1;
  for (const Level& level : levels_) order_ *= level.transversal.size();
}

void AutChain::verify_sweep() {
  for (size_t t = 0; t < levels_.size(); ++t) {
    std::vector<Automorphism> reps;
    reps.reserve(levels_[t].transversal.size());
    for (const auto& entry : levels_[t].transversal) reps.push_back(entry.second);
    const size_t gen_count = strong_gens_.size();  // later gens: next sweep
    for (const Automorphism& u : reps)
      for (size_t gi = 0; gi < gen_count; ++gi) {
        if (strong_gen_level_[gi] < t) continue;
        Automorphism w = aut_compose(*g_, strong_gens_[gi], u);
        auto it = levels_[t].transversal.find(key_at_level(w, levels_[t]));
        if (it == levels_[t].transversal.end())
          throw std::logic_error("stabilizer chain: orbit not closed");
        add(aut_compose(*g_, aut_flip(it->second), w), t + 1);
      }
  }
}

void AutChain::add(const Automorphism& a, size_t t) {
  if (t == levels_.size()) {
    if (!images_are_generators(*g_, a.images))
      throw std::logic_error(
          "stabilizer chain: nontrivial pointwise stabilizer");
    return;
  }
  Level& level = levels_[t];
  std::string key = key_at_level(a, level);
  if (key == level.idkey) {
    add(a, t + 1);
    return;
  }
  auto it = level.transversal.find(key);
  if (it != level.transversal.end()) {
    add(aut_compose(*g_, aut_flip(it->second), a), t + 1);
    return;
  }
  strong_gens_.push_back(a);
  strong_gen_level_.push_back(t);
  rebuild_orbit(t);
}

void AutChain::rebuild_orbit(size_t t) {
  Level& level = levels_[t];
  level.transversal.clear();
  Automorphism id = aut_identity(*g_);
  level.transversal.emplace(level.idkey, id);
  std::deque<Automorphism> queue;
  queue.push_back(id);
  while (!queue.empty()) {
    Automorphism u = std::move(queue.front());
    queue.pop_front();
    for (size_t gi = 0; gi < strong_gens_.size(); ++gi) {
      if (strong_gen_level_[gi] < t) continue;
      Automorphism w = aut_compose(*g_, strong_gens_[gi], u);
      std::string key = key_at_level(w, level);
      auto it = level.transversal.find(key);
      if (it == level.transversal.end()) {
        level.transversal.emplace(key, w);
        queue.push_back(std::move(w));
      } else {
        add(aut_compose(*g_, aut_flip(it->second), w), t + 1);
      }
    }
  }
}

bool AutChain::contains(const Automorphism& a) const {
  Automorphism cur = a;
  for (const Level& level : levels_) {
    std::string key = key_at_level(cur, level);
    if (key == level.idkey) continue;
    auto it = level.transversal.find(key);
    if (it == level.transversal.end()) return false;
    cur = aut_compose(*g_, aut_flip(it->second), cur);
  }
  return images_are_generators(*g_, cur.images);
}

std::vector<Automorphism> AutChain::frattini_kernel_gens() const {
  std::vector<Automorphism> out;
  for (size_t i = 0; i < strong_gens_.size(); ++i)
    if (strong_gen_level_[i] >= 1) out.push_back(strong_gens_[i]);
  return out;
}

// ----- descendants -----------------------------------------------------------

namespace {

struct ChildData {
  PcPresentation pres;
  int s = 0;
  std::vector<std::vector<uint8_t>> lambda;  // per relation: new-layer coords
};

ChildData build_child(const PcPresentation& g, const PCoverData& cd,
                      const FpSubspace& u) {
  const int n = cd.n;
  const int mu = cd.mu;
  const int p = g.p;
  const int s = mu - u.dim();

  // Pick the pivot relations: scanning in relation order, keep those whose
  // tails extend U to all of M.
  std::vector<int> pivots;
  {
    std::vector<std::vector<int>> rows;
    for (int r = 0; r < u.dim(); ++r) {
      std::vector<int> row(mu);
      for (int cidx = 0; cidx < mu; ++cidx) row[cidx] = u.basis.at(r, cidx);
      rows.push_back(std::move(row));
    }
    int cur_rank = u.dim();
    for (size_t r = 0; r < cd.relations.size() && cur_rank < mu; ++r) {
      const auto& tail = cd.relations[r].tail;
      bool nz = std::any_of(tail.begin(), tail.end(), [](uint8_t e) { return e; });
      if (!nz) continue;
      std::vector<std::vector<int>> trial = rows;
      trial.emplace_back(tail.begin(), tail.end());
      if (rref(FpMatrix::from_rows(p, trial)).second > cur_rank) {
        rows = std::move(trial);
        ++cur_rank;
        pivots.push_back(static_cast<int>(r));
      }
    }
    if (static_cast<int>(pivots.size()) != s)
      throw std::logic_error("descendants: tails do not span the multiplicator");
  }

  // Coordinates modulo U with respect to the pivot tails: solve B^T x = v
  // where the rows of B are U's basis followed by the pivot tails.
  FpMatrix bt(p, mu, mu);
  for (int r = 0; r < u.dim(); ++r)
    for (int cidx = 0; cidx < mu; ++cidx) bt.set(cidx, r, u.basis.at(r, cidx));
  for (int l = 0; l < s; ++l) {
    const auto& tail = cd.relations[pivots[l]].tail;
    for (int cidx = 0; cidx < mu; ++cidx)
      bt.set(cidx, u.dim() + l, tail[cidx]);
  }
  auto btinv = mat_inverse(bt);
  if (!btinv) throw std::logic_error("descendants: singular coordinate change");
  auto layer_coords = [&](const std::vector<uint8_t>& v) {
    std::vector<uint8_t> x = mat_apply(*btinv, v);
    return std::vector<uint8_t>(x.begin() + u.dim(), x.end());
  };

  ChildData child;
  child.s = s;
  child.lambda.reserve(cd.relations.size());
  for (const auto& rel : cd.relations) child.lambda.push_back(layer_coords(rel.tail));

  PcPresentation& q = child.pres;
  q.p = p;
  q.n = n + s;
  q.power_words.assign(n + s, {});
  q.comm_words.assign(static_cast<size_t>(n + s) * (n + s - 1) / 2, {});
  auto child_word = [&](const std::vector<uint8_t>& src,
                        const std::vector<uint8_t>& coords) {
    std::vector<uint8_t> w(n + s, 0);
    std::copy(src.begin(), src.end(), w.begin());
    for (int l = 0; l < s; ++l) w[n + l] = coords[l];
    bool nz = std::any_of(w.begin(), w.end(), [](uint8_t e) { return e; });
    if (!nz) return std::vector<uint8_t>{};
    return w;
  };
  for (size_t r = 0; r < cd.relations.size(); ++r) {
    const auto& rel = cd.relations[r];
    if (rel.kind == PcPresentation::Definition::power)
      q.power_words[rel.i] = child_word(g.power_words[rel.i], child.lambda[r]);
    else
      q.comm_words[PcPresentation::comm_index(rel.j, rel.i)] =
          child_word(g.comm_word(rel.j, rel.i), child.lambda[r]);
  }
  q.finalize();
  // For allowable subgroups the new generators all land in weight c + 1;
  // quotients by non-allowable subgroups place them lower.  Recompute
  // honestly in both cases.
  q.weights = weights_from_series(q);
  scan_definitions(q);
  for (int k = 0; k < q.n; ++k)
    if (q.weights[k] > 1 && !q.definitions[k])
      throw std::logic_error("descendants: child lacks a definition");
  return child;
}

// Lift an automorphism of g to the child: central corrections and the
// new-layer action are solved from the relation system, and the inverse is
// the lift of the inverse corrected by the central defect.
Automorphism lift_to_child(const PcPresentation& g, const PCoverData& cd,
                           const ChildData& child, const Automorphism& a) {
  const PcPresentation& q = child.pres;
  const int n = g.n;
  const int s = child.s;

  auto lifted_images = [&](const std::vector<Element>& base_images) {
    std::vector<Element> z;
    FpMatrix b = solve_block_action(g, q, cd.relations, child.lambda,
                                    base_images, &z);
    std::vector<Element> images(q.n, q.identity());
    for (int i = 0; i < n; ++i)
      images[i] = q.multiply(lift_element(q, base_images[i]), z[i]);
    for (int l = 0; l < s; ++l) {
      Element img = q.identity();
      for (int out = 0; out < s; ++out) img.exponents[n + out] = b.at(out, l);
      images[n + l] = img;
    }
    return images;
  };

  std::vector<Element> fwd = lifted_images(a.images);
  std::vector<Element> bwd = lifted_images(a.inverse_images);

  // defect(x) = bwd(fwd(x)) fixes the child modulo the new layer; it is a
  // central map x -> x * tau(x mod Phi), so its inverse negates tau.
  Automorphism fwd_a{fwd, {}};
  Automorphism bwd_a{bwd, {}};
  std::vector<Element> defect(q.n);
  for (int i = 0; i < q.n; ++i)
    defect[i] = aut_apply(q, bwd_a, aut_apply(q, fwd_a, q.generator(i)));
  std::vector<Element> defect_inv(q.n);
  for (int i = 0; i < q.n; ++i) {
    Element e = defect[i];
    if (i >= n) {
      // The two layer matrices are exact inverses, so the defect fixes the
      // new generators outright.
      if (!(e == q.generator(i)))
        throw std::logic_error("lift defect moves the new layer");
      defect_inv[i] = e;
      continue;
    }
    for (int k = 0; k < n; ++k)
      if (e.exponents[k] != (k == i ? 1 : 0))
        throw std::logic_error("lift defect is not central");
    for (int l = 0; l < s; ++l)
      e.exponents[n + l] =
          static_cast<uint8_t>((q.p - e.exponents[n + l]) % q.p);
    defect_inv[i] = e;
  }
  Automorphism defect_inv_a{defect_inv, {}};
  std::vector<Element> inverse_images(q.n);
  for (int i = 0; i < q.n; ++i)
    inverse_images[i] = aut_apply(q, defect_inv_a, bwd[i]);

  Automorphism out{std::move(fwd), std::move(inverse_images)};
  for (int i = 0; i < q.n; ++i) {
    if (!(aut_apply(q, out, out.inverse_images[i]) == q.generator(i)) ||
        !(aut_apply_inverse(q, out, out.images[i]) == q.generator(i)))
      throw std::logic_error("lifted automorphism inverse check failed");
  }
  return out;
}

std::vector<Automorphism> central_automorphisms(const PcPresentation& q,
                                                int n, int s) {
  std::vector<Automorphism> out;
  const int d = count_minimal(q);
  for (int a = 0; a < d; ++a)
    for (int l = 0; l < s; ++l) {
      Automorphism c = aut_identity(q);
      c.images[a].exponents[n + l] = 1;
      c.inverse_images[a].exponents[n + l] = static_cast<uint8_t>(q.p - 1);
      out.push_back(std::move(c));
    }
  return out;
}

std::vector<Descendant> descend_core(const PcPresentation& g,
                                     const PCoverData& cd, int step,
                                     const AutGroup& aut, bool with_aut,
                                     bool allowable_only) {
  const int p = g.p;
  const int mu = cd.mu;
  const int nu = cd.nucleus.dim();
  if (step < 1 || step > (allowable_only ? nu : mu))
    throw std::out_of_range("descendants: step out of range");

  std::vector<FpMatrix> mats;
  mats.reserve(aut.gens.size());
  for (const Automorphism& a : aut.gens)
    mats.push_back(aut_matrix_on_multiplicator(g, cd, a));

  // Stream the subgroups in canonical order and partition them into orbits
  // by hashing canonical forms; nothing is materialized beyond the
  // visited-key set.  The representative of an orbit is its first member in
  // enumeration order, which is generating-set independent.
  std::unordered_set<std::string> seen;
  std::vector<std::pair<FpSubspace, long long>> reps;  // (rep, orbit size)
  uint64_t streamed = 0;
  SubspaceStream stream(p, mu, step,
                        allowable_only ? std::optional<FpSubspace>(cd.nucleus)
                                       : std::nullopt);
  while (auto u = stream.next()) {
    ++streamed;
    if (seen.count(u->key())) continue;
    long long size = 0;
    std::deque<FpSubspace> queue;
    seen.insert(u->key());
    queue.push_back(*u);
    while (!queue.empty()) {
      FpSubspace v = std::move(queue.front());
      queue.pop_front();
      ++size;
      for (const FpMatrix& m : mats) {
        FpSubspace img = subspace_image(m, v);
        if (seen.insert(img.key()).second) queue.push_back(std::move(img));
      }
    }
    reps.emplace_back(*u, size);
  }
  // The action preserves the enumerated set (it is linear, and it fixes the
  // nucleus setwise), so the orbit closure must visit exactly that set.
  if (seen.size() != streamed)
    throw std::logic_error("descendants: orbit closure left the enumerated set");

  std::vector<Descendant> out;
  out.reserve(reps.size());
  for (const auto& [u, orbit_size] : reps) {
    ChildData child = build_child(g, cd, u);
    Descendant desc;
    desc.subspace = u;
    desc.orbit_size = orbit_size;
    desc.capable = p_cover(child.pres).nucleus.dim() > 0;
    if (with_aut) {
      // Stabilizer of U inside the full automorphism group, by Schreier's
      // lemma on the suborbit of U, then reduced to a certified strong
      // generating set.
      std::unordered_map<std::string, int> point_of;
      std::vector<FpSubspace> points;
      std::vector<Automorphism> trans;
      points.push_back(u);
      trans.push_back(aut_identity(g));
      point_of.emplace(u.key(), 0);
      std::vector<Automorphism> schreier;
      for (size_t v = 0; v < points.size(); ++v)
        for (size_t gi = 0; gi < aut.gens.size(); ++gi) {
          FpSubspace img = subspace_image(mats[gi], points[v]);
          auto it = point_of.find(img.key());
          if (it == point_of.end()) {
            point_of.emplace(img.key(), static_cast<int>(points.size()));
            points.push_back(img);
            trans.push_back(aut_compose(g, aut.gens[gi], trans[v]));
          } else {
            Automorphism sg = aut_compose(
                g, aut_flip(trans[it->second]),
                aut_compose(g, aut.gens[gi], trans[v]));
            schreier.push_back(std::move(sg));
          }
        }
      if (static_cast<long long>(points.size()) != orbit_size)
        throw std::logic_error("descendants: stabilizer orbit mismatch");
      AutChain chain(g, schreier);
      for (const Automorphism& sa : chain.strong_gens())
        desc.aut.gens.push_back(lift_to_child(g, cd, child, sa));
      for (Automorphism& ca : central_automorphisms(child.pres, g.n, child.s))
        desc.aut.gens.push_back(std::move(ca));
    }
    desc.group = std::move(child.pres);
    out.push_back(std::move(desc));
  }
  return out;
}

}  // namespace

std::vector<Descendant> descendants(const PcPresentation& g, int step,
                                    const AutGroup& aut, bool with_aut) {
  PCoverData cd = p_cover(g);
  return descend_core(g, cd, step, aut, with_aut, /*allowable_only=*/true);
}

std::vector<Descendant> cover_quotients(const PcPresentation& g, int step,
                                        const AutGroup& aut, bool with_aut) {
  PCoverData cd = p_cover(g);
  return descend_core(g, cd, step, aut, with_aut, /*allowable_only=*/false);
}

DescendantStats descendant_stats(const PcPresentation& g, const AutGroup& aut) {
  PCoverData cd = p_cover(g);
  DescendantStats stats;
  stats.mu = cd.mu;
  stats.nu = cd.nucleus.dim();
  stats.d2 = cd.mu;
  for (int step = 1; step <= stats.nu; ++step) {
    std::vector<Descendant> kids =
        descend_core(g, cd, step, aut, false, /*allowable_only=*/true);
    long long total = static_cast<long long>(kids.size());
    long long capable = 0;
    for (const Descendant& k : kids) capable += k.capable ? 1 : 0;
    stats.counts.emplace_back(total, capable);
  }
  return stats;
}

// ----- the abelian root and its automorphisms -------------------------------

AutGroup aut_root(const PcPresentation& g) {
  PcPresentation root = presentation_c9c9();
  if (g.p != root.p || g.n != root.n || g.power_words != root.power_words ||
      g.comm_words != root.comm_words)
    throw std::invalid_argument(
        "aut_root: only the standard rank-2 homocyclic root is supported");

  auto inverse_mod9 = [](int a) {
    for (int x = 1; x < 9; ++x)
      if (a * x % 9 == 1) return x;
    throw std::invalid_argument("aut_root: non-unit determinant");
  };
  auto matrix_images = [&](int a, int b, int c, int d) {
    // Columns are the images: x -> x^a y^c, y -> x^b y^d.
    std::vector<Element> min_images = {
        g.multiply(g.power(g.generator(0), a), g.power(g.generator(1), c)),
        g.multiply(g.power(g.generator(0), b), g.power(g.generator(1), d))};
    return aut_derive_images(g, min_images);
  };
  auto build = [&](int a, int b, int c, int d) {
    int det = ((a * d - b * c) % 9 + 9) % 9;
    int di = inverse_mod9(det);
    int ia = d * di % 9, ib = (9 - b % 9) * di % 9;
    int ic = (9 - c % 9) * di % 9, id = a * di % 9;
    std::vector<Element> fwd = matrix_images(a, b, c, d);
    std::vector<Element> bwd = matrix_images(ia % 9, ib % 9, ic % 9, id % 9);
    if (!aut_verify(g, fwd) || !aut_verify(g, bwd))
      throw std::logic_error("aut_root: generator failed verification");
    Automorphism aut{std::move(fwd), std::move(bwd)};
    for (int i = 0; i < g.n; ++i)
      if (!(aut_apply(g, aut, aut.inverse_images[i]) == g.generator(i)))
        throw std::logic_error("aut_root: inverse check failed");
    return aut;
  };

  AutGroup out;
  out.gens.push_back(build(1, 1, 0, 1));  // x -> x, y -> x y
  out.gens.push_back(build(1, 0, 1, 1));  // x -> x y, y -> y
  out.gens.push_back(build(2, 0, 0, 1));  // x -> x^2, y -> y
  return out;
}

// ----- sigma machinery -------------------------------------------------------

namespace {

std::optional<SigmaWitness> sigma_exhaustive(const PcPresentation& g,
                                             bool need_m_inversion) {
  require_standard_form(g, "sigma search");
  if (count_minimal(g) != 2)
    throw std::invalid_argument("sigma search: group is not 2-generated");
  if (g.n > 9)
    throw std::invalid_argument(
        "sigma search: exhaustive method supports order at most p^9");

  PCoverData cd = p_cover(g);
  FpMatrix minus_i = scalar_matrix(g.p, cd.mu, g.p - 1);

  Subgroup phi = frattini_subgroup(g);
  std::vector<Element> phi_elems;
  {
    size_t count = 1;
    for (size_t k = 0; k < phi.igs.size(); ++k) count *= g.p;
    phi_elems.reserve(count);
    std::vector<int> oro(phi.igs.size(), 0);
    for (;;) {
      Element e = g.identity();
      for (size_t k = 0; k < phi.igs.size(); ++k)
        if (oro[k]) e = g.multiply(e, g.power(phi.igs[k], oro[k]));
      phi_elems.push_back(std::move(e));
      size_t k = 0;
      while (k < oro.size() && ++oro[k] == g.p) oro[k++] = 0;
      if (k == oro.size()) break;
    }
  }

  Element xinv = g.inverse(g.generator(0));
  Element yinv = g.inverse(g.generator(1));
  for (const Element& ph : phi_elems) {
    Element a = g.multiply(xinv, ph);
    for (const Element& ps : phi_elems) {
      Element b = g.multiply(yinv, ps);
      std::vector<Element> images = aut_derive_images(g, {a, b});
      if (!aut_verify(g, images)) continue;
      Automorphism aut = aut_from_images(g, images);
      bool flag = aut_matrix_on_multiplicator(g, cd, aut) == minus_i;
      if (need_m_inversion && !flag) continue;
      return SigmaWitness{std::move(aut), flag};
    }
  }
  return std::nullopt;
}

// Breadth-first closure of a matrix group with word bookkeeping; returns the
// generator word reaching `target`, or nullopt if the closure lacks it.
std::optional<std::vector<int>> matrix_word_search(
    const std::vector<FpMatrix>& gens, const FpMatrix& identity,
    const FpMatrix& target, size_t limit) {
  std::unordered_map<std::string, std::vector<int>> seen;
  std::deque<FpMatrix> queue;
  seen.emplace(matrix_key(identity), std::vector<int>{});
  if (identity == target) return std::vector<int>{};
  queue.push_back(identity);
  while (!queue.empty()) {
    FpMatrix cur = std::move(queue.front());
    queue.pop_front();
    const std::vector<int>& word = seen.at(matrix_key(cur));
    for (size_t gi = 0; gi < gens.size(); ++gi) {
      FpMatrix next = mat_mul(cur, gens[gi]);
      std::string key = matrix_key(next);
      if (seen.count(key)) continue;
      std::vector<int> next_word = word;
      next_word.push_back(static_cast<int>(gi));
      if (next == target) return next_word;
      seen.emplace(std::move(key), std::move(next_word));
      queue.push_back(std::move(next));
      if (seen.size() > limit)
        throw std::runtime_error("matrix closure exceeds the search bound");
    }
  }
  return std::nullopt;
}

Automorphism compose_word(const PcPresentation& g,
                          const std::vector<Automorphism>& gens,
                          const std::vector<int>& word) {
  Automorphism acc = aut_identity(g);
  for (int idx : word) acc = aut_compose(g, acc, gens[idx]);
  return acc;
}

}  // namespace

std::optional<SigmaWitness> is_sigma(const PcPresentation& g) {
  return sigma_exhaustive(g, false);
}

std::optional<SigmaWitness> is_sigma2(const PcPresentation& g) {
  return sigma_exhaustive(g, true);
}

std::optional<SigmaWitness> find_sigma_with_aut(const PcPresentation& g,
                                                const AutGroup& aut) {
  require_standard_form(g, "find_sigma_with_aut");
  const int d = count_minimal(g);
  std::vector<FpMatrix> vmats;
  vmats.reserve(aut.gens.size());
  for (const Automorphism& a : aut.gens)
    vmats.push_back(aut_matrix_on_frattini_quotient(g, a));
  FpMatrix target = scalar_matrix(g.p, d, g.p - 1);
  auto word = matrix_word_search(vmats, FpMatrix::identity(g.p, d), target,
                                 1 << 20);
  if (!word) return std::nullopt;
  Automorphism alpha = compose_word(g, aut.gens, *word);
  if (!(aut_matrix_on_frattini_quotient(g, alpha) == target))
    throw std::logic_error("sigma witness does not invert the quotient");
  PCoverData cd = p_cover(g);
  bool flag = aut_matrix_on_multiplicator(g, cd, alpha) ==
              scalar_matrix(g.p, cd.mu, g.p - 1);
  return SigmaWitness{std::move(alpha), flag};
}

std::optional<SigmaWitness> find_sigma2_with_aut(const PcPresentation& g,
                                                 const AutGroup& aut) {
  auto w = find_sigma_with_aut(g, aut);
  if (!w) return std::nullopt;
  if (w->inverts_multiplicator) return w;

  PCoverData cd = p_cover(g);
  FpMatrix minus_i = scalar_matrix(g.p, cd.mu, g.p - 1);
  AutChain chain(g, aut.gens);
  std::vector<Automorphism> kernel = chain.frattini_kernel_gens();
  std::vector<FpMatrix> kmats;
  kmats.reserve(kernel.size());
  for (const Automorphism& k : kernel)
    kmats.push_back(aut_matrix_on_multiplicator(g, cd, k));
  FpMatrix a0 = aut_matrix_on_multiplicator(g, cd, w->aut);
  auto a0inv = mat_inverse(a0);
  if (!a0inv) throw std::logic_error("sigma2: singular multiplicator action");
  FpMatrix target = mat_mul(*a0inv, minus_i);
  auto word = matrix_word_search(kmats, FpMatrix::identity(g.p, cd.mu), target,
                                 1 << 21);
  if (!word) return std::nullopt;
  Automorphism k = compose_word(g, kernel, *word);
  Automorphism alpha = aut_compose(g, w->aut, k);
  if (!(aut_matrix_on_multiplicator(g, cd, alpha) == minus_i))
    throw std::logic_error("sigma2: composed witness fails inversion on M");
  int d = count_minimal(g);
  if (!(aut_matrix_on_frattini_quotient(g, alpha) ==
        scalar_matrix(g.p, d, g.p - 1)))
    throw std::logic_error("sigma2: composed witness fails inversion on V");
  return SigmaWitness{std::move(alpha), true};
}

// ----- arithmetic bound ------------------------------------------------------

std::pair<int, int> shafarevich_bound(std::pair<int, int> signature, int p) {
  if (p != 3)
    throw std::invalid_argument("shafarevich_bound: only p = 3 is supported");
  auto [r1, r2] = signature;
  if (r1 < 0 || r2 < 0 || r1 + r2 < 1)
    throw std::invalid_argument("shafarevich_bound: bad signature");
  int r = r1 + r2 - 1;
  return {2, 2 + r};
}

}  // namespace pgsieve
