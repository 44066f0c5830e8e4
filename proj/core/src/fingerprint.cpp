#include "pgsieve/fingerprint.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "pgsieve/fplinalg.hpp"
#include "pgsieve/lattice.hpp"
#include "pgsieve/pgen.hpp"

namespace pgsieve {

namespace {

std::string hex16(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

LatticeLabel relabel_label(const LatticeLabel &l, const Perm &w,
                           const std::array<Perm, 4> &v) {
  switch (l.kind) {
    case LatticeLabel::H:
      return LatticeLabel{LatticeLabel::H, w.image[l.i - 1], 0};
    case LatticeLabel::K:
      return LatticeLabel{LatticeLabel::K, w.image[l.i - 1], 0};
    case LatticeLabel::J:
      return LatticeLabel{LatticeLabel::J, w.image[l.i - 1],
                          v[l.i - 1].image[l.k - 1]};
    default:
      return l;  // G, G', J0 are fixed by every relabeling
  }
}

KappaEntry relabel_entry(const KappaEntry &e, const Perm &w,
                         const std::array<Perm, 4> &v) {
  if (!e.label) return e;  // unresolved kernels carry their description
  LatticeLabel moved = relabel_label(*e.label, w, v);
  return KappaEntry{moved, moved.str()};
}

std::vector<Perm> all_perms(int n) {
  std::vector<int> base(n);
  for (int i = 0; i < n; ++i) base[i] = i + 1;
  std::vector<Perm> out;
  do {
    out.push_back(Perm{base});
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

}  // namespace

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string presentation_key(const PcPresentation &g) {
  return hex16(fnv1a64(write_presentation(g)));
}

ArtinPattern relabel_pattern(const ArtinPattern &pattern, const Perm &w,
                             const std::array<Perm, 4> &v) {
  if (!is_permutation(w, 4)) throw std::invalid_argument("relabel_pattern: w");
  for (const Perm &vi : v)
    if (!is_permutation(vi, 3))
      throw std::invalid_argument("relabel_pattern: v");
  for (int l : {0, 4})
    if (pattern.tau[l].size() != 1 || pattern.kappa[l].size() != 1)
      throw std::invalid_argument("relabel_pattern: layer shape");
  if (pattern.tau[1].size() != 4 || pattern.tau[2].size() != 13 ||
      pattern.tau[3].size() != 4)
    throw std::invalid_argument("relabel_pattern: layer shape");

  Perm winv = perm_inverse(w);
  std::array<Perm, 4> vinv = {perm_inverse(v[0]), perm_inverse(v[1]),
                              perm_inverse(v[2]), perm_inverse(v[3])};
  ArtinPattern out = pattern;
  // Ends: positions fixed, kernel values transported.
  out.kappa[0][0] = relabel_entry(pattern.kappa[0][0], w, v);
  out.kappa[4][0] = relabel_entry(pattern.kappa[4][0], w, v);
  // Family layers: the entry now labeled with family index j shows the data
  // of the member previously labeled with family index winv(j).
  for (int j = 1; j <= 4; ++j) {
    int src = winv.image[j - 1];
    out.tau[1][j - 1] = pattern.tau[1][src - 1];
    out.kappa[1][j - 1] = relabel_entry(pattern.kappa[1][src - 1], w, v);
    out.tau[3][j - 1] = pattern.tau[3][src - 1];
    out.kappa[3][j - 1] = relabel_entry(pattern.kappa[3][src - 1], w, v);
    for (int m = 1; m <= 3; ++m) {
      int i = src;
      int k = vinv[i - 1].image[m - 1];
      int from = 3 * (i - 1) + (k - 1);
      int to = 3 * (j - 1) + (m - 1);
      out.tau[2][to] = pattern.tau[2][from];
      out.kappa[2][to] = relabel_entry(pattern.kappa[2][from], w, v);
    }
  }
  out.tau[2][12] = pattern.tau[2][12];
  out.kappa[2][12] = relabel_entry(pattern.kappa[2][12], w, v);
  return out;
}

std::string canonical_pattern_json(const ArtinPattern &pattern) {
  static const std::vector<Perm> s4 = all_perms(4);
  static const std::vector<Perm> s3 = all_perms(3);
  std::string best;
  std::array<Perm, 4> v;
  for (const Perm &w : s4)
    for (const Perm &v1 : s3)
      for (const Perm &v2 : s3)
        for (const Perm &v3 : s3)
          for (const Perm &v4 : s3) {
            v = {v1, v2, v3, v4};
            std::string s = to_json(relabel_pattern(pattern, w, v));
            if (best.empty() || s < best) best = std::move(s);
          }
  return best;
}

bool Fingerprint::operator==(const Fingerprint &other) const {
  return order_log == other.order_log && p_class == other.p_class &&
         coclass == other.coclass && derived_length == other.derived_length &&
         ati == other.ati && layer_tau == other.layer_tau && nu == other.nu &&
         mu == other.mu && d2 == other.d2 && sigma == other.sigma &&
         pattern_hash == other.pattern_hash;
}

bool Fingerprint::operator<(const Fingerprint &other) const {
  if (order_log != other.order_log) return order_log < other.order_log;
  if (p_class != other.p_class) return p_class < other.p_class;
  if (coclass != other.coclass) return coclass < other.coclass;
  if (derived_length != other.derived_length)
    return derived_length < other.derived_length;
  if (!(ati == other.ati)) return ati < other.ati;
  for (int l = 0; l < 5; ++l)
    if (!(layer_tau[l] == other.layer_tau[l]))
      return std::lexicographical_compare(
          layer_tau[l].begin(), layer_tau[l].end(), other.layer_tau[l].begin(),
          other.layer_tau[l].end());
  if (nu != other.nu) return nu < other.nu;
  if (mu != other.mu) return mu < other.mu;
  if (d2 != other.d2) return d2 < other.d2;
  if (sigma != other.sigma) return sigma < other.sigma;
  return pattern_hash < other.pattern_hash;
}

std::string Fingerprint::str() const {
  std::ostringstream os;
  os << "o" << order_log << "p" << p_class << "c" << coclass << "d"
     << derived_length << "a" << ati.str() << "n" << nu << "m" << mu << "r"
     << d2 << "s" << (sigma ? 1 : 0);
  std::string blob;
  for (int l = 0; l < 5; ++l) {
    for (const AbelianTypeInvariants &t : layer_tau[l]) blob += t.str();
    blob += "|";
  }
  blob += hex16(pattern_hash);
  os << "h" << hex16(fnv1a64(blob));
  return os.str();
}

Fingerprint iso_fingerprint(const PcPresentation &g) {
  return iso_fingerprint(g, FingerprintHints{});
}

Fingerprint iso_fingerprint(const PcPresentation &g,
                            const FingerprintHints &hints) {
  Fingerprint fp;
  fp.order_log = g.n;
  fp.p_class = exponent_p_class(g);
  fp.coclass = g.n - nilpotency_class(g);
  fp.derived_length = derived_length(g);
  fp.ati = abelian_type_invariants(g);
  if (hints.nu_mu) {
    fp.nu = hints.nu_mu->first;
    fp.mu = hints.nu_mu->second;
  } else {
    PCoverData cover = p_cover(g);
    fp.nu = cover.nucleus.dim();
    fp.mu = cover.mu;
  }
  fp.d2 = fp.mu;
  if (hints.sigma) {
    fp.sigma = *hints.sigma;
  } else {
    // The exhaustive search is the only hint-free option and has a hard
    // range limit; beyond it the caller must supply the flag.
    fp.sigma = is_sigma(g).has_value();
  }
  AbelianTypeInvariants c9c9;
  c9c9.logs = {2, 2};
  if (fp.ati == c9c9) {
    ArtinPattern local;
    const ArtinPattern &pat =
        hints.pattern ? *hints.pattern : (local = artin_pattern(g), local);
    for (int l = 0; l < 5; ++l) {
      fp.layer_tau[l] = pat.tau[l];
      std::sort(fp.layer_tau[l].begin(), fp.layer_tau[l].end());
    }
    fp.pattern_hash = fnv1a64(canonical_pattern_json(pat));
  }
  return fp;
}

// ---------------------------------------------------------------------------
// Isomorphism search.
// ---------------------------------------------------------------------------

namespace {

// Evaluate a normal word of src at images living in tgt.
Element eval_word_in(const PcPresentation &tgt, const std::vector<uint8_t> &w,
                     const std::vector<Element> &images) {
  Element acc = tgt.identity();
  for (size_t k = 0; k < w.size(); ++k)
    if (w[k]) acc = tgt.multiply(acc, tgt.power(images[k], w[k]));
  return acc;
}

// Extend images of src's minimal generators to all generators via src's
// definitions, evaluating inside tgt.
std::optional<std::vector<Element>> derive_images_in(
    const PcPresentation &src, const PcPresentation &tgt,
    const std::vector<Element> &minimal, int d) {
  std::vector<Element> images(minimal);
  images.resize(src.n, tgt.identity());
  for (int k = d; k < src.n; ++k) {
    if (!src.definitions[k]) return std::nullopt;
    const auto &def = *src.definitions[k];
    const std::vector<uint8_t> &w =
        def.kind == PcPresentation::Definition::power
            ? src.power_words[def.i]
            : src.comm_word(def.j, def.i);
    Element prefix = tgt.identity();
    for (int l = 0; l < k; ++l)
      if (l < static_cast<int>(w.size()) && w[l])
        prefix = tgt.multiply(prefix, tgt.power(images[l], w[l]));
    Element lhs = def.kind == PcPresentation::Definition::power
                      ? tgt.power(images[def.i], src.p)
                      : tgt.commutator(images[def.j], images[def.i]);
    images[k] = tgt.multiply(tgt.inverse(prefix), lhs);
  }
  return images;
}

// All relations of src hold at the images inside tgt.
bool verify_hom_in(const PcPresentation &src, const PcPresentation &tgt,
                   const std::vector<Element> &images) {
  for (int i = 0; i < src.n; ++i) {
    Element lhs = tgt.power(images[i], src.p);
    if (!(lhs == eval_word_in(tgt, src.power_words[i], images))) return false;
  }
  for (int j = 1; j < src.n; ++j)
    for (int i = 0; i < j; ++i) {
      Element lhs = tgt.commutator(images[j], images[i]);
      if (!(lhs == eval_word_in(tgt, src.comm_word(j, i), images)))
        return false;
    }
  return true;
}

// Images of the d minimal generators are independent modulo the Frattini
// subgroup of tgt: in standard form those coordinates are the first d
// exponents.
bool independent_mod_frattini(const PcPresentation &tgt,
                              const std::vector<Element> &minimal, int d) {
  FpMatrix m(tgt.p, d, d);
  for (int col = 0; col < d; ++col)
    for (int row = 0; row < d; ++row)
      m.set(row, col, minimal[col].exponents[row]);
  return rref(m).second == d;
}

std::map<long long, long long> order_histogram(const PcPresentation &g) {
  std::map<long long, long long> h;
  Element e = g.identity();
  for (;;) {
    ++h[g.element_order(e)];
    int k = 0;
    while (k < g.n && e.exponents[k] == static_cast<uint8_t>(g.p - 1))
      e.exponents[k++] = 0;
    if (k == g.n) break;
    ++e.exponents[k];
  }
  return h;
}

}  // namespace

std::optional<std::vector<Element>> find_isomorphism(const PcPresentation &g,
                                                     const PcPresentation &h) {
  if (g.p != h.p || g.n != h.n) return std::nullopt;
  if (weights_from_series(g) != weights_from_series(h)) return std::nullopt;
  if (!(abelian_type_invariants(g) == abelian_type_invariants(h)))
    return std::nullopt;
  if (nilpotency_class(g) != nilpotency_class(h)) return std::nullopt;
  if (derived_length(g) != derived_length(h)) return std::nullopt;
  if (g.n <= 6 && order_histogram(g) != order_histogram(h))
    return std::nullopt;

  const int d = minimal_generator_count(g);
  const int p = g.p;

  // Presentations of the quotients by each term of the lower exponent-p
  // series; level k (1-based) has the generators of weight <= k.  The last
  // level is the group itself.
  auto series_g = lower_exponent_p_series(g);
  auto series_h = lower_exponent_p_series(h);
  const int c = static_cast<int>(series_g.size()) - 1;
  if (c == 0) return std::vector<Element>{};  // both trivial
  std::vector<PcPresentation> owned_g, owned_h;
  std::vector<const PcPresentation *> QG(c + 1, nullptr), QH(c + 1, nullptr);
  owned_g.reserve(c);
  owned_h.reserve(c);
  for (int k = 1; k < c; ++k) {
    QuotientMap qg = quotient(g, series_g[k]);
    QuotientMap qh = quotient(h, series_h[k]);
    for (int t = 0; t < qg.group.n; ++t)
      if (qg.kept_indices[t] != t || qh.kept_indices[t] != t)
        throw std::invalid_argument(
            "find_isomorphism: presentation is not in standard form");
    owned_g.push_back(std::move(qg.group));
    owned_h.push_back(std::move(qh.group));
    QG[k] = &owned_g.back();
    QH[k] = &owned_h.back();
  }
  QG[c] = &g;
  QH[c] = &h;

  // The level quotients are characteristic, so any mismatch of their
  // abelianizations rules the pair out before the search starts.
  for (int k = 2; k < c; ++k)
    if (!(abelian_type_invariants(*QG[k]) == abelian_type_invariants(*QH[k])))
      return std::nullopt;

  // Orders of the minimal generators in each level quotient, for pruning.
  std::vector<std::vector<long long>> src_order(c + 1,
                                                std::vector<long long>(d));
  for (int k = 1; k <= c; ++k)
    for (int t = 0; t < d; ++t)
      src_order[k][t] = QG[k]->element_order(QG[k]->generator(t));

  // Depth-first lifting of the minimal generator images through the levels.
  // At each level the images extend to all generators via the definitions
  // and every relation is checked, so level c yields a verified bijective
  // homomorphism (independence modulo the Frattini subgroup persists from
  // level 1 because corrections live inside it).
  std::function<std::optional<std::vector<Element>>(
      int, const std::vector<Element> &)>
      lift = [&](int k, const std::vector<Element> &minimal)
      -> std::optional<std::vector<Element>> {
    const PcPresentation &src = *QG[k];
    const PcPresentation &tgt = *QH[k];
    auto images = derive_images_in(src, tgt, minimal, d);
    if (!images) return std::nullopt;
    if (!verify_hom_in(src, tgt, *images)) return std::nullopt;
    if (k == c) {
      if (!independent_mod_frattini(tgt, minimal, d)) return std::nullopt;
      return images;
    }
    const PcPresentation &nxt = *QH[k + 1];
    const int mlo = tgt.n;
    const int mhi = nxt.n;
    const int dim = mhi - mlo;
    std::vector<Element> base(d);
    for (int t = 0; t < d; ++t) {
      base[t].exponents.assign(mhi, 0);
      std::copy(minimal[t].exponents.begin(), minimal[t].exponents.end(),
                base[t].exponents.begin());
    }
    // Every lift of an element differs by a member of the new central
    // layer.  Two candidate tuples whose difference is a conjugation shift
    // are interchangeable: conjugation fixes the current level whenever the
    // conjugator's image there is central, and inner automorphisms lift to
    // every further level, so only a transversal of those shifts is
    // searched.  Generators of the second-highest weight layer project onto
    // the last layer of the current level, which is central there.
    const int wlo = k >= 2 ? QH[k - 1]->n : 0;
    FpMatrix shifts(p, mlo - wlo, d * dim);
    for (int l = wlo; l < mlo; ++l) {
      for (int t = 0; t < d; ++t) {
        Element cm = nxt.commutator(base[t], nxt.generator(l));
        for (int s = 0; s < dim; ++s)
          shifts.set(l - wlo, t * dim + s, cm.exponents[mlo + s]);
      }
    }
    FpSubspace conj = FpSubspace::span(shifts);
    std::vector<int> free_pos;
    {
      std::vector<char> pivot(static_cast<size_t>(d) * dim, 0);
      for (int r = 0; r < conj.basis.rows; ++r)
        for (int cpos = 0; cpos < conj.basis.cols; ++cpos)
          if (conj.basis.at(r, cpos)) {
            pivot[cpos] = 1;
            break;
          }
      for (int cpos = 0; cpos < d * dim; ++cpos)
        if (!pivot[cpos]) free_pos.push_back(cpos);
    }
    std::vector<uint8_t> counter(free_pos.size(), 0);
    std::vector<uint8_t> delta(static_cast<size_t>(d) * dim, 0);
    std::vector<Element> cand(d);
    for (;;) {
      for (size_t i = 0; i < free_pos.size(); ++i)
        delta[free_pos[i]] = counter[i];
      bool viable = true;
      for (int t = 0; t < d && viable; ++t) {
        cand[t] = base[t];
        Element z;
        z.exponents.assign(mhi, 0);
        for (int s = 0; s < dim; ++s)
          z.exponents[mlo + s] = delta[static_cast<size_t>(t) * dim + s];
        cand[t] = nxt.multiply(cand[t], z);
        if (nxt.element_order(cand[t]) != src_order[k + 1][t]) viable = false;
      }
      if (viable)
        if (auto found = lift(k + 1, cand)) return found;
      size_t pos = 0;
      while (pos < counter.size() && counter[pos] == p - 1) counter[pos++] = 0;
      if (pos == counter.size()) break;
      ++counter[pos];
    }
    return std::nullopt;
  };

  // Level 1: both quotients are elementary abelian of rank d; candidate
  // image tuples are the ordered bases (every relation holds trivially).
  const PcPresentation &h1 = *QH[1];
  std::vector<Element> tuple(d);
  std::vector<uint8_t> pick(static_cast<size_t>(d) * d, 0);
  for (;;) {
    for (int t = 0; t < d; ++t) {
      tuple[t].exponents.assign(d, 0);
      for (int s = 0; s < d; ++s)
        tuple[t].exponents[s] = pick[static_cast<size_t>(t) * d + s];
    }
    if (independent_mod_frattini(h1, tuple, d)) {
      if (auto found = lift(1, tuple)) return found;
    }
    size_t pos = 0;
    while (pos < pick.size() && pick[pos] == p - 1) pick[pos++] = 0;
    if (pos == pick.size()) break;
    ++pick[pos];
  }
  return std::nullopt;
}

}  // namespace pgsieve
