#include "pgsieve/pcgroup.hpp"

#include <algorithm>
#include <cassert>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace pgsieve {

namespace {

constexpr int kMaskWords = 4;

int highest_bit(const std::array<uint64_t, kMaskWords> &mask) {
  for (int w = kMaskWords - 1; w >= 0; --w)
    if (mask[w]) return 64 * w + 63 - __builtin_clzll(mask[w]);
  return -1;
}

bool mask_empty(const std::array<uint64_t, kMaskWords> &mask) {
  for (auto w : mask)
    if (w) return false;
  return true;
}

}  // namespace

bool Element::is_identity() const {
  return std::all_of(exponents.begin(), exponents.end(),
                     [](uint8_t e) { return e == 0; });
}

int Element::leading_index() const {
  for (size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i]) return static_cast<int>(i);
  return -1;
}

void PcPresentation::finalize() {
  if (n < 0 || p < 2) throw std::invalid_argument("bad presentation shape");
  if (n > 64 * kMaskWords)
    throw std::invalid_argument("too many generators");
  power_words.resize(n);
  comm_words.resize(static_cast<size_t>(n) * (n - 1) / 2);
  auto check_word = [&](const std::vector<uint8_t> &w, int min_above,
                        const char *what) {
    if (w.empty()) return;
    if (static_cast<int>(w.size()) != n)
      throw std::invalid_argument(std::string(what) + ": bad word length");
    for (int k = 0; k < n; ++k) {
      if (w[k] >= p)
        throw std::invalid_argument(std::string(what) + ": exponent out of range");
      if (w[k] != 0 && k <= min_above)
        throw std::invalid_argument(std::string(what) +
                                    ": support not strictly higher");
    }
  };
  for (int i = 0; i < n; ++i) check_word(power_words[i], i, "power relation");
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      check_word(comm_words[comm_index(j, i)], j, "commutator relation");
  if (static_cast<int>(weights.size()) != n) weights.assign(n, 0);
  definitions.resize(n);

  noncommuting_.assign(n, {});
  for (int j = 1; j < n; ++j)
    for (int i = 0; i < j; ++i)
      if (!comm_words[comm_index(j, i)].empty()) {
        noncommuting_[i][j / 64] |= 1ull << (j % 64);
        noncommuting_[j][i / 64] |= 1ull << (i % 64);
      }
}

Element PcPresentation::identity() const {
  return Element{std::vector<uint8_t>(n, 0)};
}

Element PcPresentation::generator(int i) const {
  if (i < 0 || i >= n) throw std::out_of_range("generator index");
  Element e = identity();
  e.exponents[i] = 1;
  return e;
}

// Collection from the left.  Invariant: value = (normal word ev) * (stack
// letters popped top-first).  A letter g_i^e merges into ev only when no
// noncommuting generator with a nonzero exponent sits above index i;
// otherwise the blocking generator g_j (largest such index) is exchanged
// past one g_i, and everything above j is returned to the stack so the
// exchange happens immediately to the right of the prefix.  Power overflow
// likewise returns the part of ev above i to the stack before the power
// word is inserted.
Element PcPresentation::collect(const Element &prefix, const Word &word) const {
  assert(static_cast<int>(noncommuting_.size()) == n && "finalize() not called");
  if (static_cast<int>(prefix.exponents.size()) != n)
    throw std::out_of_range("element size mismatch");
  std::vector<uint8_t> ev = prefix.exponents;

  std::array<uint64_t, kMaskWords> support{};
  for (int k = 0; k < n; ++k)
    if (ev[k]) support[k / 64] |= 1ull << (k % 64);

  // Stack of (generator, exponent) letters, top at the back.
  std::vector<std::pair<int, int>> stack;
  stack.reserve(word.size() + 16);
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    if (it->first < 0 || it->first >= n)
      throw std::out_of_range("generator index in word");
    if (it->second < 0)
      throw std::out_of_range("negative exponent in collection word");
    if (it->second > 0) stack.push_back(*it);
  }

  auto push_ev_above = [&](int bound) {
    // Return ev's entries at indices > bound to the stack, in decreasing
    // index order so they pop back in increasing order.
    for (int k = n - 1; k > bound; --k)
      if (ev[k]) {
        stack.emplace_back(k, ev[k]);
        ev[k] = 0;
        support[k / 64] &= ~(1ull << (k % 64));
      }
  };
  auto push_word_reversed = [&](const std::vector<uint8_t> &w) {
    for (int k = n - 1; k >= 0; --k)
      if (!w.empty() && w[k]) stack.emplace_back(k, w[k]);
  };

  while (!stack.empty()) {
    auto [i, e] = stack.back();
    stack.pop_back();

    // Obstructions: noncommuting partners above i present in ev.
    std::array<uint64_t, kMaskWords> obstruction;
    for (int w = 0; w < kMaskWords; ++w)
      obstruction[w] = noncommuting_[i][w] & support[w];
    // Mask away indices <= i.
    for (int w = 0; w < kMaskWords; ++w) {
      if (64 * (w + 1) <= i + 1) {
        obstruction[w] = 0;
      } else if (64 * w <= i) {
        int low = i + 1 - 64 * w;
        obstruction[w] &= ~((low >= 64) ? ~0ull : ((1ull << low) - 1));
      }
    }

    if (!mask_empty(obstruction)) {
      int j = highest_bit(obstruction);
      // value = A g_j^a B g_i^e S  with  [B, g_i] = 1, so
      //       = A g_j^{a-1} (g_i g_j c g_i^{e-1}) B S,  c = [g_j, g_i].
      push_ev_above(j);
      if (e > 1) stack.emplace_back(i, e - 1);
      push_word_reversed(comm_words[comm_index(j, i)]);
      stack.emplace_back(j, 1);
      stack.emplace_back(i, 1);
      if (--ev[j] == 0) support[j / 64] &= ~(1ull << (j % 64));
      continue;
    }

    int total = ev[i] + e;
    int overflow = total / p;
    ev[i] = static_cast<uint8_t>(total % p);
    if (ev[i])
      support[i / 64] |= 1ull << (i % 64);
    else
      support[i / 64] &= ~(1ull << (i % 64));
    if (overflow) {
      // value = A g_i^{total} B S = A g_i^{total mod p} (g_i^p)^q B S.
      push_ev_above(i);
      for (int q = 0; q < overflow; ++q)
        push_word_reversed(power_words[i]);
    }
  }
  return Element{std::move(ev)};
}

Element PcPresentation::collect_word(const Word &word) const {
  return collect(identity(), word);
}

Element PcPresentation::multiply(const Element &a, const Element &b) const {
  Word w;
  for (int k = 0; k < n; ++k)
    if (b.exponents[k]) w.emplace_back(k, b.exponents[k]);
  return collect(a, w);
}

Element PcPresentation::inverse(const Element &a) const {
  // Build x with a * x = 1 from the lowest index upward; right-multiplying
  // by g_i^k never changes exponents below i.
  Element cur = a;
  Element x = identity();
  for (int i = 0; i < n; ++i) {
    int e = cur.exponents[i];
    if (e == 0) continue;
    int k = p - e;
    x.exponents[i] = static_cast<uint8_t>(k);
    cur = collect(cur, {{i, k}});
  }
  assert(cur.is_identity());
  return x;
}

Element PcPresentation::power(const Element &a, long long k) const {
  Element base = a;
  if (k < 0) {
    base = inverse(a);
    k = -k;
  }
  Element acc = identity();
  while (k) {
    if (k & 1) acc = multiply(acc, base);
    base = multiply(base, base);
    k >>= 1;
  }
  return acc;
}

Element PcPresentation::commutator(const Element &a, const Element &b) const {
  return multiply(multiply(inverse(a), inverse(b)), multiply(a, b));
}

Element PcPresentation::conjugate(const Element &a, const Element &b) const {
  return multiply(multiply(inverse(b), a), b);
}

long long PcPresentation::element_order(const Element &a) const {
  long long ord = 1;
  Element x = a;
  while (!x.is_identity()) {
    x = power(x, p);
    ord *= p;
  }
  return ord;
}

bool PcPresentation::is_consistent() const {
  return !first_inconsistency().has_value();
}

std::optional<std::string> PcPresentation::first_inconsistency() const {
  auto describe = [](const char *fmt, int a, int b, int c) {
    char buf[96];
    std::snprintf(buf, sizeof buf, fmt, a, b, c);
    return std::string(buf);
  };
  // Associativity overlaps g_k (g_j g_i) = (g_k g_j) g_i, k > j > i.
  for (int k = 2; k < n; ++k)
    for (int j = 1; j < k; ++j)
      for (int i = 0; i < j; ++i) {
        Element lhs = multiply(generator(k), multiply(generator(j), generator(i)));
        Element rhs = multiply(multiply(generator(k), generator(j)), generator(i));
        if (!(lhs == rhs))
          return describe("overlap g%d (g%d g%d) fails", k + 1, j + 1, i + 1);
      }
  // Power overlaps.
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < j; ++i) {
      Element pj = collect_word({{j, p}});
      Element lhs = multiply(pj, generator(i));
      Element rhs = multiply(collect_word({{j, p - 1}}),
                             multiply(generator(j), generator(i)));
      if (!(lhs == rhs))
        return describe("overlap (g%d^p) g%d fails", j + 1, i + 1, 0);
      Element pi = collect_word({{i, p}});
      Element lhs2 = multiply(generator(j), pi);
      Element rhs2 = multiply(multiply(generator(j), generator(i)),
                              collect_word({{i, p - 1}}));
      if (!(lhs2 == rhs2))
        return describe("overlap g%d (g%d^p) fails", j + 1, i + 1, 0);
    }
  for (int i = 0; i < n; ++i) {
    Element pi = collect_word({{i, p}});
    Element lhs = multiply(pi, generator(i));
    Element rhs = multiply(generator(i), pi);
    if (!(lhs == rhs))
      return describe("overlap (g%d^p) g%d fails", i + 1, i + 1, 0);
  }
  return std::nullopt;
}

uint64_t PcPresentation::order() const {
  uint64_t o = 1;
  for (int i = 0; i < n; ++i) o *= static_cast<uint64_t>(p);
  return o;
}

// ----- subgroups -----

uint64_t Subgroup::size() const {
  uint64_t o = 1;
  for (size_t i = 0; i < igs.size(); ++i) o *= static_cast<uint64_t>(parent->p);
  return o;
}

bool Subgroup::contains(const Element &e) const {
  return sift(*this, e).is_identity();
}

Element sift(const Subgroup &s, const Element &e) {
  Element cur = e;
  const PcPresentation &g = *s.parent;
  for (const Element &m : s.igs) {
    int lead = m.leading_index();
    int t = cur.exponents[lead];
    if (t) cur = g.multiply(cur, g.power(m, g.p - t));
  }
  return cur;
}

Element sift_record(const Subgroup &s, const Element &e, std::vector<int> *r) {
  Element cur = e;
  const PcPresentation &g = *s.parent;
  r->assign(s.igs.size(), 0);
  for (size_t k = 0; k < s.igs.size(); ++k) {
    int lead = s.igs[k].leading_index();
    int t = cur.exponents[lead];
    (*r)[k] = t;
    if (t) cur = g.multiply(cur, g.power(s.igs[k], g.p - t));
  }
  return cur;
}

namespace {

// Normalize a nonidentity element to leading exponent 1 by taking the power
// that inverts the leading exponent mod p.
Element normalize_leading(const PcPresentation &g, const Element &e) {
  int lead = e.leading_index();
  int le = e.exponents[lead];
  if (le == 1) return e;
  int inv = 1;
  while (inv * le % g.p != 1) ++inv;
  return g.power(e, inv);
}

// Shared closure engine: grows an igs closed under sifted powers and
// commutators of members, plus commutators with the given conjugation
// generators (for normal closures / closures inside a subgroup).
Subgroup closure_engine(const PcPresentation &g, const std::vector<Element> &gens,
                        const std::vector<Element> &conj_gens) {
  // members indexed by leading index; -1 = empty slot.
  std::vector<int> slot(g.n, -1);
  std::vector<Element> members;
  std::vector<Element> work(gens.begin(), gens.end());

  auto sift_partial = [&](Element cur) {
    for (int lead = 0; lead < g.n; ++lead) {
      if (cur.is_identity()) break;
      int t = cur.exponents[lead];
      if (t && slot[lead] >= 0)
        cur = g.multiply(cur, g.power(members[slot[lead]], g.p - t));
    }
    return cur;
  };

  while (!work.empty()) {
    Element w = work.back();
    work.pop_back();
    Element r = sift_partial(w);
    if (r.is_identity()) continue;
    r = normalize_leading(g, r);
    int lead = r.leading_index();
    assert(slot[lead] < 0 && "sifted residue landed on an occupied slot");
    slot[lead] = static_cast<int>(members.size());
    members.push_back(r);
    // New member: close under its power, commutators with members, and
    // commutators with the designated conjugation generators.
    work.push_back(g.power(r, g.p));
    for (const Element &m : members) {
      Element c = g.commutator(r, m);
      if (!c.is_identity()) work.push_back(c);
    }
    for (const Element &cg : conj_gens) {
      Element c = g.commutator(r, cg);
      if (!c.is_identity()) work.push_back(c);
    }
  }

  // Order members by leading index, then canonicalize: clear each member's
  // exponents at the leading indices of later members.
  std::sort(members.begin(), members.end(),
            [](const Element &a, const Element &b) {
              return a.leading_index() < b.leading_index();
            });
  for (size_t k = members.size(); k-- > 0;) {
    for (size_t l = k + 1; l < members.size(); ++l) {
      int lead = members[l].leading_index();
      int t = members[k].exponents[lead];
      if (t)
        members[k] = g.multiply(members[k], g.power(members[l], g.p - t));
    }
  }
  Subgroup s;
  s.parent = &g;
  s.igs = std::move(members);
  return s;
}

}  // namespace

Subgroup subgroup_closure(const PcPresentation &g,
                          const std::vector<Element> &gens) {
  return closure_engine(g, gens, {});
}

Subgroup normal_closure(const PcPresentation &g,
                        const std::vector<Element> &gens) {
  std::vector<Element> conj;
  for (int i = 0; i < g.n; ++i) conj.push_back(g.generator(i));
  return closure_engine(g, gens, conj);
}

Subgroup closure_in(const Subgroup &s, const std::vector<Element> &gens) {
  return closure_engine(*s.parent, gens, s.igs);
}

Subgroup full_subgroup(const PcPresentation &g) {
  std::vector<Element> gens;
  for (int i = 0; i < g.n; ++i) gens.push_back(g.generator(i));
  return subgroup_closure(g, gens);
}

Subgroup trivial_subgroup(const PcPresentation &g) {
  Subgroup s;
  s.parent = &g;
  return s;
}

Subgroup derived_subgroup(const PcPresentation &g) {
  std::vector<Element> comms;
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      Element c = g.commutator(g.generator(j), g.generator(i));
      if (!c.is_identity()) comms.push_back(c);
    }
  return normal_closure(g, comms);
}

Subgroup derived_of(const Subgroup &s) {
  const PcPresentation &g = *s.parent;
  std::vector<Element> comms;
  for (size_t a = 0; a < s.igs.size(); ++a)
    for (size_t b = a + 1; b < s.igs.size(); ++b) {
      Element c = g.commutator(s.igs[a], s.igs[b]);
      if (!c.is_identity()) comms.push_back(c);
    }
  return closure_in(s, comms);
}

int derived_length(const PcPresentation &g) {
  if (g.n == 0) return 0;
  int dl = 1;
  Subgroup d = derived_subgroup(g);
  while (!d.igs.empty()) {
    ++dl;
    d = derived_of(d);
  }
  return dl;
}

std::vector<Subgroup> lower_exponent_p_series(const PcPresentation &g) {
  std::vector<Subgroup> series;
  series.push_back(full_subgroup(g));
  while (!series.back().igs.empty()) {
    const Subgroup &prev = series.back();
    std::vector<Element> gens;
    for (const Element &u : prev.igs) {
      gens.push_back(g.power(u, g.p));
      for (int i = 0; i < g.n; ++i) {
        Element c = g.commutator(u, g.generator(i));
        if (!c.is_identity()) gens.push_back(c);
      }
    }
    series.push_back(normal_closure(g, gens));
  }
  return series;
}

int exponent_p_class(const PcPresentation &g) {
  return static_cast<int>(lower_exponent_p_series(g).size()) - 1;
}

std::vector<Subgroup> lower_central_series(const PcPresentation &g) {
  std::vector<Subgroup> series;
  series.push_back(full_subgroup(g));
  while (!series.back().igs.empty()) {
    const Subgroup &prev = series.back();
    std::vector<Element> gens;
    for (const Element &u : prev.igs)
      for (int i = 0; i < g.n; ++i) {
        Element c = g.commutator(u, g.generator(i));
        if (!c.is_identity()) gens.push_back(c);
      }
    Subgroup next = normal_closure(g, gens);
    if (next.igs.size() == prev.igs.size()) break;  // stabilized (abelian tail)
    series.push_back(std::move(next));
  }
  return series;
}

int nilpotency_class(const PcPresentation &g) {
  return static_cast<int>(lower_central_series(g).size()) - 1;
}

Subgroup frattini_subgroup(const PcPresentation &g) {
  std::vector<Element> gens;
  for (int i = 0; i < g.n; ++i) gens.push_back(g.power(g.generator(i), g.p));
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      Element c = g.commutator(g.generator(j), g.generator(i));
      if (!c.is_identity()) gens.push_back(c);
    }
  return normal_closure(g, gens);
}

int minimal_generator_count(const PcPresentation &g) {
  return g.n - frattini_subgroup(g).size_log();
}

// ----- weights and definitions from scratch -----

std::vector<int> weights_from_series(const PcPresentation &g) {
  auto series = lower_exponent_p_series(g);
  std::vector<int> w(g.n, 0);
  for (int i = 0; i < g.n; ++i) {
    Element gi = g.generator(i);
    for (size_t k = 0; k < series.size(); ++k) {
      if (!series[k].contains(gi)) break;
      w[i] = static_cast<int>(k) + 1;
    }
  }
  return w;
}

void scan_definitions(PcPresentation &g) {
  g.definitions.assign(g.n, std::nullopt);
  auto defines = [&](const std::vector<uint8_t> &w) -> int {
    // A relation defines the highest generator occurring in its word when
    // that generator appears to the first power: the word then reads
    // (prefix on lower generators) * g_k, so g_k is expressible from the
    // left-hand side and the earlier generators.  First relation wins.
    if (w.empty()) return -1;
    int found = -1;
    for (int k = 0; k < g.n; ++k)
      if (w[k]) found = k;
    if (found < 0 || w[found] != 1) return -1;
    return found;
  };
  for (int i = 0; i < g.n; ++i) {
    int k = defines(g.power_words[i]);
    if (k >= 0 && !g.definitions[k])
      g.definitions[k] = PcPresentation::Definition{
          PcPresentation::Definition::power, i, -1};
  }
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      int k = defines(g.comm_words[PcPresentation::comm_index(j, i)]);
      if (k >= 0 && !g.definitions[k])
        g.definitions[k] = PcPresentation::Definition{
            PcPresentation::Definition::commutator, i, j};
    }
}

// ----- quotient -----

QuotientMap quotient(const PcPresentation &g, const Subgroup &nsub) {
  // Normality: [u, g_i] must sift into nsub for every igs member u.
  for (const Element &u : nsub.igs)
    for (int i = 0; i < g.n; ++i)
      if (!nsub.contains(g.commutator(u, g.generator(i))))
        throw std::invalid_argument("quotient: subgroup is not normal");

  std::vector<bool> is_lead(g.n, false);
  for (const Element &u : nsub.igs) is_lead[u.leading_index()] = true;
  QuotientMap qm;
  qm.source = &g;
  qm.nsub = nsub;
  for (int i = 0; i < g.n; ++i)
    if (!is_lead[i]) qm.kept_indices.push_back(i);

  int m = static_cast<int>(qm.kept_indices.size());
  PcPresentation q;
  q.p = g.p;
  q.n = m;
  q.power_words.assign(m, {});
  q.comm_words.assign(static_cast<size_t>(m) * (m - 1) / 2, {});

  auto project_vec = [&](const Element &e) {
    Element r = sift(nsub, e);
    std::vector<uint8_t> v(m, 0);
    for (int a = 0; a < m; ++a) v[a] = r.exponents[qm.kept_indices[a]];
    return v;
  };
  auto to_word = [&](const std::vector<uint8_t> &v) {
    bool nonzero = std::any_of(v.begin(), v.end(), [](uint8_t x) { return x; });
    return nonzero ? v : std::vector<uint8_t>{};
  };

  for (int a = 0; a < m; ++a) {
    Element img = g.power(g.generator(qm.kept_indices[a]), g.p);
    q.power_words[a] = to_word(project_vec(img));
  }
  for (int b = 1; b < m; ++b)
    for (int a = 0; a < b; ++a) {
      Element img = g.commutator(g.generator(qm.kept_indices[b]),
                                 g.generator(qm.kept_indices[a]));
      q.comm_words[PcPresentation::comm_index(b, a)] = to_word(project_vec(img));
    }
  q.finalize();
  q.weights = weights_from_series(q);
  scan_definitions(q);
  qm.group = std::move(q);
  return qm;
}

Element QuotientMap::project(const Element &e) const {
  Element r = sift(nsub, e);
  Element out{std::vector<uint8_t>(kept_indices.size(), 0)};
  for (size_t a = 0; a < kept_indices.size(); ++a)
    out.exponents[a] = r.exponents[kept_indices[a]];
  return out;
}

Element QuotientMap::lift(const Element &q) const {
  Element out{std::vector<uint8_t>(source->n, 0)};
  for (size_t a = 0; a < kept_indices.size(); ++a)
    out.exponents[kept_indices[a]] = q.exponents[a];
  return out;
}

// ----- abelian type invariants -----

std::vector<int> igs_coordinates(const Subgroup &s, const Element &e) {
  const PcPresentation &g = *s.parent;
  std::vector<int> a(s.igs.size(), 0);
  Element cur = e;
  for (size_t k = 0; k < s.igs.size(); ++k) {
    int lead = s.igs[k].leading_index();
    a[k] = cur.exponents[lead];
    if (a[k]) cur = g.multiply(g.power(s.igs[k], -a[k]), cur);
  }
  assert(cur.is_identity() && "element not in subgroup");
  return a;
}

PcPresentation induced_presentation(const Subgroup &s) {
  const PcPresentation &g = *s.parent;
  int m = static_cast<int>(s.igs.size());
  PcPresentation q;
  q.p = g.p;
  q.n = m;
  q.power_words.assign(m, {});
  q.comm_words.assign(static_cast<size_t>(m) * (m - 1) / 2, {});
  auto to_word = [&](const std::vector<int> &a) {
    std::vector<uint8_t> v(a.begin(), a.end());
    bool nonzero = std::any_of(v.begin(), v.end(), [](uint8_t x) { return x; });
    return nonzero ? v : std::vector<uint8_t>{};
  };
  for (int k = 0; k < m; ++k)
    q.power_words[k] = to_word(igs_coordinates(s, g.power(s.igs[k], g.p)));
  for (int j = 1; j < m; ++j)
    for (int i = 0; i < j; ++i)
      q.comm_words[PcPresentation::comm_index(j, i)] =
          to_word(igs_coordinates(s, g.commutator(s.igs[j], s.igs[i])));
  q.finalize();
  q.weights = weights_from_series(q);
  scan_definitions(q);
  return q;
}

AbelianTypeInvariants abelian_type_invariants(const PcPresentation &g) {
  // Abelianized relation matrix: rows p*e_i - pow_i and comm_{ji}.
  int m = g.n;
  IntMatrix rel(m + m * (m - 1) / 2, m);
  int row = 0;
  for (int i = 0; i < m; ++i, ++row) {
    rel.set(row, i, g.p);
    const auto &w = g.power_words[i];
    if (!w.empty())
      for (int k = 0; k < m; ++k)
        if (w[k]) rel.set(row, k, rel.at(row, k) - w[k]);
  }
  for (int j = 1; j < m; ++j)
    for (int i = 0; i < j; ++i, ++row) {
      const auto &w = g.comm_words[PcPresentation::comm_index(j, i)];
      if (!w.empty())
        for (int k = 0; k < m; ++k)
          if (w[k]) rel.set(row, k, w[k]);
    }
  auto divisors = smith_normal_form(rel);
  AbelianTypeInvariants ati;
  for (long long d : divisors) {
    assert(d != 0 && "abelianization of a finite p-group must be finite");
    int log = 0;
    while (d > 1) {
      assert(d % g.p == 0);
      d /= g.p;
      ++log;
    }
    if (log > 0) ati.logs.push_back(log);
  }
  std::sort(ati.logs.rbegin(), ati.logs.rend());
  return ati;
}

AbelianTypeInvariants abelian_type_invariants(const Subgroup &s) {
  return abelian_type_invariants(induced_presentation(s));
}

std::string AbelianTypeInvariants::str() const {
  if (logs.empty()) return "1";
  bool wide = std::any_of(logs.begin(), logs.end(), [](int l) { return l > 9; });
  std::string out;
  if (wide) {
    out = "(";
    for (size_t i = 0; i < logs.size(); ++i) {
      if (i) out += ",";
      out += std::to_string(logs[i]);
    }
    out += ")";
  } else {
    for (int l : logs) out += std::to_string(l);
  }
  return out;
}

// ----- text format -----

std::string write_presentation(const PcPresentation &g) {
  std::string out;
  out += "p " + std::to_string(g.p) + "\n";
  out += "ngens " + std::to_string(g.n) + "\n";
  auto word_str = [&](const std::vector<uint8_t> &w) {
    std::string s;
    for (int k = 0; k < g.n; ++k)
      if (!w.empty() && w[k])
        s += " " + std::to_string(k + 1) + "^" + std::to_string(w[k]);
    return s;
  };
  for (int i = 0; i < g.n; ++i)
    if (!g.power_words[i].empty())
      out += "pow " + std::to_string(i + 1) + " =" + word_str(g.power_words[i]) +
             "\n";
  for (int j = 1; j < g.n; ++j)
    for (int i = 0; i < j; ++i) {
      const auto &w = g.comm_words[PcPresentation::comm_index(j, i)];
      if (!w.empty())
        out += "comm " + std::to_string(j + 1) + " " + std::to_string(i + 1) +
               " =" + word_str(w) + "\n";
    }
  return out;
}

PcPresentation read_presentation(const std::string &text) {
  PcPresentation g;
  g.p = 0;
  g.n = -1;
  std::istringstream in(text);
  std::string line;
  bool have_p = false, have_n = false;
  int lineno = 0;
  auto fail = [&](const std::string &msg) {
    throw std::invalid_argument("presentation line " + std::to_string(lineno) +
                                ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "p") {
      if (!(ls >> g.p) || g.p < 2) fail("bad prime");
      have_p = true;
    } else if (kw == "ngens") {
      if (!(ls >> g.n) || g.n < 0) fail("bad generator count");
      have_n = true;
      g.power_words.assign(g.n, {});
      g.comm_words.assign(static_cast<size_t>(g.n) * (g.n - 1) / 2, {});
    } else if (kw == "pow" || kw == "comm") {
      if (!have_p || !have_n) fail("relation before p/ngens");
      int j = 0, i = 0;
      if (kw == "pow") {
        if (!(ls >> i)) fail("bad power index");
        j = i;
      } else {
        if (!(ls >> j >> i)) fail("bad commutator indices");
      }
      std::string eq;
      if (!(ls >> eq) || eq != "=") fail("expected '='");
      if (i < 1 || i > g.n || j < 1 || j > g.n) fail("index out of range");
      if (kw == "comm" && j <= i) fail("commutator requires j > i");
      std::vector<uint8_t> w(g.n, 0);
      std::string tok;
      bool any = false;
      while (ls >> tok) {
        auto caret = tok.find('^');
        if (caret == std::string::npos) fail("expected <gen>^<exp>");
        int gen = 0, exp = 0;
        try {
          gen = std::stoi(tok.substr(0, caret));
          exp = std::stoi(tok.substr(caret + 1));
        } catch (...) {
          fail("bad generator term");
        }
        if (gen < 1 || gen > g.n) fail("index out of range");
        if (exp < 1 || exp >= g.p) fail("exponent out of range");
        if (w[gen - 1]) fail("duplicate generator in word");
        w[gen - 1] = static_cast<uint8_t>(exp);
        any = true;
      }
      auto &target = (kw == "pow")
                         ? g.power_words[i - 1]
                         : g.comm_words[PcPresentation::comm_index(j - 1, i - 1)];
      if (!target.empty()) fail("duplicate relation");
      if (any) target = std::move(w);
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  if (!have_p || !have_n) throw std::invalid_argument("missing p or ngens");
  g.finalize();  // validates support and ranges
  if (auto bad = g.first_inconsistency())
    throw std::invalid_argument("inconsistent presentation: " + *bad);
  g.weights = weights_from_series(g);
  scan_definitions(g);
  return g;
}

PcPresentation presentation_c9c9() {
  PcPresentation g;
  g.p = 3;
  g.n = 4;
  g.power_words.assign(4, {});
  g.comm_words.assign(6, {});
  g.power_words[0] = {0, 0, 1, 0};  // g1^3 = g3
  g.power_words[1] = {0, 0, 0, 1};  // g2^3 = g4
  g.finalize();
  g.weights = {1, 1, 2, 2};
  scan_definitions(g);
  return g;
}

}  // namespace pgsieve
