#include "pgsieve/capitulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgsieve {

namespace {

KappaEntry entry(LatticeLabel label) {
  return KappaEntry{label, label.str()};
}

// The pattern-order source label of kappa[layer][idx].
LatticeLabel source_label(int layer, int idx) {
  switch (layer) {
    case 0:
      return {LatticeLabel::G, 0, 0};
    case 1:
      return {LatticeLabel::H, idx + 1, 0};
    case 2:
      if (idx == 12) return {LatticeLabel::J0, 0, 0};
      return {LatticeLabel::J, idx / 3 + 1, idx % 3 + 1};
    case 3:
      return {LatticeLabel::K, idx + 1, 0};
    default:
      return {LatticeLabel::Gprime, 0, 0};
  }
}

// All kernels of a pattern resolved to labels, or nullopt if any kernel
// could not be identified with a lattice member.
struct ResolvedKernels {
  LatticeLabel top;               // kernel at G
  std::array<LatticeLabel, 4> h;  // kernels at H1..H4
  std::array<LatticeLabel, 12> j; // kernels at J11..J43 (i outer)
  LatticeLabel j0;                // kernel at J0
  std::array<LatticeLabel, 4> k;  // kernels at K1..K4
  LatticeLabel bottom;            // kernel at G'
};

std::optional<ResolvedKernels> resolve(const ArtinPattern &p) {
  for (int l = 0; l <= 4; ++l)
    if (p.kappa[l].size() != (l == 0 || l == 4 ? 1u : l == 2 ? 13u : 4u))
      return std::nullopt;
  ResolvedKernels r;
  auto get = [&](int layer, int idx, LatticeLabel *out) {
    const std::optional<LatticeLabel> &label = p.kappa[layer][idx].label;
    if (!label) return false;
    *out = *label;
    return true;
  };
  bool ok = get(0, 0, &r.top) && get(2, 12, &r.j0) && get(4, 0, &r.bottom);
  for (int i = 0; i < 4 && ok; ++i)
    ok = get(1, i, &r.h[i]) && get(3, i, &r.k[i]);
  for (int idx = 0; idx < 12 && ok; ++idx) ok = get(2, idx, &r.j[idx]);
  if (!ok) return std::nullopt;
  return r;
}

}  // namespace

Perm perm_identity(int n) {
  Perm pi;
  for (int i = 1; i <= n; ++i) pi.image.push_back(i);
  return pi;
}

bool is_permutation(const Perm &pi, int n) {
  if (static_cast<int>(pi.image.size()) != n) return false;
  std::vector<bool> hit(n + 1, false);
  for (int v : pi.image) {
    if (v < 1 || v > n || hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

Perm perm_compose(const Perm &f, const Perm &g) {
  if (f.image.size() != g.image.size())
    throw std::invalid_argument("composed permutations must have equal degree");
  Perm out;
  for (int v : g.image) out.image.push_back(f.image[v - 1]);
  return out;
}

Perm perm_inverse(const Perm &pi) {
  Perm out;
  out.image.assign(pi.image.size(), 0);
  for (size_t i = 0; i < pi.image.size(); ++i)
    out.image[pi.image[i] - 1] = static_cast<int>(i) + 1;
  return out;
}

std::string cycle_string(const Perm &pi) {
  const int n = static_cast<int>(pi.image.size());
  std::string out;
  std::vector<bool> used(n + 1, false);
  for (int start = 1; start <= n; ++start) {
    if (used[start] || pi.image[start - 1] == start) continue;
    out += '(';
    int cur = start;
    do {
      used[cur] = true;
      out += std::to_string(cur);
      cur = pi.image[cur - 1];
    } while (cur != start);
    out += ')';
  }
  return out.empty() ? "1" : out;
}

std::vector<int> cycle_type(const Perm &pi) {
  const int n = static_cast<int>(pi.image.size());
  std::vector<int> lengths;
  std::vector<bool> used(n + 1, false);
  for (int start = 1; start <= n; ++start) {
    if (used[start]) continue;
    int len = 0;
    int cur = start;
    do {
      used[cur] = true;
      ++len;
      cur = pi.image[cur - 1];
    } while (cur != start);
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<int>());
  return lengths;
}

bool label_leq(const LatticeLabel &a, const LatticeLabel &b) {
  if (a == b) return true;
  if (a.kind == LatticeLabel::Gprime) return true;
  if (b.kind == LatticeLabel::G) return true;
  if (a.kind == LatticeLabel::G || b.kind == LatticeLabel::Gprime)
    return false;
  switch (a.kind) {
    case LatticeLabel::K:
      if (b.kind == LatticeLabel::J0 || b.kind == LatticeLabel::H) return true;
      return b.kind == LatticeLabel::J && b.i == a.i;
    case LatticeLabel::J0:
      return b.kind == LatticeLabel::H;
    case LatticeLabel::J:
      return b.kind == LatticeLabel::H && b.i == a.i;
    default:  // distinct maximal subgroups are incomparable
      return false;
  }
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::HBC:
      return "HBC";
    case Scenario::BiPolarized:
      return "BiPolarized";
    case Scenario::UniPolarized:
      return "UniPolarized";
    default:
      return "Other";
  }
}

bool check_arithmetical(const ArtinPattern &pattern) {
  // First axiom: only S = G may have kernel G'.  An unresolved kernel
  // cannot be verified, so it fails closed.
  for (int l = 1; l <= 3; ++l)
    for (const KappaEntry &e : pattern.kappa[l])
      if (!e.label || e.label->kind == LatticeLabel::Gprime) return false;
  // Second axiom: the transfer to G' kills everything.
  if (pattern.kappa[4].size() != 1) return false;
  const KappaEntry &bottom = pattern.kappa[4][0];
  return bottom.label && bottom.label->kind == LatticeLabel::G;
}

std::vector<std::string> check_inclusions(const ArtinPattern &pattern) {
  std::vector<std::string> out;
  for (int l = 0; l <= 4; ++l)
    for (size_t idx = 0; idx < pattern.kappa[l].size(); ++idx)
      if (!pattern.kappa[l][idx].label)
        out.push_back("unresolved kernel at " +
                      source_label(l, static_cast<int>(idx)).str());
  std::optional<ResolvedKernels> r = resolve(pattern);
  if (!r) {
    if (out.empty()) out.push_back("malformed kernel layers");
    return out;
  }

  auto require_leq = [&](const LatticeLabel &small, LatticeLabel small_src,
                         const LatticeLabel &big, LatticeLabel big_src) {
    if (!label_leq(small, big))
      out.push_back("kernel at " + small_src.str() + " = " + small.str() +
                    " does not lie inside kernel at " + big_src.str() + " = " +
                    big.str());
  };

  if (r->top.kind != LatticeLabel::Gprime)
    out.push_back("kernel at G = " + r->top.str() + ", expected G'");
  if (r->bottom.kind != LatticeLabel::G)
    out.push_back("kernel at G' = " + r->bottom.str() + ", expected G");

  LatticeLabel j0_src = {LatticeLabel::J0, 0, 0};
  for (int i = 1; i <= 4; ++i) {
    LatticeLabel h_src = {LatticeLabel::H, i, 0};
    LatticeLabel k_src = {LatticeLabel::K, i, 0};
    const LatticeLabel &ker_h = r->h[i - 1];
    const LatticeLabel &ker_k = r->k[i - 1];
    if (ker_h.kind == LatticeLabel::Gprime)
      out.push_back("kernel at " + h_src.str() + " equals G'");
    for (int k = 1; k <= 3; ++k) {
      LatticeLabel j_src = {LatticeLabel::J, i, k};
      const LatticeLabel &ker_j = r->j[(i - 1) * 3 + (k - 1)];
      require_leq(ker_h, h_src, ker_j, j_src);
      require_leq(ker_j, j_src, ker_k, k_src);
    }
    require_leq(ker_h, h_src, r->j0, j0_src);
  }
  for (int j = 1; j <= 4; ++j)
    require_leq(r->j0, j0_src, r->k[j - 1],
                LatticeLabel{LatticeLabel::K, j, 0});
  return out;
}

CapitulationReport classify(const ArtinPattern &pattern) {
  CapitulationReport rep;
  rep.arithmetical = check_arithmetical(pattern);
  rep.violations = check_inclusions(pattern);
  rep.scenario = Scenario::Other;

  std::optional<ResolvedKernels> r = resolve(pattern);
  if (!r) return rep;

  // Harmonically balanced: a full permutation of the lattice, which pins
  // the ends, fixes J0, and decomposes into (lambda; rho_1..rho_4).
  auto try_hbc = [&]() -> bool {
    if (r->top.kind != LatticeLabel::Gprime ||
        r->bottom.kind != LatticeLabel::G ||
        r->j0.kind != LatticeLabel::J0)
      return false;
    Perm lambda;
    for (int i = 0; i < 4; ++i) {
      if (r->h[i].kind != LatticeLabel::K) return false;
      lambda.image.push_back(r->h[i].i);
    }
    if (!is_permutation(lambda, 4)) return false;
    std::array<Perm, 4> rho;
    for (int i = 0; i < 4; ++i) {
      if (r->k[i].kind != LatticeLabel::H || r->k[i].i != lambda.image[i])
        return false;
      for (int k = 0; k < 3; ++k) {
        const LatticeLabel &ker = r->j[i * 3 + k];
        if (ker.kind != LatticeLabel::J || ker.i != lambda.image[i])
          return false;
        rho[i].image.push_back(ker.k);
      }
      if (!is_permutation(rho[i], 3)) return false;
    }
    rep.scenario = Scenario::HBC;
    rep.lambda = std::move(lambda);
    rep.rho = std::move(rho);
    return true;
  };
  if (try_hbc()) return rep;

  bool all_k = std::all_of(r->h.begin(), r->h.end(), [](const LatticeLabel &l) {
    return l.kind == LatticeLabel::K;
  });
  if (all_k) {
    std::vector<int> values;
    for (const LatticeLabel &l : r->h) values.push_back(l.i);
    std::sort(values.begin(), values.end());
    int distinct = static_cast<int>(
        std::unique(values.begin(), values.end()) - values.begin());
    if (distinct == 2 && r->j0.kind == LatticeLabel::J0)
      rep.scenario = Scenario::BiPolarized;
    else if (distinct == 1 && r->j0.kind == LatticeLabel::J)
      rep.scenario = Scenario::UniPolarized;
  }
  return rep;
}

ArtinPattern hbc_of_permutation_data(const Perm &lambda,
                                     const std::array<Perm, 4> &rho) {
  if (!is_permutation(lambda, 4))
    throw std::invalid_argument("lambda must be a permutation of 1..4");
  for (const Perm &p : rho)
    if (!is_permutation(p, 3))
      throw std::invalid_argument("each rho must be a permutation of 1..3");

  ArtinPattern out;
  const int sizes[5] = {1, 4, 13, 4, 1};
  for (int l = 0; l <= 4; ++l)
    out.tau[l].assign(sizes[l], AbelianTypeInvariants{});

  out.kappa[0].push_back(entry({LatticeLabel::Gprime, 0, 0}));
  for (int i = 1; i <= 4; ++i)
    out.kappa[1].push_back(entry({LatticeLabel::K, lambda.image[i - 1], 0}));
  for (int i = 1; i <= 4; ++i)
    for (int k = 1; k <= 3; ++k)
      out.kappa[2].push_back(entry(
          {LatticeLabel::J, lambda.image[i - 1], rho[i - 1].image[k - 1]}));
  out.kappa[2].push_back(entry({LatticeLabel::J0, 0, 0}));
  for (int i = 1; i <= 4; ++i)
    out.kappa[3].push_back(entry({LatticeLabel::H, lambda.image[i - 1], 0}));
  out.kappa[4].push_back(entry({LatticeLabel::G, 0, 0}));
  return out;
}

std::string to_json(const CapitulationReport &report) {
  std::string out = "{\"scenario\":\"" + scenario_name(report.scenario) + "\"";
  if (report.scenario == Scenario::HBC) {
    out += ",\"lambda\":\"" + cycle_string(*report.lambda) + "\"";
    out += ",\"rho\":[";
    for (int i = 0; i < 4; ++i) {
      if (i) out += ',';
      out += "\"" + cycle_string((*report.rho)[i]) + "\"";
    }
    out += ']';
  }
  out += ",\"arithmetical\":";
  out += report.arithmetical ? "true" : "false";
  if (!report.violations.empty()) {
    out += ",\"violations\":[";
    for (size_t i = 0; i < report.violations.size(); ++i) {
      if (i) out += ',';
      out += "\"" + report.violations[i] + "\"";
    }
    out += ']';
  }
  out += '}';
  return out;
}

}  // namespace pgsieve
