#include "pgsieve/fplinalg.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <numeric>

namespace pgsieve {

namespace {

int mod_inverse(int a, int p) {
  // p is a small prime and a != 0 mod p; Fermat via simple scan is fine.
  a %= p;
  for (int x = 1; x < p; ++x)
    if (a * x % p == 1) return x;
  assert(false && "not invertible");
  return 0;
}

}  // namespace

FpMatrix FpMatrix::identity(int p, int n) {
  FpMatrix m(p, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

FpMatrix FpMatrix::from_rows(int p, const std::vector<std::vector<int>> &data) {
  int rows = static_cast<int>(data.size());
  int cols = rows == 0 ? 0 : static_cast<int>(data[0].size());
  FpMatrix m(p, rows, cols);
  for (int r = 0; r < rows; ++r) {
    assert(static_cast<int>(data[r].size()) == cols);
    for (int c = 0; c < cols; ++c) m.set(r, c, data[r][c]);
  }
  return m;
}

void FpMatrix::set(int r, int c, int v) {
  v %= p;
  if (v < 0) v += p;
  entries[static_cast<size_t>(r) * cols + c] = static_cast<uint8_t>(v);
}

std::vector<uint8_t> FpMatrix::row(int r) const {
  return std::vector<uint8_t>(entries.begin() + static_cast<size_t>(r) * cols,
                              entries.begin() + static_cast<size_t>(r + 1) * cols);
}

bool FpMatrix::is_zero() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](uint8_t e) { return e == 0; });
}

FpMatrix mat_mul(const FpMatrix &a, const FpMatrix &b) {
  assert(a.p == b.p && a.cols == b.rows);
  FpMatrix out(a.p, a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      int aik = a.at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols; ++j) {
        int v = (out.at(i, j) + aik * b.at(k, j)) % a.p;
        out.entries[static_cast<size_t>(i) * out.cols + j] =
            static_cast<uint8_t>(v);
      }
    }
  return out;
}

FpMatrix mat_transpose(const FpMatrix &m) {
  FpMatrix out(m.p, m.cols, m.rows);
  for (int i = 0; i < m.rows; ++i)
    for (int j = 0; j < m.cols; ++j)
      out.entries[static_cast<size_t>(j) * out.cols + i] = m.at(i, j);
  return out;
}

std::optional<FpMatrix> mat_inverse(const FpMatrix &m) {
  assert(m.rows == m.cols);
  int n = m.rows;
  FpMatrix aug(m.p, n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.set(r, c, m.at(r, c));
    aug.set(r, n + r, 1);
  }
  auto [e, rank] = rref(aug);
  // The identity block forces full rank, so test invertibility by whether
  // the left block reduced to the identity.
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (e.at(r, c) != (r == c ? 1 : 0)) return std::nullopt;
  FpMatrix inv(m.p, n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv.set(r, c, e.at(r, n + c));
  return inv;
}

std::vector<uint8_t> mat_apply(const FpMatrix &a, const std::vector<uint8_t> &v) {
  assert(static_cast<int>(v.size()) == a.cols);
  std::vector<uint8_t> out(a.rows, 0);
  for (int i = 0; i < a.rows; ++i) {
    int acc = 0;
    for (int j = 0; j < a.cols; ++j) acc += a.at(i, j) * v[j];
    out[i] = static_cast<uint8_t>(acc % a.p);
  }
  return out;
}

std::pair<FpMatrix, int> rref(const FpMatrix &m) {
  FpMatrix a = m;
  int rank = 0;
  for (int col = 0; col < a.cols && rank < a.rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < a.rows; ++r)
      if (a.at(r, col) != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    if (pivot != rank)
      for (int c = 0; c < a.cols; ++c) {
        std::swap(a.entries[static_cast<size_t>(pivot) * a.cols + c],
                  a.entries[static_cast<size_t>(rank) * a.cols + c]);
      }
    int inv = mod_inverse(a.at(rank, col), a.p);
    for (int c = col; c < a.cols; ++c)
      a.set(rank, c, a.at(rank, c) * inv);
    for (int r = 0; r < a.rows; ++r) {
      if (r == rank) continue;
      int f = a.at(r, col);
      if (f == 0) continue;
      for (int c = col; c < a.cols; ++c)
        a.set(r, c, a.at(r, c) - f * a.at(rank, c));
    }
    ++rank;
  }
  return {a, rank};
}

std::optional<std::vector<uint8_t>> solve(const FpMatrix &a,
                                          const std::vector<uint8_t> &b) {
  assert(static_cast<int>(b.size()) == a.rows);
  FpMatrix aug(a.p, a.rows, a.cols + 1);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) aug.set(r, c, a.at(r, c));
    aug.set(r, a.cols, b[r]);
  }
  auto [e, rank] = rref(aug);
  std::vector<uint8_t> x(a.cols, 0);
  for (int r = 0; r < rank; ++r) {
    int lead = -1;
    for (int c = 0; c <= a.cols; ++c)
      if (e.at(r, c) != 0) {
        lead = c;
        break;
      }
    if (lead == a.cols) return std::nullopt;  // row 0 ... 0 | nonzero
    x[lead] = e.at(r, a.cols);
  }
  return x;
}

FpSubspace kernel_basis(const FpMatrix &m) {
  auto [e, rank] = rref(m);
  std::vector<int> pivot_col(rank);
  std::vector<bool> is_pivot(m.cols, false);
  for (int r = 0; r < rank; ++r) {
    int c = 0;
    while (e.at(r, c) == 0) ++c;
    pivot_col[r] = c;
    is_pivot[c] = true;
  }
  FpSubspace ker;
  ker.ambient_dim = m.cols;
  ker.basis = FpMatrix(m.p, m.cols - rank, m.cols);
  int row = 0;
  for (int fc = 0; fc < m.cols; ++fc) {
    if (is_pivot[fc]) continue;
    // Free column fc: kernel vector with 1 there, pivots balancing.
    ker.basis.set(row, fc, 1);
    for (int r = 0; r < rank; ++r)
      ker.basis.set(row, pivot_col[r], -static_cast<int>(e.at(r, fc)));
    ++row;
  }
  // Rows are already reduced echelon after sorting by pivot column (the free
  // column is the leading 1 only when read in a particular order); normalize
  // to the canonical form to be safe.
  return FpSubspace::span(ker.basis);
}

FpSubspace FpSubspace::zero(int p, int ambient_dim) {
  FpSubspace s;
  s.ambient_dim = ambient_dim;
  s.basis = FpMatrix(p, 0, ambient_dim);
  return s;
}

FpSubspace FpSubspace::full(int p, int ambient_dim) {
  FpSubspace s;
  s.ambient_dim = ambient_dim;
  s.basis = FpMatrix::identity(p, ambient_dim);
  return s;
}

FpSubspace FpSubspace::span(const FpMatrix &m) {
  auto [e, rank] = rref(m);
  FpSubspace s;
  s.ambient_dim = m.cols;
  s.basis = FpMatrix(m.p, rank, m.cols);
  std::copy(e.entries.begin(),
            e.entries.begin() + static_cast<size_t>(rank) * m.cols,
            s.basis.entries.begin());
  return s;
}

std::vector<uint8_t> FpSubspace::reduce(const std::vector<uint8_t> &v) const {
  assert(static_cast<int>(v.size()) == ambient_dim);
  std::vector<uint8_t> r = v;
  int p = basis.p;
  for (int i = 0; i < basis.rows; ++i) {
    int lead = 0;
    while (lead < ambient_dim && basis.at(i, lead) == 0) ++lead;
    if (lead == ambient_dim) continue;
    int f = r[lead];  // pivot entry is 1 in reduced echelon form
    if (f == 0) continue;
    for (int c = lead; c < ambient_dim; ++c) {
      int nv = (r[c] - f * basis.at(i, c)) % p;
      if (nv < 0) nv += p;
      r[c] = static_cast<uint8_t>(nv);
    }
  }
  return r;
}

bool FpSubspace::contains(const std::vector<uint8_t> &v) const {
  auto r = reduce(v);
  return std::all_of(r.begin(), r.end(), [](uint8_t e) { return e == 0; });
}

bool FpSubspace::contains(const FpSubspace &other) const {
  for (int i = 0; i < other.basis.rows; ++i)
    if (!contains(other.basis.row(i))) return false;
  return true;
}

std::string FpSubspace::key() const {
  std::string k;
  k.reserve(4 + basis.entries.size());
  k.push_back(static_cast<char>(ambient_dim & 0xff));
  k.push_back(static_cast<char>((ambient_dim >> 8) & 0xff));
  k.push_back(static_cast<char>(basis.rows & 0xff));
  k.push_back(static_cast<char>((basis.rows >> 8) & 0xff));
  k.append(basis.entries.begin(), basis.entries.end());
  return k;
}

FpSubspace subspace_sum(const FpSubspace &a, const FpSubspace &b) {
  assert(a.ambient_dim == b.ambient_dim);
  FpMatrix stacked(a.basis.p, a.basis.rows + b.basis.rows, a.ambient_dim);
  std::copy(a.basis.entries.begin(), a.basis.entries.end(),
            stacked.entries.begin());
  std::copy(b.basis.entries.begin(), b.basis.entries.end(),
            stacked.entries.begin() + a.basis.entries.size());
  return FpSubspace::span(stacked);
}

FpSubspace subspace_intersection(const FpSubspace &a, const FpSubspace &b) {
  // Zassenhaus-free approach: intersection = kernel of the map
  // (x, y) -> sum over stacked bases, projected. Solve for coefficient pairs
  // (u, v) with u·A = v·B, i.e. kernel of [A^T | -B^T].
  assert(a.ambient_dim == b.ambient_dim);
  int p = a.basis.p;
  int da = a.basis.rows, db = b.basis.rows;
  FpMatrix sys(p, a.ambient_dim, da + db);
  for (int c = 0; c < a.ambient_dim; ++c) {
    for (int i = 0; i < da; ++i) sys.set(c, i, a.basis.at(i, c));
    for (int j = 0; j < db; ++j) sys.set(c, da + j, -static_cast<int>(b.basis.at(j, c)));
  }
  FpSubspace coeff = kernel_basis(sys);
  FpMatrix vecs(p, coeff.dim(), a.ambient_dim);
  for (int r = 0; r < coeff.dim(); ++r)
    for (int c = 0; c < a.ambient_dim; ++c) {
      int acc = 0;
      for (int i = 0; i < da; ++i)
        acc += coeff.basis.at(r, i) * a.basis.at(i, c);
      vecs.set(r, c, acc);
    }
  return FpSubspace::span(vecs);
}

FpSubspace subspace_image(const FpMatrix &m, const FpSubspace &s) {
  assert(m.rows == m.cols && m.cols == s.ambient_dim);
  FpMatrix rows(m.p, s.dim(), s.ambient_dim);
  for (int r = 0; r < s.dim(); ++r) {
    auto img = mat_apply(m, s.basis.row(r));
    std::copy(img.begin(), img.end(),
              rows.entries.begin() + static_cast<size_t>(r) * s.ambient_dim);
  }
  return FpSubspace::span(rows);
}

SubspaceStream::SubspaceStream(int p, int ambient_dim, int codim,
                               std::optional<FpSubspace> constraint)
    : p_(p), n_(ambient_dim), d_(ambient_dim - codim),
      constraint_(std::move(constraint)) {
  assert(codim >= 0 && codim <= ambient_dim);
  if (d_ < 0) {
    done_ = true;
    return;
  }
  pivots_.resize(d_);
  for (int i = 0; i < d_; ++i) pivots_[i] = i;
  reset_free_positions();
}

void SubspaceStream::reset_free_positions() {
  free_pos_.clear();
  std::vector<bool> is_pivot(n_, false);
  for (int c : pivots_) is_pivot[c] = true;
  for (int r = 0; r < d_; ++r)
    for (int c = pivots_[r] + 1; c < n_; ++c)
      if (!is_pivot[c]) free_pos_.emplace_back(r, c);
  free_val_.assign(free_pos_.size(), 0);
}

bool SubspaceStream::advance_pivots() {
  // Next lexicographic d-combination of {0..n-1}.
  if (d_ == 0) return false;
  int i = d_ - 1;
  while (i >= 0 && pivots_[i] == n_ - d_ + i) --i;
  if (i < 0) return false;
  ++pivots_[i];
  for (int j = i + 1; j < d_; ++j) pivots_[j] = pivots_[j - 1] + 1;
  reset_free_positions();
  return true;
}

FpSubspace SubspaceStream::current() const {
  FpSubspace s;
  s.ambient_dim = n_;
  s.basis = FpMatrix(p_, d_, n_);
  for (int r = 0; r < d_; ++r) s.basis.set(r, pivots_[r], 1);
  for (size_t k = 0; k < free_pos_.size(); ++k)
    s.basis.set(free_pos_[k].first, free_pos_[k].second, free_val_[k]);
  return s;
}

bool SubspaceStream::satisfies_constraint(const FpSubspace &u) const {
  if (!constraint_) return true;
  return subspace_sum(u, *constraint_).dim() == n_;
}

std::optional<FpSubspace> SubspaceStream::next() {
  while (!done_) {
    bool have_candidate;
    if (fresh_) {
      fresh_ = false;
      have_candidate = true;
    } else {
      // Base-p odometer over free values, last position fastest.
      have_candidate = false;
      for (int k = static_cast<int>(free_val_.size()) - 1; k >= 0; --k) {
        if (free_val_[k] + 1 < p_) {
          ++free_val_[k];
          std::fill(free_val_.begin() + k + 1, free_val_.end(), 0);
          have_candidate = true;
          break;
        }
      }
      if (!have_candidate) {
        if (!advance_pivots()) {
          done_ = true;
          return std::nullopt;
        }
        have_candidate = true;
      }
    }
    if (have_candidate) {
      FpSubspace u = current();
      if (satisfies_constraint(u)) return u;
    }
  }
  return std::nullopt;
}

uint64_t SubspaceStream::total_count(int p, int ambient_dim, int dim) {
  if (dim < 0 || dim > ambient_dim) return 0;
  unsigned __int128 r = 1;
  auto ppow = [&](int e) {
    unsigned __int128 v = 1;
    for (int i = 0; i < e; ++i) v *= static_cast<unsigned>(p);
    return v;
  };
  for (int i = 0; i < dim; ++i) {
    r *= ppow(ambient_dim - i) - 1;
    r /= ppow(i + 1) - 1;  // exact at every step
  }
  return static_cast<uint64_t>(r);
}

std::vector<FpSubspace> enumerate_subspaces(int p, int ambient_dim, int codim,
                                            std::optional<FpSubspace> constraint) {
  SubspaceStream stream(p, ambient_dim, codim, std::move(constraint));
  std::vector<FpSubspace> out;
  while (auto s = stream.next()) out.push_back(std::move(*s));
  return out;
}

std::vector<long long> smith_normal_form(const IntMatrix &m) {
  int rows = m.rows, cols = m.cols;
  std::vector<std::vector<long long>> a(rows, std::vector<long long>(cols));
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) a[r][c] = m.at(r, c);

  int t = 0;
  int nmin = std::min(rows, cols);
  while (t < nmin) {
    // Find the nonzero entry of least absolute value in the submatrix.
    int pr = -1, pc = -1;
    long long best = 0;
    for (int r = t; r < rows; ++r)
      for (int c = t; c < cols; ++c)
        if (a[r][c] != 0 && (pr < 0 || std::llabs(a[r][c]) < best)) {
          pr = r;
          pc = c;
          best = std::llabs(a[r][c]);
        }
    if (pr < 0) break;  // submatrix is zero
    std::swap(a[t], a[pr]);
    for (int r = 0; r < rows; ++r) std::swap(a[r][t], a[r][pc]);

    bool again = false;
    // Clear column t with remainder steps; restart pivot hunt if a smaller
    // nonzero remainder shows up.
    for (int r = t + 1; r < rows; ++r) {
      if (a[r][t] == 0) continue;
      long long q = a[r][t] / a[t][t];
      for (int c = t; c < cols; ++c) a[r][c] -= q * a[t][c];
      if (a[r][t] != 0) again = true;
    }
    if (again) continue;
    for (int c = t + 1; c < cols; ++c) {
      if (a[t][c] == 0) continue;
      long long q = a[t][c] / a[t][t];
      for (int r = t; r < rows; ++r) a[r][c] -= q * a[r][t];
      if (a[t][c] != 0) again = true;
    }
    if (again) continue;

    // Enforce divisibility: pivot must divide every remaining entry.
    bool fixed = false;
    for (int r = t + 1; r < rows && !fixed; ++r)
      for (int c = t + 1; c < cols && !fixed; ++c)
        if (a[r][c] % a[t][t] != 0) {
          for (int cc = t; cc < cols; ++cc) a[t][cc] += a[r][cc];
          fixed = true;
        }
    if (fixed) continue;

    if (a[t][t] < 0) a[t][t] = -a[t][t];
    ++t;
  }

  std::vector<long long> divisors(nmin, 0);
  for (int i = 0; i < t; ++i) divisors[i] = a[i][i];
  return divisors;
}

}  // namespace pgsieve
