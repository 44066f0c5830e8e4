// Exact dense linear algebra over a small prime field F_p and over the
// integers: reduced row echelon forms, kernels, canonical subspace
// enumeration, and Smith normal form.  Everything here is immutable after
// construction and every operation is pure.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pgsieve {

// Dense matrix over F_p, row-major, entries always reduced to [0, p).
struct FpMatrix {
  int p = 3;
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> entries;

  FpMatrix() = default;
  FpMatrix(int p_, int rows_, int cols_)
      : p(p_), rows(rows_), cols(cols_),
        entries(static_cast<size_t>(rows_) * cols_, 0) {}

  static FpMatrix identity(int p, int n);
  // Build from integer rows; entries are reduced mod p (negatives allowed).
  static FpMatrix from_rows(int p, const std::vector<std::vector<int>> &data);

  uint8_t at(int r, int c) const {
    return entries[static_cast<size_t>(r) * cols + c];
  }
  void set(int r, int c, int v);

  std::vector<uint8_t> row(int r) const;
  bool is_zero() const;

  bool operator==(const FpMatrix &) const = default;
};

FpMatrix mat_mul(const FpMatrix &a, const FpMatrix &b);
FpMatrix mat_transpose(const FpMatrix &m);
// Inverse of a square matrix, or nullopt if singular.
std::optional<FpMatrix> mat_inverse(const FpMatrix &m);
// Matrix times column vector.
std::vector<uint8_t> mat_apply(const FpMatrix &a, const std::vector<uint8_t> &v);

// Reduced row echelon form and rank.  The result is canonical: equal row
// spaces give byte-identical output, and rref(rref(m)) == rref(m).
std::pair<FpMatrix, int> rref(const FpMatrix &m);

// One particular solution x of a·x = b, or nullopt if inconsistent.
std::optional<std::vector<uint8_t>> solve(const FpMatrix &a,
                                          const std::vector<uint8_t> &b);

struct FpSubspace;

// Canonical basis of the right null space { v : m·v = 0 }; its dimension is
// cols − rank by rank-nullity.
FpSubspace kernel_basis(const FpMatrix &m);

// Subspace of F_p^n in canonical form: the basis is a reduced row echelon
// matrix with strictly increasing pivot columns and no zero rows.  Being
// canonical makes subspace equality a plain byte comparison.
struct FpSubspace {
  int ambient_dim = 0;
  FpMatrix basis;  // dim() x ambient_dim, reduced echelon, no zero rows

  static FpSubspace zero(int p, int ambient_dim);
  static FpSubspace full(int p, int ambient_dim);
  // Canonicalize an arbitrary spanning set given as the rows of m.
  static FpSubspace span(const FpMatrix &m);

  int dim() const { return basis.rows; }
  int p() const { return basis.p; }

  // Residue of v after reduction against the echelon basis; zero iff v lies
  // in the subspace.
  std::vector<uint8_t> reduce(const std::vector<uint8_t> &v) const;
  bool contains(const std::vector<uint8_t> &v) const;
  bool contains(const FpSubspace &other) const;

  // Canonical byte string (ambient_dim, dim, basis entries): usable as a
  // hash key for orbit deduplication.
  std::string key() const;

  bool operator==(const FpSubspace &) const = default;
};

FpSubspace subspace_sum(const FpSubspace &a, const FpSubspace &b);
FpSubspace subspace_intersection(const FpSubspace &a, const FpSubspace &b);
// Image span{ m·v : v basis row of s } of a subspace under a square matrix
// acting on column vectors.
FpSubspace subspace_image(const FpMatrix &m, const FpSubspace &s);

// Streaming enumeration of the subspaces of F_p^ambient_dim of a fixed
// codimension, each yielded exactly once in a fixed canonical order: pivot
// column sets in lexicographic order, then free entries in row-major base-p
// order.  With a constraint C only subspaces U satisfying U + C = F_p^n are
// yielded.
class SubspaceStream {
 public:
  SubspaceStream(int p, int ambient_dim, int codim,
                 std::optional<FpSubspace> constraint = std::nullopt);

  // Next subspace, or nullopt when exhausted.
  std::optional<FpSubspace> next();

  // Number of dim-dimensional subspaces of F_p^ambient_dim (Gaussian
  // binomial), ignoring any constraint.
  static uint64_t total_count(int p, int ambient_dim, int dim);

 private:
  bool advance_pivots();
  void reset_free_positions();
  FpSubspace current() const;
  bool satisfies_constraint(const FpSubspace &u) const;

  int p_;
  int n_;
  int d_;  // subspace dimension = ambient - codim
  std::optional<FpSubspace> constraint_;
  bool done_ = false;
  std::vector<int> pivots_;                      // strictly increasing, size d_
  std::vector<std::pair<int, int>> free_pos_;    // (row, col) free slots
  std::vector<uint8_t> free_val_;                // current assignment
  bool fresh_ = true;                            // before first advance
};

// Convenience: materialize the whole stream.
std::vector<FpSubspace> enumerate_subspaces(
    int p, int ambient_dim, int codim,
    std::optional<FpSubspace> constraint = std::nullopt);

// Integer matrix for abelianized relation matrices.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<long long> entries;

  IntMatrix() = default;
  IntMatrix(int rows_, int cols_)
      : rows(rows_), cols(cols_),
        entries(static_cast<size_t>(rows_) * cols_, 0) {}

  long long at(int r, int c) const {
    return entries[static_cast<size_t>(r) * cols + c];
  }
  void set(int r, int c, long long v) {
    entries[static_cast<size_t>(r) * cols + c] = v;
  }
};

// Elementary divisors d_1 | d_2 | ... of an integer matrix, as the full
// diagonal of the Smith normal form: min(rows, cols) nonnegative values,
// each dividing the next, with any zeros at the end.
std::vector<long long> smith_normal_form(const IntMatrix &m);

}  // namespace pgsieve
