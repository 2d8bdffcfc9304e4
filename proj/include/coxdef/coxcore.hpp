#ifndef COXDEF_COXCORE_HPP
#define COXDEF_COXCORE_HPP

/*
 * Coxeter systems and their geometric representation.
 *
 * A Coxeter matrix over generators r_0..r_{n-1} determines the canonical
 * bilinear form G with G[i][j] = -cos(pi/m_ij) (and -1 for the infinite
 * label), plus one reflection matrix per generator acting on column vectors:
 * rho_r fixes every basis vector except e_r up to a correction in the e_r
 * coordinate.  All matrices are exact over the number field generated by the
 * finite labels, so identity tests, order computations, and root signs are
 * decisions, not approximations.
 */

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coxdef/algebra.hpp"
#include "coxdef/errors.hpp"

namespace coxdef {

// Label value representing an infinite bond order.
constexpr int kInfLabel = 0;
constexpr long kDefaultOrderCap = 1000;
constexpr size_t kDefaultGroupCap = 20000;

// A word in the generators, letters are generator indices.
using Word = std::vector<int>;

Word reversed(const Word& w);
std::string word_to_string(const Word& w, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// CoxeterMatrix
// ---------------------------------------------------------------------------
struct CoxeterMatrix {
    std::vector<std::string> names;      // generator names, size = rank
    std::vector<std::vector<int>> m;     // symmetric; 1 on diagonal; 0 = inf

    int rank() const { return static_cast<int>(names.size()); }
    int label(int i, int j) const { return m[static_cast<size_t>(i)][static_cast<size_t>(j)]; }

    // Builds a matrix with all off-diagonal labels = 2, then applies the
    // given (i, j, label) bonds symmetrically.  Labels: kInfLabel or >= 2.
    static CoxeterMatrix from_bonds(std::vector<std::string> names,
                                    const std::vector<std::tuple<int, int, int>>& bonds);

    // Throws ParseError on asymmetry, bad diagonal, or invalid label values.
    void validate() const;
};

bool operator==(const CoxeterMatrix& a, const CoxeterMatrix& b);

// ---------------------------------------------------------------------------
// CoxeterSystem: matrix + field + Gram form + generator matrices
// ---------------------------------------------------------------------------
struct CoxeterSystem {
    CoxeterMatrix matrix;
    FieldPtr field;
    Mat gram;                // canonical bilinear form, symmetric
    std::vector<Mat> gens;   // generator reflection matrices

    int rank() const { return matrix.rank(); }
};

CoxeterSystem build_system(const CoxeterMatrix& cm);

// Exact matrix identity/equality helpers.
Mat identity_matrix(int n);
bool mat_equal(const Mat& a, const Mat& b);
bool is_identity(const Mat& a);
std::size_t hash_matrix(const Mat& a);

// Exact positive-definiteness via Gaussian pivots: the matrix is PD iff all
// pivots stay strictly positive (a zero pivot after a positive prefix means a
// vanishing leading minor, hence not PD).
bool is_positive_definite(Mat a);

// Product of generator matrices along the word (empty word = identity).
Mat eval(const Word& w, const CoxeterSystem& sys);

// Right-multiply g by generator r in place using the column-update identity
// (cost n^2 field operations instead of a general n^3 product).
void apply_gen_right(Mat& g, int r, const CoxeterSystem& sys);

// Order of g by iterating powers: k <= cap with g^k = 1, or nullopt when the
// cap is exhausted (the order is then unknown, possibly infinite).
std::optional<long> order_with_cap(const Mat& g, long cap = kDefaultOrderCap);

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

// b(a, c) = a^T G c
AlgebraicReal pairing(const Vec& a, const Vec& c, const CoxeterSystem& sys);

bool is_positive_root(const Vec& root);

// Flip sign if needed so the result is positive; throws
// InternalInvariantBroken when neither sign is positive (not a root).
Vec canonical_root(Vec root);

// Reflection in the unit root alpha: x -> x - 2 b(alpha, x) alpha.
// Requires b(alpha, alpha) = 1 (checked).
Mat reflection_matrix(const Vec& alpha, const CoxeterSystem& sys);

// Matrix and canonical positive root of the reflection w r w^{-1}.
struct Reflection {
    Mat matrix;
    Vec root;
};
Reflection reflection_from_conjugate(const Word& w, int r, const CoxeterSystem& sys);

// ---------------------------------------------------------------------------
// Group enumeration
// ---------------------------------------------------------------------------
struct GroupElement {
    Mat matrix;
    Word word;  // a shortest word reaching the element in BFS order
};

// Full BFS enumeration of the group; throws GroupTooLarge when more than
// `cap` distinct elements appear.
std::vector<GroupElement> enumerate_group(const CoxeterSystem& sys,
                                          size_t cap = kDefaultGroupCap);

// ---------------------------------------------------------------------------
// Coxeter matrix of a reflection tuple
// ---------------------------------------------------------------------------
struct ReflectionRecord {
    Word word;   // palindromic-conjugate word in the ambient generators
    Mat matrix;
    Vec root;    // canonical positive root
};

ReflectionRecord make_reflection_record(const Word& word, const CoxeterSystem& sys);

// Pairwise product orders of the given reflections.  A pair whose product
// order exceeds order_cap is labeled infinite only when |b(alpha, beta)| >= 1
// certifies it; otherwise CapTooSmall.  Duplicate reflections (product order
// 1) raise InputInconsistent.
CoxeterMatrix coxeter_matrix_of(const std::vector<ReflectionRecord>& reflections,
                                const CoxeterSystem& sys,
                                long order_cap = kDefaultOrderCap,
                                const std::vector<std::string>& names = {});

}  // namespace coxdef

#endif  // COXDEF_COXCORE_HPP
