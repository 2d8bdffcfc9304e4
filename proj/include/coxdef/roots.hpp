#pragma once

/*
 * Root-system predicates: angle classification of reflection pairs, the
 * sharp-angled tests, root subbases, and a brute-force conjugacy oracle.
 *
 * The classification rests on two exact facts about a pair of reflections
 * with unit positive roots alpha, beta and b := b(alpha, beta):
 *   - |b| >= 1  iff  the product has infinite order;
 *   - |b| < 1   implies b = -cos(p*pi/q) for integers p, q where q is the
 *     (finite) product order.
 * The pair is *sharp-angled* when |b| = cos(pi/q), i.e. p is 1 or q-1; this
 * is decided exactly by the minimal-polynomial membership test of the
 * algebra layer, never by floating point and never by scanning over q.
 */

#include "coxdef/coxcore.hpp"

#include <utility>
#include <vector>

namespace coxdef {

// ---------------------------------------------------------------------------
// Angle classification
// ---------------------------------------------------------------------------
struct AngleClass {
    AlgebraicReal b_value;  // pairing of the two canonical roots
    long order_q = 0;       // product order; kInfLabel (0) encodes infinite
    bool sharp = false;
};

// Classifies the pair {x, y}.  Throws InfiniteOrderPair when |b| >= 1 (the
// sharp test is defined for finite product orders only), InputInconsistent
// when x = y as group elements, CapTooSmall when the order search is cut off.
AngleClass is_sharp_angled_pair(const ReflectionRecord& x, const ReflectionRecord& y,
                                const CoxeterSystem& sys, long cap = kDefaultOrderCap);

// ---------------------------------------------------------------------------
// Sets of reflections
// ---------------------------------------------------------------------------
struct SharpSetReport {
    bool sharp = true;
    std::vector<std::pair<int, int>> offenders;  // index pairs i < j, finite order
};

// Applies the pair test to every pair with finite product order; pairs with
// |b| >= 1 are not edges and are skipped.
SharpSetReport is_sharp_angled_set(const std::vector<ReflectionRecord>& records,
                                   const CoxeterSystem& sys, long cap = kDefaultOrderCap);

// ---------------------------------------------------------------------------
// Root subbases
// ---------------------------------------------------------------------------

// A list of unit roots is a root subbase when all of them are positive and
// every pairwise value b satisfies b <= -1 or b = -cos(pi/m) for some
// m >= 2.  In the second branch m is forced to equal the product order of
// the two reflections, so the test never scans over m.  Roots must be
// normalized (b(alpha, alpha) = 1).
bool is_root_subbase(const std::vector<Vec>& roots, const CoxeterSystem& sys,
                     long cap = kDefaultOrderCap);

// ---------------------------------------------------------------------------
// Brute-force oracle
// ---------------------------------------------------------------------------

// The positive roots of the dihedral reflection subgroup generated by the
// reflections of two positive unit roots with finite product order q; the
// result has exactly q elements.
std::vector<Vec> dihedral_positive_roots(const Vec& alpha, const Vec& beta,
                                         const CoxeterSystem& sys, long q);

// Independent notion of sharpness by exhaustive search over a finite group:
// {x, y} is accepted iff some group element conjugates it onto the simple
// pair of the dihedral subgroup the conjugated pair generates.  A pair of
// positive roots is *the* simple pair of its dihedral subgroup exactly when
// each of the two reflections maps every other positive root of the
// subgroup to a positive root.  (Conjugating onto ambient simple generators
// would be strictly weaker: a commuting pair deep inside the group need not
// reach any ambient simple pair, yet is perfectly sharp.)
bool sharp_pair_oracle(const ReflectionRecord& x, const ReflectionRecord& y,
                       const CoxeterSystem& sys, const std::vector<GroupElement>& group,
                       long cap = kDefaultOrderCap);

}  // namespace coxdef
