#include "coxdef/roots.hpp"

#include <sstream>

namespace coxdef {

namespace {

bool vec_equal(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i])) return false;
    return true;
}

// gamma reflected in the hyperplane of the unit root alpha
Vec reflect_root(const Vec& alpha, const Vec& gamma, const CoxeterSystem& sys) {
    const AlgebraicReal two_b = AlgebraicReal(2) * pairing(alpha, gamma, sys);
    Vec out = gamma;
    for (Eigen::Index i = 0; i < out.size(); ++i) out[i] -= two_b * alpha[i];
    return out;
}

}  // namespace

AngleClass is_sharp_angled_pair(const ReflectionRecord& x, const ReflectionRecord& y,
                                const CoxeterSystem& sys, long cap) {
    if (mat_equal(x.matrix, y.matrix))
        throw InputInconsistent("is_sharp_angled_pair: the two reflections coincide");
    AngleClass out;
    out.b_value = pairing(x.root, y.root, sys);
    const AlgebraicReal mag = abs(out.b_value);
    if ((mag - AlgebraicReal(1)).sign() >= 0)
        throw InfiniteOrderPair("is_sharp_angled_pair: |b| >= 1, the product has infinite order");
    const std::optional<long> q = order_with_cap(Mat(x.matrix * y.matrix), cap);
    if (!q)
        throw CapTooSmall("is_sharp_angled_pair: product order exceeds the cap");
    out.order_q = *q;
    out.sharp = equals_cos_pi_over(mag, *q);
    return out;
}

SharpSetReport is_sharp_angled_set(const std::vector<ReflectionRecord>& records,
                                   const CoxeterSystem& sys, long cap) {
    SharpSetReport report;
    const int n = static_cast<int>(records.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (mat_equal(records[static_cast<size_t>(i)].matrix,
                          records[static_cast<size_t>(j)].matrix))
                throw InputInconsistent("is_sharp_angled_set: duplicate reflection");
            const AlgebraicReal b = pairing(records[static_cast<size_t>(i)].root,
                                            records[static_cast<size_t>(j)].root, sys);
            if ((abs(b) - AlgebraicReal(1)).sign() >= 0) continue;  // not an edge
            const AngleClass ac = is_sharp_angled_pair(records[static_cast<size_t>(i)],
                                                       records[static_cast<size_t>(j)], sys, cap);
            if (!ac.sharp) {
                report.sharp = false;
                report.offenders.emplace_back(i, j);
            }
        }
    return report;
}

bool is_root_subbase(const std::vector<Vec>& roots, const CoxeterSystem& sys, long cap) {
    for (const Vec& alpha : roots)
        if (!(pairing(alpha, alpha, sys) == AlgebraicReal(1)))
            throw InternalInvariantBroken("is_root_subbase: root not normalized");
    for (const Vec& alpha : roots)
        if (!is_positive_root(alpha)) return false;
    const size_t n = roots.size();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            const AlgebraicReal b = pairing(roots[i], roots[j], sys);
            if (b.sign() > 0) return false;
            if ((b + AlgebraicReal(1)).sign() <= 0) continue;  // b <= -1
            // b in (-1, 0]: the value must be -cos(pi/q) for the product order q
            const Mat prod = reflection_matrix(roots[i], sys) * reflection_matrix(roots[j], sys);
            const std::optional<long> q = order_with_cap(prod, cap);
            if (!q) throw CapTooSmall("is_root_subbase: product order exceeds the cap");
            if (!equals_cos_pi_over(-b, *q)) return false;
        }
    return true;
}

std::vector<Vec> dihedral_positive_roots(const Vec& alpha, const Vec& beta,
                                         const CoxeterSystem& sys, long q) {
    std::vector<Vec> roots{canonical_root(alpha), canonical_root(beta)};
    // Closure of {alpha, beta} under the two reflections, kept positive.
    for (size_t head = 0; head < roots.size(); ++head) {
        for (int gen = 0; gen < 2; ++gen) {
            const Vec image =
                canonical_root(reflect_root(gen == 0 ? alpha : beta, roots[head], sys));
            bool known = false;
            for (const Vec& existing : roots)
                if (vec_equal(existing, image)) {
                    known = true;
                    break;
                }
            if (!known) roots.push_back(image);
        }
        if (static_cast<long>(roots.size()) > q)
            throw InternalInvariantBroken(
                "dihedral_positive_roots: more roots than the product order allows");
    }
    if (static_cast<long>(roots.size()) != q) {
        std::ostringstream os;
        os << "dihedral_positive_roots: expected " << q << " positive roots, found "
           << roots.size();
        throw InternalInvariantBroken(os.str());
    }
    return roots;
}

bool sharp_pair_oracle(const ReflectionRecord& x, const ReflectionRecord& y,
                       const CoxeterSystem& sys, const std::vector<GroupElement>& group,
                       long cap) {
    const std::optional<long> q = order_with_cap(Mat(x.matrix * y.matrix), cap);
    if (!q)
        throw CapTooSmall("sharp_pair_oracle: product order exceeds the cap");
    for (const GroupElement& g : group) {
        const Vec a = canonical_root(Vec(g.matrix * x.root));
        const Vec b = canonical_root(Vec(g.matrix * y.root));
        const std::vector<Vec> positives = dihedral_positive_roots(a, b, sys, *q);
        bool simple = true;
        for (const Vec& gamma : positives) {
            if (!vec_equal(gamma, a) && !is_positive_root(reflect_root(a, gamma, sys))) {
                simple = false;
                break;
            }
            if (!vec_equal(gamma, b) && !is_positive_root(reflect_root(b, gamma, sys))) {
                simple = false;
                break;
            }
        }
        if (simple) return true;
    }
    return false;
}

}  // namespace coxdef
