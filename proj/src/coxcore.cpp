#include "coxdef/coxcore.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace coxdef {

Word reversed(const Word& w) { return Word(w.rbegin(), w.rend()); }

std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
    if (w.empty()) return "e";
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << ".";
        const int letter = w[i];
        if (letter >= 0 && static_cast<size_t>(letter) < names.size())
            os << names[static_cast<size_t>(letter)];
        else
            os << "g" << letter;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// CoxeterMatrix
// ---------------------------------------------------------------------------

CoxeterMatrix CoxeterMatrix::from_bonds(
    std::vector<std::string> names_,
    const std::vector<std::tuple<int, int, int>>& bonds) {
    CoxeterMatrix cm;
    cm.names = std::move(names_);
    const size_t n = cm.names.size();
    cm.m.assign(n, std::vector<int>(n, 2));
    for (size_t i = 0; i < n; ++i) cm.m[i][i] = 1;
    for (const auto& [i, j, label] : bonds) {
        cm.m[static_cast<size_t>(i)][static_cast<size_t>(j)] = label;
        cm.m[static_cast<size_t>(j)][static_cast<size_t>(i)] = label;
    }
    cm.validate();
    return cm;
}

void CoxeterMatrix::validate() const {
    const size_t n = names.size();
    if (m.size() != n) throw ParseError("Coxeter matrix: row count != rank");
    for (size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw ParseError("Coxeter matrix: ragged rows");
        if (m[i][i] != 1) throw ParseError("Coxeter matrix: diagonal must be 1");
        for (size_t j = 0; j < n; ++j) {
            if (m[i][j] != m[j][i]) throw ParseError("Coxeter matrix: not symmetric");
            if (i != j && m[i][j] != kInfLabel && m[i][j] < 2)
                throw ParseError("Coxeter matrix: off-diagonal labels must be >= 2 or inf");
        }
    }
    std::set<std::string> unique(names.begin(), names.end());
    if (unique.size() != n) throw ParseError("Coxeter matrix: duplicate generator names");
}

bool operator==(const CoxeterMatrix& a, const CoxeterMatrix& b) {
    return a.names == b.names && a.m == b.m;
}

// ---------------------------------------------------------------------------
// CoxeterSystem
// ---------------------------------------------------------------------------

CoxeterSystem build_system(const CoxeterMatrix& cm) {
    cm.validate();
    CoxeterSystem sys;
    sys.matrix = cm;
    const int n = cm.rank();

    std::set<long> labels;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (cm.label(i, j) != kInfLabel) labels.insert(cm.label(i, j));
    sys.field = field_for_labels(labels);

    sys.gram = Mat(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j)
                sys.gram(i, j) = AlgebraicReal(1);
            else if (cm.label(i, j) == kInfLabel)
                sys.gram(i, j) = AlgebraicReal(-1);
            else
                sys.gram(i, j) = -embed_cos(cm.label(i, j), sys.field);
        }
    }

    sys.gens.reserve(static_cast<size_t>(n));
    for (int r = 0; r < n; ++r) {
        Mat g = identity_matrix(n);
        for (int j = 0; j < n; ++j)
            g(r, j) = (j == r) ? AlgebraicReal(-1)
                               : AlgebraicReal(-2) * sys.gram(r, j);
        sys.gens.push_back(std::move(g));
    }
    return sys;
}

Mat identity_matrix(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = AlgebraicReal(i == j ? 1 : 0);
    return m;
}

bool mat_equal(const Mat& a, const Mat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != b(i, j)) return false;
    return true;
}

bool is_identity(const Mat& a) {
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != AlgebraicReal(i == j ? 1 : 0)) return false;
    return true;
}

std::size_t hash_matrix(const Mat& a) {
    std::size_t h = static_cast<std::size_t>(a.rows()) * 31u +
                    static_cast<std::size_t>(a.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            hash_combine(h, hash_algebraic(a(i, j)));
    return h;
}

bool is_positive_definite(Mat a) {
    if (a.rows() != a.cols()) return false;
    const Eigen::Index n = a.rows();
    for (Eigen::Index k = 0; k < n; ++k) {
        if (a(k, k).sign() <= 0) return false;
        for (Eigen::Index i = k + 1; i < n; ++i) {
            if (a(i, k).is_zero()) continue;
            const AlgebraicReal factor = a(i, k) / a(k, k);
            for (Eigen::Index j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
        }
    }
    return true;
}

void apply_gen_right(Mat& g, int r, const CoxeterSystem& sys) {
    // Right multiplication by rho_r only mixes column r into the others:
    // new col_j = col_j - 2 G[r][j] col_r (j != r), new col_r = -col_r.
    const int n = sys.rank();
    if (g.cols() != n) throw InternalInvariantBroken("apply_gen_right: size mismatch");
    const Vec col_r = g.col(r);
    for (int j = 0; j < n; ++j) {
        if (j == r) continue;
        const AlgebraicReal factor = AlgebraicReal(-2) * sys.gram(r, j);
        if (factor.is_zero()) continue;
        for (int i = 0; i < n; ++i) g(i, j) += factor * col_r(i);
    }
    for (int i = 0; i < n; ++i) g(i, r) = -col_r(i);
}

Mat eval(const Word& w, const CoxeterSystem& sys) {
    Mat g = identity_matrix(sys.rank());
    for (int letter : w) {
        if (letter < 0 || letter >= sys.rank())
            throw InternalInvariantBroken("eval: letter out of range");
        apply_gen_right(g, letter, sys);
    }
    return g;
}

std::optional<long> order_with_cap(const Mat& g, long cap) {
    Mat p = g;
    for (long k = 1; k <= cap; ++k) {
        if (is_identity(p)) return k;
        if (k < cap) p = p * g;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

AlgebraicReal pairing(const Vec& a, const Vec& c, const CoxeterSystem& sys) {
    AlgebraicReal acc;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a(i).is_zero()) continue;
        AlgebraicReal row;
        for (Eigen::Index j = 0; j < c.size(); ++j) {
            if (c(j).is_zero()) continue;
            row += sys.gram(i, j) * c(j);
        }
        acc += a(i) * row;
    }
    return acc;
}

bool is_positive_root(const Vec& root) {
    bool any = false;
    for (Eigen::Index i = 0; i < root.size(); ++i) {
        const int s = root(i).sign();
        if (s < 0) return false;
        if (s > 0) any = true;
    }
    return any;
}

Vec canonical_root(Vec root) {
    if (is_positive_root(root)) return root;
    Vec negated = -root;
    if (is_positive_root(negated)) return negated;
    throw InternalInvariantBroken("canonical_root: vector is not a root (mixed signs)");
}

Mat reflection_matrix(const Vec& alpha, const CoxeterSystem& sys) {
    if (pairing(alpha, alpha, sys) != AlgebraicReal(1))
        throw InternalInvariantBroken("reflection_matrix: root is not unit length");
    const int n = sys.rank();
    Vec g_alpha(n);
    for (int j = 0; j < n; ++j) {
        AlgebraicReal acc;
        for (int k = 0; k < n; ++k) acc += sys.gram(j, k) * alpha(k);
        g_alpha(j) = acc;
    }
    Mat m = identity_matrix(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            m(i, j) -= AlgebraicReal(2) * alpha(i) * g_alpha(j);
    return m;
}

Reflection reflection_from_conjugate(const Word& w, int r, const CoxeterSystem& sys) {
    if (r < 0 || r >= sys.rank())
        throw InternalInvariantBroken("reflection_from_conjugate: generator out of range");
    const Mat g = eval(w, sys);
    const Mat ginv = eval(reversed(w), sys);
    if (!is_identity(g * ginv))
        throw InternalInvariantBroken("reflection_from_conjugate: inverse mismatch");
    Reflection refl;
    refl.matrix = g * sys.gens[static_cast<size_t>(r)] * ginv;

    Vec e_r(sys.rank());
    for (int i = 0; i < sys.rank(); ++i) e_r(i) = AlgebraicReal(i == r ? 1 : 0);
    refl.root = canonical_root(g * e_r);

    // The reflection in that root must be the conjugate itself.
    if (!mat_equal(refl.matrix, reflection_matrix(refl.root, sys)))
        throw InternalInvariantBroken("reflection_from_conjugate: root/matrix mismatch");
    return refl;
}

// ---------------------------------------------------------------------------
// Group enumeration
// ---------------------------------------------------------------------------

std::vector<GroupElement> enumerate_group(const CoxeterSystem& sys, size_t cap) {
    std::vector<GroupElement> elements;
    // hash -> indices into elements (collisions resolved by exact compare)
    std::unordered_map<std::size_t, std::vector<size_t>> seen;

    const auto find_element = [&](const Mat& m, std::size_t h) -> long {
        auto it = seen.find(h);
        if (it == seen.end()) return -1;
        for (size_t idx : it->second)
            if (mat_equal(elements[idx].matrix, m)) return static_cast<long>(idx);
        return -1;
    };

    Mat id = identity_matrix(sys.rank());
    elements.push_back(GroupElement{id, Word{}});
    seen[hash_matrix(id)].push_back(0);

    size_t frontier_begin = 0;
    while (frontier_begin < elements.size()) {
        const size_t frontier_end = elements.size();
        for (size_t idx = frontier_begin; idx < frontier_end; ++idx) {
            for (int r = 0; r < sys.rank(); ++r) {
                Mat next = elements[idx].matrix;
                apply_gen_right(next, r, sys);
                const std::size_t h = hash_matrix(next);
                if (find_element(next, h) >= 0) continue;
                if (elements.size() >= cap)
                    throw GroupTooLarge("enumerate_group: more than " +
                                        std::to_string(cap) + " elements");
                Word w = elements[idx].word;
                w.push_back(r);
                seen[h].push_back(elements.size());
                elements.push_back(GroupElement{std::move(next), std::move(w)});
            }
        }
        frontier_begin = frontier_end;
    }
    return elements;
}

// ---------------------------------------------------------------------------
// Coxeter matrix of a reflection tuple
// ---------------------------------------------------------------------------

ReflectionRecord make_reflection_record(const Word& word, const CoxeterSystem& sys) {
    // Palindromic-conjugate shape w r w^{-1}: odd length with mirrored letters.
    if (word.empty() || word.size() % 2 == 0)
        throw NotAReflection(-1, "reflection word must have odd length");
    const size_t k = word.size() / 2;
    for (size_t i = 0; i < k; ++i)
        if (word[i] != word[word.size() - 1 - i])
            throw NotAReflection(-1, "reflection word must be a palindrome");
    const Word prefix(word.begin(), word.begin() + static_cast<long>(k));
    const int r = word[k];
    if (r < 0 || r >= sys.rank())
        throw NotAReflection(-1, "reflection word letter out of range");
    Reflection refl = reflection_from_conjugate(prefix, r, sys);
    if (is_identity(refl.matrix))
        throw NotAReflection(-1, "reflection word evaluates to the identity");
    if (!is_identity(refl.matrix * refl.matrix))
        throw NotAReflection(-1, "reflection word is not an involution");
    return ReflectionRecord{word, std::move(refl.matrix), std::move(refl.root)};
}

CoxeterMatrix coxeter_matrix_of(const std::vector<ReflectionRecord>& reflections,
                                const CoxeterSystem& sys, long order_cap,
                                const std::vector<std::string>& names) {
    const size_t n = reflections.size();
    CoxeterMatrix cm;
    cm.names.resize(n);
    for (size_t i = 0; i < n; ++i)
        cm.names[i] = i < names.size() ? names[i] : ("s" + std::to_string(i));
    cm.m.assign(n, std::vector<int>(n, 1));
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) {
            const Mat prod = reflections[i].matrix * reflections[j].matrix;
            const auto order = order_with_cap(prod, order_cap);
            int label;
            if (order.has_value()) {
                if (*order == 1)
                    throw InputInconsistent("coxeter_matrix_of: duplicate reflections at " +
                                            std::to_string(i) + "," + std::to_string(j));
                label = static_cast<int>(*order);
            } else {
                // Certify infinite order: |b(alpha, beta)| >= 1 means the
                // dihedral subgroup generated by the two reflections is
                // infinite.  Below 1 the order is finite, so the cap was hit
                // before reaching it.
                const AlgebraicReal b = pairing(reflections[i].root, reflections[j].root, sys);
                if (abs(b) >= AlgebraicReal(1))
                    label = kInfLabel;
                else
                    throw CapTooSmall("coxeter_matrix_of: order cap " +
                                      std::to_string(order_cap) + " hit at pair " +
                                      std::to_string(i) + "," + std::to_string(j));
            }
            cm.m[i][j] = label;
            cm.m[j][i] = label;
        }
    }
    cm.validate();
    return cm;
}

}  // namespace coxdef
