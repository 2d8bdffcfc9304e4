#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "coxdef/diagrams.hpp"
#include "coxdef/roots.hpp"

#include <algorithm>
#include <map>
#include <vector>

using namespace coxdef;

namespace {

CoxeterSystem dihedral(int m) {
    return build_system(CoxeterMatrix::from_bonds({"a", "b"}, {{0, 1, m}}));
}

CoxeterSystem h3() {
    return build_system(CoxeterMatrix::from_bonds({"a", "b", "c"}, {{0, 1, 5}, {1, 2, 3}}));
}

Word conj_word(const Word& w, int center) {
    Word out = w;
    out.push_back(center);
    out.insert(out.end(), w.rbegin(), w.rend());
    return out;
}

// all reflections of a finite system, as records, deduplicated by matrix
std::vector<ReflectionRecord> all_reflections(const CoxeterSystem& sys,
                                              const std::vector<GroupElement>& group) {
    std::vector<ReflectionRecord> out;
    for (const GroupElement& g : group)
        for (int i = 0; i < sys.rank(); ++i) {
            const ReflectionRecord rec = make_reflection_record(conj_word(g.word, i), sys);
            bool known = false;
            for (const ReflectionRecord& have : out)
                if (mat_equal(have.matrix, rec.matrix)) {
                    known = true;
                    break;
                }
            if (!known) out.push_back(rec);
        }
    return out;
}

// chain r -5- s -3- t, a commuting pair x "between" r,s and t, and a far
// vertex y: the five-vertex system whose modified generating set below
// forms a chordfree circuit.
CoxeterSystem de3_system() {
    return build_system(CoxeterMatrix::from_bonds({"r", "s", "t", "x", "y"},
                                                  {{0, 1, 5},
                                                   {1, 2, 3},
                                                   {2, 3, kInfLabel},
                                                   {0, 4, kInfLabel},
                                                   {2, 4, 3},
                                                   {3, 4, 3}}));
}

// chain r -5- s -3- t -3- u plus x (labels 2,2,3 to r,s,t and inf to u) and
// the two-step tail x1, x2 closing the circuit
CoxeterSystem de4_system() {
    return build_system(CoxeterMatrix::from_bonds({"r", "s", "t", "u", "x", "x1", "x2"},
                                                  {{0, 1, 5},
                                                   {1, 2, 3},
                                                   {2, 3, 3},
                                                   {4, 2, 3},
                                                   {4, 3, kInfLabel},
                                                   {5, 4, 3},
                                                   {5, 3, kInfLabel},
                                                   {5, 0, kInfLabel},
                                                   {6, 5, 3},
                                                   {6, 4, kInfLabel},
                                                   {6, 0, kInfLabel}}));
}

AlgebraicReal golden(const CoxeterSystem& sys) {
    return embed_cos(5, sys.field) * AlgebraicReal(2);
}

}  // namespace

TEST_CASE("pairing values in the pentagon group") {
    const CoxeterSystem sys = dihedral(5);
    const AlgebraicReal lambda = golden(sys);
    const Vec e_a = Vec::Unit(2, 0);
    const Vec e_b = Vec::Unit(2, 1);
    CHECK(pairing(e_a, e_a, sys) == AlgebraicReal(1));
    CHECK(pairing(e_a, e_b, sys) == -lambda / AlgebraicReal(2));

    const ReflectionRecord bab = make_reflection_record({1, 0, 1}, sys);
    const AlgebraicReal b = pairing(e_a, bab.root, sys);
    CHECK(b == (AlgebraicReal(1) - lambda) / AlgebraicReal(2));
    CHECK(b.to_double() > -0.30902);
    CHECK(b.to_double() < -0.30901);
}

TEST_CASE("sharp pair classification in dihedral groups") {
    for (int m : {2, 3, 4, 5, 6, 7}) {
        const CoxeterSystem sys = dihedral(m);
        const ReflectionRecord a = make_reflection_record({0}, sys);
        const ReflectionRecord b = make_reflection_record({1}, sys);
        const AngleClass ac = is_sharp_angled_pair(a, b, sys);
        CHECK(ac.sharp);
        CHECK(ac.order_q == m);
    }

    const CoxeterSystem i5 = dihedral(5);
    const ReflectionRecord a = make_reflection_record({0}, i5);
    const ReflectionRecord aba = make_reflection_record({0, 1, 0}, i5);
    const ReflectionRecord bab = make_reflection_record({1, 0, 1}, i5);

    const AngleClass good = is_sharp_angled_pair(a, aba, i5);
    CHECK(good.sharp);
    CHECK(good.order_q == 5);

    const AngleClass offending = is_sharp_angled_pair(a, bab, i5);
    CHECK_FALSE(offending.sharp);
    CHECK(offending.order_q == 5);
    CHECK(offending.order_q >= 5);  // non-sharp forces order at least five

    CHECK_THROWS_AS(is_sharp_angled_pair(a, a, i5), InputInconsistent);

    // commuting non-simple pair: b = 0, order 2, sharp
    const CoxeterSystem i6 = dihedral(6);
    const ReflectionRecord p = make_reflection_record({0, 1, 0}, i6);
    const ReflectionRecord q = make_reflection_record({1, 0, 1}, i6);
    const AngleClass comm = is_sharp_angled_pair(p, q, i6);
    CHECK(comm.b_value.is_zero());
    CHECK(comm.order_q == 2);
    CHECK(comm.sharp);

    // infinite label: |b| >= 1 is rejected
    const CoxeterSystem ii = dihedral(kInfLabel);
    const ReflectionRecord ia = make_reflection_record({0}, ii);
    const ReflectionRecord ib = make_reflection_record({1}, ii);
    CHECK_THROWS_AS(is_sharp_angled_pair(ia, ib, ii), InfiniteOrderPair);
}

TEST_CASE("sharp set verdicts and conjugation invariance") {
    const CoxeterSystem i5 = dihedral(5);
    const std::vector<ReflectionRecord> simple = {make_reflection_record({0}, i5),
                                                  make_reflection_record({1}, i5)};
    CHECK(is_sharp_angled_set(simple, i5).sharp);

    const std::vector<ReflectionRecord> bad = {make_reflection_record({0}, i5),
                                               make_reflection_record({1, 0, 1}, i5)};
    const SharpSetReport rep = is_sharp_angled_set(bad, i5);
    CHECK_FALSE(rep.sharp);
    REQUIRE(rep.offenders.size() == 1);
    CHECK(rep.offenders[0] == std::pair<int, int>(0, 1));

    // S^w gives identical verdicts for every w
    const auto group = enumerate_group(i5);
    for (const GroupElement& g : group) {
        std::vector<ReflectionRecord> conj;
        for (const ReflectionRecord& rec : bad) {
            Word w = g.word;
            w.insert(w.end(), rec.word.begin(), rec.word.end());
            w.insert(w.end(), g.word.rbegin(), g.word.rend());
            conj.push_back(make_reflection_record(w, i5));
        }
        const SharpSetReport crep = is_sharp_angled_set(conj, i5);
        CHECK(crep.sharp == rep.sharp);
        CHECK(crep.offenders == rep.offenders);
    }
}

TEST_CASE("dihedral positive roots") {
    const CoxeterSystem i5 = dihedral(5);
    const Vec e_a = Vec::Unit(2, 0);
    const Vec e_b = Vec::Unit(2, 1);
    const auto roots = dihedral_positive_roots(e_a, e_b, i5, 5);
    CHECK(roots.size() == 5);
    for (const Vec& alpha : roots) {
        CHECK(is_positive_root(alpha));
        CHECK(pairing(alpha, alpha, i5) == AlgebraicReal(1));
    }
}

TEST_CASE("oracle agreement on all dihedral pairs") {
    for (int m : {5, 6}) {
        const CoxeterSystem sys = dihedral(m);
        const auto group = enumerate_group(sys);
        const auto refl = all_reflections(sys, group);
        CHECK(static_cast<int>(refl.size()) == m);
        for (size_t i = 0; i < refl.size(); ++i)
            for (size_t j = i + 1; j < refl.size(); ++j) {
                const AngleClass ac = is_sharp_angled_pair(refl[i], refl[j], sys);
                const bool oracle = sharp_pair_oracle(refl[i], refl[j], sys, group);
                CHECK(ac.sharp == oracle);
                if (!ac.sharp) CHECK(ac.order_q >= 5);
            }
    }
}

TEST_CASE("oracle agreement on a sample of icosahedral pairs") {
    const CoxeterSystem sys = h3();
    const auto group = enumerate_group(sys);
    const auto refl = all_reflections(sys, group);
    CHECK(refl.size() == 15);
    // simple-against-everything plus a fixed stride through the other pairs
    int checked = 0, nonsharp = 0;
    for (size_t i = 0; i < refl.size(); ++i)
        for (size_t j = i + 1; j < refl.size(); ++j) {
            if (i >= 3 && (i + j) % 5 != 0) continue;
            const AngleClass ac = is_sharp_angled_pair(refl[i], refl[j], sys);
            CHECK(ac.sharp == sharp_pair_oracle(refl[i], refl[j], sys, group));
            if (!ac.sharp) {
                CHECK(ac.order_q >= 5);
                ++nonsharp;
            }
            ++checked;
        }
    CHECK(checked >= 30);
    CHECK(nonsharp >= 1);
}

TEST_CASE("root subbase verdicts") {
    const CoxeterSystem i5 = dihedral(5);
    const Vec e_a = Vec::Unit(2, 0);
    const Vec e_b = Vec::Unit(2, 1);
    CHECK(is_root_subbase({e_a, e_b}, i5));

    const ReflectionRecord bab = make_reflection_record({1, 0, 1}, i5);
    CHECK_FALSE(is_root_subbase({e_a, bab.root}, i5));  // b = -cos(2pi/5)

    Vec doubled = e_a * AlgebraicReal(2);
    CHECK_THROWS_AS(is_root_subbase({doubled, e_b}, i5), InternalInvariantBroken);

    Vec negative = -e_a;
    CHECK_FALSE(is_root_subbase({negative, e_b}, i5));
}

TEST_CASE("circuit system of the first kind") {
    const CoxeterSystem sys = de3_system();
    const AlgebraicReal lambda = golden(sys);

    // alpha_1 = rs(e_r) = lambda e_r + lambda e_s
    const Vec alpha1 = eval({0, 1}, sys) * Vec::Unit(5, 0);
    Vec expected = Vec::Zero(5);
    expected[0] = lambda;
    expected[1] = lambda;
    for (int i = 0; i < 5; ++i) CHECK(alpha1[i] == expected[i]);

    // rho_{alpha_1} = omega_1 r omega_1^{-1} with omega_1 = rst
    const Word omega1 = {0, 1, 2};
    CHECK(mat_equal(reflection_matrix(alpha1, sys), eval(conj_word(omega1, 0), sys)));

    // omega_1 s omega_1^{-1} = t
    CHECK(mat_equal(eval(conj_word(omega1, 1), sys), sys.gens[2]));

    // Pi_1 is a root subbase
    CHECK(is_root_subbase({alpha1, Vec::Unit(5, 2), Vec::Unit(5, 3), Vec::Unit(5, 4)}, sys));

    // the modified generating set has a chordfree circuit as its diagram
    const std::vector<ReflectionRecord> s1 = {
        make_reflection_record(conj_word(omega1, 0), sys),
        make_reflection_record({2}, sys),
        make_reflection_record({3}, sys),
        make_reflection_record({4}, sys),
    };
    const CoxeterMatrix gamma = coxeter_matrix_of(s1, sys);
    CHECK(gamma.label(0, 1) == 5);
    CHECK(gamma.label(1, 3) == 3);
    CHECK(gamma.label(3, 2) == 3);
    CHECK(gamma.label(2, 0) == 2);
    CHECK(gamma.label(0, 3) == kInfLabel);
    CHECK(gamma.label(1, 2) == kInfLabel);
    const FlexReport flex = is_flexible_edge(gamma, 0, 1);
    CHECK_FALSE(flex.flexible);
    CHECK(flex.circuit.size() == 4);

    // and it is sharp-angled throughout
    CHECK(is_sharp_angled_set(s1, sys).sharp);
}

TEST_CASE("circuit system of the second kind") {
    const CoxeterSystem sys = de4_system();
    const AlgebraicReal lambda = golden(sys);

    // alpha_2 = srstrs(e_r) = (lambda+1) e_r + 2 lambda e_s + lambda e_t
    const Vec alpha2 = eval({1, 0, 1, 2, 0, 1}, sys) * Vec::Unit(7, 0);
    Vec expected = Vec::Zero(7);
    expected[0] = lambda + AlgebraicReal(1);
    expected[1] = AlgebraicReal(2) * lambda;
    expected[2] = lambda;
    for (int i = 0; i < 7; ++i) CHECK(alpha2[i] == expected[i]);

    // rho_{alpha_2} = omega_2 r omega_2^{-1} with omega_2 = srstrsut
    const Word omega2 = {1, 0, 1, 2, 0, 1, 3, 2};
    CHECK(mat_equal(reflection_matrix(alpha2, sys), eval(conj_word(omega2, 0), sys)));

    // omega_2 s omega_2^{-1} = u
    CHECK(mat_equal(eval(conj_word(omega2, 1), sys), sys.gens[3]));

    // Pi_2 is a root subbase
    CHECK(is_root_subbase(
        {alpha2, Vec::Unit(7, 3), Vec::Unit(7, 4), Vec::Unit(7, 5), Vec::Unit(7, 6)}, sys));

    // the modified generating set is a chordfree 5-circuit
    const std::vector<ReflectionRecord> s2 = {
        make_reflection_record(conj_word(omega2, 0), sys),
        make_reflection_record({3}, sys),
        make_reflection_record({4}, sys),
        make_reflection_record({5}, sys),
        make_reflection_record({6}, sys),
    };
    const CoxeterMatrix gamma = coxeter_matrix_of(s2, sys);
    CHECK(gamma.label(0, 1) == 5);  // rho, u
    CHECK(gamma.label(0, 2) == 5);  // rho, x
    CHECK(gamma.label(2, 3) == 3);  // x, x1
    CHECK(gamma.label(3, 4) == 3);  // x1, x2
    CHECK(gamma.label(4, 1) == 2);  // x2, u
    CHECK(gamma.label(0, 3) == kInfLabel);
    CHECK(gamma.label(0, 4) == kInfLabel);
    CHECK(gamma.label(1, 2) == kInfLabel);
    CHECK(gamma.label(1, 3) == kInfLabel);
    CHECK(gamma.label(2, 4) == kInfLabel);
    CHECK(is_sharp_angled_set(s2, sys).sharp);
}
