#ifndef COXDEF_DEFORM_HPP
#define COXDEF_DEFORM_HPP

/*
 * Angle deformations.
 *
 * A deformation of a generating set S with distinguished edge J = {r, s}
 * replaces every generator x by a conjugate involution delta(x) such that
 *
 *   - delta(s) = s and delta(r) = omega r omega^{-1} with omega in <J>,
 *     and <delta(r), delta(s)> = <J>  (the pair is re-angled inside the
 *     dihedral group of the edge),
 *   - edges are preserved: there is a bijection from the edges of Gamma(S)
 *     onto the edges of Gamma(delta(S)) sending J to {delta(r), delta(s)}
 *     and every other edge E to a conjugate pair w_E E w_E^{-1} realized by
 *     the delta-images of an explicit generator pair F.
 *
 * A Deformation value is a *certificate*, not a recipe: it stores the
 * conjugator word of every generator, the conjugator word of every edge,
 * witness words for the pocket pattern around the 5-edge, and inverse words
 * re-expressing each original generator as a product of delta-images.
 * verify_deformation re-checks all of it by exact matrix arithmetic in the
 * geometric representation and re-derives nothing.
 *
 * Vocabulary used throughout (all relative to the edge J = {r, s} with
 * label 5):
 *   - an "H3 partner" t is a vertex making {r, s, t} of type H3; it is
 *     s-adjacent when the 3-label sits on {s, t}, r-adjacent when on {r, t};
 *   - a "quad partner" u extends {r, s, t} to type H4;
 *   - the pocket of t is K_t = {r, s, t} plus its quad partner if present,
 *     and K_t^def = K_t + K_t^perp is the largest set on which the standard
 *     deformation of t acts.
 */

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "coxdef/coxcore.hpp"
#include "coxdef/diagrams.hpp"

namespace coxdef {

// ---------------------------------------------------------------------------
// Conjugate words and edges
// ---------------------------------------------------------------------------

// The reflection w * base * w^{-1}, kept in factored form so the conjugator
// itself is part of the certificate.
struct ConjugateWord {
    Word w;
    int base = -1;
};

// w . base . reversed(w) as a plain word.
Word full_word(const ConjugateWord& cw);

Mat eval(const ConjugateWord& cw, const CoxeterSystem& sys);

// Unordered generator pair, normalized to first < second.
using Edge = std::pair<int, int>;
Edge make_edge(int a, int b);

// Image assignment for an edge E of Gamma(S): the deformed pair of the
// generator pair `to` equals conjugator . E . conjugator^{-1} as a set,
//     {delta(to.first), delta(to.second)} = w_E E w_E^{-1}.
// In most constructions to == E; the triple switch pairs E = {x, b} with
// to = {x, t} (and vice versa) for component vertices x.
struct EdgeImage {
    Edge to;
    Word conjugator;
};

// ---------------------------------------------------------------------------
// Deformation certificates
// ---------------------------------------------------------------------------
struct Deformation {
    int r = -1, s = -1;  // the edge J
    Word omega;          // word over {r, s}: delta(r) = omega r omega^{-1}
    VSet domain = 0;     // generators the map is defined on

    // x -> delta(x); always base == x.
    std::map<int, ConjugateWord> delta;

    // E -> image assignment, for every edge E != J of Gamma(domain).
    // J itself is covered by omega (its image is {delta(r), delta(s)}).
    std::map<Edge, EdgeImage> edge_bijection;

    // H3 partner t -> word w_t with delta(x) = w_t . delta_t(x) . w_t^{-1}
    // on K_t^def, where delta_t is the standard deformation of t.
    std::map<int, Word> tame_witnesses;

    // x -> word over the *delta alphabet*: letter y stands for delta(y), and
    // the product of the images equals x.  Certifies that delta(S) generates.
    std::map<int, Word> inverse_words;

    // Human-readable construction provenance.
    std::vector<std::string> trace;
};

// ---------------------------------------------------------------------------
// Standard words
// ---------------------------------------------------------------------------

// Pattern of an H3 partner t of the 5-edge {r, s}: which of r/s carries the
// 3-label, whether a quad partner is present, or the bare edge (Inf).
enum class PartnerCase { SAdjTriple, RAdjTriple, SAdjQuad, RAdjQuad, Inf };

// Classify (r, s, t, u) in the diagram; t = -1 gives Inf, u = -1 a triple.
PartnerCase partner_case(const Diagram& d, int r, int s, int t, int u);

// The conjugator words of one partner case, over the abstract alphabet
// 0 = r, 1 = s, 2 = t, 3 = u.  omega_t conjugates t, pi_t is the companion
// conjugator appearing in the edge tables, tau (quad cases only) relates the
// quad pocket to the triple pocket that remains after dropping u.
struct PatternWords {
    Word omega_t;
    Word pi_t;
    Word tau;
};
PatternWords pattern_words(PartnerCase c);

// Building blocks of the quad-case words, exposed for the relation tests.
// All are abstract words over 0 = r, 1 = s, 2 = t, 3 = u.
namespace quadwords {
Word w1();
Word w2();
Word w3();
Word omega();  // rsrsr . w2
Word pi();     // omega . w1 . utu
Word tau();    // trs . w3 . omega^{-1}
Word c();      // rsrs
Word cbar();   // srsr
}  // namespace quadwords

// Exchange the letters r <-> s of an abstract pattern (t, u untouched).
Word swap_rs(const Word& pattern);

// Map an abstract pattern into ambient generator indices; to = {r, s, t, u}
// with -1 for unused slots (hitting an unused slot is an error).
Word map_letters(const Word& pattern, const std::array<int, 4>& to);

// Concatenation substitution: letter i of `abstract` expands to
// letter_words[i].
Word substitute_word(const Word& abstract, const std::vector<Word>& letter_words);

// ---------------------------------------------------------------------------
// Sharpening conjugator of a dihedral pair
// ---------------------------------------------------------------------------

// Given two reflections r, s whose product has finite order q but whose
// angle is not the sharp one, find omega in <r, s> with {s, omega r
// omega^{-1}} sharp-angled and still generating <r, s>.  The abstract
// variant returns the word over 0 = r, 1 = s; sharpening_omega substitutes
// the records' ambient words into it.  For q = 5 the answer is always srs;
// otherwise the 2q dihedral elements are searched in length-lexicographic
// order (deterministic).
Word sharpening_omega_abstract(const ReflectionRecord& r_ref,
                               const ReflectionRecord& s_ref,
                               const CoxeterSystem& sys,
                               long order_cap = kDefaultOrderCap);
Word sharpening_omega(const ReflectionRecord& r_ref,
                      const ReflectionRecord& s_ref,
                      const CoxeterSystem& sys,
                      long order_cap = kDefaultOrderCap);

// ---------------------------------------------------------------------------
// Constructions
// ---------------------------------------------------------------------------

// Deformation of the whole diagram at a theta-edge {r, s}: delta(r) =
// omega r omega^{-1}, identity on {s} + J^perp, and each J-component L is
// conjugated by gamma_L (identity when r is L-free, omega otherwise).
Deformation theta_deformation(const Diagram& d, int r, int s, const Word& omega);

// Standard deformation of the pocket K_t^def for an H3 partner t of the
// 5-edge (t = -1 for the bare-edge pattern, acting on J + J^perp):
// delta(r) = rsr, delta(s) = s, delta(t) = omega_t t omega_t^{-1},
// identity on the quad partner and on K_t^perp.
Deformation standard_deformation(const Diagram& d, const EdgeContext& ctx, int t);

// Deformation of the whole diagram from a single pocket K = {r, s, t} or
// {r, s, t, u} that is a-special (a in {r, s}): outside K every vertex sees
// a with label 2 or infinity, label 2 forcing membership in J^perp, and
// every J^perp vertex attached to J^inf + {t} lies in K^perp.  Vertices of
// J^inf are conjugated by omega_t (a opposite the 3-label) or pi_t (a on the
// 3-label side); in the triple case with a on the 3-label side the edge
// bijection switches {b, x} with {t, x} across the mirror.
Deformation k_special_deformation(const Diagram& d, int r, int s, int t, int u, int a);

// The pocket mirror: swap the attachments of r and t to J^inf, leaving all
// other labels alone.  Involutive.  The edge bijection pairs {r, x} with
// {t, x} for x in J^inf and fixes every other edge.
struct MirrorResult {
    Diagram diagram;
    std::map<Edge, Edge> edge_bijection;
};
MirrorResult k_mirror(const Diagram& d, int r, int s, int t);

// Deformation of the whole diagram at a 5-edge all of whose H3 partners are
// tame: glue the standard deformations of the pockets, conjugating each
// J-component L by gamma_L = omega_t or pi_t of its attached partner t(L)
// (bare-edge words when t(L) is absent).
Deformation tame_deformation(const Diagram& d, const EdgeContext& ctx);

// Deformation of the whole diagram at a 5-edge with a wild H3 partner t:
// recurse on the strictly smaller sets Y_u (u a quad partner of t or the
// bare case), normalize each recursive result to the standard pocket form
// by its carried witness, twist by tau_u, and glue.  Records witnesses for
// every H3 partner that is tame in the full diagram.  Delegates to
// tame_deformation when nothing is wild.
Deformation wild_deformation(const Diagram& d, const EdgeContext& ctx);

// Dispatch tame/wild for a 5-edge.
Deformation delta_route_deformation(const Diagram& d, int r, int s);

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

// Compose with conjugation by g: x -> g delta(x) g^{-1}.  Inverse words are
// dropped (re-expression through the twisted images is a different word
// problem); callers refill them after the final glue.
Deformation conjugate_deformation(const Deformation& d, const Word& g);

// Union of two deformations of the same edge that agree *structurally*
// (identical conjugate words) on the shared generators; every edge of the
// union domain must lie inside one of the parts.  On shared keys d1 wins.
Deformation merge(const Deformation& d1, const Deformation& d2, const Diagram& dia);

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------
struct VerifyItem {
    std::string check;
    bool ok = true;        // false = the certificate is wrong
    bool verified = true;  // false = not checkable from the certificate
    std::string detail;
};
struct VerifyReport {
    std::vector<VerifyItem> items;
    int failures = 0;    // items with ok == false
    int unverified = 0;  // items with verified == false
    bool all_ok() const { return failures == 0; }
};

// Exact re-check of a certificate against the system of its diagram:
//   - the defining pair: delta(s) = s, delta(r) = omega r omega^{-1} with
//     omega over {r, s}, and o(delta(r) delta(s)) = label(r, s);
//   - every delta(x) present, an involution conjugate to x by the stored
//     word, all images distinct;
//   - inverse words evaluate to their generators (missing ones are reported
//     as unverified, not failed);
//   - the edge bijection: keys are exactly the edges != J of the domain,
//     every entry satisfies the set identity, the assigned pairs are
//     distinct, image orders match the source labels, and every generator
//     pair left out of the bijection has infinite image order (certified by
//     the pairing of the image roots where possible);
//   - every tame witness conjugates the standard pocket deformation into
//     delta on K_t^def.
VerifyReport verify_deformation(const Deformation& d, const CoxeterSystem& sys,
                                long order_cap = kDefaultOrderCap,
                                size_t group_cap = kDefaultGroupCap);

// ---------------------------------------------------------------------------
// Application to reflection records
// ---------------------------------------------------------------------------

// Substitute the records of S into the conjugate words of d: the result is
// the deformed generating set delta(S) as ambient reflection records.
std::vector<ReflectionRecord> apply_deformation(const Deformation& d,
                                                const std::vector<ReflectionRecord>& S,
                                                const CoxeterSystem& sys);

}  // namespace coxdef

#endif  // COXDEF_DEFORM_HPP
