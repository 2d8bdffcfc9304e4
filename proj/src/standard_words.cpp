/*
 * The conjugator words of the pocket constructions.
 *
 * Everything here is purely symbolic: words over the abstract alphabet
 * 0 = r, 1 = s, 2 = t, 3 = u.  The r-adjacent variants are the letter-swap
 * r <-> s of the s-adjacent ones, normalized back into the (r, s, srs)
 * convention by a dihedral prefix (in the 5-edge group, srsr . srsrs = r,
 * which collapses cbar . swap(rsrsr . w2) to r . swap(w2)).  The exact
 * relations these words satisfy are asserted by matrix arithmetic in the
 * test suite; nothing downstream trusts them unverified.
 */

#include <initializer_list>

#include "coxdef/deform.hpp"
#include "coxdef/errors.hpp"

namespace coxdef {

namespace {

Word parse(const char* letters) {
    Word w;
    for (const char* p = letters; *p; ++p) {
        switch (*p) {
            case 'r': w.push_back(0); break;
            case 's': w.push_back(1); break;
            case 't': w.push_back(2); break;
            case 'u': w.push_back(3); break;
            default:
                throw InternalInvariantBroken("pattern word: unknown letter");
        }
    }
    return w;
}

Word concat(std::initializer_list<Word> parts) {
    Word w;
    for (const auto& p : parts) w.insert(w.end(), p.begin(), p.end());
    return w;
}

}  // namespace

namespace quadwords {

Word w1() { return parse("rsturstrsrstusrstrs"); }
Word w2() { return parse("tsrsrutsrsrtsrsutsrsr"); }
Word w3() { return parse("srsrutsrsrtsrsutsrsrtsr"); }
Word omega() { return concat({parse("rsrsr"), w2()}); }
Word pi() { return concat({omega(), w1(), parse("utu")}); }
Word tau() { return concat({parse("trs"), w3(), reversed(omega())}); }
Word c() { return parse("rsrs"); }
Word cbar() { return parse("srsr"); }

}  // namespace quadwords

Word swap_rs(const Word& pattern) {
    Word out = pattern;
    for (int& l : out) {
        if (l == 0)
            l = 1;
        else if (l == 1)
            l = 0;
    }
    return out;
}

PatternWords pattern_words(PartnerCase cse) {
    PatternWords pw;
    switch (cse) {
        case PartnerCase::SAdjTriple:
            pw.omega_t = parse("tsrtst");
            pw.pi_t = parse("trs");
            break;
        case PartnerCase::RAdjTriple:
            pw.omega_t = parse("srstrsrt");
            pw.pi_t = parse("srsrstr");
            break;
        case PartnerCase::SAdjQuad:
            pw.omega_t = quadwords::omega();
            pw.pi_t = quadwords::pi();
            pw.tau = quadwords::tau();
            break;
        case PartnerCase::RAdjQuad:
            pw.omega_t = concat({parse("r"), swap_rs(quadwords::w2())});
            pw.pi_t = concat({pw.omega_t, swap_rs(quadwords::w1()), parse("utu")});
            pw.tau = concat({quadwords::cbar(), swap_rs(quadwords::tau()),
                             quadwords::c()});
            break;
        case PartnerCase::Inf:
            pw.pi_t = parse("srs");
            break;
    }
    return pw;
}

PartnerCase partner_case(const Diagram& d, int r, int s, int t, int u) {
    if (t < 0) {
        if (u >= 0)
            throw InputInconsistent("partner_case: quad partner without a partner");
        return PartnerCase::Inf;
    }
    if (!is_h3_triple(d, r, s, t))
        throw InputInconsistent("partner_case: {r,s,t} is not an H3 triple");
    const bool s_adj = d.label(s, t) == 3;
    if (u < 0) return s_adj ? PartnerCase::SAdjTriple : PartnerCase::RAdjTriple;
    if (!is_h4_quad(d, r, s, t, u))
        throw InputInconsistent("partner_case: {r,s,t,u} is not an H4 quad");
    return s_adj ? PartnerCase::SAdjQuad : PartnerCase::RAdjQuad;
}

Word map_letters(const Word& pattern, const std::array<int, 4>& to) {
    Word out;
    out.reserve(pattern.size());
    for (int l : pattern) {
        if (l < 0 || l >= 4 || to[static_cast<size_t>(l)] < 0)
            throw InternalInvariantBroken("map_letters: letter without a target");
        out.push_back(to[static_cast<size_t>(l)]);
    }
    return out;
}

Word substitute_word(const Word& abstract, const std::vector<Word>& letter_words) {
    Word out;
    for (int l : abstract) {
        if (l < 0 || static_cast<size_t>(l) >= letter_words.size())
            throw InternalInvariantBroken("substitute_word: letter out of range");
        const Word& lw = letter_words[static_cast<size_t>(l)];
        out.insert(out.end(), lw.begin(), lw.end());
    }
    return out;
}

}  // namespace coxdef
