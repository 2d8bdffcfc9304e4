/*
 * Constructions and verification of angle deformations.
 *
 * Invariants that the underlying theory guarantees for genuine reflection
 * generating sets are asserted at construction time (InternalInvariantBroken
 * on violation) rather than silently assumed, and every certificate built
 * here is meant to pass verify_deformation, which re-checks all claims by
 * exact matrix arithmetic and only evaluates stored words.
 *
 * Inverse words (the generation certificate) are found at construction time
 * by breadth-first searches confined to provably finite subgroups: the
 * dihedral group of the edge, spherical pockets, and witness-transported
 * pocket expressions.  Anything the search cannot reach stays absent and is
 * reported as unverified, never guessed.
 */

#include "coxdef/deform.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coxdef/errors.hpp"

namespace coxdef {

// ---------------------------------------------------------------------------
// Conjugate words and edges
// ---------------------------------------------------------------------------

Word full_word(const ConjugateWord& cw) {
    if (cw.base < 0) throw InternalInvariantBroken("full_word: unset base");
    Word out = cw.w;
    out.push_back(cw.base);
    const Word rev = reversed(cw.w);
    out.insert(out.end(), rev.begin(), rev.end());
    return out;
}

Mat eval(const ConjugateWord& cw, const CoxeterSystem& sys) {
    return eval(full_word(cw), sys);
}

Edge make_edge(int a, int b) {
    if (a == b) throw InternalInvariantBroken("make_edge: loop");
    return a < b ? Edge{a, b} : Edge{b, a};
}

namespace {

Word cat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string pair_str(int x, int y, const CoxeterMatrix& dia) {
    return "{" + dia.names[static_cast<size_t>(x)] + "," +
           dia.names[static_cast<size_t>(y)] + "}";
}

// All edges of Gamma(domain) other than {r, s}, ascending.
std::vector<Edge> domain_edges(const Diagram& d, VSet domain, int r, int s) {
    std::vector<Edge> out;
    const std::vector<int> vs = vset_vector(domain);
    for (size_t i = 0; i < vs.size(); ++i)
        for (size_t j = i + 1; j < vs.size(); ++j) {
            if (!finite_label(d, vs[i], vs[j])) continue;
            const Edge e = make_edge(vs[i], vs[j]);
            if (e == make_edge(r, s)) continue;
            out.push_back(e);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Pockets
// ---------------------------------------------------------------------------

struct Pocket {
    int r = -1, s = -1, t = -1, u = -1;
    int adj = -1, nadj = -1;  // which of r/s carries the 3-label towards t
    PartnerCase cse = PartnerCase::Inf;
    Word omega_t, pi_t, tau;  // ambient letters
    VSet K = 0;
};

Pocket make_pocket(const Diagram& d, int r, int s, int t, int u) {
    Pocket p;
    p.r = r;
    p.s = s;
    p.t = t;
    p.u = u;
    p.cse = partner_case(d, r, s, t, u);
    const bool s_adj = t < 0 || d.label(s, t) == 3;
    p.adj = s_adj ? s : r;
    p.nadj = s_adj ? r : s;
    const PatternWords pw = pattern_words(p.cse);
    const std::array<int, 4> to{r, s, t, u};
    p.omega_t = map_letters(pw.omega_t, to);
    p.pi_t = map_letters(pw.pi_t, to);
    p.tau = map_letters(pw.tau, to);
    p.K = vset_of({r, s});
    if (t >= 0) p.K = vset_with(p.K, t);
    if (u >= 0) p.K = vset_with(p.K, u);
    return p;
}

// delta of the standard pocket deformation on the listed vertices:
// r -> srs.r.srs, t -> omega_t t omega_t^{-1}, identity elsewhere.
std::map<int, ConjugateWord> pocket_delta_map(const Pocket& p, VSet domain) {
    std::map<int, ConjugateWord> out;
    for (int x : vset_vector(domain)) {
        if (x == p.r)
            out[x] = {Word{p.s, p.r, p.s}, x};
        else if (x == p.t)
            out[x] = {p.omega_t, x};
        else
            out[x] = {Word{}, x};
    }
    return out;
}

// Conjugator for an edge inside K + K^perp; vertices outside {r,s,t,u} are
// treated as perpendicular to the whole pocket.
Word pocket_edge_conjugator(const Pocket& p, int x, int y) {
    auto kind = [&](int v) -> char {
        if (v == p.r) return 'r';
        if (v == p.s) return 's';
        if (v == p.t) return 't';
        if (v == p.u) return 'u';
        return 'p';
    };
    char a = kind(x), b = kind(y);
    if (a > b) std::swap(a, b);
    const std::string key{a, b};
    if (key == "rs")
        throw InternalInvariantBroken("pocket edge: the defining pair");
    if (key == "pp" || key == "ps" || key == "pu" || key == "su") return {};
    if (key == "pr" || key == "ru") return Word{p.s, p.r, p.s};
    if (key == "pt" || key == "tu") return p.omega_t;
    if (key == "rt") return p.adj == p.r ? p.omega_t : p.pi_t;
    if (key == "st") return p.adj == p.s ? p.omega_t : p.pi_t;
    throw InternalInvariantBroken("pocket edge: unclassified pair");
}

// Standard edge table of the pocket on the edges inside `domain`.
std::map<Edge, EdgeImage> pocket_edge_table(const Diagram& d, const Pocket& p,
                                            VSet domain) {
    std::map<Edge, EdgeImage> out;
    for (const Edge& e : domain_edges(d, domain, p.r, p.s))
        out[e] = {e, pocket_edge_conjugator(p, e.first, e.second)};
    return out;
}

// ---------------------------------------------------------------------------
// Inverse words
// ---------------------------------------------------------------------------

struct ImageGen {
    int letter = -1;  // the delta-alphabet letter this image stands for
    Mat m;
    Vec alpha;  // unit root of the image reflection
    Vec coeff;  // 2 * gram * alpha (for rank-one right multiplication)
};

ImageGen make_image_gen(int letter, const ConjugateWord& cw,
                        const CoxeterSystem& sys) {
    ImageGen g;
    g.letter = letter;
    const Mat w = eval(cw.w, sys);
    g.m = w * sys.gens[static_cast<size_t>(cw.base)] * eval(reversed(cw.w), sys);
    g.alpha = canonical_root(w * Vec::Unit(sys.rank(), cw.base));
    g.coeff = (sys.gram * g.alpha) * AlgebraicReal(2);
    return g;
}

// BFS of the subgroup generated by `images`, searching for the generator
// matrices of `targets`; found words (over the delta alphabet) land in
// `found`.  Right multiplication by a reflection is a rank-one update.
// Returns true when every target was found before the cap.
bool bfs_express(const CoxeterSystem& sys, const std::vector<ImageGen>& images,
                 const std::vector<int>& targets, size_t cap,
                 std::map<int, Word>& found) {
    std::set<int> want(targets.begin(), targets.end());
    for (auto it = want.begin(); it != want.end();)
        it = found.count(*it) ? want.erase(it) : std::next(it);
    if (want.empty()) return true;

    std::vector<Mat> elems;
    std::vector<Word> words;
    std::unordered_map<std::size_t, std::vector<size_t>> seen;
    auto add_new = [&](const Mat& m) -> bool {
        const std::size_t h = hash_matrix(m);
        auto& bucket = seen[h];
        for (size_t idx : bucket)
            if (mat_equal(elems[idx], m)) return false;
        bucket.push_back(elems.size());
        elems.push_back(m);
        return true;
    };
    add_new(identity_matrix(sys.rank()));
    words.push_back({});
    for (size_t head = 0; head < elems.size() && !want.empty(); ++head) {
        for (const ImageGen& g : images) {
            if (elems.size() >= cap) return false;
            const Vec moved = elems[head] * g.alpha;
            const Mat next = elems[head] - moved * g.coeff.transpose();
            if (!add_new(next)) continue;
            Word w = words[head];
            w.push_back(g.letter);
            words.push_back(std::move(w));
            for (auto it = want.begin(); it != want.end();) {
                if (mat_equal(elems.back(), sys.gens[static_cast<size_t>(*it)])) {
                    found[*it] = words.back();
                    it = want.erase(it);
                } else {
                    ++it;
                }
            }
        }
    }
    return want.empty();
}

void fill_inverse_words(Deformation& def, const CoxeterSystem& sys) {
    def.inverse_words.clear();
    const Diagram& d = sys.matrix;
    const std::vector<int> dom = vset_vector(def.domain);

    std::map<int, ImageGen> img;
    for (int x : dom) {
        const auto it = def.delta.find(x);
        if (it == def.delta.end() || it->second.base != x) return;
        for (int l : it->second.w)
            if (l < 0 || l >= sys.rank() || !vset_has(def.domain, l)) return;
        img.emplace(x, make_image_gen(x, it->second, sys));
    }

    std::map<int, Word> inv;
    auto sub = [&](const Word& ambient) {
        Word out;
        for (int l : ambient) {
            const Word& iw = inv.at(l);
            out.insert(out.end(), iw.begin(), iw.end());
        }
        return out;
    };
    auto gens_of = [&](const std::set<int>& cluster) {
        std::vector<ImageGen> g;
        for (int k : cluster) g.push_back(img.at(k));
        return g;
    };

    {  // seed: the dihedral group of the edge
        std::map<int, Word> got;
        bfs_express(sys, gens_of({def.r, def.s}), {def.r, def.s},
                    kDefaultGroupCap, got);
        for (auto& [k, w] : got) inv.emplace(k, std::move(w));
    }

    std::set<int> hopeless;
    std::set<int> witness_done;
    const int max_rounds = 4 * static_cast<int>(dom.size()) + 8;
    for (int round = 0; round < max_rounds; ++round) {
        // substitution fixpoint: x = w^{-1} delta(x) w once w is expressible
        bool changed = true;
        while (changed) {
            changed = false;
            for (int x : dom) {
                if (inv.count(x)) continue;
                const ConjugateWord& cw = def.delta.at(x);
                bool ready = true;
                for (int l : cw.w)
                    if (!inv.count(l)) {
                        ready = false;
                        break;
                    }
                if (!ready) continue;
                Word o = sub(reversed(cw.w));
                o.push_back(x);
                const Word tail = sub(cw.w);
                o.insert(o.end(), tail.begin(), tail.end());
                inv.emplace(x, std::move(o));
                changed = true;
            }
        }
        bool all = true;
        for (int x : dom)
            if (!inv.count(x)) {
                all = false;
                break;
            }
        if (all) break;

        // one spherical-cluster attempt around the first stuck generator
        bool progressed = false;
        for (int x : dom) {
            if (inv.count(x) || hopeless.count(x)) continue;
            std::set<int> cluster{def.r, def.s, x};
            for (int l : def.delta.at(x).w) cluster.insert(l);
            VSet cl = 0;
            for (int k : cluster) cl = vset_with(cl, k);
            std::map<int, Word> got;
            if (is_spherical(d, cl)) {
                std::vector<int> targets;
                for (int k : cluster)
                    if (!inv.count(k)) targets.push_back(k);
                bfs_express(sys, gens_of(cluster), targets, kDefaultGroupCap, got);
            }
            if (got.empty())
                hopeless.insert(x);
            else
                for (auto& [k, w] : got) inv.emplace(k, std::move(w));
            progressed = true;
            break;
        }
        if (progressed) continue;

        // witness transport: express a pocket through delta = w delta_t w^{-1}
        bool wprog = false;
        for (const auto& [tw, wword] : def.tame_witnesses) {
            if (witness_done.count(tw)) continue;
            bool ready = true;
            for (int l : wword)
                if (!inv.count(l)) {
                    ready = false;
                    break;
                }
            if (!ready) continue;
            witness_done.insert(tw);
            if (d.label(def.r, def.s) != 5) continue;
            if (tw < 0 || tw >= sys.rank()) continue;
            if (!is_h3_triple(d, def.r, def.s, tw)) continue;
            int uq = -1;
            for (int v = 0; v < sys.rank(); ++v)
                if (v != tw && vset_has(def.domain, v) &&
                    is_h4_quad(d, def.r, def.s, tw, v)) {
                    uq = v;
                    break;
                }
            Pocket p;
            try {
                p = make_pocket(d, def.r, def.s, tw, uq);
            } catch (const CoxdefError&) {
                continue;
            }
            const VSet kdef = (p.K | perp_of(d, p.K)) & def.domain;
            const auto std_delta = pocket_delta_map(p, kdef);
            std::vector<ImageGen> std_imgs;
            for (int k : vset_vector(p.K))
                std_imgs.push_back(make_image_gen(k, std_delta.at(k), sys));
            std::map<int, Word> got;
            std::vector<int> targets;
            for (int k : vset_vector(p.K))
                if (!inv.count(k)) targets.push_back(k);
            bfs_express(sys, std_imgs, targets, kDefaultGroupCap, got);
            const Word pre = sub(reversed(wword));
            const Word post = sub(wword);
            for (auto& [k, vw] : got) {
                if (inv.count(k)) continue;
                Word o = pre;
                o.insert(o.end(), vw.begin(), vw.end());
                o.insert(o.end(), post.begin(), post.end());
                inv.emplace(k, std::move(o));
                wprog = true;
            }
            for (int y : vset_vector(kdef & ~p.K)) {
                if (inv.count(y)) continue;
                Word o = pre;
                o.push_back(y);
                o.insert(o.end(), post.begin(), post.end());
                inv.emplace(y, std::move(o));
                wprog = true;
            }
            if (wprog) break;
        }
        if (!wprog) break;
    }
    def.inverse_words = std::move(inv);
}

void fill_inverse_words(Deformation& def, const Diagram& d) {
    const CoxeterSystem sys = build_system(d);
    fill_inverse_words(def, sys);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sharpening conjugator
// ---------------------------------------------------------------------------

Word sharpening_omega_abstract(const ReflectionRecord& r_ref,
                               const ReflectionRecord& s_ref,
                               const CoxeterSystem& sys, long order_cap) {
    if (mat_equal(r_ref.matrix, s_ref.matrix))
        throw InputInconsistent("sharpening: the two reflections coincide");
    const AlgebraicReal b0 = pairing(r_ref.root, s_ref.root, sys);
    if ((abs(b0) - AlgebraicReal(1)).sign() >= 0)
        throw InfiniteOrderPair("sharpening: |b| >= 1, the product has infinite order");
    const std::optional<long> q =
        order_with_cap(r_ref.matrix * s_ref.matrix, order_cap);
    if (!q) throw CapTooSmall("sharpening: product order exceeds the cap");
    if (equals_cos_pi_over(abs(b0), *q))
        throw InputInconsistent("sharpening: the pair is already sharp-angled");
    if (*q == 5) return Word{1, 0, 1};

    // Exhaustive breadth-first search of the (finite) dihedral group, letter
    // order r before s; the first conjugator met is returned.
    const Mat mats[2] = {r_ref.matrix, s_ref.matrix};
    std::vector<Mat> elems;
    std::vector<Word> words;
    std::unordered_map<std::size_t, std::vector<size_t>> seen;
    auto add_new = [&](const Mat& m, Word w) {
        const std::size_t h = hash_matrix(m);
        auto& bucket = seen[h];
        for (size_t idx : bucket)
            if (mat_equal(elems[idx], m)) return;
        bucket.push_back(elems.size());
        elems.push_back(m);
        words.push_back(std::move(w));
    };
    add_new(identity_matrix(sys.rank()), {});
    for (size_t head = 0; head < elems.size(); ++head) {
        const Mat& w = elems[head];
        Mat winv = identity_matrix(sys.rank());
        for (auto it = words[head].rbegin(); it != words[head].rend(); ++it)
            winv = winv * mats[*it];
        const Mat cand = w * r_ref.matrix * winv;
        const Vec croot = canonical_root(w * r_ref.root);
        const AlgebraicReal b = pairing(croot, s_ref.root, sys);
        if ((abs(b) - AlgebraicReal(1)).sign() < 0) {
            const std::optional<long> qq =
                order_with_cap(cand * s_ref.matrix, order_cap);
            if (qq && *qq == *q && equals_cos_pi_over(abs(b), *qq))
                return words[head];
        }
        for (int l = 0; l < 2; ++l)
            add_new(elems[head] * mats[l], cat(words[head], Word{l}));
    }
    throw NotFound("sharpening: no dihedral conjugator re-angles the pair");
}

Word sharpening_omega(const ReflectionRecord& r_ref, const ReflectionRecord& s_ref,
                      const CoxeterSystem& sys, long order_cap) {
    const Word abstract = sharpening_omega_abstract(r_ref, s_ref, sys, order_cap);
    return substitute_word(abstract, {r_ref.word, s_ref.word});
}

// ---------------------------------------------------------------------------
// Theta-edge construction
// ---------------------------------------------------------------------------

Deformation theta_deformation(const Diagram& d, int r, int s, const Word& omega) {
    if (!is_theta_edge(d, r, s))
        throw NotThetaEdge("theta: " + pair_str(r, s, d) + " is not a theta-edge");
    for (int l : omega)
        if (l != r && l != s)
            throw InputInconsistent("theta: omega must be a word over the edge");
    const int n = d.rank();
    const VSet J = vset_of({r, s});
    const PerpFinInf pfi = perp_fin_inf(d, J);
    if (pfi.fin != pfi.perp)
        throw InternalInvariantBroken("theta-edge with a finite attachment outside J^perp");
    const std::vector<VSet> comps = j_components(d, J);

    Deformation def;
    def.r = r;
    def.s = s;
    def.omega = omega;
    def.domain = full_vset(n);
    def.delta[r] = {omega, r};
    def.delta[s] = {Word{}, s};
    for (int y : vset_vector(pfi.perp)) def.delta[y] = {Word{}, y};

    std::vector<Word> gamma(comps.size());
    std::vector<int> comp_of(static_cast<size_t>(n), -1);
    {
        std::ostringstream os;
        os << "theta deformation at " << pair_str(r, s, d);
        def.trace.push_back(os.str());
    }
    for (size_t i = 0; i < comps.size(); ++i) {
        bool r_free = true;
        for (int x : vset_vector(comps[i])) {
            comp_of[static_cast<size_t>(x)] = static_cast<int>(i);
            if (finite_label(d, r, x)) r_free = false;
        }
        if (!r_free) {
            bool s_free = true;
            for (int x : vset_vector(comps[i]))
                if (finite_label(d, s, x)) s_free = false;
            if (!s_free)
                throw InternalInvariantBroken("theta-edge with an inflexible component");
            gamma[i] = omega;
        }
        for (int x : vset_vector(comps[i])) def.delta[x] = {gamma[i], x};
        std::ostringstream os;
        os << "component " << vset_to_string(comps[i], d) << ": free end "
           << d.names[static_cast<size_t>(r_free ? r : s)] << ", conjugator "
           << (gamma[i].empty() ? "1" : "omega");
        def.trace.push_back(os.str());
    }

    for (const Edge& e : domain_edges(d, def.domain, r, s)) {
        const int cx = comp_of[static_cast<size_t>(e.first)];
        const int cy = comp_of[static_cast<size_t>(e.second)];
        Word w;
        if (cx >= 0 || cy >= 0) {
            if (cx >= 0 && cy >= 0 && cx != cy)
                throw InternalInvariantBroken("edge between distinct components");
            w = gamma[static_cast<size_t>(cx >= 0 ? cx : cy)];
        } else if (e.first == r || e.second == r) {
            w = omega;
        }
        def.edge_bijection[e] = {e, w};
    }
    fill_inverse_words(def, d);
    return def;
}

// ---------------------------------------------------------------------------
// Standard pocket deformation
// ---------------------------------------------------------------------------

Deformation standard_deformation(const Diagram& d, const EdgeContext& ctx, int t) {
    const int r = ctx.r, s = ctx.s;
    int u = -1;
    if (t >= 0) {
        if (!vset_has(ctx.T, t))
            throw InputInconsistent("standard: t is not an H3 partner of the edge");
        if (!is_tame(d, r, s, t, full_vset(d.rank())))
            throw NotTame("standard: partner " + d.names[static_cast<size_t>(t)] +
                          " is wild");
        const VSet ut = ctx.Ut.at(t);
        if (ut) u = vset_vector(ut)[0];
    }
    const Pocket p = make_pocket(d, r, s, t, u);
    const VSet kperp = perp_of(d, p.K);

    Deformation def;
    def.r = r;
    def.s = s;
    def.omega = Word{s, r, s};
    def.domain = p.K | kperp;
    def.delta = pocket_delta_map(p, def.domain);
    def.edge_bijection = pocket_edge_table(d, p, def.domain);
    if (t >= 0) def.tame_witnesses[t] = {};
    std::ostringstream os;
    os << "standard pocket deformation at " << pair_str(r, s, d) << ", partner ";
    if (t < 0)
        os << "none";
    else
        os << d.names[static_cast<size_t>(t)]
           << (u >= 0 ? " with quad partner " + d.names[static_cast<size_t>(u)]
                      : std::string(", triple"));
    def.trace.push_back(os.str());
    fill_inverse_words(def, d);
    return def;
}

// ---------------------------------------------------------------------------
// One-pocket deformation of the whole diagram
// ---------------------------------------------------------------------------

Deformation k_special_deformation(const Diagram& d, int r, int s, int t, int u,
                                  int a) {
    if (a != r && a != s)
        throw InputInconsistent("special pocket: a must be r or s");
    const Pocket p = make_pocket(d, r, s, t, u);  // validates the pocket shape
    if (t < 0) throw InputInconsistent("special pocket: a partner is required");
    const int n = d.rank();
    const VSet J = vset_of({r, s});
    const PerpFinInf pfi = perp_fin_inf(d, J);

    for (int x = 0; x < n; ++x) {
        if (vset_has(p.K, x)) continue;
        const int lab = d.label(x, a);
        if (lab == 2) {
            if (!vset_has(pfi.perp, x))
                throw NotASpecial("condition on a violated at " +
                                  d.names[static_cast<size_t>(x)] +
                                  ": o(xa) = 2 outside J^perp");
        } else if (lab != kInfLabel) {
            throw NotASpecial("condition on a violated at " +
                              d.names[static_cast<size_t>(x)] + ": o(xa) = " +
                              std::to_string(lab));
        }
    }
    const VSet kperp = perp_of(d, p.K);
    for (int y : vset_vector(pfi.perp & ~p.K)) {
        bool attached = finite_label(d, y, t);
        for (int x : vset_vector(pfi.inf))
            if (finite_label(d, y, x)) attached = true;
        if (attached && !vset_has(kperp, y))
            throw NotASpecial("condition on t violated at " +
                              d.names[static_cast<size_t>(y)] +
                              ": attached to the pocket side but not in K^perp");
    }
    if ((pfi.fin & ~pfi.perp & ~p.K) != 0)
        throw InternalInvariantBroken("special pocket: unclassified finite attachment");

    const bool a_adjacent = (a == p.adj);
    const Word gamma_inf = a_adjacent ? p.pi_t : p.omega_t;
    const bool switching = (u < 0 && a_adjacent);

    Deformation def;
    def.r = r;
    def.s = s;
    def.omega = Word{s, r, s};
    def.domain = full_vset(n);
    def.delta[r] = {Word{s, r, s}, r};
    def.delta[s] = {Word{}, s};
    def.delta[t] = {p.omega_t, t};
    if (u >= 0) def.delta[u] = {Word{}, u};
    for (int y : vset_vector(pfi.perp & ~p.K)) def.delta[y] = {Word{}, y};
    for (int x : vset_vector(pfi.inf)) def.delta[x] = {gamma_inf, x};

    auto kind = [&](int v) -> char {
        if (vset_has(p.K, v)) return 'k';
        if (vset_has(pfi.inf, v)) return 'i';
        return 'p';
    };
    for (const Edge& e : domain_edges(d, def.domain, r, s)) {
        const char kx = kind(e.first), ky = kind(e.second);
        Edge to = e;
        Word w;
        if (kx == 'k' && ky == 'k') {
            w = pocket_edge_conjugator(p, e.first, e.second);
        } else if (kx == 'i' && ky == 'i') {
            w = gamma_inf;
        } else if ((kx == 'i' && ky == 'p') || (kx == 'p' && ky == 'i')) {
            w = gamma_inf;
        } else if (kx == 'p' && ky == 'p') {
            // both fixed
        } else if (kx == 'k' || ky == 'k') {
            const int z = (kx == 'k') ? e.first : e.second;
            const int o = (kx == 'k') ? e.second : e.first;
            if (kind(o) == 'p') {
                w = pocket_edge_conjugator(p, z, o);
            } else {  // pocket member against a component vertex
                if (z == a)
                    throw InternalInvariantBroken("special pocket: edge at the free end");
                if (!switching) {
                    w = gamma_inf;
                } else if (z == p.nadj) {
                    to = make_edge(p.t, o);
                    w = p.pi_t;
                } else if (z == p.t) {
                    to = make_edge(p.nadj, o);
                    w = p.pi_t;
                } else {
                    throw InternalInvariantBroken("special pocket: unexpected switch edge");
                }
            }
        }
        def.edge_bijection[e] = {to, w};
    }
    def.tame_witnesses[t] = {};
    std::ostringstream os;
    os << "special pocket deformation at " << pair_str(r, s, d) << ", pocket "
       << vset_to_string(p.K, d) << ", free end "
       << d.names[static_cast<size_t>(a)]
       << (switching ? ", mirror switch active" : "");
    def.trace.push_back(os.str());
    fill_inverse_words(def, d);
    return def;
}

// ---------------------------------------------------------------------------
// Pocket mirror
// ---------------------------------------------------------------------------

MirrorResult k_mirror(const Diagram& d, int r, int s, int t) {
    if (!is_h3_triple(d, r, s, t))
        throw InputInconsistent("mirror: {r,s,t} is not an H3 triple");
    const PerpFinInf pfi = perp_fin_inf(d, vset_of({r, s}));
    MirrorResult out;
    out.diagram = d;
    auto set_label = [&out](int i, int j, int lab) {
        out.diagram.m[static_cast<size_t>(i)][static_cast<size_t>(j)] = lab;
        out.diagram.m[static_cast<size_t>(j)][static_cast<size_t>(i)] = lab;
    };
    for (int x : vset_vector(pfi.inf)) {
        const int lrx = d.label(r, x), ltx = d.label(t, x);
        set_label(r, x, ltx);
        set_label(t, x, lrx);
    }
    out.diagram.validate();
    for (int x = 0; x < d.rank(); ++x)
        for (int y = x + 1; y < d.rank(); ++y) {
            if (!finite_label(d, x, y)) continue;
            const Edge e{x, y};
            Edge img = e;
            if (vset_has(pfi.inf, x) && (y == r || y == t))
                img = make_edge(y == r ? t : r, x);
            else if (vset_has(pfi.inf, y) && (x == r || x == t))
                img = make_edge(x == r ? t : r, y);
            out.edge_bijection[e] = img;
        }
    return out;
}

// ---------------------------------------------------------------------------
// Tame route
// ---------------------------------------------------------------------------

Deformation tame_deformation(const Diagram& d, const EdgeContext& ctx) {
    const int r = ctx.r, s = ctx.s, n = d.rank();
    const VSet full = full_vset(n);
    for (int t : vset_vector(ctx.T))
        if (!is_tame(d, r, s, t, full))
            throw NotAllTame("tame route: partner " +
                             d.names[static_cast<size_t>(t)] + " is wild");

    std::map<int, Pocket> pocket;
    for (int t : vset_vector(ctx.T)) {
        const VSet ut = ctx.Ut.at(t);
        pocket.emplace(t, make_pocket(d, r, s, t, ut ? vset_vector(ut)[0] : -1));
    }
    const Pocket bare = make_pocket(d, r, s, -1, -1);

    const size_t nc = ctx.components.size();
    std::vector<Word> gamma(nc);
    std::vector<int> a_of(nc);
    std::vector<bool> switching(nc, false);
    std::vector<int> comp_of(static_cast<size_t>(n), -1);

    Deformation def;
    def.r = r;
    def.s = s;
    def.omega = Word{s, r, s};
    def.domain = full;
    def.delta[r] = {Word{s, r, s}, r};
    def.delta[s] = {Word{}, s};
    for (int y : vset_vector(ctx.perp)) def.delta[y] = {Word{}, y};
    for (int t : vset_vector(ctx.T)) def.delta[t] = {pocket.at(t).omega_t, t};
    {
        std::ostringstream os;
        os << "tame deformation at " << pair_str(r, s, d) << ", partners "
           << (ctx.T ? vset_to_string(ctx.T, d) : std::string("{}"));
        def.trace.push_back(os.str());
    }
    for (size_t i = 0; i < nc; ++i) {
        const int tL = ctx.t_of[i];
        const Pocket& p = tL < 0 ? bare : pocket.at(tL);
        bool nadj_free = true, adj_free = true;
        for (int x : vset_vector(ctx.components[i])) {
            comp_of[static_cast<size_t>(x)] = static_cast<int>(i);
            if (finite_label(d, p.nadj, x)) nadj_free = false;
            if (finite_label(d, p.adj, x)) adj_free = false;
        }
        if (nadj_free) {
            a_of[i] = p.nadj;
            gamma[i] = p.omega_t;
        } else if (adj_free) {
            a_of[i] = p.adj;
            gamma[i] = p.pi_t;
        } else {
            throw InternalInvariantBroken("tame route: component with no free end");
        }
        switching[i] = (a_of[i] == p.adj && tL >= 0 && p.u < 0);
        for (int x : vset_vector(ctx.components[i])) def.delta[x] = {gamma[i], x};
        std::ostringstream os;
        os << "component " << vset_to_string(ctx.components[i], d) << ": partner "
           << (tL < 0 ? std::string("none") : d.names[static_cast<size_t>(tL)])
           << ", free end " << d.names[static_cast<size_t>(a_of[i])]
           << (switching[i] ? ", switch" : "");
        def.trace.push_back(os.str());
    }

    auto kind = [&](int v) -> char {
        if (v == r) return 'r';
        if (v == s) return 's';
        if (vset_has(ctx.T, v)) return 't';
        if (vset_has(ctx.perp, v)) return 'p';
        if (comp_of[static_cast<size_t>(v)] >= 0) return 'c';
        throw InternalInvariantBroken("tame route: unclassified vertex " +
                                      d.names[static_cast<size_t>(v)]);
    };
    for (const Edge& e : domain_edges(d, full, r, s)) {
        const char kx = kind(e.first), ky = kind(e.second);
        Edge to = e;
        Word w;
        if (kx == 'c' || ky == 'c') {
            const int x = (kx == 'c') ? e.first : e.second;
            const int o = (kx == 'c') ? e.second : e.first;
            const size_t ci = static_cast<size_t>(comp_of[static_cast<size_t>(x)]);
            const char ko = (kx == 'c') ? ky : kx;
            if (ko == 'c') {
                if (comp_of[static_cast<size_t>(o)] != static_cast<int>(ci))
                    throw InternalInvariantBroken("edge between distinct components");
                w = gamma[ci];
            } else if (ko == 'p') {
                w = gamma[ci];
            } else if (ko == 't') {
                if (o != ctx.t_of[ci])
                    throw InternalInvariantBroken("component attached to a foreign partner");
                if (switching[ci]) {
                    const Pocket& p = pocket.at(o);
                    to = make_edge(p.nadj, x);
                    w = p.pi_t;
                } else {
                    w = gamma[ci];
                }
            } else {  // r or s
                if (o == a_of[ci])
                    throw InternalInvariantBroken("edge at a component's free end");
                if (switching[ci]) {
                    to = make_edge(ctx.t_of[ci], x);
                    w = pocket.at(ctx.t_of[ci]).pi_t;
                } else {
                    w = gamma[ci];
                }
            }
        } else if (kx == 't' || ky == 't') {
            const int t = (kx == 't') ? e.first : e.second;
            const int o = (kx == 't') ? e.second : e.first;
            if (kind(o) == 't')
                throw InternalInvariantBroken("edge between two partners");
            w = (kind(o) == 'p') ? pocket.at(t).omega_t
                                 : pocket_edge_conjugator(pocket.at(t), t, o);
        } else if (e.first == r || e.second == r) {
            w = Word{s, r, s};
        }
        def.edge_bijection[e] = {to, w};
    }
    for (int t : vset_vector(ctx.T)) def.tame_witnesses[t] = {};
    fill_inverse_words(def, d);
    return def;
}

// ---------------------------------------------------------------------------
// Wild route
// ---------------------------------------------------------------------------

namespace {

Word translate_word(const Word& w, const std::vector<int>& to_parent) {
    Word out;
    out.reserve(w.size());
    for (int l : w) out.push_back(to_parent.at(static_cast<size_t>(l)));
    return out;
}

Deformation translate_deformation(const Deformation& in,
                                  const std::vector<int>& to_parent) {
    auto tr = [&](int v) { return to_parent.at(static_cast<size_t>(v)); };
    Deformation out;
    out.r = tr(in.r);
    out.s = tr(in.s);
    out.omega = translate_word(in.omega, to_parent);
    for (int v : vset_vector(in.domain)) out.domain = vset_with(out.domain, tr(v));
    for (const auto& [x, cw] : in.delta)
        out.delta[tr(x)] = {translate_word(cw.w, to_parent), tr(cw.base)};
    for (const auto& [e, im] : in.edge_bijection)
        out.edge_bijection[make_edge(tr(e.first), tr(e.second))] = {
            make_edge(tr(im.to.first), tr(im.to.second)),
            translate_word(im.conjugator, to_parent)};
    for (const auto& [t, w] : in.tame_witnesses)
        out.tame_witnesses[tr(t)] = translate_word(w, to_parent);
    for (const auto& [x, w] : in.inverse_words)
        out.inverse_words[tr(x)] = translate_word(w, to_parent);
    for (const auto& line : in.trace) out.trace.push_back("  [piece] " + line);
    return out;
}

}  // namespace

Deformation wild_deformation(const Diagram& d, const EdgeContext& ctx) {
    const int r = ctx.r, s = ctx.s, n = d.rank();
    const VSet full = full_vset(n);
    std::vector<int> wilds;
    for (int t : vset_vector(ctx.T))
        if (!is_tame(d, r, s, t, full)) wilds.push_back(t);
    if (wilds.empty()) return tame_deformation(d, ctx);

    const int t = wilds.front();
    const TContext tctx = t_context(d, ctx, t);
    const CoxeterSystem sys = build_system(d);
    const int deg_s = wild_degree(d, r, s, full);

    struct Piece {
        int u = -1;
        VSet Y = 0;
        Word tau, wu;
        Deformation delta;
        std::map<int, Word> sub_witnesses;  // witnesses of the recursive piece
    };
    auto build_piece = [&](int u) {
        const WildSets wsets = wild_sets(d, ctx, t, u);
        if (wild_degree(d, r, s, wsets.Y) >= deg_s)
            throw DegreeNotDecreasing("wild route: restriction does not lower the degree");
        const InducedDiagram ind = induced_subdiagram(d, wsets.Y);
        std::vector<int> to_child(static_cast<size_t>(n), -1);
        for (size_t i = 0; i < ind.to_parent.size(); ++i)
            to_child[static_cast<size_t>(ind.to_parent[i])] = static_cast<int>(i);
        const Deformation child = delta_route_deformation(
            ind.diagram, to_child[static_cast<size_t>(r)],
            to_child[static_cast<size_t>(s)]);
        Deformation theta_u = translate_deformation(child, ind.to_parent);

        Piece pc;
        pc.u = u;
        pc.Y = wsets.Y;
        pc.sub_witnesses = theta_u.tame_witnesses;
        const auto itw = pc.sub_witnesses.find(t);
        if (itw == pc.sub_witnesses.end())
            throw InternalInvariantBroken("wild route: recursive piece lost the witness of t");
        pc.wu = reversed(itw->second);
        Deformation norm = conjugate_deformation(theta_u, pc.wu);

        // Normalize the pocket of t inside the piece to the standard records;
        // the witness guarantees matrix equality, which we assert.
        const Pocket p = make_pocket(d, r, s, t, u);
        const auto std_delta = pocket_delta_map(p, wsets.W);
        for (const auto& [x, cw] : std_delta) {
            if (!mat_equal(eval(norm.delta.at(x), sys), eval(cw, sys)))
                throw InternalInvariantBroken("wild route: pocket normalization failed");
            norm.delta[x] = cw;
        }
        for (const auto& [e, im] : pocket_edge_table(d, p, wsets.W))
            norm.edge_bijection[e] = im;
        if (u >= 0) {
            pc.tau = p.tau;
            pc.delta = conjugate_deformation(norm, p.tau);
        } else {
            pc.delta = std::move(norm);
        }
        return pc;
    };

    Piece base = build_piece(-1);
    Deformation glue = base.delta;
    const std::vector<int> us = vset_vector(ctx.Ut.at(t));
    std::vector<Piece> pieces;
    for (int u : us) {
        Piece pc = build_piece(u);
        // The piece agrees with the base on the shared vertices; assert by
        // matrices and rewrite to the base records so the merge is literal.
        const VSet ov = pc.Y & base.Y;
        for (int x : vset_vector(ov)) {
            if (!mat_equal(eval(pc.delta.delta.at(x), sys),
                           eval(base.delta.delta.at(x), sys)))
                throw InternalInvariantBroken("wild route: pieces disagree on the overlap");
            pc.delta.delta[x] = base.delta.delta.at(x);
        }
        for (auto& [e, im] : pc.delta.edge_bijection) {
            if (!vset_has(ov, e.first) || !vset_has(ov, e.second)) continue;
            const auto itb = base.delta.edge_bijection.find(e);
            if (itb != base.delta.edge_bijection.end()) im = itb->second;
        }
        glue = merge(glue, pc.delta, d);
        pieces.push_back(std::move(pc));
    }

    // Witnesses of the glued map: every partner tame in the full diagram
    // lives in a piece, whose witness transports along tau_u and w_u.
    glue.tame_witnesses.clear();
    for (int tp : vset_vector(ctx.T)) {
        if (tp == t || !is_tame(d, r, s, tp, full)) continue;
        int li = -1;
        for (size_t i = 0; i < tctx.components.size(); ++i)
            if (vset_has(tctx.components[i], tp)) li = static_cast<int>(i);
        if (li < 0)
            throw InternalInvariantBroken("wild route: partner outside every component");
        const int u = tctx.u_of[static_cast<size_t>(li)];
        const Piece* pc = &base;
        if (u >= 0) {
            for (size_t i = 0; i < us.size(); ++i)
                if (us[i] == u) pc = &pieces[i];
        }
        const auto itv = pc->sub_witnesses.find(tp);
        if (itv == pc->sub_witnesses.end())
            throw InternalInvariantBroken("wild route: piece lost a partner witness");
        glue.tame_witnesses[tp] = cat(cat(pc->tau, pc->wu), itv->second);
    }
    {
        std::ostringstream os;
        os << "wild glue at " << pair_str(r, s, d) << ", wild partner "
           << d.names[static_cast<size_t>(t)] << ", " << (us.size() + 1)
           << " pieces";
        glue.trace.push_back(os.str());
    }
    fill_inverse_words(glue, sys);
    return glue;
}

Deformation delta_route_deformation(const Diagram& d, int r, int s) {
    const EdgeContext ctx = edge_context(d, r, s);
    return wild_deformation(d, ctx);  // delegates to tame when nothing is wild
}

// ---------------------------------------------------------------------------
// Combinators
// ---------------------------------------------------------------------------

Deformation conjugate_deformation(const Deformation& din, const Word& g) {
    Deformation out = din;
    for (auto& [x, cw] : out.delta) cw.w = cat(g, cw.w);
    for (auto& [e, im] : out.edge_bijection) im.conjugator = cat(g, im.conjugator);
    for (auto& [t, w] : out.tame_witnesses) w = cat(g, w);
    out.inverse_words.clear();
    out.trace.push_back("conjugated by an outer word of length " +
                        std::to_string(g.size()));
    return out;
}

Deformation merge(const Deformation& d1, const Deformation& d2, const Diagram& dia) {
    if (d1.r != d2.r || d1.s != d2.s || d1.omega != d2.omega)
        throw IncompatibleOverlap("merge: different defining edges or omega");
    const VSet ov = d1.domain & d2.domain;
    if (!vset_has(ov, d1.r) || !vset_has(ov, d1.s))
        throw IncompatibleOverlap("merge: the edge must lie in both domains");
    for (int x : vset_vector(ov)) {
        const auto i1 = d1.delta.find(x), i2 = d2.delta.find(x);
        if (i1 == d1.delta.end() || i2 == d2.delta.end() ||
            i1->second.base != i2->second.base || i1->second.w != i2->second.w)
            throw IncompatibleOverlap("merge: maps disagree at " +
                                      dia.names[static_cast<size_t>(x)]);
    }
    const VSet uni = d1.domain | d2.domain;
    for (const Edge& e : domain_edges(dia, uni, d1.r, d1.s)) {
        const bool in1 = vset_has(d1.domain, e.first) && vset_has(d1.domain, e.second);
        const bool in2 = vset_has(d2.domain, e.first) && vset_has(d2.domain, e.second);
        if (!in1 && !in2)
            throw EdgeNotCovered("merge: edge " + pair_str(e.first, e.second, dia) +
                                 " crosses the parts");
    }
    Deformation out = d1;
    out.domain = uni;
    for (const auto& kv : d2.delta) out.delta.emplace(kv.first, kv.second);
    for (const auto& kv : d2.edge_bijection) out.edge_bijection.emplace(kv.first, kv.second);
    for (const auto& kv : d2.tame_witnesses) out.tame_witnesses.emplace(kv.first, kv.second);
    for (const auto& kv : d2.inverse_words) out.inverse_words.emplace(kv.first, kv.second);
    for (const auto& line : d2.trace) out.trace.push_back(line);
    out.trace.push_back("merged a second certificate over the shared edge");
    return out;
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

VerifyReport verify_deformation(const Deformation& def, const CoxeterSystem& sys,
                                long order_cap, size_t group_cap) {
    (void)group_cap;
    VerifyReport rep;
    auto add = [&rep](std::string check, bool ok, bool verified, std::string detail) {
        if (!ok)
            ++rep.failures;
        else if (!verified)
            ++rep.unverified;
        rep.items.push_back({std::move(check), ok, verified, std::move(detail)});
    };
    const Diagram& dia = sys.matrix;
    const int n = sys.rank();
    auto nm = [&dia](int v) { return dia.names[static_cast<size_t>(v)]; };

    if (def.r < 0 || def.r >= n || def.s < 0 || def.s >= n || def.r == def.s ||
        !vset_has(def.domain, def.r) || !vset_has(def.domain, def.s)) {
        add("AD2", false, true, "defining edge outside the domain");
        return rep;
    }

    // images and their roots
    std::map<int, Mat> M;
    std::map<int, Vec> R;
    for (int x : vset_vector(def.domain)) {
        const auto it = def.delta.find(x);
        std::string bad;
        if (it == def.delta.end())
            bad = "no image";
        else if (it->second.base != x)
            bad = "image conjugates a different generator";
        else
            for (int l : it->second.w)
                if (l < 0 || l >= n || !vset_has(def.domain, l))
                    bad = "conjugator leaves the domain";
        if (!bad.empty()) {
            add("AD1(" + nm(x) + ")", false, true, bad);
            continue;
        }
        const Mat w = eval(it->second.w, sys);
        const Mat m = w * sys.gens[static_cast<size_t>(x)] * eval(reversed(it->second.w), sys);
        bool invol = is_identity(m * m);
        add("AD1(" + nm(x) + ")", invol, true, invol ? "" : "image is not an involution");
        if (!invol) continue;
        M.emplace(x, m);
        R.emplace(x, canonical_root(w * Vec::Unit(n, x)));
    }
    {
        bool distinct = true;
        std::string detail;
        for (auto i = M.begin(); i != M.end() && distinct; ++i)
            for (auto j = std::next(i); j != M.end(); ++j)
                if (mat_equal(i->second, j->second)) {
                    distinct = false;
                    detail = "images of " + nm(i->first) + " and " + nm(j->first) +
                             " coincide";
                    break;
                }
        add("AD1-injective", distinct, true, detail);
    }

    // the defining pair
    {
        bool ok = M.count(def.r) && M.count(def.s);
        std::string detail;
        if (ok)
            for (int l : def.omega)
                if (l != def.r && l != def.s) {
                    ok = false;
                    detail = "omega is not a word over the edge";
                }
        if (ok) {
            const Mat wo = eval(def.omega, sys);
            const Mat want =
                wo * sys.gens[static_cast<size_t>(def.r)] * eval(reversed(def.omega), sys);
            if (!mat_equal(M.at(def.r), want)) {
                ok = false;
                detail = "delta(r) != omega r omega^{-1}";
            } else if (!mat_equal(M.at(def.s), sys.gens[static_cast<size_t>(def.s)])) {
                ok = false;
                detail = "delta(s) != s";
            }
        } else if (detail.empty()) {
            detail = "missing images on the edge";
        }
        add("AD2", ok, true, detail);
    }
    {
        const int q = dia.label(def.r, def.s);
        bool ok = true, verified = true;
        std::string detail;
        if (q == kInfLabel) {
            ok = false;
            detail = "the defining edge has infinite label";
        } else if (M.count(def.r) && M.count(def.s)) {
            const std::optional<long> o =
                order_with_cap(M.at(def.r) * M.at(def.s), order_cap);
            if (!o) {
                verified = false;
                detail = "product order above the cap";
            } else if (*o != q) {
                ok = false;
                detail = "o(delta(r) delta(s)) = " + std::to_string(*o) +
                         ", expected " + std::to_string(q);
            }
        } else {
            ok = false;
            detail = "missing images on the edge";
        }
        add("AD2-generation", ok, verified, detail);
    }

    // generation certificate
    for (int x : vset_vector(def.domain)) {
        const auto it = def.inverse_words.find(x);
        if (it == def.inverse_words.end()) {
            add("AD3(" + nm(x) + ")", true, false, "no inverse word provided");
            continue;
        }
        bool ok = true;
        std::string detail;
        Mat prod = identity_matrix(n);
        for (int l : it->second) {
            if (!M.count(l)) {
                ok = false;
                detail = "inverse word uses a letter without an image";
                break;
            }
            prod = prod * M.at(l);
        }
        if (ok && !mat_equal(prod, sys.gens[static_cast<size_t>(x)])) {
            ok = false;
            detail = "inverse word does not evaluate to the generator";
        }
        add("AD3(" + nm(x) + ")", ok, true, detail);
    }

    // the edge bijection
    const std::vector<Edge> edges = domain_edges(dia, def.domain, def.r, def.s);
    {
        const std::set<Edge> have = [&] {
            std::set<Edge> out;
            for (const auto& kv : def.edge_bijection) out.insert(kv.first);
            return out;
        }();
        const std::set<Edge> wanted(edges.begin(), edges.end());
        bool ok = true;
        std::string detail;
        for (const Edge& e : wanted)
            if (!have.count(e)) {
                ok = false;
                detail = "missing edge " + pair_str(e.first, e.second, dia);
                break;
            }
        if (ok)
            for (const Edge& e : have)
                if (!wanted.count(e)) {
                    ok = false;
                    detail = "extra key " + pair_str(e.first, e.second, dia);
                    break;
                }
        add("AD4-keys", ok, true, detail);
    }
    std::set<Edge> assigned;
    assigned.insert(make_edge(def.r, def.s));
    bool assigned_clash = false;
    std::string clash_detail;
    for (const Edge& e : edges) {
        const auto it = def.edge_bijection.find(e);
        const std::string ename = pair_str(e.first, e.second, dia);
        if (it == def.edge_bijection.end()) continue;  // flagged by AD4-keys
        const Edge f = it->second.to;
        if (f.first < 0 || f.first >= n || f.second < 0 || f.second >= n ||
            f.first == f.second || !vset_has(def.domain, f.first) ||
            !vset_has(def.domain, f.second)) {
            add("AD4(" + ename + ")", false, true, "assigned pair outside the domain");
            continue;
        }
        if (!assigned.insert(make_edge(f.first, f.second)).second) {
            assigned_clash = true;
            clash_detail = "pair " + pair_str(f.first, f.second, dia) +
                           " assigned more than once (or equal to the edge)";
        }
        if (!M.count(f.first) || !M.count(f.second)) {
            add("AD4(" + ename + ")", false, true, "missing images on the assigned pair");
            continue;
        }
        const Mat w = eval(it->second.conjugator, sys);
        const Mat winv = eval(reversed(it->second.conjugator), sys);
        const Mat c1 = w * sys.gens[static_cast<size_t>(e.first)] * winv;
        const Mat c2 = w * sys.gens[static_cast<size_t>(e.second)] * winv;
        const Mat& m1 = M.at(f.first);
        const Mat& m2 = M.at(f.second);
        const bool match = (mat_equal(m1, c1) && mat_equal(m2, c2)) ||
                           (mat_equal(m1, c2) && mat_equal(m2, c1));
        add("AD4(" + ename + ")", match, true,
            match ? "" : "images are not the conjugated edge");
        {
            const int lab = dia.label(e.first, e.second);
            const std::optional<long> o = order_with_cap(m1 * m2, order_cap);
            bool ok = true, verified = true;
            std::string detail;
            if (!o) {
                verified = false;
                detail = "image order above the cap";
            } else if (*o != lab) {
                ok = false;
                detail = "image order " + std::to_string(*o) + ", expected " +
                         std::to_string(lab);
            }
            add("AD4-order(" + ename + ")", ok, verified, detail);
        }
    }
    add("AD4-distinct", !assigned_clash, true, clash_detail);
    {
        const std::vector<int> vs = vset_vector(def.domain);
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) {
                const Edge p = make_edge(vs[i], vs[j]);
                if (assigned.count(p)) continue;
                if (!M.count(p.first) || !M.count(p.second)) continue;
                const std::string pname = pair_str(p.first, p.second, dia);
                const AlgebraicReal b = pairing(R.at(p.first), R.at(p.second), sys);
                if ((abs(b) - AlgebraicReal(1)).sign() >= 0) {
                    add("AD4-infinite(" + pname + ")", true, true, "");
                    continue;
                }
                const std::optional<long> o =
                    order_with_cap(M.at(p.first) * M.at(p.second), order_cap);
                if (o)
                    add("AD4-infinite(" + pname + ")", false, true,
                        "unassigned pair has finite image order " + std::to_string(*o));
                else
                    add("AD4-infinite(" + pname + ")", true, false,
                        "image order not certified infinite");
            }
    }

    // tame witnesses
    for (const auto& [t, w] : def.tame_witnesses) {
        const std::string cname = "witness(" + (t >= 0 && t < n ? nm(t) : "?") + ")";
        try {
            if (dia.label(def.r, def.s) != 5) {
                add(cname, false, true, "the defining edge is not labelled 5");
                continue;
            }
            if (t < 0 || t >= n || !vset_has(def.domain, t) ||
                !is_h3_triple(dia, def.r, def.s, t)) {
                add(cname, false, true, "not an H3 partner of the edge");
                continue;
            }
            int uq = -1;
            for (int v = 0; v < n; ++v)
                if (v != t && vset_has(def.domain, v) &&
                    is_h4_quad(dia, def.r, def.s, t, v)) {
                    uq = v;
                    break;
                }
            const Pocket p = make_pocket(dia, def.r, def.s, t, uq);
            const VSet kdef = p.K | perp_of(dia, p.K);
            if ((kdef & def.domain) != kdef) {
                add(cname, false, true, "pocket leaves the domain");
                continue;
            }
            const auto stdmap = pocket_delta_map(p, kdef);
            const Mat ww = eval(w, sys);
            const Mat wwinv = eval(reversed(w), sys);
            bool ok = true;
            std::string detail;
            for (const auto& [x, cw] : stdmap) {
                if (!M.count(x)) {
                    ok = false;
                    detail = "missing image at " + nm(x);
                    break;
                }
                if (!mat_equal(M.at(x), ww * eval(cw, sys) * wwinv)) {
                    ok = false;
                    detail = "not the conjugated standard map at " + nm(x);
                    break;
                }
            }
            add(cname, ok, true, detail);
        } catch (const CoxdefError& err) {
            add(cname, false, true, err.what());
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Application to reflection records
// ---------------------------------------------------------------------------

std::vector<ReflectionRecord> apply_deformation(const Deformation& def,
                                                const std::vector<ReflectionRecord>& S,
                                                const CoxeterSystem& sys) {
    std::vector<Word> letters;
    letters.reserve(S.size());
    for (const auto& rec : S) letters.push_back(rec.word);
    std::vector<ReflectionRecord> out;
    out.reserve(S.size());
    for (size_t x = 0; x < S.size(); ++x) {
        if (!vset_has(def.domain, static_cast<int>(x)))
            throw InputInconsistent("apply: the deformation does not cover generator " +
                                    std::to_string(x));
        const auto it = def.delta.find(static_cast<int>(x));
        if (it == def.delta.end())
            throw InputInconsistent("apply: missing image for generator " +
                                    std::to_string(x));
        const Word amb = substitute_word(full_word(it->second), letters);
        out.push_back(make_reflection_record(amb, sys));
    }
    return out;
}

}  // namespace coxdef
