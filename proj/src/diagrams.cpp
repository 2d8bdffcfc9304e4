#include "coxdef/diagrams.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace coxdef {

// ---------------------------------------------------------------------------
// VSet helpers
// ---------------------------------------------------------------------------

int vset_size(VSet s) { return __builtin_popcount(s); }

std::vector<int> vset_vector(VSet s) {
    std::vector<int> out;
    for (int v = 0; s; ++v, s >>= 1)
        if (s & 1u) out.push_back(v);
    return out;
}

VSet vset_of(std::initializer_list<int> vs) {
    VSet s = 0;
    for (int v : vs) s = vset_with(s, v);
    return s;
}

VSet full_vset(int rank) {
    if (rank < 0 || rank > kMaxDiagramRank)
        throw InternalInvariantBroken("full_vset: rank out of supported range");
    return (rank == 0) ? 0 : ((VSet{1} << rank) - 1);
}

std::string vset_to_string(VSet s, const CoxeterMatrix& d) {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (int v : vset_vector(s)) {
        if (!first) os << ",";
        first = false;
        if (v < d.rank())
            os << d.names[static_cast<size_t>(v)];
        else
            os << "v" << v;
    }
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// perp / fin / inf and J-components
// ---------------------------------------------------------------------------

PerpFinInf perp_fin_inf(const Diagram& d, VSet J) {
    PerpFinInf out;
    for (int x = 0; x < d.rank(); ++x) {
        if (vset_has(J, x)) continue;
        bool all_two = true;
        bool all_finite = true;
        for (int j : vset_vector(J)) {
            const int lab = d.label(x, j);
            if (lab != 2) all_two = false;
            if (lab == kInfLabel) all_finite = false;
        }
        if (all_finite) {
            out.fin = vset_with(out.fin, x);
            if (all_two) out.perp = vset_with(out.perp, x);
        } else {
            out.inf = vset_with(out.inf, x);
        }
    }
    return out;
}

VSet perp_of(const Diagram& d, VSet K) { return perp_fin_inf(d, K).perp; }

std::vector<VSet> j_components(const Diagram& d, VSet J) {
    const VSet inf = perp_fin_inf(d, J).inf;
    std::vector<VSet> components;
    VSet unseen = inf;
    while (unseen) {
        const int start = vset_vector(unseen).front();
        VSet comp = 0;
        std::deque<int> queue{start};
        unseen = vset_without(unseen, start);
        comp = vset_with(comp, start);
        while (!queue.empty()) {
            const int x = queue.front();
            queue.pop_front();
            for (int y : vset_vector(unseen)) {
                if (finite_label(d, x, y)) {
                    unseen = vset_without(unseen, y);
                    comp = vset_with(comp, y);
                    queue.push_back(y);
                }
            }
        }
        components.push_back(comp);
    }
    return components;
}

// ---------------------------------------------------------------------------
// Flexibility
// ---------------------------------------------------------------------------

namespace {

bool component_has_free_vertex(const Diagram& d, VSet J, VSet L) {
    for (int j : vset_vector(J)) {
        bool free = true;
        for (int x : vset_vector(L)) {
            if (finite_label(d, j, x)) {
                free = false;
                break;
            }
        }
        if (free) return true;
    }
    return false;
}

}  // namespace

bool is_flexible_set(const Diagram& d, VSet J) {
    for (VSet L : j_components(d, J))
        if (!component_has_free_vertex(d, J, L)) return false;
    return true;
}

FlexReport is_flexible_edge(const Diagram& d, int r, int s) {
    if (!finite_label(d, r, s) || r == s)
        throw InternalInvariantBroken("is_flexible_edge: {r,s} is not an edge");
    const VSet J = vset_of({r, s});
    for (VSet L : j_components(d, J)) {
        // A_r / A_s: component vertices with a finite label to r resp. s.
        // They are disjoint: a vertex of L has an infinite label to J.
        VSet ar = 0, as = 0;
        for (int x : vset_vector(L)) {
            if (finite_label(d, x, r)) ar = vset_with(ar, x);
            if (finite_label(d, x, s)) as = vset_with(as, x);
        }
        if (!ar || !as) continue;  // this component is flexible

        // Shortest path from A_r to A_s inside L; BFS layers make the path
        // chordfree and keep its interior clear of A_r and A_s, so
        // [r, path..., s] is a chordfree circuit of length >= 4.
        std::map<int, int> parent;
        std::deque<int> queue;
        for (int x : vset_vector(ar)) {
            parent[x] = -1;
            queue.push_back(x);
        }
        int hit = -1;
        while (!queue.empty() && hit < 0) {
            const int x = queue.front();
            queue.pop_front();
            if (vset_has(as, x)) {
                hit = x;
                break;
            }
            for (int y : vset_vector(L)) {
                if (parent.count(y) || !finite_label(d, x, y)) continue;
                parent[y] = x;
                queue.push_back(y);
            }
        }
        if (hit < 0)
            throw InternalInvariantBroken("is_flexible_edge: disconnected component");
        std::vector<int> path;
        for (int x = hit; x >= 0; x = parent[x]) path.push_back(x);
        std::reverse(path.begin(), path.end());  // starts in A_r, ends in A_s

        FlexReport report;
        report.flexible = false;
        report.circuit.push_back(r);
        report.circuit.insert(report.circuit.end(), path.begin(), path.end());
        report.circuit.push_back(s);

        // Certify the circuit: consecutive labels finite (including s--r),
        // all other pairs infinite.
        const auto& c = report.circuit;
        const size_t n = c.size();
        if (n < 4) throw InternalInvariantBroken("is_flexible_edge: short circuit");
        for (size_t i = 0; i < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                const bool consecutive = (j == i + 1) || (i == 0 && j == n - 1);
                const bool fin = finite_label(d, c[i], c[j]);
                if (consecutive != fin)
                    throw InternalInvariantBroken("is_flexible_edge: circuit not chordfree");
            }
        }
        return report;
    }
    return FlexReport{};
}

// ---------------------------------------------------------------------------
// Sphericity and irreducibility
// ---------------------------------------------------------------------------

bool is_two_spherical(const Diagram& d, VSet K) {
    const auto verts = vset_vector(K);
    for (size_t i = 0; i < verts.size(); ++i)
        for (size_t j = i + 1; j < verts.size(); ++j)
            if (!finite_label(d, verts[i], verts[j])) return false;
    return true;
}

bool is_irreducible(const Diagram& d, VSet K) {
    const auto verts = vset_vector(K);
    if (verts.empty()) return false;
    VSet seen = vset_of({verts[0]});
    std::deque<int> queue{verts[0]};
    while (!queue.empty()) {
        const int x = queue.front();
        queue.pop_front();
        for (int y : verts) {
            if (vset_has(seen, y)) continue;
            const int lab = d.label(x, y);
            if (lab == kInfLabel || lab >= 3) {
                seen = vset_with(seen, y);
                queue.push_back(y);
            }
        }
    }
    return seen == K;
}

bool is_spherical(const Diagram& d, VSet K) {
    if (!K) return true;
    if (!is_two_spherical(d, K)) return false;
    const InducedDiagram ind = induced_subdiagram(d, K);
    const CoxeterSystem sys = build_system(ind.diagram);
    return is_positive_definite(sys.gram);
}

// ---------------------------------------------------------------------------
// Theta-edges
// ---------------------------------------------------------------------------

bool is_theta_edge(const Diagram& d, int r, int s) {
    const int lab = d.label(r, s);
    if (lab == kInfLabel || lab < 3)
        throw InternalInvariantBroken("is_theta_edge: needs a finite label >= 3");
    for (int t = 0; t < d.rank(); ++t) {
        if (t == r || t == s) continue;
        const int lr = d.label(t, r);
        const int ls = d.label(t, s);
        if (lr != kInfLabel && ls != kInfLabel && std::max(lr, ls) >= 3)
            return false;  // K = {r,s,t} is 2-spherical and irreducible
    }
    return is_flexible_set(d, vset_of({r, s}));
}

// ---------------------------------------------------------------------------
// Delta-edges
// ---------------------------------------------------------------------------

bool is_h3_triple(const Diagram& d, int r, int s, int t) {
    if (t == r || t == s || r == s) return false;
    if (d.label(r, s) != 5) return false;
    const int lr = d.label(t, r);
    const int ls = d.label(t, s);
    return (lr == 3 && ls == 2) || (lr == 2 && ls == 3);
}

bool is_h4_quad(const Diagram& d, int r, int s, int t, int u) {
    if (u == r || u == s || u == t) return false;
    return is_h3_triple(d, r, s, t) && d.label(t, u) == 3 &&
           d.label(r, u) == 2 && d.label(s, u) == 2;
}

DeltaEdgeReport is_delta_edge(const Diagram& d, int r, int s) {
    if (r == s || !finite_label(d, r, s) || d.label(r, s) < 2)
        throw InternalInvariantBroken("is_delta_edge: {r,s} is not an edge");
    if (d.rank() > kMaxDiagramRank)
        throw InternalInvariantBroken("is_delta_edge: rank exceeds supported bound");
    DeltaEdgeReport report;
    const VSet J = vset_of({r, s});
    const VSet everything = full_vset(d.rank());

    // (DE1): subsets in increasing size so the witness is minimal.
    std::vector<VSet> candidates;
    for (VSet K = 0; K <= everything; ++K) {
        if ((K & J) != J || K == J) continue;
        if (!is_two_spherical(d, K) || !is_irreducible(d, K)) continue;
        candidates.push_back(K);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](VSet a, VSet b) { return vset_size(a) < vset_size(b); });
    for (VSet K : candidates) {
        if (!is_spherical(d, K)) {
            report.obstruction = "DE1";
            report.witness = K;
            return report;
        }
    }

    // (DE2): a chordfree circuit of length >= 4 through J.
    FlexReport flex = is_flexible_edge(d, r, s);
    if (!flex.flexible) {
        report.obstruction = "DE2";
        for (int v : flex.circuit) report.witness = vset_with(report.witness, v);
        report.circuit = flex.circuit;
        return report;
    }

    // (DE3): H3 triple plus a closing chordfree path.
    for (int t = 0; t < d.rank(); ++t) {
        if (!is_h3_triple(d, r, s, t)) continue;
        std::vector<int> path;
        if (find_de3_path(d, r, s, t, path)) {
            report.obstruction = "DE3";
            report.witness = vset_of({r, s, t});
            for (int v : path) report.witness = vset_with(report.witness, v);
            report.circuit = path;
            return report;
        }
    }

    // (DE4): H4 quadruple plus a closing chordfree path.
    for (int t = 0; t < d.rank(); ++t) {
        if (!is_h3_triple(d, r, s, t)) continue;
        for (int u = 0; u < d.rank(); ++u) {
            if (!is_h4_quad(d, r, s, t, u)) continue;
            std::vector<int> path;
            if (find_de4_path(d, r, s, t, u, path)) {
                report.obstruction = "DE4";
                report.witness = vset_of({r, s, t, u});
                for (int v : path) report.witness = vset_with(report.witness, v);
                report.circuit = path;
                return report;
            }
        }
    }

    report.is_delta = true;
    return report;
}

// ---------------------------------------------------------------------------
// EdgeContext / TContext
// ---------------------------------------------------------------------------

EdgeContext edge_context(const Diagram& d, int r, int s) {
    if (d.label(r, s) != 5)
        throw InternalInvariantBroken("edge_context: o(rs) must be 5");
    EdgeContext ctx;
    ctx.r = r;
    ctx.s = s;
    ctx.J = vset_of({r, s});
    const PerpFinInf pfi = perp_fin_inf(d, ctx.J);
    ctx.perp = pfi.perp;
    ctx.fin = pfi.fin;
    ctx.inf = pfi.inf;
    ctx.components = j_components(d, ctx.J);

    for (int t = 0; t < d.rank(); ++t) {
        if (!is_h3_triple(d, r, s, t)) continue;
        ctx.T = vset_with(ctx.T, t);
        if (d.label(t, r) == 3)
            ctx.Tr = vset_with(ctx.Tr, t);
        else
            ctx.Ts = vset_with(ctx.Ts, t);
        VSet ut = 0;
        for (int u = 0; u < d.rank(); ++u)
            if (is_h4_quad(d, r, s, t, u)) ut = vset_with(ut, u);
        ctx.Ut[t] = ut;
        ctx.U |= ut;
        if (ut)
            ctx.T4 = vset_with(ctx.T4, t);
        else
            ctx.T3 = vset_with(ctx.T3, t);
    }

    ctx.t_of.assign(ctx.components.size(), -1);
    for (size_t li = 0; li < ctx.components.size(); ++li) {
        for (int t : vset_vector(ctx.T)) {
            bool attached = false;
            for (int x : vset_vector(ctx.components[li]))
                if (finite_label(d, x, t)) {
                    attached = true;
                    break;
                }
            if (!attached) continue;
            if (ctx.t_of[li] >= 0 && ctx.t_of[li] != t)
                throw InternalInvariantBroken(
                    "edge_context: a J-component touches two H3 partners");
            ctx.t_of[li] = t;
        }
    }
    return ctx;
}

TContext t_context(const Diagram& d, const EdgeContext& ctx, int t) {
    if (!vset_has(ctx.T, t))
        throw InternalInvariantBroken("t_context: t is not an H3 partner");
    TContext tc;
    tc.t = t;
    tc.Jt = vset_with(ctx.J, t);
    const PerpFinInf pfi = perp_fin_inf(d, tc.Jt);
    tc.perp = pfi.perp;
    tc.fin = pfi.fin;
    tc.inf = pfi.inf;
    tc.components = j_components(d, tc.Jt);
    tc.u_of.assign(tc.components.size(), -1);
    const VSet ut = ctx.Ut.at(t);
    for (size_t li = 0; li < tc.components.size(); ++li) {
        for (int u : vset_vector(ut)) {
            bool attached = false;
            for (int x : vset_vector(tc.components[li]))
                if (finite_label(d, x, u)) {
                    attached = true;
                    break;
                }
            if (!attached) continue;
            if (tc.u_of[li] >= 0 && tc.u_of[li] != u)
                throw InternalInvariantBroken(
                    "t_context: a J_t-component touches two H4 partners");
            tc.u_of[li] = u;
        }
    }
    return tc;
}

// ---------------------------------------------------------------------------
// Tameness and degree
// ---------------------------------------------------------------------------

bool is_tame(const Diagram& d, int r, int s, int t, VSet K) {
    if (!is_h3_triple(d, r, s, t))
        throw InternalInvariantBroken("is_tame: t is not an H3 partner");
    const VSet jt = vset_of({r, s, t});
    if ((K & jt) != jt)
        throw InternalInvariantBroken("is_tame: K must contain J_t");
    for (int u : vset_vector(K & ~jt)) {
        if (!is_h4_quad(d, r, s, t, u)) continue;
        for (int z : vset_vector(K & ~jt)) {
            if (z == u) continue;
            if (d.label(z, r) == 2 && d.label(z, s) == 2 &&
                (d.label(z, t) == 2 || d.label(z, t) == 3) &&
                d.label(z, u) == kInfLabel)
                return false;
        }
    }
    return true;
}

int wild_degree(const Diagram& d, int r, int s, VSet K) {
    if (!vset_has(K, r) || !vset_has(K, s))
        throw InternalInvariantBroken("wild_degree: K must contain the edge");
    int deg = 0;
    for (int t : vset_vector(K)) {
        if (!is_h3_triple(d, r, s, t)) continue;
        if (!is_tame(d, r, s, t, K)) ++deg;
    }
    return deg;
}

WildSets wild_sets(const Diagram& d, const EdgeContext& ctx, int t, int u) {
    const TContext tc = t_context(d, ctx, t);
    if (u >= 0 && !vset_has(ctx.Ut.at(t), u))
        throw InternalInvariantBroken("wild_sets: u is not in U_t");
    WildSets ws;
    ws.V = (u < 0) ? tc.Jt : vset_with(tc.Jt, u);
    ws.W = ws.V | perp_of(d, ws.V);
    for (size_t li = 0; li < tc.components.size(); ++li)
        if (tc.u_of[li] == u) ws.X |= tc.components[li];
    ws.Y = ws.W | ws.X;
    return ws;
}

// ---------------------------------------------------------------------------
// Induced subdiagrams
// ---------------------------------------------------------------------------

InducedDiagram induced_subdiagram(const Diagram& d, VSet K) {
    InducedDiagram ind;
    ind.to_parent = vset_vector(K);
    const size_t n = ind.to_parent.size();
    ind.diagram.names.resize(n);
    ind.diagram.m.assign(n, std::vector<int>(n, 1));
    for (size_t i = 0; i < n; ++i) {
        ind.diagram.names[i] = d.names[static_cast<size_t>(ind.to_parent[i])];
        for (size_t j = 0; j < n; ++j)
            ind.diagram.m[i][j] = d.label(ind.to_parent[i], ind.to_parent[j]);
    }
    ind.diagram.validate();
    return ind;
}

}  // namespace coxdef
