#ifndef COXDEF_DIAGRAMS_HPP
#define COXDEF_DIAGRAMS_HPP

/*
 * Combinatorics of Coxeter diagrams.
 *
 * Two graph structures on the same vertex set matter here and they are NOT
 * the same:
 *   - Gamma(S): edges are the pairs with FINITE label (label 2 included).
 *     "Edge of S", circuits, chordfreeness, J-components all live here.
 *   - the Coxeter diagram: edges are the pairs with label >= 3 or infinity.
 *     Irreducibility (connectedness) lives here.
 *
 * For a subset J:
 *   J^perp = vertices outside J with all labels to J equal to 2,
 *   J^fin  = vertices outside J with all labels to J finite,
 *   J^inf  = vertices outside J with at least one infinite label to J.
 * A J-component is a connected component of the finite-label graph induced
 * on J^inf.  j in J is L-free if every label from j into L is infinite.
 * J is flexible if every J-component has an L-free element of J; for an edge
 * J = {r,s} this is equivalent to the absence of a chordfree circuit of
 * length >= 4 through J (the circuit is the witness of non-flexibility).
 */

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coxdef/coxcore.hpp"

namespace coxdef {

// ---------------------------------------------------------------------------
// Vertex sets as bitmasks
// ---------------------------------------------------------------------------
using VSet = std::uint32_t;
constexpr int kMaxDiagramRank = 20;

inline constexpr bool vset_has(VSet s, int v) { return (s >> v) & 1u; }
inline constexpr VSet vset_with(VSet s, int v) { return s | (VSet{1} << v); }
inline constexpr VSet vset_without(VSet s, int v) { return s & ~(VSet{1} << v); }
int vset_size(VSet s);
std::vector<int> vset_vector(VSet s);
VSet vset_of(std::initializer_list<int> vs);
VSet full_vset(int rank);
std::string vset_to_string(VSet s, const CoxeterMatrix& d);

using Diagram = CoxeterMatrix;

inline bool finite_label(const Diagram& d, int i, int j) {
    return d.label(i, j) != kInfLabel;
}

// ---------------------------------------------------------------------------
// perp / fin / inf and J-components
// ---------------------------------------------------------------------------
struct PerpFinInf {
    VSet perp = 0, fin = 0, inf = 0;
};
PerpFinInf perp_fin_inf(const Diagram& d, VSet J);
VSet perp_of(const Diagram& d, VSet K);

// Connected components of the finite-label graph induced on J^inf.
std::vector<VSet> j_components(const Diagram& d, VSet J);

// ---------------------------------------------------------------------------
// Flexibility
// ---------------------------------------------------------------------------

// The general definition, for any J.
bool is_flexible_set(const Diagram& d, VSet J);

// Edge version with a certificate: when not flexible, `circuit` holds a
// chordfree circuit [r, x_1, ..., x_k, s] of length >= 4 through the edge.
struct FlexReport {
    bool flexible = true;
    std::vector<int> circuit;
};
FlexReport is_flexible_edge(const Diagram& d, int r, int s);

// ---------------------------------------------------------------------------
// Sphericity and irreducibility
// ---------------------------------------------------------------------------
bool is_two_spherical(const Diagram& d, VSet K);  // all labels inside K finite
bool is_irreducible(const Diagram& d, VSet K);    // diagram-connected (>=3 or inf)
bool is_spherical(const Diagram& d, VSet K);      // finite labels + Gram PD

// ---------------------------------------------------------------------------
// Theta-edges
// ---------------------------------------------------------------------------

// J = {r,s} (finite label >= 3) is a Theta-edge when it is flexible and no
// 2-spherical irreducible subset contains it properly.  The superset
// condition reduces to a rank-3 test: a 2-spherical K > J is irreducible
// only if some x in K\J carries a finite label >= 3 to r or s (every vertex
// of K\J has both labels to J finite by 2-sphericity, and without a label
// >= 3 towards J the diagram splits at J).  Hence the test below.
bool is_theta_edge(const Diagram& d, int r, int s);

// ---------------------------------------------------------------------------
// Delta-edges
// ---------------------------------------------------------------------------

// type({r,s,t}) = H3 with the 5-bond on {r,s}
bool is_h3_triple(const Diagram& d, int r, int s, int t);
// type({r,s,t,u}) = H4 with the 5-bond on {r,s} and t the middle vertex
bool is_h4_quad(const Diagram& d, int r, int s, int t, int u);

// J = {r,s} is a Delta-edge when NO subset K containing J matches one of the
// four obstruction shapes: DE1 (2-spherical, irreducible, non-spherical),
// DE2 (chordfree circuit of length >= 4), DE3 / DE4 (an H3 triple resp. H4
// quadruple on J plus a chordfree path closing a loop through it).  The
// report names the obstruction found, if any.
struct DeltaEdgeReport {
    bool is_delta = false;
    std::string obstruction;    // "DE1".."DE4" when is_delta is false
    VSet witness = 0;           // the obstructing subset K
    std::vector<int> circuit;   // DE2: the circuit; DE3/DE4: the path
};
DeltaEdgeReport is_delta_edge(const Diagram& d, int r, int s);

// DE3/DE4 path searches (implemented in a dedicated translation unit).
// Both return the chordfree path (terminal-at-J end first) when a match
// exists for the given H3 triple / H4 quadruple.
bool find_de3_path(const Diagram& d, int r, int s, int t, std::vector<int>& path);
bool find_de4_path(const Diagram& d, int r, int s, int t, int u, std::vector<int>& path);

// ---------------------------------------------------------------------------
// The structure of a Delta-edge with o(rs) = 5
// ---------------------------------------------------------------------------
struct EdgeContext {
    int r = -1, s = -1;   // the edge, o(rs) = 5
    VSet J = 0;
    VSet perp = 0, fin = 0, inf = 0;
    std::vector<VSet> components;  // J-components
    std::vector<int> t_of;         // t(L) per component; -1 encodes "infinity"
    VSet T = 0, Tr = 0, Ts = 0;    // H3 partners, split by which of r/s has the 3
    VSet T3 = 0, T4 = 0;           // U_t empty / non-empty
    VSet U = 0;                    // union of all U_t
    std::map<int, VSet> Ut;        // t -> U_t, for every t in T
};

// Throws InternalInvariantBroken if a J-component touches two distinct
// elements of T (|T_L| > 1 cannot happen over a genuine Delta-edge).
EdgeContext edge_context(const Diagram& d, int r, int s);

// Structure relative to J_t = {r,s,t}.
struct TContext {
    int t = -1;
    VSet Jt = 0;
    VSet perp = 0, fin = 0, inf = 0;  // of J_t
    std::vector<VSet> components;     // J_t-components
    std::vector<int> u_of;            // u(L) per component; -1 encodes "infinity"
};
TContext t_context(const Diagram& d, const EdgeContext& ctx, int t);

// ---------------------------------------------------------------------------
// Tameness and degree
// ---------------------------------------------------------------------------

// t (an H3 partner of the edge) is wild in K exactly when K contains, besides
// J_t, vertices u and z with {r,s,t,u} of type H4, z perpendicular to r and
// s, o(zt) in {2,3} and o(zu) infinite.  Tame = not wild.
bool is_tame(const Diagram& d, int r, int s, int t, VSet K);

// Number of H3 partners t in K that are wild in K; requires {r,s} inside K.
int wild_degree(const Diagram& d, int r, int s, VSet K);

// V/W/X/Y sets for t and u in U_t + {infinity} (u = -1 for infinity):
//   V_inf = J_t, V_u = J_t + u; W_u = V_u + V_u^perp;
//   X_u = union of the J_t-components L with u(L) = u; Y_u = W_u + X_u.
// Z_u = Y_u + Y_inf is obtained from two calls.
struct WildSets {
    VSet V = 0, W = 0, X = 0, Y = 0;
};
WildSets wild_sets(const Diagram& d, const EdgeContext& ctx, int t, int u);

// ---------------------------------------------------------------------------
// Induced subdiagrams
// ---------------------------------------------------------------------------
struct InducedDiagram {
    Diagram diagram;
    std::vector<int> to_parent;  // new index -> old index
};
InducedDiagram induced_subdiagram(const Diagram& d, VSet K);

}  // namespace coxdef

#endif  // COXDEF_DIAGRAMS_HPP
