#ifndef COXDEF_PIPELINE_HPP
#define COXDEF_PIPELINE_HPP

/*
 * Drivers around the deformation machinery.
 *
 * A problem instance is a reference Coxeter system (W, R) together with a
 * list S of reflections of W, each written as a palindromic conjugate word
 * w . r . w^{-1} over R.  The sharpening drivers iterate angle-deformations
 * until every edge of S is sharp-angled, recording one trace step per
 * deformation; `analyze` classifies every edge of Gamma(S) without deforming
 * anything, and `oracle` cross-checks the root-based sharpness verdicts
 * against a brute-force computation in the fully enumerated group.
 *
 * All drivers work on the current diagram Gamma(S), whose vertices are the
 * entries of S in input order; words appearing in deformations ("omega",
 * "delta" values, edge conjugators) are letter sequences over those vertex
 * indices, while the entries of S themselves (and "final_S" in the emitted
 * trace) are words over the generator names of R.
 */

#include <string>
#include <vector>

#include "coxdef/coxcore.hpp"
#include "coxdef/deform.hpp"
#include "coxdef/diagrams.hpp"
#include "coxdef/errors.hpp"
#include "coxdef/roots.hpp"

namespace coxdef {

// ---------------------------------------------------------------------------
// Problem instances
// ---------------------------------------------------------------------------

struct PipelineOptions {
    long order_cap = kDefaultOrderCap;
    std::size_t group_cap = kDefaultGroupCap;
    bool deterministic = true;  // accepted for interface stability; all
                                // drivers are deterministic regardless
};

struct ProblemInstance {
    CoxeterMatrix matrix;        // the reference system (W, R)
    std::vector<Word> s_words;   // S as letter-index words over R
    PipelineOptions options;
};

// Strict parse of the JSON instance format
//   { "generators": [names...],
//     "matrix": [[rows of integers >= 1 or "inf"]...],
//     "S": [[generator names...]...],
//     "options": { "order_cap": N, "group_cap": N } }
// Unknown keys anywhere are rejected.  Every S entry must be a palindromic
// word of odd length (the conjugate shape w . r . w^{-1}); other words are
// rejected with NotAReflection carrying the entry index.
ProblemInstance parse_instance(const std::string& json_text);

// parse_instance on the contents of the file at `path`.
ProblemInstance load(const std::string& path);

// Reflection records for all S entries (validation included).
std::vector<ReflectionRecord> instance_records(const ProblemInstance& inst,
                                               const CoxeterSystem& sys);

// ---------------------------------------------------------------------------
// Sharpening
// ---------------------------------------------------------------------------

struct SharpeningStep {
    Edge edge;                    // the non-sharp pair this step removes
    std::string rationale;        // dispatch note (route + why)
    CoxeterMatrix gamma;          // Gamma(S) the deformation lives over
    Deformation deformation;
    VerifyReport verification;
    std::vector<ReflectionRecord> post_s;  // S after this step
    int nonsharp_before = 0;
    int nonsharp_after = 0;
};

struct SharpeningTrace {
    std::vector<SharpeningStep> steps;
    std::vector<ReflectionRecord> final_s;
    bool final_sharp = false;
};

// Full driver: per non-sharp edge (chosen lexicographically by vertex name)
// dispatch to the Theta route (no H3 triple over the edge) or the Delta
// route (5-edge with an H3 partner).  Every step's certificate is verified
// before it is applied, and the non-sharp edge count must drop by exactly
// one per step; both are hard errors otherwise.
SharpeningTrace sharpen(const ProblemInstance& inst);

// Restricted driver: requires Gamma(S) to contain no triple of type H3 at
// all (HasH3Subset otherwise) and routes every offender through the Theta
// construction (NotThetaEdge when the edge fails the Theta conditions).
SharpeningTrace sharpen_no_h3(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// Analysis (no deformation)
// ---------------------------------------------------------------------------

struct EdgeAnalysis {
    Edge edge;
    int label = 0;              // finite product order
    bool sharp = false;
    bool theta = false;
    DeltaEdgeReport delta;
    // Context summary, filled for Delta-edges with label 5 only:
    bool has_context = false;
    std::vector<int> partners;  // T: the H3 partners of the edge
    int degree = 0;             // number of wild partners
    bool all_tame = false;
};

struct AnalyzeReport {
    CoxeterMatrix gamma;
    std::vector<EdgeAnalysis> edges;
};

AnalyzeReport analyze(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// Desk-scale oracle
// ---------------------------------------------------------------------------

struct OraclePair {
    int i = 0, j = 0;              // reflection indices (see OracleReport)
    long order = 0;                // finite product order
    bool sharp_by_roots = false;   // verdict of the root pairing test
    bool sharp_by_conjugacy = false;  // brute-force verdict (below)
};

// Enumerates W completely, lists its reflections, and for every pair with
// finite product order compares two sharpness verdicts:
//   - the root-based test (pairing of canonical roots against cos(pi/q));
//   - a conjugacy search: some w in W takes the pair to a pair that is
//     canonical for the dihedral reflection subgroup it generates, where
//     canonicity is decided purely from BFS word lengths (a reflection x is
//     canonical in a reflection subgroup D when no other reflection of D
//     shortens it: l(t x) > l(x) for every reflection t of D other than x).
// The two verdicts must agree; disagreements are counted and listed.
struct OracleReport {
    std::size_t group_order = 0;
    int reflection_count = 0;
    std::vector<OraclePair> pairs;  // finite-order pairs, i < j
    int disagreements = 0;
    bool agree = true;
};

OracleReport oracle(const ProblemInstance& inst);

// ---------------------------------------------------------------------------
// JSON emission and trace replay
// ---------------------------------------------------------------------------

// Trace schema:
//   { "steps": [ { "edge": [r, s], "rationale": str, "omega": [letters],
//                  "delta": { name: [letters], ... },
//                  "edge_map": [ { "from": [a,b], "to": [c,d],
//                                  "conjugator": [letters] }, ... ],
//                  "verification": { "failures": n, "unverified": n,
//                                    "items": [...] },
//                  "nonsharp_before": n, "nonsharp_after": n } ],
//     "final_S": [ [generator names...], ... ],
//     "sharp": bool }
// Words under "omega", "delta", "conjugator" are letter indices into S;
// "delta" maps every vertex name of Gamma(S) to the full image word.
std::string trace_to_json(const SharpeningTrace& trace, const ProblemInstance& inst);

std::string analyze_to_json(const AnalyzeReport& rep);

std::string oracle_to_json(const OracleReport& rep);

// Replays a trace against its instance: re-applies every step's delta to
// the running generating set, recomputes sharpness exactly, and checks
//   - each step's edge really was non-sharp before the step,
//   - the non-sharp edge count drops by exactly one per step,
//   - the final set matches "final_S" and is sharp iff "sharp" says so.
struct ReplayReport {
    bool ok = true;
    int steps = 0;
    std::vector<std::string> problems;
};

ReplayReport verify_trace(const ProblemInstance& inst, const std::string& trace_json);

}  // namespace coxdef

#endif  // COXDEF_PIPELINE_HPP
