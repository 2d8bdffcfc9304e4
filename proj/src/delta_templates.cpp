#include "coxdef/diagrams.hpp"

#include <algorithm>

namespace coxdef {

namespace {

/*
 * Chordfree-path extension shared by the two pattern searches.
 *
 * A path x_1, ..., x_N is grown depth-first subject to:
 *   - consecutive vertices carry a finite label, all other path pairs an
 *     infinite one (chordfree);
 *   - every vertex after x_1 lies in `ambient` (at least one infinite label
 *     back to the base edge/triangle);
 *   - interior vertices carry an infinite label to `apex`, the terminal
 *     vertex a finite one.
 *
 * A candidate with a finite apex label can therefore only close the path:
 * the search succeeds the moment one is reachable, giving N >= 2 since the
 * start vertex always carries an infinite apex label.
 */
struct PathSearch {
    const Diagram& d;
    VSet forbidden;  // base vertices, never on the path
    int apex;
    VSet ambient;

    bool dfs(std::vector<int>& path) const {
        const int last = path.back();
        for (int y = 0; y < d.rank(); ++y) {
            if (vset_has(forbidden, y)) continue;
            if (std::find(path.begin(), path.end(), y) != path.end()) continue;
            if (!finite_label(d, y, last)) continue;
            bool chord = false;
            for (size_t i = 0; i + 1 < path.size(); ++i)
                if (d.label(y, path[i]) != kInfLabel) {
                    chord = true;
                    break;
                }
            if (chord) continue;
            if (!vset_has(ambient, y)) continue;
            if (finite_label(d, y, apex)) {
                path.push_back(y);
                return true;
            }
            path.push_back(y);
            if (dfs(path)) return true;
            path.pop_back();
        }
        return false;
    }
};

}  // namespace

bool find_de3_path(const Diagram& d, int r, int s, int t, std::vector<int>& path) {
    if (!is_h3_triple(d, r, s, t))
        throw InternalInvariantBroken("find_de3_path: {r,s,t} is not an H3 triple");
    VSet ambient = 0;
    for (int y = 0; y < d.rank(); ++y) {
        if (y == r || y == s || y == t) continue;
        if (d.label(y, r) == kInfLabel || d.label(y, s) == kInfLabel)
            ambient = vset_with(ambient, y);
    }
    const PathSearch search{d, vset_of({r, s, t}), t, ambient};
    for (int x = 0; x < d.rank(); ++x) {
        if (x == r || x == s || x == t) continue;
        const int lr = d.label(x, r);
        const int ls = d.label(x, s);
        const bool start_ok =
            (lr == 2 && ls == 2) || (lr == 2 && ls == 3) || (lr == 3 && ls == 2);
        if (!start_ok || d.label(x, t) != kInfLabel) continue;
        path.assign(1, x);
        if (search.dfs(path)) return true;
    }
    path.clear();
    return false;
}

bool find_de4_path(const Diagram& d, int r, int s, int t, int u, std::vector<int>& path) {
    if (!is_h4_quad(d, r, s, t, u))
        throw InternalInvariantBroken("find_de4_path: {r,s,t,u} is not an H4 quadruple");
    VSet ambient = 0;
    for (int y = 0; y < d.rank(); ++y) {
        if (y == r || y == s || y == t || y == u) continue;
        if (d.label(y, r) == kInfLabel || d.label(y, s) == kInfLabel ||
            d.label(y, t) == kInfLabel)
            ambient = vset_with(ambient, y);
    }
    const PathSearch search{d, vset_of({r, s, t, u}), u, ambient};
    for (int x = 0; x < d.rank(); ++x) {
        if (x == r || x == s || x == t || x == u) continue;
        const int lr = d.label(x, r);
        const int ls = d.label(x, s);
        const int lt = d.label(x, t);
        const bool start_ok = lr == 2 && ls == 2 && (lt == 2 || lt == 3);
        if (!start_ok || d.label(x, u) != kInfLabel) continue;
        path.assign(1, x);
        if (search.dfs(path)) return true;
    }
    path.clear();
    return false;
}

}  // namespace coxdef
