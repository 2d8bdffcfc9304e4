#include "coxdef/pipeline.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

namespace coxdef {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Strict JSON helpers
// ---------------------------------------------------------------------------

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& required,
                  const std::set<std::string>& allowed) {
    if (!obj.is_object())
        throw ParseError(where + ": expected a JSON object");
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key()))
            throw ParseError(where + ": unknown key \"" + item.key() + "\"");
    }
    for (const auto& key : required) {
        if (!obj.contains(key))
            throw ParseError(where + ": missing key \"" + key + "\"");
    }
}

long long require_positive_int(const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.is_boolean())
        throw ParseError(where + ": expected a positive integer");
    const long long x = v.get<long long>();
    if (x < 1) throw ParseError(where + ": expected a positive integer");
    return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// Instance parsing
// ---------------------------------------------------------------------------

ProblemInstance parse_instance(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("instance: invalid JSON: ") + e.what());
    }
    require_keys(j, "instance", {"generators", "matrix", "S"},
                 {"generators", "matrix", "S", "options"});

    ProblemInstance inst;

    const json& gens = j["generators"];
    if (!gens.is_array() || gens.empty())
        throw ParseError("generators: expected a non-empty array of names");
    for (const auto& g : gens) {
        if (!g.is_string() || g.get<std::string>().empty())
            throw ParseError("generators: names must be non-empty strings");
        inst.matrix.names.push_back(g.get<std::string>());
    }
    const size_t rank = inst.matrix.names.size();

    const json& rows = j["matrix"];
    if (!rows.is_array() || rows.size() != rank)
        throw ParseError("matrix: expected " + std::to_string(rank) + " rows");
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != rank)
            throw ParseError("matrix: expected square rows of length " +
                             std::to_string(rank));
        std::vector<int> out;
        for (const auto& entry : row) {
            if (entry.is_string()) {
                if (entry.get<std::string>() != "inf")
                    throw ParseError("matrix: the only string label is \"inf\"");
                out.push_back(kInfLabel);
            } else {
                const long long m = require_positive_int(entry, "matrix label");
                out.push_back(static_cast<int>(m));
            }
        }
        inst.matrix.m.push_back(std::move(out));
    }
    inst.matrix.validate();

    const json& s = j["S"];
    if (!s.is_array()) throw ParseError("S: expected an array of words");
    for (size_t i = 0; i < s.size(); ++i) {
        const json& entry = s[i];
        if (!entry.is_array())
            throw ParseError("S[" + std::to_string(i) + "]: expected an array of generator names");
        Word w;
        for (const auto& letter : entry) {
            if (!letter.is_string())
                throw ParseError("S[" + std::to_string(i) + "]: letters must be generator names");
            const std::string name = letter.get<std::string>();
            const auto it = std::find(inst.matrix.names.begin(), inst.matrix.names.end(), name);
            if (it == inst.matrix.names.end())
                throw ParseError("S[" + std::to_string(i) + "]: unknown generator \"" + name + "\"");
            w.push_back(static_cast<int>(it - inst.matrix.names.begin()));
        }
        inst.s_words.push_back(std::move(w));
    }

    if (j.contains("options")) {
        const json& opt = j["options"];
        require_keys(opt, "options", {}, {"order_cap", "group_cap"});
        if (opt.contains("order_cap"))
            inst.options.order_cap = static_cast<long>(require_positive_int(opt["order_cap"], "options.order_cap"));
        if (opt.contains("group_cap"))
            inst.options.group_cap = static_cast<std::size_t>(require_positive_int(opt["group_cap"], "options.group_cap"));
    }

    // Evaluate and validate every S entry against the reference system.
    const CoxeterSystem sys = build_system(inst.matrix);
    instance_records(inst, sys);
    return inst;
}

ProblemInstance load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open input file \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

std::vector<ReflectionRecord> instance_records(const ProblemInstance& inst,
                                               const CoxeterSystem& sys) {
    std::vector<ReflectionRecord> records;
    records.reserve(inst.s_words.size());
    for (size_t i = 0; i < inst.s_words.size(); ++i) {
        try {
            records.push_back(make_reflection_record(inst.s_words[i], sys));
        } catch (const NotAReflection& e) {
            throw NotAReflection(
                static_cast<int>(i),
                "S[" + std::to_string(i) + "]: " + e.what() +
                    " (write each entry as a palindromic conjugate word w.r.w^-1 over the generators)");
        }
    }
    return records;
}

// ---------------------------------------------------------------------------
// Sharpening loop
// ---------------------------------------------------------------------------

namespace {

// Offending pairs sorted lexicographically by vertex-name pair so runs are
// reproducible regardless of how the sharpness scan orders them.
std::vector<std::pair<int, int>> sorted_offenders(const SharpSetReport& rep,
                                                  const CoxeterMatrix& gamma) {
    std::vector<std::pair<int, int>> out = rep.offenders;
    auto name_key = [&](const std::pair<int, int>& e) {
        std::string a = gamma.names[static_cast<size_t>(e.first)];
        std::string b = gamma.names[static_cast<size_t>(e.second)];
        if (b < a) std::swap(a, b);
        return std::make_pair(a, b);
    };
    std::sort(out.begin(), out.end(), [&](const auto& x, const auto& y) {
        return name_key(x) < name_key(y);
    });
    return out;
}

bool has_h3_on_edge(const Diagram& d, int r, int s) {
    for (int t = 0; t < d.rank(); ++t)
        if (is_h3_triple(d, r, s, t)) return true;
    return false;
}

bool has_any_h3(const Diagram& d) {
    const int n = d.rank();
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (is_h3_triple(d, x, y, z)) return true;
    return false;
}

std::string edge_name(const CoxeterMatrix& gamma, int r, int s) {
    return "{" + gamma.names[static_cast<size_t>(r)] + "," +
           gamma.names[static_cast<size_t>(s)] + "}";
}

SharpeningTrace run_sharpening(const ProblemInstance& inst, bool theta_only) {
    const CoxeterSystem sys = build_system(inst.matrix);
    std::vector<ReflectionRecord> records = instance_records(inst, sys);
    const long order_cap = inst.options.order_cap;
    const std::size_t group_cap = inst.options.group_cap;

    SharpeningTrace trace;

    if (records.empty()) {
        trace.final_sharp = true;
        return trace;
    }

    if (theta_only) {
        const CoxeterMatrix gamma0 = coxeter_matrix_of(records, sys, order_cap);
        if (has_any_h3(gamma0))
            throw HasH3Subset(
                "sharpen-no-h3: Gamma(S) contains a triple of type H3; use the full driver");
    }

    SharpSetReport rep = is_sharp_angled_set(records, sys, order_cap);
    const size_t initial = rep.offenders.size();

    for (size_t step = 0; !rep.sharp; ++step) {
        if (step >= initial)
            throw InternalInvariantBroken(
                "sharpening did not terminate within the initial non-sharp count");

        const CoxeterMatrix gamma = coxeter_matrix_of(records, sys, order_cap);
        const auto offenders = sorted_offenders(rep, gamma);
        const int r = offenders.front().first;
        const int s = offenders.front().second;
        const int label = gamma.label(r, s);

        Deformation def;
        std::string rationale;
        if (label == 5 && has_h3_on_edge(gamma, r, s)) {
            if (theta_only)
                throw HasH3Subset("sharpen-no-h3: offender " + edge_name(gamma, r, s) +
                                  " sits inside an H3 triple");
            const DeltaEdgeReport der = is_delta_edge(gamma, r, s);
            if (!der.is_delta)
                throw InputInconsistent(
                    "non-sharp 5-edge " + edge_name(gamma, r, s) +
                    " with an H3 partner must be a Delta-edge for a genuine reflection "
                    "generating set; obstruction " + der.obstruction + " found instead");
            rationale = "5-edge with an H3 partner; Delta route via the glued pocket deformation";
            def = delta_route_deformation(gamma, r, s);
        } else {
            if (!is_theta_edge(gamma, r, s)) {
                const std::string why =
                    "non-sharp edge " + edge_name(gamma, r, s) +
                    " without an H3 partner must be a Theta-edge for a genuine "
                    "reflection generating set; the classification refused it";
                if (theta_only) throw NotThetaEdge(why);
                throw InputInconsistent(why);
            }
            if (label >= 6)
                rationale =
                    "product order >= 6 admits no irreducible spherical superset, so the "
                    "edge is a Theta-edge; Theta route with the dihedral re-angling word";
            else
                rationale = "5-edge without an H3 partner; Theta route";
            const Word abstract =
                sharpening_omega_abstract(records[static_cast<size_t>(r)],
                                          records[static_cast<size_t>(s)], sys, order_cap);
            const Word omega_gamma = substitute_word(abstract, {Word{r}, Word{s}});
            def = theta_deformation(gamma, r, s, omega_gamma);
        }

        const CoxeterSystem gamma_sys = build_system(gamma);
        VerifyReport ver = verify_deformation(def, gamma_sys, order_cap, group_cap);
        if (ver.failures > 0) {
            std::string first;
            for (const auto& item : ver.items)
                if (!item.ok) { first = item.check + ": " + item.detail; break; }
            throw InternalInvariantBroken("step certificate failed verification (" + first + ")");
        }

        std::vector<ReflectionRecord> next = apply_deformation(def, records, sys);
        SharpSetReport next_rep = is_sharp_angled_set(next, sys, order_cap);
        if (next_rep.offenders.size() != rep.offenders.size() - 1)
            throw InternalInvariantBroken(
                "deformation at " + edge_name(gamma, r, s) +
                " changed the non-sharp count from " + std::to_string(rep.offenders.size()) +
                " to " + std::to_string(next_rep.offenders.size()) + " (expected -1)");

        SharpeningStep rec;
        rec.edge = make_edge(r, s);
        rec.rationale = std::move(rationale);
        rec.gamma = gamma;
        rec.deformation = std::move(def);
        rec.verification = std::move(ver);
        rec.post_s = next;
        rec.nonsharp_before = static_cast<int>(rep.offenders.size());
        rec.nonsharp_after = static_cast<int>(next_rep.offenders.size());
        trace.steps.push_back(std::move(rec));

        records = std::move(next);
        rep = std::move(next_rep);
    }

    trace.final_s = std::move(records);
    trace.final_sharp = true;
    return trace;
}

}  // namespace

SharpeningTrace sharpen(const ProblemInstance& inst) { return run_sharpening(inst, false); }

SharpeningTrace sharpen_no_h3(const ProblemInstance& inst) { return run_sharpening(inst, true); }

// ---------------------------------------------------------------------------
// Analysis
// ---------------------------------------------------------------------------

AnalyzeReport analyze(const ProblemInstance& inst) {
    const CoxeterSystem sys = build_system(inst.matrix);
    const std::vector<ReflectionRecord> records = instance_records(inst, sys);
    AnalyzeReport rep;
    if (records.empty()) return rep;

    rep.gamma = coxeter_matrix_of(records, sys, inst.options.order_cap);
    const int n = rep.gamma.rank();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!finite_label(rep.gamma, i, j)) continue;
            EdgeAnalysis ea;
            ea.edge = make_edge(i, j);
            ea.label = rep.gamma.label(i, j);
            ea.sharp = is_sharp_angled_pair(records[static_cast<size_t>(i)],
                                            records[static_cast<size_t>(j)], sys,
                                            inst.options.order_cap)
                           .sharp;
            ea.theta = ea.label >= 3 && is_theta_edge(rep.gamma, i, j);
            ea.delta = is_delta_edge(rep.gamma, i, j);
            if (ea.delta.is_delta && ea.label == 5) {
                const EdgeContext ctx = edge_context(rep.gamma, i, j);
                ea.has_context = true;
                ea.partners = vset_vector(ctx.T);
                ea.degree = wild_degree(rep.gamma, i, j, full_vset(n));
                ea.all_tame = true;
                for (int t : ea.partners)
                    if (!is_tame(rep.gamma, i, j, t, full_vset(n))) ea.all_tame = false;
            }
            rep.edges.push_back(std::move(ea));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Oracle
// ---------------------------------------------------------------------------

namespace {

// Matrix -> element index lookup over the full enumeration.
struct ElementIndex {
    const std::vector<GroupElement>* elements = nullptr;
    std::unordered_multimap<std::size_t, int> buckets;

    explicit ElementIndex(const std::vector<GroupElement>& elems) : elements(&elems) {
        for (size_t i = 0; i < elems.size(); ++i)
            buckets.emplace(hash_matrix(elems[i].matrix), static_cast<int>(i));
    }
    int find(const Mat& m) const {
        const auto range = buckets.equal_range(hash_matrix(m));
        for (auto it = range.first; it != range.second; ++it)
            if (mat_equal((*elements)[static_cast<size_t>(it->second)].matrix, m))
                return it->second;
        return -1;
    }
};

bool is_reflection_matrix(const Mat& m, int n) {
    if (!is_identity(m * m) || is_identity(m)) return false;
    AlgebraicReal tr(0);
    for (int i = 0; i < n; ++i) tr = tr + m(i, i);
    return (tr - AlgebraicReal(n - 2)).sign() == 0;
}

}  // namespace

OracleReport oracle(const ProblemInstance& inst) {
    const CoxeterSystem sys = build_system(inst.matrix);
    const int n = sys.rank();
    const std::vector<GroupElement> elements = enumerate_group(sys, inst.options.group_cap);
    const ElementIndex index(elements);

    OracleReport rep;
    rep.group_order = elements.size();

    // Collect the reflections as records: sweep g r g^-1 over the whole
    // enumeration; the first occurrence supplies the palindromic word and the
    // canonical root (g is b-orthogonal, so g . e_r stays a unit root).
    std::vector<ReflectionRecord> refl;
    std::unordered_multimap<std::size_t, int> refl_buckets;
    auto find_refl = [&](const Mat& m) -> int {
        const auto range = refl_buckets.equal_range(hash_matrix(m));
        for (auto it = range.first; it != range.second; ++it)
            if (mat_equal(refl[static_cast<size_t>(it->second)].matrix, m)) return it->second;
        return -1;
    };
    for (const auto& g : elements) {
        const Mat ginv = eval(reversed(g.word), sys);
        for (int r = 0; r < n; ++r) {
            Mat t = g.matrix * sys.gens[static_cast<size_t>(r)] * ginv;
            if (find_refl(t) >= 0) continue;
            Word w = g.word;
            w.push_back(r);
            w.insert(w.end(), g.word.rbegin(), g.word.rend());
            Vec root = canonical_root(g.matrix * Vec::Unit(n, r));
            refl_buckets.emplace(hash_matrix(t), static_cast<int>(refl.size()));
            refl.push_back(ReflectionRecord{std::move(w), std::move(t), std::move(root)});
        }
    }
    rep.reflection_count = static_cast<int>(refl.size());
    const int nt = rep.reflection_count;

    // Conjugation action of each group element as a permutation of the
    // reflections, composed letter by letter from the generator actions.
    std::vector<std::vector<int>> gen_perm(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(nt)));
    for (int r = 0; r < n; ++r) {
        for (int i = 0; i < nt; ++i) {
            const Mat c = sys.gens[static_cast<size_t>(r)] * refl[static_cast<size_t>(i)].matrix *
                          sys.gens[static_cast<size_t>(r)];
            const int k = find_refl(c);
            if (k < 0) throw InternalInvariantBroken("oracle: conjugate escaped the reflection set");
            gen_perm[static_cast<size_t>(r)][static_cast<size_t>(i)] = k;
        }
    }
    std::vector<std::vector<int>> perms(elements.size());
    for (size_t e = 0; e < elements.size(); ++e) {
        std::vector<int> p(static_cast<size_t>(nt));
        for (int i = 0; i < nt; ++i) p[static_cast<size_t>(i)] = i;
        // conj_{l1...lk}(t) applies the last letter first.
        const Word& w = elements[e].word;
        for (auto it = w.rbegin(); it != w.rend(); ++it) {
            const auto& g = gen_perm[static_cast<size_t>(*it)];
            for (int i = 0; i < nt; ++i) p[static_cast<size_t>(i)] = g[static_cast<size_t>(p[static_cast<size_t>(i)])];
        }
        perms[e] = std::move(p);
    }

    const auto length_of = [&](const Mat& m) -> long {
        const int k = index.find(m);
        if (k < 0) throw InternalInvariantBroken("oracle: element missing from the enumeration");
        return static_cast<long>(elements[static_cast<size_t>(k)].word.size());
    };

    // A reflection x is canonical for the dihedral reflection subgroup D
    // when every other reflection of D lengthens it: l(t x) > l(x).
    const auto reflections_of_pair = [&](int i, int j) {
        std::vector<int> out{i, j};
        std::set<int> seen{i, j};
        for (size_t head = 0; head < out.size(); ++head) {
            for (const int by : {i, j}) {
                const Mat c = refl[static_cast<size_t>(by)].matrix *
                              refl[static_cast<size_t>(out[head])].matrix *
                              refl[static_cast<size_t>(by)].matrix;
                const int k = find_refl(c);
                if (k < 0) throw InternalInvariantBroken("oracle: dihedral closure left the reflection set");
                if (seen.insert(k).second) out.push_back(k);
            }
        }
        return out;
    };
    const auto is_canonical_pair = [&](int i, int j) -> bool {
        const std::vector<int> members = reflections_of_pair(i, j);
        for (const int x : {i, j}) {
            const long lx = length_of(refl[static_cast<size_t>(x)].matrix);
            for (const int t : members) {
                if (t == x) continue;
                const Mat tx = refl[static_cast<size_t>(t)].matrix * refl[static_cast<size_t>(x)].matrix;
                if (length_of(tx) < lx) return false;
            }
        }
        return true;
    };

    // Lazy symmetric cache of the canonicity verdicts.
    std::vector<std::vector<signed char>> canon(static_cast<size_t>(nt),
                                                std::vector<signed char>(static_cast<size_t>(nt), -1));
    const auto canon_at = [&](int i, int j) -> bool {
        auto& cell = canon[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (cell < 0) {
            const bool v = is_canonical_pair(i, j);
            cell = v ? 1 : 0;
            canon[static_cast<size_t>(j)][static_cast<size_t>(i)] = cell;
        }
        return cell == 1;
    };

    for (int i = 0; i < nt; ++i) {
        for (int j = i + 1; j < nt; ++j) {
            const Mat prod = refl[static_cast<size_t>(i)].matrix * refl[static_cast<size_t>(j)].matrix;
            const auto q = order_with_cap(prod, static_cast<long>(elements.size()) + 1);
            if (!q.has_value())
                throw InternalInvariantBroken("oracle: pair order exceeded the group order");
            OraclePair pr;
            pr.i = i;
            pr.j = j;
            pr.order = *q;
            pr.sharp_by_roots =
                is_sharp_angled_pair(refl[static_cast<size_t>(i)], refl[static_cast<size_t>(j)],
                                     sys, inst.options.order_cap)
                    .sharp;
            pr.sharp_by_conjugacy = false;
            for (size_t e = 0; e < elements.size() && !pr.sharp_by_conjugacy; ++e) {
                const int ci = perms[e][static_cast<size_t>(i)];
                const int cj = perms[e][static_cast<size_t>(j)];
                if (canon_at(ci, cj)) pr.sharp_by_conjugacy = true;
            }
            if (pr.sharp_by_roots != pr.sharp_by_conjugacy) {
                ++rep.disagreements;
                rep.agree = false;
            }
            rep.pairs.push_back(std::move(pr));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// JSON emission
// ---------------------------------------------------------------------------

namespace {

ojson word_json(const Word& w) {
    ojson arr = ojson::array();
    for (int letter : w) arr.push_back(letter);
    return arr;
}

ojson verification_json(const VerifyReport& ver) {
    ojson out;
    out["failures"] = ver.failures;
    out["unverified"] = ver.unverified;
    ojson items = ojson::array();
    for (const auto& item : ver.items) {
        ojson it;
        it["check"] = item.check;
        it["ok"] = item.ok;
        it["verified"] = item.verified;
        it["detail"] = item.detail;
        items.push_back(std::move(it));
    }
    out["items"] = std::move(items);
    return out;
}

}  // namespace

std::string trace_to_json(const SharpeningTrace& trace, const ProblemInstance& inst) {
    ojson out;
    ojson steps = ojson::array();
    for (const auto& step : trace.steps) {
        ojson js;
        js["edge"] = ojson::array({step.edge.first, step.edge.second});
        js["rationale"] = step.rationale;
        js["omega"] = word_json(step.deformation.omega);
        ojson delta;
        for (const auto& [x, cw] : step.deformation.delta)
            delta[step.gamma.names[static_cast<size_t>(x)]] = word_json(full_word(cw));
        js["delta"] = std::move(delta);
        ojson edge_map = ojson::array();
        for (const auto& [e, img] : step.deformation.edge_bijection) {
            ojson em;
            em["from"] = ojson::array({e.first, e.second});
            em["to"] = ojson::array({img.to.first, img.to.second});
            em["conjugator"] = word_json(img.conjugator);
            edge_map.push_back(std::move(em));
        }
        js["edge_map"] = std::move(edge_map);
        js["verification"] = verification_json(step.verification);
        js["nonsharp_before"] = step.nonsharp_before;
        js["nonsharp_after"] = step.nonsharp_after;
        steps.push_back(std::move(js));
    }
    out["steps"] = std::move(steps);

    ojson final_s = ojson::array();
    for (const auto& rec : trace.final_s) {
        ojson w = ojson::array();
        for (int letter : rec.word)
            w.push_back(inst.matrix.names[static_cast<size_t>(letter)]);
        final_s.push_back(std::move(w));
    }
    out["final_S"] = std::move(final_s);
    out["sharp"] = trace.final_sharp;
    return out.dump(2);
}

std::string analyze_to_json(const AnalyzeReport& rep) {
    ojson out;
    out["rank"] = rep.gamma.rank();
    ojson rows = ojson::array();
    for (const auto& row : rep.gamma.m) {
        ojson r = ojson::array();
        for (int label : row) {
            if (label == kInfLabel)
                r.push_back("inf");
            else
                r.push_back(label);
        }
        rows.push_back(std::move(r));
    }
    out["gamma"] = std::move(rows);
    ojson edges = ojson::array();
    for (const auto& ea : rep.edges) {
        ojson e;
        e["edge"] = ojson::array({ea.edge.first, ea.edge.second});
        e["label"] = ea.label;
        e["sharp"] = ea.sharp;
        e["theta"] = ea.theta;
        e["delta"] = ea.delta.is_delta;
        if (!ea.delta.is_delta) {
            e["obstruction"] = ea.delta.obstruction;
            if (!ea.delta.circuit.empty()) e["circuit"] = word_json(ea.delta.circuit);
        }
        if (ea.has_context) {
            ojson ctx;
            ctx["partners"] = word_json(ea.partners);
            ctx["degree"] = ea.degree;
            ctx["all_tame"] = ea.all_tame;
            e["context"] = std::move(ctx);
        }
        edges.push_back(std::move(e));
    }
    out["edges"] = std::move(edges);
    return out.dump(2);
}

std::string oracle_to_json(const OracleReport& rep) {
    ojson out;
    out["group_order"] = rep.group_order;
    out["reflections"] = rep.reflection_count;
    out["pairs_checked"] = rep.pairs.size();
    out["disagreements"] = rep.disagreements;
    out["agree"] = rep.agree;
    ojson pairs = ojson::array();
    for (const auto& p : rep.pairs) {
        ojson pj;
        pj["pair"] = ojson::array({p.i, p.j});
        pj["order"] = p.order;
        pj["sharp_by_roots"] = p.sharp_by_roots;
        pj["sharp_by_conjugacy"] = p.sharp_by_conjugacy;
        pairs.push_back(std::move(pj));
    }
    out["pairs"] = std::move(pairs);
    return out.dump(2);
}

// ---------------------------------------------------------------------------
// Trace replay
// ---------------------------------------------------------------------------

ReplayReport verify_trace(const ProblemInstance& inst, const std::string& trace_json) {
    json j;
    try {
        j = json::parse(trace_json);
    } catch (const json::exception& e) {
        throw ParseError(std::string("trace: invalid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("steps") || !j.contains("final_S") || !j.contains("sharp"))
        throw ParseError("trace: expected keys steps, final_S, sharp");

    const CoxeterSystem sys = build_system(inst.matrix);
    std::vector<ReflectionRecord> records = instance_records(inst, sys);
    const long order_cap = inst.options.order_cap;

    ReplayReport rep;
    auto note = [&](const std::string& msg) {
        rep.ok = false;
        rep.problems.push_back(msg);
    };

    const json& steps = j["steps"];
    if (!steps.is_array()) throw ParseError("trace: steps must be an array");
    int stepno = 0;
    for (const auto& step : steps) {
        const std::string at = "step " + std::to_string(stepno);
        if (!step.is_object() || !step.contains("edge") || !step.contains("delta"))
            throw ParseError("trace: " + at + ": expected edge and delta");

        const json& ej = step["edge"];
        if (!ej.is_array() || ej.size() != 2 || !ej[0].is_number_integer() ||
            !ej[1].is_number_integer())
            throw ParseError("trace: " + at + ": edge must be a pair of indices");
        const int r = ej[0].get<int>();
        const int s = ej[1].get<int>();
        const int nrec = static_cast<int>(records.size());
        if (r < 0 || s < 0 || r >= nrec || s >= nrec || r == s)
            throw ParseError("trace: " + at + ": edge indices out of range");

        const SharpSetReport before = is_sharp_angled_set(records, sys, order_cap);
        const AngleClass ac = is_sharp_angled_pair(records[static_cast<size_t>(r)],
                                                   records[static_cast<size_t>(s)], sys, order_cap);
        if (ac.sharp) note(at + ": recorded edge was already sharp before the step");
        if (step.contains("nonsharp_before") &&
            step["nonsharp_before"].get<long long>() != static_cast<long long>(before.offenders.size()))
            note(at + ": nonsharp_before does not match the recomputed count");

        // Re-apply delta: every current generator must have an image word.
        const json& dj = step["delta"];
        if (!dj.is_object()) throw ParseError("trace: " + at + ": delta must be an object");
        std::vector<Word> letter_words;
        letter_words.reserve(records.size());
        for (const auto& rec : records) letter_words.push_back(rec.word);
        std::vector<ReflectionRecord> next(records.size());
        std::vector<bool> have(records.size(), false);
        for (const auto& item : dj.items()) {
            const std::string& key = item.key();
            if (key.size() < 2 || key[0] != 's')
                throw ParseError("trace: " + at + ": unknown delta key \"" + key + "\"");
            int x = -1;
            try {
                x = std::stoi(key.substr(1));
            } catch (...) {
                throw ParseError("trace: " + at + ": unknown delta key \"" + key + "\"");
            }
            if (x < 0 || x >= nrec)
                throw ParseError("trace: " + at + ": delta key \"" + key + "\" out of range");
            if (!item.value().is_array())
                throw ParseError("trace: " + at + ": delta words must be arrays");
            Word w;
            for (const auto& letter : item.value()) {
                if (!letter.is_number_integer())
                    throw ParseError("trace: " + at + ": delta letters must be integers");
                const int l = letter.get<int>();
                if (l < 0 || l >= nrec)
                    throw ParseError("trace: " + at + ": delta letter out of range");
                w.push_back(l);
            }
            const Word ambient = substitute_word(w, letter_words);
            try {
                next[static_cast<size_t>(x)] = make_reflection_record(ambient, sys);
            } catch (const NotAReflection& e) {
                note(at + ": delta image of s" + std::to_string(x) +
                     " is not a reflection word (" + e.what() + ")");
                next[static_cast<size_t>(x)] = records[static_cast<size_t>(x)];
            }
            have[static_cast<size_t>(x)] = true;
        }
        bool complete = true;
        for (size_t x = 0; x < have.size(); ++x) {
            if (!have[x]) {
                note(at + ": delta misses generator s" + std::to_string(x));
                next[x] = records[x];
                complete = false;
            }
        }
        if (!complete) {
            records = std::move(next);
            ++stepno;
            continue;
        }

        const SharpSetReport after = is_sharp_angled_set(next, sys, order_cap);
        if (after.offenders.size() + 1 != before.offenders.size())
            note(at + ": non-sharp count went " + std::to_string(before.offenders.size()) +
                 " -> " + std::to_string(after.offenders.size()) + " (expected -1)");
        if (step.contains("nonsharp_after") &&
            step["nonsharp_after"].get<long long>() != static_cast<long long>(after.offenders.size()))
            note(at + ": nonsharp_after does not match the recomputed count");

        records = std::move(next);
        ++stepno;
    }
    rep.steps = stepno;

    const json& fs = j["final_S"];
    if (!fs.is_array() || fs.size() != records.size()) {
        note("final_S length does not match the replayed set");
    } else {
        for (size_t i = 0; i < records.size(); ++i) {
            const json& wj = fs[i];
            bool match = wj.is_array() && wj.size() == records[i].word.size();
            if (match) {
                for (size_t k = 0; k < records[i].word.size(); ++k) {
                    const std::string name =
                        inst.matrix.names[static_cast<size_t>(records[i].word[k])];
                    if (!wj[k].is_string() || wj[k].get<std::string>() != name) {
                        match = false;
                        break;
                    }
                }
            }
            if (!match)
                note("final_S[" + std::to_string(i) + "] does not match the replayed word");
        }
    }

    const SharpSetReport final_rep = is_sharp_angled_set(records, sys, order_cap);
    if (j["sharp"].get<bool>() != final_rep.sharp)
        note("trace sharp flag does not match the replayed set");

    return rep;
}

}  // namespace coxdef
