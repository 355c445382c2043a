#include "dblext/cli.hpp"

#include <numeric>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "dblext/complexes.hpp"
#include "dblext/double_extensions.hpp"
#include "dblext/errors.hpp"
#include "dblext/extensions.hpp"
#include "dblext/io.hpp"
#include "dblext/parallel.hpp"

namespace dblext {

namespace {

struct Options {
    std::vector<std::string> files;
    int p = 1;
    int q = 1;
    int degree = 2;
    std::int64_t mod = 0;
    bool integral = false;
    std::string format = "text";
    bool verify = false;
    bool classify = false;
    int max_level = 0;
    bool relax_double_source = false;
    unsigned threads = 1;
};

/// A property check failed; the report is still printed.
struct Outcome {
    Json result = Json::object();
    bool failed = false;
};

// Rendering ---------------------------------------------------------------------------

std::string scalar_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

bool is_flat_array(const Json& j) {
    for (const auto& v : j) {
        if (v.is_structured()) return false;
    }
    return true;
}

void render_text(const Json& j, int indent, std::ostream& out) {
    const std::string pad(indent, ' ');
    for (const auto& [key, value] : j.items()) {
        if (value.is_object()) {
            if (value.empty()) {
                out << pad << key << ": {}\n";
            } else {
                out << pad << key << ":\n";
                render_text(value, indent + 2, out);
            }
        } else if (value.is_array()) {
            if (is_flat_array(value)) {
                out << pad << key << ": [";
                for (std::size_t i = 0; i < value.size(); ++i) out << (i ? ", " : "") << scalar_text(value[i]);
                out << "]\n";
            } else {
                out << pad << key << ":\n";
                for (std::size_t i = 0; i < value.size(); ++i) {
                    out << pad << "  - [" << i << "]\n";
                    if (value[i].is_object()) {
                        render_text(value[i], indent + 6, out);
                    } else {
                        out << pad << "      " << value[i].dump() << "\n";
                    }
                }
            }
        } else {
            out << pad << key << ": " << scalar_text(value) << "\n";
        }
    }
}

// Helpers -------------------------------------------------------------------------------

int nerve_cap(const Options& o) { return o.max_level > 0 ? o.max_level : kDefaultNerveCap; }
int binerve_cap(const Options& o) { return o.max_level > 0 ? o.max_level : kDefaultBinerveCap; }

Json violations_json(const ValidationReport& r) {
    Json out = Json::array();
    for (const auto& v : r.violations()) {
        Json j;
        j["axiom"] = v.axiom;
        j["witness"] = v.witness;
        j["occurrences"] = v.occurrences;
        if (!v.note.empty()) j["note"] = v.note;
        out.push_back(j);
    }
    return out;
}

std::vector<std::string> nerve_keys(const NerveComplex& c, int p) {
    std::vector<std::string> keys;
    for (const auto& t : c.level(p).tuples) keys.push_back(describe_nerve_tuple(c.groupoid(), p, t));
    return keys;
}

std::vector<std::string> flat_keys(const CochainComplex& c, int n) {
    std::vector<std::string> keys;
    for (std::size_t i = 0; i < c.dimension(n); ++i) keys.push_back(c.describe_cell(n, i));
    return keys;
}

std::vector<std::string> bidegree_keys(const TotalComplex& c, int p, int q) {
    std::vector<std::string> keys;
    for (const auto& cell : c.level(p, q).cells) {
        keys.push_back(describe_binerve_cell(c.double_groupoid(), p, q, cell));
    }
    return keys;
}

Json bicochain_json(const TotalComplex& c, const BiCochain& b) {
    Json j = Json::object();
    for (const auto& [pq, values] : b.components) {
        j["(" + std::to_string(pq.first) + "," + std::to_string(pq.second) + ")"] =
            cochain_values_json(bidegree_keys(c, pq.first, pq.second), values);
    }
    return j;
}

std::string big_text(const BigInt& v) { return v.str(); }

Json big_list(const std::vector<BigInt>& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(big_text(x));
    return out;
}

Json certificate_json(const std::vector<std::string>& labels, const std::vector<std::int64_t>& weights) {
    Json j = Json::object();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] != 0) j[labels[i]] = weights[i];
    }
    return j;
}

Json bockstein_json(const CochainComplex& c, const BocksteinResult& b) {
    Json j;
    j["degree"] = b.degree;
    j["integral_coboundary"] = b.is_coboundary;
    j["order"] = b.order == 0 ? std::string("infinite") : big_text(b.order);
    Json cocycle = Json::object();
    const auto keys = flat_keys(c, b.degree);
    for (std::size_t i = 0; i < b.cocycle.size(); ++i) {
        if (b.cocycle[i] != 0) cocycle[keys[i]] = big_text(b.cocycle[i]);
    }
    j["cocycle"] = cocycle;
    if (b.is_coboundary) {
        Json w = Json::object();
        const auto wkeys = flat_keys(c, b.degree - 1);
        for (std::size_t i = 0; i < b.witness.size(); ++i) {
            if (b.witness[i] != 0) w[wkeys[i]] = big_text(b.witness[i]);
        }
        j["witness"] = w;
    }
    return j;
}

std::optional<Json> alt_json(const FiniteGroupoid& g, const std::optional<AntisymmetryWitness>& w) {
    if (!w) return std::nullopt;
    Json j;
    j["x"] = g.arrows[w->x];
    j["y"] = g.arrows[w->y];
    j["value"] = w->value.to_string();
    return j;
}

template <class T>
const T& expect(const Instance& inst, const std::string& kind) {
    if (!std::holds_alternative<T>(inst.value)) {
        throw StructuralError("expected a " + kind + " file, got a " + inst.kind);
    }
    return std::get<T>(inst.value);
}

std::int64_t lcm_of_denominators(const std::vector<CircleValue>& values) {
    std::int64_t m = 1;
    for (const auto& v : values) m = std::lcm(m, v.den());
    return m;
}

// Commands ------------------------------------------------------------------------------

Outcome cmd_validate(const Instance& inst, const Options& o) {
    Outcome out;
    ValidationReport report;
    out.result["kind"] = inst.kind;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FiniteGroupoid>) {
                report = validate_groupoid(v);
            } else if constexpr (std::is_same_v<T, DoubleGroupoid>) {
                report = validate_double(v, {.require_double_source_surjective = !o.relax_double_source});
            } else if constexpr (std::is_same_v<T, CentralExtension>) {
                report.merge(validate_groupoid(v.base), "base: ");
                report.merge(validate_extension(v));
            } else if constexpr (std::is_same_v<T, DoubleExtensionFile>) {
                report.merge(validate_double(v.d, {.require_double_source_surjective = !o.relax_double_source}),
                             "double groupoid: ");
                report.merge(validate_extension(v.ev), "vertical extension: ");
                report.merge(validate_extension(v.eh), "horizontal extension: ");
                if (report.valid()) {
                    if (v.ebar) {
                        report.merge(validate_double_extension(make_double_extension(v.d, v.ev, v.eh, *v.ebar)));
                    } else {
                        const std::int64_t m = o.mod ? o.mod : v.modulus;
                        const SectionSolution s = solve_compatible_section(v.d, v.ev, v.eh, m);
                        out.result["modulus"] = s.modulus;
                        if (!s.solvable) report.add("compatible section", {"no solution mod " + std::to_string(s.modulus)});
                    }
                }
            } else if constexpr (std::is_same_v<T, CochainFile>) {
                if (const auto* g = std::get_if<FiniteGroupoid>(&v.space)) {
                    const NerveComplex c(*g, std::max(nerve_cap(o), v.p + 1));
                    const Cochain dc = differential(c, Cochain{v.p, v.values});
                    for (std::size_t i = 0; i < dc.values.size(); ++i) {
                        if (!dc.values[i].is_zero()) {
                            report.add("closed", {c.describe_cell(v.p + 1, i), dc.values[i].to_string()});
                        }
                    }
                } else {
                    const TotalComplex c(std::get<DoubleGroupoid>(v.space),
                                         std::max(binerve_cap(o), v.p + *v.q + 1));
                    BiCochain b;
                    b.components[{v.p, *v.q}] = v.values;
                    const BiCochain db = total_differential(c, b);
                    for (const auto& [pq, values] : db.components) {
                        for (std::size_t i = 0; i < values.size(); ++i) {
                            if (!values[i].is_zero()) {
                                report.add("closed", {describe_binerve_cell(c.double_groupoid(), pq.first, pq.second,
                                                                            c.level(pq.first, pq.second).cells[i]),
                                                      values[i].to_string()});
                            }
                        }
                    }
                }
            } else if constexpr (std::is_same_v<T, GerbeFile>) {
                try {
                    const GerbeRecord g = v.extension ? bundle_gerbe(v.surjection, *v.extension)
                                                      : bundle_gerbe(v.surjection, v.fiber_order, *v.encoding);
                    report.merge(validate_extension(g.extension), "extension: ");
                } catch (const GerbeConditionError& e) {
                    report.add("gerbe condition", e.witness());
                }
            }
        },
        inst.value);
    out.result["valid"] = report.valid();
    out.result["violations"] = violations_json(report);
    out.failed = !report.valid();
    return out;
}

Outcome cmd_nerve(const Instance& inst, const Options& o) {
    const auto& g = expect<FiniteGroupoid>(inst, "groupoid");
    Outcome out;
    const NerveLevel lvl = nerve(g, o.p, nerve_cap(o));
    out.result["p"] = o.p;
    out.result["count"] = lvl.size();
    Json tuples = Json::array();
    for (const auto& t : lvl.tuples) tuples.push_back(describe_nerve_tuple(g, o.p, t));
    out.result["tuples"] = tuples;
    if (o.verify) {
        // eps_i eps_j = eps_{j-1} eps_i for i < j, at every level up to p.
        std::size_t checks = 0, failures = 0;
        Json witness = Json::array();
        for (int p = 2; p <= o.p; ++p) {
            for (const auto& t : nerve(g, p, nerve_cap(o)).tuples) {
                for (int j = 1; j <= p; ++j) {
                    for (int i = 0; i < j; ++i) {
                        ++checks;
                        const Tuple a = nerve_face(g, p - 1, i, nerve_face(g, p, j, t));
                        const Tuple b = nerve_face(g, p - 1, j - 1, nerve_face(g, p, i, t));
                        if (a != b && failures++ == 0) {
                            witness = Json::array({describe_nerve_tuple(g, p, t), i, j});
                        }
                    }
                }
            }
        }
        out.result["identity_checks"] = checks;
        out.result["identity_failures"] = failures;
        if (failures) out.result["witness"] = witness;
        out.failed = failures != 0;
    }
    return out;
}

Outcome cmd_binerve(const Instance& inst, const Options& o) {
    const auto& d = expect<DoubleGroupoid>(inst, "double_groupoid");
    Outcome out;
    const int cap = binerve_cap(o);
    const BiNerveLevel lvl = binerve(d, o.p, o.q, cap);
    out.result["p"] = o.p;
    out.result["q"] = o.q;
    out.result["count"] = lvl.size();
    Json cells = Json::array();
    for (const auto& c : lvl.cells) cells.push_back(describe_binerve_cell(d, o.p, o.q, c));
    out.result["cells"] = cells;
    if (o.verify) {
        std::size_t checks = 0, failures = 0;
        Json witness;
        auto note = [&](bool ok, int p, int q, const Tuple& c, const std::string& what) {
            ++checks;
            if (!ok && failures++ == 0) witness = Json::array({describe_binerve_cell(d, p, q, c), what});
        };
        for (int p = 0; p <= o.p; ++p) {
            for (int q = 0; q <= o.q; ++q) {
                if (p + q > cap) continue;
                for (const auto& c : binerve(d, p, q, cap).cells) {
                    for (int j = 1; j <= p; ++j) {
                        for (int i = 0; i < j; ++i) {
                            if (p < 2) continue;
                            note(binerve_face(d, p - 1, q, Axis::horizontal, i,
                                              binerve_face(d, p, q, Axis::horizontal, j, c)) ==
                                     binerve_face(d, p - 1, q, Axis::horizontal, j - 1,
                                                  binerve_face(d, p, q, Axis::horizontal, i, c)),
                                 p, q, c, "horizontal identity");
                        }
                    }
                    for (int j = 1; j <= q; ++j) {
                        for (int i = 0; i < j; ++i) {
                            if (q < 2) continue;
                            note(binerve_face(d, p, q - 1, Axis::vertical, i,
                                              binerve_face(d, p, q, Axis::vertical, j, c)) ==
                                     binerve_face(d, p, q - 1, Axis::vertical, j - 1,
                                                  binerve_face(d, p, q, Axis::vertical, i, c)),
                                 p, q, c, "vertical identity");
                        }
                    }
                    if (p >= 1 && q >= 1) {
                        for (int i = 0; i <= p; ++i) {
                            for (int j = 0; j <= q; ++j) {
                                note(binerve_face(d, p - 1, q, Axis::vertical, j,
                                                  binerve_face(d, p, q, Axis::horizontal, i, c)) ==
                                         binerve_face(d, p, q - 1, Axis::horizontal, i,
                                                      binerve_face(d, p, q, Axis::vertical, j, c)),
                                     p, q, c, "commutation");
                            }
                        }
                    }
                }
            }
        }
        out.result["identity_checks"] = checks;
        out.result["identity_failures"] = failures;
        if (failures) out.result["witness"] = witness;
        out.failed = failures != 0;
    }
    return out;
}

Json cohomology_json(const CochainComplex& c, const CohomologyResult& r) {
    Json j;
    j["degree"] = r.degree;
    j["coefficients"] = r.modulus == 0 ? std::string("Z") : "Z/" + std::to_string(r.modulus);
    j["invariant_factors"] = big_list(r.invariant_factors);
    j["free_rank"] = r.free_rank;
    j["order"] = r.free_rank ? std::string("infinite") : big_text(r.order());
    if (!r.representatives.empty()) {
        Json reps = Json::array();
        const auto keys = flat_keys(c, r.degree);
        for (const auto& rep : r.representatives) reps.push_back(cochain_values_json(keys, rep));
        j["representatives"] = reps;
    }
    return j;
}

Outcome cmd_cohomology(const Instance& inst, const Options& o) {
    if (o.integral == (o.mod != 0)) throw StructuralError("give exactly one of --mod and --integral");
    const Coefficients coeffs = o.integral ? Coefficients::integral() : Coefficients::mod(o.mod);
    Outcome out;
    if (const auto* g = std::get_if<FiniteGroupoid>(&inst.value)) {
        const NerveComplex c(*g, std::max(nerve_cap(o), o.degree + 1));
        out.result = cohomology_json(c, cohomology(c, o.degree, coeffs));
    } else if (const auto* d = std::get_if<DoubleGroupoid>(&inst.value)) {
        const TotalComplex c(*d, std::max(binerve_cap(o), o.degree + 1));
        out.result = cohomology_json(c, cohomology(c, o.degree, coeffs));
    } else {
        throw StructuralError("expected a groupoid or double_groupoid file, got a " + inst.kind);
    }
    return out;
}

Outcome cmd_curvature(const Instance& inst, const Options& o) {
    const auto& e = expect<CentralExtension>(inst, "extension");
    Outcome out;
    const Section s = canonical_section(e);
    const CocyclePresentation cp = curvature(e, s);
    const NerveComplex c(e.base, std::max(nerve_cap(o), 4));
    out.result["fiber_order"] = e.fiber_order;
    Json section = Json::object();
    for (std::size_t x = 0; x < s.size(); ++x) section[e.base.arrows[x]] = e.total.arrows[s[x]];
    out.result["section"] = section;
    out.result["sigma"] = cochain_values_json(nerve_keys(c, 2), cp.sigma.values);
    if (o.verify) {
        const ValidationReport report = validate_extension(e);
        const NaturalSectionReport ns = natural_section_encoding(e, s);
        const Cochain ds = differential(c, cp.sigma);
        bool closed = std::all_of(ds.values.begin(), ds.values.end(), [](const auto& v) { return v.is_zero(); });
        Json v;
        v["valid_extension"] = report.valid();
        v["sigma_closed"] = closed;
        v["natural_section_closed"] = ns.closed;
        v["natural_section_trivializes"] = ns.trivialization;
        if (!ns.witness.empty()) v["witness"] = ns.witness;
        out.result["verify"] = v;
        out.failed = !report.valid() || !closed || !ns.closed || !ns.trivialization;
    }
    if (o.classify) {
        const std::int64_t m = o.mod ? o.mod : e.fiber_order;
        Json cl;
        cl["modulus"] = m;
        cl["order"] = class_order(c, 2, cp.sigma.values, m);
        cl["bockstein"] = bockstein_json(c, bockstein(c, 2, cp.sigma.values));
        if (auto alt = alt_json(e.base, antisymmetry_witness(c, cp.sigma))) cl["antisymmetry"] = *alt;
        out.result["class"] = cl;
    }
    return out;
}

Outcome cmd_extend(const Instance& inst, const Options& o) {
    const auto& cf = expect<CochainFile>(inst, "cochain");
    const auto* g = std::get_if<FiniteGroupoid>(&cf.space);
    if (!g || cf.p != 2) throw StructuralError("extend needs a 2-cochain on a groupoid");
    const std::int64_t n = o.mod ? o.mod : lcm_of_denominators(cf.values);
    Outcome out;
    try {
        const CentralExtension e = extension_from_cocycle(*g, n, Cochain{2, cf.values});
        out.result["fiber_order"] = n;
        out.result["extension"] = to_json(e);
    } catch (const PreconditionError& e) {
        out.result["closed"] = false;
        out.result["witness"] = e.witness();
        out.failed = true;
    }
    return out;
}

Outcome cmd_equivalent(const Instance& a, const Instance& b) {
    const auto& e1 = expect<CentralExtension>(a, "extension");
    const auto& e2 = expect<CentralExtension>(b, "extension");
    Outcome out;
    const auto w = are_equivalent(e1, e2);
    out.result["equivalent"] = w.has_value();
    if (w) {
        out.result["lambda"] = cochain_values_json(e1.base.arrows, w->lambda.values);
        Json iso = Json::object();
        for (std::size_t x = 0; x < w->isomorphism.size(); ++x) {
            iso[e1.total.arrows[x]] = e2.total.arrows[w->isomorphism[x]];
        }
        out.result["isomorphism"] = iso;
    }
    out.failed = !w;
    return out;
}

Outcome cmd_gerbe(const Instance& inst, const Options& o) {
    const auto& f = expect<GerbeFile>(inst, "gerbe");
    Outcome out;
    try {
        const GerbeRecord g =
            f.extension ? bundle_gerbe(f.surjection, *f.extension) : bundle_gerbe(f.surjection, f.fiber_order, *f.encoding);
        const NerveComplex c(g.groupoid, std::max(nerve_cap(o), 4));
        out.result["objects"] = g.groupoid.object_count();
        out.result["arrows"] = g.groupoid.arrow_count();
        out.result["fiber_order"] = g.extension.fiber_order;
        out.result["delta_trivial"] = g.delta_trivial;
        out.result["section_encoding"] = cochain_values_json(nerve_keys(c, 2), g.section_encoding.values);
        out.result["class_order"] = g.class_order;
        out.failed = !g.delta_trivial;
    } catch (const GerbeConditionError& e) {
        out.result["delta_trivial"] = false;
        out.result["witness"] = e.witness();
        out.failed = true;
    }
    return out;
}

Json solution_json(const DoubleGroupoid& d, const SectionSolution& s) {
    Json j;
    j["modulus"] = s.modulus;
    j["tried_moduli"] = s.tried_moduli;
    j["equations"] = s.equations.size();
    j["solvable"] = s.solvable;
    if (s.solvable) {
        j["solution_count"] = big_text(s.count);
        j["ebar"] = cochain_values_json(d.squares, s.particular);
        Json kernel = Json::array();
        for (const auto& k : s.kernel) kernel.push_back(cochain_values_json(d.squares, k));
        j["kernel"] = kernel;
    } else {
        j["certificate"] = certificate_json(s.equations, s.certificate);
    }
    return j;
}

Outcome cmd_solve_section(const Instance& inst, const Options& o) {
    const auto& f = expect<DoubleExtensionFile>(inst, "double_extension");
    const std::int64_t m = o.mod ? o.mod : f.modulus;
    Outcome out;
    const SectionSolution s = solve_compatible_section(f.d, f.ev, f.eh, m);
    out.result = solution_json(f.d, s);
    if (o.verify && s.solvable) {
        const DoubleExtension de = make_double_extension(f.d, f.ev, f.eh, s.particular);
        out.result["verified"] = validate_double_extension(de).valid();
        out.failed = !validate_double_extension(de).valid();
    }
    out.failed = out.failed || !s.solvable;
    return out;
}

/// The file's ebar, or the lexicographically smallest solution when it says "solve".
std::optional<DoubleExtension> resolve(const DoubleExtensionFile& f, const Options& o, Outcome& out) {
    if (f.ebar) return make_double_extension(f.d, f.ev, f.eh, *f.ebar);
    const std::int64_t m = o.mod ? o.mod : f.modulus;
    const SectionSolution s = solve_compatible_section(f.d, f.ev, f.eh, m);
    out.result["solved"] = solution_json(f.d, s);
    if (!s.solvable) {
        out.failed = true;
        return std::nullopt;
    }
    return make_double_extension(f.d, f.ev, f.eh, s.particular);
}

Outcome cmd_double_cocycle(const Instance& inst, const Options& o) {
    const auto& f = expect<DoubleExtensionFile>(inst, "double_extension");
    Outcome out;
    const auto de = resolve(f, o, out);
    if (!de) return out;
    const ValidationReport report = validate_double_extension(*de);
    if (!report.valid()) {
        out.result["compatible"] = false;
        out.result["violations"] = violations_json(report);
        out.failed = true;
        return out;
    }
    const TotalComplex c(de->d, std::max(binerve_cap(o), 4));
    const BiCochain cocycle = assemble_double_cocycle(*de);
    out.result["compatible"] = true;
    out.result["cocycle"] = bicochain_json(c, cocycle);
    if (o.verify) {
        Json res = Json::object();
        bool closed = true;
        for (const auto& r : verify_double_cocycle(c, cocycle)) {
            Json j;
            j["cells"] = r.cells;
            j["nonzero"] = r.nonzero;
            if (r.nonzero) j["witness"] = r.witness;
            res["(" + std::to_string(r.p) + "," + std::to_string(r.q) + ")"] = j;
            closed = closed && r.nonzero == 0;
        }
        out.result["residuals"] = res;
        const CompatibilityAudit audit = audit_compatibility(*de, 0x5eed);
        Json a;
        a["cells"] = audit.cells;
        a["cancellations"] = audit.cancellations;
        a["agreement"] = audit.agreement;
        if (!audit.witness.empty()) a["witness"] = audit.witness;
        out.result["raw_audit"] = a;
        out.failed = !closed || !audit.cancellations || !audit.agreement;
    }
    return out;
}

Outcome cmd_double_class(const Instance& inst, const Options& o) {
    const auto& f = expect<DoubleExtensionFile>(inst, "double_extension");
    Outcome out;
    const auto de = resolve(f, o, out);
    if (!de) return out;
    const TotalComplex c(de->d, std::max(binerve_cap(o), 4));
    const std::int64_t m = o.mod ? o.mod : (f.modulus ? f.modulus : de->ev.fiber_order);
    const DoubleClassResult r = double_class(c, *de, m);
    out.result["modulus"] = r.modulus;
    out.result["coboundary"] = r.coboundary;
    out.result["order"] = r.order;
    if (r.primitive) out.result["primitive"] = bicochain_json(c, *r.primitive);
    if (!r.coboundary) out.result["certificate"] = certificate_json(flat_keys(c, 2), r.certificate);
    out.result["bockstein"] = bockstein_json(c, r.bockstein);
    if (auto alt = alt_json(de->d.horizontal, r.horizontal_alt)) out.result["horizontal_antisymmetry"] = *alt;
    if (auto alt = alt_json(de->d.vertical, r.vertical_alt)) out.result["vertical_antisymmetry"] = *alt;
    return out;
}

std::string file_name(const std::string& path) { return std::filesystem::path(path).filename().string(); }

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite groupoids, double groupoids and their central extensions", "dblext"};
    app.require_subcommand(1);
    Options o;

    struct Subcommand {
        const char* name;
        const char* help;
        int files;
    };
    const std::vector<Subcommand> subcommands = {
        {"validate", "check the axioms of any instance file", 1},
        {"nerve", "list nerve(G, p)", 1},
        {"binerve", "list binerve(D, p, q)", 1},
        {"cohomology", "cohomology of a groupoid or of the total complex of a double groupoid", 1},
        {"curvature", "cocycle of an extension against its canonical section", 1},
        {"extend", "extension from a 2-cocycle file", 1},
        {"equivalent", "decide whether two extensions are equivalent", 2},
        {"gerbe", "bundle gerbe condition and class", 1},
        {"solve-section", "solve for a compatible section of a double extension", 1},
        {"double-cocycle", "assemble the total 3-cocycle of a double extension", 1},
        {"double-class", "class of the total cocycle", 1},
    };
    for (const auto& s : subcommands) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("files", o.files, "instance file(s)")->required()->expected(s.files);
        sub->add_option("--p", o.p, "first degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--q", o.q, "second degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--degree", o.degree, "cohomological degree")->check(CLI::NonNegativeNumber);
        sub->add_option("--mod", o.mod, "coefficient modulus")->check(CLI::PositiveNumber);
        sub->add_flag("--integral", o.integral, "integral coefficients");
        sub->add_option("--format", o.format, "report format")->check(CLI::IsMember({"text", "machine"}));
        sub->add_flag("--verify", o.verify, "run the exhaustive checks");
        sub->add_flag("--classify", o.classify, "compute class invariants");
        sub->add_option("--max-level", o.max_level, "override the nerve level cap")->check(CLI::PositiveNumber);
        sub->add_flag("--relax-double-source", o.relax_double_source, "skip double-source surjectivity");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    set_worker_threads(o.threads);

    Json report;
    report["tool"] = "dblext";
    report["version"] = kToolVersion;
    report["command"] = command;
    Outcome outcome;
    try {
        std::vector<Instance> inputs;
        for (const auto& f : o.files) inputs.push_back(load_instance(f));
        Json in = Json::array();
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            in.push_back(Json{{"file", file_name(o.files[i])}, {"kind", inputs[i].kind}, {"sha256", inputs[i].digest}});
        }
        report["inputs"] = in;
        const Instance& first = inputs.front();
        if (command == "validate") outcome = cmd_validate(first, o);
        else if (command == "nerve") outcome = cmd_nerve(first, o);
        else if (command == "binerve") outcome = cmd_binerve(first, o);
        else if (command == "cohomology") outcome = cmd_cohomology(first, o);
        else if (command == "curvature") outcome = cmd_curvature(first, o);
        else if (command == "extend") outcome = cmd_extend(first, o);
        else if (command == "equivalent") outcome = cmd_equivalent(first, inputs[1]);
        else if (command == "gerbe") outcome = cmd_gerbe(first, o);
        else if (command == "solve-section") outcome = cmd_solve_section(first, o);
        else if (command == "double-cocycle") outcome = cmd_double_cocycle(first, o);
        else outcome = cmd_double_class(first, o);
    } catch (const PreconditionError& e) {
        err << "dblext: " << e.what();
        for (const auto& w : e.witness()) err << " [" << w << "]";
        err << "\n";
        return kExitPropertyFailure;
    } catch (const DomainError& e) {
        err << "dblext: " << e.what();
        for (const auto& w : e.witness()) err << " [" << w << "]";
        err << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "dblext: " << e.what() << "\n";
        return kExitUsage;
    }
    report["status"] = outcome.failed ? "fail" : "ok";
    report["result"] = outcome.result;
    if (o.format == "machine") {
        out << dump(report);
    } else {
        render_text(report, 0, out);
    }
    return outcome.failed ? kExitPropertyFailure : kExitOk;
}

}  // namespace dblext
