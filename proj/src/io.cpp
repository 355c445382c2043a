#include "dblext/io.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "dblext/errors.hpp"

namespace dblext {

namespace fs = std::filesystem;

namespace {

// Every file read while loading one instance, for the digest.
struct LoadState {
    std::string bytes;
};

Json parse_text(const std::string& text, const std::string& where) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw StructuralError(where + ": " + e.what());
    }
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StructuralError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A JSON object plus the path used in error messages.
class Node {
public:
    Node(const Json& j, std::string where) : j_(j), where_(std::move(where)) {}

    const Json& json() const { return j_; }
    const std::string& where() const { return where_; }

    [[noreturn]] void fail(const std::string& message) const { throw StructuralError(where_ + ": " + message); }

    void expect_object(const std::set<std::string>& allowed) const {
        if (!j_.is_object()) fail("expected an object");
        for (const auto& [key, value] : j_.items()) {
            if (!allowed.count(key)) fail("unknown field '" + key + "'");
        }
    }
    bool has(const std::string& key) const { return j_.contains(key); }
    Node at(const std::string& key) const {
        if (!j_.contains(key)) fail("missing field '" + key + "'");
        return Node(j_.at(key), where_ + "." + key);
    }
    Node at(std::size_t i) const { return Node(j_.at(i), where_ + "[" + std::to_string(i) + "]"); }

    std::string str() const {
        if (!j_.is_string()) fail("expected a string");
        return j_.get<std::string>();
    }
    std::int64_t integer() const {
        if (!j_.is_number_integer()) fail("expected an integer");
        return j_.get<std::int64_t>();
    }
    const Json& array() const {
        if (!j_.is_array()) fail("expected an array");
        return j_;
    }
    const Json& object() const {
        if (!j_.is_object()) fail("expected an object");
        return j_;
    }
    CircleValue circle() const {
        try {
            return CircleValue::parse(str());
        } catch (const StructuralError& e) {
            fail(e.what());
        }
    }

private:
    const Json& j_;
    std::string where_;
};

class IdIndex {
public:
    IdIndex(const std::vector<Id>& ids, std::string what) : what_(std::move(what)) {
        for (std::size_t i = 0; i < ids.size(); ++i) {
            if (!index_.emplace(ids[i], static_cast<int>(i)).second) {
                throw StructuralError("duplicate " + what_ + " id '" + ids[i] + "'");
            }
        }
    }
    int get(const Node& n) const {
        const std::string id = n.str();
        auto it = index_.find(id);
        if (it == index_.end()) n.fail("dangling reference to " + what_ + " '" + id + "'");
        return it->second;
    }

private:
    std::map<Id, int> index_;
    std::string what_;
};

std::vector<Id> id_list(const Node& n) {
    std::vector<Id> out;
    const Json& a = n.array();
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(n.at(i).str());
    return out;
}

void check_header(const Node& n, const std::string& kind, bool top_level) {
    if (n.at("kind").str() != kind) n.fail("expected kind '" + kind + "'");
    if (n.has("version")) {
        if (n.at("version").integer() != kFormatVersion) {
            n.fail("unsupported version " + std::to_string(n.at("version").integer()));
        }
    } else if (top_level) {
        n.fail("missing field 'version'");
    }
}

class Loader {
public:
    explicit Loader(LoadState& state) : state_(state) {}

    InstanceValue value(const Json& j, const fs::path& dir, const std::string& where, bool top_level) {
        Node n(j, where);
        n.object();
        const std::string kind = n.at("kind").str();
        if (kind == "groupoid") return groupoid(n, top_level);
        if (kind == "double_groupoid") return double_groupoid(n, dir, top_level);
        if (kind == "extension") return extension(n, dir, top_level);
        if (kind == "double_extension") return double_extension(n, dir, top_level);
        if (kind == "cochain") return cochain(n, dir, top_level);
        if (kind == "gerbe") return gerbe(n, dir, top_level);
        n.at("kind").fail("unknown kind '" + kind + "'");
    }

    InstanceValue file(const fs::path& path) {
        const std::string text = read_file(path);
        state_.bytes += text;
        const Json j = parse_text(text, path.string());
        return value(j, path.parent_path(), path.filename().string(), true);
    }

    // A reference: a relative path string or an inline object.
    template <class T>
    T ref(const Node& n, const fs::path& dir, const std::string& expected_kind) {
        InstanceValue v;
        if (n.json().is_string()) {
            const fs::path target = dir / n.str();
            if (!fs::exists(target)) n.fail("dangling file reference '" + n.str() + "'");
            v = file(target);
        } else {
            v = value(n.json(), dir, n.where(), false);
        }
        if (!std::holds_alternative<T>(v)) {
            n.fail("expected a " + expected_kind + ", got a " + kind_of(v));
        }
        return std::get<T>(std::move(v));
    }

    FiniteGroupoid groupoid(const Node& n, bool top_level) {
        n.expect_object({"kind", "version", "objects", "arrows", "mult", "units", "inv"});
        check_header(n, "groupoid", top_level);
        FiniteGroupoid g;
        g.objects = id_list(n.at("objects"));
        const IdIndex objects(g.objects, "object");
        const Node arrows = n.at("arrows");
        for (std::size_t i = 0; i < arrows.array().size(); ++i) {
            const Node a = arrows.at(i);
            a.expect_object({"id", "src", "tgt"});
            g.arrows.push_back(a.at("id").str());
            g.src.push_back(objects.get(a.at("src")));
            g.tgt.push_back(objects.get(a.at("tgt")));
        }
        const IdIndex ids(g.arrows, "arrow");
        const std::size_t na = g.arrows.size();
        g.mult.assign(na * na, -1);
        const Node mult = n.at("mult");
        for (std::size_t i = 0; i < mult.array().size(); ++i) {
            const Node row = mult.at(i);
            if (row.array().size() != 3) row.fail("expected [x, y, xy]");
            int& entry = g.product_entry(ids.get(row.at(0)), ids.get(row.at(1)));
            if (entry != -1) row.fail("duplicate product");
            entry = ids.get(row.at(2));
        }
        g.unit.assign(g.objects.size(), -1);
        const Node units = n.at("units");
        for (const auto& [key, value] : units.object().items()) {
            g.unit[objects.get(Node(key, units.where()))] = ids.get(Node(value, units.where() + "." + key));
        }
        for (std::size_t u = 0; u < g.unit.size(); ++u) {
            if (g.unit[u] < 0) units.fail("no unit for object '" + g.objects[u] + "'");
        }
        g.inv.assign(na, -1);
        const Node inv = n.at("inv");
        for (const auto& [key, value] : inv.object().items()) {
            g.inv[ids.get(Node(key, inv.where()))] = ids.get(Node(value, inv.where() + "." + key));
        }
        for (std::size_t x = 0; x < na; ++x) {
            if (g.inv[x] < 0) inv.fail("no inverse for arrow '" + g.arrows[x] + "'");
        }
        g.check_structure();
        return g;
    }

    DoubleGroupoid double_groupoid(const Node& n, const fs::path& dir, bool top_level) {
        n.expect_object({"kind", "version", "corners", "squares", "mV", "mH", "unitV", "unitH", "invV", "invH"});
        check_header(n, "double_groupoid", top_level);
        DoubleGroupoid d;
        const Node corners = n.at("corners");
        corners.expect_object({"vertical", "horizontal"});
        d.vertical = ref<FiniteGroupoid>(corners.at("vertical"), dir, "groupoid");
        d.horizontal = ref<FiniteGroupoid>(corners.at("horizontal"), dir, "groupoid");
        if (d.vertical.objects != d.horizontal.objects) {
            corners.fail("edge groupoids have different object sets");
        }
        const IdIndex vert(d.vertical.arrows, "vertical arrow");
        const IdIndex hor(d.horizontal.arrows, "horizontal arrow");
        const Node squares = n.at("squares");
        for (std::size_t i = 0; i < squares.array().size(); ++i) {
            const Node s = squares.at(i);
            s.expect_object({"id", "sV", "tV", "sH", "tH"});
            d.squares.push_back(s.at("id").str());
            d.sV.push_back(vert.get(s.at("sV")));
            d.tV.push_back(vert.get(s.at("tV")));
            d.sH.push_back(hor.get(s.at("sH")));
            d.tH.push_back(hor.get(s.at("tH")));
        }
        const IdIndex sq(d.squares, "square");
        const std::size_t ns = d.squares.size();
        auto table = [&](const std::string& key, std::vector<int>& out) {
            out.assign(ns * ns, -1);
            const Node t = n.at(key);
            for (std::size_t i = 0; i < t.array().size(); ++i) {
                const Node row = t.at(i);
                if (row.array().size() != 3) row.fail("expected [x1, x2, x]");
                int& entry = out[static_cast<std::size_t>(sq.get(row.at(0))) * ns + sq.get(row.at(1))];
                if (entry != -1) row.fail("duplicate product");
                entry = sq.get(row.at(2));
            }
        };
        table("mV", d.mV);
        table("mH", d.mH);
        auto map_table = [&](const std::string& key, const IdIndex& from, std::size_t size,
                             const std::vector<Id>& names, std::vector<int>& out) {
            out.assign(size, -1);
            const Node t = n.at(key);
            for (const auto& [k, v] : t.object().items()) {
                out[from.get(Node(k, t.where()))] = sq.get(Node(v, t.where() + "." + k));
            }
            for (std::size_t i = 0; i < size; ++i) {
                if (out[i] < 0) t.fail("no entry for '" + names[i] + "'");
            }
        };
        map_table("unitV", vert, d.vertical.arrow_count(), d.vertical.arrows, d.unitV);
        map_table("unitH", hor, d.horizontal.arrow_count(), d.horizontal.arrows, d.unitH);
        map_table("invV", sq, ns, d.squares, d.invV);
        map_table("invH", sq, ns, d.squares, d.invH);
        d.check_structure();
        return d;
    }

    std::vector<CircleValue> keyed_values(const Node& n, const std::vector<std::string>& keys) {
        std::map<std::string, std::size_t> index;
        for (std::size_t i = 0; i < keys.size(); ++i) index.emplace(keys[i], i);
        std::vector<CircleValue> out(keys.size());
        for (const auto& [key, value] : n.object().items()) {
            auto it = index.find(key);
            if (it == index.end()) n.fail("no cell '" + key + "' at this level");
            out[it->second] = Node(value, n.where() + "." + key).circle();
        }
        return out;
    }

    static std::vector<std::string> nerve_keys(const FiniteGroupoid& g, int p) {
        std::vector<std::string> keys;
        for (const auto& t : nerve(g, p).tuples) keys.push_back(describe_nerve_tuple(g, p, t));
        return keys;
    }
    static std::vector<std::string> binerve_keys(const DoubleGroupoid& d, int p, int q) {
        std::vector<std::string> keys;
        for (const auto& c : binerve(d, p, q).cells) keys.push_back(describe_binerve_cell(d, p, q, c));
        return keys;
    }

    CentralExtension extension(const Node& n, const fs::path& dir, bool top_level) {
        check_header(n, "extension", top_level);
        const std::string form = n.at("form").str();
        if (form == "cocycle") {
            n.expect_object({"kind", "version", "base", "fiber_order", "form", "sigma"});
            FiniteGroupoid base = ref<FiniteGroupoid>(n.at("base"), dir, "groupoid");
            const std::int64_t order = n.at("fiber_order").integer();
            if (order < 1) n.at("fiber_order").fail("must be positive");
            Cochain sigma{2, keyed_values(n.at("sigma"), nerve_keys(base, 2))};
            for (const auto& v : sigma.values) {
                if (!v.in_units_of(order)) n.at("sigma").fail("value " + v.to_string() + " is not in the fiber");
            }
            return extension_from_cocycle(base, order, sigma);
        }
        if (form != "total") n.at("form").fail("expected 'total' or 'cocycle'");
        n.expect_object({"kind", "version", "base", "fiber_order", "form", "total", "proj", "act"});
        CentralExtension e;
        e.base = ref<FiniteGroupoid>(n.at("base"), dir, "groupoid");
        e.fiber_order = n.at("fiber_order").integer();
        if (e.fiber_order < 1) n.at("fiber_order").fail("must be positive");
        e.total = ref<FiniteGroupoid>(n.at("total"), dir, "groupoid");
        const IdIndex base_ids(e.base.arrows, "base arrow");
        const IdIndex total_ids(e.total.arrows, "total arrow");
        const std::size_t nt = e.total.arrow_count();
        e.proj.assign(nt, -1);
        const Node proj = n.at("proj");
        for (const auto& [k, v] : proj.object().items()) {
            e.proj[total_ids.get(Node(k, proj.where()))] = base_ids.get(Node(v, proj.where() + "." + k));
        }
        e.act.assign(nt * e.fiber_order, -1);
        const Node act = n.at("act");
        for (const auto& [k, v] : act.object().items()) {
            const int x = total_ids.get(Node(k, act.where()));
            const Node row(v, act.where() + "." + k);
            if (row.array().size() != static_cast<std::size_t>(e.fiber_order)) {
                row.fail("expected " + std::to_string(e.fiber_order) + " entries");
            }
            for (std::size_t a = 0; a < row.array().size(); ++a) {
                e.act[x * e.fiber_order + a] = total_ids.get(row.at(a));
            }
        }
        for (std::size_t x = 0; x < nt; ++x) {
            if (e.proj[x] < 0) proj.fail("no projection for '" + e.total.arrows[x] + "'");
            if (e.act[x * e.fiber_order] < 0) act.fail("no action row for '" + e.total.arrows[x] + "'");
        }
        e.check_structure();
        return e;
    }

    DoubleExtensionFile double_extension(const Node& n, const fs::path& dir, bool top_level) {
        n.expect_object({"kind", "version", "double", "ev", "eh", "ebar", "mod"});
        check_header(n, "double_extension", top_level);
        DoubleExtensionFile f;
        f.d = ref<DoubleGroupoid>(n.at("double"), dir, "double_groupoid");
        f.ev = ref<CentralExtension>(n.at("ev"), dir, "extension");
        f.eh = ref<CentralExtension>(n.at("eh"), dir, "extension");
        if (n.has("mod")) {
            f.modulus = n.at("mod").integer();
            if (f.modulus < 1) n.at("mod").fail("must be positive");
        }
        const Node ebar = n.at("ebar");
        if (ebar.json().is_string()) {
            if (ebar.str() != "solve") ebar.fail("expected an object or \"solve\"");
        } else {
            f.ebar = keyed_values(ebar, f.d.squares);
        }
        return f;
    }

    CochainFile cochain(const Node& n, const fs::path& dir, bool top_level) {
        n.expect_object({"kind", "version", "groupoid", "double", "level", "values"});
        check_header(n, "cochain", top_level);
        CochainFile c;
        const Node level = n.at("level");
        level.expect_object({"p", "q"});
        c.p = static_cast<int>(level.at("p").integer());
        if (level.has("q")) c.q = static_cast<int>(level.at("q").integer());
        if (c.p < 0 || (c.q && *c.q < 0)) level.fail("negative degree");
        if (n.has("groupoid") == n.has("double")) n.fail("expected exactly one of 'groupoid' and 'double'");
        std::vector<std::string> keys;
        if (n.has("groupoid")) {
            if (c.q) level.fail("a groupoid cochain has no q");
            FiniteGroupoid g = ref<FiniteGroupoid>(n.at("groupoid"), dir, "groupoid");
            keys = nerve_keys(g, c.p);
            c.space = std::move(g);
        } else {
            if (!c.q) level.fail("a double groupoid cochain needs p and q");
            DoubleGroupoid d = ref<DoubleGroupoid>(n.at("double"), dir, "double_groupoid");
            keys = binerve_keys(d, c.p, *c.q);
            c.space = std::move(d);
        }
        c.values = keyed_values(n.at("values"), keys);
        return c;
    }

    GerbeFile gerbe(const Node& n, const fs::path& dir, bool top_level) {
        n.expect_object({"kind", "version", "base", "cover", "phi", "extension", "fiber_order", "encoding"});
        check_header(n, "gerbe", top_level);
        GerbeFile f;
        f.surjection.base = id_list(n.at("base"));
        f.surjection.cover = id_list(n.at("cover"));
        const IdIndex base(f.surjection.base, "point");
        const IdIndex cover(f.surjection.cover, "cover point");
        f.surjection.phi.assign(f.surjection.cover.size(), -1);
        const Node phi = n.at("phi");
        for (const auto& [k, v] : phi.object().items()) {
            f.surjection.phi[cover.get(Node(k, phi.where()))] = base.get(Node(v, phi.where() + "." + k));
        }
        for (std::size_t y = 0; y < f.surjection.phi.size(); ++y) {
            if (f.surjection.phi[y] < 0) phi.fail("no image for '" + f.surjection.cover[y] + "'");
        }
        if (n.has("extension") == n.has("encoding")) n.fail("expected exactly one of 'extension' and 'encoding'");
        if (n.has("extension")) {
            f.extension = ref<CentralExtension>(n.at("extension"), dir, "extension");
            f.fiber_order = f.extension->fiber_order;
        } else {
            f.fiber_order = n.at("fiber_order").integer();
            if (f.fiber_order < 1) n.at("fiber_order").fail("must be positive");
            const FiniteGroupoid y2 = fiber_product_groupoid(f.surjection);
            f.encoding = Cochain{2, keyed_values(n.at("encoding"), nerve_keys(y2, 2))};
        }
        return f;
    }

private:
    LoadState& state_;
};

Json values_json(const std::vector<std::string>& keys, const std::vector<CircleValue>& values) {
    return cochain_values_json(keys, values);
}

Json groupoid_body(const FiniteGroupoid& g) {
    Json j;
    j["kind"] = "groupoid";
    j["version"] = kFormatVersion;
    j["objects"] = g.objects;
    Json arrows = Json::array();
    for (std::size_t x = 0; x < g.arrow_count(); ++x) {
        arrows.push_back(Json{{"id", g.arrows[x]}, {"src", g.objects[g.src[x]]}, {"tgt", g.objects[g.tgt[x]]}});
    }
    j["arrows"] = arrows;
    Json mult = Json::array();
    for (std::size_t x = 0; x < g.arrow_count(); ++x) {
        for (std::size_t y = 0; y < g.arrow_count(); ++y) {
            const int xy = g.product(static_cast<int>(x), static_cast<int>(y));
            if (xy >= 0) mult.push_back(Json::array({g.arrows[x], g.arrows[y], g.arrows[xy]}));
        }
    }
    j["mult"] = mult;
    Json units = Json::object();
    for (std::size_t u = 0; u < g.object_count(); ++u) units[g.objects[u]] = g.arrows[g.unit[u]];
    j["units"] = units;
    Json inv = Json::object();
    for (std::size_t x = 0; x < g.arrow_count(); ++x) inv[g.arrows[x]] = g.arrows[g.inv[x]];
    j["inv"] = inv;
    return j;
}

}  // namespace

std::string kind_of(const InstanceValue& value) {
    static const char* kinds[] = {"groupoid", "double_groupoid", "extension", "double_extension", "cochain", "gerbe"};
    return kinds[value.index()];
}

Instance load_instance(const fs::path& path) {
    LoadState state;
    Loader loader(state);
    InstanceValue v = loader.file(path);
    return {kind_of(v), std::move(v), sha256_hex(state.bytes)};
}

Instance load_instance_text(const std::string& text, const fs::path& base_dir) {
    LoadState state;
    state.bytes = text;
    Loader loader(state);
    const Json j = parse_text(text, "<text>");
    InstanceValue v = loader.value(j, base_dir, "<text>", true);
    return {kind_of(v), std::move(v), sha256_hex(state.bytes)};
}

InstanceValue from_json(const Json& j, const fs::path& base_dir) {
    LoadState state;
    Loader loader(state);
    return loader.value(j, base_dir, "<json>", false);
}

Json cochain_values_json(const std::vector<std::string>& keys, const std::vector<CircleValue>& values) {
    Json j = Json::object();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i].is_zero()) j[keys[i]] = values[i].to_string();
    }
    return j;
}

Json to_json(const FiniteGroupoid& g) { return groupoid_body(g); }

Json to_json(const DoubleGroupoid& d) {
    Json j;
    j["kind"] = "double_groupoid";
    j["version"] = kFormatVersion;
    j["corners"] = Json{{"vertical", to_json(d.vertical)}, {"horizontal", to_json(d.horizontal)}};
    Json squares = Json::array();
    for (std::size_t x = 0; x < d.square_count(); ++x) {
        squares.push_back(Json{{"id", d.squares[x]},
                               {"sV", d.vertical.arrows[d.sV[x]]},
                               {"tV", d.vertical.arrows[d.tV[x]]},
                               {"sH", d.horizontal.arrows[d.sH[x]]},
                               {"tH", d.horizontal.arrows[d.tH[x]]}});
    }
    j["squares"] = squares;
    auto table = [&](const std::vector<int>& m) {
        Json t = Json::array();
        const std::size_t ns = d.square_count();
        for (std::size_t a = 0; a < ns; ++a) {
            for (std::size_t b = 0; b < ns; ++b) {
                const int ab = m[a * ns + b];
                if (ab >= 0) t.push_back(Json::array({d.squares[a], d.squares[b], d.squares[ab]}));
            }
        }
        return t;
    };
    j["mV"] = table(d.mV);
    j["mH"] = table(d.mH);
    auto map_table = [&](const std::vector<Id>& from, const std::vector<int>& to) {
        Json t = Json::object();
        for (std::size_t i = 0; i < from.size(); ++i) t[from[i]] = d.squares[to[i]];
        return t;
    };
    j["unitV"] = map_table(d.vertical.arrows, d.unitV);
    j["unitH"] = map_table(d.horizontal.arrows, d.unitH);
    j["invV"] = map_table(d.squares, d.invV);
    j["invH"] = map_table(d.squares, d.invH);
    return j;
}

Json to_json(const CentralExtension& e) {
    Json j;
    j["kind"] = "extension";
    j["version"] = kFormatVersion;
    j["base"] = to_json(e.base);
    j["fiber_order"] = e.fiber_order;
    j["form"] = "total";
    j["total"] = to_json(e.total);
    Json proj = Json::object();
    Json act = Json::object();
    for (std::size_t x = 0; x < e.total.arrow_count(); ++x) {
        proj[e.total.arrows[x]] = e.base.arrows[e.proj[x]];
        Json row = Json::array();
        for (std::int64_t k = 0; k < e.fiber_order; ++k) row.push_back(e.total.arrows[e.acted(static_cast<int>(x), k)]);
        act[e.total.arrows[x]] = row;
    }
    j["proj"] = proj;
    j["act"] = act;
    return j;
}

Json to_json(const DoubleExtensionFile& f) {
    Json j;
    j["kind"] = "double_extension";
    j["version"] = kFormatVersion;
    j["double"] = to_json(f.d);
    j["ev"] = to_json(f.ev);
    j["eh"] = to_json(f.eh);
    if (f.ebar) {
        j["ebar"] = values_json(f.d.squares, *f.ebar);
    } else {
        j["ebar"] = "solve";
    }
    if (f.modulus > 0) j["mod"] = f.modulus;
    return j;
}

Json to_json(const CochainFile& c) {
    Json j;
    j["kind"] = "cochain";
    j["version"] = kFormatVersion;
    std::vector<std::string> keys;
    if (const auto* g = std::get_if<FiniteGroupoid>(&c.space)) {
        j["groupoid"] = to_json(*g);
        j["level"] = Json{{"p", c.p}};
        for (const auto& t : nerve(*g, c.p).tuples) keys.push_back(describe_nerve_tuple(*g, c.p, t));
    } else {
        const auto& d = std::get<DoubleGroupoid>(c.space);
        j["double"] = to_json(d);
        j["level"] = Json{{"p", c.p}, {"q", c.q.value_or(0)}};
        for (const auto& cell : binerve(d, c.p, c.q.value_or(0)).cells) {
            keys.push_back(describe_binerve_cell(d, c.p, c.q.value_or(0), cell));
        }
    }
    j["values"] = values_json(keys, c.values);
    return j;
}

Json to_json(const GerbeFile& g) {
    Json j;
    j["kind"] = "gerbe";
    j["version"] = kFormatVersion;
    j["base"] = g.surjection.base;
    j["cover"] = g.surjection.cover;
    Json phi = Json::object();
    for (std::size_t y = 0; y < g.surjection.cover.size(); ++y) {
        phi[g.surjection.cover[y]] = g.surjection.base[g.surjection.phi[y]];
    }
    j["phi"] = phi;
    if (g.extension) {
        j["extension"] = to_json(*g.extension);
    } else {
        j["fiber_order"] = g.fiber_order;
        const FiniteGroupoid y2 = fiber_product_groupoid(g.surjection);
        std::vector<std::string> keys;
        for (const auto& t : nerve(y2, 2).tuples) keys.push_back(describe_nerve_tuple(y2, 2, t));
        j["encoding"] = values_json(keys, g.encoding->values);
    }
    return j;
}

Json to_json(const InstanceValue& value) {
    return std::visit([](const auto& v) { return to_json(v); }, value);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

}  // namespace dblext
