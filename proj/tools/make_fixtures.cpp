// Writes the committed fixture tree: zoo instances, extensions, double
// extensions, cochains, gerbes and the mutation catalog.
//
//   make_fixtures <output-dir>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "dblext/errors.hpp"
#include "dblext/zoo.hpp"

namespace fs = std::filesystem;
using namespace dblext;

namespace {

class Writer {
public:
    explicit Writer(fs::path root) : root_(std::move(root)) {}

    // Nested objects equal to an already written file become references to it.
    void write(const std::string& rel, Json j, bool register_file = true) {
        linkify(j, true);
        const fs::path path = root_ / rel;
        fs::create_directories(path.parent_path());
        std::ofstream(path, std::ios::binary) << dump(j);
        if (register_file) written_.emplace(canonical_key(j), "../" + rel);
    }

    fs::path path(const std::string& rel) const { return root_ / rel; }

private:
    static std::string canonical_key(const Json& j) { return j.dump(); }

    void linkify(Json& j, bool top) {
        if (!top && j.is_object() && j.contains("kind")) {
            auto it = written_.find(canonical_key(j));
            if (it != written_.end()) {
                j = it->second;
                return;
            }
        }
        if (j.is_structured()) {
            for (auto& v : j) linkify(v, false);
        }
    }

    fs::path root_;
    std::map<std::string, std::string> written_;
};

Json cochain_json(const FiniteGroupoid& g, const Cochain& c) { return to_json(CochainFile{g, c.p, std::nullopt, c.values}); }

Json cocycle_extension(const FiniteGroupoid& base, std::int64_t n, const Cochain& sigma) {
    Json j;
    j["kind"] = "extension";
    j["version"] = kFormatVersion;
    j["base"] = to_json(base);
    j["fiber_order"] = n;
    j["form"] = "cocycle";
    std::vector<std::string> keys;
    for (const auto& t : nerve(base, 2).tuples) keys.push_back(describe_nerve_tuple(base, 2, t));
    j["sigma"] = cochain_values_json(keys, sigma.values);
    return j;
}

// S3 over Z/2 by the sign, fiber Z/3 acting by right multiplication with a
// 3-cycle: a valid total groupoid with a free transitive action that is not central.
Json noncentral_extension() {
    const GroupTable s3 = symmetric_group(3);
    CentralExtension e;
    e.base = zoo::z2();
    e.fiber_order = 3;
    e.total = one_object_groupoid(s3);
    e.total.objects = e.base.objects;
    auto parity = [&](int x) {
        const std::string& p = s3.elements[x];
        int inversions = 0;
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
        return inversions % 2;
    };
    int r = -1;
    for (int x = 0; x < static_cast<int>(s3.order()); ++x) {
        if (x != s3.identity() && parity(x) == 0) {
            r = x;
            break;
        }
    }
    for (int x = 0; x < static_cast<int>(s3.order()); ++x) {
        e.proj.push_back(parity(x));
        int y = x;
        for (int k = 0; k < 3; ++k) {
            e.act.push_back(y);
            y = s3.op(y, r);
        }
    }
    return to_json(e);
}

Json& mult_entry(Json& mult, const std::string& x, const std::string& y) {
    for (auto& row : mult) {
        if (row[0] == x && row[1] == y) return row;
    }
    throw std::runtime_error("no product " + x + " " + y);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_fixtures <output-dir>\n";
        return 2;
    }
    Writer w(argv[1]);

    // Groupoids and doubles.
    w.write("groupoids/p3.json", to_json(zoo::p3()));
    w.write("groupoids/z2.json", to_json(zoo::z2()));
    w.write("groupoids/k4.json", to_json(zoo::k4()));
    w.write("groupoids/cech.json", to_json(zoo::cech()));
    w.write("groupoids/action.json", to_json(zoo::action_swap()));
    w.write("groupoids/z4.json", to_json(one_object_groupoid(cyclic_group(4))));
    w.write("doubles/pd2.json", to_json(zoo::pd2()));
    w.write("doubles/gk.json", to_json(zoo::gk()));
    w.write("doubles/gh42.json", to_json(zoo::gh42()));
    w.write("doubles/constant.json", to_json(build_constant_double({"a", "b"})));

    // Extensions.
    const FiniteGroupoid z2 = zoo::z2();
    const FiniteGroupoid k4 = zoo::k4();
    const DoubleGroupoid pd2 = zoo::pd2();
    const DoubleGroupoid gk = zoo::gk();
    if (!(gk.horizontal == k4)) throw std::runtime_error("GK horizontal edge groupoid differs from K4");
    w.write("extensions/e2.json", to_json(zoo::e2()));
    w.write("extensions/z2_trivial.json", to_json(zoo::trivial_extension(z2, 2)));
    w.write("extensions/z2_sigma2.json", cocycle_extension(z2, 2, zoo::sigma2(z2)));
    w.write("extensions/k4_sigma_k.json", cocycle_extension(k4, 2, zoo::sigma_k(k4)));
    w.write("extensions/pd2_horizontal_trivial.json", to_json(zoo::trivial_extension(pd2.horizontal, 2)));
    w.write("extensions/gk_vertical_trivial.json", to_json(zoo::trivial_extension(gk.vertical, 2)));

    // Cochains.
    w.write("cochains/sigma2.json", cochain_json(z2, zoo::sigma2(z2)));
    w.write("cochains/sigma_k.json", cochain_json(k4, zoo::sigma_k(k4)));
    {
        Cochain bad{2, std::vector<CircleValue>(nerve(z2, 2).size())};
        bad.values[1] = CircleValue::fraction(1, 2);  // (0,1) alone
        w.write("cochains/z2_not_closed.json", cochain_json(z2, bad));
    }

    // Double extensions.
    {
        Json j;
        j["kind"] = "double_extension";
        j["version"] = kFormatVersion;
        j["double"] = "../doubles/gk.json";
        j["ev"] = "../extensions/gk_vertical_trivial.json";
        j["eh"] = "../extensions/k4_sigma_k.json";
        j["ebar"] = Json::object();
        w.write("double_extensions/gk_flagship.json", j);
        Json pd = j;
        pd["double"] = "../doubles/pd2.json";
        pd["ev"] = "../extensions/e2.json";
        pd["eh"] = "../extensions/pd2_horizontal_trivial.json";
        pd["ebar"] = "solve";
        pd["mod"] = 4;
        w.write("double_extensions/pd2_e2.json", pd);
        pd["ebar"] = Json{{"(0,1)", "1/4"}, {"(1,0)", "3/4"}};
        w.write("double_extensions/pd2_e2_m4.json", pd);
    }

    // Gerbes.
    {
        Json g;
        g["kind"] = "gerbe";
        g["version"] = kFormatVersion;
        g["base"] = Json::array({"*"});
        g["cover"] = Json::array({"1", "2"});
        g["phi"] = Json{{"1", "*"}, {"2", "*"}};
        g["fiber_order"] = 2;
        const Surjection phi{{"*"}, {"1", "2"}, {0, 0}};
        const FiniteGroupoid y2 = fiber_product_groupoid(phi);
        Cochain lambda{1, std::vector<CircleValue>(y2.arrow_count())};
        lambda.values[*y2.find_arrow("(1,2)")] = CircleValue::fraction(1, 2);
        const Cochain enc = differential(y2, lambda);
        std::vector<std::string> keys;
        for (const auto& t : nerve(y2, 2).tuples) keys.push_back(describe_nerve_tuple(y2, 2, t));
        g["encoding"] = cochain_values_json(keys, enc.values);
        w.write("gerbes/two_point.json", g);
        Cochain bad = enc;
        bad.values[0] += CircleValue::fraction(1, 2);
        g["encoding"] = cochain_values_json(keys, bad.values);
        w.write("mutations/gerbe_condition.json", g, false);

        Json c;
        c["kind"] = "gerbe";
        c["version"] = kFormatVersion;
        c["base"] = Json::array({"a", "b", "c"});
        c["cover"] = Json::array({"a@0", "b@0", "b@1", "c@1"});
        c["phi"] = Json{{"a@0", "a"}, {"b@0", "b"}, {"b@1", "b"}, {"c@1", "c"}};
        c["fiber_order"] = 2;
        c["encoding"] = Json::object();
        w.write("gerbes/cech_trivial.json", c);
    }

    // Mutation catalog: one corrupted entry per file, with the axiom it breaks.
    Json catalog = Json::array();
    auto mutate = [&](const std::string& name, const std::string& target, const std::string& axiom, Json j) {
        w.write("mutations/" + name + ".json", std::move(j), false);
        catalog.push_back(Json{{"file", name + ".json"}, {"target", target}, {"axiom", axiom}});
    };
    {
        Json j = to_json(zoo::p3());
        mult_entry(j["mult"], "(0,1)", "(1,2)")[2] = "(0,1)";
        mutate("p3_tgt_of_product", "groupoid", "tgt of product", j);
    }
    {
        Json j = to_json(zoo::p3());
        mult_entry(j["mult"], "(0,1)", "(1,2)")[2] = "(1,2)";
        mutate("p3_src_of_product", "groupoid", "src of product", j);
    }
    {
        Json j = to_json(zoo::p3());
        j["mult"].push_back(Json::array({"(0,1)", "(0,1)", "(0,1)"}));
        mutate("p3_composability", "groupoid", "composability domain", j);
    }
    {
        Json j = to_json(one_object_groupoid(cyclic_group(4)));
        mult_entry(j["mult"], "1", "1")[2] = "0";
        mutate("z4_associativity", "groupoid", "associativity", j);
    }
    {
        Json j = to_json(z2);
        j["inv"]["1"] = "0";
        mutate("z2_inverses", "groupoid", "inverses", j);
    }
    {
        Json j = to_json(k4);
        j["units"]["*"] = "01";
        mutate("k4_units", "groupoid", "units", j);
    }
    {
        Json j = to_json(zoo::e2());
        j["act"]["1"] = Json::array({"1", "1"});
        mutate("e2_fiber_freeness", "extension", "fiber freeness", j);
    }
    {
        Json j = to_json(zoo::e2());
        j["proj"]["2"] = "1";
        mutate("e2_projection", "extension", "projection morphism", j);
    }
    mutate("s3_centrality", "extension", "centrality", noncentral_extension());
    {
        Json j = to_json(pd2);
        mult_entry(j["mH"], "(0,1)", "(1,0)")[2] = "(0,0)";
        mutate("pd2_functoriality", "double groupoid", "functoriality", j);
    }
    {
        Json j = to_json(build_constant_double({"a", "b"}));
        j["squares"][0]["sV"] = j["squares"][1]["sV"];
        mutate("constant_corner_commutation", "double groupoid", "corner commutation", j);
    }
    {
        Json j = to_json(pd2);
        j["unitV"]["0"] = "(1,1)";
        mutate("pd2_vertical_units", "double groupoid", "vertical structure: units", j);
    }
    {
        Json j = Json::parse(std::ifstream(w.path("double_extensions/gk_flagship.json")));
        j["ebar"] = Json{{gk.squares[0], "1/2"}};
        mutate("gk_flagship_ebar", "double extension", "vertical compatibility", j);
    }
    {
        Json j = Json::parse(std::ifstream(w.path("double_extensions/pd2_e2_m4.json")));
        j["ebar"] = Json::object();
        mutate("pd2_e2_zero_ebar", "double extension", "vertical compatibility", j);
    }
    {
        Json j = Json::parse(std::ifstream(w.path("double_extensions/pd2_e2_m4.json")));
        j["ebar"]["(0,1)"] = "3/4";
        mutate("pd2_e2_horizontal", "double extension", "horizontal compatibility", j);
    }
    catalog.push_back(Json{{"file", "gerbe_condition.json"}, {"target", "gerbe"}, {"axiom", "gerbe condition"}});
    std::ofstream(w.path("mutations/catalog.json"), std::ios::binary) << dump(catalog);
    return 0;
}
