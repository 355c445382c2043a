#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dblext/errors.hpp"
#include "dblext/io.hpp"
#include "support.hpp"

using namespace dblext;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = FIXTURE_DIR;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::vector<fs::path> instance_fixtures() {
    std::vector<fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(kFixtures)) {
        if (e.is_regular_file() && e.path().extension() == ".json" &&
            e.path().parent_path().filename() != "mutations") {
            out.push_back(e.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string error_of(const std::string& text) {
    try {
        load_instance_text(text, kFixtures / "groupoids");
    } catch (const StructuralError& e) {
        return e.what();
    }
    return "";
}

const char* kZ2 = R"({"kind": "groupoid", "version": 1, "objects": ["*"],
  "arrows": [{"id": "0", "src": "*", "tgt": "*"}, {"id": "1", "src": "*", "tgt": "*"}],
  "mult": [["0","0","0"], ["0","1","1"], ["1","0","1"], ["1","1","0"]],
  "units": {"*": "0"}, "inv": {"0": "0", "1": "1"}})";

std::string replaced(std::string s, const std::string& from, const std::string& to) {
    s.replace(s.find(from), from.size(), to);
    return s;
}

}  // namespace

TEST_SUITE("io") {
    TEST_CASE("fixtures round trip through the canonical form") {
        const auto files = instance_fixtures();
        CHECK(files.size() >= 20);
        for (const auto& f : files) {
            CAPTURE(f.string());
            const Instance inst = load_instance(f);
            CHECK(inst.digest.size() == 64);
            const Json j = to_json(inst.value);
            const InstanceValue back = from_json(j);
            CHECK(kind_of(back) == inst.kind);
            CHECK(dump(to_json(back)) == dump(j));
        }
    }

    TEST_CASE("loaded fixtures equal the zoo") {
        CHECK(std::get<FiniteGroupoid>(load_instance(kFixtures / "groupoids/z2.json").value) == zoo::z2());
        CHECK(std::get<FiniteGroupoid>(load_instance(kFixtures / "groupoids/p3.json").value) == zoo::p3());
        CHECK(std::get<DoubleGroupoid>(load_instance(kFixtures / "doubles/gk.json").value) == zoo::gk());
        CHECK(std::get<CentralExtension>(load_instance(kFixtures / "extensions/e2.json").value) == zoo::e2());
        const FiniteGroupoid z2 = zoo::z2();
        CHECK(std::get<CentralExtension>(load_instance(kFixtures / "extensions/z2_sigma2.json").value) ==
              extension_from_cocycle(z2, 2, zoo::sigma2(z2)));
        const FiniteGroupoid k4 = zoo::k4();
        CHECK(std::get<CentralExtension>(load_instance(kFixtures / "extensions/k4_sigma_k.json").value) ==
              extension_from_cocycle(k4, 2, zoo::sigma_k(k4)));
        const auto f = std::get<DoubleExtensionFile>(load_instance(kFixtures / "double_extensions/pd2_e2.json").value);
        CHECK_FALSE(f.ebar.has_value());
        CHECK(f.modulus == 4);
    }

    TEST_CASE("text and file loading agree") {
        const Instance a = load_instance(kFixtures / "groupoids/z2.json");
        const Instance b = load_instance_text(slurp(kFixtures / "groupoids/z2.json"));
        CHECK(a.digest == b.digest);
        CHECK(a.digest == sha256_hex(slurp(kFixtures / "groupoids/z2.json")));
        CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    TEST_CASE("malformed input names the problem") {
        CHECK(error_of(kZ2).empty());
        CHECK(error_of(replaced(kZ2, R"(["1","1","0"])", R"(["1","1","zz"])")).find("zz") != std::string::npos);
        CHECK(error_of(replaced(kZ2, R"("version": 1)", R"("version": 2)")).find("version") != std::string::npos);
        CHECK(error_of(replaced(kZ2, R"("objects")", R"("colour": 1, "objects")")).find("colour") !=
              std::string::npos);
        CHECK(error_of(replaced(kZ2, R"("kind": "groupoid")", R"("kind": "monoid")")).find("monoid") !=
              std::string::npos);
        CHECK(error_of(replaced(kZ2, R"("inv")", R"("invs")")).find("inv") != std::string::npos);
        const std::string parse = error_of("{\n\"kind\": \"groupoid\",\n  oops\n}");
        CHECK(parse.find("line 3") != std::string::npos);
        CHECK_THROWS_AS(load_instance(kFixtures / "groupoids/missing.json"), StructuralError);
        CHECK(error_of(R"({"kind": "extension", "version": 1, "form": "cocycle", "base": "nowhere.json",
                           "fiber_order": 2, "sigma": {}})")
                  .find("nowhere.json") != std::string::npos);
    }

    TEST_CASE("references resolve relative to the referring file") {
        const Instance inst = load_instance(kFixtures / "double_extensions/gk_flagship.json");
        CHECK(inst.kind == "double_extension");
        const auto f = std::get<DoubleExtensionFile>(inst.value);
        const DoubleExtension flagship = zoo::gk_flagship();
        CHECK(f.d == flagship.d);
        CHECK(f.eh == flagship.eh);
        CHECK(f.ebar == flagship.ebar);
    }

    TEST_CASE("cochain files") {
        const auto c = std::get<CochainFile>(load_instance(kFixtures / "cochains/sigma2.json").value);
        CHECK(c.p == 2);
        CHECK_FALSE(c.q.has_value());
        CHECK(c.values == zoo::sigma2(zoo::z2()).values);
        const Json j = to_json(c);
        CHECK(j["values"].size() == 1);
        CHECK(j["values"]["1|1"] == "1/2");
    }

    TEST_CASE("regenerated fixtures are byte-identical") {
        const fs::path out = fs::temp_directory_path() / "dblext_fixture_regen";
        fs::remove_all(out);
        const std::string cmd = std::string("\"") + MAKE_FIXTURES + "\" \"" + out.string() + "\" > /dev/null";
        REQUIRE(std::system(cmd.c_str()) == 0);
        std::size_t compared = 0;
        for (const auto& e : fs::recursive_directory_iterator(kFixtures)) {
            if (!e.is_regular_file()) continue;
            const fs::path rel = fs::relative(e.path(), kFixtures);
            CAPTURE(rel.string());
            CHECK(slurp(e.path()) == slurp(out / rel));
            ++compared;
        }
        std::size_t generated = 0;
        for (const auto& e : fs::recursive_directory_iterator(out)) generated += e.is_regular_file();
        CHECK(generated == compared);
        fs::remove_all(out);
    }
}
