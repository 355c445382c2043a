#include <doctest.h>

#include <fstream>

#include "cli_cases.hpp"
#include "dblext/io.hpp"

using namespace dblext;

namespace {

const std::string kFixtures = FIXTURE_DIR;

std::string fx(const std::string& rel) { return kFixtures + "/" + rel; }

std::vector<std::string> with(std::vector<std::string> args, std::initializer_list<std::string> more) {
    args.insert(args.end(), more);
    return args;
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("exit codes") {
        CHECK(support::run_cli({"validate", fx("doubles/pd2.json")}).code == 0);
        CHECK(support::run_cli({"validate", fx("mutations/p3_tgt_of_product.json")}).code == 1);
        CHECK(support::run_cli({"solve-section", fx("double_extensions/pd2_e2.json"), "--mod", "2"}).code == 1);
        CHECK(support::run_cli({"solve-section", fx("double_extensions/pd2_e2.json"), "--mod", "4"}).code == 0);
        CHECK(support::run_cli({"extend", fx("cochains/z2_not_closed.json"), "--mod", "2"}).code == 1);
        CHECK(support::run_cli({"validate", fx("groupoids/missing.json")}).code == 2);
        CHECK(support::run_cli({"frobnicate", fx("groupoids/z2.json")}).code == 2);
        CHECK(support::run_cli({"nerve", fx("groupoids/z2.json"), "--p", "40"}).code == 2);
        CHECK(support::run_cli({"validate"}).code == 2);
        CHECK(support::run_cli({"--help"}).code == 0);
    }

    TEST_CASE("every catalogued mutation is rejected with its axiom") {
        std::ifstream in(fx("mutations/catalog.json"));
        const Json catalog = Json::parse(in);
        CHECK(catalog.size() >= 10);
        for (const auto& entry : catalog) {
            const std::string file = entry["file"];
            CAPTURE(file);
            const auto r = support::run_cli({"validate", fx("mutations/" + file), "--format", "machine"});
            CHECK(r.code == 1);
            const Json report = Json::parse(r.out);
            bool named = false;
            for (const auto& v : report["result"]["violations"]) named = named || v["axiom"] == entry["axiom"];
            CHECK(named);
        }
    }

    TEST_CASE("double-cocycle --verify reports zero residuals") {
        const auto r = support::run_cli(
            {"double-cocycle", fx("double_extensions/gk_flagship.json"), "--verify", "--format", "machine"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["status"] == "ok");
        const Json& res = j["result"]["residuals"];
        CHECK(res.size() == 4);
        for (const char* b : {"(3,0)", "(2,1)", "(1,2)", "(0,3)"}) {
            CAPTURE(b);
            REQUIRE(res.contains(b));
            CHECK(res[b]["nonzero"] == 0);
        }
    }

    TEST_CASE("solve-section over Z/2 prints a certificate") {
        const auto r = support::run_cli(
            {"solve-section", fx("double_extensions/pd2_e2.json"), "--mod", "2", "--format", "machine"});
        REQUIRE(r.code == 1);
        const Json j = Json::parse(r.out);
        CHECK(j["status"] == "fail");
        CHECK_FALSE(j["result"]["certificate"].empty());
    }

    TEST_CASE("reports are byte-identical across runs and thread counts") {
        for (const auto& args : support::cli_cases(kFixtures)) {
            CAPTURE(args.front());
            CAPTURE(args[1]);
            const auto a = support::run_cli(args);
            const auto b = support::run_cli(args);
            const auto c = support::run_cli(with(args, {"--threads", "4"}));
            CHECK(a.code == b.code);
            CHECK(a.out == b.out);
            CHECK(a.code == c.code);
            CHECK(a.out == c.out);
            CHECK_FALSE(a.out.empty());
        }
    }

    TEST_CASE("reports name inputs by file name and digest") {
        const auto r = support::run_cli({"curvature", fx("extensions/e2.json"), "--format", "machine"});
        const Json j = Json::parse(r.out);
        CHECK(j["tool"] == "dblext");
        CHECK(j["inputs"][0]["file"] == "e2.json");
        CHECK(j["inputs"][0]["kind"] == "extension");
        CHECK(j["inputs"][0]["sha256"].get<std::string>().size() == 64);
    }
}
