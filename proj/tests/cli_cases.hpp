#pragma once

// Command lines exercised by the reproducibility checks, relative to the
// fixture directory.

#include <sstream>
#include <string>
#include <vector>

#include "dblext/cli.hpp"

namespace support {

struct CliRun {
    int code = 0;
    std::string out;
    std::string err;
};

inline CliRun run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    CliRun r;
    r.code = dblext::run_command(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

inline std::vector<std::vector<std::string>> cli_cases(const std::string& dir) {
    const auto f = [&](const std::string& rel) { return dir + "/" + rel; };
    std::vector<std::vector<std::string>> cases = {
        {"validate", f("doubles/pd2.json")},
        {"validate", f("double_extensions/gk_flagship.json")},
        {"validate", f("mutations/pd2_functoriality.json")},
        {"nerve", f("groupoids/p3.json"), "--p", "2", "--verify"},
        {"binerve", f("doubles/pd2.json"), "--p", "2", "--q", "1", "--verify"},
        {"cohomology", f("groupoids/k4.json"), "--degree", "2", "--mod", "2"},
        {"cohomology", f("groupoids/cech.json"), "--degree", "0", "--integral"},
        {"cohomology", f("doubles/gk.json"), "--degree", "2", "--mod", "4"},
        {"curvature", f("extensions/e2.json")},
        {"extend", f("cochains/sigma_k.json"), "--mod", "2"},
        {"extend", f("cochains/z2_not_closed.json"), "--mod", "2"},
        {"equivalent", f("extensions/e2.json"), f("extensions/z2_sigma2.json")},
        {"equivalent", f("extensions/e2.json"), f("extensions/z2_trivial.json")},
        {"gerbe", f("gerbes/two_point.json")},
        {"gerbe", f("mutations/gerbe_condition.json")},
        {"solve-section", f("double_extensions/pd2_e2.json"), "--mod", "2"},
        {"solve-section", f("double_extensions/pd2_e2.json"), "--mod", "4"},
        {"double-cocycle", f("double_extensions/gk_flagship.json"), "--verify"},
        {"double-cocycle", f("double_extensions/pd2_e2_m4.json"), "--verify"},
        {"double-class", f("double_extensions/gk_flagship.json"), "--mod", "2"},
        {"double-class", f("double_extensions/gk_flagship.json"), "--mod", "4", "--classify"},
    };
    const std::size_t base = cases.size();
    for (std::size_t i = 0; i < base; ++i) {
        auto machine = cases[i];
        machine.push_back("--format");
        machine.push_back("machine");
        cases.push_back(machine);
    }
    return cases;
}

}  // namespace support
