#include "dblext/zoo.hpp"

namespace dblext::zoo {

FiniteGroupoid p3() { return build_pair_groupoid({"0", "1", "2"}); }
FiniteGroupoid z2() { return one_object_groupoid(cyclic_group(2)); }
FiniteGroupoid k4() { return one_object_groupoid(klein_four_group()); }
FiniteGroupoid cech() { return build_cech_groupoid({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}}); }
FiniteGroupoid action_swap() { return build_action_groupoid(cyclic_group(2), {"a", "b"}, {0, 1, 1, 0}); }

DoubleGroupoid pd2() { return build_pair_double(z2()); }

DoubleGroupoid gk() {
    return build_g_groupoid_double(build_unit_groupoid({"*"}), klein_four_group(),
                                   GroupoidAction{{0, 0, 0, 0}, {0, 0, 0, 0}});
}

DoubleGroupoid gh42() { return build_group_subgroup_double(cyclic_group(4), {0, 2}); }

std::vector<Named> groupoids() {
    return {{"P3", p3()}, {"Z2", z2()}, {"K4", k4()}, {"C", cech()}, {"A", action_swap()}};
}

std::vector<NamedDouble> doubles() { return {{"PD2", pd2()}, {"GK", gk()}, {"GH42", gh42()}}; }

Cochain sigma2(const FiniteGroupoid& g) {
    Cochain c{2, {}};
    for (const auto& t : nerve(g, 2).tuples) {
        c.values.push_back(g.arrows[t[0]] == "1" && g.arrows[t[1]] == "1" ? CircleValue::fraction(1, 2)
                                                                           : CircleValue());
    }
    return c;
}

Cochain sigma_k(const FiniteGroupoid& g) {
    Cochain c{2, {}};
    for (const auto& t : nerve(g, 2).tuples) {
        const int a2 = g.arrows[t[0]][1] - '0';
        const int b1 = g.arrows[t[1]][0] - '0';
        c.values.push_back(CircleValue::fraction(a2 * b1, 2));
    }
    return c;
}

CentralExtension e2() {
    CentralExtension e;
    e.base = z2();
    e.fiber_order = 2;
    e.total = one_object_groupoid(cyclic_group(4));
    e.total.objects = e.base.objects;
    for (int k = 0; k < 4; ++k) {
        e.proj.push_back(k % 2);
        e.act.push_back(k);
        e.act.push_back((k + 2) % 4);
    }
    e.check_structure();
    return e;
}

CentralExtension trivial_extension(const FiniteGroupoid& base, std::int64_t n) {
    Cochain zero{2, std::vector<CircleValue>(nerve(base, 2).size())};
    return extension_from_cocycle(base, n, zero);
}

DoubleExtension gk_flagship() {
    const DoubleGroupoid d = gk();
    CentralExtension eh = extension_from_cocycle(d.horizontal, 2, sigma_k(d.horizontal));
    CentralExtension ev = trivial_extension(d.vertical, 2);
    return make_double_extension(d, std::move(ev), std::move(eh), std::vector<CircleValue>(d.square_count()));
}

DoubleExtensionFile pd2_e2() {
    DoubleExtensionFile f;
    f.d = pd2();
    f.ev = e2();
    f.eh = trivial_extension(f.d.horizontal, 2);
    f.modulus = 4;
    return f;
}

}  // namespace dblext::zoo
