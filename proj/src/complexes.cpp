#include "dblext/complexes.hpp"

#include <numeric>

#include "dblext/errors.hpp"

namespace dblext {

namespace {

int sign(int k) { return k % 2 == 0 ? 1 : -1; }

std::size_t require_index(const std::optional<std::size_t>& idx, const std::string& what) {
    if (!idx) {
        throw DomainError("face lands outside its level: " + what);
    }
    return *idx;
}

void check_length(std::size_t got, std::size_t want, const std::string& what) {
    if (got != want) {
        throw DomainError("cochain does not match its level " + what + ": " + std::to_string(got) +
                          " values for " + std::to_string(want) + " cells");
    }
}

std::string bidegree(int p, int q) { return "(" + std::to_string(p) + "," + std::to_string(q) + ")"; }

void require_closed(const CochainComplex& complex, int n, const std::vector<CircleValue>& c) {
    const auto dc = apply_coboundary(complex, n, c);
    for (std::size_t i = 0; i < dc.size(); ++i) {
        if (!dc[i].is_zero()) {
            throw PreconditionError("cochain is not closed", {complex.describe_cell(n + 1, i), dc[i].to_string()});
        }
    }
}

std::vector<std::int64_t> to_units(const CochainComplex& complex, int n, const std::vector<CircleValue>& c,
                                   std::int64_t m) {
    std::vector<std::int64_t> out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        auto k = c[i].in_units_of(m);
        if (!k) {
            throw DomainError("value " + c[i].to_string() + " is not a multiple of 1/" + std::to_string(m),
                              {complex.describe_cell(n, i)});
        }
        out[i] = *k;
    }
    return out;
}

}  // namespace

// NerveComplex -----------------------------------------------------------------------

NerveComplex::NerveComplex(FiniteGroupoid g, int cap) : g_(std::move(g)), cap_(cap) { g_.check_structure(); }

const NerveLevel& NerveComplex::level(int p) const {
    std::lock_guard lock(mutex_);
    auto it = cache_.find(p);
    if (it == cache_.end()) {
        it = cache_.emplace(p, nerve(g_, p, cap_)).first;
    }
    return it->second;
}

std::size_t NerveComplex::dimension(int n) const { return n < 0 ? 0 : level(n).size(); }

IntMatrix NerveComplex::coboundary(int n) const {
    IntMatrix a(dimension(n + 1), dimension(n));
    if (n < 0) {
        return a;
    }
    const auto& upper = level(n + 1);
    const auto& lower = level(n);
    for (std::size_t r = 0; r < upper.size(); ++r) {
        for (int i = 0; i <= n + 1; ++i) {
            const Tuple f = nerve_face(g_, n + 1, i, upper.tuples[r]);
            a(r, require_index(lower.index_of(f), describe_nerve_tuple(g_, n + 1, upper.tuples[r]))) += sign(i);
        }
    }
    return a;
}

std::string NerveComplex::describe_cell(int n, std::size_t index) const {
    return describe_nerve_tuple(g_, n, level(n).tuples.at(index));
}

// TotalComplex ---------------------------------------------------------------------------

TotalComplex::TotalComplex(DoubleGroupoid d, int cap) : d_(std::move(d)), cap_(cap) { d_.check_structure(); }

const BiNerveLevel& TotalComplex::level(int p, int q) const {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(p, q);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
        it = cache_.emplace(key, binerve(d_, p, q, cap_)).first;
    }
    return it->second;
}

std::size_t TotalComplex::offset(int p, int q) const {
    std::size_t off = 0;
    for (int pp = p + q; pp > p; --pp) {
        off += level(pp, p + q - pp).size();
    }
    return off;
}

std::size_t TotalComplex::dimension(int n) const {
    if (n < 0) {
        return 0;
    }
    std::size_t dim = 0;
    for (int p = n; p >= 0; --p) {
        dim += level(p, n - p).size();
    }
    return dim;
}

IntMatrix TotalComplex::coboundary(int n) const {
    IntMatrix a(dimension(n + 1), dimension(n));
    if (n < 0) {
        return a;
    }
    for (int p = n + 1; p >= 0; --p) {
        const int q = n + 1 - p;
        const auto& lvl = level(p, q);
        const std::size_t row0 = offset(p, q);
        for (std::size_t c = 0; c < lvl.size(); ++c) {
            const auto& cell = lvl.cells[c];
            if (p >= 1) {
                const auto& target = level(p - 1, q);
                const std::size_t col0 = offset(p - 1, q);
                for (int i = 0; i <= p; ++i) {
                    const Tuple f = binerve_face(d_, p, q, Axis::horizontal, i, cell);
                    a(row0 + c, col0 + require_index(target.index_of(f), describe_binerve_cell(d_, p, q, cell))) +=
                        sign(i);
                }
            }
            if (q >= 1) {
                const auto& target = level(p, q - 1);
                const std::size_t col0 = offset(p, q - 1);
                for (int i = 0; i <= q; ++i) {
                    const Tuple f = binerve_face(d_, p, q, Axis::vertical, i, cell);
                    a(row0 + c, col0 + require_index(target.index_of(f), describe_binerve_cell(d_, p, q, cell))) +=
                        sign(p + i);
                }
            }
        }
    }
    return a;
}

std::string TotalComplex::describe_cell(int n, std::size_t index) const {
    for (int p = n; p >= 0; --p) {
        const int q = n - p;
        const auto& lvl = level(p, q);
        if (index < lvl.size()) {
            return bidegree(p, q) + " " + describe_binerve_cell(d_, p, q, lvl.cells[index]);
        }
        index -= lvl.size();
    }
    throw DomainError("cell index out of range in total degree " + std::to_string(n));
}

// Cochains --------------------------------------------------------------------------------

const std::vector<CircleValue>* BiCochain::component(int p, int q) const {
    auto it = components.find({p, q});
    return it == components.end() ? nullptr : &it->second;
}

bool BiCochain::is_zero() const {
    for (const auto& [key, values] : components) {
        for (const auto& v : values) {
            if (!v.is_zero()) {
                return false;
            }
        }
    }
    return true;
}

Cochain zero_cochain(const NerveComplex& c, int p) { return Cochain{p, std::vector<CircleValue>(c.dimension(p))}; }

Cochain differential(const NerveComplex& complex, const Cochain& c) {
    if (c.p < 0) {
        throw DomainError("negative cochain degree");
    }
    check_length(c.values.size(), complex.level(c.p).size(), "p=" + std::to_string(c.p));
    const auto& g = complex.groupoid();
    const auto& upper = complex.level(c.p + 1);
    const auto& lower = complex.level(c.p);
    Cochain out{c.p + 1, std::vector<CircleValue>(upper.size())};
    for (std::size_t r = 0; r < upper.size(); ++r) {
        CircleValue sum;
        for (int i = 0; i <= c.p + 1; ++i) {
            const Tuple f = nerve_face(g, c.p + 1, i, upper.tuples[r]);
            const auto& v = c.values[require_index(lower.index_of(f), describe_nerve_tuple(g, c.p + 1, upper.tuples[r]))];
            sum += i % 2 == 0 ? v : -v;
        }
        out.values[r] = sum;
    }
    return out;
}

Cochain differential(const FiniteGroupoid& g, const Cochain& c) { return differential(NerveComplex(g), c); }

BiCochain bidifferential(const TotalComplex& complex, const BiCochain& c, Axis axis) {
    const auto& d = complex.double_groupoid();
    BiCochain out;
    for (const auto& [key, values] : c.components) {
        const auto [p, q] = key;
        const auto& source = complex.level(p, q);
        check_length(values.size(), source.size(), bidegree(p, q));
        const int tp = axis == Axis::horizontal ? p + 1 : p;
        const int tq = axis == Axis::horizontal ? q : q + 1;
        const int faces = axis == Axis::horizontal ? tp : tq;
        const auto& target = complex.level(tp, tq);
        std::vector<CircleValue> result(target.size());
        for (std::size_t r = 0; r < target.size(); ++r) {
            CircleValue sum;
            for (int i = 0; i <= faces; ++i) {
                const Tuple f = binerve_face(d, tp, tq, axis, i, target.cells[r]);
                const auto& v =
                    values[require_index(source.index_of(f), describe_binerve_cell(d, tp, tq, target.cells[r]))];
                const int s = axis == Axis::horizontal ? sign(i) : sign(p + i);
                sum += s > 0 ? v : -v;
            }
            result[r] = sum;
        }
        out.components[{tp, tq}] = std::move(result);
    }
    return out;
}

BiCochain total_differential(const TotalComplex& complex, const BiCochain& c) {
    BiCochain out = bidifferential(complex, c, Axis::horizontal);
    BiCochain vertical = bidifferential(complex, c, Axis::vertical);
    for (auto& [key, values] : vertical.components) {
        auto it = out.components.find(key);
        if (it == out.components.end()) {
            out.components.emplace(key, std::move(values));
        } else {
            for (std::size_t i = 0; i < values.size(); ++i) {
                it->second[i] += values[i];
            }
        }
    }
    return out;
}

std::vector<CircleValue> flatten(const TotalComplex& complex, int n, const BiCochain& c) {
    std::vector<CircleValue> out;
    for (int p = n; p >= 0; --p) {
        const int q = n - p;
        const std::size_t size = complex.level(p, q).size();
        if (const auto* comp = c.component(p, q)) {
            check_length(comp->size(), size, bidegree(p, q));
            out.insert(out.end(), comp->begin(), comp->end());
        } else {
            out.resize(out.size() + size);
        }
    }
    for (const auto& [key, values] : c.components) {
        if (key.first + key.second != n) {
            throw DomainError("bicochain has a component " + bidegree(key.first, key.second) +
                              " outside total degree " + std::to_string(n));
        }
    }
    return out;
}

BiCochain unflatten(const TotalComplex& complex, int n, const std::vector<CircleValue>& values) {
    check_length(values.size(), complex.dimension(n), "total degree " + std::to_string(n));
    BiCochain out;
    std::size_t pos = 0;
    for (int p = n; p >= 0; --p) {
        const std::size_t size = complex.level(p, n - p).size();
        out.components[{p, n - p}] = std::vector<CircleValue>(values.begin() + pos, values.begin() + pos + size);
        pos += size;
    }
    return out;
}

std::vector<CircleValue> apply_coboundary(const CochainComplex& complex, int n, const std::vector<CircleValue>& c) {
    check_length(c.size(), complex.dimension(n), "degree " + std::to_string(n));
    const IntMatrix a = complex.coboundary(n);
    std::vector<CircleValue> out(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        CircleValue sum;
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a(i, j) != 0 && !c[j].is_zero()) {
                sum += a(i, j) * c[j];
            }
        }
        out[i] = sum;
    }
    return out;
}

// Cohomology ------------------------------------------------------------------------------

Coefficients Coefficients::mod(std::int64_t m) {
    if (m < 1) {
        throw DomainError("modulus must be at least 1");
    }
    return Coefficients{m};
}

BigInt CohomologyResult::order() const {
    if (free_rank > 0) {
        return 0;
    }
    BigInt n = 1;
    for (const auto& d : invariant_factors) {
        n *= d;
    }
    return n;
}

CohomologyResult cohomology(const CochainComplex& complex, int n, Coefficients coefficients) {
    if (n < 0) {
        throw DomainError("negative cohomological degree");
    }
    if (coefficients.modulus < 0) {
        throw DomainError("modulus must be at least 1");
    }
    const IntMatrix prev = complex.coboundary(n - 1);
    const IntMatrix next = complex.coboundary(n);
    const std::size_t k = complex.dimension(n);
    CohomologyResult out;
    out.degree = n;
    out.modulus = coefficients.modulus;
    if (coefficients.is_integral()) {
        HomologyData h = homology_integral(prev, next, k);
        out.invariant_factors = std::move(h.invariant_factors);
        out.free_rank = h.free_rank;
        return out;
    }
    HomologyData h = homology_mod(prev, next, k, coefficients.modulus);
    out.invariant_factors = std::move(h.invariant_factors);
    for (const auto& rep : h.representatives) {
        std::vector<CircleValue> values;
        values.reserve(rep.size());
        for (std::int64_t v : rep) {
            values.push_back(CircleValue::units(v, coefficients.modulus));
        }
        out.representatives.push_back(std::move(values));
    }
    return out;
}

CoboundaryResult solve_coboundary(const CochainComplex& complex, int n, const std::vector<CircleValue>& c,
                                  std::int64_t m) {
    if (m < 1) {
        throw DomainError("modulus must be at least 1");
    }
    require_closed(complex, n, c);
    const auto units = to_units(complex, n, c, m);
    const ModSolution sol = solve_mod(complex.coboundary(n - 1), units, m);
    CoboundaryResult out;
    out.modulus = m;
    out.solvable = sol.solvable;
    out.certificate = sol.certificate;
    out.solution_count = sol.count;
    for (std::int64_t v : sol.particular) {
        out.witness.push_back(CircleValue::units(v, m));
    }
    return out;
}

std::optional<Cochain> is_coboundary(const NerveComplex& complex, const Cochain& c, std::int64_t m) {
    auto r = solve_coboundary(complex, c.p, c.values, m);
    if (!r.solvable) {
        return std::nullopt;
    }
    return Cochain{c.p - 1, std::move(r.witness)};
}

std::optional<BiCochain> is_coboundary(const TotalComplex& complex, int n, const BiCochain& c, std::int64_t m) {
    auto r = solve_coboundary(complex, n, flatten(complex, n, c), m);
    if (!r.solvable) {
        return std::nullopt;
    }
    if (n == 0) {
        return BiCochain{};
    }
    return unflatten(complex, n - 1, r.witness);
}

std::int64_t class_order(const CochainComplex& complex, int n, const std::vector<CircleValue>& c, std::int64_t m) {
    if (m < 1) {
        throw DomainError("modulus must be at least 1");
    }
    require_closed(complex, n, c);
    const auto units = to_units(complex, n, c, m);
    SmithOptions opt;
    opt.row_transform = true;
    const SmithForm s = smith_normal_form(complex.coboundary(n - 1), opt);
    return class_order_mod(s, units, m);
}

BocksteinResult bockstein(const CochainComplex& complex, int n, const std::vector<CircleValue>& c) {
    require_closed(complex, n, c);
    std::int64_t l = 1;
    for (const auto& v : c) {
        l = std::lcm(l, v.den());
    }
    std::vector<BigInt> lifted(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
        lifted[j] = BigInt(c[j].num()) * (l / c[j].den());
    }
    const IntMatrix a = complex.coboundary(n);
    BocksteinResult out;
    out.degree = n + 1;
    out.cocycle.resize(a.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        BigInt sum = 0;
        for (std::size_t j = 0; j < a.cols; ++j) {
            if (a(i, j) != 0) {
                sum += lifted[j] * a(i, j);
            }
        }
        if (sum % l != 0) {
            throw std::logic_error("bockstein: lift of a closed cochain is not integral");
        }
        out.cocycle[i] = sum / l;
    }
    IntegralImage img = integral_image(a, out.cocycle);
    out.is_coboundary = img.in_image;
    out.order = img.order;
    out.witness = std::move(img.witness);
    return out;
}

std::optional<AntisymmetryWitness> antisymmetry_witness(const NerveComplex& complex, const Cochain& c) {
    if (c.p != 2) {
        throw DomainError("antisymmetry is defined for 2-cochains");
    }
    const auto& lvl = complex.level(2);
    check_length(c.values.size(), lvl.size(), "p=2");
    const auto& g = complex.groupoid();
    const int n = static_cast<int>(g.arrow_count());
    auto loop = [&](int x) { return g.src[x] == g.tgt[x]; };
    for (int x = 0; x < n; ++x) {
        for (int y = x + 1; y < n; ++y) {
            if (!loop(x) || !loop(y) || g.src[x] != g.src[y] || g.product(x, y) != g.product(y, x)) {
                continue;
            }
            const Tuple xy{x, y}, yx{y, x};
            const CircleValue alt = c.values[*lvl.index_of(xy)] - c.values[*lvl.index_of(yx)];
            if (!alt.is_zero()) {
                return AntisymmetryWitness{x, y, alt};
            }
        }
    }
    return std::nullopt;
}

bool antisymmetry_nondegenerate(const NerveComplex& complex, const Cochain& c, int object) {
    const auto& lvl = complex.level(2);
    check_length(c.values.size(), lvl.size(), "p=2");
    const auto& g = complex.groupoid();
    std::vector<int> loops;
    for (int x = 0; x < static_cast<int>(g.arrow_count()); ++x) {
        if (g.src[x] == object && g.tgt[x] == object) {
            loops.push_back(x);
        }
    }
    for (int x : loops) {
        if (x == g.unit[object]) {
            continue;
        }
        bool paired = false;
        for (int y : loops) {
            if (g.product(x, y) != g.product(y, x)) {
                continue;
            }
            const Tuple xy{x, y}, yx{y, x};
            if (!(c.values[*lvl.index_of(xy)] - c.values[*lvl.index_of(yx)]).is_zero()) {
                paired = true;
                break;
            }
        }
        if (!paired) {
            return false;
        }
    }
    return true;
}

}  // namespace dblext
