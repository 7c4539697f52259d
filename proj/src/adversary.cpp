#include "harmonic/adversary.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace harmonic {

namespace {

const Rational kOne(1);

// Closed interval over the rationals.
struct Interval {
    Rational lo, hi;
    Interval() = default;
    Interval(const Rational& v) : lo(v), hi(v) {}
    Interval(const Rational& a, const Rational& b) : lo(a), hi(b) {}
    Rational mag() const { return rmax(lo.abs(), hi.abs()); }
};
Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator*(const Interval& a, const Interval& b) {
    Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}
Interval operator/(const Interval& a, const Interval& b) {
    if (b.lo.sign() <= 0 && b.hi.sign() >= 0) throw std::domain_error("interval division by zero");
    return a * Interval(kOne / b.hi, kOne / b.lo);
}

// Forward-mode derivative in one direction.
template <class T>
struct Dual {
    T v, d;
    Dual() = default;
    Dual(const Rational& c) : v(c), d(Rational(0)) {}
    Dual(T a, T b) : v(std::move(a)), d(std::move(b)) {}
};
template <class T> Dual<T> operator+(const Dual<T>& a, const Dual<T>& b) { return {a.v + b.v, a.d + b.d}; }
template <class T> Dual<T> operator-(const Dual<T>& a, const Dual<T>& b) { return {a.v - b.v, a.d - b.d}; }
template <class T> Dual<T> operator*(const Dual<T>& a, const Dual<T>& b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
template <class T> Dual<T> operator/(const Dual<T>& a, const Dual<T>& b) {
    return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)};
}

template <class T>
T c(long p, long q = 1) { return T(Rational(p, q)); }

// Mixed input: chi(q^0) = 1, chi(q^1), chi(q^2) scaled by `scale`.
template <class T>
T mixed(const T& w0, const T& a2, const T& a3, long scale) {
    T one = c<T>(1);
    T wq = one + (one - a2) / c<T>(2) + a2;
    T c1 = c<T>(scale) * (one - a2 - a2 * a3) / (one + a2);
    T c2 = c<T>(scale) * a3;
    return (w0 + (c1 + c2) * wq) / (one + c1 + c2);
}

template <class T>
std::vector<T> inputs_of(int id, const std::vector<T>& a) {
    T one = c<T>(1);
    std::vector<T> out;
    if (id == 2) {
        const T &a2 = a[0], &a3 = a[1], &a4 = a[2];
        out.push_back(c<T>(31, 28) + c<T>(2) * a3 + (one - a4) / c<T>(6) + a4 / c<T>(2));
        out.push_back(one + (one - a2) / c<T>(2) + c<T>(1, 6));
        out.push_back(one + (one - a2) / c<T>(2) + (one - a4) / c<T>(6) + c<T>(1, 42));
        T w0 = c<T>(2) * (one + a2) / c<T>(2) + (one - a3) / c<T>(3) + c<T>(1, 12);
        out.push_back(mixed(w0, a2, a3, 2));
    } else if (id == 1) {
        const T &a2 = a[0], &a3 = a[1];
        out.push_back(one + (one - a2) / c<T>(2) + (one - a3) / c<T>(6) + c<T>(1, 42));
        out.push_back((one - a3) + c<T>(6) * a3 + c<T>(1, 7));
        T w0 = c<T>(2) * (one + a2) / c<T>(2) + c<T>(2) * (one - a3) / c<T>(6) + c<T>(1, 21);
        out.push_back(mixed(w0, a2, a3, 4));
    } else {
        const T &a2 = a[0], &a3 = a[1];
        out.push_back(one + (one - a2) / c<T>(2) + (one - a3) / c<T>(6) + c<T>(1, 42));
        out.push_back(c<T>(2) * (one + a2) / c<T>(2) + c<T>(2) * (one + a3) / c<T>(6) + c<T>(1, 21));
    }
    return out;
}

}  // namespace

LowerBoundCase lower_bound_case(int redfit_last) {
    LowerBoundCase c;
    c.redfit_last = redfit_last;
    c.name = "redfit4=" + std::to_string(redfit_last);
    if (redfit_last == 2) {
        c.lower = {Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 7)};
        c.redfit = {0, 1, 1, 2};
        c.table_alpha = {Rational(18, 100), Rational(1276, 10000), Rational(1428, 10000)};
        c.threshold = Rational(15762, 10000);
        c.input_names = {"(0,0,3,1)", "(1,1,0,0)", "(1,1,0,1)", "mixed q0=(0,2,1,0)"};
        c.static_patterns = {{0, 0, 3, 1}, {1, 1, 0, 0}, {1, 1, 0, 1}};
        c.mixed_pattern = {0, 2, 1, 0};
        c.mixed_scale = 2;
    } else if (redfit_last == 1) {
        c.lower = {Rational(1, 2), Rational(1, 3), Rational(1, 7)};
        c.redfit = {0, 1, 1};
        c.table_alpha = {Rational(19, 100), Rational(872, 10000)};
        c.threshold = Rational(15788, 10000);
        c.input_names = {"(1,1,1)", "(0,0,6)", "mixed q0=(0,2,2)"};
        c.static_patterns = {{1, 1, 1}, {0, 0, 6}};
        c.mixed_pattern = {0, 2, 2};
        c.mixed_scale = 4;
    } else if (redfit_last == 3) {
        c.lower = {Rational(1, 2), Rational(1, 3), Rational(1, 7)};
        c.redfit = {0, 1, 3};
        c.table_alpha = {Rational(1690, 10000), Rational(1122, 10000)};
        c.threshold = Rational(15872, 10000);
        c.input_names = {"(1,1,1)", "(0,2,2)"};
        c.static_patterns = {{1, 1, 1}, {0, 2, 2}};
    } else {
        throw std::invalid_argument("lower-bound case must be redfit4=1, 2 or 3");
    }
    return c;
}

LowerBoundCase lower_bound_case(const std::string& name) {
    std::string s = name;
    if (s.rfind("redfit4=", 0) == 0) s = s.substr(8);
    if (s == "1" || s == "2" || s == "3") return lower_bound_case(std::stoi(s));
    throw std::invalid_argument("unknown lower-bound case '" + name + "'");
}

std::vector<Rational> input_values(const LowerBoundCase& c, const std::vector<Rational>& alpha) {
    if (alpha.size() != c.table_alpha.size())
        throw std::invalid_argument(c.name + " takes " + std::to_string(c.table_alpha.size()) + " redfracs");
    for (const auto& a : alpha)
        if (a.sign() < 0 || a >= Rational(1, 3)) throw std::invalid_argument("redfrac " + a.str() + " outside [0, 1/3)");
    return inputs_of<Rational>(c.redfit_last, alpha);
}

StaticBound static_lower_bound(const LowerBoundCase& c, const std::vector<Rational>& alpha) {
    StaticBound b;
    b.values = input_values(c, alpha);
    b.min = *std::min_element(b.values.begin(), b.values.end());
    b.max = *std::max_element(b.values.begin(), b.values.end());
    return b;
}

std::pair<Rational, Rational> mixed_chi(const LowerBoundCase& c, const std::vector<Rational>& alpha) {
    const Rational &a2 = alpha.at(0), &a3 = alpha.at(1);
    Rational s(c.mixed_scale);
    return {s * (kOne - a2 - a2 * a3) / (kOne + a2), s * a3};
}

GridResult grid_min_max(const LowerBoundCase& c, const Rational& step) {
    if (step.sign() <= 0) throw std::invalid_argument("grid step must be positive");
    const Rational third(1, 3);
    std::vector<Rational> grid;
    for (Rational v(0); v < third; v += step) grid.push_back(v);
    const size_t dim = c.table_alpha.size();
    GridResult g;
    bool have = false;
    std::vector<size_t> idx(dim, 0);
    std::vector<Rational> a(dim, grid[0]);
    // Pruned sweep: a point is abandoned as soon as one input reaches the
    // best value so far.
    while (true) {
        for (size_t j = 0; j < dim; ++j) a[j] = grid[idx[j]];
        ++g.points;
        auto vals = inputs_of<Rational>(c.redfit_last, a);
        Rational m = vals[0];
        bool pruned = have && m >= g.grid_min;
        for (size_t k = 1; k < vals.size() && !pruned; ++k) {
            m = rmax(m, vals[k]);
            if (have && m >= g.grid_min) pruned = true;
        }
        if (!pruned) {
            g.grid_min = m;
            g.argmin = a;
            have = true;
        }
        size_t j = 0;
        while (j < dim && ++idx[j] == grid.size()) idx[j++] = 0;
        if (j == dim) break;
    }

    // Lipschitz constants from interval enclosures of the partial derivatives
    // over sub-boxes of [0, 1/3]^dim.
    const long parts = 6;
    g.lipschitz.assign(dim, Rational(0));
    std::vector<long> box(dim, 0);
    while (true) {
        for (size_t dir = 0; dir < dim; ++dir) {
            std::vector<Dual<Interval>> x(dim);
            for (size_t j = 0; j < dim; ++j) {
                Interval v(third * Rational(box[j], parts), third * Rational(box[j] + 1, parts));
                x[j] = Dual<Interval>(v, Interval(Rational(j == dir ? 1 : 0)));
            }
            for (const auto& r : inputs_of<Dual<Interval>>(c.redfit_last, x))
                g.lipschitz[dir] = rmax(g.lipschitz[dir], r.d.mag());
        }
        size_t j = 0;
        while (j < dim && ++box[j] == parts) box[j++] = 0;
        if (j == dim) break;
    }
    g.slack = Rational(0);
    for (const auto& l : g.lipschitz) g.slack += l * step;
    g.certified = g.grid_min - g.slack;
    return g;
}

AdversaryParams make_adversary_params(const LowerBoundCase& c, Mode mode, const std::vector<Rational>& alpha,
                                      const Rational& delta, const Rational& tN) {
    if (alpha.size() != c.table_alpha.size()) throw std::invalid_argument("wrong number of redfracs");
    AdversaryParams a;
    a.lb = c;
    a.delta = delta;
    a.sand = tN;
    ParameterSet& p = a.p;
    p.mode = mode;
    p.t.push_back(kOne);
    p.redfrac.push_back(Rational(0));
    for (size_t i = 0; i < c.lower.size(); ++i) {
        // (lower + delta, previous] is a filler type, (lower, lower + delta] the adversary type
        p.t.push_back(c.lower[i] + delta);
        p.redfrac.push_back(i == 0 ? Rational(0) : alpha[i - 1]);
        a.types.push_back(static_cast<int>(p.t.size()));
        p.t.push_back(c.lower[i]);
        p.redfrac.push_back(Rational(0));
    }
    p.t.push_back(tN);
    p.redfrac.push_back(Rational(0));
    p.pseudo.assign(p.t.size(), false);
    p.eps = tN;
    p.c = Rational(0);
    p.listed_rows = p.N();

    // One red space per red pile of an adversary type.
    for (size_t i = 1; i < c.lower.size(); ++i)
        p.redspaces.push_back(Rational(c.redfit[i]) * (c.lower[i] + delta));
    std::sort(p.redspaces.begin(), p.redspaces.end());
    p.redspaces.erase(std::unique(p.redspaces.begin(), p.redspaces.end()), p.redspaces.end());

    DerivedTables d;
    for (int i = 1; i <= p.N(); ++i) {
        const Rational& t = p.upper(i);
        long bf = (kOne / t).floor_long();
        long rf = 0;
        for (size_t k = 0; k < a.types.size(); ++k)
            if (a.types[k] == i && p.alpha(i).sign() > 0) rf = c.redfit[k];
        long needs = 0;
        if (rf > 0) {
            Rational need = Rational(rf) * t;
            for (int k = 1; k <= p.K(); ++k)
                if (p.redspace(k) >= need) { needs = k; break; }
        }
        long leaves = 0;
        Rational room = kOne - Rational(bf) * t;
        for (int k = 1; k <= p.K(); ++k)
            if (p.redspace(k) <= room) leaves = k;
        d.bluefit.push_back(bf);
        d.redfit.push_back(rf);
        d.needs.push_back(needs);
        d.leaves.push_back(leaves);
    }
    p.explicit_tables = d;
    return a;
}

PatternStream pattern_stream(const AdversaryParams& a, const std::vector<int>& pattern, long N) {
    const auto& lower = a.lb.lower;
    if (pattern.size() != lower.size()) throw std::invalid_argument("pattern length does not match the case");
    if (N < 0) throw std::invalid_argument("N must be non-negative");
    Rational base(0);
    long count = 0;
    for (size_t i = 0; i < pattern.size(); ++i) {
        if (pattern[i] < 0) throw std::invalid_argument("negative pattern entry");
        base += Rational(pattern[i]) * lower[i];
        count += pattern[i];
    }
    if (base >= kOne) throw std::invalid_argument("pattern does not fit in a bin");
    PatternStream s;
    s.item_offset = a.delta / 2;
    if (count > 0) s.item_offset = rmin(s.item_offset, (kOne - base) / Rational(2 * count));
    Rational used = base + Rational(count) * s.item_offset;
    long sand_per_bin = ((kOne - used) / a.sand).floor_long();
    for (long k = 0; k < N * sand_per_bin; ++k) s.items.push_back(a.sand);
    for (size_t i = pattern.size(); i-- > 0;)
        for (long k = 0; k < N * pattern[i]; ++k) s.items.push_back(lower[i] + s.item_offset);
    s.opt = (count > 0 || sand_per_bin > 0) ? N : 0;
    return s;
}

AdaptiveResult adaptive_medium_stream(const AdversaryParams& a, long N, bool keep_transcript) {
    const LowerBoundCase& c = a.lb;
    if (c.mixed_pattern.empty()) throw std::invalid_argument(c.name + " has no mixed input");
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    const ParameterSet& p = a.p;
    Packer pk(p);
    AdaptiveResult res;
    auto emit = [&](const Rational& s) {
        PlacementEvent e = pk.pack(s);
        if (keep_transcript) res.transcript.push_back(e.line());
        return e;
    };

    const Rational eps = a.delta;
    const Rational& third = c.lower[1];
    if (pk.classify(third + eps) != pk.classify(third + eps / Rational(1 << 20)))
        throw std::invalid_argument("(1/3, 1/3 + eps] is not inside one type");
    size_t sm = 0;  // small adversary type of q^0
    for (size_t i = 2; i < c.mixed_pattern.size(); ++i)
        if (c.mixed_pattern[i] > 0) sm = i;
    const long small_per = c.mixed_pattern[sm];
    const Rational small_size = c.lower[sm] + eps / 2;
    const Rational medium_max = third + eps;
    const Rational r0 = kOne - Rational(2) * medium_max - Rational(small_per) * small_size;
    const long sand_per = (r0 / a.sand).floor_long();

    // Bins of a red small item hold two blue mediums, each later joined by a
    // 1 - x item; the rest of the blue mediums form pairs with one each.
    const Rational a2 = p.alpha(a.types[1]);
    const Rational as = p.alpha(a.types[sm]);
    const Rational chi2 = Rational(2 * small_per) * as / Rational(c.redfit[sm]);
    const Rational chi1 = (Rational(2) - Rational(2) * a2 - a2 * chi2) / (kOne + a2);

    for (long k = 0; k < N * sand_per; ++k) emit(a.sand);
    res.sand_items = N * sand_per;
    for (long k = 0; k < N * small_per; ++k) emit(small_size);
    res.small_items = N * small_per;

    // Bisection in (1/3, 1/3 + eps]: after a new bin the next item is smaller.
    Rational total = Rational(N) * (Rational(2) + chi1 + chi2);
    long M = total.ceil_long();
    Rational lo = third, hi = medium_max;
    std::vector<Rational> msize;
    std::vector<long> mitem;
    bool any_new = false;
    for (long k = 0; k < M; ++k) {
        Rational s = (lo + hi) / 2;
        long before = pk.bins_used();
        PlacementEvent e = emit(s);
        msize.push_back(s);
        mitem.push_back(e.item);
        if (pk.bins_used() > before) {
            res.x = s;
            any_new = true;
            hi = s;
        } else {
            lo = s;
        }
    }
    res.mediums = M;
    if (!any_new) res.x = hi;

    // Items of size 1 - x: two per bin holding a red small item next to blue
    // mediums, one per bin of two blue mediums without red items.
    const int mtype = a.types[1];
    const int stype = a.types[sm];
    long to_send = 0;
    for (const Bin& b : pk.bins()) {
        if (b.blue_type == mtype && b.blue_count >= 1 && b.red_type == stype) to_send += 2;
        else if (b.blue_type == mtype && b.blue_count == 2 && b.red_type == 0) to_send += 1;
    }
    for (long k = 0; k < to_send; ++k) emit(kOne - res.x);
    res.larges = to_send;
    res.alg = pk.bins_used();

    // A feasible packing bounds OPT from above.
    long big = 0, small = 0;
    for (const auto& s : msize) (s > res.x ? big : small) += 1;
    long q0 = std::min(big / 2, small_per > 0 ? res.small_items / small_per : big / 2);
    long pairs = std::min(res.larges, small);
    long opt = q0 + res.larges;
    long med_left = (big - 2 * q0) + (small - pairs);
    opt += (med_left + 1) / 2;
    long bf_small = (kOne / (c.lower[sm] + eps)).floor_long();
    long small_left = res.small_items - small_per * q0;
    opt += (small_left + bf_small - 1) / bf_small;
    long sand_left = res.sand_items - q0 * sand_per;
    long sand_bin = (kOne / a.sand).floor_long();
    if (sand_left > 0) opt += (sand_left + sand_bin - 1) / sand_bin;
    res.opt = opt;
    res.ratio = Rational(res.alg, res.opt);
    return res;
}

std::string lower_bound_report(const LowerBoundCase& c, const std::vector<Rational>& alpha) {
    StaticBound b = static_lower_bound(c, alpha);
    std::ostringstream os;
    os << "case " << c.name << "\n";
    os << "redfracs";
    for (const auto& a : alpha) os << " " << format_both(a);
    os << "\n";
    for (size_t i = 0; i < b.values.size(); ++i)
        os << "  input " << c.input_names[i] << ": " << format_both(b.values[i]) << "\n";
    os << "lower bound (max over inputs): " << format_both(b.max) << "\n";
    os << "min over inputs: " << format_both(b.min) << "\n";
    return os.str();
}

}  // namespace harmonic
