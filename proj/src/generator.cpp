#include "harmonic/params.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace harmonic {

namespace {

const Rational kHalf(1, 2);
const Rational kThird(1, 3);
const Rational kSixth(1, 6);

using Desc = std::set<Rational, std::greater<>>;

long redfit_below_third(const Rational& t, const GeneratorConfig& cfg, const Rational& sigma) {
    Rational cap = t <= cfg.gamma_start ? cfg.gamma : sigma;
    return std::max(1L, (cap / t).floor_long());
}

Rational expansion(const Rational& redfrac, long bf, long rf, const Rational& lower) {
    Rational w = (Rational(1) - redfrac) / Rational(bf);
    if (rf > 0) w += redfrac / Rational(rf);
    return w / lower;
}

}  // namespace

Rational medium_root(const Rational& c, const Rational& eps) {
    return kHalf - (Rational(1) - eps) * (c - Rational(3, 2));
}

// Solves 1 + (1 - r)/2 + (1/2 - lower)/(1 - eps) = c for r.
Rational medium_redfrac(const Rational& c, const Rational& eps, const Rational& lower) {
    Rational sand = (kHalf - lower) / (Rational(1) - eps);
    return Rational(1) - Rational(2) * (c - Rational(1) - sand);
}

ParameterSet generate_sizes(const GeneratorConfig& cfg) {
    if (cfg.c <= Rational(3, 2)) throw ValidationError("c must exceed 3/2 to generate medium types");
    if (!(cfg.tN > 0 && cfg.tN < cfg.tsmall && cfg.tsmall < cfg.gamma_start && cfg.gamma_start < kThird))
        throw ValidationError("generator config requires 0 < tN < tsmall < gamma_start < 1/3");
    const Rational eps = cfg.tN;
    const Rational root = medium_root(cfg.c, eps);
    if (root <= kThird || root >= kHalf) throw ValidationError("medium root " + root.str() + " outside (1/3, 1/2)");

    Desc bounds;
    bounds.insert(kHalf);
    bounds.insert(root);
    for (long m = (root / cfg.tN).floor_long(); Rational(m) * cfg.tN > kThird; --m)
        if (Rational(m) * cfg.tN < root) bounds.insert(Rational(m) * cfg.tN);
    for (long i = 3; Rational(1, i) >= cfg.tsmall; ++i) bounds.insert(Rational(1, i));
    std::map<Rational, Rational> seeded;
    for (const auto& [s, a] : cfg.seeds) {
        if (s < cfg.tsmall || s >= kHalf) continue;
        bounds.insert(s);
        seeded[s] = a;
    }
    if (cfg.third_seeds)
        for (const Rational& x : {cfg.tsmall, cfg.gamma_start})
            for (long i = 1; i <= 4; ++i) {
                Rational v = (Rational(1) - x) / Rational(3 * i);
                if (v >= cfg.tsmall) bounds.insert(v);
            }

    ParameterSet p;
    p.mode = Mode::Extreme;
    p.cfg = cfg;
    p.c = cfg.c;
    p.eps = eps;
    p.t = {Rational(1), Rational(0)};
    p.pseudo = {false, true};
    p.redfrac = {Rational(0), Rational(0)};
    std::vector<Rational> upper(bounds.begin(), bounds.end());
    for (size_t j = 0; j < upper.size(); ++j) {
        const Rational& t = upper[j];
        Rational lower = j + 1 < upper.size() ? upper[j + 1] : Rational(0);
        Rational a(0);
        if (t > kThird) {
            a = medium_redfrac(cfg.c, eps, lower);
        } else if (auto it = seeded.find(lower); it != seeded.end()) {
            a = it->second;
        }
        p.t.push_back(t);
        p.pseudo.push_back(false);
        p.redfrac.push_back(a);
    }
    p.redspaces = generate_redspaces(p);
    p = adjust_redfrac(p);

    // Skip phase below tsmall. Every candidate is compared against the
    // expansion of the type whose lower bound is tsmall.
    Rational sigma = kThird;
    if (int ks = p.last_small_class(); ks > 0) sigma = p.redspace(ks);
    int ref = p.N() - 1;
    const Rational& ref_t = p.upper(ref);
    long ref_bf = (Rational(1) / ref_t).floor_long();
    Rational ref_exp = expansion(p.alpha(ref), ref_bf, redfit_below_third(ref_t, cfg, sigma), cfg.tsmall);

    Rational x = cfg.tsmall;
    // the row for tsmall itself is appended by the loop
    p.t.pop_back();
    p.pseudo.pop_back();
    p.redfrac.pop_back();
    while (true) {
        long bf = (Rational(1) / x).floor_long();
        long rf = redfit_below_third(x, cfg, sigma);
        long j = bf + 1;
        long last = 0;
        Rational last_under;
        while (Rational(1, j) > cfg.tN) {
            Rational s(1, j);
            Rational under = Rational(1) - s * Rational(bf);
            Rational over = Rational(bf * rf) / Rational(bf - rf) * (ref_exp * s - Rational(1, bf));
            if (!(under <= over)) break;
            last = j;
            last_under = under;
            ++j;
        }
        p.t.push_back(x);
        p.pseudo.push_back(false);
        if (Rational(1, j) <= cfg.tN) {
            Rational under = Rational(1) - cfg.tN * Rational(bf);
            p.redfrac.push_back(under > 0 ? under + cfg.adjust_margin : Rational(0));
            break;
        }
        if (last == 0) {
            last = bf + 1;
            last_under = Rational(1) - Rational(1, last) * Rational(bf);
        }
        p.redfrac.push_back(last_under + cfg.adjust_margin);
        x = Rational(1, last);
    }
    p.t.push_back(cfg.tN);
    p.pseudo.push_back(false);
    p.redfrac.push_back(Rational(0));
    p.listed_rows = p.N();
    p.redspaces = generate_redspaces(p);
    return p;
}

std::vector<Rational> generate_redspaces(const ParameterSet& p) {
    std::set<Rational> vals;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) continue;
        const Rational& t = p.upper(i);
        if (t > kThird && t < kHalf) vals.insert(t);
        Rational lo = p.lower(i);
        if (lo >= kSixth && lo < kThird) vals.insert(lo);
        Rational two = Rational(2) * lo;
        if (two >= kSixth && two < kThird) vals.insert(two);
    }
    ParameterSet q = p;
    q.explicit_tables.reset();
    q.redspaces.assign(vals.begin(), vals.end());
    DerivedTables d = derive_tables(q);
    std::set<long> referenced;
    for (int i = 1; i <= q.N(); ++i) {
        size_t j = static_cast<size_t>(i - 1);
        for (int m = 1; m <= q.N(); ++m)
            if (d.needs[j] > 0 && d.needs[j] == d.leaves[static_cast<size_t>(m - 1)]) referenced.insert(d.needs[j]);
        if (d.needs[j] > 0) referenced.insert(d.needs[j]);
    }
    std::vector<Rational> out;
    for (int k = 1; k <= q.K(); ++k)
        if (q.redspace(k) > kThird || referenced.count(k)) out.push_back(q.redspace(k));
    return out;
}

std::vector<Rational> super_redspaces(const ParameterSet& p) {
    std::set<Rational> cands;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) continue;
        const Rational& t = p.upper(i);
        if (t > kHalf) {
            if (t < Rational(1)) cands.insert(Rational(1) - t);
        } else if (t > kThird && t < kHalf) {
            cands.insert(t);
        } else if (t <= kThird) {
            Rational rest = Rational(1) - Rational((Rational(1) / t).floor_long()) * t;
            if (rest > 0) cands.insert(rest);
        }
    }
    Rational top = *cands.rbegin();
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || p.upper(i) > kThird) continue;
        long rf = superharmonic_redfit(p.upper(i), p.alpha(i), top);
        if (rf > 0) cands.insert(Rational(rf) * p.upper(i));
    }
    ParameterSet q = p;
    q.explicit_tables.reset();
    q.redspaces.assign(cands.begin(), cands.end());
    DerivedTables d = derive_tables(q);
    std::set<long> keep;
    for (size_t j = 0; j < d.needs.size(); ++j) {
        if (d.needs[j] == 0) continue;
        keep.insert(d.needs[j]);
    }
    std::vector<Rational> out;
    for (int k = 1; k <= q.K(); ++k)
        if (q.redspace(k) > kThird || keep.count(k)) out.push_back(q.redspace(k));
    return out;
}

ParameterSet adjust_redfrac(const ParameterSet& p) {
    ParameterSet q = p;
    DerivedTables d = derive_tables(p);
    for (int i = 1; i <= q.N(); ++i) {
        if (q.is_pseudo(i)) continue;
        const Rational& t = q.upper(i);
        if (t < q.cfg.tsmall || t > kSixth) continue;
        Rational v = Rational(1) - q.lower(i) * Rational(d.bluefit[static_cast<size_t>(i - 1)]);
        if (v <= 0) continue;
        Rational cand = v + q.cfg.adjust_margin;
        Rational& a = q.redfrac[static_cast<size_t>(i - 1)];
        a = q.cfg.adjust_overwrite ? cand : rmax(a, cand);
    }
    return q;
}

}  // namespace harmonic
