#include "harmonic/weights.hpp"

namespace harmonic {

namespace {

const Rational kHalf(1, 2);
const Rational kThird(1, 3);
const Rational kTwoThirds(2, 3);

struct Parts {
    Rational full, blue, red_only;
};

Parts parts_of(const WeightContext& ctx, int i) {
    size_t j = static_cast<size_t>(i - 1);
    const Rational& r = ctx.p->alpha(i);
    Rational bf(ctx.d.bluefit[j]);
    long rf = ctx.d.redfit[j];
    Parts out;
    out.blue = (Rational(1) - r) / bf;
    out.red_only = rf > 0 ? r / Rational(rf) : Rational(0);
    out.full = out.blue + out.red_only;
    return out;
}

}  // namespace

char mark_char(Mark m) {
    switch (m) {
        case Mark::N: return 'N';
        case Mark::B: return 'B';
        case Mark::R: return 'R';
        default: return 'U';
    }
}

WeightContext make_context(const ParameterSet& p, const DerivedTables& d, int k) {
    WeightContext ctx;
    ctx.p = &p;
    ctx.d = d;
    ctx.k = k;
    ctx.large_split = kHalf;
    if (p.mode == Mode::Super || k == 0) return ctx;
    if (p.redspace(k) <= kThird) {
        ctx.small_class = true;
        ctx.large_split = kTwoThirds;
        return ctx;
    }
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i) || !is_medium_bound(p.upper(i))) continue;
        if (d.needs[static_cast<size_t>(i - 1)] == k) {
            ctx.crit = i;
            break;
        }
    }
    if (ctx.crit == 0) throw ValidationError("class " + std::to_string(k) + " has no critical medium type");
    ctx.large_split = rmin(kTwoThirds, Rational(1) - p.redspace(k));
    return ctx;
}

Rational WeightContext::lb(int i) const {
    if (p->mode == Mode::Extreme) {
        if (i == 1) return large_split;
        if (i == 2) return kHalf;
    }
    return p->lower(i);
}

std::vector<int> WeightContext::pattern_types() const {
    std::vector<int> out;
    for (int i = 1; i < p->N(); ++i) {
        if (p->mode == Mode::Extreme) {
            if (i == 2 && k == 0) continue;
            if (i > 2 && p->upper(i) > kHalf) continue;
        } else if (p->is_pseudo(i)) {
            continue;
        }
        out.push_back(i);
    }
    return out;
}

std::pair<Rational, Rational> weight_pair(const WeightContext& ctx, int i, Mark m) {
    const int k = ctx.k;
    size_t j = static_cast<size_t>(i - 1);
    if (ctx.mode() == Mode::Extreme) {
        if (i == 1) return {Rational(1), Rational(1)};
        if (i == 2) return {Rational(1), Rational(0)};
        Parts w = parts_of(ctx, i);
        if (k == 0) return {w.blue, w.blue};
        long nd = ctx.d.needs[j], lv = ctx.d.leaves[j];
        Rational wk;
        if (nd > k) {
            wk = w.full;
        } else if (nd == k) {
            if (i == ctx.crit)
                wk = m == Mark::R ? w.blue : w.full;
            else
                wk = ctx.small_uses_R || m == Mark::R ? w.blue : w.full;
        } else if (nd > 0) {
            wk = w.blue;
        } else {
            wk = w.full;
        }
        Rational vk = lv < k ? w.full : w.red_only;
        return {wk, vk};
    }
    Parts w = parts_of(ctx, i);
    long nd = ctx.d.needs[j], lv = ctx.d.leaves[j];
    return {nd >= k ? w.full : w.blue, lv < k ? w.full : w.red_only};
}

std::pair<Rational, Rational> large_weight(const WeightContext& ctx, const Rational& size) {
    if (ctx.k == 0) return {Rational(1), Rational(1)};
    bool apart = ctx.small_class ? size >= kTwoThirds : size > ctx.large_split;
    return {Rational(1), apart ? Rational(1) : Rational(0)};
}

Rational weight_sand(const WeightContext& ctx, const Rational& space) {
    return space / (Rational(1) - ctx.p->eps);
}

Rational pattern_space(const WeightContext& ctx, const Pattern& q) {
    Rational s(0);
    for (size_t j = 0; j < q.q.size(); ++j)
        if (q.q[j]) s += Rational(q.q[j]) * ctx.lb(static_cast<int>(j + 1));
    return s;
}

Rational pattern_weight(const WeightContext& ctx, const Pattern& q, int which) {
    Rational total(0);
    for (size_t j = 0; j < q.q.size(); ++j) {
        if (!q.q[j]) continue;
        int i = static_cast<int>(j + 1);
        long n = q.q[j];
        if (i == ctx.crit && q.qR > 0) {
            auto r = weight_pair(ctx, i, Mark::R);
            total += Rational(q.qR) * (which ? r.second : r.first);
            n -= q.qR;
        }
        auto wv = weight_pair(ctx, i, Mark::N);
        total += Rational(n) * (which ? wv.second : wv.first);
    }
    return total + weight_sand(ctx, Rational(1) - pattern_space(ctx, q));
}

Rational omega(const WeightContext& ctx, int i, Mark m, const Multipliers& y) {
    auto [w, v] = weight_pair(ctx, i, m);
    Rational out = (Rational(1) - y.y3) * w + y.y3 * v;
    if (ctx.crit == 0) return out;
    size_t j = static_cast<size_t>(i - 1);
    const Rational& r = ctx.p->alpha(i);
    if (i == ctx.crit) {
        if (m != Mark::R) out += (Rational(1) - r) / (Rational(1) + r) * y.y1;
    } else if (i > 2) {
        long nd = ctx.d.needs[j];
        long lv_crit = ctx.d.leaves[static_cast<size_t>(ctx.crit - 1)];
        if (nd > 0 && nd <= lv_crit && ctx.d.redfit[j] > 0) out += r / Rational(ctx.d.redfit[j]) * y.y2;
    }
    return out;
}

Rational pattern_omega(const WeightContext& ctx, const Pattern& q, const Multipliers& y) {
    Rational total(0);
    for (size_t j = 0; j < q.q.size(); ++j) {
        if (!q.q[j]) continue;
        int i = static_cast<int>(j + 1);
        long n = q.q[j];
        if (i == ctx.crit && q.qR > 0) {
            total += Rational(q.qR) * omega(ctx, i, Mark::R, y);
            n -= q.qR;
        }
        total += Rational(n) * omega(ctx, i, Mark::N, y);
    }
    return total + weight_sand(ctx, Rational(1) - pattern_space(ctx, q));
}

Rational critical_pattern_weight(const Rational& redfrac, const Rational& large_lb, const Rational& medium_lb,
                                 const Rational& eps) {
    Rational sand = (Rational(1) - large_lb - medium_lb) / (Rational(1) - eps);
    return Rational(1) + (Rational(1) - redfrac) / Rational(2) + redfrac + sand;
}

Rational critical_weight(const WeightContext& ctx) {
    if (ctx.crit == 0) throw ValidationError("class has no critical medium type");
    return critical_pattern_weight(ctx.p->alpha(ctx.crit), ctx.large_split, ctx.p->lower(ctx.crit), ctx.p->eps);
}

std::pair<Rational, Rational> critical_multipliers(const WeightContext& ctx, const Rational& c) {
    if (ctx.crit == 0) return {Rational(0), Rational(0)};
    Rational w1 = critical_weight(ctx);
    if (!(c < w1)) return {Rational(0), Rational(0)};
    const Rational& r = ctx.p->alpha(ctx.crit);
    Rational y1 = w1 - c;
    Rational y2 = Rational(2) / (Rational(1) - r) * (Rational(1) + (Rational(1) - r) / (Rational(1) + r)) * y1;
    return {y1, y2};
}

std::pair<Rational, Rational> total_weight(const WeightContext& ctx, const std::vector<WeighedItem>& items) {
    Rational W(0), V(0);
    const int N = ctx.p->N();
    for (const auto& it : items) {
        if (it.type == N) {
            Rational s = weight_sand(ctx, it.size);
            W += s;
            V += s;
            continue;
        }
        std::pair<Rational, Rational> wv;
        if (ctx.mode() == Mode::Extreme && it.size > kHalf)
            wv = large_weight(ctx, it.size);
        else
            wv = weight_pair(ctx, it.type, it.mark);
        W += wv.first;
        V += wv.second;
    }
    return {W, V};
}

}  // namespace harmonic
