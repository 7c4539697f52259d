#include "harmonic/certifier.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace harmonic {

namespace {

Rational sand_rate(const WeightContext& ctx) { return Rational(1) / (Rational(1) - ctx.p->eps); }

struct Built {
    std::vector<KItem> items;
};

Built build_items(const WeightContext& ctx, const Multipliers& y, bool skip_row1, bool crit_as_R) {
    Built b;
    for (int i : ctx.pattern_types()) {
        if (skip_row1 && i == 1) continue;
        Mark m = (crit_as_R && i == ctx.crit) ? Mark::R : Mark::N;
        b.items.push_back({ctx.lb(i), omega(ctx, i, m, y), i});
    }
    return b;
}

Pattern to_pattern(const WeightContext& ctx, const Built& b, const std::vector<long>& counts, bool crit_as_R) {
    Pattern q;
    q.q.assign(static_cast<size_t>(ctx.p->N() - 1), 0);
    for (size_t j = 0; j < counts.size(); ++j) {
        int i = b.items[j].tag;
        q.q[static_cast<size_t>(i - 1)] += counts[j];
        if (crit_as_R && i == ctx.crit) q.qR += counts[j];
    }
    return q;
}

ClassMax finish(const WeightContext& ctx, Rational value, Pattern q) {
    ClassMax out;
    out.value = std::move(value);
    out.W = pattern_weight(ctx, q, 0);
    out.V = pattern_weight(ctx, q, 1);
    out.pattern = std::move(q);
    return out;
}

}  // namespace

ClassMax class_knapsack(const WeightContext& ctx, const Multipliers& y) {
    const Rational sr = sand_rate(ctx);
    if (ctx.crit == 0) {
        Built b = build_items(ctx, y, false, false);
        auto sol = knapsack_max(b.items, Rational(1), sr);
        return finish(ctx, sol.value, to_pattern(ctx, b, sol.counts, false));
    }
    Built a = build_items(ctx, y, true, false);
    auto sa = knapsack_max(a.items, Rational(1), sr);

    bool as_R = y.y1 > 0;
    Built f = build_items(ctx, y, true, as_R);
    auto sf = knapsack_max(f.items, Rational(1) - ctx.lb(1), sr);
    Rational forced = sf.value + omega(ctx, 1, Mark::N, y);
    if (forced > sa.value) {
        Pattern q = to_pattern(ctx, f, sf.counts, as_R);
        q.q[0] += 1;
        return finish(ctx, forced, std::move(q));
    }
    return finish(ctx, sa.value, to_pattern(ctx, a, sa.counts, false));
}

Rational critical_residual(const WeightContext& ctx) {
    return Rational(1) - ctx.large_split - ctx.p->lower(ctx.crit);
}

bool critical_patterns_unique(const WeightContext& ctx) {
    if (ctx.crit == 0) return true;
    return critical_residual(ctx) <= ctx.p->lower(ctx.p->N() - 1);
}

ClassOutcome dual_feasible(const WeightContext& ctx, const Rational& c, int max_iters) {
    ClassOutcome out;
    out.k = ctx.k;
    if (ctx.mode() == Mode::Extreme && ctx.k == 0) {
        out.wonly = true;
        out.last = class_knapsack(ctx, {});
        out.feasible = out.last.value <= c;
        return out;
    }
    std::tie(out.y1, out.y2) = critical_multipliers(ctx, c);
    Rational lo(0), hi(1), y3(1, 2);
    for (int it = 0; it < max_iters; ++it) {
        out.probes.push_back(y3);
        out.last = class_knapsack(ctx, {out.y1, out.y2, y3});
        if (out.last.value <= c) {
            out.feasible = true;
            out.y3 = y3;
            return out;
        }
        if (out.last.W > out.last.V)
            lo = y3;
        else
            hi = y3;
        y3 = (lo + hi) / Rational(2);
    }
    out.y3 = out.probes.back();
    return out;
}

CertifyResult certify(const ParameterSet& p, const Rational& c, int jobs) {
    DerivedTables d = tables_of(p);
    const int K = p.K();
    CertifyResult res;
    res.classes.resize(static_cast<size_t>(K + 1));
    std::vector<std::string> errors(static_cast<size_t>(K + 1));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (int k = next++; k <= K; k = next++) {
            try {
                WeightContext ctx = make_context(p, d, k);
                if (!critical_patterns_unique(ctx)) {
                    errors[static_cast<size_t>(k)] = "critical patterns of class " + std::to_string(k) +
                                                     " admit a further item (residual " +
                                                     critical_residual(ctx).str() + ")";
                    res.classes[static_cast<size_t>(k)].k = k;
                    continue;
                }
                res.classes[static_cast<size_t>(k)] = dual_feasible(ctx, c);
            } catch (const std::exception& e) {
                errors[static_cast<size_t>(k)] = e.what();
                res.classes[static_cast<size_t>(k)].k = k;
            }
        }
    };
    jobs = std::max(1, jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    res.cert.digest = params_digest(p);
    res.cert.mode = p.mode;
    res.cert.ratio = c;
    res.ok = true;
    for (int k = 0; k <= K; ++k) {
        const auto& o = res.classes[static_cast<size_t>(k)];
        if (!errors[static_cast<size_t>(k)].empty() || !o.feasible) {
            if (res.ok) {
                std::ostringstream msg;
                msg << "class " << k << ": ";
                if (!errors[static_cast<size_t>(k)].empty()) {
                    msg << errors[static_cast<size_t>(k)];
                } else {
                    msg << "no feasible y3 after " << o.probes.size() << " probes; violating pattern weight "
                        << format_both(o.last.value) << " pattern";
                    for (size_t j = 0; j < o.last.pattern.q.size(); ++j)
                        if (o.last.pattern.q[j]) msg << " " << j + 1 << "x" << o.last.pattern.q[j];
                    if (o.last.pattern.qR) msg << " (R:" << o.last.pattern.qR << ")";
                }
                res.failure = msg.str();
            }
            res.ok = false;
            continue;
        }
        res.cert.entries.push_back({k, o.wonly ? std::string("wonly") : o.y3.str()});
    }
    return res;
}

ClassMax evaluate_class(const ParameterSet& p, const DerivedTables& d, int k, const Rational& c,
                        const std::optional<Rational>& y3) {
    WeightContext ctx = make_context(p, d, k);
    Multipliers y;
    std::tie(y.y1, y.y2) = critical_multipliers(ctx, c);
    y.y3 = y3.value_or(Rational(0));
    return class_knapsack(ctx, y);
}

VerifyResult verify_certificate(const ParameterSet& p, const Certificate& cert) {
    VerifyResult res;
    if (cert.digest != params_digest(p)) {
        res.message = "params digest mismatch";
        return res;
    }
    if (cert.mode != p.mode) {
        res.message = "mode mismatch";
        return res;
    }
    DerivedTables d = tables_of(p);
    std::vector<bool> seen(static_cast<size_t>(p.K() + 1), false);
    for (const auto& e : cert.entries) {
        if (e.k < 0 || e.k > p.K()) {
            res.failing_class = e.k;
            res.message = "class " + std::to_string(e.k) + " out of range";
            return res;
        }
        seen[static_cast<size_t>(e.k)] = true;
        WeightContext ctx = make_context(p, d, e.k);
        if (!critical_patterns_unique(ctx)) {
            res.failing_class = e.k;
            res.message = "class " + std::to_string(e.k) + ": critical patterns not unique";
            return res;
        }
        std::optional<Rational> y3;
        if (e.label == "wonly") {
            if (!(p.mode == Mode::Extreme && e.k == 0)) {
                res.failing_class = e.k;
                res.message = "class " + std::to_string(e.k) + ": wonly only applies to class 0 in extreme mode";
                return res;
            }
        } else {
            y3 = e.label == "simple" ? Rational(1, 2) : Rational::parse(e.label);
            if (*y3 < 0 || *y3 > 1) {
                res.failing_class = e.k;
                res.message = "class " + std::to_string(e.k) + ": y3 outside [0,1]";
                return res;
            }
        }
        ClassMax m = evaluate_class(p, d, e.k, cert.ratio, y3);
        res.maxima.emplace_back(e.k, m.value);
        if (m.value > cert.ratio) {
            res.failing_class = e.k;
            res.message = "class " + std::to_string(e.k) + ": knapsack maximum " + format_both(m.value) +
                          " exceeds " + format_both(cert.ratio);
            return res;
        }
    }
    for (int k = 0; k <= p.K(); ++k)
        if (!seen[static_cast<size_t>(k)]) {
            res.failing_class = k;
            res.message = "class " + std::to_string(k) + " missing from certificate";
            return res;
        }
    res.ok = true;
    res.message = "all " + std::to_string(p.K() + 1) + " classes verified";
    return res;
}

std::string write_certificate(const Certificate& cert) {
    std::ostringstream out;
    out << "# harmonic-cert v1\n";
    out << "params-sha256: " << cert.digest << "\n";
    out << "mode: " << mode_name(cert.mode) << "\n";
    out << "ratio: " << cert.ratio.str() << "\n";
    for (const auto& e : cert.entries) out << "k " << e.k << " y3 " << e.label << "\n";
    return out.str();
}

Certificate read_certificate(const std::string& text) {
    Certificate cert;
    std::istringstream in(text);
    std::string line;
    bool header = false, ratio = false;
    while (std::getline(in, line)) {
        if (line.rfind("# harmonic-cert v1", 0) == 0) {
            header = true;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "params-sha256:") {
            ls >> cert.digest;
        } else if (key == "mode:") {
            std::string m;
            ls >> m;
            cert.mode = parse_mode(m);
        } else if (key == "ratio:") {
            std::string r;
            ls >> r;
            cert.ratio = Rational::parse(r);
            ratio = true;
        } else if (key == "k") {
            CertEntry e;
            std::string y3;
            if (!(ls >> e.k >> y3 >> e.label) || y3 != "y3") throw ParseError("malformed certificate line '" + line + "'");
            cert.entries.push_back(e);
        } else {
            throw ParseError("unknown certificate key '" + key + "'");
        }
    }
    if (!header) throw ParseError("missing '# harmonic-cert v1' header");
    if (!ratio) throw ParseError("certificate has no ratio");
    return cert;
}

std::string emit_knapsacks(const ParameterSet& p, const Certificate& cert) {
    DerivedTables d = tables_of(p);
    std::ostringstream out;
    out << "# knapsack problems, one block per class\n";
    out << "# maximize sum q_i*omega_i + sand_rate*(1 - sum q_i*lb_i) subject to sum q_i*lb_i < 1\n";
    for (const auto& e : cert.entries) {
        WeightContext ctx = make_context(p, d, e.k);
        Multipliers y;
        std::tie(y.y1, y.y2) = critical_multipliers(ctx, cert.ratio);
        y.y3 = e.label == "wonly" ? Rational(0) : Rational::parse(e.label);
        out << "class " << e.k << "\n";
        out << "y1 " << y.y1.str() << "\ny2 " << y.y2.str() << "\ny3 " << y.y3.str() << "\n";
        out << "sand_rate " << sand_rate(ctx).str() << "\n";
        if (ctx.crit) out << "critical " << ctx.crit << " omega_R " << omega(ctx, ctx.crit, Mark::R, y).str() << "\n";
        for (int i : ctx.pattern_types())
            out << "item " << i << " lb " << ctx.lb(i).str() << " omega " << omega(ctx, i, Mark::N, y).str() << "\n";
        out << "end\n";
    }
    return out.str();
}

}  // namespace harmonic
