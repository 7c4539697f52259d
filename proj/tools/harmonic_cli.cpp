// harmonic: command-line front end.
//
// Exit codes: 0 success, 1 verification/certification failure, 2 usage or
// input error. Failures print "error: <reason>: <detail>" on stderr.

#include "harmonic/adversary.hpp"
#include "harmonic/certifier.hpp"
#include "harmonic/packer.hpp"
#include "harmonic/params.hpp"
#include "harmonic/postprocess.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace harmonic;

namespace {

struct Failure {
    int code;
    std::string reason, detail;
};

[[noreturn]] void fail(int code, const std::string& reason, const std::string& detail) {
    throw Failure{code, reason, detail};
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(2, "input", "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spill(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(2, "output", "cannot write " + path);
    out << text;
}

std::vector<Rational> parse_list(const std::string& s) {
    std::vector<Rational> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(Rational::parse(tok));
    return out;
}

ParameterSet load_checked(const std::string& path) {
    ParameterSet p = load_params(slurp(path));
    auto v = validate(p, tables_of(p));
    for (const auto& x : v)
        if (x.fatal) fail(2, "invalid-params", format_violations(v));
    return p;
}

// --- subcommands -------------------------------------------------------

int cmd_gen(const std::string& config, const std::string& out) {
    ParameterSet p = generate_sizes(load_config(slurp(config)));
    spill(out, save_params(p));
    std::cerr << "types " << p.N() << ", red spaces " << p.K() << ", sha256 " << params_digest(p) << "\n";
    return 0;
}

int cmd_certify(const std::string& params, const std::string& ratio, const std::string& out,
                const std::string& knapsacks, int jobs) {
    ParameterSet p = load_checked(params);
    Rational c = Rational::parse(ratio);
    CertifyResult r = certify(p, c, jobs);
    for (const auto& cl : r.classes) {
        std::cout << "class " << cl.k << ": ";
        if (!cl.feasible) std::cout << "infeasible, max " << format_both(cl.last.value);
        else if (cl.wonly) std::cout << "wonly";
        else std::cout << "y3 " << format_both(cl.y3);
        std::cout << "\n";
    }
    if (!r.ok) fail(1, "certification-failed", r.failure);
    std::cout << "certified " << mode_name(p.mode) << " ratio " << format_both(c) << "\n";
    if (!out.empty()) spill(out, write_certificate(r.cert));
    if (!knapsacks.empty()) spill(knapsacks, emit_knapsacks(p, r.cert));
    return 0;
}

int cmd_verify(const std::string& params, const std::string& cert) {
    ParameterSet p = load_checked(params);
    Certificate c = read_certificate(slurp(cert));
    VerifyResult v = verify_certificate(p, c);
    for (const auto& [k, m] : v.maxima) std::cout << "class " << k << ": max " << format_both(m) << "\n";
    if (!v.ok) fail(1, "verification-failed", "class " + std::to_string(v.failing_class) + ": " + v.message);
    std::cout << "accepted ratio " << format_both(c.ratio) << "\n";
    return 0;
}

int cmd_pack(const std::string& params, const std::string& stream, long random_n, std::uint64_t seed,
             bool medium_heavy, const std::string& trace, bool check) {
    ParameterSet p = load_checked(params);
    std::vector<Rational> items;
    if (!stream.empty()) items = parse_stream(slurp(stream));
    else if (random_n > 0) items = random_stream(random_n, seed, medium_heavy);
    else fail(2, "usage", "pack needs --stream or --random");
    Packer pk(p);
    std::ostringstream tr;
    for (size_t k = 0; k < items.size(); ++k) {
        PlacementEvent e;
        try {
            e = pk.pack(items[k]);
        } catch (const std::invalid_argument& ex) {
            fail(2, "input", "item " + std::to_string(k) + ": " + ex.what());
        }
        tr << e.line() << "\n";
        if (check) {
            auto v = pk.check_invariants();
            if (!v.empty()) {
                if (!trace.empty()) spill(trace, tr.str());
                fail(1, "invariant-violation", "after item " + std::to_string(k) + "\n" + format_violations(v));
            }
        }
    }
    if (!trace.empty()) spill(trace, tr.str());
    std::cout << "items " << items.size() << "\n";
    std::cout << "bins used " << pk.bins_used() << "\n";
    if (check) std::cout << "invariants: ok\n";
    return 0;
}

int cmd_post(const std::string& params, const std::string& trace, const std::string& report) {
    ParameterSet p = load_checked(params);
    auto events = parse_trace(slurp(trace));
    // The trace is replayed through the packer; every recorded placement must match.
    Packer pk(p);
    for (const auto& e : events) {
        PlacementEvent got = pk.pack(e.size);
        if (got.line() != e.line())
            fail(1, "trace-mismatch", "recorded '" + e.line() + "', replay gives '" + got.line() + "'");
    }
    PostState s = make_post_state(pk);
    run_postprocess(s);
    auto v = verify_post_conditions(s);
    std::ostringstream out;
    out << post_summary(s);
    out << "post-conditions: " << (v.empty() ? "ok" : std::to_string(v.size()) + " violation(s)") << "\n";
    if (!v.empty()) out << format_violations(v);
    if (!s.log.empty()) {
        out << "removal log:\n";
        for (const auto& l : s.log) out << "  " << l << "\n";
    }
    spill(report, out.str());
    if (!v.empty()) fail(1, "postcondition-violation", std::to_string(v.size()) + " violation(s)");
    if (p.mode == Mode::Extreme && !check_weight_bound(s).ok) fail(1, "weight-bound", "bins_used exceeds min(W,V) + C");
    return 0;
}

int cmd_lower_bound(const std::vector<std::string>& cases, const std::string& alpha, const std::string& step) {
    for (const auto& name : cases) {
        LowerBoundCase c = lower_bound_case(name);
        std::vector<Rational> a = alpha.empty() ? c.table_alpha : parse_list(alpha);
        std::cout << lower_bound_report(c, a);
        StaticBound b = static_lower_bound(c, a);
        std::cout << "claimed " << c.threshold.decimal(4) << ": " << (b.min >= c.threshold ? "holds" : "fails")
                  << " for every input\n";
        if (!step.empty()) {
            GridResult g = grid_min_max(c, Rational::parse(step));
            std::cout << "grid step " << step << ", " << g.points << " points\n";
            std::cout << "  grid min of max: " << format_both(g.grid_min) << " at";
            for (const auto& x : g.argmin) std::cout << " " << x.str();
            std::cout << "\n  lipschitz:";
            for (const auto& l : g.lipschitz) std::cout << " " << format_both(l);
            std::cout << "\n  slack: " << format_both(g.slack) << "\n";
            std::cout << "  certified: " << format_both(g.certified) << "\n";
        }
        std::cout << "\n";
    }
    return 0;
}

int cmd_adversary(const std::string& name, const std::string& mode, long N, const std::string& alpha,
                  const std::string& pattern, const std::string& transcript) {
    LowerBoundCase c = lower_bound_case(name);
    std::vector<Rational> a = alpha.empty() ? c.table_alpha : parse_list(alpha);
    AdversaryParams ap = make_adversary_params(c, parse_mode(mode), a);
    if (!pattern.empty()) {
        std::vector<int> q;
        for (const auto& r : parse_list(pattern)) q.push_back(static_cast<int>(r.floor_long()));
        PatternStream s = pattern_stream(ap, q, N);
        Packer pk(ap.p);
        std::ostringstream tr;
        for (const auto& x : s.items) tr << pk.pack(x).line() << "\n";
        if (!transcript.empty()) spill(transcript, tr.str());
        std::cout << "items " << s.items.size() << "\n";
        std::cout << "alg " << pk.bins_used() << " opt " << s.opt << "\n";
        if (s.opt > 0) std::cout << "ratio " << format_both(Rational(pk.bins_used(), s.opt)) << "\n";
        return 0;
    }
    AdaptiveResult r = adaptive_medium_stream(ap, N, !transcript.empty());
    if (!transcript.empty()) {
        std::ostringstream tr;
        for (const auto& l : r.transcript) tr << l << "\n";
        spill(transcript, tr.str());
    }
    std::cout << "x " << format_both(r.x) << "\n";
    std::cout << "sand " << r.sand_items << " small " << r.small_items << " medium " << r.mediums << " large "
              << r.larges << "\n";
    std::cout << "alg " << r.alg << " opt " << r.opt << "\n";
    std::cout << "ratio " << format_both(r.ratio) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Super Harmonic / Extreme Harmonic bin packing toolkit"};
    app.require_subcommand(1);

    std::string config, params, out, ratio, knapsacks, cert, stream, trace, report, alpha, step, mode = "super",
        pattern, transcript;
    std::vector<std::string> cases;
    std::string one_case = "redfit4=2";
    int jobs = 1;
    long random_n = 0, N = 2000;
    std::uint64_t seed = 1;
    bool check = false, medium_heavy = false;

    auto* gen = app.add_subcommand("gen-params", "generate a parameter file from a generator config");
    gen->add_option("--config", config, "generator config")->required();
    gen->add_option("--out", out, "output parameter file (default stdout)");

    auto* cer = app.add_subcommand("certify", "prove a competitive ratio for a parameter set");
    cer->add_option("--params", params)->required();
    cer->add_option("--ratio", ratio, "target ratio p/q")->required();
    cer->add_option("--out", out, "certificate file");
    cer->add_option("--emit-knapsacks", knapsacks, "write the per-class knapsack problems");
    cer->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

    auto* ver = app.add_subcommand("verify-cert", "check a certificate against a parameter set");
    ver->add_option("--params", params)->required();
    ver->add_option("--cert", cert)->required();

    auto* pack = app.add_subcommand("pack", "run the online algorithm on an item stream");
    pack->add_option("--params", params)->required();
    pack->add_option("--stream", stream, "one rational size per line");
    pack->add_option("--random", random_n, "random stream of this many items instead of --stream");
    pack->add_option("--seed", seed, "seed for --random");
    pack->add_flag("--medium-heavy", medium_heavy, "draw mostly medium and small items");
    pack->add_option("--trace", trace, "placement trace output");
    pack->add_flag("--check-invariants", check, "check all invariants after every item");

    auto* post = app.add_subcommand("postprocess", "replay a trace and run the post-processing");
    post->add_option("--params", params)->required();
    post->add_option("--trace", trace)->required();
    post->add_option("--report", report, "report file (default stdout)");

    auto* lb = app.add_subcommand("lower-bound", "evaluate the lower-bound inputs");
    lb->add_option("--case", cases, "redfit4=1, redfit4=2 or redfit4=3 (default all)");
    lb->add_option("--alpha", alpha, "comma-separated redfracs (default: the case's table values)");
    lb->add_option("--grid-step", step, "also sweep the redfrac grid with this step");

    auto* adv = app.add_subcommand("adversary", "run an adversary stream against the packer");
    adv->add_option("--case", one_case, "lower-bound case");
    adv->add_option("--mode", mode, "super or extreme")->check(CLI::IsMember({"super", "extreme"}));
    adv->add_option("--N", N, "copies / q0 bins")->check(CLI::PositiveNumber);
    adv->add_option("--alpha", alpha, "comma-separated redfracs of the packer");
    adv->add_option("--pattern", pattern, "static pattern (comma-separated counts) instead of the adaptive stream");
    adv->add_option("--transcript", transcript, "placement transcript output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*gen) return cmd_gen(config, out);
        if (*cer) return cmd_certify(params, ratio, out, knapsacks, jobs);
        if (*ver) return cmd_verify(params, cert);
        if (*pack) return cmd_pack(params, stream, random_n, seed, medium_heavy, trace, check);
        if (*post) return cmd_post(params, trace, report);
        if (*lb) {
            if (cases.empty()) cases = {"redfit4=2", "redfit4=1", "redfit4=3"};
            return cmd_lower_bound(cases, alpha, step);
        }
        if (*adv) return cmd_adversary(one_case, mode, N, alpha, pattern, transcript);
    } catch (const Failure& f) {
        std::cerr << "error: " << f.reason << ": " << f.detail << "\n";
        return f.code;
    } catch (const ParseError& e) {
        std::cerr << "error: input: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: invalid-params: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
