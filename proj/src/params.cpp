#include "harmonic/params.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace harmonic {

namespace {

const Rational kHalf(1, 2);
const Rational kThird(1, 3);
const Rational kTwoThirds(2, 3);

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

long parse_long(const std::string& tok) {
    size_t used = 0;
    long v = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::exception&) {
        throw ParseError("malformed integer '" + tok + "'");
    }
    if (used != tok.size()) throw ParseError("malformed integer '" + tok + "'");
    return v;
}

struct RawFile {
    std::map<std::string, std::string> headers;
    std::map<std::string, std::vector<std::vector<std::string>>> blocks;
};

RawFile parse_raw(const std::string& text) {
    static const std::set<std::string> block_keys = {"sizes", "redspaces", "explicit"};
    RawFile raw;
    std::istringstream in(text);
    std::string line, current;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        line = trim(line);
        if (line.empty()) continue;
        auto colon = line.find(':');
        if (colon != std::string::npos) {
            std::string key = trim(line.substr(0, colon));
            std::string value = trim(line.substr(colon + 1));
            if (block_keys.count(key)) {
                current = key;
                raw.blocks[key];
                if (!value.empty()) raw.blocks[key].push_back(split_ws(value));
                continue;
            }
            if (!key.empty() && key.find(' ') == std::string::npos) {
                raw.headers[key] = value;
                current.clear();
                continue;
            }
        }
        if (current.empty())
            throw ParseError("line " + std::to_string(lineno) + ": unexpected '" + line + "'");
        raw.blocks[current].push_back(split_ws(line));
    }
    return raw;
}

Rational header_rational(const RawFile& raw, const std::string& key, const Rational& fallback) {
    auto it = raw.headers.find(key);
    if (it == raw.headers.end() || it->second.empty()) return fallback;
    return Rational::parse(it->second);
}

bool header_flag(const RawFile& raw, const std::string& key, bool fallback) {
    auto it = raw.headers.find(key);
    if (it == raw.headers.end()) return fallback;
    return it->second == "yes" || it->second == "true" || it->second == "1";
}

GeneratorConfig config_from(const RawFile& raw) {
    GeneratorConfig cfg;
    cfg.c = header_rational(raw, "c", Rational(0));
    cfg.tN = header_rational(raw, "tN", Rational(0));
    cfg.gamma = header_rational(raw, "gamma", Rational(0));
    cfg.gamma_start = header_rational(raw, "gamma_start", Rational(0));
    cfg.tsmall = header_rational(raw, "tsmall", Rational(0));
    cfg.adjust_margin = header_rational(raw, "adjust_margin", Rational(0));
    cfg.adjust_overwrite = header_flag(raw, "adjust_overwrite", false);
    cfg.third_seeds = header_flag(raw, "third_seeds", true);
    return cfg;
}

std::vector<std::pair<Rational, Rational>> pairs_of(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::pair<Rational, Rational>> out;
    for (const auto& r : rows) {
        if (r.size() != 2) throw ParseError("sizes row needs two rationals");
        out.emplace_back(Rational::parse(r[0]), Rational::parse(r[1]));
    }
    return out;
}

long floor_div(const Rational& a, const Rational& b) { return (a / b).floor_long(); }

}  // namespace

std::string mode_name(Mode m) { return m == Mode::Super ? "super" : "extreme"; }

Mode parse_mode(const std::string& s) {
    if (s == "super") return Mode::Super;
    if (s == "extreme") return Mode::Extreme;
    throw ParseError("unknown mode '" + s + "'");
}

bool is_large_bound(const Rational& t) { return t > kHalf; }
bool is_medium_bound(const Rational& t) { return t > kThird && t <= kHalf; }

Rational ParameterSet::lower(int i) const {
    for (int j = i + 1; j <= N(); ++j)
        if (!is_pseudo(j)) return upper(j);
    return Rational(0);
}

int ParameterSet::last_small_class() const {
    int k = 0;
    for (int j = 1; j <= K(); ++j)
        if (redspace(j) <= kThird) k = j;
    return k;
}

GeneratorConfig load_config(const std::string& text) {
    RawFile raw = parse_raw(text);
    GeneratorConfig cfg = config_from(raw);
    if (raw.blocks.count("sizes")) cfg.seeds = pairs_of(raw.blocks["sizes"]);
    return cfg;
}

ParameterSet load_params(const std::string& text) {
    RawFile raw = parse_raw(text);
    ParameterSet p;
    p.mode = parse_mode(raw.headers.count("mode") ? raw.headers["mode"] : "extreme");
    p.cfg = config_from(raw);
    p.c = p.cfg.c;
    if (raw.blocks.count("redspaces"))
        for (const auto& row : raw.blocks["redspaces"])
            for (const auto& tok : row) p.redspaces.push_back(Rational::parse(tok));

    if (raw.blocks.count("explicit")) {
        if (raw.blocks.count("sizes")) p.cfg.seeds = pairs_of(raw.blocks["sizes"]);
        DerivedTables d;
        for (const auto& r : raw.blocks["explicit"]) {
            if (r.size() != 6) throw ParseError("explicit row needs 6 fields, got " + std::to_string(r.size()));
            bool pseudo = r[0] == "1-t(r)";
            p.t.push_back(pseudo ? Rational(0) : Rational::parse(r[0]));
            p.pseudo.push_back(pseudo);
            p.redfrac.push_back(Rational::parse(r[1]));
            d.bluefit.push_back(parse_long(r[2]));
            d.redfit.push_back(parse_long(r[3]));
            d.needs.push_back(parse_long(r[4]));
            d.leaves.push_back(parse_long(r[5]));
        }
        p.listed_rows = static_cast<int>(p.t.size());
        p.explicit_tables = d;
        if (p.cfg.tN.is_zero() && !p.t.empty()) p.cfg.tN = p.t.back();
    } else {
        if (!raw.blocks.count("sizes")) throw ParseError("parameter file has neither sizes: nor explicit:");
        auto pairs = pairs_of(raw.blocks["sizes"]);
        p.t.push_back(Rational(1));
        p.pseudo.push_back(false);
        for (size_t i = 0; i < pairs.size(); ++i) {
            p.redfrac.push_back(pairs[i].second);
            if (i + 1 < pairs.size() || pairs[i].first > 0) {
                p.t.push_back(pairs[i].first);
                p.pseudo.push_back(false);
            }
        }
        while (p.redfrac.size() < p.t.size()) p.redfrac.push_back(Rational(0));
        p.listed_rows = static_cast<int>(pairs.size());
        if (p.cfg.tN.is_zero()) p.cfg.tN = p.t.back();
        if (p.t.back() != p.cfg.tN)
            throw ValidationError("last size lower bound " + p.t.back().str() + " differs from tN " + p.cfg.tN.str());
    }
    p.eps = p.cfg.tN;
    if (p.redspaces.empty() && p.mode == Mode::Super) p.redspaces = super_redspaces(p);
    if (p.redspaces.empty()) p.redspaces = generate_redspaces(p);

    auto report = validate(p, tables_of(p));
    std::erase_if(report, [](const Violation& v) { return !v.fatal; });
    if (!report.empty()) throw ValidationError(format_violations(report));
    return p;
}

ParameterSet load_params_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_params(ss.str());
}

std::string save_params(const ParameterSet& p) {
    std::ostringstream out;
    out << "mode: " << mode_name(p.mode) << "\n";
    out << "c: " << p.c.str() << "\n";
    out << "tN: " << p.cfg.tN.str() << "\n";
    out << "gamma: " << p.cfg.gamma.str() << "\n";
    out << "gamma_start: " << p.cfg.gamma_start.str() << "\n";
    out << "tsmall: " << p.cfg.tsmall.str() << "\n";
    if (!p.cfg.adjust_margin.is_zero()) out << "adjust_margin: " << p.cfg.adjust_margin.str() << "\n";
    if (p.cfg.adjust_overwrite) out << "adjust_overwrite: yes\n";
    if (!p.cfg.third_seeds) out << "third_seeds: no\n";
    out << "redspaces:\n";
    for (const auto& r : p.redspaces) out << r.str() << "\n";
    // The sizes block has no placeholder rows, so sets with one are written
    // with their tables.
    bool pseudo = std::find(p.pseudo.begin(), p.pseudo.end(), true) != p.pseudo.end();
    if (p.explicit_tables || pseudo) {
        out << "sizes:\n";
        for (const auto& [s, a] : p.cfg.seeds) out << s.str() << " " << a.str() << "\n";
        const DerivedTables d = tables_of(p);
        out << "explicit:\n";
        for (int i = 1; i <= p.N(); ++i) {
            size_t j = static_cast<size_t>(i - 1);
            out << (p.is_pseudo(i) ? std::string("1-t(r)") : p.upper(i).str()) << " " << p.alpha(i).str() << " "
                << d.bluefit[j] << " " << d.redfit[j] << " " << d.needs[j] << " " << d.leaves[j] << "\n";
        }
    } else {
        out << "sizes:\n";
        for (int i = 1; i < p.N(); ++i) out << p.lower(i).str() << " " << p.alpha(i).str() << "\n";
        if (p.listed_rows >= p.N()) out << "0 " << p.alpha(p.N()).str() << "\n";
    }
    return out.str();
}

long superharmonic_redfit(const Rational& t, const Rational& redfrac, const Rational& redspace_K) {
    if (redfrac.is_zero() || t > redspace_K) return 0;
    return std::max(1L, floor_div(Rational(24, 83), t));
}

DerivedTables derive_tables(const ParameterSet& p) {
    DerivedTables d;
    const int K = p.K();
    Rational sigma = kThird;
    if (int ks = p.last_small_class(); ks > 0) sigma = p.redspace(ks);
    Rational top = K > 0 ? p.redspace(K) : Rational(0);

    auto needs_of = [&](const Rational& space) -> long {
        for (int k = 1; k <= K; ++k)
            if (p.redspace(k) >= space) return k;
        return 0;
    };
    auto leaves_of = [&](const Rational& space) -> long {
        long best = 0;
        for (int k = 1; k <= K; ++k)
            if (p.redspace(k) <= space) best = k;
        return best;
    };

    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) {
            d.bluefit.push_back(1);
            d.redfit.push_back(0);
            d.needs.push_back(0);
            d.leaves.push_back(0);
            continue;
        }
        const Rational& t = p.upper(i);
        long bf = (Rational(1) / t).floor_long();
        long rf = 0;
        if (p.mode == Mode::Super) {
            rf = superharmonic_redfit(t, p.alpha(i), top);
        } else if (t >= kHalf) {
            rf = 0;
        } else if (t > kThird) {
            rf = 1;
        } else {
            Rational cap = t <= p.cfg.gamma_start && p.cfg.gamma > 0 ? p.cfg.gamma : sigma;
            rf = std::max(1L, floor_div(cap, t));
        }
        long needs = p.alpha(i).is_zero() ? 0 : needs_of(Rational(rf) * t);
        long leaves = 0;
        if (p.mode == Mode::Extreme && t > kHalf)
            leaves = t >= kTwoThirds ? 0 : K;
        else
            leaves = leaves_of(Rational(1) - Rational(bf) * t);
        d.bluefit.push_back(bf);
        d.redfit.push_back(rf);
        d.needs.push_back(needs);
        d.leaves.push_back(leaves);
    }
    return d;
}

DerivedTables tables_of(const ParameterSet& p) {
    if (p.explicit_tables) return *p.explicit_tables;
    return derive_tables(p);
}

std::vector<Violation> validate(const ParameterSet& p, const DerivedTables& d) {
    std::vector<Violation> out;
    auto add = [&](std::string prop, int i, std::string detail) {
        out.push_back({std::move(prop), i, std::move(detail)});
    };
    if (p.N() == 0) {
        add("structure", 0, "no types");
        return out;
    }
    if (p.upper(1) != Rational(1)) add("structure", 1, "t_1 must be 1");
    std::optional<Rational> prev;
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) continue;
        if (prev && !(p.upper(i) < *prev)) {
            // printed tables are taken verbatim; the affected interval is empty
            add("order", i, "boundary " + p.upper(i).str() + " not below the previous row");
            if (p.explicit_tables) out.back().fatal = false;
        }
        prev = p.upper(i);
    }
    for (int k = 2; k <= p.K(); ++k)
        if (p.redspace(k) < p.redspace(k - 1)) add("structure", k, "redspaces not ascending");
    if (static_cast<int>(d.needs.size()) != p.N()) {
        add("structure", 0, "table size mismatch");
        return out;
    }
    for (int i = 1; i <= p.N(); ++i) {
        size_t j = static_cast<size_t>(i - 1);
        const Rational& a = p.alpha(i);
        if (a < 0) add("redfrac-range", i, "negative redfrac");
        if (a >= kThird) add("redfrac-range", i, "redfrac " + a.str() + " is not below 1/3");
        if (p.is_pseudo(i)) continue;
        const Rational& t = p.upper(i);
        if (t > kHalf && !a.is_zero()) add("structure", i, "large type with nonzero redfrac");
        if (a.is_zero()) continue;
        if (d.needs[j] < 1 || d.needs[j] > p.K()) {
            add("redspace-range", i, "needs index out of range");
            continue;
        }
        if (d.leaves[j] >= d.needs[j]) add("leaves-needs", i, "leaves(i) >= needs(i)");
        const Rational& need_space = p.redspace(static_cast<int>(d.needs[j]));
        if (t <= kThird && need_space > kThird) add("redspace-range", i, "small type needs redspace above 1/3");
        if (is_medium_bound(t)) {
            if (need_space <= kThird) add("redspace-range", i, "medium type needs redspace at most 1/3");
            if (d.leaves[j] > 0 && p.redspace(static_cast<int>(d.leaves[j])) >= kThird)
                add("redspace-range", i, "medium type leaves redspace at least 1/3");
        }
    }
    for (int i = 1; i <= p.N(); ++i) {
        if (p.is_pseudo(i)) continue;
        const Rational& t = p.upper(i);
        if (t > kThird && t < kHalf &&
            std::find(p.redspaces.begin(), p.redspaces.end(), t) == p.redspaces.end())
            add("medium-redspace", i, "medium boundary " + t.str() + " missing from redspaces");
    }
    return out;
}

std::string format_violations(const std::vector<Violation>& v) {
    std::ostringstream out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out << "; ";
        out << v[i].property << " (type " << v[i].type << "): " << v[i].detail;
    }
    return out.str();
}

std::string sha256_hex(const std::string& data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return out.str();
}

std::string params_digest(const ParameterSet& p) { return sha256_hex(save_params(p)); }

}  // namespace harmonic
