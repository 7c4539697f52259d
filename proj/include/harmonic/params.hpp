#pragma once

#include "harmonic/rational.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace harmonic {

enum class Mode { Super, Extreme };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GeneratorConfig {
    Rational c;
    Rational tN;
    Rational gamma;
    Rational gamma_start;
    Rational tsmall;
    // (size lower bound, redfrac) pairs
    std::vector<std::pair<Rational, Rational>> seeds;
    // Added to every redfrac produced by the small-type adjustment and the
    // skip phase. Zero reproduces the plain formula.
    Rational adjust_margin;
    // true: the adjustment overwrites the seeded value whenever it is positive.
    // false: keep the larger of the two.
    bool adjust_overwrite = false;
    // Add (1 - x)/(3i), i = 1..4, for x in {tsmall, gamma_start}.
    bool third_seeds = true;
};

struct DerivedTables {
    std::vector<long> bluefit, redfit, needs, leaves;  // 0-based by type index - 1
    bool operator==(const DerivedTables&) const = default;
};

// Types are 1-based in the public API: type i has interval (lower(i), upper(i)].
// In extreme mode row 2 may be the placeholder "1 - t(r)"; it is never used
// for classification.
struct ParameterSet {
    Mode mode = Mode::Extreme;
    std::vector<Rational> t;        // t_1 = 1 > t_2 > ... > t_N
    std::vector<bool> pseudo;       // placeholder rows
    std::vector<Rational> redfrac;
    std::vector<Rational> redspaces;  // ascending
    Rational eps;                   // sand expansion parameter (= t_N)
    Rational c;
    GeneratorConfig cfg;
    std::optional<DerivedTables> explicit_tables;
    int listed_rows = 0;            // rows as given in the source file

    int N() const { return static_cast<int>(t.size()); }
    int K() const { return static_cast<int>(redspaces.size()); }
    const Rational& upper(int i) const { return t.at(static_cast<size_t>(i - 1)); }
    Rational lower(int i) const;
    const Rational& alpha(int i) const { return redfrac.at(static_cast<size_t>(i - 1)); }
    bool is_pseudo(int i) const { return pseudo.at(static_cast<size_t>(i - 1)); }
    const Rational& redspace(int k) const { return redspaces.at(static_cast<size_t>(k - 1)); }
    // Largest k with redspace_k <= 1/3 (0 if none).
    int last_small_class() const;
};

// Size categories by upper boundary.
bool is_large_bound(const Rational& t);   // t > 1/2
bool is_medium_bound(const Rational& t);  // 1/3 < t <= 1/2

ParameterSet load_params(const std::string& text);
ParameterSet load_params_file(const std::string& path);
std::string save_params(const ParameterSet& p);
GeneratorConfig load_config(const std::string& text);

DerivedTables derive_tables(const ParameterSet& p);
// Explicit tables if present, otherwise derived.
DerivedTables tables_of(const ParameterSet& p);

long superharmonic_redfit(const Rational& t, const Rational& redfrac, const Rational& redspace_K);

struct Violation {
    std::string property;
    int type = 0;
    std::string detail;
    bool fatal = true;
};
std::vector<Violation> validate(const ParameterSet& p, const DerivedTables& d);
std::string format_violations(const std::vector<Violation>& v);

// Generator pieces.
Rational medium_root(const Rational& c, const Rational& eps);
Rational medium_redfrac(const Rational& c, const Rational& eps, const Rational& lower);
ParameterSet generate_sizes(const GeneratorConfig& cfg);
std::vector<Rational> generate_redspaces(const ParameterSet& p);
std::vector<Rational> super_redspaces(const ParameterSet& p);
ParameterSet adjust_redfrac(const ParameterSet& p);

std::string params_digest(const ParameterSet& p);
std::string sha256_hex(const std::string& data);

}  // namespace harmonic
