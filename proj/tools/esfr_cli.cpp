// esfr: command-line front end for the ESFR dispersion-dissipation library.
//
// Exit codes: 0 success, 1 computation failure, 2 usage error,
// 3 internal identity check failed, 4 precondition violated.

#include "esfr/esfr.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

namespace {

using namespace esfr;
using json = nlohmann::ordered_json;

enum ExitCode : int { kOk = 0, kComputation = 1, kUsage = 2, kIdentity = 3, kPrecondition = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IdentityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    unsigned p = 2;
    std::string c = "0";
    long precision = kDefaultPrecision;
    std::string theta_min = "1e-6";
    std::string theta_max = "1";
    std::size_t points = 40;
    std::string dtheta = "1e-3";
    std::string c_min = "1e-4";
    std::string c_max = "1e4";
    std::size_t c_points = 40;
    std::string out;
    std::string format;
    unsigned jobs = 1;
    unsigned elements = 16;
    unsigned mode = 2;
    std::string t_final = "1";
    std::string dt;
    std::string length;
    std::string hr_file;
    std::string slope_theta = "1e-5";
    std::string preset;
};

using Config = std::vector<std::pair<std::string, std::string>>;

Rational exact(const std::string& text, const std::string& what)
{
    try {
        return parse_rational(text);
    } catch (const std::invalid_argument&) {
        throw UsageError("--" + what + ": '" + text + "' is not a decimal or a/b rational");
    }
}

Rational resolve_c(const Options& o)
{
    if (o.c == "csd") return special_c(o.p).c_sd;
    if (o.c == "chu") return special_c(o.p).c_hu;
    if (o.c == "cminus") return special_c(o.p).c_minus;
    return exact(o.c, "c");
}

BigReal real_arg(const std::string& text, const std::string& what, Bits bits)
{
    return to_big(exact(text, what), bits);
}

void check_common(const Options& o)
{
    if (o.p < 1) throw UsageError("--p must be >= 1");
    if (o.precision < kMinPrecision) throw UsageError("--precision must be at least " + std::to_string(kMinPrecision));
    if (o.jobs < 1) throw UsageError("--jobs must be >= 1");
}

std::string format_or(const Options& o, const std::string& fallback) { return o.format.empty() ? fallback : o.format; }

/// Writes to --out when given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void write_header(std::ostream& os, const Config& config)
{
    for (const auto& [key, value] : config) os << "# " << key << " = " << value << '\n';
}

json config_json(const Config& config)
{
    json j = json::object();
    for (const auto& [key, value] : config) j[key] = value;
    return j;
}

json rationals(const std::vector<Rational>& v) { return to_strings(v); }

void warn(const std::vector<std::string>& warnings)
{
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

Config base_config(const std::string& command, const Options& o)
{
    return {{"command", command}, {"p", std::to_string(o.p)}, {"precision", std::to_string(o.precision)}};
}

// ---- ops ------------------------------------------------------------------

int cmd_ops(const Options& o)
{
    check_common(o);
    const Rational c = resolve_c(o);
    const FrOperators ops = build_esfr(o.p, c);
    warn(ops.warnings);

    const std::size_t n = ops.size();
    for (std::size_t j = 0; j < n; ++j) {
        const Rational mk = ops.M[j] + ops.K[j];
        if (mk * ops.hR[j] != ops.r[j] || mk * ops.hL[j] != -ops.l[j])
            throw IdentityError("(M+K) h != trace vector at index " + std::to_string(j));
    }
    RationalMatrix dp = ops.D;
    for (unsigned k = 0; k < o.p; ++k) dp = dp * ops.D;
    if (!dp.is_zero()) throw IdentityError("D^{p+1} is not zero");

    Config config = base_config("ops", o);
    config.emplace_back("c", to_string(c));
    std::vector<std::vector<std::string>> d_rows;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::string> row;
        for (std::size_t k = 0; k < n; ++k) row.push_back(to_string(ops.D(j, k)));
        d_rows.push_back(row);
    }
    const SpecialC special = special_c(o.p);

    Sink sink(o.out);
    auto& os = sink.stream();
    const std::string format = format_or(o, "json");
    if (format == "json") {
        json j;
        j["config"] = config_json(config);
        j["p"] = o.p;
        j["c"] = to_string(c);
        j["kind"] = to_string(ops.kind);
        j["M"] = rationals(ops.M);
        j["D"] = d_rows;
        j["K"] = rationals(ops.K);
        j["l"] = rationals(ops.l);
        j["r"] = rationals(ops.r);
        j["q"] = rationals(ops.q);
        j["fc"] = to_string(ops.fc);
        j["hL"] = rationals(ops.hL);
        j["hR"] = rationals(ops.hR);
        j["kbar"] = ops.kbar ? json(*ops.kbar) : json(nullptr);
        j["c_minus"] = to_string(special.c_minus);
        j["c_sd"] = to_string(special.c_sd);
        j["c_hu"] = to_string(special.c_hu);
        j["warnings"] = ops.warnings;
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        os << "name,index,value\n";
        auto vec = [&](const char* name, const std::vector<Rational>& v) {
            for (std::size_t j = 0; j < v.size(); ++j) os << name << ',' << j << ',' << to_string(v[j]) << '\n';
        };
        vec("M", ops.M);
        vec("K", ops.K);
        vec("l", ops.l);
        vec("r", ops.r);
        vec("q", ops.q);
        vec("hL", ops.hL);
        vec("hR", ops.hR);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                os << "D," << j << ' ' << k << ',' << d_rows[j][k] << '\n';
        os << "fc,0," << to_string(ops.fc) << '\n';
    }
    return kOk;
}

// ---- sweep-et ---------------------------------------------------------------

int run_sweep(const Options& o, const Rational& c, const std::string& command)
{
    check_common(o);
    if (o.points < 2) throw UsageError("--points must be >= 2");
    const Bits bits = o.precision;
    const BigReal lo = real_arg(o.theta_min, "theta-min", bits);
    const BigReal hi = real_arg(o.theta_max, "theta-max", bits);
    if (!(lo.sign() > 0) || !(lo < hi)) throw UsageError("need 0 < --theta-min < --theta-max");

    const FrOperators ops = build_esfr(o.p, c);
    warn(ops.warnings);
    const Lambda1 l1 = lambda1_at_zero(ops, bits);
    warn(l1.warnings);
    const auto records = sweep(ops, lo, hi, o.points, bits, o.jobs);
    for (const auto& r : records)
        if (!(r.E_T > r.theta * ldexp(BigReal(1L, bits), -bits + 32)))
            throw PrecisionError("E_T at theta = " + r.theta.to_string(6) + " is at the rounding level of " +
                                 std::to_string(bits) + "-bit arithmetic; rerun with a larger --precision");

    Config config = base_config(command, o);
    config.emplace_back("c", to_string(c));
    config.emplace_back("theta_min", o.theta_min);
    config.emplace_back("theta_max", o.theta_max);
    config.emplace_back("points", std::to_string(o.points));
    config.emplace_back("lambda1_at_zero", l1.value.real().to_string(20) + " " + l1.value.imag().to_string(20) + "i");

    Sink sink(o.out);
    auto& os = sink.stream();
    if (format_or(o, "csv") == "json") {
        json j;
        j["config"] = config_json(config);
        json rows = json::array();
        for (const auto& r : records)
            rows.push_back({{"theta", r.theta.to_string()},
                            {"ET", r.E_T.to_string()},
                            {"omega_re", r.omega_h.real().to_string()},
                            {"omega_im", r.omega_h.imag().to_string()},
                            {"lambda1_re", r.lambda1.real().to_string()},
                            {"lambda1_im", r.lambda1.imag().to_string()},
                            {"gap", r.gap.to_string()},
                            {"slope", r.local_slope ? json(r.local_slope->to_string()) : json(nullptr)}});
        j["records"] = rows;
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        write_sweep_csv(os, records);
    }
    return kOk;
}

// ---- at-vs-c ------------------------------------------------------------------

/// Log-spaced c values, each rounded to 20 significant digits and read back exactly.
std::vector<Rational> c_grid(const Options& o)
{
    if (o.c_points < 1) throw UsageError("--c-points must be >= 1 (empty c grid)");
    const Rational lo = exact(o.c_min, "c-min");
    const Rational hi = exact(o.c_max, "c-max");
    if (!(lo > 0) || lo > hi) throw UsageError("need 0 < --c-min <= --c-max");
    return log_rational_grid(lo, hi, o.c_points);
}

void write_at_rows(std::ostream& os, const std::vector<AtSample>& rows, const Config& config, const std::string& format)
{
    if (format == "json") {
        json j;
        j["config"] = config_json(config);
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"c", to_string(r.c)},
                           {"AT_numeric", r.numeric.to_string()},
                           {"AT_semianalytic", r.semianalytic.to_string()}});
        j["records"] = arr;
        os << j.dump(2) << '\n';
        return;
    }
    write_header(os, config);
    os << "c,AT_numeric,AT_semianalytic\n";
    for (const auto& r : rows)
        os << to_big(r.c, r.numeric.precision()).to_string(20) << ',' << r.numeric << ',' << r.semianalytic << '\n';
}

int cmd_at_vs_c(const Options& o, const std::string& command = "at-vs-c")
{
    check_common(o);
    const Bits bits = o.precision;
    const BigReal dtheta = real_arg(o.dtheta, "dtheta", bits);
    if (!(dtheta.sign() > 0)) throw UsageError("--dtheta must be positive");
    const auto rows = at_vs_c(o.p, dtheta, c_grid(o), bits, o.jobs);
    for (const auto& r : rows) warn(r.warnings);

    Config config = base_config(command, o);
    config.emplace_back("dtheta", o.dtheta);
    config.emplace_back("c_min", o.c_min);
    config.emplace_back("c_max", o.c_max);
    config.emplace_back("c_points", std::to_string(o.c_points));
    Sink sink(o.out);
    write_at_rows(sink.stream(), rows, config, format_or(o, "csv"));
    return kOk;
}

// ---- pade-check / symfr -------------------------------------------------------

std::vector<Rational> read_hr_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read hR file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    std::vector<Rational> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw UsageError("hR file: " + std::string(e.what()));
        }
        if (!j.contains("hR") || !j["hR"].is_array()) throw UsageError("hR file: expected {\"hR\": [...]}");
        for (const auto& v : j["hR"]) {
            if (v.is_string())
                out.push_back(exact(v.get<std::string>(), "hr-file"));
            else if (v.is_number_integer())
                out.push_back(Rational(v.get<long>()));
            else
                throw UsageError("hR file: entries must be strings such as \"3/4\" or integers");
        }
    } else {
        std::istringstream words(text);
        std::string w;
        while (words >> w) out.push_back(exact(w, "hr-file"));
    }
    if (out.size() < 2) throw UsageError("hR file must list at least two coefficients");
    return out;
}

struct OrderReport {
    ResidualSeries residual;
    std::optional<unsigned> expected;  ///< p+1+kbar, or 2p+2 when K = 0
    bool pade_match = false;
};

OrderReport order_report(const FrOperators& ops)
{
    const unsigned p = ops.p;
    const ApproximantPair pair = build_pq(ops);
    OrderReport rep{residual_series(pair, 2 * p + 4), std::nullopt, false};
    rep.expected = ops.kbar ? p + 1 + *ops.kbar : 2 * p + 2;
    rep.pade_match = pair.Q.coeff(0) != 0 && matches_exponential(pair, 2 * p + 1);
    return rep;
}

json residual_json(const OrderReport& rep)
{
    json arr = json::array();
    for (const auto& v : rep.residual.series.coeffs()) arr.push_back(to_string(v));
    return arr;
}

int cmd_pade_check(const Options& o)
{
    check_common(o);
    FrOperators ops;
    Config config;
    if (!o.hr_file.empty()) {
        const auto hr = read_hr_file(o.hr_file);
        ops = build_symmetric_fr(static_cast<unsigned>(hr.size() - 1), hr);
        config = {{"command", "pade-check"}, {"p", std::to_string(ops.p)}, {"hr_file", o.hr_file}};
    } else {
        ops = build_esfr(o.p, resolve_c(o));
        config = base_config("pade-check", o);
        config.emplace_back("c", to_string(ops.c));
    }
    warn(ops.warnings);
    const unsigned p = ops.p;
    const OrderReport rep = order_report(ops);

    std::vector<std::string> failures;
    if (rep.residual.first_nonzero != rep.expected)
        failures.push_back("first nonzero residual order differs from the expected " + std::to_string(*rep.expected));
    std::optional<ErrorEstimate> b;
    if (ops.kind == SchemeKind::esfr) {
        b = b_coefficients(p, ops.c);
        const Rational scale = pow2(-static_cast<long>(p + 1));
        if (rep.residual.series[2 * p + 1] != b->b1 * scale) failures.push_back("z^{2p+1} coefficient != b1/2^{p+1}");
        if (rep.residual.series[2 * p + 2] != b->b2 * scale) failures.push_back("z^{2p+2} coefficient != b2/2^{p+1}");
    }

    const std::string order = rep.residual.first_nonzero ? std::to_string(*rep.residual.first_nonzero) : "none";
    Sink sink(o.out);
    auto& os = sink.stream();
    if (format_or(o, "csv") == "json") {
        json j;
        j["config"] = config_json(config);
        j["residual"] = residual_json(rep);
        j["first_nonzero"] = order;
        j["expected_first_nonzero"] = *rep.expected;
        j["pade_match"] = rep.pade_match;
        if (ops.kbar) j["kbar"] = *ops.kbar;
        if (ops.kind != SchemeKind::esfr && ops.kbar) j["claimed_ET_order_p_kbar_2"] = p + *ops.kbar + 2;
        if (b) {
            j["b1"] = to_string(b->b1);
            j["b2"] = to_string(b->b2);
        }
        j["identity_failures"] = failures;
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        os << "# first nonzero residual order: " << order << '\n';
        os << "# Pade match: " << (rep.pade_match ? "yes" : "no") << '\n';
        if (ops.kind != SchemeKind::esfr && ops.kbar)
            os << "# kbar = " << *ops.kbar << "; p+kbar+2 = " << p + *ops.kbar + 2 << " vs residual order " << order
               << '\n';
        if (b) os << "# b1 = " << to_string(b->b1) << ", b2 = " << to_string(b->b2) << '\n';
        os << "k,coefficient\n";
        const auto& coeffs = rep.residual.series.coeffs();
        for (std::size_t k = 0; k < coeffs.size(); ++k) os << k << ',' << to_string(coeffs[k]) << '\n';
    }
    if (!failures.empty()) throw IdentityError(failures.front());
    return kOk;
}

/// log2 E_T(theta) - log2 E_T(theta/2): the local E_T slope.
BigReal local_et_slope(const FrOperators& ops, const BigReal& theta, Bits bits)
{
    return measure_AT(ops, theta, bits) + BigReal(1L, bits);
}

int cmd_symfr(const Options& o)
{
    if (o.hr_file.empty()) throw UsageError("symfr needs --hr-file");
    if (o.precision < kMinPrecision) throw UsageError("--precision must be at least " + std::to_string(kMinPrecision));
    const Bits bits = o.precision;
    const auto hr = read_hr_file(o.hr_file);
    const FrOperators ops = build_symmetric_fr(static_cast<unsigned>(hr.size() - 1), hr);
    const unsigned p = ops.p;
    const OrderReport rep = order_report(ops);
    const std::string& theta_text = o.slope_theta;
    const BigReal theta = real_arg(theta_text, "theta", bits);
    if (!(theta.sign() > 0)) throw UsageError("--theta must be positive");
    const BigReal slope = local_et_slope(ops, theta, bits);
    const Lambda1 l1 = lambda1_at_zero(ops, bits);
    warn(l1.warnings);

    Config config = {{"command", "symfr"}, {"p", std::to_string(p)}, {"precision", std::to_string(bits)},
                     {"hr_file", o.hr_file}, {"theta", theta_text}};
    const std::string order = rep.residual.first_nonzero ? std::to_string(*rep.residual.first_nonzero) : "none";
    const std::string claim = ops.kbar ? std::to_string(p + *ops.kbar + 2) : "n/a";
    const bool claim_holds = ops.kbar && rep.residual.first_nonzero && *rep.residual.first_nonzero == p + *ops.kbar + 2;

    Sink sink(o.out);
    auto& os = sink.stream();
    if (format_or(o, "csv") == "json") {
        json j;
        j["config"] = config_json(config);
        j["K"] = rationals(ops.K);
        j["kbar"] = ops.kbar ? json(*ops.kbar) : json(nullptr);
        j["c_equivalent"] = to_string(ops.c);
        j["residual_first_nonzero"] = order;
        j["measured_ET_slope"] = slope.to_string(12);
        j["claimed_ET_order_p_kbar_2"] = claim;
        j["claim_matches_residual"] = claim_holds;
        j["residual"] = residual_json(rep);
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        os << "quantity,value\n";
        for (std::size_t j = 0; j < ops.K.size(); ++j) os << "K" << j << ',' << to_string(ops.K[j]) << '\n';
        os << "kbar," << (ops.kbar ? std::to_string(*ops.kbar) : "none") << '\n';
        os << "residual_first_nonzero," << order << '\n';
        os << "measured_ET_slope," << slope.to_string(12) << '\n';
        os << "claimed_ET_order_p_kbar_2," << claim << '\n';
        os << "claim_matches_residual," << (claim_holds ? "yes" : "no") << '\n';
    }
    return kOk;
}

// ---- charpoly -------------------------------------------------------------------

int cmd_charpoly(const Options& o)
{
    check_common(o);
    const Bits bits = o.precision;
    const Rational c = resolve_c(o);
    const FrOperators ops = build_esfr(o.p, c);
    warn(ops.warnings);
    const CharPoly cp = char_poly(ops);
    const auto roots = char_poly_roots(cp, bits);
    const auto eig = eigenvalues(von_neumann_H(ops, BigReal(bits), bits)).eigenvalues;
    const NullMultiplicity null = null_multiplicity(ops, bits);
    warn(null.warnings);

    BigReal distance(bits);
    for (const auto& r : roots) {
        BigReal best = abs(r - eig[0]);
        for (const auto& v : eig) best = min(best, abs(r - v));
        distance = max(distance, best);
    }
    const Rational c1 = sign_power(o.p) * Rational(2 * o.p + 1) * legendre_derivative_at(o.p, o.p - 1, 1) * ops.fc / 2;
    std::vector<std::string> failures;
    if (cp.coeffs[0] != 0) failures.push_back("c_{0,p} is not zero");
    if (cp.coeffs[1] != c1) failures.push_back("c_{1,p} differs from its closed form");
    if (distance > ldexp(BigReal(1L, bits), -bits * 3 / 8))
        failures.push_back("characteristic roots differ from H(0) eigenvalues by " + distance.to_string(4));
    if (null.count != 1) failures.push_back("null multiplicity is " + std::to_string(null.count));

    Config config = base_config("charpoly", o);
    config.emplace_back("c", to_string(c));
    Sink sink(o.out);
    auto& os = sink.stream();
    if (format_or(o, "csv") == "json") {
        json j;
        j["config"] = config_json(config);
        j["coefficients"] = rationals(cp.coeffs);
        j["leading"] = to_string(cp.leading);
        json rs = json::array();
        for (const auto& r : roots) rs.push_back({r.real().to_string(), r.imag().to_string()});
        j["roots"] = rs;
        j["root_eigenvalue_distance"] = distance.to_string(6);
        j["null_multiplicity"] = null.count;
        j["identity_failures"] = failures;
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        os << "# null multiplicity: " << null.count << '\n';
        os << "# max root-eigenvalue distance: " << distance.to_string(6) << '\n';
        os << "k,coefficient\n";
        for (std::size_t k = 0; k < cp.coeffs.size(); ++k) os << k << ',' << to_string(cp.coeffs[k]) << '\n';
        os << o.p + 1 << ',' << to_string(cp.leading) << '\n';
        os << "root_re,root_im\n";
        for (const auto& r : roots) os << r.real() << ',' << r.imag() << '\n';
    }
    if (!failures.empty()) throw IdentityError(failures.front());
    return kOk;
}

// ---- simulate -------------------------------------------------------------------

int cmd_simulate(const Options& o)
{
    check_common(o);
    if (o.elements < 2) throw UsageError("--elements must be >= 2");
    if (o.mode < 1 || 2 * o.mode >= o.elements) throw UsageError("--mode must satisfy 1 <= mode < elements/2");
    const Bits bits = o.precision;
    const Rational c = resolve_c(o);
    const FrOperators ops = build_esfr(o.p, c);
    warn(ops.warnings);
    const Rational length = o.length.empty() ? Rational(o.elements) : exact(o.length, "length");
    if (!(length > 0)) throw UsageError("--length must be positive");
    const Mesh mesh(o.elements, length);
    const Rational dt_q = o.dt.empty() ? default_time_step(ops, mesh) : exact(o.dt, "dt");
    const Rational t_final = exact(o.t_final, "t-final");
    if (!(dt_q > 0) || !(t_final > 0)) throw UsageError("--dt and --t-final must be positive");
    const BigReal theta = BigReal::pi(bits) * 2L * static_cast<long>(o.mode) / static_cast<long>(o.elements);

    const BlochResult res = bloch_experiment(ops, mesh, theta, to_big(t_final, bits), to_big(dt_q, bits), bits);
    warn(res.warnings);
    const BigReal rel_err = abs(res.measured_omega - res.predicted_omega) / abs(res.predicted_omega);

    Config config = base_config("simulate", o);
    config.emplace_back("c", to_string(c));
    config.emplace_back("elements", std::to_string(o.elements));
    config.emplace_back("length", to_string(length));
    config.emplace_back("mode", std::to_string(o.mode));
    config.emplace_back("theta", theta.to_string(20));
    config.emplace_back("t_final", to_string(t_final));
    config.emplace_back("dt", to_string(dt_q));
    config.emplace_back("measured_omega", res.measured_omega.real().to_string(20) + " " +
                                              res.measured_omega.imag().to_string(20) + "i");
    config.emplace_back("predicted_omega", res.predicted_omega.real().to_string(20) + " " +
                                               res.predicted_omega.imag().to_string(20) + "i");
    config.emplace_back("relative_error", rel_err.to_string(6));
    config.emplace_back("contamination", res.contamination.to_string(6));

    Sink sink(o.out);
    auto& os = sink.stream();
    if (format_or(o, "csv") == "json") {
        json j;
        j["config"] = config_json(config);
        json rows = json::array();
        for (const auto& s : res.history)
            rows.push_back({s.t.to_string(), s.amplitude.to_string(), s.phase.to_string(), s.energy.to_string()});
        j["columns"] = {"t", "amplitude", "phase", "energy"};
        j["history"] = rows;
        os << j.dump(2) << '\n';
    } else {
        write_header(os, config);
        os << "t,amplitude,phase,energy\n";
        for (const auto& s : res.history) os << s.t << ',' << s.amplitude << ',' << s.phase << ',' << s.energy << '\n';
    }
    return kOk;
}

// ---- preset -----------------------------------------------------------------------

int cmd_preset(Options o)
{
    if (o.preset == "fig41") {
        o.p = 2;
        o.c = "100";
        o.theta_min = "1e-7";
        o.theta_max = "1";
        o.points = 160;
        o.precision = std::max(o.precision, 256L);
        if (o.out.empty()) o.out = "fig41.csv";
        return run_sweep(o, Rational(100), "preset fig41");
    }
    if (o.preset == "fig42") {
        const std::string prefix = o.out.empty() ? "fig42" : o.out;
        o.dtheta = "1e-3";
        o.c_min = "1e-4";
        o.c_max = "1e4";
        o.c_points = 40;
        for (unsigned p : {2u, 3u}) {
            o.p = p;
            o.out = prefix + "_p" + std::to_string(p) + ".csv";
            o.format = "csv";
            cmd_at_vs_c(o, "preset fig42");
        }
        return kOk;
    }
    throw UsageError("unknown preset '" + o.preset + "' (expected fig41 or fig42)");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact ESFR operators and arbitrary-precision dispersion-dissipation analysis"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--p", o.p, "polynomial degree")->capture_default_str();
        sub->add_option("--c", o.c, "ESFR parameter: decimal, a/b, or csd|chu|cminus")->capture_default_str();
        sub->add_option("--precision", o.precision, "working precision in bits")->capture_default_str();
        sub->add_option("--out", o.out, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--jobs", o.jobs, "worker threads for grid points")->capture_default_str();
    };

    auto* ops = app.add_subcommand("ops", "dump the exact operator bundle");
    add_common(ops);

    auto* sweep_et = app.add_subcommand("sweep-et", "E_T, lambda1 and local slopes over a log theta grid");
    add_common(sweep_et);
    sweep_et->add_option("--theta-min", o.theta_min, "smallest theta")->capture_default_str();
    sweep_et->add_option("--theta-max", o.theta_max, "largest theta")->capture_default_str();
    sweep_et->add_option("--points", o.points, "log-spaced theta points")->capture_default_str();

    auto* at = app.add_subcommand("at-vs-c", "numeric and semi-analytic A_T over a log c grid");
    add_common(at);
    at->add_option("--dtheta", o.dtheta, "theta step used for A_T")->capture_default_str();
    at->add_option("--c-min", o.c_min, "smallest c")->capture_default_str();
    at->add_option("--c-max", o.c_max, "largest c")->capture_default_str();
    at->add_option("--c-points", o.c_points, "log-spaced c points")->capture_default_str();

    auto* pade = app.add_subcommand("pade-check", "exact residual series of the approximant pair");
    add_common(pade);
    pade->add_option("--hr-file", o.hr_file, "symmetric-FR hR coefficients instead of --p/--c");

    auto* charpoly = app.add_subcommand("charpoly", "characteristic polynomial of H(0) and its roots");
    add_common(charpoly);

    auto* simulate = app.add_subcommand("simulate", "RK4 Bloch-wave experiment on a periodic mesh");
    add_common(simulate);
    simulate->add_option("--elements", o.elements, "number of periodic elements")->capture_default_str();
    simulate->add_option("--mode", o.mode, "Bloch mode index m, theta = 2 pi m / elements")->capture_default_str();
    simulate->add_option("--t-final", o.t_final, "final time")->capture_default_str();
    simulate->add_option("--dt", o.dt, "time step (default 0.05 h / (2p+1))");
    simulate->add_option("--length", o.length, "domain length (default: elements, so h = 1)");

    auto* symfr = app.add_subcommand("symfr", "order report for a symmetric FR scheme given by hR");
    add_common(symfr);
    symfr->add_option("--hr-file", o.hr_file, "JSON {\"hR\": [...]} or whitespace-separated rationals")->required();
    symfr->add_option("--theta", o.slope_theta, "theta at which the local E_T slope is measured")->capture_default_str();

    auto* preset = app.add_subcommand("preset", "named figure runs: fig41 or fig42");
    add_common(preset);
    preset->add_option("name", o.preset, "fig41 or fig42")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*ops) return cmd_ops(o);
        if (*sweep_et) return run_sweep(o, (check_common(o), resolve_c(o)), "sweep-et");
        if (*at) return cmd_at_vs_c(o);
        if (*pade) return cmd_pade_check(o);
        if (*charpoly) return cmd_charpoly(o);
        if (*simulate) return cmd_simulate(o);
        if (*symfr) return cmd_symfr(o);
        if (*preset) return cmd_preset(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IdentityError& e) {
        std::cerr << "identity check failed: " << e.what() << '\n';
        return kIdentity;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition violated: " << e.what() << '\n';
        return kPrecondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kComputation;
    }
    return kUsage;
}
