#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wsieve/bound_pipeline.hpp"
#include "wsieve/delay_ode.hpp"
#include "wsieve/empirical_search.hpp"
#include "wsieve/errors.hpp"
#include "wsieve/format.hpp"
#include "wsieve/moments.hpp"
#include "wsieve/sieve_weights.hpp"
#include "wsieve/tuple_spec.hpp"

using namespace wsieve;
using nlohmann::json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitResource = 3;

struct Common {
    std::string format = "csv";
    std::string output;
    unsigned threads = 0;
};

// "10,20,40" or "2..60" (inclusive), or a mix of both.
std::vector<int> parse_kappa_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto dots = item.find("..");
        try {
            if (dots == std::string::npos) {
                out.push_back(std::stoi(item));
            } else {
                const int lo = std::stoi(item.substr(0, dots)), hi = std::stoi(item.substr(dots + 2));
                for (int k = lo; k <= hi; ++k) out.push_back(k);
            }
        } catch (const std::logic_error&) {
            throw Error(Errc::ParseError, "bad kappa list entry '" + item + "'");
        }
    }
    return out;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

void emit(const Common& c, const std::string& text) {
    if (c.output.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(c.output);
    if (!f) throw Error(Errc::DomainError, "cannot open output file " + c.output);
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

void add_common(CLI::App* app, Common& c) {
    app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app->add_option("--output,-o", c.output, "Write output to this file instead of stdout");
    app->add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
}

// jfun

struct JfunArgs {
    int kappa = 2;
    double w_max = 0;
    double step = 0.05;
    double tol = 1e-10;
    int degree = 32;
    std::vector<double> at;
};

void run_jfun(const JfunArgs& a, const Common& c) {
    double w_max = a.w_max > 0 ? a.w_max : a.kappa;
    if (a.w_max <= 0)
        for (double w : a.at) w_max = std::min<double>(a.kappa + 2, std::max(w_max, w));
    const auto J = dde::solve_j(a.kappa, w_max, {a.tol, a.degree});
    std::vector<double> grid = a.at;
    if (grid.empty()) {
        if (!(a.step > 0)) throw Error(Errc::DomainError, "--step must be positive");
        const auto n = static_cast<long>(std::floor(w_max / a.step + 1e-9));
        for (long i = 1; i <= n; ++i) grid.push_back(i * a.step);
    }
    if (c.format == "json") {
        json j = json::parse(J.to_json());
        auto& pts = j["grid"] = json::array();
        for (double w : grid)
            pts.push_back({{"w", w}, {"j", dde::eval_j(J, w, 0)}, {"j_prime", dde::eval_j(J, w, 1)}});
        emit(c, j.dump(2));
        return;
    }
    std::string out = "w,j,j_prime,q\n";
    for (double w : grid)
        out += fmt_num(w) + "," + fmt_num(dde::eval_j(J, w, 0)) + "," + fmt_num(dde::eval_j(J, w, 1)) +
               "," + fmt_num(J.q(w)) + "\n";
    emit(c, out);
}

// moments

struct MomentsArgs {
    std::string kappas = "10,20,40,80";
    double u = 0;
    std::string source = "dde";
    bool ratios = false;
};

void run_moments(const MomentsArgs& a, const Common& c) {
    std::vector<moments::MomentReport> rows;
    std::vector<moments::Ratios> rs;
    for (int k : parse_kappa_list(a.kappas)) {
        if (a.source == "saddle") {
            dde::SaddleParams sp{k};
            if (a.u > 0) sp.d = k - 1.0 / 3.0 - a.u;
            rows.push_back(moments::moment_J1(sp, 0));
            rows.push_back(moments::moment_J1(sp, 1));
            rows.push_back(moments::moment_J2(sp));
            continue;
        }
        const double u = a.u > 0 ? a.u : k - 1.0 / 9.0;
        const double cover = std::max({u, 1.0, a.ratios ? k - 1.0 / 9.0 : 0.0});
        const auto J = dde::solve_j(k, std::min<double>(k + 2, cover));
        rows.push_back(moments::moment_J1(J, u, 0));
        rows.push_back(moments::moment_J1(J, u, 1));
        rows.push_back(moments::moment_J2(J, u));
        if (a.ratios) rs.push_back(moments::ratios(J));
    }
    if (c.format == "json") {
        json j;
        auto& arr = j["moments"] = json::array();
        for (const auto& r : rows)
            arr.push_back({{"kappa", r.kappa},
                           {"quantity", r.quantity},
                           {"u", r.u},
                           {"numeric", r.numeric},
                           {"asymptotic", r.asymptotic ? json(*r.asymptotic) : json(nullptr)},
                           {"diff", r.asymptotic ? json(r.difference) : json(nullptr)},
                           {"envelope", r.asymptotic ? json(r.envelope) : json(nullptr)},
                           {"quad_error", r.quad_error}});
        if (a.ratios) {
            auto& ra = j["ratios"] = json::array();
            for (const auto& r : rs)
                ra.push_back({{"kappa", r.kappa},
                              {"r1", r.r1},
                              {"r1_asymptotic", r.r1_asymptotic},
                              {"r2", r.r2},
                              {"r2_asymptotic", r.r2_asymptotic}});
        }
        emit(c, j.dump(2));
        return;
    }
    std::string out = moments::moments_csv(rows);
    if (a.ratios) {
        out += "kappa,r1,r1_asymptotic,r2,r2_asymptotic\n";
        for (const auto& r : rs)
            out += std::to_string(r.kappa) + "," + fmt_num(r.r1) + "," + fmt_num(r.r1_asymptotic) + "," +
                   fmt_num(r.r2) + "," + fmt_num(r.r2_asymptotic) + "\n";
    }
    emit(c, out);
}

// bound

struct BoundArgs {
    std::string kappas = "100";
    double slack = 0;
    bound::ParamOptions params;
    std::string l_scan;
};

void run_bound(const BoundArgs& a, const Common& c) {
    if (!a.l_scan.empty()) {
        std::vector<double> ls;
        for (const auto& s : split_commas(a.l_scan)) ls.push_back(std::stod(s));
        std::string out = "kappa,l,r_numeric,r_continuous\n";
        json arr = json::array();
        for (int k : parse_kappa_list(a.kappas))
            for (const auto& p : bound::l_scan(k, ls, a.params)) {
                out += std::to_string(k) + "," + fmt_num(p.l) + "," + std::to_string(p.r) + "," +
                       fmt_num(p.r_continuous) + "\n";
                arr.push_back({{"kappa", k}, {"l", p.l}, {"r_numeric", p.r}, {"r_continuous", p.r_continuous}});
            }
        emit(c, c.format == "json" ? arr.dump(2) : out);
        return;
    }
    const auto rows = bound::table(parse_kappa_list(a.kappas), a.slack, a.params, c.threads);
    emit(c, c.format == "json" ? bound::table_json(rows) : bound::table_csv(rows));
}

// identity

struct IdentityArgs {
    std::string tuple = "0";
    std::uint64_t x = 100;
    double z = 10, zp = 10, xi = 10;
    double b = 3, y = 3;
    bool exact = false;
    std::string poly = "1";
};

void run_identity(const IdentityArgs& a, const Common& c) {
    const auto L = tuple::load_tuple_spec(a.tuple);
    const sieve::SieveInstance inst(L, a.x);
    const sieve::RichertWeights W(a.b, a.y, a.z);
    sieve::Support S(a.xi, a.zp);
    sieve::Decomposition d;
    if (a.exact) {
        std::vector<mpq_class> coeffs;
        for (const auto& s : split_commas(a.poly)) {
            mpq_class q;
            if (q.set_str(s, 10) != 0) throw Error(Errc::ParseError, "bad rational coefficient '" + s + "'");
            q.canonicalize();
            coeffs.push_back(q);
        }
        const bool constant_one = coeffs.size() == 1 && coeffs[0] == 1;
        auto zeta = constant_one ? std::vector<mpq_class>(S.size(), mpq_class(1))
                                 : sieve::zeta_from_rational_poly(coeffs, S);
        d = sieve::decompose(inst, W, sieve::ExactLambdaSystem::from_zeta(L, S, std::move(zeta)));
    } else {
        std::vector<double> coeffs;
        for (const auto& s : split_commas(a.poly)) coeffs.push_back(std::stod(s));
        const double u = std::log(a.xi) / std::log(a.zp);
        const moments::SievePolynomial P(coeffs, u);
        auto zeta = sieve::zeta_from_poly(P, S);
        d = sieve::decompose(inst, W, sieve::LambdaSystem::from_zeta(L, S, std::move(zeta)));
    }
    const double bound = sieve::error_bound_analytic(L, a.z, a.xi);
    if (c.format == "json") {
        json j{{"lhs", d.lhs},          {"main", d.main},         {"main_relaxed", d.main_relaxed},
               {"error", d.error},      {"residual", d.residual}, {"error_bound", bound},
               {"exact", a.exact}};
        if (d.exact_identity) j["exact_identity"] = *d.exact_identity;
        emit(c, j.dump(2));
        return;
    }
    emit(c, "lhs,main,main_relaxed,error,residual,exact_identity,error_bound\n" + fmt_num(d.lhs) + "," +
                fmt_num(d.main) + "," + fmt_num(d.main_relaxed) + "," + fmt_num(d.error) + "," +
                fmt_num(d.residual) + "," +
                (d.exact_identity ? (*d.exact_identity ? "true" : "false") : "") + "," + fmt_num(bound) +
                "\n");
}

// search

struct SearchArgs {
    std::string tuple = "0,2";
    std::uint64_t x = 100;
    std::optional<int> r;
    bool density = false;
    std::uint64_t segment = 1 << 16;
};

void run_search(const SearchArgs& a, const Common& c) {
    const auto L = tuple::load_tuple_spec(a.tuple);
    search::SearchOptions o;
    o.segment_size = a.segment;
    o.threads = c.threads;
    if (a.density) {
        if (!a.r) throw Error(Errc::DomainError, "--density needs --r");
        const auto d = search::density_report(L, a.x, *a.r, o);
        emit(c, c.format == "json" ? search::density_json(d)
                                   : "x,r,count,comparator,ratio\n" + std::to_string(d.x) + "," +
                                         std::to_string(d.r) + "," + std::to_string(d.count) + "," +
                                         fmt_num(d.comparator) + "," + fmt_num(d.ratio) + "\n");
        return;
    }
    const auto h = search::omega_profile(L, a.x, o);
    if (a.r) {
        const auto n = search::count_at_most(h, *a.r);
        emit(c, c.format == "json" ? json{{"x", a.x}, {"r", *a.r}, {"count", n}}.dump(2) : std::to_string(n));
        return;
    }
    emit(c, c.format == "json" ? search::histogram_json(h) : search::histogram_csv(h));
}

// params

struct ParamsArgs {
    int kappa = 2;
    long r = 0;
    double u = 0, l = 0;
    bound::ParamOptions params;
};

void run_params(const ParamsArgs& a, const Common& c) {
    const double u = a.u > 0 ? a.u : a.kappa - 1.0 / 9.0;
    const double l = a.l > 0 ? a.l : 2.0 * a.kappa;
    const long r = a.r > 0 ? a.r : bound::r_bound_explicit(a.kappa);
    const auto p = bound::choose_params(a.kappa, r, u, l, a.params);
    if (c.format == "json") {
        emit(c, json{{"kappa", p.kappa}, {"r", p.r},         {"u", p.u},         {"l", p.l},
                     {"U", p.U},         {"V", p.V},         {"alpha", p.alpha}, {"delta", p.delta},
                     {"eps", p.eps},     {"b", p.b},         {"exp_y", 1 / p.alpha},
                     {"exp_z", 1 / p.U}, {"exp_zp", 1 / p.V}, {"exp_xi", p.u / p.V}}
                    .dump(2));
        return;
    }
    emit(c, "kappa,r,u,l,U,V,alpha,delta,eps,b\n" + std::to_string(p.kappa) + "," + std::to_string(p.r) +
                "," + fmt_num(p.u) + "," + fmt_num(p.l) + "," + fmt_num(p.U) + "," + fmt_num(p.V) + "," +
                fmt_num(p.alpha) + "," + fmt_num(p.delta) + "," + fmt_num(p.eps) + "," + fmt_num(p.b) + "\n");
}

// tuple

void run_tuple(const std::string& spec, double z, const Common& c) {
    const auto L = tuple::load_tuple_spec(spec);
    const auto adm = tuple::is_admissible(L);
    json j = json::parse(tuple::to_json(L));
    j["kappa"] = L.kappa();
    j["discriminant"] = L.discriminant().get_str();
    j["admissible"] = adm.admissible;
    if (adm.failing_prime) j["failing_prime"] = *adm.failing_prime;
    j["discriminant_primes"] = adm.discriminant_primes;
    j["discriminant_primes_ok"] = adm.discriminant_primes_ok;
    if (adm.admissible && adm.discriminant_primes_ok && z >= 2) {
        j["V"] = tuple::V_product(L, z);
        j["H_residual"] = tuple::H_sum(L, z).residual;
    }
    if (c.format == "json") {
        emit(c, j.dump(2));
        return;
    }
    std::string out = "key,value\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::string v = it->is_string() ? it->get<std::string>() : it->dump();
        if (v.find(',') != std::string::npos) v = "\"" + v + "\"";
        out += it.key() + "," + v + "\n";
    }
    emit(c, out);
}

// calibrate

json calibration_values() {
    json j;
    auto& j1 = j["j1_0_scaled"] = json::object();
    for (int k : {10, 20, 40, 80}) {
        const auto m = moments::moment_J1(k, k - 1.0 / 9.0, 0, moments::Source::dde);
        j1[std::to_string(k)] = k * std::fabs(m.numeric - 0.5);
    }
    {
        const dde::SaddleParams sp{40};
        const auto J = dde::solve_j(40, sp.u());
        const double w_end = std::pow(40.0, 0.6);
        double worst = 0;
        for (int i = 0; i <= 2000; ++i) {
            const double w = w_end * i / 2000;
            const auto s = dde::saddle_j_prime(sp, w);
            worst = std::max(worst, std::fabs(s.value - J.j_prime(sp.u() - w)) / s.envelope);
        }
        j["saddle_ratio_k40"] = worst;
    }
    auto& rn = j["r_numeric"] = json::object();
    const auto rows = bound::table(parse_kappa_list("2..60"), 0, {}, 0);
    double C = 0;
    for (const auto& row : rows) {
        rn[std::to_string(row.kappa)] = row.r_numeric ? json(*row.r_numeric) : json(nullptr);
        if (row.r_numeric && *row.r_numeric > row.r_explicit)
            C = std::max(C, (*row.r_numeric - row.r_explicit) / std::log(row.kappa));
    }
    j["margin_log_coefficient"] = C;
    const auto J4 = dde::solve_j(4, 35.0 / 9.0);
    j["r_continuous_k4_l8"] =
        bound::r_bound_numeric(J4, 8, 35.0 / 9.0, moments::SievePolynomial::constant_one(35.0 / 9.0)).r_continuous;
    return j;
}

bool close_enough(const json& want, const json& got, std::string path, std::ostream& log) {
    if (want.is_object()) {
        bool ok = true;
        for (auto it = want.begin(); it != want.end(); ++it) {
            if (!got.contains(it.key())) {
                log << path << "/" << it.key() << ": missing\n";
                ok = false;
                continue;
            }
            ok = close_enough(*it, got[it.key()], path + "/" + it.key(), log) && ok;
        }
        return ok;
    }
    if (want.is_number_float() || got.is_number_float()) {
        const double w = want.get<double>(), g = got.get<double>();
        if (std::fabs(w - g) <= 1e-7 * std::max(1.0, std::fabs(w))) return true;
        log << path << ": fixture " << fmt_num(w) << " vs computed " << fmt_num(g) << "\n";
        return false;
    }
    if (want != got) {
        log << path << ": fixture " << want.dump() << " vs computed " << got.dump() << "\n";
        return false;
    }
    return true;
}

int run_calibrate(const std::string& dir, bool check) {
    const std::string path = dir + "/calibration.json";
    const json got = calibration_values();
    if (!check) {
        std::ofstream f(path);
        if (!f) throw Error(Errc::DomainError, "cannot write " + path);
        f << got.dump(2) << "\n";
        std::cout << "wrote " << path << "\n";
        return 0;
    }
    std::ifstream f(path);
    if (!f) throw Error(Errc::DomainError, "cannot read " + path);
    json want;
    try {
        want = json::parse(f);
    } catch (const json::exception& e) {
        throw Error(Errc::ParseError, path + ": " + e.what());
    }
    if (!close_enough(want, got, "", std::cerr)) throw Error(Errc::ToleranceNotMet, "calibration drift in " + path);
    std::cout << "calibration fixtures match\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted sieve toolkit: j_kappa, moments, bounds, sieve identity, Omega search"};
    app.require_subcommand(1);

    Common common;
    JfunArgs jf;
    auto* jfun = app.add_subcommand("jfun", "Solve the delay equation for j_kappa and print a grid");
    jfun->add_option("--kappa", jf.kappa, "Dimension kappa")->required()->check(CLI::Range(1, dde::kMaxKappa));
    jfun->add_option("--wmax", jf.w_max, "Solve up to this w (default kappa, or the largest --at)");
    jfun->add_option("--step", jf.step, "Grid spacing")->capture_default_str();
    jfun->add_option("--at", jf.at, "Evaluate at these w instead of a grid")->delimiter(',');
    jfun->add_option("--tol", jf.tol, "Relative tolerance")->capture_default_str();
    jfun->add_option("--degree", jf.degree, "Chebyshev degree per piece")->capture_default_str();
    add_common(jfun, common);

    MomentsArgs mo;
    auto* mom = app.add_subcommand("moments", "J1(0), J1(1), J2(0) and their ratios");
    mom->add_option("--kappa", mo.kappas, "Kappa list, e.g. 10,20,40 or 2..10")->capture_default_str();
    mom->add_option("--u", mo.u, "Upper limit u (default kappa - 1/9)");
    mom->add_option("--source", mo.source, "j' from the delay equation or the saddle-point formula")
        ->check(CLI::IsMember({"dde", "saddle"}))
        ->capture_default_str();
    mom->add_flag("--ratios", mo.ratios, "Also print J1(1)/J1(0) and J2(0)/J1(0)");
    add_common(mom, common);

    BoundArgs bo;
    auto* bnd = app.add_subcommand("bound", "Explicit and numeric r_kappa table (u = kappa - 1/9, l = 2 kappa, P = 1)");
    bnd->add_option("--kappa", bo.kappas, "Kappa list, e.g. 100 or 2..60")->capture_default_str();
    bnd->add_option("--slack", bo.slack, "Coefficient of the log(kappa) term")->capture_default_str();
    bnd->add_option("--delta", bo.params.delta, "Slack added to U")->capture_default_str();
    bnd->add_option("--eps", bo.params.eps, "Slack subtracted from b")->capture_default_str();
    bnd->add_option("--l-scan", bo.l_scan, "Diagnostic: numeric r for these l values");
    add_common(bnd, common);

    IdentityArgs id;
    auto* idn = app.add_subcommand("identity", "Check the sieve identity lhs = x S + E on a small instance");
    idn->add_option("--tuple", id.tuple, "Tuple: shifts '0,2' or JSON / file with {\"forms\": [[a,b],...]}")
        ->capture_default_str();
    idn->add_option("--x", id.x, "n runs over 1..x")->capture_default_str();
    idn->add_option("--z", id.z, "Richert weights on primes below z")->capture_default_str();
    idn->add_option("--zp", id.zp, "Lambda support on primes below z'")->capture_default_str();
    idn->add_option("--xi", id.xi, "Lambda support below xi")->capture_default_str();
    idn->add_option("--b", id.b, "Weight b")->capture_default_str();
    idn->add_option("--y", id.y, "Weights are -b below y")->capture_default_str();
    idn->add_option("--poly", id.poly, "Coefficients of P (rationals like 1/2 with --exact)")->capture_default_str();
    idn->add_flag("--exact", id.exact, "Exact rational arithmetic");
    add_common(idn, common);

    SearchArgs se;
    auto* sea = app.add_subcommand("search", "Histogram of Omega(L(n)) over 1 <= n <= x");
    sea->add_option("--tuple", se.tuple, "Tuple specification")->capture_default_str();
    sea->add_option("--x", se.x, "Upper limit")->capture_default_str();
    sea->add_option("--r", se.r, "Print the count with Omega <= r");
    sea->add_flag("--density", se.density, "Compare the count with x / log^kappa x");
    sea->add_option("--segment", se.segment, "Segment length")->capture_default_str()->check(CLI::PositiveNumber);
    add_common(sea, common);

    ParamsArgs pa;
    auto* par = app.add_subcommand("params", "Echo the sieve parameters for (kappa, r)");
    par->add_option("--kappa", pa.kappa, "Dimension kappa")->required();
    par->add_option("--r", pa.r, "Candidate r (default: explicit bound)");
    par->add_option("--u", pa.u, "u (default kappa - 1/9)");
    par->add_option("--l", pa.l, "l (default 2 kappa)");
    par->add_option("--delta", pa.params.delta, "Slack added to U")->capture_default_str();
    par->add_option("--eps", pa.params.eps, "Slack subtracted from b")->capture_default_str();
    par->add_option("--alpha", pa.params.alpha, "y = x^(1/alpha)")->capture_default_str();
    add_common(par, common);

    std::string tuple_spec;
    double tuple_z = 100;
    auto* tup = app.add_subcommand("tuple", "Admissibility, discriminant and V(z) of a tuple");
    tup->add_option("--tuple", tuple_spec, "Tuple specification")->required();
    tup->add_option("--z", tuple_z, "z for V(z) and the H(z) residual")->capture_default_str();
    add_common(tup, common);

    std::string fixtures_dir;
    bool check = false;
    auto* cal = app.add_subcommand("calibrate", "Emit or check calibration fixtures");
    cal->add_option("--fixtures", fixtures_dir, "Fixture directory")->required();
    cal->add_flag("--check", check, "Compare against the stored fixtures instead of writing");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*jfun) run_jfun(jf, common);
        else if (*mom) run_moments(mo, common);
        else if (*bnd) run_bound(bo, common);
        else if (*idn) run_identity(id, common);
        else if (*sea) run_search(se, common);
        else if (*par) run_params(pa, common);
        else if (*tup) run_tuple(tuple_spec, tuple_z, common);
        else if (*cal) return run_calibrate(fixtures_dir, check);
    } catch (const Error& e) {
        std::cerr << "wsieve: " << e.what() << "\n";
        return is_resource_error(e.code()) ? kExitResource : kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "wsieve: invalid number: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "wsieve: number out of range: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
